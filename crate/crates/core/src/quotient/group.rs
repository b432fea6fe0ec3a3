use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigInt;

use crate::arith::{mod_inverse_u64, residue_u64};
use crate::matrix::IntMatrix;
use crate::{Error, Result};

/// Default maximum number of enumerated elements.
pub const DEFAULT_CAP: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    /// A subgroup of `GL_n(Z/q)`.
    MatrixModQ { n: usize },
    /// The image of a subgroup of `Γ_n(m)` in `SL_n(Z/q)`, with `m | q`.
    CongruenceQuotient { n: usize, m: u64 },
    /// A subgroup of `(Z/q)^2 ⋊ SL_2(Z/q)`, stored as 3x3 affine matrices.
    SemidirectModQ { m: u64, l: u64 },
}

/// A finite group of `d x d` matrices mod `q`, enumerated breadth-first from
/// the identity (index 0) by right multiplication with its generators.
#[derive(Clone, Debug)]
pub struct FiniteQuotientGroup {
    kind: GroupKind,
    q: u64,
    d: usize,
    cap: usize,
    data: Vec<u32>,
    index: HashMap<Box<[u8]>, u32>,
    generators: Vec<usize>,
    generator_inverse: Vec<usize>,
    perms: Vec<Vec<u32>>,
}

/// Bytes per entry in canonical keys.
fn key_width(q: u64) -> usize {
    let bits = 64 - (q.saturating_sub(1)).leading_zeros() as usize;
    bits.div_ceil(8).max(1)
}

fn key_of(entries: &[u32], width: usize) -> Box<[u8]> {
    let mut out = Vec::with_capacity(entries.len() * width);
    for &e in entries {
        out.extend_from_slice(&e.to_be_bytes()[4 - width..]);
    }
    out.into_boxed_slice()
}

/// Product of two `d x d` residue matrices mod `q`.
pub fn mul_mod(a: &[u32], b: &[u32], d: usize, q: u64, out: &mut [u32]) {
    for i in 0..d {
        for j in 0..d {
            let mut acc = 0u64;
            for k in 0..d {
                acc = (acc + (a[i * d + k] as u64) * (b[k * d + j] as u64) % q) % q;
            }
            out[i * d + j] = acc as u32;
        }
    }
}

fn identity_residues(d: usize, q: u64) -> Vec<u32> {
    let mut out = vec![0u32; d * d];
    if q > 1 {
        for i in 0..d {
            out[i * d + i] = 1;
        }
    }
    out
}

/// Reduces an integer matrix mod `q` and returns it with its inverse mod `q`.
fn residues_with_inverse(g: &IntMatrix, q: u64, index: usize) -> Result<(Vec<u32>, Vec<u32>)> {
    let det = residue_u64(&g.determinant(), q);
    let det_inv =
        mod_inverse_u64(det, q).ok_or(Error::NonInvertibleGenerator { index, modulus: q })?;
    let adj = g.adjugate();
    let scale = BigInt::from(det_inv);
    let inv: Vec<u32> = adj
        .entries()
        .iter()
        .map(|e| residue_u64(&(e * &scale), q) as u32)
        .collect();
    let fwd: Vec<u32> = g.residues(q).into_iter().map(|v| v as u32).collect();
    Ok((fwd, inv))
}

/// Enumerates the group generated by `generators` mod `q`.
///
/// Generators are reduced mod `q`, deduplicated and stripped of the
/// identity; missing inverses are appended so the set is symmetric.
pub fn enumerate_group(
    kind: GroupKind,
    generators: &[IntMatrix],
    q: u64,
    cap: usize,
) -> Result<FiniteQuotientGroup> {
    if q == 0 || q > u32::MAX as u64 {
        return Err(Error::InvalidParameter(
            "modulus must lie in 1..=u32::MAX".into(),
        ));
    }
    if cap == 0 {
        return Err(Error::InvalidParameter("cap must be at least 1".into()));
    }
    let d = match kind {
        GroupKind::SemidirectModQ { .. } => 3,
        GroupKind::MatrixModQ { n } | GroupKind::CongruenceQuotient { n, .. } => n,
    };
    if let Some(bad) = generators.iter().find(|g| g.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.dim(),
        });
    }
    let identity = identity_residues(d, q);

    let mut gens: Vec<Vec<u32>> = Vec::new();
    let mut invs: Vec<Vec<u32>> = Vec::new();
    for (k, g) in generators.iter().enumerate() {
        let (fwd, inv) = residues_with_inverse(g, q, k)?;
        if fwd != identity && !gens.contains(&fwd) {
            gens.push(fwd);
            invs.push(inv);
        }
    }
    for k in 0..gens.len() {
        if !gens.contains(&invs[k]) {
            let (a, b) = (invs[k].clone(), gens[k].clone());
            gens.push(a);
            invs.push(b);
        }
    }

    let width = key_width(q);
    let mut data = identity.clone();
    let mut index: HashMap<Box<[u8]>, u32> = HashMap::new();
    index.insert(key_of(&identity, width), 0);
    let mut perms: Vec<Vec<u32>> = vec![Vec::new(); gens.len()];
    let mut scratch = vec![0u32; d * d];
    let mut next = 0usize;
    while next * d * d < data.len() {
        for (g, gen) in gens.iter().enumerate() {
            let start = next * d * d;
            mul_mod(&data[start..start + d * d], gen, d, q, &mut scratch);
            let key = key_of(&scratch, width);
            let size = data.len() / (d * d);
            let target = match index.get(&key) {
                Some(&t) => t,
                None => {
                    if size >= cap {
                        return Err(Error::CapExceeded {
                            cap,
                            reached: size + 1,
                        });
                    }
                    index.insert(key, size as u32);
                    data.extend_from_slice(&scratch);
                    size as u32
                }
            };
            perms[g].push(target);
        }
        next += 1;
    }

    let lookup = |m: &[u32]| index.get(&key_of(m, width)).map(|&i| i as usize);
    let generators: Vec<usize> = gens
        .iter()
        .map(|g| lookup(g).ok_or(Error::InternalInvariant("generator missing from its group")))
        .collect::<Result<_>>()?;
    let generator_inverse = invs
        .iter()
        .map(|inv| {
            gens.iter()
                .position(|g| g == inv)
                .ok_or(Error::InternalInvariant("generator inverse missing"))
        })
        .collect::<Result<_>>()?;
    Ok(FiniteQuotientGroup {
        kind,
        q,
        d,
        cap,
        data,
        index,
        generators,
        generator_inverse,
        perms,
    })
}

impl FiniteQuotientGroup {
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn matrix_dim(&self) -> usize {
        self.d
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn order(&self) -> usize {
        self.data.len() / (self.d * self.d)
    }

    /// Residues of element `i`, row-major.
    pub fn element(&self, i: usize) -> &[u32] {
        let s = self.d * self.d;
        &self.data[i * s..(i + 1) * s]
    }

    /// The canonical key of element `i`: big-endian fixed-width entries.
    pub fn key(&self, i: usize) -> Box<[u8]> {
        key_of(self.element(i), key_width(self.q))
    }

    pub fn index_of(&self, residues: &[u32]) -> Option<usize> {
        self.index
            .get(&key_of(residues, key_width(self.q)))
            .map(|&i| i as usize)
    }

    /// Index of the product of elements `i` and `j`.
    pub fn multiply(&self, i: usize, j: usize) -> Option<usize> {
        let mut out = vec![0u32; self.d * self.d];
        mul_mod(self.element(i), self.element(j), self.d, self.q, &mut out);
        self.index_of(&out)
    }

    /// Element `i` lifted to an integer matrix with entries in `0..q`.
    pub fn element_matrix(&self, i: usize) -> IntMatrix {
        let d = self.d;
        let rows = (0..d)
            .map(|r| {
                self.element(i)[r * d..(r + 1) * d]
                    .iter()
                    .map(|&v| BigInt::from(v))
                    .collect()
            })
            .collect();
        IntMatrix::from_rows(rows).expect("square by construction")
    }

    /// Element indices of the (symmetrized) generators.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// For each generator position, the position of its inverse.
    pub fn generator_inverse(&self) -> &[usize] {
        &self.generator_inverse
    }

    /// Right-multiplication permutation `x -> x * s` for each generator.
    pub fn permutations(&self) -> &[Vec<u32>] {
        &self.perms
    }

    /// Order of element `i`.
    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut cur = i;
        while cur != 0 {
            cur = self.multiply(cur, i).expect("closed under multiplication");
            k += 1;
        }
        k
    }

    /// Checks closure under generator multiplication and that index 0 is the identity.
    pub fn check_closure(&self) -> bool {
        let id = identity_residues(self.d, self.q);
        self.element(0) == id.as_slice()
            && self
                .generators
                .iter()
                .all(|&g| (0..self.order()).all(|x| self.multiply(x, g).is_some()))
    }
}
