//! Top eigenpair of the averaging operator on a deflated subspace.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

const START_SEED: u64 = 0x6b61_7a68;
const KRYLOV_MAX: usize = 120;
const CHECK_EVERY: usize = 10;

/// What is removed from `ℓ²(G)` before the eigensolve.
#[derive(Clone, Debug)]
pub(crate) enum Deflation {
    /// The constants.
    Constants,
    /// Functions constant on each block; `block[x]` is the block of `x`.
    Blocks { block: Vec<u32>, count: usize },
}

/// `(A f)(x) = (1/|S|) Σ_s f(x s)` restricted to the complement of a
/// deflated subspace.
pub(crate) struct Averaging<'a> {
    pub perms: &'a [Vec<u32>],
    pub order: usize,
    pub deflation: Deflation,
}

/// Unit eigenvector with its Rayleigh quotient and residual `‖A v − μ v‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenResult {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub matvecs: usize,
    pub dense: bool,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    libm::sqrt(dot(x, x))
}

impl Averaging<'_> {
    pub fn subspace_dim(&self) -> usize {
        match &self.deflation {
            Deflation::Constants => self.order.saturating_sub(1),
            Deflation::Blocks { count, .. } => self.order - count,
        }
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let scale = 1.0 / self.perms.len() as f64;
        for (i, out) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for p in self.perms {
                acc += x[p[i] as usize];
            }
            *out = acc * scale;
        }
    }

    pub fn project(&self, x: &mut [f64]) {
        match &self.deflation {
            Deflation::Constants => {
                let mean = x.iter().sum::<f64>() / self.order as f64;
                for v in x.iter_mut() {
                    *v -= mean;
                }
            }
            Deflation::Blocks { block, count } => {
                let mut sums = vec![0.0; *count];
                let mut sizes = vec![0usize; *count];
                for (v, &b) in x.iter().zip(block) {
                    sums[b as usize] += v;
                    sizes[b as usize] += 1;
                }
                for (v, &b) in x.iter_mut().zip(block) {
                    *v -= sums[b as usize] / sizes[b as usize] as f64;
                }
            }
        }
    }

    /// Rayleigh quotient and residual of a vector, after projecting and normalizing it.
    fn finish(&self, mut x: Vec<f64>, matvecs: usize, dense: bool) -> Result<EigenResult> {
        self.project(&mut x);
        let nx = norm(&x);
        if !(nx > 0.0) {
            return Err(Error::InternalInvariant(
                "eigenvector vanished after projection",
            ));
        }
        for v in x.iter_mut() {
            *v /= nx;
        }
        let mut y = vec![0.0; self.order];
        self.apply(&x, &mut y);
        let value = dot(&x, &y);
        let residual = libm::sqrt(
            x.iter()
                .zip(&y)
                .map(|(a, b)| (b - value * a) * (b - value * a))
                .sum(),
        );
        Ok(EigenResult {
            value,
            vector: x,
            residual,
            matvecs: matvecs + 1,
            dense,
        })
    }

    /// Dense symmetric eigensolve of `P A P − 10 (I − P)`.
    pub fn dense_top(&self) -> Result<EigenResult> {
        let n = self.order;
        let scale = 1.0 / self.perms.len() as f64;
        let mut a = DMatrix::<f64>::zeros(n, n);
        for p in self.perms {
            for (i, &j) in p.iter().enumerate() {
                a[(i, j as usize)] += scale;
            }
        }
        let mut proj = DMatrix::<f64>::identity(n, n);
        match &self.deflation {
            Deflation::Constants => {
                let c = 1.0 / n as f64;
                proj.iter_mut().for_each(|v| *v -= c);
            }
            Deflation::Blocks { block, count } => {
                let mut sizes = vec![0usize; *count];
                for &b in block {
                    sizes[b as usize] += 1;
                }
                for i in 0..n {
                    for j in 0..n {
                        if block[i] == block[j] {
                            proj[(i, j)] -= 1.0 / sizes[block[i] as usize] as f64;
                        }
                    }
                }
            }
        }
        let complement = DMatrix::<f64>::identity(n, n) - &proj;
        let mut m = &proj * &a * &proj - complement * 10.0;
        // symmetrize away rounding so the solver sees an exactly symmetric matrix
        let mt = m.transpose();
        m = (m + mt) * 0.5;
        let eig = SymmetricEigen::new(m);
        let top = (0..n)
            .max_by(|&i, &j| {
                eig.eigenvalues[i]
                    .total_cmp(&eig.eigenvalues[j])
                    .then(j.cmp(&i))
            })
            .ok_or(Error::InternalInvariant("empty operator"))?;
        let v: Vec<f64> = eig.eigenvectors.column(top).iter().copied().collect();
        self.finish(v, 0, true)
    }

    /// One Lanczos run from `start`. Returns the tridiagonal coefficients; when
    /// `ritz` is given, also accumulates `Σ s_i q_i` into it (replaying the
    /// same recurrence, so the basis is never stored).
    fn lanczos_pass(
        &self,
        start: &[f64],
        steps: usize,
        tol: f64,
        matvecs: &mut usize,
        mut ritz: Option<(&[f64], &mut Vec<f64>)>,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.order;
        let mut alpha = Vec::with_capacity(steps);
        let mut beta: Vec<f64> = Vec::with_capacity(steps);
        let mut q = start.to_vec();
        let mut q_prev = vec![0.0; n];
        let mut w = vec![0.0; n];
        for j in 0..steps {
            if let Some((s, x)) = ritz.as_mut() {
                for (xi, qi) in x.iter_mut().zip(&q) {
                    *xi += s[j] * qi;
                }
            }
            self.apply(&q, &mut w);
            *matvecs += 1;
            self.project(&mut w);
            let a = dot(&q, &w);
            let b_prev = if j > 0 { beta[j - 1] } else { 0.0 };
            for i in 0..n {
                w[i] -= a * q[i] + b_prev * q_prev[i];
            }
            // one step of local reorthogonalization against q
            let c = dot(&q, &w);
            for i in 0..n {
                w[i] -= c * q[i];
            }
            alpha.push(a + c);
            let b = norm(&w);
            if j + 1 == steps {
                break;
            }
            if ritz.is_none() {
                let check = (j + 1) % CHECK_EVERY == 0;
                if b < 1e-13 {
                    break;
                }
                if check {
                    let (_, s) = tridiagonal_top(&alpha, &beta);
                    if b * s[s.len() - 1].abs() < tol * 1e-2 {
                        break;
                    }
                }
            }
            beta.push(b);
            core::mem::swap(&mut q_prev, &mut q);
            for i in 0..n {
                q[i] = w[i] / b;
            }
        }
        Ok((alpha, beta))
    }

    /// Restarted Lanczos with explicit projection every step.
    pub fn lanczos_top(&self, tol: f64, max_matvecs: usize) -> Result<EigenResult> {
        let n = self.order;
        let dim = self.subspace_dim();
        if dim == 0 {
            return Err(Error::InternalInvariant("empty subspace"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
        let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>() - 0.5).collect();
        self.project(&mut v);
        let nv = norm(&v);
        for x in v.iter_mut() {
            *x /= nv;
        }
        let steps = KRYLOV_MAX.min(dim);
        let mut matvecs = 0usize;
        loop {
            let (alpha, beta) = self.lanczos_pass(&v, steps, tol, &mut matvecs, None)?;
            let (_, s) = tridiagonal_top(&alpha, &beta);
            let mut x = vec![0.0; n];
            self.lanczos_pass(&v, s.len(), tol, &mut matvecs, Some((&s, &mut x)))?;
            let result = self.finish(x, matvecs, false)?;
            matvecs = result.matvecs;
            if result.residual <= tol {
                return Ok(result);
            }
            if matvecs >= max_matvecs {
                return Err(Error::Tolerance {
                    residual: result.residual,
                    iterations: matvecs,
                });
            }
            v = result.vector;
        }
    }
}

/// Largest eigenvalue and its unit eigenvector of the symmetric tridiagonal
/// matrix with diagonal `alpha` and off-diagonal `beta`.
fn tridiagonal_top(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let k = alpha.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let top = (0..k)
        .max_by(|&i, &j| {
            eig.eigenvalues[i]
                .total_cmp(&eig.eigenvalues[j])
                .then(j.cmp(&i))
        })
        .expect("nonempty");
    let s = eig.eigenvectors.column(top).iter().copied().collect();
    (eig.eigenvalues[top], s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Vec<Vec<u32>> {
        vec![
            (0..n).map(|x| ((x + 1) % n) as u32).collect(),
            (0..n).map(|x| ((x + n - 1) % n) as u32).collect(),
        ]
    }

    #[test]
    fn cycle_top_eigenvalue() {
        for n in [3usize, 5, 8, 700, 1001] {
            let perms = cycle(n);
            let op = Averaging {
                perms: &perms,
                order: n,
                deflation: Deflation::Constants,
            };
            let expect = libm::cos(2.0 * core::f64::consts::PI / n as f64);
            let r = if n <= 64 {
                op.dense_top().unwrap()
            } else {
                op.lanczos_top(1e-10, 200_000).unwrap()
            };
            assert!(
                (r.value - expect).abs() < 1e-9,
                "{n}: {} vs {expect}",
                r.value
            );
            assert!(r.residual <= 1e-10);
            assert!(r.vector.iter().sum::<f64>().abs() < 1e-9);
        }
    }

    #[test]
    fn dense_and_lanczos_agree() {
        // torus C_9 x C_7 with four generators
        let (a, b) = (9usize, 7usize);
        let n = a * b;
        let shift = |dx: usize, dy: usize| -> Vec<u32> {
            (0..n)
                .map(|z| {
                    let (x, y) = (z % a, z / a);
                    (((x + dx) % a) + ((y + dy) % b) * a) as u32
                })
                .collect()
        };
        let perms = vec![shift(1, 0), shift(a - 1, 0), shift(0, 1), shift(0, b - 1)];
        let op = Averaging {
            perms: &perms,
            order: n,
            deflation: Deflation::Constants,
        };
        let d = op.dense_top().unwrap();
        let l = op.lanczos_top(1e-11, 100_000).unwrap();
        assert!((d.value - l.value).abs() < 1e-10);
    }
}
