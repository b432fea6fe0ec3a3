use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;
use num_bigint::BigInt;
use num_traits::One;

use super::simplex::solve_packing;
use super::{KazhdanBounds, Method};
use crate::arith::mod_inverse_u64;
use crate::quotient::CayleyGraph;
use crate::smith::smith_normal_form;
use crate::{Error, Result};

const MAX_ROUNDS: usize = 10_000;
const TABLE_LIMIT: u64 = 1 << 22;

/// A finite abelian group `C_{m_1} × … × C_{m_r}` with a list of generators
/// given by their coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    moduli: Vec<u64>,
    generators: Vec<Vec<u64>>,
}

impl AbelianGroup {
    /// Coordinates may be negative; they are reduced mod `m_i`.
    pub fn new(moduli: Vec<u64>, generators: &[Vec<i64>]) -> Result<Self> {
        if moduli.contains(&0) {
            return Err(Error::InvalidParameter("moduli must be positive".into()));
        }
        let generators = generators
            .iter()
            .map(|g| {
                if g.len() != moduli.len() {
                    return Err(Error::DimensionMismatch {
                        expected: moduli.len(),
                        found: g.len(),
                    });
                }
                Ok(g.iter()
                    .zip(&moduli)
                    .map(|(&v, &m)| v.rem_euclid(m as i64) as u64)
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(Self { moduli, generators })
    }

    /// Generators already given as residues.
    pub fn from_residues(moduli: Vec<u64>, generators: Vec<Vec<u64>>) -> Result<Self> {
        if moduli.contains(&0) {
            return Err(Error::InvalidParameter("moduli must be positive".into()));
        }
        for g in &generators {
            if g.len() != moduli.len() {
                return Err(Error::DimensionMismatch {
                    expected: moduli.len(),
                    found: g.len(),
                });
            }
        }
        let generators = generators
            .into_iter()
            .map(|g| g.iter().zip(&moduli).map(|(v, m)| v % m).collect())
            .collect();
        Ok(Self { moduli, generators })
    }

    /// `C_m` with the given generators.
    pub fn cyclic(m: u64, generators: &[i64]) -> Result<Self> {
        let gens: Vec<Vec<i64>> = generators.iter().map(|&g| vec![g]).collect();
        Self::new(vec![m], &gens)
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn generators(&self) -> &[Vec<u64>] {
        &self.generators
    }

    /// `|G|`, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        self.moduli
            .iter()
            .try_fold(1u64, |acc, &m| acc.checked_mul(m))
    }

    pub fn negate(&self, g: &[u64]) -> Vec<u64> {
        g.iter()
            .zip(&self.moduli)
            .map(|(&v, &m)| if v == 0 { 0 } else { m - v })
            .collect()
    }

    /// Nonzero generators, one per `{s, −s}` pair, in first-seen order.
    pub fn reduced_generators(&self) -> Vec<Vec<u64>> {
        let mut out: Vec<Vec<u64>> = Vec::new();
        for g in &self.generators {
            if g.iter().all(|&v| v == 0) {
                continue;
            }
            let neg = self.negate(g);
            if !out.iter().any(|h| h == g || *h == neg) {
                out.push(g.clone());
            }
        }
        out
    }

    /// The symmetric generating set used for Cayley graphs: the reduced
    /// generators followed by the missing negatives.
    pub fn symmetric_generators(&self) -> Vec<Vec<u64>> {
        let mut out = self.reduced_generators();
        for k in 0..out.len() {
            let neg = self.negate(&out[k]);
            if !out.contains(&neg) {
                out.push(neg);
            }
        }
        out
    }

    /// Whether the generators generate the whole group.
    pub fn is_generating(&self) -> Result<bool> {
        let r = self.moduli.len();
        if r == 0 {
            return Ok(true);
        }
        let mut rows: Vec<Vec<BigInt>> = self
            .generators
            .iter()
            .map(|g| g.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        for (i, &m) in self.moduli.iter().enumerate() {
            let mut row = vec![BigInt::from(0); r];
            row[i] = BigInt::from(m);
            rows.push(row);
        }
        let snf = smith_normal_form(&rows)?;
        Ok(snf.diagonal.len() == r && snf.diagonal.iter().all(|d| d.is_one()))
    }

    fn strides(&self) -> Vec<u64> {
        let mut s = Vec::with_capacity(self.moduli.len());
        let mut acc = 1u64;
        for &m in &self.moduli {
            s.push(acc);
            acc = acc.saturating_mul(m);
        }
        s
    }

    /// Mixed-radix index of an element (first coordinate varies fastest).
    pub fn index_of(&self, x: &[u64]) -> u64 {
        self.strides().iter().zip(x).map(|(s, v)| s * v).sum()
    }

    /// Right Cayley graph with respect to [`Self::symmetric_generators`].
    pub fn cayley_graph(&self, cap: usize) -> Result<CayleyGraph> {
        let order = self.order().unwrap_or(u64::MAX);
        if order > cap as u64 {
            return Err(Error::CapExceeded {
                cap,
                reached: order.min(usize::MAX as u64) as usize,
            });
        }
        let order = order as usize;
        let gens = self.symmetric_generators();
        let strides = self.strides();
        let perms = gens
            .iter()
            .map(|g| {
                (0..order as u64)
                    .map(|x| {
                        let mut y = 0u64;
                        for (i, &m) in self.moduli.iter().enumerate() {
                            let digit = (x / strides[i]) % m;
                            y += ((digit + g[i]) % m) * strides[i];
                        }
                        y as u32
                    })
                    .collect()
            })
            .collect();
        let inverse = gens
            .iter()
            .map(|g| {
                let neg = self.negate(g);
                gens.iter().position(|h| *h == neg).expect("symmetric set")
            })
            .collect();
        Ok(CayleyGraph::from_permutations(order, perms, inverse))
    }
}

/// Which search found the worst character for each dual price vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Oracle {
    /// Branch and bound over an information set of generators.
    BranchAndBound,
    /// Every nontrivial character.
    Enumeration,
    /// No search was needed.
    Trivial,
}

/// Exact Kazhdan constant of an abelian group and the optimal mixture.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianKazhdanReport {
    pub bounds: KazhdanBounds,
    /// The generators actually used: nonzero, one per `±` pair.
    pub generators: Vec<Vec<u64>>,
    /// Characters and weights of an optimal unit vector `Σ √p_a e_a`.
    pub mixture: Vec<(Vec<u64>, f64)>,
    /// Dual prices over `generators` certifying the lower bound.
    pub prices: Vec<f64>,
    pub rounds: usize,
    pub oracle: Oracle,
    pub generating: bool,
}

/// `4 sin²(π θ / L)` with an optional lookup table.
struct CostTable {
    l: u64,
    table: Option<Vec<f64>>,
}

impl CostTable {
    fn new(l: u64) -> Self {
        let table = (l <= TABLE_LIMIT).then(|| (0..l).map(|t| raw_cost(t, l)).collect());
        Self { l, table }
    }

    #[inline]
    fn get(&self, theta: u64) -> f64 {
        match &self.table {
            Some(t) => t[theta as usize],
            None => raw_cost(theta, self.l),
        }
    }
}

fn raw_cost(theta: u64, l: u64) -> f64 {
    let s = libm::sin(PI * theta as f64 / l as f64);
    4.0 * s * s
}

fn lcm(a: u64, b: u64) -> Option<u64> {
    let g = crate::arith::gcd_u64(a, b);
    (a / g).checked_mul(b)
}

/// Phase `Σ a_i s_i (L/m_i) mod L` of character `a` on generator `s`.
fn phase(a: &[u64], s: &[u64], moduli: &[u64], l: u64) -> u64 {
    let mut acc: u128 = 0;
    for i in 0..moduli.len() {
        let step = (s[i] as u128 * (l / moduli[i]) as u128) % l as u128;
        acc = (acc + a[i] as u128 * step) % l as u128;
    }
    acc as u64
}

struct Problem<'a> {
    moduli: &'a [u64],
    gens: &'a [Vec<u64>],
    l: u64,
    cost: CostTable,
    cap: usize,
}

impl Problem<'_> {
    fn column(&self, a: &[u64]) -> Vec<f64> {
        self.gens
            .iter()
            .map(|s| self.cost.get(phase(a, s, self.moduli, self.l)))
            .collect()
    }

    /// Minimum of `Σ q_k c(a, s_k)` over nontrivial `a`, if below `bound`.
    fn enumerate(&self, q: &[f64], bound: f64) -> Result<Option<(Vec<u64>, f64)>> {
        let order = self.moduli.iter().try_fold(1u64, |a, &m| a.checked_mul(m));
        match order {
            Some(n) if n - 1 <= self.cap as u64 => {}
            _ => {
                return Err(Error::CapExceeded {
                    cap: self.cap,
                    reached: order.map_or(usize::MAX, |n| n.min(usize::MAX as u64) as usize),
                })
            }
        }
        let r = self.moduli.len();
        let k = self.gens.len();
        let mut by_price: Vec<usize> = (0..k).collect();
        by_price.sort_by(|&x, &y| q[y].total_cmp(&q[x]).then(x.cmp(&y)));
        let steps: Vec<Vec<u64>> = by_price
            .iter()
            .map(|&g| {
                (0..r)
                    .map(|i| {
                        ((self.gens[g][i] as u128 * (self.l / self.moduli[i]) as u128)
                            % self.l as u128) as u64
                    })
                    .collect()
            })
            .collect();
        let prices: Vec<f64> = by_price.iter().map(|&g| q[g]).collect();
        let mut digits = vec![0u64; r];
        let mut phases = vec![0u64; k];
        let mut best = bound;
        let mut found: Option<Vec<u64>> = None;
        loop {
            let mut i = 0;
            loop {
                if i == r {
                    return Ok(found.map(|a| (a, best)));
                }
                digits[i] += 1;
                for (p, st) in phases.iter_mut().zip(&steps) {
                    *p = ((*p as u128 + st[i] as u128) % self.l as u128) as u64;
                }
                if digits[i] == self.moduli[i] {
                    digits[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
            let mut total = 0.0;
            for (p, &w) in phases.iter().zip(&prices) {
                total += w * self.cost.get(*p);
                if total >= best {
                    break;
                }
            }
            if total < best {
                best = total;
                found = Some(digits.clone());
            }
        }
    }
}

fn prime_divisors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Incremental row echelon form over `F_p`.
struct Echelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p as u128;
        let mut v: Vec<u64> = v.iter().map(|x| x % self.p).collect();
        for (c, row) in &self.rows {
            let f = v[*c] as u128;
            if f != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = ((*x as u128 + (p - f) * *y as u128) % p) as u64;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<u64>) {
        let c = v.iter().position(|&x| x != 0).expect("nonzero");
        let inv = mod_inverse_u64(v[c], self.p).expect("prime modulus") as u128;
        let row = v
            .iter()
            .map(|&x| ((x as u128 * inv) % self.p as u128) as u64)
            .collect();
        self.rows.push((c, row));
    }
}

/// Inverse of a square matrix mod `m` by Euclidean row reduction.
fn inverse_mod(a: &[Vec<u64>], m: u64) -> Option<Vec<Vec<u64>>> {
    let r = a.len();
    let mm = m as u128;
    let mut t: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut out: Vec<u64> = row.iter().map(|x| x % m).collect();
            out.extend((0..r).map(|j| u64::from(i == j) % m));
            out
        })
        .collect();
    let sub = |t: &mut Vec<Vec<u64>>, target: usize, source: usize, f: u64| {
        let f = (f % m) as u128;
        if f == 0 {
            return;
        }
        let src = t[source].clone();
        for (x, y) in t[target].iter_mut().zip(&src) {
            *x = ((*x as u128 + mm - (f * *y as u128) % mm) % mm) as u64;
        }
    };
    for c in 0..r {
        for row in c + 1..r {
            while t[row][c] != 0 {
                let f = t[c][c] / t[row][c];
                sub(&mut t, c, row, f);
                t.swap(c, row);
            }
        }
        let inv = mod_inverse_u64(t[c][c], m)?;
        for x in t[c].iter_mut() {
            *x = ((*x as u128 * inv as u128) % mm) as u64;
        }
        for row in 0..r {
            if row != c {
                let f = t[row][c];
                sub(&mut t, row, c, f);
            }
        }
    }
    Some(t.into_iter().map(|row| row[r..].to_vec()).collect())
}

struct Search<'a> {
    m: u64,
    values: &'a [u64],
    cost: &'a CostTable,
    qi: Vec<f64>,
    qo: Vec<f64>,
    // weights[j][d]: coefficient of θ_d in the phase of the j-th other generator
    weights: Vec<Vec<u64>>,
    theta: Vec<u64>,
    acc: Vec<Vec<u64>>,
    best: f64,
    found: Option<Vec<u64>>,
    leaves: usize,
    cap: usize,
}

impl Search<'_> {
    fn dfs(&mut self, depth: usize, partial: f64, nonzero: bool) -> Result<()> {
        let r = self.qi.len();
        if depth == r {
            if !nonzero {
                return Ok(());
            }
            self.leaves += 1;
            if self.leaves > self.cap {
                return Err(Error::CapExceeded {
                    cap: self.cap,
                    reached: self.leaves,
                });
            }
            let mut total = partial;
            for (j, &w) in self.qo.iter().enumerate() {
                total += w * self.cost.get(self.acc[r][j]);
                if total >= self.best {
                    return Ok(());
                }
            }
            if total < self.best {
                self.best = total;
                self.found = Some(self.theta.clone());
            }
            return Ok(());
        }
        let mm = self.m as u128;
        for &v in self.values {
            let here = partial + self.qi[depth] * self.cost.get(v);
            if here >= self.best {
                break;
            }
            self.theta[depth] = v;
            for j in 0..self.qo.len() {
                let next =
                    (self.acc[depth][j] as u128 + self.weights[j][depth] as u128 * v as u128) % mm;
                self.acc[depth + 1][j] = next as u64;
            }
            self.dfs(depth + 1, here, nonzero || v != 0)?;
        }
        Ok(())
    }
}

impl Problem<'_> {
    /// Branch and bound for `C_m^r`: characters are parametrized by their
    /// values `θ_I` on `r` generators forming an invertible matrix mod `m`.
    /// Returns `Ok(None)` in the outer option when no such set was found.
    #[allow(clippy::type_complexity)]
    fn branch_and_bound(&self, q: &[f64], bound: f64) -> Result<Option<Option<(Vec<u64>, f64)>>> {
        let m = self.moduli[0];
        let r = self.moduli.len();
        let k = self.gens.len();
        let mut by_price: Vec<usize> = (0..k).collect();
        by_price.sort_by(|&x, &y| q[y].total_cmp(&q[x]).then(x.cmp(&y)));
        let mut ech: Vec<Echelon> = prime_divisors(m)
            .into_iter()
            .map(|p| Echelon {
                p,
                rows: Vec::new(),
            })
            .collect();
        let mut info: Vec<usize> = Vec::with_capacity(r);
        for &g in &by_price {
            if info.len() == r {
                break;
            }
            let reduced: Vec<Vec<u64>> = ech.iter().map(|e| e.reduce(&self.gens[g])).collect();
            if reduced.iter().all(|v| v.iter().any(|&x| x != 0)) {
                for (e, v) in ech.iter_mut().zip(reduced) {
                    e.insert(v);
                }
                info.push(g);
            }
        }
        if info.len() < r {
            return Ok(None);
        }
        let rows: Vec<Vec<u64>> = info.iter().map(|&g| self.gens[g].clone()).collect();
        let Some(inv) = inverse_mod(&rows, m) else {
            return Ok(None);
        };
        let others: Vec<usize> = by_price
            .iter()
            .copied()
            .filter(|g| !info.contains(g))
            .collect();
        let mm = m as u128;
        let weights: Vec<Vec<u64>> = others
            .iter()
            .map(|&j| {
                (0..r)
                    .map(|d| {
                        let mut acc = 0u128;
                        for i in 0..r {
                            acc = (acc + self.gens[j][i] as u128 * inv[i][d] as u128) % mm;
                        }
                        acc as u64
                    })
                    .collect()
            })
            .collect();
        let mut values = Vec::with_capacity(m as usize);
        values.push(0);
        for d in 1..=m / 2 {
            values.push(d);
            if m - d != d {
                values.push(m - d);
            }
        }
        let mut search = Search {
            m,
            values: &values,
            cost: &self.cost,
            qi: info.iter().map(|&g| q[g]).collect(),
            qo: others.iter().map(|&g| q[g]).collect(),
            weights,
            theta: vec![0; r],
            acc: vec![vec![0; others.len()]; r + 1],
            best: bound,
            found: None,
            leaves: 0,
            cap: self.cap,
        };
        search.dfs(0, 0.0, false)?;
        let best = search.best;
        Ok(Some(search.found.map(|theta| {
            let a: Vec<u64> = (0..r)
                .map(|i| {
                    let mut acc = 0u128;
                    for d in 0..r {
                        acc = (acc + inv[i][d] as u128 * theta[d] as u128) % mm;
                    }
                    acc as u64
                })
                .collect();
            (a, best)
        })))
    }
}

/// Exact Kazhdan constant of a finite abelian group with respect to the
/// symmetrization of its generators.
///
/// A unit vector in a representation without invariant vectors spreads its
/// mass `p` over nontrivial characters, and moves by `Σ_a p_a |χ_a(s) − 1|²`
/// under `s`; the constant squared is the min over `p` of the max over `s`.
/// This game is solved by column generation: each round solves the packing
/// LP over the characters found so far, and a search for the character of
/// least price-weighted cost either proves optimality or adds a column.
pub fn abelian_kazhdan_report(group: &AbelianGroup, cap: usize) -> Result<AbelianKazhdanReport> {
    let order = group.order().ok_or(Error::CapExceeded {
        cap,
        reached: usize::MAX,
    })?;
    if order < 2 {
        return Err(Error::InvalidParameter(
            "the trivial group has no nontrivial characters".into(),
        ));
    }
    let gens = group.reduced_generators();
    if !group.is_generating()? {
        let bounds = KazhdanBounds {
            lower: 0.0,
            upper: 0.0,
            exact: true,
            lower_method: Method::Characters,
            upper_method: Method::Characters,
            spectral: None,
            vacuous: false,
        };
        return Ok(AbelianKazhdanReport {
            bounds,
            generators: gens,
            mixture: Vec::new(),
            prices: Vec::new(),
            rounds: 0,
            oracle: Oracle::Trivial,
            generating: false,
        });
    }
    let moduli = group.moduli();
    let l = moduli
        .iter()
        .try_fold(1u64, |acc, &m| lcm(acc, m))
        .ok_or(Error::InvalidParameter("exponent overflows u64".into()))?;
    let problem = Problem {
        moduli,
        gens: &gens,
        l,
        cost: CostTable::new(l),
        cap,
    };
    let homogeneous = moduli.iter().all(|&m| m == moduli[0]);

    let mut chars: Vec<Vec<u64>> = Vec::new();
    for (i, &m) in moduli.iter().enumerate() {
        if m > 1 {
            let mut a = vec![0u64; moduli.len()];
            a[i] = 1;
            chars.push(a);
        }
    }
    let mut columns: Vec<Vec<f64>> = chars.iter().map(|a| problem.column(a)).collect();
    let mut oracle = Oracle::Enumeration;

    for round in 1..=MAX_ROUNDS {
        let sol = solve_packing(&columns, gens.len()).ok_or(Error::InternalInvariant(
            "generating set has a character of zero cost",
        ))?;
        let weights: Vec<f64> = sol.primal.iter().map(|p| p / sol.value).collect();
        let upper_sq = (0..gens.len())
            .map(|k| {
                weights
                    .iter()
                    .zip(&columns)
                    .map(|(p, c)| p * c[k])
                    .sum::<f64>()
            })
            .fold(0.0f64, f64::max);
        let ysum: f64 = sol.dual.iter().sum();
        if ysum <= 0.0 {
            return Err(Error::InternalInvariant("dual prices vanish"));
        }
        let prices: Vec<f64> = sol.dual.iter().map(|y| y / ysum).collect();

        let mut result = None;
        let mut searched = false;
        if homogeneous {
            if let Some(r) = problem.branch_and_bound(&prices, upper_sq)? {
                result = r;
                searched = true;
                oracle = Oracle::BranchAndBound;
            }
        }
        if !searched {
            result = problem.enumerate(&prices, upper_sq)?;
            oracle = Oracle::Enumeration;
        }

        let done = match &result {
            None => Some(upper_sq),
            Some((_, v)) if *v >= upper_sq - 1e-12 => Some(*v),
            Some((a, v)) if chars.contains(a) => Some(*v),
            _ => None,
        };
        if let Some(lower_sq) = done {
            let upper = libm::sqrt(upper_sq);
            let lower = libm::sqrt(lower_sq.max(0.0)).min(upper);
            let mixture = chars
                .iter()
                .zip(&weights)
                .filter(|(_, &p)| p > 0.0)
                .map(|(a, &p)| (a.clone(), p))
                .collect();
            return Ok(AbelianKazhdanReport {
                bounds: KazhdanBounds {
                    lower,
                    upper,
                    exact: upper - lower <= 1e-9,
                    lower_method: Method::Characters,
                    upper_method: Method::Characters,
                    spectral: None,
                    vacuous: false,
                },
                generators: gens,
                mixture,
                prices,
                rounds: round,
                oracle,
                generating: true,
            });
        }
        let (a, _) = result.expect("checked above");
        columns.push(problem.column(&a));
        chars.push(a);
    }
    Err(Error::Tolerance {
        residual: f64::NAN,
        iterations: MAX_ROUNDS,
    })
}

/// The exact Kazhdan constant as bounds with `lower == upper` (up to rounding).
pub fn abelian_kazhdan_exact(group: &AbelianGroup, cap: usize) -> Result<KazhdanBounds> {
    abelian_kazhdan_report(group, cap).map(|r| r.bounds)
}
