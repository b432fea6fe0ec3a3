//! Dense primal simplex for `max 1·p  s.t.  C p <= 1, p >= 0` with `C >= 0`.

use alloc::vec;
use alloc::vec::Vec;

const EPS: f64 = 1e-12;

/// Optimal primal point and dual prices of the packing LP.
#[derive(Clone, Debug)]
pub struct PackingSolution {
    pub value: f64,
    /// One weight per column.
    pub primal: Vec<f64>,
    /// One price per row (constraint).
    pub dual: Vec<f64>,
}

/// Solves the packing LP over `rows x cols` coefficients given column-wise.
/// Returns `None` when the LP is unbounded (a column with no positive entry).
pub fn solve_packing(columns: &[Vec<f64>], rows: usize) -> Option<PackingSolution> {
    let cols = columns.len();
    if columns.iter().any(|c| c.iter().all(|&v| v <= EPS)) {
        return None;
    }
    let width = cols + rows + 1;
    // tableau rows: constraints, then the objective row of reduced costs
    let mut t = vec![vec![0.0f64; width]; rows + 1];
    for r in 0..rows {
        for (c, col) in columns.iter().enumerate() {
            t[r][c] = col[r];
        }
        t[r][cols + r] = 1.0;
        t[r][width - 1] = 1.0;
    }
    t[rows][..cols].fill(1.0);
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    // Bland: smallest index with positive reduced cost enters
    while let Some(enter) = (0..cols + rows).find(|&c| t[rows][c] > EPS) {
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..rows {
            let a = t[r][enter];
            if a > EPS {
                let ratio = t[r][width - 1] / a;
                let better = ratio < best - EPS
                    || (ratio <= best + EPS && leave.is_some_and(|l| basis[r] < basis[l]));
                if leave.is_none() || better {
                    best = ratio;
                    leave = Some(r);
                }
            }
        }
        let r = leave?;
        let pivot = t[r][enter];
        for v in t[r].iter_mut() {
            *v /= pivot;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r {
                let f = row[enter];
                if f != 0.0 {
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x -= f * p;
                    }
                }
            }
        }
        basis[r] = enter;
    }

    let mut primal = vec![0.0; cols];
    for (r, &b) in basis.iter().enumerate() {
        if b < cols {
            primal[b] = t[r][width - 1].max(0.0);
        }
    }
    let dual: Vec<f64> = (0..rows).map(|k| (-t[rows][cols + k]).max(0.0)).collect();
    let value = primal.iter().sum();
    Some(PackingSolution {
        value,
        primal,
        dual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_game() {
        // C_2 x C_2 with two generators: characters (1,0), (0,1), (1,1)
        let cols = vec![vec![4.0, 0.0], vec![0.0, 4.0], vec![4.0, 4.0]];
        let s = solve_packing(&cols, 2).unwrap();
        assert!((s.value - 0.5).abs() < 1e-12);
        let d: f64 = s.dual.iter().sum();
        assert!((d - 0.5).abs() < 1e-12);
        for col in &cols {
            let lhs: f64 = col.iter().zip(&s.dual).map(|(a, b)| a * b).sum();
            assert!(lhs >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn unbounded_column() {
        assert!(solve_packing(&[vec![0.0, 0.0]], 2).is_none());
    }
}
