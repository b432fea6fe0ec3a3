use alloc::vec;
use alloc::vec::Vec;

use super::FiniteQuotientGroup;

/// Right Cayley graph: one permutation `x -> x * s` per generator `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyGraph {
    order: usize,
    perms: Vec<Vec<u32>>,
    inverse: Vec<usize>,
}

impl CayleyGraph {
    /// Builds a graph from explicit permutations; `inverse[s]` names the
    /// generator inverse to `s`.
    pub fn from_permutations(order: usize, perms: Vec<Vec<u32>>, inverse: Vec<usize>) -> Self {
        Self {
            order,
            perms,
            inverse,
        }
    }

    pub fn from_group(g: &FiniteQuotientGroup) -> Self {
        Self {
            order: g.order(),
            perms: g.permutations().to_vec(),
            inverse: g.generator_inverse().to_vec(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.perms.len()
    }

    pub fn permutations(&self) -> &[Vec<u32>] {
        &self.perms
    }

    pub fn inverse_of(&self, s: usize) -> usize {
        self.inverse[s]
    }

    /// Every array is a permutation and `perm(s^{-1}) ∘ perm(s)` is the identity.
    pub fn check_permutations(&self) -> bool {
        self.perms.iter().enumerate().all(|(s, p)| {
            if p.len() != self.order || self.inverse.get(s).is_none() {
                return false;
            }
            let mut seen = vec![false; self.order];
            for &t in p {
                let t = t as usize;
                if t >= self.order || seen[t] {
                    return false;
                }
                seen[t] = true;
            }
            let inv = &self.perms[self.inverse[s]];
            (0..self.order).all(|x| inv[p[x] as usize] as usize == x)
        })
    }

    /// Every generator moves every vertex (no generator acts as the identity).
    pub fn fixed_point_free(&self) -> bool {
        self.perms
            .iter()
            .all(|p| p.iter().enumerate().all(|(x, &t)| t as usize != x))
    }

    pub fn is_connected(&self) -> bool {
        if self.order == 0 {
            return true;
        }
        let mut seen = vec![false; self.order];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for p in &self.perms {
                let t = p[x] as usize;
                if !seen[t] {
                    seen[t] = true;
                    count += 1;
                    stack.push(t);
                }
            }
        }
        count == self.order
    }

    /// Edges `(vertex, generator, target)` in vertex-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.order).flat_map(move |x| {
            self.perms
                .iter()
                .enumerate()
                .map(move |(s, p)| (x, s, p[x] as usize))
        })
    }
}
