//! Partitions of `n` under the reverse dominance order.
//!
//! The order `<=` used here is *opposite* to the usual dominance order on
//! partitions: the minimal element is the single row `(n)` and the maximal
//! element is `(1,...,1)`. Components of the parameter space are indexed by
//! Jordan types, and closure containment follows this order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts must be weakly decreasing and positive")]
    Malformed,
    #[error("size mismatch: |P| = {0} vs |P'| = {1}")]
    SizeMismatch(usize, usize),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, PartitionError> {
        if parts.is_empty()
            || parts.iter().any(|&p| p == 0)
            || parts.windows(2).any(|w| w[0] < w[1])
        {
            return Err(PartitionError::Malformed);
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// Single row `(n)`: the minimal element (the full-chain Jordan type).
    pub fn min_element(n: usize) -> Self {
        Partition(vec![n])
    }

    /// `(1,...,1)`: the maximal element (the Jordan type of `N = 0`).
    pub fn max_element(n: usize) -> Self {
        Partition(vec![1; n])
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.0[0];
        let parts = (1..=m).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect();
        Partition(parts)
    }

    fn partial_sum(&self, k: usize) -> usize {
        self.0.iter().take(k).sum()
    }

    /// `self <= other` in the reverse dominance order.
    pub fn leq(&self, other: &Partition) -> Result<bool, PartitionError> {
        if self.n() != other.n() {
            return Err(PartitionError::SizeMismatch(self.n(), other.n()));
        }
        let k = self.0.len().max(other.0.len());
        Ok((1..=k).all(|j| self.partial_sum(j) >= other.partial_sum(j)))
    }

    /// All partitions `P'` with `self <= P'` (the closure of the component
    /// indexed by `self` is the union of the orbit strata over this up-set).
    pub fn up_set(&self) -> Vec<Partition> {
        all_partitions(self.n())
            .into_iter()
            .filter(|p| self.leq(p).unwrap())
            .collect()
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n`, in a deterministic (lexicographically decreasing)
/// order starting from `(n)`.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(remaining: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            cur.push(p);
            rec(remaining - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn reverse_dominance_examples() {
        // (3) is minimal: below everything
        assert!(p(&[3]).leq(&p(&[2, 1])).unwrap());
        assert!(p(&[2, 1]).leq(&p(&[1, 1, 1])).unwrap());
        // (1,1,1) is maximal
        assert!(!p(&[1, 1, 1]).leq(&p(&[2, 1])).unwrap());
        assert!(p(&[2, 1]).leq(&p(&[2, 1])).unwrap());
        assert!(p(&[4]).leq(&p(&[2, 2])).unwrap());
        assert!(p(&[2, 2]).leq(&p(&[2, 1, 1])).unwrap());
        // incomparable pair stays incomparable both ways? (3,1) vs (2,2):
        // partial sums 3,4 vs 2,4 — so (3,1) <= (2,2) but not conversely
        assert!(p(&[3, 1]).leq(&p(&[2, 2])).unwrap());
        assert!(!p(&[2, 2]).leq(&p(&[3, 1])).unwrap());
        assert!(p(&[2]).leq(&p(&[1, 1])).is_ok());
        assert!(p(&[2]).leq(&p(&[1, 1, 1])).is_err());
    }

    #[test]
    fn up_sets() {
        let up = p(&[2, 1]).up_set();
        assert_eq!(up.len(), 2);
        assert!(up.contains(&p(&[2, 1])) && up.contains(&p(&[1, 1, 1])));
        assert_eq!(p(&[3]).up_set().len(), 3);
        assert_eq!(p(&[1, 1]).up_set(), vec![p(&[1, 1])]);
    }

    #[test]
    fn monotone_support() {
        // P <= P' implies up_set(P') ⊆ up_set(P)
        for a in all_partitions(5) {
            for b in all_partitions(5) {
                if a.leq(&b).unwrap() {
                    let ua = a.up_set();
                    for x in b.up_set() {
                        assert!(ua.contains(&x));
                    }
                }
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(all_partitions(3).len(), 3);
        assert_eq!(all_partitions(4).len(), 5);
        assert_eq!(all_partitions(5).len(), 7);
    }
}
