//! The choice of `q` and its square root.
//!
//! All normalizations downstream assume a fixed rational square root of `q`,
//! so `q` is required to be the square of a nonzero rational (default
//! `q = 4`, `q^{1/2} = 2`). The resonance guard rejects eigenvalue lists
//! whose ratios hit small `q`-powers that the caller did not declare.

use super::rat::{is_small_q_power, qi, Q};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QSpecError {
    #[error("q^(1/2) must be nonzero")]
    ZeroRoot,
    #[error("q must avoid 0, 1 and -1, got {0}")]
    DegenerateQ(String),
    #[error("undeclared resonance: eigenvalue ratio {lhs}/{rhs} = q^{k}")]
    Resonance { lhs: String, rhs: String, k: i64 },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSpec {
    q_sqrt: Q,
    q: Q,
}

impl QSpec {
    pub fn new(q_sqrt: Q) -> Result<Self, QSpecError> {
        if q_sqrt.is_zero() {
            return Err(QSpecError::ZeroRoot);
        }
        let q = &q_sqrt * &q_sqrt;
        if q.is_one() || q == -Q::one() || q.is_zero() {
            return Err(QSpecError::DegenerateQ(q.to_string()));
        }
        Ok(QSpec { q_sqrt, q })
    }

    /// The default `q = 4` used throughout the verification suite.
    pub fn default_q4() -> Self {
        QSpec::new(qi(2)).unwrap()
    }

    pub fn q(&self) -> &Q {
        &self.q
    }

    pub fn q_sqrt(&self) -> &Q {
        &self.q_sqrt
    }

    /// Checks that the only ratios `lambda_i / lambda_j` landing in
    /// `{q^k : |k| <= bound}` are the declared pairs `(i, j, k)`.
    pub fn guard_resonances(
        &self,
        eigenvalues: &[Q],
        declared: &[(usize, usize, i64)],
        bound: i64,
    ) -> Result<(), QSpecError> {
        for (i, a) in eigenvalues.iter().enumerate() {
            for (j, b) in eigenvalues.iter().enumerate() {
                if i == j || b.is_zero() {
                    continue;
                }
                if let Some(k) = is_small_q_power(&(a / b), &self.q, bound) {
                    if !declared.contains(&(i, j, k)) {
                        return Err(QSpecError::Resonance {
                            lhs: a.to_string(),
                            rhs: b.to_string(),
                            k,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::qr;

    #[test]
    fn rejects_degenerate_q() {
        assert_eq!(QSpec::new(qi(0)), Err(QSpecError::ZeroRoot));
        assert!(matches!(QSpec::new(qi(1)), Err(QSpecError::DegenerateQ(_))));
        assert!(matches!(QSpec::new(qi(-1)), Err(QSpecError::DegenerateQ(_))));
        assert!(QSpec::new(qr(1, 2)).is_ok());
    }

    #[test]
    fn resonance_guard() {
        let qs = QSpec::default_q4();
        // 1 and 4 differ by q^1: must be declared (in both directions)
        let eigs = vec![qi(1), qi(4)];
        assert!(qs.guard_resonances(&eigs, &[], 2).is_err());
        assert!(qs.guard_resonances(&eigs, &[(0, 1, -1), (1, 0, 1)], 2).is_ok());
        // 1 and 3 never resonate
        assert!(qs.guard_resonances(&[qi(1), qi(3)], &[], 5).is_ok());
    }
}
