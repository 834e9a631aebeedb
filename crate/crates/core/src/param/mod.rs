//! The space of pairs `(phi, N)` with `Ad(phi)(N) = q^{-1} N`.

pub mod partition;
pub mod chains;
pub mod sample;

pub use chains::{chain_decompose, stable_flags, ChainDecomposition, FlagOrdering};
pub use partition::{all_partitions, Partition};

use crate::exact::qspec::QSpec;
use crate::exact::rat::{q_from_string, q_to_string};
use crate::exact::QMat;
use num_traits::Zero;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParamError {
    #[error("phi must be invertible")]
    SingularPhi,
    #[error("N is not nilpotent")]
    NotNilpotent,
    #[error("phi and N must be square of the same size")]
    ShapeMismatch,
    #[error("repeated eigenvalues: phi is not regular semisimple")]
    RepeatedEigenvalues,
    #[error("could not certify a rational spectrum: {0}")]
    IrrationalSpectrum(String),
    #[error("relation Ad(phi)N = q^{{-1}}N fails")]
    RelationFails,
    #[error("bad serialized point: {0}")]
    BadSerialization(String),
}

/// An exact point `(phi, N)` of the parameter variety.
#[derive(Clone, Debug)]
pub struct PhiNPoint {
    pub n: usize,
    pub qspec: QSpec,
    pub phi: QMat,
    pub nil: QMat,
}

impl PhiNPoint {
    pub fn new(qspec: QSpec, phi: QMat, nil: QMat) -> Result<Self, ParamError> {
        if phi.rows != phi.cols || nil.rows != nil.cols || phi.rows != nil.rows {
            return Err(ParamError::ShapeMismatch);
        }
        let p = PhiNPoint { n: phi.rows, qspec, phi, nil };
        if p.phi.inverse().is_none() {
            return Err(ParamError::SingularPhi);
        }
        Ok(p)
    }

    /// Entrywise exact test of `phi N = q^{-1} N phi`.
    pub fn check_relation(&self) -> bool {
        let lhs = self.phi.mul(&self.nil);
        let rhs = self.nil.mul(&self.phi).scale(&self.qspec.q().clone().recip());
        lhs == rhs
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nil.pow(self.n).is_zero()
    }

    /// Jordan type of `N` as a partition of `n`.
    pub fn jordan_type(&self) -> Result<Partition, ParamError> {
        if !self.is_nilpotent() {
            return Err(ParamError::NotNilpotent);
        }
        // blocks of size >= j counted by kernel dimension jumps
        let mut ker_dims = vec![0usize];
        for j in 1..=self.n {
            let (rank, _) = self.nil.pow(j).rank_kernel();
            ker_dims.push(self.n - rank);
        }
        let at_least = |j: usize| ker_dims[j] - ker_dims[j - 1];
        let mut parts = Vec::new();
        for size in (1..=self.n).rev() {
            let exact = if size == self.n {
                at_least(size)
            } else {
                at_least(size) - at_least(size + 1)
            };
            parts.extend(std::iter::repeat(size).take(exact));
        }
        Ok(Partition::new(parts).expect("kernel jumps form a partition"))
    }

    /// Dimension of the kernel of the differential of
    /// `(phi, N) -> phi N - q^{-1} N phi` at this point, inside
    /// `gl_n x gl_n`. Equals `n^2` exactly at the smooth points of the
    /// complete intersection.
    pub fn tangent_dim(&self) -> usize {
        let n = self.n;
        let qinv = self.qspec.q().clone().recip();
        // columns: first n^2 for the phi-direction X, then n^2 for the
        // N-direction M; dF(X, M) = X N - q^{-1} N X + phi M - q^{-1} M phi
        let mut jac = QMat::zeros(n * n, 2 * n * n);
        for a in 0..n {
            for b in 0..n {
                let mut e = QMat::zeros(n, n);
                e[(a, b)] = crate::exact::rat::qi(1);
                let dx = e.mul(&self.nil).sub(&self.nil.mul(&e).scale(&qinv));
                let dm = self.phi.mul(&e).sub(&e.mul(&self.phi).scale(&qinv));
                for i in 0..n {
                    for j in 0..n {
                        jac[(i * n + j, a * n + b)] = dx[(i, j)].clone();
                        jac[(i * n + j, n * n + a * n + b)] = dm[(i, j)].clone();
                    }
                }
            }
        }
        let (rank, _) = jac.rank_kernel();
        2 * n * n - rank
    }

    pub fn to_json(&self) -> Value {
        let mat = |m: &QMat| -> Value {
            Value::Array(
                (0..m.rows)
                    .map(|i| {
                        Value::Array(
                            (0..m.cols).map(|j| Value::String(q_to_string(&m[(i, j)]))).collect(),
                        )
                    })
                    .collect(),
            )
        };
        json!({
            "n": self.n,
            "q_sqrt": q_to_string(self.qspec.q_sqrt()),
            "phi": mat(&self.phi),
            "nil": mat(&self.nil),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ParamError> {
        let bad = |m: &str| ParamError::BadSerialization(m.to_string());
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let q_sqrt = q_from_string(v["q_sqrt"].as_str().ok_or_else(|| bad("missing q_sqrt"))?)
            .map_err(|e| bad(&e))?;
        let qspec = QSpec::new(q_sqrt).map_err(|e| bad(&e.to_string()))?;
        let mat = |key: &str| -> Result<QMat, ParamError> {
            let rows = v[key].as_array().ok_or_else(|| bad("missing matrix"))?;
            if rows.len() != n {
                return Err(bad("bad row count"));
            }
            let mut data = Vec::new();
            for row in rows {
                let row = row.as_array().ok_or_else(|| bad("bad row"))?;
                if row.len() != n {
                    return Err(bad("bad col count"));
                }
                for x in row {
                    let s = x.as_str().ok_or_else(|| bad("entries must be p/q strings"))?;
                    data.push(q_from_string(s).map_err(|e| bad(&e))?);
                }
            }
            Ok(QMat::from_fn(n, n, |i, j| data[i * n + j].clone()))
        };
        PhiNPoint::new(qspec, mat("phi")?, mat("nil")?)
    }
}

/// Report of the non-equidimensionality audit for a Borel subgroup of
/// `GL_{rd}`, following the explicit family built from
/// `phi_0 = diag(1,...,q^{d-1})` with each eigenvalue repeated `r` times.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BorelAuditReport {
    pub r: usize,
    pub d: usize,
    pub n: usize,
    pub dim_b: usize,
    /// dimension of the stabilizer of `phi_0` in `B`, from the centralizer equations
    pub stabilizer_dim: usize,
    /// dimension of `{N in Lie B : N phi_0 = q phi_0 N}`, from exact linear algebra
    pub nil_family_dim: usize,
    pub component_dim: i64,
    pub excess: i64,
    pub equidimensional_verdict: String,
}

/// Exact audit of the Borel example: `X_B` acquires a component of dimension
/// `1 + dim B + (r/2)(dr - (2r + d))`, strictly larger than `dim B` as soon
/// as `dr >= 2r + d`.
pub fn borel_component_audit(qspec: &QSpec, r: usize, d: usize) -> BorelAuditReport {
    assert!(r >= 1 && d >= 1);
    let n = r * d;
    let dim_b = n * (n + 1) / 2;
    let q = qspec.q();

    // phi_0 with each q^i in an r-block
    let mut phi0 = QMat::zeros(n, n);
    for i in 0..n {
        phi0[(i, i)] = crate::exact::rat::q_pow(q, (i / r) as i64);
    }

    // upper-triangular coordinates
    let ut: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();

    // stabilizer: X upper triangular with X phi_0 = phi_0 X
    let mut comm = QMat::zeros(n * n, ut.len());
    for (c, &(a, b)) in ut.iter().enumerate() {
        // (E_{ab} phi0 - phi0 E_{ab})_{a b} = phi0_{bb} - phi0_{aa}
        comm[(a * n + b, c)] = &phi0[(b, b)] - &phi0[(a, a)];
    }
    let (rank, _) = comm.rank_kernel();
    let stabilizer_dim = ut.len() - rank;

    // N upper triangular with N phi_0 = q phi_0 N
    let mut rel = QMat::zeros(n * n, ut.len());
    for (c, &(a, b)) in ut.iter().enumerate() {
        rel[(a * n + b, c)] = &phi0[(b, b)] - q * &phi0[(a, a)];
    }
    let (rank, _) = rel.rank_kernel();
    let nil_family_dim = ut.len() - rank;

    let component_dim = 1 + nil_family_dim as i64 + dim_b as i64 - stabilizer_dim as i64;
    // cross-check against the closed formula
    let formula = {
        let (r, d) = (r as i64, d as i64);
        // 1 + dim B + (r/2)(dr - (2r + d)); integral since r and dr-2r-d
        // cannot both be odd (their product is (d-2)r^2 - dr, always even)
        let twice = 2 + 2 * dim_b as i64 + r * (d * r - 2 * r - d);
        debug_assert_eq!(twice % 2, 0);
        twice / 2
    };
    assert_eq!(component_dim, formula, "audit disagrees with the closed formula");

    let excess = component_dim - dim_b as i64;
    BorelAuditReport {
        r,
        d,
        n,
        dim_b,
        stabilizer_dim,
        nil_family_dim,
        component_dim,
        excess,
        equidimensional_verdict: if excess > 0 { "not equidimensional" } else { "no excess" }
            .to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::qi;

    fn e(n: usize, i: usize, j: usize) -> QMat {
        let mut m = QMat::zeros(n, n);
        m[(i, j)] = qi(1);
        m
    }

    fn diag(vals: &[i64]) -> QMat {
        let n = vals.len();
        QMat::from_fn(n, n, |i, j| if i == j { qi(vals[i]) } else { qi(0) })
    }

    // q must be a rational square, so the q = 2 examples are mirrored here
    // with q = 4 and eigenvalue ratios 4 in place of 2
    fn qs() -> QSpec {
        QSpec::default_q4()
    }

    #[test]
    fn relation_examples() {
        // phi = diag(1,4), N = E_12, q = 4: N maps the 4-eigenvector to the
        // 1-eigenvector and 1 = q^{-1} * 4
        let p = PhiNPoint::new(qs(), diag(&[1, 4]), e(2, 0, 1)).unwrap();
        assert!(p.check_relation());
        // N = 0 always satisfies the relation
        let p = PhiNPoint::new(qs(), diag(&[1, 3]), QMat::zeros(2, 2)).unwrap();
        assert!(p.check_relation());
        // ratio 3 is not q
        let p = PhiNPoint::new(qs(), diag(&[1, 3]), e(2, 0, 1)).unwrap();
        assert!(!p.check_relation());
        // singular phi rejected
        assert!(PhiNPoint::new(qs(), diag(&[0, 1]), QMat::zeros(2, 2)).is_err());
    }

    #[test]
    fn jordan_types() {
        let n3 = e(3, 0, 1).add(&e(3, 1, 2));
        let p = PhiNPoint::new(qs(), diag(&[1, 4, 16]), n3).unwrap();
        assert_eq!(p.jordan_type().unwrap(), Partition::new(vec![3]).unwrap());
        let p = PhiNPoint::new(qs(), diag(&[1, 4, 16]), QMat::zeros(3, 3)).unwrap();
        assert_eq!(p.jordan_type().unwrap(), Partition::new(vec![1, 1, 1]).unwrap());
        let p = PhiNPoint::new(qs(), diag(&[1, 4, 16]), e(3, 0, 1)).unwrap();
        assert_eq!(p.jordan_type().unwrap(), Partition::new(vec![2, 1]).unwrap());
        // non-nilpotent rejected
        let p = PhiNPoint::new(qs(), diag(&[1, 1, 1]), QMat::identity(3)).unwrap();
        assert!(p.jordan_type().is_err());
    }

    #[test]
    fn tangent_dims() {
        // full chain: smooth point of the complete intersection, kernel = n^2
        let n3 = e(3, 0, 1).add(&e(3, 1, 2));
        let p = PhiNPoint::new(qs(), diag(&[1, 4, 16]), n3).unwrap();
        assert!(p.check_relation());
        assert_eq!(p.tangent_dim(), 9);
        let p = PhiNPoint::new(qs(), diag(&[1, 4]), e(2, 0, 1)).unwrap();
        assert!(p.check_relation());
        assert_eq!(p.tangent_dim(), 4);
        // component intersection: N = 0 on a fully resonant spectrum
        let p = PhiNPoint::new(qs(), diag(&[1, 4, 16]), QMat::zeros(3, 3)).unwrap();
        assert!(p.tangent_dim() > 9);
    }

    #[test]
    fn borel_audit_cases() {
        let rep = borel_component_audit(&qs(), 3, 3);
        assert_eq!((rep.dim_b, rep.component_dim), (45, 46));
        assert_eq!(rep.equidimensional_verdict, "not equidimensional");
        assert_eq!(rep.stabilizer_dim, 3 * (3 * 4) / 2);
        assert_eq!(rep.nil_family_dim, 2 * 9);

        let rep = borel_component_audit(&qs(), 1, 2);
        assert_eq!(rep.component_dim, 3);
        assert_eq!(rep.dim_b as i64, rep.component_dim);
        assert_eq!(rep.equidimensional_verdict, "no excess");

        let rep = borel_component_audit(&qs(), 2, 4);
        assert_eq!(rep.component_dim, 1 + rep.dim_b as i64);
        assert_eq!(rep.equidimensional_verdict, "not equidimensional");
    }

    #[test]
    fn json_roundtrip() {
        let p = PhiNPoint::new(qs(), diag(&[4, 1]), e(2, 0, 1)).unwrap();
        let v = p.to_json();
        let p2 = PhiNPoint::from_json(&v).unwrap();
        assert_eq!(p2.phi, p.phi);
        assert_eq!(p2.nil, p.nil);
    }
}

