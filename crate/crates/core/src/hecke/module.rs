//! Modules over the affine Hecke algebra, given by exact action matrices
//! over a truncated deformation base.

use super::elem::{mul_basis, Elem, HeckeAlg};
use super::perm::{all_perms, Perm};
use super::smat::{MonBasis, SMat};
use super::spectrum::Spectrum;
use crate::exact::matrix::QMat;
use crate::exact::rat::{q_pow, Q};
use crate::exact::series::{SeriesRing, TruncSeries};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModuleError {
    #[error("algebra relation {0} fails on action matrices")]
    RelationFails(String),
    #[error("spectrum not separable at this truncation")]
    InseparableSpectrum,
    #[error("quotient verification failed: {0}")]
    QuotientMismatch(String),
}

/// A Hecke module: action matrices for the `T_{s_i}` and the (invertible)
/// `theta_{e_j}` over a truncated series base.
#[derive(Clone, Debug)]
pub struct HModule {
    pub alg: HeckeAlg,
    pub ring: SeriesRing,
    pub rank: usize,
    pub t_act: Vec<SMat>,
    pub theta_act: Vec<SMat>,
    /// for modules induced from a character: the character values, so Hom
    /// spaces out of this module reduce to eigenvector problems
    pub ps_char: Option<Vec<TruncSeries>>,
    /// label of the inducing data when this is a principal series
    pub ps_label: Option<Perm>,
}

impl HModule {
    /// Verifies the quadratic, braid, commutation and cross relations on
    /// the action matrices, exactly.
    pub fn check_relations(&self) -> Result<(), ModuleError> {
        let n = self.alg.n;
        let q = self.alg.q().clone();
        let one = SMat::identity(self.ring, self.rank);
        let fail = |s: &str| Err(ModuleError::RelationFails(s.to_string()));
        for (i, t) in self.t_act.iter().enumerate() {
            // (T - q)(T + 1) = 0
            let lhs = t.sub(&one.scale_q(&q)).mul(&t.add(&one));
            if !lhs.is_zero() {
                return fail(&format!("quadratic at s_{i}"));
            }
        }
        for i in 0..n.saturating_sub(2) {
            let (a, b) = (&self.t_act[i], &self.t_act[i + 1]);
            if a.mul(b).mul(a) != b.mul(a).mul(b) {
                return fail(&format!("braid at s_{i}"));
            }
        }
        for i in 0..self.t_act.len() {
            for j in i + 2..self.t_act.len() {
                let (a, b) = (&self.t_act[i], &self.t_act[j]);
                if a.mul(b) != b.mul(a) {
                    return fail(&format!("commutation s_{i} s_{j}"));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (&self.theta_act[i], &self.theta_act[j]);
                if a.mul(b) != b.mul(a) {
                    return fail("theta commutativity");
                }
            }
        }
        // cross relation on generators: theta_{e_j} T_i = T_i theta_{s_i e_j} + (q-1) G
        let qm1 = q - Q::one();
        for i in 0..self.t_act.len() {
            for j in 0..n {
                let lhs = self.theta_act[j].mul(&self.t_act[i]);
                let swapped = if j == i {
                    &self.theta_act[i + 1]
                } else if j == i + 1 {
                    &self.theta_act[i]
                } else {
                    &self.theta_act[j]
                };
                let mut rhs = self.t_act[i].mul(swapped);
                if j == i {
                    rhs = rhs.add(&self.theta_act[i].scale_q(&qm1));
                } else if j == i + 1 {
                    rhs = rhs.sub(&self.theta_act[i].scale_q(&qm1));
                }
                if lhs != rhs {
                    return fail(&format!("cross relation theta_{j} T_{i}"));
                }
            }
        }
        Ok(())
    }

    /// Action matrix of `T_w`.
    pub fn t_word(&self, w: &Perm) -> SMat {
        let mut acc = SMat::identity(self.ring, self.rank);
        for &i in &w.reduced_word() {
            acc = acc.mul(&self.t_act[i]);
        }
        acc
    }

    /// Action matrix of an arbitrary element in normal form. Negative theta
    /// exponents are not supported (none of the realized elements use them).
    pub fn matrix_of_elem(&self, e: &Elem) -> SMat {
        let mut acc = SMat::zeros(self.ring, self.rank, self.rank);
        for ((w, x), c) in e.terms() {
            let mut m = self.t_word(w);
            for (j, &xj) in x.iter().enumerate() {
                assert!(xj >= 0, "negative theta exponent in realized element");
                for _ in 0..xj {
                    m = m.mul(&self.theta_act[j]);
                }
            }
            acc = acc.add(&m.scale_q(c));
        }
        acc
    }

    /// Generalized `theta`-eigencharacters with multiplicity, over the
    /// undeformed base (order-1 ring). This is the Jacquet restriction.
    pub fn jacquet_characters(&self) -> Result<Vec<(Vec<Q>, usize)>, ModuleError> {
        assert_eq!(self.ring.order, 1, "jacquet characters need the undeformed base");
        let thetas: Vec<QMat> = self.theta_act.iter().map(|m| m.fiber()).collect();
        // refine joint generalized eigenspaces coordinate by coordinate
        let mut spaces: Vec<(Vec<Q>, Vec<Vec<Q>>)> = vec![(
            Vec::new(),
            (0..self.rank)
                .map(|i| {
                    let mut v = vec![Q::zero(); self.rank];
                    v[i] = Q::one();
                    v
                })
                .collect(),
        )];
        for th in &thetas {
            let mut next = Vec::new();
            for (prefix, basis) in &spaces {
                if basis.is_empty() {
                    continue;
                }
                // restrict theta to the span: solve th * B = B * R
                let b = QMat::from_fn(self.rank, basis.len(), |i, j| basis[j][i].clone());
                let tb = th.mul(&b);
                let r = b.solve_mat(&tb).ok_or(ModuleError::InseparableSpectrum)?;
                // candidate eigenvalues: roots of the restriction, read off by
                // testing rational candidates present in the matrix spectrum
                let cands = candidate_eigenvalues(&r);
                let mut covered = 0;
                for c in cands {
                    let shifted = r.sub(&QMat::identity(r.rows).scale(&c));
                    let (_, ker) = shifted.pow(r.rows).rank_kernel();
                    if ker.is_empty() {
                        continue;
                    }
                    covered += ker.len();
                    let sub: Vec<Vec<Q>> = ker.iter().map(|k| b.mul_vec(k)).collect();
                    let mut pref = prefix.clone();
                    pref.push(c);
                    next.push((pref, sub));
                }
                if covered != basis.len() {
                    return Err(ModuleError::InseparableSpectrum);
                }
            }
            spaces = next;
        }
        let mut out: Vec<(Vec<Q>, usize)> =
            spaces.into_iter().map(|(c, b)| (c, b.len())).collect();
        out.sort();
        Ok(out)
    }
}

/// Rational eigenvalue candidates of a small matrix: the rational roots of
/// its characteristic polynomial.
fn candidate_eigenvalues(m: &QMat) -> Vec<Q> {
    match crate::param::chains::rational_eigenvalues(m) {
        Ok(mut v) => {
            v.dedup();
            v
        }
        Err(_) => Vec::new(),
    }
}

/// Deformed eigenvalue of `spectrum` at `position`, in `ring`:
/// `value + scale * t_position`.
pub fn deformed_value(ring: SeriesRing, sp: &Spectrum, position: usize) -> TruncSeries {
    ring.constant(sp.values[position].clone())
        .add(&ring.var(position).scale(&sp.scale[position]))
}

/// The principal series attached to the ordering `w` of the deformed
/// spectrum: the induced module from the rank-one character
/// `theta_j -> value_{w(j)}`, free with basis `{T_v : v in S_n}` over the
/// truncated deformation base.
pub fn principal_series(alg: &HeckeAlg, sp: &Spectrum, w: &Perm, order: usize) -> HModule {
    let n = alg.n;
    assert_eq!(sp.n(), n);
    let ring = SeriesRing::new(n, order);
    let char_vals: Vec<TruncSeries> =
        (0..n).map(|j| deformed_value(ring, sp, w.apply(j))).collect();
    let mut m = ps_from_character(alg, ring, &char_vals);
    m.ps_label = Some(w.clone());
    m
}

/// The induced module from an arbitrary rank-one character of the Laurent
/// part, `theta_j -> char_vals[j]` (each a unit).
pub fn ps_from_character(alg: &HeckeAlg, ring: SeriesRing, char_vals: &[TruncSeries]) -> HModule {
    let n = alg.n;
    assert_eq!(char_vals.len(), n);
    let rank = (1..=n).product::<usize>();
    let perms = all_perms(n);
    let index_of = |p: &Perm| perms.binary_search(p).expect("sorted enumeration");
    let char_vals = char_vals.to_vec();
    let char_inv: Vec<TruncSeries> =
        char_vals.iter().map(|v| v.invert().expect("eigenvalues are units")).collect();
    let eval_char = |x: &[i32]| -> TruncSeries {
        let mut acc = ring.one();
        for (j, &xj) in x.iter().enumerate() {
            let f = if xj >= 0 { &char_vals[j] } else { &char_inv[j] };
            for _ in 0..xj.abs() {
                acc = acc.mul(f);
            }
        }
        acc
    };

    let mut t_act = Vec::new();
    for i in 0..n - 1 {
        let mut m = SMat::zeros(ring, rank, rank);
        for (col, v) in perms.iter().enumerate() {
            let sv = v.left_simple(i);
            if sv.length() > v.length() {
                m[(index_of(&sv), col)] = ring.one();
            } else {
                m[(col, col)] = ring.constant(alg.q() - Q::one());
                m[(index_of(&sv), col)] = ring.constant(alg.q().clone());
            }
        }
        t_act.push(m);
    }

    let mut theta_act = Vec::new();
    for j in 0..n {
        let mut x = vec![0i32; n];
        x[j] = 1;
        let mut m = SMat::zeros(ring, rank, rank);
        for (col, v) in perms.iter().enumerate() {
            // theta_{e_j} T_v = sum c T_u theta_z; theta_z acts on 1 by the character
            let prod = mul_basis(alg, &Perm::identity(n), &x, v, &vec![0; n]);
            for ((u, z), c) in prod.terms() {
                let val = eval_char(z).scale(c);
                m[(index_of(u), col)] = m[(index_of(u), col)].add(&val);
            }
        }
        theta_act.push(m);
    }

    HModule {
        alg: alg.clone(),
        ring,
        rank,
        t_act,
        theta_act,
        ps_char: Some(char_vals),
        ps_label: None,
    }
}

/// Basis permutations of a principal series, in the fixed sorted order.
pub fn ps_basis(n: usize) -> Vec<Perm> {
    all_perms(n)
}

/// The cyclic vector `1 (x) 1` of a principal series in its basis.
pub fn ps_cyclic_vector(m: &HModule) -> Vec<TruncSeries> {
    let perms = all_perms(m.alg.n);
    let idx = perms.binary_search(&Perm::identity(m.alg.n)).unwrap();
    let mut v = vec![m.ring.zero(); m.rank];
    v[idx] = m.ring.one();
    v
}

/// The sign idempotent `e_st = (sum_w (-q)^{-l(w)} T_w) / (sum_w q^{-l(w)})`.
pub fn e_st(alg: &HeckeAlg) -> Elem {
    let n = alg.n;
    let mut num = Elem::zero(n);
    let mut denom = Q::zero();
    for w in all_perms(n) {
        let l = w.length() as i64;
        let c = q_pow(alg.q(), -l);
        denom += &c;
        num.add_term(w, vec![0; n], if l % 2 == 0 { c } else { -c });
    }
    num.scale(&denom.recip())
}

/// The trivial idempotent `e_K = (sum_w T_w) / (sum_w q^{l(w)})`.
pub fn e_k(alg: &HeckeAlg) -> Elem {
    let n = alg.n;
    let mut num = Elem::zero(n);
    let mut denom = Q::zero();
    for w in all_perms(n) {
        denom += q_pow(alg.q(), w.length() as i64);
        num.add_term(w, vec![0; n], Q::one());
    }
    num.scale(&denom.recip())
}

/// Flattening context shared by solvers working over one module base.
pub struct FlatCtx {
    pub basis: MonBasis,
}

impl FlatCtx {
    pub fn new(ring: SeriesRing) -> Self {
        FlatCtx { basis: MonBasis::new(ring) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qspec::QSpec;
    use crate::exact::rat::qi;

    fn alg(n: usize) -> HeckeAlg {
        HeckeAlg::new(n, QSpec::default_q4())
    }

    #[test]
    fn principal_series_relations_n2() {
        let a = alg(2);
        let sp = Spectrum::full_chain(&a.qspec, qi(4), 2);
        for w in all_perms(2) {
            for order in [1, 3] {
                let m = principal_series(&a, &sp, &w, order);
                m.check_relations().unwrap();
            }
        }
    }

    #[test]
    fn principal_series_relations_n3() {
        let a = alg(3);
        let sp = Spectrum::full_chain(&a.qspec, qi(16), 3);
        let m = principal_series(&a, &sp, &Perm::identity(3), 2);
        m.check_relations().unwrap();
        // rank 6 over the deformed base
        assert_eq!(m.rank, 6);
    }

    #[test]
    fn undeformed_rank_one_case() {
        let a = alg(1);
        let sp = Spectrum::full_chain(&a.qspec, qi(5), 1);
        let m = principal_series(&a, &sp, &Perm::identity(1), 1);
        assert_eq!(m.rank, 1);
        assert_eq!(m.theta_act[0].fiber()[(0, 0)], qi(5));
    }

    #[test]
    fn jacquet_of_principal_series_is_all_weyl_translates() {
        let a = alg(2);
        let sp = Spectrum::from_chains(
            &a.qspec,
            &[
                crate::param::chains::Chain { lambda: qi(3), len: 1 },
                crate::param::chains::Chain { lambda: qi(1), len: 1 },
            ],
        )
        .unwrap();
        let m = principal_series(&a, &sp, &Perm::identity(2), 1);
        let chars = m.jacquet_characters().unwrap();
        assert_eq!(
            chars,
            vec![(vec![qi(1), qi(3)], 1), (vec![qi(3), qi(1)], 1)]
        );
    }

    #[test]
    fn central_character_matches_symmetric_functions() {
        // n = 3, order 2: the center acts through symmetric functions of the
        // deformed eigenvalues, the same on every principal series
        let a = alg(3);
        let sp = Spectrum::full_chain(&a.qspec, qi(16), 3);
        let order = 2;
        let ring = SeriesRing::new(3, order);
        let expected: Vec<TruncSeries> = (0..3).map(|i| deformed_value(ring, &sp, i)).collect();
        // e_1 = theta_1 + theta_2 + theta_3 acts by sum of deformed values
        let e1_expected = expected[0].add(&expected[1]).add(&expected[2]);
        let e3_expected = expected[0].mul(&expected[1]).mul(&expected[2]);
        for w in [Perm::identity(3), Perm(vec![1, 2, 0])] {
            let m = principal_series(&a, &sp, &w, order);
            let e1 = m.theta_act[0].add(&m.theta_act[1]).add(&m.theta_act[2]);
            assert_eq!(e1, SMat::identity(ring, m.rank).scale(&e1_expected));
            let e3 = m.theta_act[0].mul(&m.theta_act[1]).mul(&m.theta_act[2]);
            assert_eq!(e3, SMat::identity(ring, m.rank).scale(&e3_expected));
        }
    }

    #[test]
    fn sign_and_trivial_idempotents() {
        for n in [2usize, 3] {
            let a = alg(n);
            let est = e_st(&a);
            let ek = e_k(&a);
            assert_eq!(est.mul(&a, &est), est);
            assert_eq!(ek.mul(&a, &ek), ek);
            for i in 0..n - 1 {
                let t = Elem::t_gen(n, i);
                assert_eq!(t.mul(&a, &est), est.scale(&-Q::one()));
                assert_eq!(t.mul(&a, &ek), ek.scale(a.q()));
            }
        }
        // n = 2 closed forms: e_st = (q - T)/(1+q), e_K = (1 + T)/(1+q)
        let a = alg(2);
        let q = a.q().clone();
        let scale = (Q::one() + &q).recip();
        let est_expected =
            Elem::one(2).scale(&q).sub(&Elem::t_gen(2, 0)).scale(&scale);
        assert_eq!(e_st(&a), est_expected);
        let ek_expected = Elem::one(2).add(&Elem::t_gen(2, 0)).scale(&scale);
        assert_eq!(e_k(&a), ek_expected);
    }
}
