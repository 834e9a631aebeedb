//! The affine Hecke algebra of `GL_n` in its Bernstein presentation.
//!
//! Elements are kept in the normal form `sum c * T_w * theta_x` with
//! `w` in `S_n` and `x` in `Z^n`. The presentation is generated by the
//! finite part `T_{s_i}` with `(T_s - q)(T_s + 1) = 0` and braid relations,
//! and the commuting Laurent part `theta_x`, glued by the cross relation
//!
//! `theta_x T_s - T_s theta_{s(x)} = (q-1) (theta_x - theta_{s(x)}) / (1 - theta_{-alpha})`
//!
//! whose right side is expanded as the finite geometric sum it is.

use super::perm::Perm;
use crate::exact::qspec::QSpec;
use crate::exact::rat::Q;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

pub type ThetaExp = Vec<i32>;

#[derive(Clone, Debug)]
pub struct HeckeAlg {
    pub n: usize,
    pub qspec: QSpec,
}

impl HeckeAlg {
    pub fn new(n: usize, qspec: QSpec) -> Self {
        assert!(n >= 1);
        HeckeAlg { n, qspec }
    }

    pub fn q(&self) -> &Q {
        self.qspec.q()
    }
}

/// An element in the `T_w theta_x` normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Elem {
    pub n: usize,
    terms: BTreeMap<(Perm, ThetaExp), Q>,
}

impl Elem {
    pub fn zero(n: usize) -> Self {
        Elem { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Elem::basis(Perm::identity(n), vec![0; n], Q::one())
    }

    pub fn basis(w: Perm, x: ThetaExp, c: Q) -> Self {
        let n = w.n();
        assert_eq!(x.len(), n);
        let mut e = Elem::zero(n);
        e.add_term(w, x, c);
        e
    }

    pub fn t_gen(n: usize, i: usize) -> Self {
        Elem::basis(Perm::simple(n, i), vec![0; n], Q::one())
    }

    pub fn t_word(n: usize, w: &Perm) -> Self {
        Elem::basis(w.clone(), vec![0; n], Q::one())
    }

    pub fn theta(n: usize, x: ThetaExp) -> Self {
        Elem::basis(Perm::identity(n), x, Q::one())
    }

    pub fn terms(&self) -> &BTreeMap<(Perm, ThetaExp), Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Perm, x: ThetaExp, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((w, x)).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        let mut out = self.clone();
        for ((w, x), c) in &other.terms {
            out.add_term(w.clone(), x.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Elem {
        let mut out = Elem::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for ((w, x), v) in &self.terms {
            out.terms.insert((w.clone(), x.clone()), v * c);
        }
        out
    }

    pub fn mul(&self, alg: &HeckeAlg, other: &Elem) -> Elem {
        let mut out = Elem::zero(self.n);
        for ((w, x), c) in &self.terms {
            for ((w2, x2), c2) in &other.terms {
                let prod = mul_basis(alg, w, x, w2, x2);
                for ((u, z), d) in prod.terms {
                    out.add_term(u, z, d * c * c2);
                }
            }
        }
        out
    }

    pub fn commutator(&self, alg: &HeckeAlg, other: &Elem) -> Elem {
        self.mul(alg, other).sub(&other.mul(alg, self))
    }
}

/// `(T_w theta_x) * (T_{w2} theta_{x2})` in normal form.
pub fn mul_basis(alg: &HeckeAlg, w: &Perm, x: &[i32], w2: &Perm, x2: &[i32]) -> Elem {
    // theta_x T_{w2} = sum c T_u theta_z, then T_w T_u and theta_{z + x2}
    let mid = theta_past_word(alg, x, &w2.reduced_word());
    let mut out = Elem::zero(alg.n);
    for ((u, z), c) in mid.terms {
        let tprod = t_times_t(alg, w, &u);
        let zx: ThetaExp = z.iter().zip(x2).map(|(a, b)| a + b).collect();
        for (p, d) in tprod {
            out.add_term(p, zx.clone(), &d * &c);
        }
    }
    out
}

/// The geometric-series part of the cross relation:
/// `(theta_x - theta_{s_i(x)}) / (1 - theta_{-alpha_i})` as a finite sum.
fn cross_sum(x: &[i32], i: usize) -> Vec<(ThetaExp, i64)> {
    let d = x[i] - x[i + 1];
    let mut out = Vec::new();
    if d > 0 {
        let mut y = x.to_vec();
        for _ in 0..d {
            out.push((y.clone(), 1));
            y[i] -= 1;
            y[i + 1] += 1;
        }
    } else if d < 0 {
        let mut y = x.to_vec();
        y.swap(i, i + 1);
        for _ in 0..(-d) {
            out.push((y.clone(), -1));
            y[i] -= 1;
            y[i + 1] += 1;
        }
    }
    out
}

/// `theta_x * T_{s_{word[0]}} * ... * T_{s_{word[last]}}` in normal form.
fn theta_past_word(alg: &HeckeAlg, x: &[i32], word: &[usize]) -> Elem {
    let n = alg.n;
    if word.is_empty() {
        return Elem::theta(n, x.to_vec());
    }
    let i = word[0];
    let rest = &word[1..];
    let qm1 = alg.q() - Q::one();
    // T_{s_i} * (theta_{s_i x} * T_rest)
    let mut sx = x.to_vec();
    sx.swap(i, i + 1);
    let tail = theta_past_word(alg, &sx, rest);
    let mut out = Elem::zero(n);
    for ((u, z), c) in tail.terms {
        for (p, d) in t_times_s_left(alg, i, &u) {
            out.add_term(p, z.clone(), &d * &c);
        }
    }
    // + (q - 1) * sum_geo theta_y * T_rest
    for (y, sgn) in cross_sum(x, i) {
        let t = theta_past_word(alg, &y, rest);
        for ((u, z), c) in t.terms {
            out.add_term(u, z, c * &qm1 * Q::from_integer(sgn.into()));
        }
    }
    out
}

/// `T_{s_i} * T_u` by the quadratic relation.
fn t_times_s_left(alg: &HeckeAlg, i: usize, u: &Perm) -> Vec<(Perm, Q)> {
    let su = u.left_simple(i);
    if su.length() > u.length() {
        vec![(su, Q::one())]
    } else {
        let qm1 = alg.q() - Q::one();
        vec![(u.clone(), qm1), (su, alg.q().clone())]
    }
}

/// `T_w * T_u` expanded along a reduced word of `u`.
fn t_times_t(alg: &HeckeAlg, w: &Perm, u: &Perm) -> Vec<(Perm, Q)> {
    let mut acc: BTreeMap<Perm, Q> = BTreeMap::new();
    acc.insert(w.clone(), Q::one());
    for &i in &u.reduced_word() {
        let mut next: BTreeMap<Perm, Q> = BTreeMap::new();
        for (p, c) in acc {
            let ps = p.right_simple(i);
            if ps.length() > p.length() {
                *next.entry(ps).or_insert_with(Q::zero) += c;
            } else {
                let qm1 = alg.q() - Q::one();
                *next.entry(p).or_insert_with(Q::zero) += &c * qm1;
                *next.entry(ps).or_insert_with(Q::zero) += &c * alg.q();
            }
        }
        acc = next;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}
