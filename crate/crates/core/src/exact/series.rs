//! Truncated multivariate power series.
//!
//! `TruncSeries` over `SeriesRing { vars, order }` keeps exactly the terms of
//! total degree `< order`; all arithmetic discards the rest. This is the
//! coefficient base for deformed Hecke modules: the `m`-adic completion of
//! the deformation ring, seen through a fixed finite window.

use super::rat::Q;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

pub type Exps = Vec<u16>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SeriesRing {
    pub vars: usize,
    /// Terms of total degree `>= order` are dropped.
    pub order: usize,
}

impl SeriesRing {
    pub fn new(vars: usize, order: usize) -> Self {
        assert!(order >= 1, "order bound must be at least 1");
        SeriesRing { vars, order }
    }

    pub fn zero(&self) -> TruncSeries {
        TruncSeries { ring: *self, coeffs: BTreeMap::new() }
    }

    pub fn constant(&self, c: Q) -> TruncSeries {
        let mut s = self.zero();
        if !c.is_zero() {
            s.coeffs.insert(vec![0; self.vars], c);
        }
        s
    }

    pub fn one(&self) -> TruncSeries {
        self.constant(Q::one())
    }

    /// The variable `t_i` (zero if the order bound truncates degree 1).
    pub fn var(&self, i: usize) -> TruncSeries {
        assert!(i < self.vars);
        let mut s = self.zero();
        if self.order > 1 {
            let mut e = vec![0u16; self.vars];
            e[i] = 1;
            s.coeffs.insert(e, Q::one());
        }
        s
    }

    /// All exponent vectors of total degree `< order`, sorted by degree then
    /// lexicographically. This is the canonical `Q`-basis used to flatten
    /// series-linear problems into rational linear algebra.
    pub fn monomials(&self) -> Vec<Exps> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; self.vars];
        self.enumerate(0, 0, &mut cur, &mut out);
        out.sort_by_key(|e| (e.iter().map(|&x| x as usize).sum::<usize>(), e.clone()));
        out
    }

    fn enumerate(&self, pos: usize, deg: usize, cur: &mut Exps, out: &mut Vec<Exps>) {
        if pos == self.vars {
            out.push(cur.clone());
            return;
        }
        for d in 0..(self.order - deg) {
            cur[pos] = d as u16;
            self.enumerate(pos + 1, deg + d, cur, out);
        }
        cur[pos] = 0;
    }

    pub fn dim(&self) -> usize {
        self.monomials().len()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    pub ring: SeriesRing,
    /// exponent vector -> coefficient; no zero coefficients stored.
    coeffs: BTreeMap<Exps, Q>,
}

fn deg(e: &[u16]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl TruncSeries {
    pub fn from_terms(ring: SeriesRing, terms: impl IntoIterator<Item = (Exps, Q)>) -> Self {
        let mut s = ring.zero();
        for (e, c) in terms {
            s.add_term(&e, &c);
        }
        s
    }

    pub fn coeffs(&self) -> &BTreeMap<Exps, Q> {
        &self.coeffs
    }

    pub fn coeff(&self, e: &[u16]) -> Q {
        self.coeffs.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, e: &[u16], c: &Q) {
        assert_eq!(e.len(), self.ring.vars);
        if c.is_zero() || deg(e) >= self.ring.order {
            return;
        }
        let entry = self.coeffs.entry(e.to_vec()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.ring.vars])
    }

    /// A truncated series is a unit exactly when its constant term is not zero.
    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        assert_eq!(self.ring, other.ring, "series ring mismatch");
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TruncSeries {
        let mut out = self.ring.zero();
        for (e, c) in &self.coeffs {
            out.coeffs.insert(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> TruncSeries {
        let mut out = self.ring.zero();
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.coeffs {
            out.coeffs.insert(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        assert_eq!(self.ring, other.ring, "series ring mismatch");
        let mut out = self.ring.zero();
        for (e1, c1) in &self.coeffs {
            let d1 = deg(e1);
            for (e2, c2) in &other.coeffs {
                if d1 + deg(e2) >= self.ring.order {
                    continue;
                }
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(&e, &(c1 * c2));
            }
        }
        out
    }

    /// Multiplicative inverse of a unit.
    pub fn invert(&self) -> Option<TruncSeries> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return None;
        }
        // f = c0 (1 - g), 1/f = (1/c0) sum g^j
        let g = self.ring.one().sub(&self.scale(&c0.clone().recip()));
        let mut acc = self.ring.one();
        let mut pow = self.ring.one();
        for _ in 1..self.ring.order {
            pow = pow.mul(&g);
            if pow.is_zero() {
                break;
            }
            acc = acc.add(&pow);
        }
        Some(acc.scale(&c0.recip()))
    }

    pub fn pow(&self, e: i64) -> TruncSeries {
        if e < 0 {
            return self.invert().expect("negative power of a non-unit").pow(-e);
        }
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluation at the origin of the deformation space.
    pub fn fiber(&self) -> Q {
        self.constant_term()
    }

    /// Truncate further, into a ring with a smaller order bound.
    pub fn truncate(&self, order: usize) -> TruncSeries {
        let ring = SeriesRing::new(self.ring.vars, order);
        let mut out = ring.zero();
        for (e, c) in &self.coeffs {
            out.add_term(e, c);
        }
        out
    }

    /// Substitute `vars[i] -> images[i]` (images in an arbitrary target ring).
    pub fn substitute(&self, target: SeriesRing, images: &[TruncSeries]) -> TruncSeries {
        assert_eq!(images.len(), self.ring.vars);
        let mut out = target.zero();
        for (e, c) in &self.coeffs {
            let mut term = target.constant(c.clone());
            for (i, &ei) in e.iter().enumerate() {
                for _ in 0..ei {
                    term = term.mul(&images[i]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Lowest total degree with a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|e| deg(e)).min()
    }
}

impl std::fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    write!(f, "*t{}^{}", i + 1, p)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::qi;

    fn t(ring: SeriesRing, i: usize) -> TruncSeries {
        ring.var(i)
    }

    #[test]
    fn truncated_products() {
        // (1 + t)(1 - t) = 1 at order 2: the degree-2 term is discarded
        let r = SeriesRing::new(1, 2);
        let a = r.one().add(&t(r, 0));
        let b = r.one().sub(&t(r, 0));
        assert_eq!(a.mul(&b), r.one());
        // t * t = 0 at order 2
        assert!(t(r, 0).mul(&t(r, 0)).is_zero());
    }

    #[test]
    fn square_of_linear_form() {
        // (1 + t1 + t2)^2 at order 3, expanded by hand
        let r = SeriesRing::new(2, 3);
        let f = r.one().add(&t(r, 0)).add(&t(r, 1));
        let sq = f.mul(&f);
        assert_eq!(sq.coeff(&[0, 0]), qi(1));
        assert_eq!(sq.coeff(&[1, 0]), qi(2));
        assert_eq!(sq.coeff(&[0, 1]), qi(2));
        assert_eq!(sq.coeff(&[2, 0]), qi(1));
        assert_eq!(sq.coeff(&[1, 1]), qi(2));
        assert_eq!(sq.coeff(&[0, 2]), qi(1));
        assert_eq!(sq.coeffs().len(), 6);
    }

    #[test]
    fn inversion() {
        let r = SeriesRing::new(2, 4);
        let f = r.constant(qi(3)).add(&t(r, 0)).add(&t(r, 1).scale(&qi(-2)));
        let inv = f.invert().unwrap();
        assert_eq!(f.mul(&inv), r.one());
        assert!(t(r, 0).invert().is_none());
    }

    #[test]
    fn monomial_count() {
        // degree < 4 in 3 variables: C(3,3)+C(4,2)... just check the known value 20
        let r = SeriesRing::new(3, 4);
        assert_eq!(r.dim(), 20);
        assert_eq!(SeriesRing::new(4, 4).dim(), 35);
    }
}
