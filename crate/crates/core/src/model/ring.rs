//! The monomial model ring of the completed parameter stack at a regular
//! semisimple central character.
//!
//! After the shear `t = t_1`, `s_i = t_{i+1} - t_i` the defining relations
//! become the square-free monomials `s_i u_i`, one per bond of the
//! spectrum; positions without a bond have no `u`-coordinate. The torus
//! grading puts `u_i` in weight `alpha_i` and everything else in weight
//! zero, so every module in play decomposes into finite
//! `(total degree, weight)` slices.

use crate::exact::grading::Weight;
use crate::exact::rat::Q;
use num_traits::Zero;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelRing {
    pub n: usize,
    /// `bonds[i]` iff the coordinate `u_{i+1}` exists (0-based bond `i`
    /// between positions `i` and `i+1`)
    pub bonds: Vec<bool>,
}

impl ModelRing {
    pub fn new(n: usize, bonds: Vec<bool>) -> Self {
        assert_eq!(bonds.len(), n.saturating_sub(1));
        ModelRing { n, bonds }
    }

    pub fn full_chain(n: usize) -> Self {
        ModelRing::new(n, vec![true; n.saturating_sub(1)])
    }

    pub fn bond_indices(&self) -> Vec<usize> {
        (0..self.bonds.len()).filter(|&i| self.bonds[i]).collect()
    }

    pub fn one(&self) -> Monomial {
        Monomial { t: 0, s: vec![0; self.n - 1], u: vec![0; self.n - 1] }
    }

    pub fn var_t(&self) -> Monomial {
        Monomial { t: 1, s: vec![0; self.n - 1], u: vec![0; self.n - 1] }
    }

    pub fn var_s(&self, i: usize) -> Monomial {
        let mut m = self.one();
        m.s[i] = 1;
        m
    }

    pub fn var_u(&self, i: usize) -> Monomial {
        assert!(self.bonds[i], "no u-coordinate at an unbonded position");
        let mut m = self.one();
        m.u[i] = 1;
        m
    }

    /// All degree-one monomials, for annihilator probing.
    pub fn variables(&self) -> Vec<Monomial> {
        let mut v = vec![self.var_t()];
        for i in 0..self.n - 1 {
            v.push(self.var_s(i));
        }
        for i in self.bond_indices() {
            v.push(self.var_u(i));
        }
        v
    }

    /// `None` when the monomial dies against the relations `s_i u_i = 0`
    /// or uses a missing `u`-coordinate.
    pub fn check(&self, m: &Monomial) -> Option<Monomial> {
        for i in 0..self.n - 1 {
            if m.u[i] > 0 && !self.bonds[i] {
                return None;
            }
            if m.u[i] > 0 && m.s[i] > 0 {
                return None;
            }
        }
        Some(m.clone())
    }

    pub fn mul(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        let m = Monomial {
            t: a.t + b.t,
            s: a.s.iter().zip(&b.s).map(|(x, y)| x + y).collect(),
            u: a.u.iter().zip(&b.u).map(|(x, y)| x + y).collect(),
        };
        self.check(&m)
    }

    /// Monomials of the ring in one `(degree, weight)` slice. The weight
    /// determines the `u`-part (partial sums), the rest distributes over
    /// `t` and the admissible `s`-coordinates.
    pub fn slice(&self, degree: i64, weight: &Weight) -> Vec<Monomial> {
        let mut out = Vec::new();
        if degree < 0 {
            return out;
        }
        let Some(u) = self.u_part_of_weight(weight) else { return out };
        let udeg: i64 = u.iter().map(|&x| x as i64).sum();
        if udeg > degree {
            return out;
        }
        let rest = (degree - udeg) as u32;
        // distribute `rest` over t and the s_i with u_i = 0 (or no bond)
        let free_s: Vec<usize> = (0..self.n - 1).filter(|&i| u[i] == 0).collect();
        let mut cur = vec![0u32; free_s.len()];
        self.distribute(rest, 0, &mut cur, &free_s, &u, &mut out);
        out.sort();
        out
    }

    fn distribute(
        &self,
        rest: u32,
        pos: usize,
        cur: &mut Vec<u32>,
        free_s: &[usize],
        u: &[u32],
        out: &mut Vec<Monomial>,
    ) {
        if pos == free_s.len() {
            let mut s = vec![0u32; self.n - 1];
            for (k, &i) in free_s.iter().enumerate() {
                s[i] = cur[k];
            }
            out.push(Monomial { t: rest, s, u: u.to_vec() });
            return;
        }
        for d in 0..=rest {
            cur[pos] = d;
            self.distribute(rest - d, pos + 1, cur, free_s, u, out);
        }
        cur[pos] = 0;
    }

    /// The unique `u`-exponent vector of a given weight, if the weight is
    /// realizable (nonnegative partial sums supported on bonds).
    pub fn u_part_of_weight(&self, weight: &Weight) -> Option<Vec<u32>> {
        assert_eq!(weight.0.len(), self.n);
        if weight.0.iter().sum::<i64>() != 0 {
            return None;
        }
        let mut u = Vec::with_capacity(self.n - 1);
        let mut acc = 0i64;
        for i in 0..self.n - 1 {
            acc += weight.0[i];
            if acc < 0 {
                return None;
            }
            if acc > 0 && !self.bonds[i] {
                return None;
            }
            u.push(acc as u32);
        }
        Some(u)
    }

    /// All weights realized by ring monomials of degree up to `bound`.
    pub fn weights_up_to(&self, bound: i64) -> Vec<Weight> {
        let bonds = self.bond_indices();
        let mut out = Vec::new();
        let mut u = vec![0u32; self.n - 1];
        self.enum_weights(&bonds, 0, bound, &mut u, &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn enum_weights(
        &self,
        bonds: &[usize],
        pos: usize,
        rest: i64,
        u: &mut Vec<u32>,
        out: &mut Vec<Weight>,
    ) {
        if pos == bonds.len() {
            let mut w = vec![0i64; self.n];
            for i in 0..self.n - 1 {
                w[i] += u[i] as i64;
                w[i + 1] -= u[i] as i64;
            }
            out.push(Weight(w));
            return;
        }
        for d in 0..=rest {
            u[bonds[pos]] = d as u32;
            self.enum_weights(bonds, pos + 1, rest - d, u, out);
        }
        u[bonds[pos]] = 0;
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    pub t: u32,
    pub s: Vec<u32>,
    pub u: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> i64 {
        self.t as i64
            + self.s.iter().map(|&x| x as i64).sum::<i64>()
            + self.u.iter().map(|&x| x as i64).sum::<i64>()
    }

    pub fn weight(&self, n: usize) -> Weight {
        let mut w = vec![0i64; n];
        for (i, &ui) in self.u.iter().enumerate() {
            w[i] += ui as i64;
            w[i + 1] -= ui as i64;
        }
        Weight(w)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.t <= other.t
            && self.s.iter().zip(&other.s).all(|(a, b)| a <= b)
            && self.u.iter().zip(&other.u).all(|(a, b)| a <= b)
    }
}

impl std::fmt::Display for Monomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.t > 0 {
            parts.push(if self.t == 1 { "t".to_string() } else { format!("t^{}", self.t) });
        }
        for (i, &e) in self.s.iter().enumerate() {
            if e > 0 {
                parts.push(if e == 1 {
                    format!("s{}", i + 1)
                } else {
                    format!("s{}^{}", i + 1, e)
                });
            }
        }
        for (i, &e) in self.u.iter().enumerate() {
            if e > 0 {
                parts.push(if e == 1 {
                    format!("u{}", i + 1)
                } else {
                    format!("u{}^{}", i + 1, e)
                });
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A polynomial: monomials with rational coefficients, kept reduced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly(pub Vec<(Monomial, Q)>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn monomial(ring: &ModelRing, m: Monomial, c: Q) -> Self {
        match ring.check(&m) {
            Some(m) if !c.is_zero() => Poly(vec![(m, c)]),
            _ => Poly::zero(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut map: std::collections::BTreeMap<Monomial, Q> = std::collections::BTreeMap::new();
        for (m, c) in self.0.iter().chain(&other.0) {
            let e = map.entry(m.clone()).or_insert_with(Q::zero);
            *e += c;
        }
        Poly(map.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, v)| (m.clone(), v * c)).collect())
    }

    pub fn mul(&self, ring: &ModelRing, other: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &other.0 {
                if let Some(m) = ring.mul(m1, m2) {
                    acc = acc.add(&Poly(vec![(m, c1 * c2)]));
                }
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}
