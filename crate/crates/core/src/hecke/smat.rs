//! Matrices over a truncated series ring, and their flattening to exact
//! rational linear algebra.

use crate::exact::matrix::QMat;
use crate::exact::rat::Q;
use crate::exact::series::{Exps, SeriesRing, TruncSeries};
use num_traits::Zero;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SMat {
    pub ring: SeriesRing,
    pub rows: usize,
    pub cols: usize,
    data: Vec<TruncSeries>,
}

impl SMat {
    pub fn zeros(ring: SeriesRing, rows: usize, cols: usize) -> Self {
        SMat { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: SeriesRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn from_fn(
        ring: SeriesRing,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> TruncSeries,
    ) -> Self {
        let mut m = Self::zeros(ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn mul(&self, other: &SMat) -> SMat {
        assert_eq!(self.cols, other.rows);
        let mut out = SMat::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other[(k, j)].is_zero() {
                        continue;
                    }
                    let p = self[(i, k)].mul(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&p);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &SMat) -> SMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SMat::from_fn(self.ring, self.rows, self.cols, |i, j| self[(i, j)].add(&other[(i, j)]))
    }

    pub fn sub(&self, other: &SMat) -> SMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SMat::from_fn(self.ring, self.rows, self.cols, |i, j| self[(i, j)].sub(&other[(i, j)]))
    }

    pub fn scale(&self, c: &TruncSeries) -> SMat {
        SMat::from_fn(self.ring, self.rows, self.cols, |i, j| self[(i, j)].mul(c))
    }

    pub fn scale_q(&self, c: &Q) -> SMat {
        SMat::from_fn(self.ring, self.rows, self.cols, |i, j| self[(i, j)].scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn apply(&self, v: &[TruncSeries]) -> Vec<TruncSeries> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = acc.add(&self[(i, j)].mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Constant term, as a rational matrix (the fiber at the origin).
    pub fn fiber(&self) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].constant_term())
    }

    /// The matrix of this map seen as a `Q`-linear map between the
    /// flattened modules `A^cols -> A^rows`, with `A`-basis `basis`.
    /// Coordinate order: module index major, monomial index minor.
    pub fn flatten(&self, basis: &MonBasis) -> QMat {
        let d = basis.mons.len();
        let mut out = QMat::zeros(self.rows * d, self.cols * d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self[(i, j)].is_zero() {
                    continue;
                }
                let block = basis.mult_matrix(&self[(i, j)]);
                for a in 0..d {
                    for b in 0..d {
                        if !block[(a, b)].is_zero() {
                            out[(i * d + a, j * d + b)] = block[(a, b)].clone();
                        }
                    }
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for SMat {
    type Output = TruncSeries;
    fn index(&self, (i, j): (usize, usize)) -> &TruncSeries {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut TruncSeries {
        &mut self.data[i * self.cols + j]
    }
}

/// Monomial basis of a series ring, with index lookups and flattening of
/// series vectors into rational coordinates.
pub struct MonBasis {
    pub ring: SeriesRing,
    pub mons: Vec<Exps>,
    index: std::collections::BTreeMap<Exps, usize>,
}

impl MonBasis {
    pub fn new(ring: SeriesRing) -> Self {
        let mons = ring.monomials();
        let index = mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        MonBasis { ring, mons, index }
    }

    pub fn dim(&self) -> usize {
        self.mons.len()
    }

    pub fn index_of(&self, e: &Exps) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// The matrix of multiplication by `f` on the ring.
    pub fn mult_matrix(&self, f: &TruncSeries) -> QMat {
        let d = self.dim();
        let mut m = QMat::zeros(d, d);
        for (b, mon) in self.mons.iter().enumerate() {
            for (e, c) in f.coeffs() {
                let sum: Exps = mon.iter().zip(e).map(|(x, y)| x + y).collect();
                if let Some(a) = self.index_of(&sum) {
                    m[(a, b)] += c;
                }
            }
        }
        m
    }

    /// Flattens a series vector into rational coordinates (module index
    /// major, monomial minor).
    pub fn flatten_vec(&self, v: &[TruncSeries]) -> Vec<Q> {
        let d = self.dim();
        let mut out = vec![Q::zero(); v.len() * d];
        for (i, f) in v.iter().enumerate() {
            for (e, c) in f.coeffs() {
                let a = self.index_of(e).expect("coefficient inside the window");
                out[i * d + a] = c.clone();
            }
        }
        out
    }

    /// Inverse of `flatten_vec`.
    pub fn unflatten_vec(&self, rank: usize, v: &[Q]) -> Vec<TruncSeries> {
        let d = self.dim();
        assert_eq!(v.len(), rank * d);
        (0..rank)
            .map(|i| {
                TruncSeries::from_terms(
                    self.ring,
                    (0..d).map(|a| (self.mons[a].clone(), v[i * d + a].clone())),
                )
            })
            .collect()
    }
}
