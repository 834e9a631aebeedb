//! The completed Hecke algebra as a sum of principal series.
//!
//! Over the completion of the center at a regular semisimple character the
//! Laurent part splits into one idempotent per Weyl chamber, so the algebra
//! itself, as a left module, is the direct sum of all the principal series
//! `iota delta_w`. Right multiplication operators act by blocks of
//! intertwiners. This realizes the pairings `e H e'` between block
//! idempotents as concrete submodules with exact rank certificates, and
//! projections such as the compactly induced modules as intertwiner
//! coefficient matrices ready for the dictionary.

use super::elem::{mul_basis, Elem, HeckeAlg};
use super::intertwine::{coefficient_against, normalized_intertwiner, HomError, Intertwiner};
use super::module::{deformed_value, principal_series, HModule};
use super::perm::{all_perms, Perm};
use super::smat::{MonBasis, SMat};
use super::spectrum::Spectrum;
use crate::exact::matrix::QMat;
use crate::exact::rat::Q;
use crate::exact::series::{SeriesRing, TruncSeries};
use num_traits::Zero;
use std::collections::BTreeMap;

/// An element with truncated-series coefficients in the `T_w theta_x` form,
/// stored as a series-indexed family of rational elements.
#[derive(Clone, Debug)]
pub struct SElem {
    pub ring: SeriesRing,
    pub parts: BTreeMap<Vec<u16>, Elem>,
}

impl SElem {
    pub fn zero(ring: SeriesRing, n: usize) -> Self {
        let _ = n;
        SElem { ring, parts: BTreeMap::new() }
    }

    pub fn from_elem(ring: SeriesRing, e: Elem) -> Self {
        let mut s = SElem::zero(ring, e.n);
        if !e.is_zero() {
            s.parts.insert(vec![0; ring.vars], e);
        }
        s
    }

    pub fn add_part(&mut self, mono: &[u16], e: &Elem) {
        if e.is_zero() {
            return;
        }
        let deg: usize = mono.iter().map(|&x| x as usize).sum();
        if deg >= self.ring.order {
            return;
        }
        let entry = self
            .parts
            .entry(mono.to_vec())
            .or_insert_with(|| Elem::zero(e.n));
        *entry = entry.add(e);
        if entry.is_zero() {
            self.parts.remove(mono);
        }
    }

    pub fn scale_series(&self, f: &TruncSeries) -> SElem {
        let mut out = SElem::zero(self.ring, 0);
        for (mono, e) in &self.parts {
            for (fm, fc) in f.coeffs() {
                let sum: Vec<u16> = mono.iter().zip(fm).map(|(a, b)| a + b).collect();
                out.add_part(&sum, &e.scale(fc));
            }
        }
        out
    }

    pub fn mul_elem(&self, alg: &HeckeAlg, rhs: &Elem) -> SElem {
        let mut out = SElem::zero(self.ring, 0);
        for (mono, e) in &self.parts {
            out.add_part(mono, &e.mul(alg, rhs));
        }
        out
    }
}

/// The completed algebra at the (deformed) spectrum: all principal series
/// plus the chamber idempotents of the Laurent part.
pub struct CompletedAlgebra {
    pub alg: HeckeAlg,
    pub sp: Spectrum,
    pub order: usize,
    pub perms: Vec<Perm>,
    pub modules: Vec<HModule>,
    pub eps: Vec<SElem>,
}

impl CompletedAlgebra {
    pub fn new(alg: &HeckeAlg, sp: &Spectrum, order: usize) -> Self {
        let n = alg.n;
        let ring = SeriesRing::new(n, order);
        let perms = all_perms(n);
        let modules: Vec<HModule> =
            perms.iter().map(|w| principal_series(alg, sp, w, order)).collect();
        // Lagrange chamber idempotents: eps_w = prod_i L_{i,w}(theta_i) with
        // L the interpolation through the deformed eigenvalues
        let deformed: Vec<TruncSeries> = (0..n).map(|p| deformed_value(ring, sp, p)).collect();
        let mut eps = Vec::with_capacity(perms.len());
        for w in &perms {
            let mut acc = SElem::from_elem(ring, Elem::one(n));
            for i in 0..n {
                // L_{i,w}(theta_i) = prod_{j != w(i)} (theta_i - d_j) / (d_{w(i)} - d_j)
                let mut factor = SElem::from_elem(ring, Elem::one(n));
                for j in 0..n {
                    if j == w.apply(i) {
                        continue;
                    }
                    let denom = deformed[w.apply(i)]
                        .sub(&deformed[j])
                        .invert()
                        .expect("distinct eigenvalues stay distinct after deformation");
                    let mut x = vec![0i32; n];
                    x[i] = 1;
                    let mut term = SElem::from_elem(ring, Elem::theta(n, x));
                    let shift = SElem::from_elem(ring, Elem::one(n)).scale_series(&deformed[j]);
                    // theta_i - d_j
                    for (mono, e) in shift.parts {
                        term.add_part(&mono, &e.scale(&-Q::from_integer(1.into())));
                    }
                    factor = selem_mul(&factor, &term, &alg.clone());
                    factor = factor.scale_series(&denom);
                }
                acc = selem_mul(&acc, &factor, &alg.clone());
            }
            eps.push(acc);
        }
        CompletedAlgebra {
            alg: alg.clone(),
            sp: sp.clone(),
            order,
            perms,
            modules,
            eps,
        }
    }

    pub fn ring(&self) -> SeriesRing {
        SeriesRing::new(self.alg.n, self.order)
    }

    /// Evaluates the character of chamber `w` on a theta monomial.
    fn chamber_char(&self, w: &Perm, z: &[i32]) -> TruncSeries {
        let ring = self.ring();
        let mut acc = ring.one();
        for (j, &zj) in z.iter().enumerate() {
            let v = deformed_value(ring, &self.sp, w.apply(j));
            let v = if zj >= 0 { v } else { v.invert().expect("unit") };
            for _ in 0..zj.abs() {
                acc = acc.mul(&v);
            }
        }
        acc
    }

    /// Blocks of the right multiplication by a theta-free element `h`:
    /// `blocks[src][tgt]` maps `iota delta_{w_src} -> iota delta_{w_tgt}`.
    pub fn right_mult_blocks(&self, h: &Elem) -> Vec<Vec<SMat>> {
        let n = self.alg.n;
        let ring = self.ring();
        let nw = self.perms.len();
        let mut blocks: Vec<Vec<SMat>> = (0..nw)
            .map(|src| {
                (0..nw)
                    .map(|_| SMat::zeros(ring, self.modules[0].rank, self.modules[src].rank))
                    .collect()
            })
            .collect();
        let mut char_cache: std::collections::BTreeMap<(usize, Vec<i32>), TruncSeries> =
            Default::default();
        let mut t_cache: std::collections::BTreeMap<(Perm, Perm), Elem> = Default::default();
        for src in 0..nw {
            // g = eps_w h, once per source chamber
            let g = self.eps[src].mul_elem(&self.alg, h);
            for (col, v) in self.perms.iter().enumerate() {
                // T_v * g, then project to each chamber
                for (mono, e) in &g.parts {
                    let mono_series = TruncSeries::from_terms(
                        ring,
                        [(mono.clone(), Q::from_integer(1.into()))],
                    );
                    for ((u, z), c) in e.terms() {
                        let prod = t_cache
                            .entry((v.clone(), u.clone()))
                            .or_insert_with(|| {
                                mul_basis(&self.alg, v, &vec![0; n], u, &vec![0; n])
                            })
                            .clone();
                        for ((p, pz), d) in prod.terms() {
                            debug_assert!(pz.iter().all(|&x| x == 0));
                            let row = self.perms.binary_search(p).unwrap();
                            for tgt in 0..nw {
                                let chi = char_cache
                                    .entry((tgt, z.clone()))
                                    .or_insert_with(|| {
                                        self.chamber_char(&self.perms[tgt], z)
                                    })
                                    .clone();
                                let val = chi.scale(&(c * d)).mul(&mono_series);
                                let entry = &mut blocks[src][tgt][(row, col)];
                                *entry = entry.add(&val);
                            }
                        }
                    }
                }
            }
        }
        blocks
    }

    /// Exact rank certificate for `e_left H e_right` over the completed
    /// center: fiber rank plus freeness via a dimension count.
    pub fn pairing_certificate(&self, e_left: &Elem, e_right: &Elem) -> PairingCert {
        let basis = MonBasis::new(self.ring());
        let blocks = self.right_mult_blocks(e_right);
        let nw = self.perms.len();
        let rank = self.modules[0].rank;
        let d = basis.dim();
        // total operator: L_{e_left} (block diagonal) composed with R_{e_right}
        let left_mats: Vec<SMat> =
            self.modules.iter().map(|m| m.matrix_of_elem(e_left)).collect();
        let total_rows = nw * rank;
        let mut fiber = QMat::zeros(total_rows, total_rows);
        let mut flat = QMat::zeros(total_rows * d, total_rows * d);
        for src in 0..nw {
            for tgt in 0..nw {
                let composed = left_mats[tgt].mul(&blocks[src][tgt]);
                let f = composed.fiber();
                let fl = composed.flatten(&basis);
                for i in 0..rank {
                    for j in 0..rank {
                        if !f[(i, j)].is_zero() {
                            fiber[(tgt * rank + i, src * rank + j)] = f[(i, j)].clone();
                        }
                    }
                }
                for i in 0..rank * d {
                    for j in 0..rank * d {
                        if !fl[(i, j)].is_zero() {
                            flat[(tgt * rank * d + i, src * rank * d + j)] = fl[(i, j)].clone();
                        }
                    }
                }
            }
        }
        let fiber_rank = fiber.rank();
        let dim_q = flat.rank();
        PairingCert { fiber_rank, dim_q, base_dim: d, free: dim_q == fiber_rank * d }
    }

    /// Expresses each nonzero block of the right multiplication by the
    /// idempotent `e` as a coefficient times the normalized intertwiner.
    pub fn projector_coefficients(
        &self,
        e: &Elem,
    ) -> Result<Vec<Vec<Option<(TruncSeries, Intertwiner)>>>, HomError> {
        let basis = MonBasis::new(self.ring());
        let blocks = self.right_mult_blocks(e);
        let nw = self.perms.len();
        let mut out: Vec<Vec<Option<(TruncSeries, Intertwiner)>>> = Vec::new();
        for src in 0..nw {
            let mut row = Vec::new();
            for tgt in 0..nw {
                if blocks[src][tgt].is_zero() {
                    row.push(None);
                    continue;
                }
                let gen = normalized_intertwiner(
                    &self.alg,
                    &self.sp,
                    &self.perms[src],
                    &self.perms[tgt],
                    self.order,
                )?;
                let c = coefficient_against(&gen, &blocks[src][tgt], &basis)?;
                row.push(Some((c, gen)));
            }
            out.push(row);
        }
        Ok(out)
    }
}

fn selem_mul(a: &SElem, b: &SElem, alg: &HeckeAlg) -> SElem {
    let mut out = SElem::zero(a.ring, 0);
    for (ma, ea) in &a.parts {
        for (mb, eb) in &b.parts {
            let sum: Vec<u16> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
            out.add_part(&sum, &ea.mul(alg, eb));
        }
    }
    out
}

pub struct PairingCert {
    pub fiber_rank: usize,
    pub dim_q: usize,
    pub base_dim: usize,
    pub free: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qspec::QSpec;
    use crate::exact::rat::qi;
    use crate::hecke::module::{e_k, e_st};
    use crate::param::chains::Chain;

    fn generic_spectrum(n: usize) -> (HeckeAlg, Spectrum) {
        let alg = HeckeAlg::new(n, QSpec::default_q4());
        let chains: Vec<Chain> = (0..n)
            .map(|i| Chain { lambda: crate::exact::rat::q_pow(&qi(3), i as i64), len: 1 })
            .collect();
        let sp = Spectrum::from_chains(&alg.qspec, &chains).unwrap();
        (alg, sp)
    }

    #[test]
    fn chamber_idempotents_sum_to_one() {
        let (alg, sp) = generic_spectrum(2);
        let ca = CompletedAlgebra::new(&alg, &sp, 2);
        // right multiplication by 1 is the identity, block-diagonally
        let blocks = ca.right_mult_blocks(&Elem::one(2));
        for (src, row) in blocks.iter().enumerate() {
            for (tgt, b) in row.iter().enumerate() {
                if src == tgt {
                    assert_eq!(*b, SMat::identity(ca.ring(), 2));
                } else {
                    assert!(b.is_zero(), "off-diagonal block for identity");
                }
            }
        }
    }

    #[test]
    fn pairing_ranks_n2_generic() {
        let (alg, sp) = generic_spectrum(2);
        let ca = CompletedAlgebra::new(&alg, &sp, 2);
        let est = e_st(&alg);
        let ek = e_k(&alg);
        let c = ca.pairing_certificate(&ek, &est);
        assert!(c.free);
        assert_eq!(c.fiber_rank, 1);
        let c = ca.pairing_certificate(&est, &est);
        assert!(c.free);
        assert_eq!(c.fiber_rank, 1);
    }

    #[test]
    fn pairing_rank_n2_resonant() {
        // at the resonant chain the pairing stays free of rank one
        let alg = HeckeAlg::new(2, QSpec::default_q4());
        let sp = Spectrum::full_chain(&alg.qspec, qi(4), 2);
        let ca = CompletedAlgebra::new(&alg, &sp, 3);
        let est = e_st(&alg);
        let ek = e_k(&alg);
        for (l, r) in [(&ek, &est), (&est, &ek), (&ek, &ek), (&est, &est)] {
            let c = ca.pairing_certificate(l, r);
            assert!(c.free, "pairing not free");
            assert_eq!(c.fiber_rank, 1);
        }
    }
}
