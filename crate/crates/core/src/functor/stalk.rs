//! Stalks of the images of compactly induced modules.
//!
//! A single copy of a block constituent is cut out of the completed
//! algebra by a refined idempotent; the right-multiplication projector is
//! carried through the dictionary as a matrix of intertwiner coefficients
//! times canonical maps, and its image is analysed as a truncated module:
//! fiber rank, cyclic generators, annihilators, and a direct-sum
//! certificate by dimension count.

use super::dictionary::{model_ring_of, series_to_model_poly};
use crate::exact::matrix::QMat;
use crate::exact::rat::Q;
use crate::hecke::elem::{Elem, HeckeAlg};
use crate::hecke::intertwine::HomError;
use crate::hecke::pairing::CompletedAlgebra;
use crate::hecke::Spectrum;
use crate::model::module::{g_map_multiplier, subscheme_module, Component};
use crate::model::ring::{ModelRing, Monomial, Poly};
use num_traits::Zero;

/// Coordinates of the truncated ambient space: one slot per
/// `(component, monomial)` with the monomial surviving the component.
struct TruncatedSpace {
    ring: ModelRing,
    comps: Vec<Component>,
    coords: Vec<(usize, Monomial)>,
    index: std::collections::BTreeMap<(usize, Monomial), usize>,
    degree_bound: i64,
}

impl TruncatedSpace {
    fn new(ring: ModelRing, comps: Vec<Component>, degree_bound: i64) -> Self {
        let mut coords = Vec::new();
        for (ci, c) in comps.iter().enumerate() {
            for w in ring.weights_up_to(degree_bound) {
                for d in 0..=degree_bound {
                    for m in c.slice(&ring, d, &w) {
                        coords.push((ci, m));
                    }
                }
            }
        }
        coords.sort();
        coords.dedup();
        let index = coords.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        TruncatedSpace { ring, comps, coords, index, degree_bound }
    }

    fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Matrix of an entrywise-polynomial map in the truncated coordinates.
    fn matrix_of(&self, mat: &crate::model::PolyMat) -> QMat {
        let mut out = QMat::zeros(self.dim(), self.dim());
        for (col, (cj, mono)) in self.coords.iter().enumerate() {
            for i in 0..mat.rows {
                for (pm, c) in &mat.entry(i, *cj).0 {
                    if let Some(prod) = self.ring.mul(pm, mono) {
                        if prod.degree() > self.degree_bound {
                            continue;
                        }
                        if self.comps[i].ann.iter().any(|a| a.divides(&prod)) {
                            continue;
                        }
                        if let Some(&row) = self.index.get(&(i, prod)) {
                            out[(row, col)] += c;
                        }
                    }
                }
            }
        }
        out
    }

    /// Multiplication by a ring variable on a vector, truncated.
    fn mult_var(&self, var: &Monomial, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (ci, mono) = &self.coords[i];
            if let Some(prod) = self.ring.mul(var, mono) {
                if prod.degree() > self.degree_bound {
                    continue;
                }
                if self.comps[*ci].ann.iter().any(|a| a.divides(&prod)) {
                    continue;
                }
                if let Some(&row) = self.index.get(&(*ci, prod.clone())) {
                    out[row] += c;
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct StalkSummand {
    pub ann_vars: Vec<String>,
    pub table_matches: bool,
}

#[derive(Debug, serde::Serialize)]
pub struct StalkReport {
    /// number of generators of the truncated image at the closed point
    pub fiber_rank: usize,
    /// per-generator annihilator data, sorted
    pub summands: Vec<StalkSummand>,
    /// the generators span the image and their spans meet trivially
    /// (dimension count over the truncated window)
    pub direct_sum: bool,
    /// degree window of the analysis
    pub degree_bound: i64,
}

/// Pushes the single-copy projector of the middle block through the
/// dictionary at the given spectrum and analyses the image stalk.
pub fn stalk_of_single_copy(
    alg: &HeckeAlg,
    sp: &Spectrum,
    e_single: &Elem,
    order: usize,
) -> Result<StalkReport, HomError> {
    let ca = CompletedAlgebra::new(alg, sp, order);
    let coeffs = ca.projector_coefficients(e_single)?;
    let ring = model_ring_of(sp);
    let comps: Vec<Component> = ca
        .perms
        .iter()
        .map(|w| subscheme_module(&ring, &sp.i_set(w)).components[0].clone())
        .collect();
    // the projector as a polynomial matrix (valid below the truncation)
    let mut pmat = crate::model::PolyMat::zeros(comps.len(), comps.len());
    for (src, row) in coeffs.iter().enumerate() {
        for (tgt, entry) in row.iter().enumerate() {
            if let Some((c, _gen)) = entry {
                let killed_src = sp.i_set(&ca.perms[src]);
                let killed_tgt = sp.i_set(&ca.perms[tgt]);
                let base = g_map_multiplier(&ring, &killed_src, &killed_tgt);
                let poly = series_to_model_poly(&ring, c).mul(&ring, &base);
                pmat.set(tgt, src, poly);
            }
        }
    }
    let degree_bound = order as i64 - 1;
    let space = TruncatedSpace::new(ring.clone(), comps, degree_bound);
    let proj = space.matrix_of(&pmat);
    // image basis
    let pivots = proj.column_space_pivots();
    let image: Vec<Vec<Q>> = pivots.iter().map(|&j| proj.col(j)).collect();
    let img_mat = QMat::from_fn(space.dim(), image.len(), |i, j| image[j][i].clone());
    let img_rank = img_mat.rank();
    // fiber = image / (variables * image)
    let vars = ring.variables();
    let mut m_cols: Vec<Vec<Q>> = Vec::new();
    for v in &image {
        for var in &vars {
            m_cols.push(space.mult_var(var, v));
        }
    }
    let m_mat = QMat::from_fn(space.dim(), m_cols.len(), |i, j| m_cols[j][i].clone());
    let m_rank = m_mat.rank();
    let fiber_rank = img_rank - m_rank;
    // generators: image columns extending the m-span
    let mut gens: Vec<Vec<Q>> = Vec::new();
    let mut span = m_mat.clone();
    let mut span_rank = m_rank;
    for v in &image {
        let col = QMat::from_fn(v.len(), 1, |i, _| v[i].clone());
        let bigger = span.hstack(&col);
        if bigger.rank() > span_rank {
            span = bigger;
            span_rank += 1;
            gens.push(v.clone());
        }
        if gens.len() == fiber_rank {
            break;
        }
    }
    // per-generator annihilators and cyclic spans
    let mut summands = Vec::new();
    let mut total_span_dim = 0;
    for g in &gens {
        let mut ann_vars = Vec::new();
        for var in &vars {
            if space.mult_var(var, g).iter().all(|x| x.is_zero()) {
                ann_vars.push(var.to_string());
            }
        }
        // span of R * g within the window
        let mut cols: Vec<Vec<Q>> = vec![g.clone()];
        let mut frontier = vec![g.clone()];
        for _ in 0..degree_bound {
            let mut next = Vec::new();
            for v in &frontier {
                for var in &vars {
                    let w = space.mult_var(var, v);
                    if !w.iter().all(|x| x.is_zero()) {
                        next.push(w);
                    }
                }
            }
            cols.extend(next.iter().cloned());
            frontier = next;
        }
        let span_g = QMat::from_fn(space.dim(), cols.len(), |i, j| cols[j][i].clone());
        let dim_g = span_g.rank();
        total_span_dim += dim_g;
        // compare with the cyclic model R/(ann) over the window
        let ann: Vec<Monomial> = vars
            .iter()
            .filter(|v| ann_vars.contains(&v.to_string()))
            .cloned()
            .collect();
        let model = Component::cyclic(ann, ring.n);
        let mut expected = 0;
        for w in ring.weights_up_to(degree_bound) {
            for d in 0..=degree_bound {
                expected += model.slice_dim(&ring, d, &w);
            }
        }
        summands.push(StalkSummand { ann_vars, table_matches: expected == dim_g });
    }
    summands.sort_by(|a, b| a.ann_vars.cmp(&b.ann_vars));
    Ok(StalkReport {
        fiber_rank,
        summands,
        direct_sum: total_span_dim == img_rank,
        degree_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qspec::QSpec;
    use crate::exact::rat::qi;
    use crate::hecke::finite::{block_idempotents, refine_to_single_copy};
    use crate::param::chains::Chain;
    use crate::param::Partition;

    fn middle_idempotent(alg: &HeckeAlg) -> Elem {
        let blocks = block_idempotents(alg).unwrap();
        let mid = blocks
            .iter()
            .find(|b| b.partition == Partition::new(vec![2, 1]).unwrap())
            .unwrap();
        refine_to_single_copy(alg, mid).unwrap()
    }

    #[test]
    fn stalk_d2_fully_linked() {
        let qspec = QSpec::default_q4();
        let alg = HeckeAlg::new(3, qspec.clone());
        let sp = Spectrum::full_chain(&qspec, qi(16), 3);
        let e = middle_idempotent(&alg);
        let rep = stalk_of_single_copy(&alg, &sp, &e, 3).unwrap();
        assert_eq!(rep.fiber_rank, 2);
        assert!(rep.direct_sum);
        let anns: Vec<Vec<String>> =
            rep.summands.iter().map(|s| s.ann_vars.clone()).collect();
        assert_eq!(anns, vec![vec!["u1".to_string()], vec!["u2".to_string()]]);
        assert!(rep.summands.iter().all(|s| s.table_matches));
    }

    #[test]
    fn stalk_d1_partially_linked() {
        let qspec = QSpec::default_q4();
        let alg = HeckeAlg::new(3, qspec.clone());
        let sp = Spectrum::from_chains(
            &qspec,
            &[Chain { lambda: qi(4), len: 2 }, Chain { lambda: qi(3), len: 1 }],
        )
        .unwrap();
        let e = middle_idempotent(&alg);
        let rep = stalk_of_single_copy(&alg, &sp, &e, 3).unwrap();
        assert_eq!(rep.fiber_rank, 2);
        assert!(rep.direct_sum);
        let anns: Vec<Vec<String>> =
            rep.summands.iter().map(|s| s.ann_vars.clone()).collect();
        // one free summand (the component where the nilpotent lives) and
        // one killed by u_1 (the nilpotent-zero component)
        assert_eq!(anns, vec![Vec::<String>::new(), vec!["u1".to_string()]]);
        assert!(rep.summands.iter().all(|s| s.table_matches));
    }

    #[test]
    fn stalk_generic_control() {
        let qspec = QSpec::default_q4();
        let alg = HeckeAlg::new(3, qspec.clone());
        let sp = Spectrum::from_chains(
            &qspec,
            &[
                Chain { lambda: qi(9), len: 1 },
                Chain { lambda: qi(3), len: 1 },
                Chain { lambda: qi(1), len: 1 },
            ],
        )
        .unwrap();
        let e = middle_idempotent(&alg);
        let rep = stalk_of_single_copy(&alg, &sp, &e, 2).unwrap();
        // rank-two free stalk
        assert_eq!(rep.fiber_rank, 2);
        assert!(rep.direct_sum);
        assert!(rep.summands.iter().all(|s| s.ann_vars.is_empty() && s.table_matches));
    }
}
