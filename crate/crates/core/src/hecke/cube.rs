//! Cube-shaped complexes of principal series.
//!
//! The resolution of the deformed Steinberg module is assembled from
//! iterated mapping cones and comes out as a cube: one principal series for
//! every subset `S` of the relevant bonds, placed in degree `-|S|`, with
//! differentials the normalized intertwiners that drop one bond (each
//! multiplying spherical vectors by `t_{i+1} - t_i`), carrying Koszul
//! signs. The mirror cube with the unit-normalized projection maps growing
//! into the pattern of a point resolves the simple quotient instead. With
//! the exact normalization the squares commute on the nose and `d^2 = 0`
//! is checked, not arranged.

use super::elem::HeckeAlg;
use super::intertwine::{normalized_intertwiner, HomError, Intertwiner};
use super::module::{principal_series, HModule};
use super::perm::Perm;
use super::smat::{MonBasis, SMat};
use super::spectrum::Spectrum;
use crate::exact::matrix::QMat;
use crate::exact::rat::Q;
use num_traits::{One, Zero};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CubeKind {
    /// subsets shrink towards the empty set (resolution of the deformed
    /// Steinberg / standard module); edges multiply by bond differences
    Shrinking,
    /// subsets grow towards the full pattern (co-resolution computing the
    /// image of a simple quotient); edges are unit projections
    Growing,
}

#[derive(Clone, Debug)]
pub struct CubeTerm {
    /// the full set of killed bonds (the `I`-set of the label): the moving
    /// subset together with the cube's fixed bonds
    pub subset: Vec<usize>,
    /// the moving part only (a subset of the cube base)
    pub moving: Vec<usize>,
    pub w: Perm,
}

pub struct CubeEdge {
    pub src: usize,
    pub tgt: usize,
    pub sign: i32,
    pub bond: usize,
    pub map: Intertwiner,
}

pub struct PsComplex {
    pub alg: HeckeAlg,
    pub sp: Spectrum,
    pub order: usize,
    pub kind: CubeKind,
    pub base: Vec<usize>,
    /// ascending cohomological degrees, ending at 0
    pub degrees: Vec<i32>,
    pub terms: Vec<Vec<CubeTerm>>,
    pub modules: Vec<Vec<HModule>>,
    /// edges[d]: from degree slot d to slot d+1
    pub edges: Vec<Vec<CubeEdge>>,
}

fn subsets_of(base: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &b in base {
        let mut more = Vec::new();
        for s in &out {
            let mut t = s.clone();
            t.push(b);
            more.push(t);
        }
        out.extend(more);
    }
    out.sort();
    out
}

/// Builds the cube complex over the given bond subset. Bonds in `fixed`
/// are killed in every term (for standard-module resolutions these are the
/// bonds across distinct chains, which the induced resolution keeps
/// oriented into the `I`-set throughout).
pub fn build_cube(
    alg: &HeckeAlg,
    sp: &Spectrum,
    base: &[usize],
    fixed: &[usize],
    kind: CubeKind,
    order: usize,
) -> Result<PsComplex, HomError> {
    assert!(base.iter().all(|b| !fixed.contains(b)));
    let m = base.len();
    let degrees: Vec<i32> = (-(m as i32)..=0).collect();
    let mut terms: Vec<Vec<CubeTerm>> = vec![Vec::new(); m + 1];
    let mut modules: Vec<Vec<HModule>> = vec![Vec::new(); m + 1];
    for s in subsets_of(base) {
        let mut full: Vec<usize> = s.iter().copied().chain(fixed.iter().copied()).collect();
        full.sort_unstable();
        let w = sp.class_representative(&full);
        let slot = match kind {
            CubeKind::Shrinking => m - s.len(),
            CubeKind::Growing => s.len(),
        };
        modules[slot].push(principal_series(alg, sp, &w, order));
        terms[slot].push(CubeTerm { subset: full, moving: s, w });
    }
    let mut edges: Vec<Vec<CubeEdge>> = Vec::new();
    for d in 0..m {
        let mut layer = Vec::new();
        for (src, t) in terms[d].iter().enumerate() {
            let moves: Vec<usize> = match kind {
                CubeKind::Shrinking => t.moving.clone(),
                CubeKind::Growing => {
                    base.iter().copied().filter(|i| !t.moving.contains(i)).collect()
                }
            };
            for i in moves {
                let mut s2 = t.moving.clone();
                match kind {
                    CubeKind::Shrinking => s2.retain(|&j| j != i),
                    CubeKind::Growing => {
                        s2.push(i);
                        s2.sort_unstable();
                    }
                }
                let tgt = terms[d + 1].iter().position(|u| u.moving == s2).unwrap();
                let sign = if t.moving.iter().filter(|&&j| j < i).count() % 2 == 0 {
                    1
                } else {
                    -1
                };
                let map =
                    normalized_intertwiner(alg, sp, &t.w, &terms[d + 1][tgt].w, order)?;
                layer.push(CubeEdge { src, tgt, sign, bond: i, map });
            }
        }
        edges.push(layer);
    }
    Ok(PsComplex {
        alg: alg.clone(),
        sp: sp.clone(),
        order,
        kind,
        base: base.to_vec(),
        degrees,
        terms,
        modules,
        edges,
    })
}

impl PsComplex {
    pub fn rank_at(&self, slot: usize) -> usize {
        self.modules[slot].iter().map(|m| m.rank).sum()
    }

    /// Assembled block differential from degree slot `d` to `d+1`.
    pub fn diff(&self, d: usize) -> SMat {
        let ring = self.modules[0][0].ring;
        let rows = self.rank_at(d + 1);
        let cols = self.rank_at(d);
        let mut big = SMat::zeros(ring, rows, cols);
        let row_off: Vec<usize> = self.modules[d + 1]
            .iter()
            .scan(0, |acc, m| {
                let o = *acc;
                *acc += m.rank;
                Some(o)
            })
            .collect();
        let col_off: Vec<usize> = self.modules[d]
            .iter()
            .scan(0, |acc, m| {
                let o = *acc;
                *acc += m.rank;
                Some(o)
            })
            .collect();
        for e in &self.edges[d] {
            let f = if e.sign >= 0 {
                e.map.mat.clone()
            } else {
                e.map.mat.scale_q(&-Q::one())
            };
            for i in 0..f.rows {
                for j in 0..f.cols {
                    if !f[(i, j)].is_zero() {
                        big[(row_off[e.tgt] + i, col_off[e.src] + j)] = f[(i, j)].clone();
                    }
                }
            }
        }
        big
    }

    /// Exact `d (x) d = 0` test on the assembled block matrices.
    pub fn check_d_squared(&self) -> bool {
        (0..self.edges.len().saturating_sub(1))
            .all(|d| self.diff(d + 1).mul(&self.diff(d)).is_zero())
    }

    /// `Q`-dimensions of the cohomology in each degree (flattened over the
    /// truncated base). Negative-degree homology of the truncation contains
    /// boundary junk of top `t`-degree even when the power-series complex
    /// is exact; see [`negative_degrees_die`] for the exactness
    /// certificate.
    pub fn homology_dims(&self, basis: &MonBasis) -> Vec<(i32, usize)> {
        let nslots = self.degrees.len();
        let flats: Vec<QMat> = (0..nslots - 1).map(|d| self.diff(d).flatten(basis)).collect();
        let mut out = Vec::new();
        for slot in 0..nslots {
            let total = self.rank_at(slot) * basis.dim();
            let rank_out = if slot < nslots - 1 { flats[slot].rank() } else { 0 };
            let rank_in = if slot > 0 { flats[slot - 1].rank() } else { 0 };
            out.push((self.degrees[slot], total - rank_out - rank_in));
        }
        out
    }

    /// The top (degree-0) cohomology as an undeformed module: the fiber of
    /// the cokernel of the last differential, with its induced actions.
    pub fn h0_fiber_module(&self) -> HModule {
        let nslots = self.degrees.len();
        assert_eq!(self.modules[nslots - 1].len(), 1, "cube has one top term");
        let top = &self.modules[nslots - 1][0];
        let img = if nslots >= 2 { self.diff(nslots - 2).fiber() } else { QMat::zeros(top.rank, 0) };
        // complement basis of the image inside the fiber of the top term
        let mut aug = img.clone();
        let mut chosen = Vec::new();
        for j in 0..top.rank {
            let mut col = QMat::zeros(top.rank, 1);
            col[(j, 0)] = Q::one();
            let cand = aug.hstack(&col);
            if cand.rank() > aug.rank() {
                aug = cand;
                chosen.push(j);
            }
        }
        // projection to the quotient in the chosen coordinates: solve
        // [img | chosen] * x = v and keep the chosen part
        let basis_mat = {
            let mut m = QMat::zeros(top.rank, img.cols + chosen.len());
            for i in 0..top.rank {
                for j in 0..img.cols {
                    m[(i, j)] = img[(i, j)].clone();
                }
            }
            for (c, &j) in chosen.iter().enumerate() {
                m[(j, img.cols + c)] = Q::one();
            }
            m
        };
        let project = |mat: &QMat| -> QMat {
            // columns: images of chosen basis vectors, projected
            let mut out = QMat::zeros(chosen.len(), chosen.len());
            for (c, &j) in chosen.iter().enumerate() {
                let x = basis_mat.solve(&mat.col(j)).expect("action preserves the image");
                for r in 0..chosen.len() {
                    out[(r, c)] = x[img.cols + r].clone();
                }
            }
            out
        };
        let ring1 = crate::exact::series::SeriesRing::new(self.alg.n, 1);
        let to_smat = |m: &QMat| {
            SMat::from_fn(ring1, m.rows, m.cols, |i, j| ring1.constant(m[(i, j)].clone()))
        };
        HModule {
            alg: self.alg.clone(),
            ring: ring1,
            rank: chosen.len(),
            t_act: top.t_act.iter().map(|m| to_smat(&project(&m.fiber()))).collect(),
            theta_act: top.theta_act.iter().map(|m| to_smat(&project(&m.fiber()))).collect(),
            ps_char: None,
            ps_label: None,
        }
    }
}

/// Certificate that the cube is exact in negative degrees over the honest
/// power-series base: every negative-degree homology class of the
/// truncation at `hi.order` dies after truncating to `lo.order`. The two
/// complexes must be the same cube at two truncation orders, with
/// `hi.order >= lo.order + #base` so all boundary junk is separated.
pub fn negative_degrees_die(lo: &PsComplex, hi: &PsComplex) -> bool {
    assert_eq!(lo.base, hi.base);
    assert!(hi.order >= lo.order + lo.base.len());
    let basis_lo = MonBasis::new(lo.modules[0][0].ring);
    let basis_hi = MonBasis::new(hi.modules[0][0].ring);
    // truncation of flattened hi-coordinates to lo-coordinates
    let truncate = |rank: usize, v: &[Q]| -> Vec<Q> {
        let (dh, dl) = (basis_hi.dim(), basis_lo.dim());
        let mut out = vec![Q::zero(); rank * dl];
        for i in 0..rank {
            for (a, mon) in basis_hi.mons.iter().enumerate() {
                if let Some(b) = basis_lo.index_of(mon) {
                    out[i * dl + b] = v[i * dh + a].clone();
                }
            }
        }
        out
    };
    let nslots = lo.degrees.len();
    for slot in 0..nslots - 1 {
        let rank = hi.rank_at(slot);
        let (_, kernel) = hi.diff(slot).flatten(&basis_hi).rank_kernel();
        let image_cols: QMat = if slot > 0 {
            lo.diff(slot - 1).flatten(&basis_lo)
        } else {
            QMat::zeros(lo.rank_at(0) * basis_lo.dim(), 0)
        };
        let base_rank = image_cols.rank();
        if kernel.is_empty() {
            continue;
        }
        let truncated: Vec<Vec<Q>> = kernel.iter().map(|v| truncate(rank, v)).collect();
        let all = QMat::from_fn(truncated[0].len(), truncated.len(), |i, j| {
            truncated[j][i].clone()
        });
        if image_cols.hstack(&all).rank() != base_rank {
            return false;
        }
    }
    true
}

/// The resolution cube of the deformed generalized Steinberg module of a
/// full chain: one term per subset of the bonds.
pub fn steinberg_complex(
    alg: &HeckeAlg,
    sp: &Spectrum,
    order: usize,
) -> Result<PsComplex, HomError> {
    build_cube(alg, sp, &sp.bond_indices(), &[], CubeKind::Shrinking, order)
}

/// The resolution cube of the deformed standard module: subsets of the
/// bonds internal to the chains.
pub fn standard_complex(
    alg: &HeckeAlg,
    sp: &Spectrum,
    order: usize,
) -> Result<PsComplex, HomError> {
    let intra = sp.intra_chain_bonds();
    let cross: Vec<usize> =
        sp.bond_indices().into_iter().filter(|b| !intra.contains(b)).collect();
    build_cube(alg, sp, &intra, &cross, CubeKind::Shrinking, order)
}

/// The co-resolution cube for the simple quotient attached to the
/// vanishing pattern `pattern` (the positions where the nilpotent vanishes
/// on a full chain).
pub fn simple_quotient_complex(
    alg: &HeckeAlg,
    sp: &Spectrum,
    pattern: &[usize],
    order: usize,
) -> Result<PsComplex, HomError> {
    build_cube(alg, sp, pattern, &[], CubeKind::Growing, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qspec::QSpec;
    use crate::exact::rat::{q_pow, qi};
    use crate::exact::series::SeriesRing;
    use num_traits::One;

    fn setup(n: usize) -> (HeckeAlg, Spectrum) {
        let alg = HeckeAlg::new(n, QSpec::default_q4());
        let lambda = q_pow(alg.q(), n as i64 - 1);
        let sp = Spectrum::full_chain(&alg.qspec, lambda, n);
        (alg, sp)
    }

    #[test]
    fn steinberg_cube_n2() {
        let (alg, sp) = setup(2);
        let order = 4;
        let c = steinberg_complex(&alg, &sp, order).unwrap();
        assert_eq!(c.degrees, vec![-1, 0]);
        assert!(c.check_d_squared());
        // exact in negative degrees (boundary junk dies under refinement);
        // H^0 is rank one over Q[[t]]/t^order
        let hi = steinberg_complex(&alg, &sp, order + 1).unwrap();
        assert!(negative_degrees_die(&c, &hi));
        let basis = MonBasis::new(SeriesRing::new(2, order));
        let dims = c.homology_dims(&basis);
        assert_eq!(dims[1], (0, order));
        let h0 = c.h0_fiber_module();
        assert_eq!(h0.rank, 1);
        // sign action and ascending chain character (q^{-1}L, L)
        assert_eq!(h0.t_act[0].fiber()[(0, 0)], -qi(1));
        assert_eq!(h0.theta_act[0].fiber()[(0, 0)], qi(1));
        assert_eq!(h0.theta_act[1].fiber()[(0, 0)], qi(4));
    }

    #[test]
    fn steinberg_cube_n3() {
        let (alg, sp) = setup(3);
        let order = 3;
        let c = steinberg_complex(&alg, &sp, order).unwrap();
        assert_eq!(c.degrees, vec![-2, -1, 0]);
        assert_eq!(c.terms[0].len(), 1);
        assert_eq!(c.terms[1].len(), 2);
        assert_eq!(c.terms[2].len(), 1);
        assert!(c.check_d_squared());
        let hi = steinberg_complex(&alg, &sp, order + 2).unwrap();
        assert!(negative_degrees_die(&c, &hi));
        let basis = MonBasis::new(SeriesRing::new(3, order));
        let dims = c.homology_dims(&basis);
        // H^0 = deformed Steinberg: free rank one over the t-diagonal,
        // which has dimension = dim of order-truncated 1-variable ring
        assert_eq!(dims[2].1, order);
        let h0 = c.h0_fiber_module();
        assert_eq!(h0.rank, 1);
        for t in &h0.t_act {
            assert_eq!(t.fiber()[(0, 0)], -qi(1));
        }
        // ascending chain character (1, 4, 16)
        assert_eq!(h0.theta_act[0].fiber()[(0, 0)], qi(1));
        assert_eq!(h0.theta_act[1].fiber()[(0, 0)], qi(4));
        assert_eq!(h0.theta_act[2].fiber()[(0, 0)], qi(16));
    }

    #[test]
    fn trivial_quotient_cube_n2() {
        let (alg, sp) = setup(2);
        let order = 3;
        // pattern {0}: N = 0 on the resonant chain, the twist of the trivial
        let c = simple_quotient_complex(&alg, &sp, &[0], order).unwrap();
        assert!(c.check_d_squared());
        let h0 = c.h0_fiber_module();
        assert_eq!(h0.rank, 1);
        // trivial-type: T acts by q, characters descend (here (4,1): q*1 = 4)
        assert_eq!(h0.t_act[0].fiber()[(0, 0)], qi(4));
        assert_eq!(h0.theta_act[0].fiber()[(0, 0)], qi(4));
        assert_eq!(h0.theta_act[1].fiber()[(0, 0)], qi(1));
        // hecke side of the growing cube is exact in negative degrees as well
        let hi = simple_quotient_complex(&alg, &sp, &[0], order + 1).unwrap();
        assert!(negative_degrees_die(&c, &hi));
    }

    #[test]
    fn standard_cube_multichain() {
        // chains (16, 4) + (1): cross-linked; cube over the single intra bond
        let alg = HeckeAlg::new(3, QSpec::default_q4());
        let chains = vec![
            crate::param::chains::Chain { lambda: qi(16), len: 2 },
            crate::param::chains::Chain { lambda: qi(1), len: 1 },
        ];
        let sp = Spectrum::from_chains(&alg.qspec, &chains).unwrap();
        let order = 2;
        let c = standard_complex(&alg, &sp, order).unwrap();
        assert_eq!(c.degrees, vec![-1, 0]);
        assert!(c.check_d_squared());
        let h0 = c.h0_fiber_module();
        // dim = 3!/2! = 3 = number of stable flags
        assert_eq!(h0.rank, 3);
        let chars = h0.jacquet_characters().unwrap();
        let mult: usize = chars.iter().map(|(_, m)| m).sum();
        assert_eq!(mult, 3);
        // matches the flags of the block normal form point
        let p = crate::param::sample::point_from_chains(&alg.qspec, &chains);
        let flags = crate::param::chains::stable_flags(&p).unwrap();
        let mut expected: Vec<Vec<Q>> = flags.into_iter().map(|f| f.character).collect();
        expected.sort();
        let got: Vec<Vec<Q>> = chars
            .iter()
            .flat_map(|(c, m)| std::iter::repeat(c.clone()).take(*m))
            .collect();
        assert_eq!(got, expected);
        let one = Q::one();
        assert!(one.is_one());
    }
}
