//! The dictionary: principal-series complexes to coherent complexes on the
//! model.
//!
//! Term by term, the principal series labelled `w` goes to the structure
//! sheaf of the subscheme killing the `u`-coordinates in `I_w`; a
//! differential `c * f(w, w')` goes to `c` times multiplication by the
//! separating bond differences followed by the projection. The exact
//! normalization on the Hecke side makes the image differentials square to
//! zero on the nose.

use crate::exact::grading::Weight;
use crate::exact::series::TruncSeries;
use crate::hecke::cube::{CubeKind, PsComplex};
use crate::model::module::{g_map_multiplier, subscheme_module, GradedModule, PolyMat};
use crate::model::ring::{ModelRing, Poly};
use crate::model::OComplex;
use crate::exact::rat::Q;
use num_traits::{One, Zero};

/// The model ring of a spectrum: one `u`-coordinate per bond.
pub fn model_ring_of(sp: &crate::hecke::Spectrum) -> ModelRing {
    ModelRing::new(sp.n(), sp.bonds.clone())
}

/// Transfers a deformation-base series to a model polynomial through the
/// shear `t_i = t + s_1 + ... + s_{i-1}`.
pub fn series_to_model_poly(ring: &ModelRing, f: &TruncSeries) -> Poly {
    let n = ring.n;
    let t_image = |i: usize| -> Poly {
        // t_{i+1} (0-based i) maps to t + s_1 + ... + s_i
        let mut acc = Poly::monomial(ring, ring.var_t(), Q::one());
        for j in 0..i {
            acc = acc.add(&Poly::monomial(ring, ring.var_s(j), Q::one()));
        }
        acc
    };
    let mut out = Poly::zero();
    for (exps, c) in f.coeffs() {
        let mut term = Poly::monomial(ring, ring.one(), c.clone());
        for (i, &e) in exps.iter().enumerate() {
            assert!(i < n);
            for _ in 0..e {
                term = term.mul(ring, &t_image(i));
            }
        }
        out = out.add(&term);
    }
    out
}

/// Maps a cube of principal series to the mirror complex of subscheme
/// modules. The cube terms carry their subset as the set of killed bonds.
pub fn dictionary(c: &PsComplex) -> OComplex {
    let ring = model_ring_of(&c.sp);
    let terms: Vec<GradedModule> = c
        .terms
        .iter()
        .map(|layer| GradedModule {
            components: layer
                .iter()
                .map(|t| {
                    let comp = subscheme_module(&ring, &t.subset).components[0].clone();
                    match c.kind {
                        CubeKind::Shrinking => {
                            comp.shifted(t.subset.len() as i64, Weight::zero(ring.n))
                        }
                        CubeKind::Growing => comp,
                    }
                })
                .collect(),
        })
        .collect();
    let mut maps = Vec::new();
    for (d, layer) in c.edges.iter().enumerate() {
        let mut mat = PolyMat::zeros(c.terms[d + 1].len(), c.terms[d].len());
        for e in layer {
            let src_subset = &c.terms[d][e.src].subset;
            let tgt_subset = &c.terms[d + 1][e.tgt].subset;
            let sign = if e.sign >= 0 { Q::one() } else { -Q::one() };
            let mult = g_map_multiplier(&ring, src_subset, tgt_subset).scale(&sign);
            mat.set(e.tgt, e.src, mult);
        }
        maps.push(mat);
    }
    OComplex { ring, degrees: c.degrees.clone(), terms, maps }
}

/// Compares two complexes of cyclic modules up to a sign diagonal: same
/// terms, and differentials equal after flipping the sign of some
/// components consistently.
pub fn equal_up_to_sign_diagonal(a: &OComplex, b: &OComplex) -> bool {
    if a.degrees != b.degrees || a.terms.len() != b.terms.len() {
        return false;
    }
    for (ta, tb) in a.terms.iter().zip(&b.terms) {
        if ta.components.len() != tb.components.len() {
            return false;
        }
    }
    // choose signs greedily slot by slot, component by component
    let mut signs: Vec<Vec<Q>> = a
        .terms
        .iter()
        .map(|t| vec![Q::zero(); t.components.len()])
        .collect();
    if signs.is_empty() {
        return true;
    }
    for s in &mut signs[0] {
        *s = Q::one();
    }
    for d in 0..a.maps.len() {
        for tgt in 0..a.terms[d + 1].components.len() {
            let mut chosen: Option<Q> = None;
            for src in 0..a.terms[d].components.len() {
                let pa = a.maps[d].entry(tgt, src);
                let pb = b.maps[d].entry(tgt, src);
                if pa.is_zero() != pb.is_zero() {
                    return false;
                }
                if pa.is_zero() {
                    continue;
                }
                let srcsign = &signs[d][src];
                // need sign_tgt with sign_tgt * pb = srcsign * pa
                let scaled_a = pa.scale(srcsign);
                let cand = if &scaled_a == pb {
                    Q::one()
                } else if scaled_a == pb.scale(&-Q::one()) {
                    -Q::one()
                } else {
                    return false;
                };
                match &chosen {
                    None => chosen = Some(cand),
                    Some(c) if *c == cand => {}
                    _ => return false,
                }
            }
            signs[d + 1][tgt] = chosen.unwrap_or_else(Q::one);
        }
    }
    true
}

/// The image of a truncated-series coefficient matrix through the
/// dictionary: coefficients transferred by the shear, composed with the
/// canonical maps between the given subscheme classes. Entry `(i, j)`
/// multiplies by `coeffs[i][j] * g(source_j, target_i)`.
pub fn coefficient_matrix_to_model(
    ring: &ModelRing,
    sources: &[Vec<usize>],
    targets: &[Vec<usize>],
    coeffs: &[Vec<Option<TruncSeries>>],
) -> PolyMat {
    let mut mat = PolyMat::zeros(targets.len(), sources.len());
    for (j, src) in sources.iter().enumerate() {
        for (i, tgt) in targets.iter().enumerate() {
            if let Some(c) = &coeffs[j][i] {
                let base = g_map_multiplier(ring, src, tgt);
                let poly = series_to_model_poly(ring, c).mul(ring, &base);
                mat.set(i, j, poly);
            }
        }
    }
    mat
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qspec::QSpec;
    use crate::exact::rat::{q_pow, qi};
    use crate::exact::series::SeriesRing;
    use crate::hecke::cube::{simple_quotient_complex, steinberg_complex};
    use crate::hecke::{HeckeAlg, Spectrum};
    use crate::model::complex::{o_cube, OCubeKind};

    fn setup(n: usize) -> (HeckeAlg, Spectrum) {
        let alg = HeckeAlg::new(n, QSpec::default_q4());
        let lambda = q_pow(alg.q(), n as i64 - 1);
        let sp = Spectrum::full_chain(&alg.qspec, lambda, n);
        (alg, sp)
    }

    #[test]
    fn shear_transfer() {
        let ring = ModelRing::full_chain(3);
        let sring = SeriesRing::new(3, 3);
        // t_2 - t_1 maps to s_1
        let f = sring.var(1).sub(&sring.var(0));
        let p = series_to_model_poly(&ring, &f);
        assert_eq!(p, Poly::monomial(&ring, ring.var_s(0), qi(1)));
        // t_3 maps to t + s_1 + s_2
        let p = series_to_model_poly(&ring, &sring.var(2));
        assert_eq!(p.0.len(), 3);
    }

    #[test]
    fn dictionary_matches_steinberg_resolution_n2() {
        let (alg, sp) = setup(2);
        let c = steinberg_complex(&alg, &sp, 3).unwrap();
        let image = dictionary(&c);
        assert!(image.check_d_squared());
        let reference = crate::model::steinberg_resolution(2);
        assert!(equal_up_to_sign_diagonal(&image, &reference));
    }

    #[test]
    fn dictionary_matches_steinberg_resolution_n3() {
        let (alg, sp) = setup(3);
        let c = steinberg_complex(&alg, &sp, 2).unwrap();
        let image = dictionary(&c);
        assert!(image.check_d_squared());
        let reference = crate::model::steinberg_resolution(3);
        assert!(equal_up_to_sign_diagonal(&image, &reference));
    }

    #[test]
    fn dictionary_of_growing_cube() {
        let (alg, sp) = setup(3);
        let c = simple_quotient_complex(&alg, &sp, &[0, 1], 2).unwrap();
        let image = dictionary(&c);
        assert!(image.check_d_squared());
        let ring = ModelRing::full_chain(3);
        let reference = o_cube(&ring, &[0, 1], OCubeKind::Growing);
        assert!(equal_up_to_sign_diagonal(&image, &reference));
    }

    #[test]
    fn single_term_goes_to_the_full_ring() {
        let (alg, sp) = setup(2);
        // the longest-class term alone: the whole model ring
        let c = simple_quotient_complex(&alg, &sp, &[], 2).unwrap();
        let image = dictionary(&c);
        assert_eq!(image.terms.len(), 1);
        assert!(image.terms[0].components[0].ann.is_empty());
    }
}
