//! The realization of the functor on standard modules, Steinberg modules
//! and simple quotients: resolve by a principal-series cube, apply the
//! dictionary, take slicewise homology on the model.

use super::dictionary::{dictionary, model_ring_of};
use crate::exact::qspec::QSpec;
use crate::exact::rat::Q;
use crate::hecke::cube::{
    negative_degrees_die, simple_quotient_complex, standard_complex, PsComplex,
};
use crate::hecke::{HeckeAlg, Spectrum};
use crate::model::complex::{identify_cyclic, CyclicId, HomologyTable};
use crate::param::chains::Chain;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RFunctorError {
    #[error("hom solve failed: {0}")]
    Hom(#[from] crate::hecke::intertwine::HomError),
    #[error("spectrum error: {0}")]
    Spectrum(#[from] crate::hecke::spectrum::SpectrumError),
    #[error("image differential does not square to zero")]
    ImageDSquared,
    #[error("hecke differential does not square to zero")]
    HeckeDSquared,
}

/// What to push through the functor.
#[derive(Clone, Debug)]
pub enum RInput {
    /// the standard module of a chain configuration
    Standard { chains: Vec<Chain> },
    /// the simple quotient attached to a vanishing pattern on a full chain
    SimpleQuotient { lambda: Q, n: usize, pattern: Vec<usize> },
}

pub struct FunctorOutput {
    pub input: String,
    pub complex: PsComplex,
    pub hecke_d_squared: bool,
    /// negative-degree classes die under truncation refinement
    pub hecke_exactness: bool,
    /// dimension of the fiber of the top cohomology on the Hecke side
    pub h0_fiber_dim: usize,
    pub image: crate::model::OComplex,
    pub image_d_squared: bool,
    pub image_tables: HomologyTable,
    /// cohomological degrees (parallel to `image_tables`)
    pub degrees: Vec<i32>,
    /// the single degree carrying homology, if concentrated
    pub concentration: Option<i32>,
    /// identification of the concentrated homology as a cyclic module
    pub identified: Option<CyclicId>,
}

/// Runs the resolution-plus-dictionary pipeline.
pub fn r_functor(
    qspec: &QSpec,
    input: &RInput,
    order: usize,
    degree_bound: i64,
    check_exactness: bool,
) -> Result<FunctorOutput, RFunctorError> {
    let (sp, complex, label) = match input {
        RInput::Standard { chains } => {
            let sp = Spectrum::from_chains(qspec, chains)?;
            let alg = HeckeAlg::new(sp.n(), qspec.clone());
            let c = standard_complex(&alg, &sp, order)?;
            let label = format!(
                "standard module of chains {:?}",
                chains.iter().map(|c| (c.lambda.to_string(), c.len)).collect::<Vec<_>>()
            );
            (sp, c, label)
        }
        RInput::SimpleQuotient { lambda, n, pattern } => {
            let sp = Spectrum::full_chain(qspec, lambda.clone(), *n);
            let alg = HeckeAlg::new(*n, qspec.clone());
            let c = simple_quotient_complex(&alg, &sp, pattern, order)?;
            let label = format!("simple quotient, pattern {:?}, chain length {n}", pattern);
            (sp, c, label)
        }
    };
    let hecke_d_squared = complex.check_d_squared();
    if !hecke_d_squared {
        return Err(RFunctorError::HeckeDSquared);
    }
    let hecke_exactness = if check_exactness {
        let hi_order = order + complex.base.len();
        let hi = match input {
            RInput::Standard { .. } => {
                let alg = HeckeAlg::new(sp.n(), qspec.clone());
                standard_complex(&alg, &sp, hi_order)?
            }
            RInput::SimpleQuotient { pattern, n, .. } => {
                let alg = HeckeAlg::new(*n, qspec.clone());
                simple_quotient_complex(&alg, &sp, pattern, hi_order)?
            }
        };
        negative_degrees_die(&complex, &hi)
    } else {
        true
    };
    let h0_fiber_dim = complex.h0_fiber_module().rank;

    let image = dictionary(&complex);
    let image_d_squared = image.check_d_squared();
    if !image_d_squared {
        return Err(RFunctorError::ImageDSquared);
    }
    let image_tables = image.homology(degree_bound);
    let nonzero: Vec<usize> = image_tables
        .iter()
        .enumerate()
        .filter(|(_, t)| !t.is_empty())
        .map(|(i, _)| i)
        .collect();
    let concentration =
        if nonzero.len() == 1 { Some(image.degrees[nonzero[0]]) } else { None };
    let identified =
        nonzero.first().and_then(|&slot| identify_cyclic(&image, slot, degree_bound));
    Ok(FunctorOutput {
        input: label,
        degrees: image.degrees.clone(),
        complex,
        hecke_d_squared,
        hecke_exactness,
        h0_fiber_dim,
        image,
        image_d_squared,
        image_tables,
        concentration,
        identified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::grading::Weight;
    use crate::exact::rat::qi;

    fn qs() -> QSpec {
        QSpec::default_q4()
    }

    #[test]
    fn steinberg_image_gl3() {
        // single chain: H^0 only, annihilator (s_1, s_2)
        let out = r_functor(
            &qs(),
            &RInput::Standard { chains: vec![Chain { lambda: qi(16), len: 3 }] },
            2,
            4,
            true,
        )
        .unwrap();
        assert!(out.hecke_exactness);
        assert_eq!(out.concentration, Some(0));
        let id = out.identified.unwrap();
        assert_eq!(id.ann_vars, vec!["s1".to_string(), "s2".to_string()]);
        assert!(id.table_matches);
        assert_eq!(out.h0_fiber_dim, 1);
    }

    #[test]
    fn line_bundle_images_gl3() {
        // all four patterns on a full chain: concentrated in degree -|pattern|
        // with a free rank-one piece of weight sum-of-alphas
        for pattern in [vec![], vec![0], vec![1], vec![0, 1]] {
            let out = r_functor(
                &qs(),
                &RInput::SimpleQuotient { lambda: qi(16), n: 3, pattern: pattern.clone() },
                3,
                5,
                false,
            )
            .unwrap();
            assert_eq!(
                out.concentration,
                Some(-(pattern.len() as i32)),
                "pattern {pattern:?} not concentrated: {:?}",
                out.image_tables
            );
            let id = out.identified.unwrap();
            let mut expect_w = Weight::zero(3);
            for &i in &pattern {
                expect_w = expect_w.add(&Weight::alpha(3, i + 1));
            }
            assert_eq!(id.gen_weight, expect_w, "pattern {pattern:?}");
            assert_eq!(id.gen_degree, pattern.len() as i64);
            // annihilated exactly by the s-variables of the pattern
            let expect_ann: Vec<String> =
                pattern.iter().map(|i| format!("s{}", i + 1)).collect();
            assert_eq!(id.ann_vars, expect_ann);
            assert!(id.table_matches);
        }
    }

    #[test]
    fn standard_image_multichain() {
        // chains (16,4)+(1) at the fully linked spectrum: the image is the
        // structure sheaf of the orbit closure: u at the cross bond dies
        let out = r_functor(
            &qs(),
            &RInput::Standard {
                chains: vec![Chain { lambda: qi(16), len: 2 }, Chain { lambda: qi(1), len: 1 }],
            },
            2,
            4,
            true,
        )
        .unwrap();
        assert_eq!(out.concentration, Some(0));
        assert_eq!(out.h0_fiber_dim, 3);
        let id = out.identified.unwrap();
        // annihilator: s at the intra bond, u at the cross bond
        assert_eq!(id.ann_vars, vec!["s1".to_string(), "u2".to_string()]);
        assert!(id.table_matches);
    }

    #[test]
    fn generic_point_image_is_free_rank_one_in_degree_zero() {
        // unlinked eigenvalues: one-term complex, image the full model ring
        let out = r_functor(
            &qs(),
            &RInput::Standard {
                chains: vec![
                    Chain { lambda: qi(3), len: 1 },
                    Chain { lambda: qi(1), len: 1 },
                ],
            },
            2,
            4,
            true,
        )
        .unwrap();
        assert_eq!(out.concentration, Some(0));
        let id = out.identified.unwrap();
        assert!(id.ann_vars.is_empty());
        assert!(id.table_matches);
        assert_eq!(out.h0_fiber_dim, 2);
    }
}
