//! Minimal free resolutions over the model ring and bigraded Ext tables.
//!
//! The ring is not regular, so cyclic monomial quotients have infinite
//! minimal resolutions; they are summarized finitely by detecting eventual
//! periodicity of the presentation matrices (the two-periodic `u, s, u, s`
//! pattern in rank one). Ext tables are computed slicewise from the
//! resolution; weight-zero rows are the sections over the stack quotient.

use super::complex::{identify_cyclic, CyclicId, OComplex};
use super::module::{Component, GradedModule, PolyMat};
use super::ring::{ModelRing, Monomial, Poly};
use crate::exact::grading::Weight;
use crate::exact::matrix::QMat;
use crate::exact::rat::Q;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExtError {
    #[error("resolution step {0} found no generators below the search bound but the kernel persists")]
    GeneratorsBeyondBound(usize),
    #[error("periodicity not detected within {0} steps; table is partial")]
    NoPeriodicity(usize),
}

#[derive(Clone, Debug)]
pub struct FreeStep {
    /// generator bidegrees of `F_j`
    pub shifts: Vec<(i64, Weight)>,
    /// the map `F_j -> F_{j-1}`
    pub matrix: PolyMat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodCert {
    pub start: usize,
    pub period: usize,
    /// degree and weight twist acquired over one period
    pub degree_twist: i64,
    pub weight_twist: Weight,
}

pub struct FreeResolution {
    pub ring: ModelRing,
    pub target_ann: Vec<Monomial>,
    pub steps: Vec<FreeStep>,
    pub periodicity: Option<PeriodCert>,
}

fn free_module(ring: &ModelRing, shifts: &[(i64, Weight)]) -> GradedModule {
    GradedModule {
        components: shifts
            .iter()
            .map(|(d, w)| Component::free(ring.n).shifted(*d, w.clone()))
            .collect(),
    }
}

/// Canonical signature of a step, invariant under permutations of rows and
/// columns: per column, the sorted list of (entry, relative shift).
fn step_signature(prev_shifts: &[(i64, Weight)], step: &FreeStep) -> String {
    let mut cols: Vec<String> = Vec::new();
    for j in 0..step.matrix.cols {
        let mut rows: Vec<String> = Vec::new();
        for i in 0..step.matrix.rows {
            let p = step.matrix.entry(i, j);
            if p.is_zero() {
                continue;
            }
            let rel_d = step.shifts[j].0 - prev_shifts[i].0;
            let rel_w = step.shifts[j].1.sub(&prev_shifts[i].1);
            rows.push(format!("{:?}@{}:{}", p, rel_d, rel_w));
        }
        rows.sort();
        cols.push(rows.join("|"));
    }
    cols.sort();
    cols.join("||")
}

/// Minimal free resolution of `R/ann` to the requested number of steps.
/// Kernel generators are hunted slicewise up to a per-step search bound.
pub fn resolve(
    ring: &ModelRing,
    ann: &[Monomial],
    num_steps: usize,
    extra_degree: i64,
) -> Result<FreeResolution, ExtError> {
    let mut steps: Vec<FreeStep> = Vec::new();
    if ann.is_empty() || num_steps == 0 {
        return Ok(FreeResolution {
            ring: ring.clone(),
            target_ann: ann.to_vec(),
            steps,
            periodicity: Some(PeriodCert {
                start: 0,
                period: 1,
                degree_twist: 0,
                weight_twist: Weight::zero(ring.n),
            }),
        });
    }
    // step 1: the annihilator generators
    let mut m1 = PolyMat::zeros(1, ann.len());
    let mut shifts1 = Vec::new();
    for (j, a) in ann.iter().enumerate() {
        m1.set(0, j, Poly::monomial(ring, a.clone(), Q::from_integer(1.into())));
        shifts1.push((a.degree(), a.weight(ring.n)));
    }
    steps.push(FreeStep { shifts: shifts1, matrix: m1 });

    for step_no in 2..=num_steps {
        let prev = steps[step_no - 2].clone();
        let prev_prev_shifts: Vec<(i64, Weight)> = if step_no == 2 {
            vec![(0, Weight::zero(ring.n))]
        } else {
            steps[step_no - 3].shifts.clone()
        };
        let source = free_module(ring, &prev.shifts);
        let target = free_module(ring, &prev_prev_shifts);
        let max_shift = prev.shifts.iter().map(|(d, _)| *d).max().unwrap_or(0);
        let bound = max_shift + extra_degree;
        // hunt kernel generators, tracking the span of existing ones
        let mut gens: Vec<(i64, Weight, Vec<Poly>)> = Vec::new();
        let weights = ring.weights_up_to(bound);
        for d in 0..=bound {
            for w in &weights {
                let src_slice = source.slice(ring, d, w);
                if src_slice.is_empty() {
                    continue;
                }
                let mat = prev.matrix.slice_matrix(ring, &source, &target, d, w);
                let (_, kernel) = mat.rank_kernel();
                if kernel.is_empty() {
                    continue;
                }
                // span of R * existing generators in this slice
                let mut span_cols: Vec<Vec<Q>> = Vec::new();
                for (gd, gw, gvec) in &gens {
                    for mult in ring.slice(d - gd, &w.sub(gw)) {
                        let mut col = vec![Q::zero(); src_slice.len()];
                        for (ci, p) in gvec.iter().enumerate() {
                            for (pm, c) in &p.0 {
                                if let Some(prod) = ring.mul(&mult, pm) {
                                    if let Some(row) = src_slice
                                        .iter()
                                        .position(|(cj, mono)| *cj == ci && *mono == prod)
                                    {
                                        col[row] += c;
                                    }
                                }
                            }
                        }
                        span_cols.push(col);
                    }
                }
                let mut span = QMat::from_fn(src_slice.len(), span_cols.len(), |i, j| {
                    span_cols[j][i].clone()
                });
                let mut span_rank = span.rank();
                for kv in &kernel {
                    let col = QMat::from_fn(kv.len(), 1, |i, _| kv[i].clone());
                    let bigger = span.hstack(&col);
                    if bigger.rank() > span_rank {
                        span = bigger;
                        span_rank += 1;
                        let mut vec_p = vec![Poly::zero(); prev.shifts.len()];
                        for (row, (ci, mono)) in src_slice.iter().enumerate() {
                            if !kv[row].is_zero() {
                                vec_p[*ci] = vec_p[*ci]
                                    .add(&Poly(vec![(mono.clone(), kv[row].clone())]));
                            }
                        }
                        gens.push((d, w.clone(), vec_p));
                    }
                }
            }
        }
        if gens.is_empty() {
            break;
        }
        let shifts: Vec<(i64, Weight)> = gens.iter().map(|(d, w, _)| (*d, w.clone())).collect();
        let mut matrix = PolyMat::zeros(prev.shifts.len(), gens.len());
        for (j, (_, _, gvec)) in gens.iter().enumerate() {
            for (i, p) in gvec.iter().enumerate() {
                matrix.set(i, j, p.clone());
            }
        }
        steps.push(FreeStep { shifts, matrix });
    }

    // periodicity: two consecutive signature matches
    let sig = |j: usize, steps: &[FreeStep]| -> String {
        let prev_shifts: Vec<(i64, Weight)> = if j == 0 {
            vec![(0, Weight::zero(ring.n))]
        } else {
            steps[j - 1].shifts.clone()
        };
        step_signature(&prev_shifts, &steps[j])
    };
    let mut periodicity = None;
    'find: for period in 1..steps.len() {
        for start in 0..steps.len().saturating_sub(period + 1) {
            if start + period + 1 < steps.len()
                && sig(start, &steps) == sig(start + period, &steps)
                && sig(start + 1, &steps) == sig(start + period + 1, &steps)
            {
                let d_twist = steps[start + period].shifts[0].0 - steps[start].shifts[0].0;
                let w_twist =
                    steps[start + period].shifts[0].1.sub(&steps[start].shifts[0].1);
                periodicity = Some(PeriodCert {
                    start,
                    period,
                    degree_twist: d_twist,
                    weight_twist: w_twist,
                });
                break 'find;
            }
        }
    }
    Ok(FreeResolution { ring: ring.clone(), target_ann: ann.to_vec(), steps, periodicity })
}

/// One row of an Ext table.
#[derive(Clone, Debug)]
pub struct ExtEntry {
    pub i: usize,
    /// `(degree, weight, dim)` of each nonzero slice within the bound
    pub table: Vec<(i64, Weight, usize)>,
    pub cyclic: Option<CyclicId>,
}

pub struct ExtTable {
    pub entries: Vec<ExtEntry>,
    pub periodicity: Option<PeriodCert>,
}

impl ExtTable {
    /// Weight-zero subtable: the sections over the stack quotient.
    pub fn invariants(&self) -> Vec<(usize, Vec<(i64, usize)>)> {
        self.entries
            .iter()
            .map(|e| {
                (
                    e.i,
                    e.table
                        .iter()
                        .filter(|(_, w, _)| w.is_zero())
                        .map(|(d, _, x)| (*d, *x))
                        .collect(),
                )
            })
            .collect()
    }
}

/// The bigraded `Ext^i(R/ann1, M2)` tables for `i <= i_max`.
pub fn ext_table(
    ring: &ModelRing,
    ann1: &[Monomial],
    m2: &Component,
    i_max: usize,
    degree_bound: i64,
) -> Result<ExtTable, ExtError> {
    let res = resolve(ring, ann1, i_max + 1, degree_bound)?;
    // Hom(F_i, M2): one M2-copy per generator, shifts negated
    let hom_module = |shifts: &[(i64, Weight)]| -> GradedModule {
        GradedModule {
            components: shifts
                .iter()
                .map(|(d, w)| Component {
                    ann: m2.ann.clone(),
                    shift_deg: m2.shift_deg - d,
                    shift_wt: m2.shift_wt.sub(w),
                })
                .collect(),
        }
    };
    let mut terms = vec![hom_module(&[(0, Weight::zero(ring.n))])];
    let mut maps = Vec::new();
    for step in &res.steps {
        terms.push(hom_module(&step.shifts));
        // the induced map is the transpose of the step matrix
        let mut t = PolyMat::zeros(step.matrix.cols, step.matrix.rows);
        for i in 0..step.matrix.rows {
            for j in 0..step.matrix.cols {
                t.set(j, i, step.matrix.entry(i, j).clone());
            }
        }
        maps.push(t);
    }
    let degrees: Vec<i32> = (0..terms.len() as i32).collect();
    let complex = OComplex { ring: ring.clone(), degrees, terms, maps };
    let tables = complex.homology(degree_bound);
    let mut entries = Vec::new();
    for i in 0..=i_max {
        let table = if i < tables.len() { tables[i].clone() } else { Vec::new() };
        let cyclic = if i < tables.len() && !table.is_empty() {
            identify_cyclic(&complex, i, degree_bound)
        } else {
            None
        };
        entries.push(ExtEntry { i, table, cyclic });
    }
    Ok(ExtTable { entries, periodicity: res.periodicity })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl2() -> ModelRing {
        ModelRing::full_chain(2)
    }

    #[test]
    fn periodic_resolution_of_the_u_quotient() {
        // R/(u): ... -> R(-3) -u-> R(-2) -s-> R(-1) -u-> R, two-periodic
        let r = gl2();
        let res = resolve(&r, &[r.var_u(0)], 6, 4).unwrap();
        assert!(res.steps.len() >= 5);
        for step in &res.steps {
            assert_eq!(step.shifts.len(), 1);
        }
        let p = res.periodicity.clone().expect("two-periodic resolution detected");
        assert_eq!(p.period, 2);
        assert_eq!(p.degree_twist, 2);
        // one period multiplies the twist by u then s, so the weight moves by alpha
        assert_eq!(p.weight_twist, Weight::alpha(2, 1));
    }

    #[test]
    fn ext_of_u_quotient_into_the_ring() {
        // Ext^0 = Hom(R/(u), R) = ann_R(u) = (s), cyclic with annihilator
        // (u) after the shift; Ext^{i >= 1} = 0
        let r = gl2();
        let table = ext_table(&r, &[r.var_u(0)], &Component::free(2), 4, 5).unwrap();
        let e0 = &table.entries[0];
        assert!(!e0.table.is_empty());
        let id = e0.cyclic.clone().unwrap();
        assert_eq!(id.gen_degree, 1);
        assert!(id.gen_weight.is_zero());
        assert_eq!(id.ann_vars, vec!["u1".to_string()]);
        assert!(id.table_matches);
        for e in &table.entries[1..] {
            assert!(e.table.is_empty(), "Ext^{} nonzero: {:?}", e.i, e.table);
        }
    }

    #[test]
    fn ext_of_u_quotient_into_itself() {
        // Ext^0 cyclic ann (u); odd Ext zero; even Ext^{2j} cyclic with
        // annihilator (s, u) and weight twist -j alpha
        let r = gl2();
        let m2 = Component::cyclic(vec![r.var_u(0)], 2);
        let table = ext_table(&r, &[r.var_u(0)], &m2, 6, 6).unwrap();
        let e0 = table.entries[0].cyclic.clone().unwrap();
        assert_eq!(e0.gen_degree, 0);
        assert_eq!(e0.ann_vars, vec!["u1".to_string()]);
        assert!(e0.table_matches);
        for i in [1usize, 3, 5] {
            assert!(table.entries[i].table.is_empty(), "odd Ext^{i} nonzero");
        }
        for i in [2usize, 4, 6] {
            let id = table.entries[i].cyclic.clone().unwrap();
            assert_eq!(id.ann_vars, vec!["s1".to_string(), "u1".to_string()]);
            // twist: the generator sits in weight -(i/2) alpha
            assert_eq!(id.gen_weight, Weight::alpha(2, 1).scaled(-(i as i64) / 2));
            assert!(id.table_matches);
            let inv = &table.invariants()[i].1;
            assert!(inv.is_empty(), "Ext^{i} has invariants: {inv:?}");
        }
        assert_eq!(table.periodicity.clone().unwrap().period, 2);
    }

    #[test]
    fn ext_identity_for_the_free_module() {
        let r = gl2();
        let table = ext_table(&r, &[], &Component::free(2), 3, 4).unwrap();
        // Ext^0(R, R) = R: contains the identity in degree 0 weight 0
        let e0 = &table.entries[0];
        assert!(e0.table.iter().any(|(d, w, x)| *d == 0 && w.is_zero() && *x == 1));
        for e in &table.entries[1..] {
            assert!(e.table.is_empty());
        }
    }

    #[test]
    fn mixed_annihilator_resolution_gl3() {
        // R/(u1) over the full GL3 ring: still two-periodic in s1, u1
        let r = ModelRing::full_chain(3);
        let res = resolve(&r, &[r.var_u(0)], 5, 4).unwrap();
        let p = res.periodicity.clone().expect("periodicity");
        assert_eq!(p.period, 2);
    }
}
