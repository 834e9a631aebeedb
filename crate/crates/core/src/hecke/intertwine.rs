//! Intertwining operators between principal series.
//!
//! A map out of an induced module `H (x)_{H_T} chi` is the same as a vector
//! in the target on which every `theta` acts through `chi`, so Hom spaces
//! are eigenvector problems over the truncated base, solved exactly degree
//! by degree. Each Hom space between principal series is certified free of
//! rank one; the canonical generator is normalized so that it carries the
//! sign-spherical vector of the source to the sign-spherical vector of the
//! target with coefficient *exactly* the product of the bond differences
//! `t_{i+1} - t_i` separating the two orderings.
//!
//! Truncation would blur that normalization (the annihilator of a monomial
//! in a truncated ring is large), so intertwiners are solved at the working
//! order plus the degree of their bond monomial and truncated afterwards;
//! the truncated matrices are then the exact truncations of the honest
//! power-series operators, and all composition identities hold on the nose.

use super::elem::HeckeAlg;
use super::module::{e_st, ps_cyclic_vector, HModule};
use super::perm::{all_perms, Perm};
use super::smat::{MonBasis, SMat};
use super::spectrum::Spectrum;
use crate::exact::matrix::QMat;
use crate::exact::rat::Q;
use crate::exact::series::{SeriesRing, TruncSeries};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HomError {
    #[error("hom space is not free of rank one (fiber dimension {fiber})")]
    NotFreeRankOne { fiber: usize },
    #[error("hom solution space is inconsistent at degree {degree} (not free over the base)")]
    Inconsistent { degree: usize },
    #[error("spherical normalization failed: {0}")]
    Normalization(String),
    #[error("coefficient extraction failed (map outside the free hom module)")]
    NotInHomModule,
}

/// Result of the degreewise eigenvector solve for
/// `{ y : theta_j y = chi_j y }`.
pub struct EigenSolve {
    /// dimension of the fiber solution space at the origin
    pub fiber_dim: usize,
    /// `Q`-dimension of the full solution space when it is free over the
    /// base (`fiber_dim * dim A`), certified by degreewise consistency
    pub dim_q: usize,
    /// a solution with unimodular fiber, when the fiber is nonzero
    pub generator: Option<Vec<TruncSeries>>,
    /// first inconsistent degree, if the solve broke down
    pub defect_degree: Option<usize>,
}

/// Precomputed elimination for repeated solves against one matrix.
struct Solver {
    rref: QMat,
    transform: QMat,
    pivots: Vec<usize>,
    cols: usize,
}

impl Solver {
    fn new(c: &QMat) -> Self {
        let mut aug = c.hstack(&QMat::identity(c.rows));
        let pivots_all = aug.rref();
        let pivots: Vec<usize> = pivots_all.into_iter().filter(|&p| p < c.cols).collect();
        let rref = QMat::from_fn(c.rows, c.cols, |i, j| aug[(i, j)].clone());
        let transform = QMat::from_fn(c.rows, c.rows, |i, j| aug[(i, c.cols + j)].clone());
        Solver { rref, transform, pivots, cols: c.cols }
    }

    fn kernel(&self) -> Vec<Vec<Q>> {
        let (_, ker) = self.rref.rank_kernel();
        ker
    }

    /// A particular solution of `C x = b`, or `None` if inconsistent.
    fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let tb = self.transform.mul_vec(b);
        // rows beyond the pivot rows must vanish
        for r in self.pivots.len()..self.rref.rows {
            if !tb[r].is_zero() {
                return None;
            }
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &p) in self.pivots.iter().enumerate() {
            x[p] = tb[r].clone();
        }
        // rref rows may still involve free columns; subtract their effect
        // (free variables are set to zero, so nothing to subtract)
        Some(x)
    }
}

/// Solves `theta_j y = chi_j y` for all `j`, degree by degree.
pub fn solve_character_eigenspace(target: &HModule, chi: &[TruncSeries]) -> EigenSolve {
    let ring = target.ring;
    let r = target.rank;
    let n = target.alg.n;
    // stacked constant-part matrix
    let mut c0 = QMat::zeros(n * r, r);
    for j in 0..n {
        let fib = target.theta_act[j].fiber();
        let cj = chi[j].constant_term();
        for a in 0..r {
            for b in 0..r {
                let mut v = fib[(a, b)].clone();
                if a == b {
                    v -= &cj;
                }
                c0[(j * r + a, b)] = v;
            }
        }
    }
    let solver = Solver::new(&c0);
    let kernel = solver.kernel();
    let fiber_dim = kernel.len();
    if fiber_dim == 0 {
        return EigenSolve { fiber_dim, dim_q: 0, generator: None, defect_degree: None };
    }

    // walk one solution path starting from the first fiber vector
    let mut y: Vec<TruncSeries> =
        kernel[0].iter().map(|c| ring.constant(c.clone())).collect();
    let mons_by_degree: Vec<Vec<Vec<u16>>> = {
        let mut v: Vec<Vec<Vec<u16>>> = vec![Vec::new(); ring.order];
        for m in ring.monomials() {
            let d: usize = m.iter().map(|&x| x as usize).sum();
            v[d].push(m);
        }
        v
    };
    for d in 1..ring.order {
        // residual = stacked (theta_j y - chi_j y), correct below degree d
        let mut residual: Vec<TruncSeries> = Vec::with_capacity(n * r);
        for j in 0..n {
            let img = target.theta_act[j].apply(&y);
            for a in 0..r {
                residual.push(img[a].sub(&chi[j].mul(&y[a])));
            }
        }
        for alpha in &mons_by_degree[d] {
            let b: Vec<Q> = residual.iter().map(|f| -f.coeff(alpha)).collect();
            match solver.solve(&b) {
                Some(x) => {
                    for (i, xi) in x.iter().enumerate() {
                        y[i].add_term(alpha, xi);
                    }
                }
                None => {
                    return EigenSolve {
                        fiber_dim,
                        dim_q: 0,
                        generator: None,
                        defect_degree: Some(d),
                    };
                }
            }
        }
    }
    let dim_q = fiber_dim * ring.dim();
    EigenSolve { fiber_dim, dim_q, generator: Some(y), defect_degree: None }
}

/// Rank-one freeness certificate for `Hom(source, target)` with a
/// principal-series source: fiber dimension one plus degreewise
/// consistency, which pins the solution space to `A * generator`.
pub struct HomSpace {
    pub fiber_dim: usize,
    pub dim_q: usize,
    pub free_rank_one: bool,
    pub generator_y: Option<Vec<TruncSeries>>,
}

pub fn hom_space(source: &HModule, target: &HModule) -> HomSpace {
    let chi = source.ps_char.as_ref().expect("source must be an induced character module");
    let sol = solve_character_eigenspace(target, chi);
    let free = sol.fiber_dim == 1 && sol.defect_degree.is_none();
    HomSpace {
        fiber_dim: sol.fiber_dim,
        dim_q: sol.dim_q,
        free_rank_one: free,
        generator_y: sol.generator,
    }
}

/// Realizes a hom out of a principal series from the image `y` of the
/// cyclic vector: the column at `T_v` is `T_v y`, built by extending along
/// reduced words so each column costs one generator application.
pub fn realize_hom(target: &HModule, y: &[TruncSeries]) -> SMat {
    let n = target.alg.n;
    let perms = all_perms(n);
    let mut cols: Vec<Option<Vec<TruncSeries>>> = vec![None; perms.len()];
    let id_idx = perms.binary_search(&Perm::identity(n)).unwrap();
    cols[id_idx] = Some(y.to_vec());
    // fill by increasing length
    let mut order: Vec<usize> = (0..perms.len()).collect();
    order.sort_by_key(|&i| perms[i].length());
    for &i in &order {
        if cols[i].is_some() {
            continue;
        }
        let v = &perms[i];
        // v = s_j v' with l(v') = l(v) - 1
        let j = (0..n - 1)
            .find(|&j| {
                let v2 = v.left_simple(j);
                v2.length() < v.length()
            })
            .expect("non-identity permutation has a left descent");
        let v2 = v.left_simple(j);
        let prev = cols[perms.binary_search(&v2).unwrap()]
            .clone()
            .expect("columns filled by increasing length");
        cols[i] = Some(target.t_act[j].apply(&prev));
    }
    let mut m = SMat::zeros(target.ring, target.rank, perms.len());
    for (c, col) in cols.into_iter().enumerate() {
        let col = col.unwrap();
        for i in 0..target.rank {
            m[(i, c)] = col[i].clone();
        }
    }
    m
}

/// A normalized intertwiner between two principal series, stored at the
/// working order after an internally higher-order solve.
pub struct Intertwiner {
    pub source_w: Perm,
    pub target_w: Perm,
    /// realized matrix in the `T_v` bases, at the working order
    pub mat: SMat,
    /// spherical scalar: exactly the bond monomial
    pub scalar: TruncSeries,
    /// bonds in `I_source \ I_target`
    pub bond_diff: Vec<usize>,
}

/// Sign-spherical vector `e_st . (1 (x) 1)` of a principal series, computed
/// columnwise from the realized identity map.
pub fn spherical_vector(m: &HModule) -> Vec<TruncSeries> {
    let cyc = ps_cyclic_vector(m);
    let id = realize_hom(m, &cyc);
    apply_est_columns(&m.alg, &id)
}

/// `e_st` applied through realized columns: `sum_w c_w * column_w`.
fn apply_est_columns(alg: &HeckeAlg, realized: &SMat) -> Vec<TruncSeries> {
    let est = e_st(alg);
    let perms = all_perms(alg.n);
    let mut out = vec![realized.ring.zero(); realized.rows];
    for ((w, x), c) in est.terms() {
        assert!(x.iter().all(|&e| e == 0));
        let col = perms.binary_search(w).unwrap();
        for i in 0..realized.rows {
            out[i] = out[i].add(&realized[(i, col)].scale(c));
        }
    }
    out
}

fn proportionality(
    v: &[TruncSeries],
    w: &[TruncSeries],
    basis: &MonBasis,
) -> Result<TruncSeries, HomError> {
    let j = v
        .iter()
        .position(|x| x.is_unit())
        .ok_or_else(|| HomError::Normalization("no unit coordinate in spherical vector".into()))?;
    let c = w[j].mul(&v[j].invert().unwrap());
    for i in 0..v.len() {
        if v[i].mul(&c) != w[i] {
            return Err(HomError::Normalization(
                "image is not proportional to the spherical vector".into(),
            ));
        }
    }
    let _ = basis;
    Ok(c)
}

/// The bond monomial `prod_{i in bonds} (t_{i+1} - t_i)`.
pub fn bond_monomial(ring: SeriesRing, bonds: &[usize]) -> TruncSeries {
    let mut m = ring.one();
    for &i in bonds {
        m = m.mul(&ring.var(i + 1).sub(&ring.var(i)));
    }
    m
}

/// Builds the normalized intertwiner between the principal series labelled
/// `w` and `w2`, at truncation `order`.
pub fn normalized_intertwiner(
    alg: &HeckeAlg,
    sp: &Spectrum,
    w: &Perm,
    w2: &Perm,
    order: usize,
) -> Result<Intertwiner, HomError> {
    let iw = sp.i_set(w);
    let iw2 = sp.i_set(w2);
    let diff: Vec<usize> = iw.iter().copied().filter(|i| !iw2.contains(i)).collect();
    let positions: Vec<usize> = (0..sp.n()).collect();
    normalized_intertwiner_core(
        alg,
        sp.n(),
        &positions,
        &sp.values,
        &sp.scale,
        w,
        w2,
        &diff,
        order,
    )
}

/// The intertwiner solver for a block algebra sitting inside a larger
/// deformation base: `positions[j]` names the global variable deforming
/// the `j`-th eigenvalue (consecutive within a block). `sep_bonds` are the
/// block-local bonds separating the two orderings.
#[allow(clippy::too_many_arguments)]
pub fn normalized_intertwiner_core(
    alg: &HeckeAlg,
    global_vars: usize,
    positions: &[usize],
    values: &[crate::exact::rat::Q],
    scales: &[crate::exact::rat::Q],
    w: &Perm,
    w2: &Perm,
    sep_bonds: &[usize],
    order: usize,
) -> Result<Intertwiner, HomError> {
    use super::module::ps_from_character;
    let m = alg.n;
    assert_eq!(positions.len(), m);
    // solve above the working order so the normalization is unambiguous
    let hi = order + sep_bonds.len();
    let ring_hi = SeriesRing::new(global_vars, hi);
    let char_at = |ww: &Perm| -> Vec<TruncSeries> {
        (0..m)
            .map(|j| {
                let p = ww.apply(j);
                ring_hi
                    .constant(values[p].clone())
                    .add(&ring_hi.var(positions[p]).scale(&scales[p]))
            })
            .collect()
    };
    let source = {
        let mut s = ps_from_character(alg, ring_hi, &char_at(w));
        s.ps_label = Some(w.clone());
        s
    };
    let target = {
        let mut t = ps_from_character(alg, ring_hi, &char_at(w2));
        t.ps_label = Some(w2.clone());
        t
    };
    let hom = hom_space(&source, &target);
    if hom.fiber_dim != 1 {
        return Err(HomError::NotFreeRankOne { fiber: hom.fiber_dim });
    }
    let Some(y) = hom.generator_y else {
        return Err(HomError::Inconsistent { degree: 0 });
    };
    let f0 = realize_hom(&target, &y);
    let basis_hi = MonBasis::new(ring_hi);
    let x_src = spherical_vector(&source);
    let x_tgt = spherical_vector(&target);
    let c0 = proportionality(&x_tgt, &f0.apply(&x_src), &basis_hi)?;
    let sep_vars: Vec<(usize, usize)> =
        sep_bonds.iter().map(|&j| (positions[j], positions[j + 1])).collect();
    let mono_of = |ring: SeriesRing| {
        let mut acc = ring.one();
        for &(a, b) in &sep_vars {
            acc = acc.mul(&ring.var(b).sub(&ring.var(a)));
        }
        acc
    };
    let m_hi = mono_of(ring_hi);
    let mult = basis_hi.mult_matrix(&m_hi);
    let rhs = basis_hi.flatten_vec(&[c0.clone()]);
    let u_flat = mult.solve(&rhs).ok_or_else(|| {
        HomError::Normalization("spherical scalar is not a unit multiple of the bond monomial".into())
    })?;
    let u = basis_hi.unflatten_vec(1, &u_flat).pop().unwrap();
    if !u.is_unit() {
        return Err(HomError::Normalization("unit correction is not a unit".into()));
    }
    let uinv = u.invert().unwrap();
    let mat_hi = f0.scale(&uinv);
    // truncate down to the working order: this kills the normalization
    // ambiguity, leaving the exact truncation of the honest operator
    let ring = SeriesRing::new(global_vars, order);
    let mat = SMat::from_fn(ring, mat_hi.rows, mat_hi.cols, |i, j| mat_hi[(i, j)].truncate(order));
    Ok(Intertwiner {
        source_w: w.clone(),
        target_w: w2.clone(),
        mat,
        scalar: mono_of(ring),
        bond_diff: sep_bonds.to_vec(),
    })
}

/// Expresses a hom `g` out of `gen`'s source as `gamma * gen`; `gamma` is
/// unique because the generator has a unimodular cyclic image.
pub fn coefficient_against(
    gen: &Intertwiner,
    g: &SMat,
    basis: &MonBasis,
) -> Result<TruncSeries, HomError> {
    let n = gen.source_w.n();
    let perms = all_perms(n);
    let cyc = perms.binary_search(&Perm::identity(n)).unwrap();
    let d = basis.dim();
    let mut sys = QMat::zeros(gen.mat.rows * d, d);
    let mut rhs = Vec::with_capacity(gen.mat.rows * d);
    for i in 0..gen.mat.rows {
        let block = basis.mult_matrix(&gen.mat[(i, cyc)]);
        for r in 0..d {
            for c in 0..d {
                sys[(i * d + r, c)] = block[(r, c)].clone();
            }
        }
        rhs.extend(basis.flatten_vec(&[g[(i, cyc)].clone()]));
    }
    let sol = sys.solve(&rhs).ok_or(HomError::NotInHomModule)?;
    let gamma = basis.unflatten_vec(1, &sol).pop().unwrap();
    if &gen.mat.scale(&gamma) != g {
        return Err(HomError::NotInHomModule);
    }
    Ok(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qspec::QSpec;
    use crate::exact::rat::q_pow;
    use crate::hecke::module::principal_series;

    fn setup(n: usize) -> (HeckeAlg, Spectrum) {
        let alg = HeckeAlg::new(n, QSpec::default_q4());
        let lambda = q_pow(alg.q(), n as i64 - 1);
        let sp = Spectrum::full_chain(&alg.qspec, lambda, n);
        (alg, sp)
    }

    #[test]
    fn hom_spaces_are_rank_one_n2() {
        let (alg, sp) = setup(2);
        let perms = all_perms(2);
        for w in &perms {
            for w2 in &perms {
                let src = principal_series(&alg, &sp, w, 3);
                let tgt = principal_series(&alg, &sp, w2, 3);
                let hom = hom_space(&src, &tgt);
                assert!(hom.free_rank_one, "hom({:?},{:?})", w, w2);
                assert_eq!(hom.dim_q, src.ring.dim());
            }
        }
    }

    #[test]
    fn normalized_scalars_and_composition_n2() {
        let (alg, sp) = setup(2);
        let id = Perm::identity(2);
        let s = Perm::simple(2, 0);
        let order = 4;
        // I_id = {0}, I_s = {}: f(id, s) multiplies by t_2 - t_1 on spherical
        // vectors; f(s, id) is unit-normalized
        let f_up = normalized_intertwiner(&alg, &sp, &id, &s, order).unwrap();
        let f_dn = normalized_intertwiner(&alg, &sp, &s, &id, order).unwrap();
        let ring = f_up.mat.ring;
        let t_diff = ring.var(1).sub(&ring.var(0));
        assert_eq!(f_up.scalar, t_diff);
        assert_eq!(f_dn.scalar, ring.one());
        // both composites are exactly t_2 - t_1 times the identity
        let comp = f_dn.mat.mul(&f_up.mat);
        assert_eq!(comp, SMat::identity(ring, 2).scale(&t_diff));
        let comp = f_up.mat.mul(&f_dn.mat);
        assert_eq!(comp, SMat::identity(ring, 2).scale(&t_diff));
        assert!(comp.fiber().is_zero());
    }

    #[test]
    fn triple_composition_monomials_n3() {
        let (alg, sp) = setup(3);
        let order = 3;
        let subsets: Vec<Vec<usize>> = vec![vec![], vec![0], vec![1], vec![0, 1]];
        let reps: Vec<Perm> = subsets.iter().map(|s| sp.class_representative(s)).collect();
        let f_a = normalized_intertwiner(&alg, &sp, &reps[3], &reps[1], order).unwrap();
        let f_b = normalized_intertwiner(&alg, &sp, &reps[1], &reps[0], order).unwrap();
        let f_c = normalized_intertwiner(&alg, &sp, &reps[3], &reps[0], order).unwrap();
        // both composition routes equal the direct map exactly
        assert_eq!(f_b.mat.mul(&f_a.mat), f_c.mat);
        let g_a = normalized_intertwiner(&alg, &sp, &reps[3], &reps[2], order).unwrap();
        let g_b = normalized_intertwiner(&alg, &sp, &reps[2], &reps[0], order).unwrap();
        assert_eq!(g_b.mat.mul(&g_a.mat), f_c.mat);
        // coefficient extraction against the generator
        let basis = MonBasis::new(f_c.mat.ring);
        let comp = f_b.mat.mul(&f_a.mat);
        let gamma = coefficient_against(&f_c, &comp, &basis).unwrap();
        assert_eq!(gamma, f_c.mat.ring.one());
    }
}
