//! The finite Hecke algebra, its center and its block idempotents.
//!
//! Blocks are indexed by partitions of `n` via the unipotent constituents
//! of the unramified principal series of the finite group: the single-row
//! partition labels the Steinberg block (sign action) and the single-column
//! partition the trivial block. Central primitive idempotents are computed
//! by exact splitting of the center in the left regular representation;
//! labels and multiplicities are cross-checked against seminormal Specht
//! modules.

use super::elem::{Elem, HeckeAlg};
use super::perm::all_perms;
use crate::exact::matrix::QMat;
use crate::exact::rat::Q;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FiniteError {
    #[error("center has dimension {0}, expected the number of partitions {1}")]
    CenterDimension(usize, usize),
    #[error("could not split the center over Q: {0}")]
    SplitFailure(String),
    #[error("block labelling failed: {0}")]
    Labelling(String),
}

/// A labelled central primitive idempotent of the finite Hecke algebra.
#[derive(Clone, Debug)]
pub struct BlockIdempotent {
    pub partition: crate::param::Partition,
    pub element: Elem,
    /// multiplicity of the block's constituent in the unramified principal
    /// series: the block has dimension `multiplicity^2`
    pub multiplicity: usize,
}

/// Matrix of left multiplication by a theta-free element on the `T_w` basis.
pub fn regular_rep(alg: &HeckeAlg, x: &Elem) -> QMat {
    let n = alg.n;
    let perms = all_perms(n);
    let mut m = QMat::zeros(perms.len(), perms.len());
    for (col, w) in perms.iter().enumerate() {
        let prod = x.mul(alg, &Elem::t_word(n, w));
        for ((u, z), c) in prod.terms() {
            assert!(z.iter().all(|&e| e == 0), "element leaves the finite part");
            m[(perms.binary_search(u).unwrap(), col)] += c;
        }
    }
    m
}

/// Basis of the center of the finite Hecke algebra.
pub fn finite_center(alg: &HeckeAlg) -> Vec<Elem> {
    let n = alg.n;
    let perms = all_perms(n);
    let nw = perms.len();
    // unknowns: coefficients of z; equations: z T_s - T_s z = 0 for all s
    let mut rows = Vec::new();
    for i in 0..n - 1 {
        let t = Elem::t_gen(n, i);
        // column w: coefficients of T_w t - t T_w
        let mut cols = Vec::new();
        for w in &perms {
            let tw = Elem::t_word(n, w);
            let comm = tw.mul(alg, &t).sub(&t.mul(alg, &tw));
            let mut v = vec![Q::zero(); nw];
            for ((u, z), c) in comm.terms() {
                assert!(z.iter().all(|&e| e == 0));
                v[perms.binary_search(u).unwrap()] = c.clone();
            }
            cols.push(v);
        }
        for r in 0..nw {
            rows.push((0..nw).map(|c| cols[c][r].clone()).collect::<Vec<Q>>());
        }
    }
    let sys = QMat::from_rows(rows);
    let (_, kernel) = sys.rank_kernel();
    kernel
        .into_iter()
        .map(|v| {
            let mut e = Elem::zero(n);
            for (i, c) in v.into_iter().enumerate() {
                e.add_term(perms[i].clone(), vec![0; n], c);
            }
            e
        })
        .collect()
}

/// Splits `1` into the central primitive idempotents by exact spectral
/// decomposition of the center acting on itself.
pub fn central_idempotents(alg: &HeckeAlg) -> Result<Vec<Elem>, FiniteError> {
    let n = alg.n;
    let parts = crate::param::all_partitions(n);
    let center = finite_center(alg);
    if center.len() != parts.len() {
        return Err(FiniteError::CenterDimension(center.len(), parts.len()));
    }
    let mut blocks: Vec<Elem> = vec![Elem::one(n)];
    for z in &center {
        if blocks.len() == parts.len() {
            break;
        }
        let mut next = Vec::new();
        for e in blocks {
            let ze = z.mul(alg, &e);
            // action of z on the ideal e H0 via the regular representation
            let reg = regular_rep(alg, &ze);
            let e_reg = regular_rep(alg, &e);
            // restrict to the column space of e
            let pivots = e_reg.column_space_pivots();
            if pivots.is_empty() {
                continue;
            }
            let basis = QMat::from_fn(e_reg.rows, pivots.len(), |i, j| {
                e_reg[(i, pivots[j])].clone()
            });
            let action = basis
                .solve_mat(&reg.mul(&basis))
                .ok_or_else(|| FiniteError::SplitFailure("center does not preserve block".into()))?;
            let mut eigs = crate::param::chains::rational_eigenvalues(&action)
                .map_err(|err| FiniteError::SplitFailure(err.to_string()))?;
            eigs.dedup();
            if eigs.len() == 1 {
                next.push(e);
                continue;
            }
            // spectral projectors: prod over other eigenvalues (z - mu)/(eig - mu)
            for eig in &eigs {
                let mut proj = e.clone();
                for mu in &eigs {
                    if mu == eig {
                        continue;
                    }
                    let factor = ze.sub(&e.scale(mu)).scale(&(eig - mu).recip());
                    proj = proj.mul(alg, &factor);
                }
                if !proj.is_zero() {
                    next.push(proj);
                }
            }
        }
        blocks = next;
    }
    if blocks.len() != parts.len() {
        return Err(FiniteError::SplitFailure(format!(
            "split into {} blocks, expected {}",
            blocks.len(),
            parts.len()
        )));
    }
    // verify idempotency and orthogonality
    for (i, e) in blocks.iter().enumerate() {
        if &e.mul(alg, e) != e {
            return Err(FiniteError::SplitFailure("non-idempotent block".into()));
        }
        for f in blocks.iter().skip(i + 1) {
            if !e.mul(alg, f).is_zero() {
                return Err(FiniteError::SplitFailure("non-orthogonal blocks".into()));
            }
        }
    }
    Ok(blocks)
}

/// The full labelled set of block idempotents.
pub fn block_idempotents(alg: &HeckeAlg) -> Result<Vec<BlockIdempotent>, FiniteError> {
    let n = alg.n;
    let blocks = central_idempotents(alg)?;
    let specht: Vec<(crate::param::Partition, SpechtModule)> = crate::param::all_partitions(n)
        .into_iter()
        .map(|p| {
            let s = SpechtModule::new(alg, &p.conjugate());
            (p, s)
        })
        .collect();
    let mut out = Vec::new();
    for e in blocks {
        let m2 = regular_rep(alg, &e).rank();
        let mult = (1..).find(|k| k * k >= m2).unwrap();
        if mult * mult != m2 {
            return Err(FiniteError::Labelling(format!("block rank {m2} is not a square")));
        }
        // the partition whose constituent the block acts on as the identity
        let mut label = None;
        for (p, s) in &specht {
            let act = s.act(alg, &e);
            if act == QMat::identity(s.dim()) {
                label = Some(p.clone());
            } else if !act.is_zero() {
                return Err(FiniteError::Labelling(
                    "central idempotent acts neither as 0 nor 1 on a Specht module".into(),
                ));
            }
        }
        let partition =
            label.ok_or_else(|| FiniteError::Labelling("block matches no partition".into()))?;
        // dimension of the Specht module is the multiplicity
        let dim = specht.iter().find(|(p, _)| *p == partition).unwrap().1.dim();
        if dim != mult {
            return Err(FiniteError::Labelling(format!(
                "block rank gives multiplicity {mult}, Specht dimension is {dim}"
            )));
        }
        out.push(BlockIdempotent { partition, element: e, multiplicity: mult });
    }
    out.sort_by(|a, b| a.partition.cmp(&b.partition));
    Ok(out)
}

/// A non-central idempotent cutting one copy of the block constituent out
/// of the multiplicity space: `e_P (T_{s_1} + 1)/(q + 1)`, used to realize
/// the compactly induced module of a single constituent.
pub fn refine_to_single_copy(alg: &HeckeAlg, block: &BlockIdempotent) -> Option<Elem> {
    let q1 = (alg.q() + Q::one()).recip();
    let proj = Elem::t_gen(alg.n, 0).add(&Elem::one(alg.n)).scale(&q1);
    let e = block.element.mul(alg, &proj);
    if e.mul(alg, &e) != e {
        return None;
    }
    let rank = regular_rep(alg, &e).rank();
    (rank == block.multiplicity).then_some(e)
}

/// Seminormal Specht module of a partition, basis indexed by standard
/// Young tableaux.
pub struct SpechtModule {
    pub shape: Vec<usize>,
    pub tableaux: Vec<Vec<Vec<usize>>>,
    pub t_mats: Vec<QMat>,
}

fn standard_tableaux(shape: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let n: usize = shape.iter().sum();
    let mut out = Vec::new();
    let mut tab: Vec<Vec<usize>> = shape.iter().map(|&r| vec![0; r]).collect();
    fn rec(
        shape: &[usize],
        tab: &mut Vec<Vec<usize>>,
        fill: &mut Vec<usize>,
        k: usize,
        n: usize,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if k > n {
            out.push(tab.clone());
            return;
        }
        for (r, &len) in shape.iter().enumerate() {
            let c = fill[r];
            if c < len && (r == 0 || fill[r - 1] > c) {
                tab[r][c] = k;
                fill[r] += 1;
                rec(shape, tab, fill, k + 1, n, out);
                fill[r] -= 1;
            }
        }
    }
    let mut fill = vec![0; shape.len()];
    rec(shape, &mut tab, &mut fill, 1, n, &mut out);
    out
}

fn position_of(tab: &[Vec<usize>], k: usize) -> (usize, usize) {
    for (r, row) in tab.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if v == k {
                return (r, c);
            }
        }
    }
    unreachable!()
}

impl SpechtModule {
    pub fn new(alg: &HeckeAlg, shape: &crate::param::Partition) -> Self {
        let shape: Vec<usize> = shape.parts().to_vec();
        let n: usize = shape.iter().sum();
        let tableaux = standard_tableaux(&shape);
        let dim = tableaux.len();
        let q = alg.q().clone();
        let mut t_mats = Vec::new();
        for i in 1..n {
            // T_{s_i} with s_i = (i, i+1), 1-based
            let mut m = QMat::zeros(dim, dim);
            for (col, tab) in tableaux.iter().enumerate() {
                let (r1, c1) = position_of(tab, i);
                let (r2, c2) = position_of(tab, i + 1);
                if r1 == r2 {
                    m[(col, col)] = q.clone();
                } else if c1 == c2 {
                    m[(col, col)] = -Q::one();
                } else {
                    // swap is standard; seminormal two-by-two block
                    let mut swapped = tab.clone();
                    swapped[r1][c1] = i + 1;
                    swapped[r2][c2] = i;
                    let other = tableaux.iter().position(|t| *t == swapped).unwrap();
                    let rho = (c2 as i64 - r2 as i64) - (c1 as i64 - r1 as i64);
                    let a = (q.clone() - Q::one())
                        * (Q::one() - crate::exact::rat::q_pow(&q, -rho)).recip();
                    let b = (q.clone() - Q::one())
                        * (Q::one() - crate::exact::rat::q_pow(&q, rho)).recip();
                    m[(col, col)] = a.clone();
                    m[(other, col)] = Q::one();
                    // forced by the quadratic relation: det = -q
                    m[(col, other)] = &a * &b + &q;
                    m[(other, other)] = b;
                }
            }
            t_mats.push(m);
        }
        let s = SpechtModule { shape, tableaux, t_mats };
        debug_assert!(s.check_relations(alg));
        s
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    fn check_relations(&self, alg: &HeckeAlg) -> bool {
        let d = self.dim();
        let q = alg.q();
        for t in &self.t_mats {
            let lhs = t.sub(&QMat::identity(d).scale(q)).mul(&t.add(&QMat::identity(d)));
            if !lhs.is_zero() {
                return false;
            }
        }
        for w in self.t_mats.windows(2) {
            if w[0].mul(&w[1]).mul(&w[0]) != w[1].mul(&w[0]).mul(&w[1]) {
                return false;
            }
        }
        for i in 0..self.t_mats.len() {
            for j in i + 2..self.t_mats.len() {
                if self.t_mats[i].mul(&self.t_mats[j]) != self.t_mats[j].mul(&self.t_mats[i]) {
                    return false;
                }
            }
        }
        true
    }

    /// Action of a theta-free element.
    pub fn act(&self, alg: &HeckeAlg, x: &Elem) -> QMat {
        let d = self.dim();
        let mut out = QMat::zeros(d, d);
        for ((w, z), c) in x.terms() {
            assert!(z.iter().all(|&e| e == 0));
            let mut m = QMat::identity(d);
            for &i in &w.reduced_word() {
                m = m.mul(&self.t_mats[i]);
            }
            out = out.add(&m.scale(c));
        }
        let _ = alg;
        out
    }
}
