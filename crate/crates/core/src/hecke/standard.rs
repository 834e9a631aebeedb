//! Parabolic induction and standard modules.
//!
//! A standard module is the module induced from the tensor product of chain
//! Steinberg characters over the block Hecke subalgebra of the chain Levi,
//! with the chains arranged admissibly (higher segments first, which is the
//! admissible order for induction from the opposite parabolic). Its
//! dimension is `n! / prod r_c!` and its Jacquet restriction matches the
//! stable flags of the underlying pair — that identity is the executable
//! content of the flag lemma and is tested against the independent flag
//! enumeration.

use super::elem::{mul_basis, HeckeAlg};
use super::module::HModule;
use super::perm::{all_perms, Perm};
use super::smat::SMat;
use super::spectrum::Spectrum;
use crate::exact::qspec::QSpec;
use crate::exact::rat::{q_pow, Q};
use crate::exact::series::SeriesRing;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A standard Levi subgroup, by block sizes.
#[derive(Clone, Debug)]
pub struct Levi {
    pub blocks: Vec<usize>,
}

impl Levi {
    pub fn n(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut acc = 0;
        for &b in &self.blocks {
            out.push(acc);
            acc += b;
        }
        out
    }

    /// Global simple reflections internal to a block.
    pub fn internal_simples(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (off, &b) in self.offsets().iter().zip(&self.blocks) {
            for i in 0..b.saturating_sub(1) {
                out.push(off + i);
            }
        }
        out
    }

    /// Minimal-length representatives of `W / W_M`: permutations increasing
    /// on each block domain.
    pub fn min_reps(&self) -> Vec<Perm> {
        let n = self.n();
        let offs = self.offsets();
        all_perms(n)
            .into_iter()
            .filter(|w| {
                offs.iter().zip(&self.blocks).all(|(&off, &b)| {
                    (0..b.saturating_sub(1)).all(|j| w.apply(off + j) < w.apply(off + j + 1))
                })
            })
            .collect()
    }

    /// Factors `u = v m` with `v` a minimal representative and `m` in `W_M`;
    /// the lengths add.
    pub fn decompose(&self, u: &Perm) -> (Perm, Perm) {
        let n = self.n();
        let offs = self.offsets();
        let mut m_inv = vec![0u8; n];
        for (&off, &b) in offs.iter().zip(&self.blocks) {
            let mut idx: Vec<usize> = (off..off + b).collect();
            idx.sort_by_key(|&p| u.apply(p));
            for (j, &p) in idx.iter().enumerate() {
                m_inv[off + j] = p as u8;
            }
        }
        let m_inv = Perm(m_inv);
        let v = u.compose(&m_inv);
        let m = m_inv.inverse();
        debug_assert_eq!(v.length() + m.length(), u.length());
        (v, m)
    }
}

/// A module over the block Hecke subalgebra: actions of the internal
/// `T_{s_i}` and of all `theta_j`.
#[derive(Clone, Debug)]
pub struct LeviModule {
    pub levi: Levi,
    pub ring: SeriesRing,
    pub rank: usize,
    pub t_act: BTreeMap<usize, SMat>,
    pub theta_act: Vec<SMat>,
}

impl LeviModule {
    pub fn t_word(&self, m: &Perm) -> SMat {
        let mut acc = SMat::identity(self.ring, self.rank);
        for &i in &m.reduced_word() {
            acc = acc.mul(self.t_act.get(&i).expect("internal reflection"));
        }
        acc
    }

    /// Tensor product along blocks: the factors act on separate indices.
    pub fn tensor(levi: Levi, ring: SeriesRing, factors: Vec<BlockFactor>) -> LeviModule {
        assert_eq!(levi.blocks.len(), factors.len());
        let rank: usize = factors.iter().map(|f| f.module.rank).product();
        let n = levi.n();
        let offs = levi.offsets();
        // index helpers: mixed radix over factor ranks
        let radices: Vec<usize> = factors.iter().map(|f| f.module.rank).collect();
        let kron = |block: usize, local: &SMat| -> SMat {
            let mut m = SMat::zeros(ring, rank, rank);
            let stride: usize = radices[block + 1..].iter().product();
            let outer: usize = radices[..block].iter().product();
            let r = radices[block];
            for o in 0..outer {
                for a in 0..r {
                    for b in 0..r {
                        if local[(a, b)].is_zero() {
                            continue;
                        }
                        for s in 0..stride {
                            let row = (o * r + a) * stride + s;
                            let col = (o * r + b) * stride + s;
                            m[(row, col)] = local[(a, b)].clone();
                        }
                    }
                }
            }
            m
        };
        let mut t_act = BTreeMap::new();
        for (block, f) in factors.iter().enumerate() {
            for (li, local) in f.module.t_act.iter().enumerate() {
                t_act.insert(offs[block] + li, kron(block, local));
            }
        }
        let mut theta_act = Vec::with_capacity(n);
        for (block, f) in factors.iter().enumerate() {
            for local in &f.module.theta_act {
                theta_act.push(kron(block, local));
            }
        }
        LeviModule { levi, ring, rank, t_act, theta_act }
    }
}

/// One tensor factor: a module over the Hecke algebra of a block.
pub struct BlockFactor {
    pub module: HModule,
}

/// The rank-one chain Steinberg character of a block: sign action of the
/// internal reflections, ascending chain character on the Laurent part,
/// deformed along the head variable of the chain.
fn chain_steinberg_factor(
    qspec: &QSpec,
    ring: SeriesRing,
    lambda: &Q,
    len: usize,
    head_position: usize,
    deformed: bool,
) -> HModule {
    let alg = HeckeAlg::new(len, qspec.clone());
    let mut theta_act = Vec::with_capacity(len);
    for j in 0..len {
        // ascending: slot j carries q^{-(len-1-j)} (lambda + t_head)
        let mut v = ring.constant(lambda.clone());
        if deformed {
            v = v.add(&ring.var(head_position));
        }
        let v = v.scale(&q_pow(qspec.q(), -((len - 1 - j) as i64)));
        theta_act.push(SMat::from_fn(ring, 1, 1, |_, _| v.clone()));
    }
    let t_act =
        (0..len.saturating_sub(1)).map(|_| SMat::from_fn(ring, 1, 1, |_, _| ring.constant(-Q::one()))).collect();
    HModule {
        alg,
        ring,
        rank: 1,
        t_act,
        theta_act,
        ps_char: None,
        ps_label: None,
    }
}

/// Induction `H (x)_{H_M} inner` with basis `T_v (x) b` over the minimal
/// coset representatives.
pub fn induce(alg: &HeckeAlg, inner: &LeviModule) -> HModule {
    let n = alg.n;
    assert_eq!(inner.levi.n(), n);
    let ring = inner.ring;
    let reps = inner.levi.min_reps();
    let rep_index = |v: &Perm| reps.binary_search(v).expect("minimal representative");
    let rank = reps.len() * inner.rank;
    let idx = |v_i: usize, b: usize| v_i * inner.rank + b;

    let mut t_act = Vec::new();
    for i in 0..n - 1 {
        let mut m = SMat::zeros(ring, rank, rank);
        for (v_i, v) in reps.iter().enumerate() {
            let sv = v.left_simple(i);
            let terms: Vec<(Perm, Q)> = if sv.length() > v.length() {
                vec![(sv, Q::one())]
            } else {
                vec![(v.clone(), alg.q() - Q::one()), (sv, alg.q().clone())]
            };
            for (u, c) in terms {
                let (v2, mm) = inner.levi.decompose(&u);
                let inner_mat = inner.t_word(&mm);
                let row_block = rep_index(&v2);
                for a in 0..inner.rank {
                    for b in 0..inner.rank {
                        if !inner_mat[(a, b)].is_zero() {
                            let add = inner_mat[(a, b)].scale(&c);
                            let entry = &mut m[(idx(row_block, a), idx(v_i, b))];
                            *entry = entry.add(&add);
                        }
                    }
                }
            }
        }
        t_act.push(m);
    }

    let mut theta_act = Vec::new();
    for j in 0..n {
        let mut x = vec![0i32; n];
        x[j] = 1;
        let mut m = SMat::zeros(ring, rank, rank);
        for (v_i, v) in reps.iter().enumerate() {
            let prod = mul_basis(alg, &Perm::identity(n), &x, v, &vec![0; n]);
            for ((u, z), c) in prod.terms() {
                let (v2, mm) = inner.levi.decompose(u);
                // inner action of T_mm theta_z
                let mut inner_mat = SMat::identity(ring, inner.rank);
                for (p, &zp) in z.iter().enumerate() {
                    assert!(zp >= 0, "negative exponent in induction rewrite");
                    for _ in 0..zp {
                        inner_mat = inner_mat.mul(&inner.theta_act[p]);
                    }
                }
                inner_mat = inner.t_word(&mm).mul(&inner_mat);
                let row_block = rep_index(&v2);
                for a in 0..inner.rank {
                    for b in 0..inner.rank {
                        if !inner_mat[(a, b)].is_zero() {
                            let add = inner_mat[(a, b)].scale(c);
                            let entry = &mut m[(idx(row_block, a), idx(v_i, b))];
                            *entry = entry.add(&add);
                        }
                    }
                }
            }
        }
        theta_act.push(m);
    }

    HModule { alg: alg.clone(), ring, rank, t_act, theta_act, ps_char: None, ps_label: None }
}

/// The standard module of the arranged spectrum: induction of the chain
/// Steinberg characters. `order = 1` is the undeformed module.
pub fn standard_module(alg: &HeckeAlg, sp: &Spectrum, order: usize) -> HModule {
    let ring = SeriesRing::new(alg.n, order);
    let levi = Levi { blocks: sp.chains.iter().map(|c| c.len).collect() };
    let offs = levi.offsets();
    let factors: Vec<BlockFactor> = sp
        .chains
        .iter()
        .zip(&offs)
        .map(|(c, &off)| BlockFactor {
            module: chain_steinberg_factor(&alg.qspec, ring, &c.lambda, c.len, off, order > 1),
        })
        .collect();
    let inner = LeviModule::tensor(levi, ring, factors);
    induce(alg, &inner)
}

/// The one-dimensional (deformed) Steinberg module of a full chain, over
/// the one-variable deformation base.
pub fn steinberg_module(qspec: &QSpec, lambda: &Q, r: usize, order: usize) -> HModule {
    let ring = SeriesRing::new(1, order);
    chain_steinberg_factor(qspec, ring, lambda, r, 0, order > 1)
}

/// Verifies the quotient description of the Steinberg module: the quotient
/// of the full-ascending principal series by the images of all maps from
/// the one-bond classes is one dimensional with sign action and the
/// ascending chain character.
pub fn verify_steinberg_quotient(
    alg: &HeckeAlg,
    lambda: &Q,
    r: usize,
) -> Result<(), String> {
    use super::intertwine::normalized_intertwiner;
    assert_eq!(alg.n, r);
    let sp = Spectrum::full_chain(&alg.qspec, lambda.clone(), r);
    let w0 = sp.class_representative(&[]);
    let target = super::module::principal_series(alg, &sp, &w0, 1);
    let mut image_cols: Vec<Vec<Q>> = Vec::new();
    for bond in sp.bond_indices() {
        let w = sp.class_representative(&[bond]);
        let f = normalized_intertwiner(alg, &sp, &w, &w0, 1)
            .map_err(|e| format!("intertwiner failed: {e}"))?;
        let fiber = f.mat.fiber();
        for j in 0..fiber.cols {
            image_cols.push(fiber.col(j));
        }
    }
    let img = crate::exact::QMat::from_fn(target.rank, image_cols.len(), |i, j| {
        image_cols[j][i].clone()
    });
    let quo_dim = target.rank - img.rank();
    if quo_dim != 1 {
        return Err(format!("quotient dimension {quo_dim}, expected 1"));
    }
    // the quotient action: T_s = -1 and theta_j = ascending chain values
    let contains = |mat: &crate::exact::QMat, extra: &[Q]| {
        let aug = img.hstack(&crate::exact::QMat::from_fn(extra.len(), 1, |i, _| extra[i].clone()));
        let _ = mat;
        aug.rank() == img.rank()
    };
    // check (T_i + 1) V and (theta_j - asc_j) V land in the image
    for i in 0..r - 1 {
        let tf = target.t_act[i].fiber();
        for col in 0..target.rank {
            let mut v = tf.col(col);
            v[col] += Q::one();
            if !contains(&tf, &v) {
                return Err(format!("T_{i} does not act by -1 on the quotient"));
            }
        }
    }
    for j in 0..r {
        let asc = lambda * q_pow(alg.q(), -((r - 1 - j) as i64));
        let thf = target.theta_act[j].fiber();
        for col in 0..target.rank {
            let mut v = thf.col(col);
            v[col] -= &asc;
            if !contains(&thf, &v) {
                return Err(format!("theta_{j} character mismatch on the quotient"));
            }
        }
    }
    Ok(())
}

/// Jacquet characters of the standard module versus the stable flags of
/// the block normal form point: the executable flag lemma.
pub fn standard_matches_flags(
    qspec: &QSpec,
    chains: &[crate::param::chains::Chain],
) -> Result<bool, String> {
    let sp = Spectrum::from_chains(qspec, chains).map_err(|e| e.to_string())?;
    let alg = HeckeAlg::new(sp.n(), qspec.clone());
    let m = standard_module(&alg, &sp, 1);
    let chars = m.jacquet_characters().map_err(|e| e.to_string())?;
    let p = crate::param::sample::point_from_chains(qspec, chains);
    let flags = crate::param::chains::stable_flags(&p).map_err(|e| e.to_string())?;
    if m.rank != flags.len() {
        return Ok(false);
    }
    let mut got: Vec<Vec<Q>> = chars
        .iter()
        .flat_map(|(c, mult)| std::iter::repeat(c.clone()).take(*mult))
        .collect();
    let mut expected: Vec<Vec<Q>> = flags.into_iter().map(|f| f.character).collect();
    got.sort();
    expected.sort();
    Ok(got == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::qi;
    use crate::param::chains::Chain;

    fn qs() -> QSpec {
        QSpec::default_q4()
    }

    #[test]
    fn levi_decomposition() {
        let levi = Levi { blocks: vec![2, 1] };
        let reps = levi.min_reps();
        assert_eq!(reps.len(), 3);
        for u in all_perms(3) {
            let (v, m) = levi.decompose(&u);
            assert_eq!(v.compose(&m), u);
            assert!(reps.contains(&v));
        }
    }

    #[test]
    fn standard_module_dimensions_and_relations() {
        let alg = HeckeAlg::new(3, qs());
        // chains (16,4) + (1): dimension 3!/2! = 3
        let sp = Spectrum::from_chains(
            &alg.qspec,
            &[Chain { lambda: qi(16), len: 2 }, Chain { lambda: qi(1), len: 1 }],
        )
        .unwrap();
        let m = standard_module(&alg, &sp, 1);
        assert_eq!(m.rank, 3);
        m.check_relations().unwrap();
        // full chain: dimension 1, the Steinberg itself
        let sp = Spectrum::full_chain(&alg.qspec, qi(16), 3);
        let m = standard_module(&alg, &sp, 1);
        assert_eq!(m.rank, 1);
        assert_eq!(m.t_act[0].fiber()[(0, 0)], -qi(1));
        // N = 0: the full principal series
        let sp = Spectrum::from_chains(
            &alg.qspec,
            &[
                Chain { lambda: qi(9), len: 1 },
                Chain { lambda: qi(3), len: 1 },
                Chain { lambda: qi(1), len: 1 },
            ],
        )
        .unwrap();
        let m = standard_module(&alg, &sp, 1);
        assert_eq!(m.rank, 6);
        m.check_relations().unwrap();
    }

    #[test]
    fn deformed_standard_module_relations() {
        let alg = HeckeAlg::new(3, qs());
        let sp = Spectrum::from_chains(
            &alg.qspec,
            &[Chain { lambda: qi(16), len: 2 }, Chain { lambda: qi(3), len: 1 }],
        )
        .unwrap();
        let m = standard_module(&alg, &sp, 3);
        m.check_relations().unwrap();
    }

    #[test]
    fn jacquet_matches_flags_examples() {
        let qspec = qs();
        // (diag(1,4), 0): two flags
        assert!(standard_matches_flags(
            &qspec,
            &[Chain { lambda: qi(4), len: 1 }, Chain { lambda: qi(1), len: 1 }]
        )
        .unwrap());
        // single chain: one flag
        assert!(standard_matches_flags(&qspec, &[Chain { lambda: qi(4), len: 2 }]).unwrap());
        // (diag(1,4,16), E_23-type): 3 flags
        assert!(standard_matches_flags(
            &qspec,
            &[Chain { lambda: qi(16), len: 2 }, Chain { lambda: qi(1), len: 1 }]
        )
        .unwrap());
        // generic two chains
        assert!(standard_matches_flags(
            &qspec,
            &[Chain { lambda: qi(3), len: 2 }, Chain { lambda: qi(1), len: 2 }]
        )
        .unwrap());
    }

    #[test]
    fn steinberg_modules() {
        let qspec = qs();
        // r = 2: T acts by -1, Jacquet character ascending (q^{-1}L, L)
        let m = steinberg_module(&qspec, &qi(4), 2, 1);
        assert_eq!(m.t_act[0].fiber()[(0, 0)], -qi(1));
        assert_eq!(m.theta_act[0].fiber()[(0, 0)], qi(1));
        assert_eq!(m.theta_act[1].fiber()[(0, 0)], qi(4));
        // r = 1: the character itself
        let m = steinberg_module(&qspec, &qi(5), 1, 1);
        assert_eq!(m.theta_act[0].fiber()[(0, 0)], qi(5));
        // deformed: relations hold over Q[[t]]
        let m = steinberg_module(&qspec, &qi(16), 3, 4);
        m.check_relations().unwrap();
    }

    #[test]
    fn steinberg_quotient_construction() {
        let alg2 = HeckeAlg::new(2, qs());
        verify_steinberg_quotient(&alg2, &qi(4), 2).unwrap();
        let alg3 = HeckeAlg::new(3, qs());
        verify_steinberg_quotient(&alg3, &qi(16), 3).unwrap();
    }

    #[test]
    fn admissible_reorderings_are_isomorphic() {
        // two unlinked chains in either order give the same Jacquet data
        let qspec = qs();
        let a = [Chain { lambda: qi(3), len: 2 }, Chain { lambda: qi(1), len: 1 }];
        let b = [Chain { lambda: qi(1), len: 1 }, Chain { lambda: qi(3), len: 2 }];
        let sp_a = Spectrum::from_chains(&qspec, &a).unwrap();
        let sp_b = Spectrum::from_chains(&qspec, &b).unwrap();
        // the canonical arrangement sorts both inputs the same way
        assert_eq!(sp_a.values, sp_b.values);
        let alg = HeckeAlg::new(3, qspec.clone());
        let ma = standard_module(&alg, &sp_a, 1);
        let mb = standard_module(&alg, &sp_b, 1);
        assert_eq!(
            ma.jacquet_characters().unwrap(),
            mb.jacquet_characters().unwrap()
        );
    }

    #[test]
    fn one_dim_trivial_character_consistency() {
        // a rank-one module with T = q must carry the descending character
        let alg = HeckeAlg::new(2, qs());
        let ring = SeriesRing::new(2, 1);
        let mk = |a: i64, b: i64| HModule {
            alg: alg.clone(),
            ring,
            rank: 1,
            t_act: vec![SMat::from_fn(ring, 1, 1, |_, _| ring.constant(alg.q().clone()))],
            theta_act: vec![
                SMat::from_fn(ring, 1, 1, |_, _| ring.constant(qi(a))),
                SMat::from_fn(ring, 1, 1, |_, _| ring.constant(qi(b))),
            ],
            ps_char: None,
            ps_label: None,
        };
        assert!(mk(4, 1).check_relations().is_ok());
        assert!(mk(1, 4).check_relations().is_err());
    }
}
