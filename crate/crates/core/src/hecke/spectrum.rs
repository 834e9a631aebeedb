//! Arrangement of a regular semisimple spectrum into `q`-linked paths.
//!
//! Positions carry the eigenvalues in a canonical order in which every
//! `q`-linked pair is adjacent and descending (`value_{i+1} = q^{-1} value_i`
//! exactly at the bonds). Chains of a point occupy consecutive positions
//! inside their paths; the order of chains is admissible for parabolic
//! induction from the opposite parabolic: within a path, higher segments
//! come first.

use super::perm::Perm;
use crate::exact::qspec::QSpec;
use crate::exact::rat::{q_pow, Q};
use crate::param::chains::Chain;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("eigenvalues must be pairwise distinct")]
    RepeatedEigenvalue,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub qspec: QSpec,
    /// eigenvalue at each position
    pub values: Vec<Q>,
    /// `bonds[i]` iff `values[i+1] = q^{-1} values[i]`
    pub bonds: Vec<bool>,
    /// deformation scale: position `i` deforms as `values[i] + scale[i] t_i`,
    /// with `scale` dropping by `q^{-1}` along each path so that the bond
    /// relations become `(t_{i+1} - t_i) u_i = 0` on the nose
    pub scale: Vec<Q>,
    /// chain id of each position (chains are consecutive position runs)
    pub chain_id: Vec<usize>,
    /// the chains, in position order
    pub chains: Vec<Chain>,
}

impl Spectrum {
    /// Arranges a list of chains. Within each `q`-linked path the chains are
    /// sorted descending (higher segment first), which is the admissible
    /// order for induction from the opposite parabolic; ties between
    /// unlinked paths break by length then head value.
    pub fn from_chains(qspec: &QSpec, chains: &[Chain]) -> Result<Self, SpectrumError> {
        let q = qspec.q();
        // explicit eigenvalue list per chain
        let mut chain_values: Vec<Vec<Q>> = Vec::new();
        for ch in chains {
            chain_values.push((0..ch.len).map(|s| &ch.lambda * q_pow(q, -(s as i64))).collect());
        }
        let mut all: Vec<Q> = chain_values.iter().flatten().cloned().collect();
        all.sort();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(SpectrumError::RepeatedEigenvalue);
        }

        // group chains into q-linked paths: chain a links to chain b if the
        // tail of a divided by q equals the head of b
        let m = chains.len();
        let mut next = vec![None; m];
        let mut has_prev = vec![false; m];
        for a in 0..m {
            let tail_next = chain_values[a].last().unwrap() * q_pow(q, -1);
            for b in 0..m {
                if a != b && chain_values[b][0] == tail_next {
                    next[a] = Some(b);
                    has_prev[b] = true;
                }
            }
        }
        let mut path_heads: Vec<usize> = (0..m).filter(|&i| !has_prev[i]).collect();
        let path_of = |head: usize| -> Vec<usize> {
            let mut p = vec![head];
            let mut cur = head;
            while let Some(nx) = next[cur] {
                p.push(nx);
                cur = nx;
            }
            p
        };
        path_heads.sort_by(|&a, &b| {
            let (pa, pb) = (path_of(a), path_of(b));
            let la: usize = pa.iter().map(|&c| chains[c].len).sum();
            let lb: usize = pb.iter().map(|&c| chains[c].len).sum();
            lb.cmp(&la).then_with(|| chains[b].lambda.cmp(&chains[a].lambda))
        });

        let mut values = Vec::new();
        let mut scale = Vec::new();
        let mut chain_id = Vec::new();
        let mut ordered_chains = Vec::new();
        for head in path_heads {
            let mut step = 0i64;
            for c in path_of(head) {
                let cid = ordered_chains.len();
                ordered_chains.push(chains[c].clone());
                for v in &chain_values[c] {
                    values.push(v.clone());
                    scale.push(q_pow(q, -step));
                    chain_id.push(cid);
                    step += 1;
                }
            }
        }
        let n = values.len();
        let bonds = (0..n.saturating_sub(1))
            .map(|i| values[i + 1] == &values[i] * q_pow(q, -1))
            .collect();
        Ok(Spectrum { qspec: qspec.clone(), values, bonds, scale, chain_id, chains: ordered_chains })
    }

    /// The full chain `lambda, q^{-1} lambda, ..., q^{-(n-1)} lambda`.
    pub fn full_chain(qspec: &QSpec, lambda: Q, n: usize) -> Self {
        Spectrum::from_chains(qspec, &[Chain { lambda, len: n }]).expect("full chain is valid")
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Bond indices (0-based `i` meaning positions `i, i+1`).
    pub fn bond_indices(&self) -> Vec<usize> {
        (0..self.bonds.len()).filter(|&i| self.bonds[i]).collect()
    }

    /// Bonds internal to a single chain (the positions where `N` acts).
    pub fn intra_chain_bonds(&self) -> Vec<usize> {
        self.bond_indices()
            .into_iter()
            .filter(|&i| self.chain_id[i] == self.chain_id[i + 1])
            .collect()
    }

    /// `I_w`: the set of bonds `i` such that the value at position `i`
    /// precedes the value at position `i+1` in the `w`-reordered tuple.
    pub fn i_set(&self, w: &Perm) -> Vec<usize> {
        let wi = w.inverse();
        self.bond_indices()
            .into_iter()
            .filter(|&i| wi.apply(i) < wi.apply(i + 1))
            .collect()
    }

    /// The lexicographically first permutation with `I_w = target` (as a
    /// subset of the bonds).
    pub fn class_representative(&self, target: &[usize]) -> Perm {
        for w in super::perm::all_perms(self.n()) {
            if self.i_set(&w) == target {
                return w;
            }
        }
        unreachable!("every bond subset is realized by an ordering");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::qi;

    fn qs() -> QSpec {
        QSpec::default_q4()
    }

    #[test]
    fn full_chain_layout() {
        let sp = Spectrum::full_chain(&qs(), qi(16), 3);
        assert_eq!(sp.values, vec![qi(16), qi(4), qi(1)]);
        assert_eq!(sp.bonds, vec![true, true]);
        assert_eq!(sp.intra_chain_bonds(), vec![0, 1]);
        assert_eq!(sp.scale, vec![qi(1), crate::exact::rat::qr(1, 4), crate::exact::rat::qr(1, 16)]);
    }

    #[test]
    fn cross_linked_two_chains() {
        // chains (16, 4) and (1): one q-line, cross bond between positions 1 and 2
        let chains =
            vec![Chain { lambda: qi(16), len: 2 }, Chain { lambda: qi(1), len: 1 }];
        let sp = Spectrum::from_chains(&qs(), &chains).unwrap();
        assert_eq!(sp.values, vec![qi(16), qi(4), qi(1)]);
        assert_eq!(sp.bonds, vec![true, true]);
        assert_eq!(sp.intra_chain_bonds(), vec![0]);
        assert_eq!(sp.chain_id, vec![0, 0, 1]);
    }

    #[test]
    fn unlinked_chains_have_no_bonds() {
        let chains =
            vec![Chain { lambda: qi(3), len: 1 }, Chain { lambda: qi(1), len: 1 }];
        let sp = Spectrum::from_chains(&qs(), &chains).unwrap();
        assert_eq!(sp.bonds, vec![false]);
        assert!(sp.intra_chain_bonds().is_empty());
    }

    #[test]
    fn i_sets() {
        let sp = Spectrum::full_chain(&qs(), qi(16), 2);
        // identity: tuple (16, 4): 16 precedes 4, bond oriented in
        assert_eq!(sp.i_set(&Perm::identity(2)), vec![0]);
        assert_eq!(sp.i_set(&Perm::longest(2)), Vec::<usize>::new());
        let sp3 = Spectrum::full_chain(&qs(), qi(16), 3);
        // order (q^{-1}L, L, q^{-2}L) = (4, 16, 1): tuple slots of values
        // (16,4,1) are (2,1,3) i.e. w^{-1} = [1,0,2]: I = {2} (1-based)
        let w = Perm(vec![1, 0, 2]);
        assert_eq!(sp3.i_set(&w.inverse()), vec![1]);
        // class representatives cover all bond subsets
        for s in [vec![], vec![0], vec![1], vec![0, 1]] {
            let w = sp3.class_representative(&s);
            assert_eq!(sp3.i_set(&w), s);
        }
    }
}
