//! Seeded random sample points.
//!
//! Base eigenvalues are powers of 3 (coprime to every power of `q = 4`), so
//! two chains never resonate unless the sampler deliberately places them on
//! one `q`-line. Conjugation by a random unimodular integer matrix hides the
//! block normal form without leaving the rationals.

use super::chains::Chain;
use super::PhiNPoint;
use crate::exact::qspec::QSpec;
use crate::exact::rat::{q_pow, qi, Q};
use crate::exact::QMat;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// The block normal form point of a list of chains.
pub fn point_from_chains(qspec: &QSpec, chains: &[Chain]) -> PhiNPoint {
    let n: usize = chains.iter().map(|c| c.len).sum();
    let mut phi = QMat::zeros(n, n);
    let mut nil = QMat::zeros(n, n);
    let mut pos = 0;
    for ch in chains {
        for s in 0..ch.len {
            phi[(pos + s, pos + s)] = &ch.lambda * q_pow(qspec.q(), -(s as i64));
            if s + 1 < ch.len {
                nil[(pos + s + 1, pos + s)] = Q::one();
            }
        }
        pos += ch.len;
    }
    PhiNPoint::new(qspec.clone(), phi, nil).expect("normal form is valid")
}

/// A random unimodular integer matrix built from elementary operations.
pub fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> QMat {
    let mut m = QMat::identity(n);
    for _ in 0..(2 * n) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        if i == j {
            j = (j + 1) % n;
        }
        let c = qi(rng.gen_range(-2..=2i64));
        // row_i += c * row_j
        for k in 0..n {
            let d = &m[(j, k)] * &c;
            m[(i, k)] += d;
        }
    }
    m
}

/// Random chain structure on `n` letters. With `allow_linked` the sampler
/// sometimes places several chains on one `q`-line (distinct eigenvalues,
/// but `q`-power ratios across chains).
pub fn random_chains(n: usize, rng: &mut ChaCha8Rng, allow_linked: bool) -> Vec<Chain> {
    loop {
        let mut lens = Vec::new();
        let mut rem = n;
        while rem > 0 {
            let l = rng.gen_range(1..=rem);
            lens.push(l);
            rem -= l;
        }
        let q = qi(4);
        let mut chains = Vec::new();
        let mut used: Vec<Q> = Vec::new();
        let mut ok = true;
        for &len in &lens {
            // base 3^a, optionally shifted down the q-line of an earlier chain
            let lambda = if allow_linked && !chains.is_empty() && rng.gen_bool(0.4) {
                let prev: &Chain = &chains[rng.gen_range(0..chains.len())];
                &prev.lambda * q_pow(&q, -(prev.len as i64 + rng.gen_range(0..2)))
            } else {
                q_pow(&qi(3), rng.gen_range(0..=2 + n as i64))
            };
            let eigs: Vec<Q> = (0..len).map(|s| &lambda * q_pow(&q, -(s as i64))).collect();
            if eigs.iter().any(|e| used.contains(e)) {
                ok = false;
                break;
            }
            used.extend(eigs);
            chains.push(Chain { lambda, len });
        }
        if ok {
            return chains;
        }
    }
}

/// A random valid point: random chains, conjugated away from normal form.
pub fn random_point(
    qspec: &QSpec,
    n: usize,
    rng: &mut ChaCha8Rng,
    allow_linked: bool,
) -> (PhiNPoint, Vec<Chain>) {
    let chains = random_chains(n, rng, allow_linked);
    let normal = point_from_chains(qspec, &chains);
    let g = random_unimodular(n, rng);
    let gi = g.inverse().expect("unimodular");
    let phi = g.mul(&normal.phi).mul(&gi);
    let nil = g.mul(&normal.nil).mul(&gi);
    let p = PhiNPoint::new(qspec.clone(), phi, nil).expect("conjugate is valid");
    debug_assert!(p.check_relation());
    (p, chains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::chains::{chain_decompose, stable_flags};
    use rand::SeedableRng;

    #[test]
    fn sampled_points_are_valid_and_decompose() {
        let qs = QSpec::default_q4();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 2..=4 {
            for _ in 0..5 {
                let (p, chains) = random_point(&qs, n, &mut rng, true);
                assert!(p.check_relation());
                let d = chain_decompose(&p).unwrap();
                let mut got: Vec<(Q, usize)> =
                    d.chains.iter().map(|c| (c.lambda.clone(), c.len)).collect();
                let mut want: Vec<(Q, usize)> =
                    chains.iter().map(|c| (c.lambda.clone(), c.len)).collect();
                got.sort();
                want.sort();
                assert_eq!(got, want);
                let flags = stable_flags(&p).unwrap();
                assert!(!flags.is_empty());
                let bound: usize = (1..=n).product();
                assert!(flags.len() <= bound);
            }
        }
    }

    #[test]
    fn jordan_type_matches_chain_lengths() {
        let qs = QSpec::default_q4();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let (p, chains) = random_point(&qs, 4, &mut rng, false);
            let mut lens: Vec<usize> = chains.iter().map(|c| c.len).collect();
            lens.sort_unstable();
            lens.reverse();
            assert_eq!(p.jordan_type().unwrap().parts(), &lens[..]);
        }
    }
}
