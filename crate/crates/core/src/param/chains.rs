//! Chain decomposition and stable flags of a pair `(phi, N)`.
//!
//! For regular semisimple `phi` with rational eigenvalues the pair splits
//! into indecomposable chains: `N` carries the `mu`-eigenline onto the
//! `q^{-1} mu`-eigenline or kills it. Full flags stable under both `phi` and
//! `N` then correspond to orderings of the eigenvalues in which the target
//! of every nonzero `N`-component is listed before its source.

use super::{ParamError, PhiNPoint};
use crate::exact::rat::Q;
use crate::exact::QMat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// One chain summand: eigenvalues `lambda, q^{-1} lambda, ...,
/// q^{-(len-1)} lambda` with `N` shifting each eigenline to the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub lambda: Q,
    pub len: usize,
}

#[derive(Clone, Debug)]
pub struct ChainDecomposition {
    pub chains: Vec<Chain>,
    /// columns form the adapted basis, chain by chain
    pub basis: QMat,
    /// eigenvalue of each basis column
    pub eigenvalues: Vec<Q>,
}

/// An ordering of the eigenvalues whose flag is `(phi, N)`-stable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagOrdering {
    /// permutation of eigenvalue indices: position `i` holds eigenvalue
    /// `eigs[perm[i]]` of the ambient point's canonical eigenvalue list
    pub perm: Vec<usize>,
    /// the ordered eigenvalue tuple itself (the unramified character)
    pub character: Vec<Q>,
}

/// Characteristic polynomial coefficients (monic, low degree first) by
/// interpolation of `det(xI - phi)`.
fn char_poly(m: &QMat) -> Vec<Q> {
    let n = m.rows;
    let det = |x: i64| -> Q {
        let mut a = QMat::from_fn(n, n, |i, j| {
            let mut v = -m[(i, j)].clone();
            if i == j {
                v += Q::from_integer(BigInt::from(x));
            }
            v
        });
        // determinant via elimination, tracking row swaps
        let mut sign = Q::one();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else { return Q::zero() };
            if p != c {
                for j in 0..n {
                    let (hi, lo) = (p.max(c), p.min(c));
                    let tmp = a[(hi, j)].clone();
                    a[(hi, j)] = a[(lo, j)].clone();
                    a[(lo, j)] = tmp;
                }
                sign = -sign;
            }
            det *= a[(c, c)].clone();
            let inv = a[(c, c)].clone().recip();
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = &a[(r, c)] * &inv;
                for j in c..n {
                    let d = &a[(c, j)] * &f;
                    a[(r, j)] -= d;
                }
            }
        }
        det * sign
    };
    // Lagrange interpolation through x = 0..n
    let xs: Vec<i64> = (0..=n as i64).collect();
    let ys: Vec<Q> = xs.iter().map(|&x| det(x)).collect();
    let mut coeffs = vec![Q::zero(); n + 1];
    for (i, xi) in xs.iter().enumerate() {
        // basis polynomial prod_{j != i} (x - xj) / (xi - xj)
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            denom *= Q::from_integer(BigInt::from(xi - xj));
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * Q::from_integer(BigInt::from(*xj));
            }
            basis = next;
        }
        let scale = &ys[i] / &denom;
        for (k, b) in basis.iter().enumerate() {
            coeffs[k] += b * &scale;
        }
    }
    coeffs
}

fn divisors(n: &BigInt, cap: u64) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut primes: BTreeMap<BigInt, u32> = BTreeMap::new();
    let mut p = BigInt::from(2u32);
    while &p * &p <= n {
        if p > BigInt::from(cap) {
            return None; // refuse to certify a factorization
        }
        while (&n % &p).is_zero() {
            n /= &p;
            *primes.entry(p.clone()).or_insert(0) += 1;
        }
        p += 1u32;
    }
    if n > BigInt::one() {
        *primes.entry(n).or_insert(0) += 1;
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    Some(divs)
}

/// The rational roots of the characteristic polynomial, with multiplicity
/// certified by deflation; errors out unless all `n` roots are rational.
pub fn rational_eigenvalues(m: &QMat) -> Result<Vec<Q>, ParamError> {
    let n = m.rows;
    let mut poly = char_poly(m);
    // clear denominators to a primitive integer polynomial
    let mut roots = Vec::new();
    while roots.len() < n {
        let lcm = poly
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let ints: Vec<BigInt> = poly.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
        let lead = ints.last().unwrap().clone();
        let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if low > 0 {
            // zero eigenvalue: phi singular, reject
            return Err(ParamError::SingularPhi);
        }
        let cand_num = divisors(&ints[0], 1_000_000)
            .ok_or_else(|| ParamError::IrrationalSpectrum("constant term too hard to factor".into()))?;
        let cand_den = divisors(&lead, 1_000_000)
            .ok_or_else(|| ParamError::IrrationalSpectrum("leading term too hard to factor".into()))?;
        let eval = |x: &Q| -> Q {
            let mut acc = Q::zero();
            for c in poly.iter().rev() {
                acc = acc * x + c;
            }
            acc
        };
        let mut found = None;
        'outer: for num in &cand_num {
            for den in &cand_den {
                for sgn in [1i64, -1] {
                    let x = Q::new(num * BigInt::from(sgn), den.clone());
                    if eval(&x).is_zero() {
                        found = Some(x);
                        break 'outer;
                    }
                }
            }
        }
        let Some(root) = found else {
            return Err(ParamError::IrrationalSpectrum(format!(
                "no rational root of the degree-{} factor",
                poly.len() - 1
            )));
        };
        // deflate: poly / (x - root)
        let mut quo = vec![Q::zero(); poly.len() - 1];
        let mut carry = Q::zero();
        for k in (0..poly.len() - 1).rev() {
            carry = &poly[k + 1] + &carry * &root;
            quo[k] = carry.clone();
        }
        poly = quo;
        roots.push(root);
    }
    roots.sort();
    roots.reverse();
    Ok(roots)
}

struct EigenData {
    eigenvalues: Vec<Q>,
    /// columns are eigenvectors, in the order of `eigenvalues`
    vectors: QMat,
    /// bond coefficient: `N v_i = c * v_j` with `mu_j = q^{-1} mu_i`, if any
    bonds: Vec<Option<(usize, Q)>>,
}

fn eigen_data(p: &PhiNPoint) -> Result<EigenData, ParamError> {
    let eigenvalues = rational_eigenvalues(&p.phi)?;
    for w in eigenvalues.windows(2) {
        if w[0] == w[1] {
            return Err(ParamError::RepeatedEigenvalues);
        }
    }
    let n = p.n;
    let mut cols = Vec::new();
    for mu in &eigenvalues {
        let shifted = p.phi.sub(&QMat::identity(n).scale(mu));
        let (_, ker) = shifted.rank_kernel();
        debug_assert_eq!(ker.len(), 1);
        cols.push(ker.into_iter().next().unwrap());
    }
    let vectors = QMat::from_fn(n, n, |i, j| cols[j][i].clone());
    let vinv = vectors.inverse().expect("eigenvectors form a basis");
    let qinv = p.qspec.q().clone().recip();
    let mut bonds = Vec::new();
    for (i, mu) in eigenvalues.iter().enumerate() {
        let image = p.nil.mul_vec(&vectors.col(i));
        let coords = vinv.mul_vec(&image);
        let mut bond = None;
        for (j, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // the relation forces the image into the q^{-1} mu eigenline
            if eigenvalues[j] != mu * &qinv {
                return Err(ParamError::RelationFails);
            }
            bond = Some((j, c.clone()));
        }
        bonds.push(bond);
    }
    Ok(EigenData { eigenvalues, vectors, bonds })
}

/// Decomposes a regular semisimple point into chains, producing an adapted
/// basis in which `phi` is diagonal and `N` is an exact block shift.
pub fn chain_decompose(p: &PhiNPoint) -> Result<ChainDecomposition, ParamError> {
    if !p.check_relation() {
        return Err(ParamError::RelationFails);
    }
    let data = eigen_data(p)?;
    let n = p.n;
    let has_incoming: Vec<bool> = (0..n)
        .map(|j| data.bonds.iter().any(|b| b.as_ref().is_some_and(|(t, _)| *t == j)))
        .collect();
    // heads sorted for determinism: longer chains first, then larger head eigenvalue
    let mut heads: Vec<usize> = (0..n).filter(|&i| !has_incoming[i]).collect();
    let chain_of = |head: usize| -> Vec<usize> {
        let mut idx = vec![head];
        let mut cur = head;
        while let Some((next, _)) = &data.bonds[cur] {
            idx.push(*next);
            cur = *next;
        }
        idx
    };
    heads.sort_by(|&a, &b| {
        chain_of(b)
            .len()
            .cmp(&chain_of(a).len())
            .then_with(|| data.eigenvalues[b].cmp(&data.eigenvalues[a]))
    });

    let mut chains = Vec::new();
    let mut basis_cols: Vec<Vec<Q>> = Vec::new();
    let mut eigenvalues = Vec::new();
    for head in heads {
        let idx = chain_of(head);
        chains.push(Chain { lambda: data.eigenvalues[head].clone(), len: idx.len() });
        // walk the chain, applying N so the shift coefficients become 1
        let mut v = data.vectors.col(head);
        for (step, &i) in idx.iter().enumerate() {
            basis_cols.push(v.clone());
            eigenvalues.push(data.eigenvalues[i].clone());
            if step + 1 < idx.len() {
                v = p.nil.mul_vec(&v);
            }
        }
    }
    let basis = QMat::from_fn(n, n, |i, j| basis_cols[j][i].clone());

    // round trip: the base change must reproduce (phi, N) in block form
    let binv = basis.inverse().expect("adapted basis is invertible");
    let phi_block = binv.mul(&p.phi).mul(&basis);
    let nil_block = binv.mul(&p.nil).mul(&basis);
    let mut expect_phi = QMat::zeros(n, n);
    let mut expect_nil = QMat::zeros(n, n);
    for (j, mu) in eigenvalues.iter().enumerate() {
        expect_phi[(j, j)] = mu.clone();
    }
    let mut pos = 0;
    for ch in &chains {
        for s in 0..ch.len - 1 {
            expect_nil[(pos + s + 1, pos + s)] = Q::one();
        }
        pos += ch.len;
    }
    assert_eq!(phi_block, expect_phi, "chain base change failed on phi");
    assert_eq!(nil_block, expect_nil, "chain base change failed on N");

    Ok(ChainDecomposition { chains, basis, eigenvalues })
}

/// All orderings of the eigenvalues whose flag is stable under both `phi`
/// and `N`: linear extensions of the DAG with an edge "target before
/// source" for every nonzero `N`-component between eigenlines.
pub fn stable_flags(p: &PhiNPoint) -> Result<Vec<FlagOrdering>, ParamError> {
    if !p.check_relation() {
        return Err(ParamError::RelationFails);
    }
    let data = eigen_data(p)?;
    let n = p.n;
    // must_precede[i] = j means eigenvalue j must be placed before i
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bond) in data.bonds.iter().enumerate() {
        if let Some((target, _)) = bond {
            preds[i].push(*target);
        }
    }
    let mut out = Vec::new();
    let mut placed = vec![false; n];
    let mut cur = Vec::with_capacity(n);
    fn extend(
        n: usize,
        preds: &[Vec<usize>],
        placed: &mut [bool],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !placed[i] && preds[i].iter().all(|&j| placed[j]) {
                placed[i] = true;
                cur.push(i);
                extend(n, preds, placed, cur, out);
                cur.pop();
                placed[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    extend(n, &preds, &mut placed, &mut cur, &mut perms);
    for perm in perms {
        let character = perm.iter().map(|&i| data.eigenvalues[i].clone()).collect();
        out.push(FlagOrdering { perm, character });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qspec::QSpec;
    use crate::exact::rat::qi;
    use crate::param::Partition;

    fn qs() -> QSpec {
        QSpec::default_q4()
    }

    fn diag(vals: &[i64]) -> QMat {
        let n = vals.len();
        QMat::from_fn(n, n, |i, j| if i == j { qi(vals[i]) } else { qi(0) })
    }

    fn e(n: usize, i: usize, j: usize) -> QMat {
        let mut m = QMat::zeros(n, n);
        m[(i, j)] = qi(1);
        m
    }

    #[test]
    fn eigenvalues_by_interpolation() {
        let m = QMat::from_rows(vec![vec![qi(2), qi(1)], vec![qi(0), qi(3)]]);
        assert_eq!(rational_eigenvalues(&m).unwrap(), vec![qi(3), qi(2)]);
    }

    #[test]
    fn full_chain_decomposition() {
        // (diag(16,4,1), E_12 + E_23): one chain Sp(16, 3). The spec's q = 2
        // example (diag(1,2,4), E_12+E_23) is mirrored at q = 4.
        let p = PhiNPoint::new(qs(), diag(&[1, 4, 16]), e(3, 0, 1).add(&e(3, 1, 2))).unwrap();
        let d = chain_decompose(&p).unwrap();
        assert_eq!(d.chains, vec![Chain { lambda: qi(16), len: 3 }]);
    }

    #[test]
    fn zero_n_splits_fully() {
        let p = PhiNPoint::new(qs(), diag(&[1, 4]), QMat::zeros(2, 2)).unwrap();
        let d = chain_decompose(&p).unwrap();
        assert_eq!(
            d.chains,
            vec![Chain { lambda: qi(4), len: 1 }, Chain { lambda: qi(1), len: 1 }]
        );
    }

    #[test]
    fn partial_chain() {
        // (diag(1,4,16), E_23): N carries the 16-line to the 4-line
        let p = PhiNPoint::new(qs(), diag(&[1, 4, 16]), e(3, 1, 2)).unwrap();
        assert!(p.check_relation());
        let d = chain_decompose(&p).unwrap();
        assert_eq!(
            d.chains,
            vec![Chain { lambda: qi(16), len: 2 }, Chain { lambda: qi(1), len: 1 }]
        );
    }

    #[test]
    fn chain_decompose_respects_conjugation() {
        let g = QMat::from_rows(vec![
            vec![qi(1), qi(2), qi(0)],
            vec![qi(0), qi(1), qi(3)],
            vec![qi(1), qi(0), qi(1)],
        ]);
        let gi = g.inverse().unwrap();
        let phi = g.mul(&diag(&[1, 4, 16])).mul(&gi);
        let nil = g.mul(&e(3, 0, 1).add(&e(3, 1, 2))).mul(&gi);
        let p = PhiNPoint::new(qs(), phi, nil).unwrap();
        assert!(p.check_relation());
        let d = chain_decompose(&p).unwrap();
        assert_eq!(d.chains, vec![Chain { lambda: qi(16), len: 3 }]);
        assert_eq!(p.jordan_type().unwrap(), Partition::new(vec![3]).unwrap());
    }

    #[test]
    fn flags_brute_force_oracle() {
        // brute force: check every ordering for N-stability directly
        let brute = |p: &PhiNPoint| -> usize {
            let data = super::eigen_data(p).unwrap();
            let n = p.n;
            let mut count = 0;
            let mut perm: Vec<usize> = (0..n).collect();
            // Heap's algorithm is overkill; enumerate via recursion
            fn perms(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
                if k == v.len() {
                    out.push(v.clone());
                }
                for i in k..v.len() {
                    v.swap(k, i);
                    perms(v, k + 1, out);
                    v.swap(k, i);
                }
            }
            let mut all = Vec::new();
            perms(&mut perm, 0, &mut all);
            for ord in all {
                let stable = ord.iter().enumerate().all(|(pos, &i)| {
                    match &data.bonds[i] {
                        None => true,
                        Some((t, _)) => ord.iter().position(|&x| x == *t).unwrap() < pos,
                    }
                });
                if stable {
                    count += 1;
                }
            }
            count
        };

        // (diag(1,4), E_12): unique stable ordering (1, 4)
        let p = PhiNPoint::new(qs(), diag(&[1, 4]), e(2, 0, 1)).unwrap();
        let flags = stable_flags(&p).unwrap();
        assert_eq!(flags.len(), 1);
        assert_eq!(flags[0].character, vec![qi(1), qi(4)]);
        assert_eq!(brute(&p), 1);

        // N = 0: both orderings
        let p = PhiNPoint::new(qs(), diag(&[1, 4]), QMat::zeros(2, 2)).unwrap();
        assert_eq!(stable_flags(&p).unwrap().len(), 2);

        // (diag(1,4,16), E_23): 3 orderings, brute forced over all 6
        let p = PhiNPoint::new(qs(), diag(&[1, 4, 16]), e(3, 1, 2)).unwrap();
        let flags = stable_flags(&p).unwrap();
        assert_eq!(flags.len(), 3);
        assert_eq!(brute(&p), 3);
        // the 4-line must precede the 16-line in every stable ordering
        for f in &flags {
            let pos4 = f.character.iter().position(|c| c == &qi(4)).unwrap();
            let pos16 = f.character.iter().position(|c| c == &qi(16)).unwrap();
            assert!(pos4 < pos16);
        }
    }

    #[test]
    fn flag_count_bounds() {
        // single full chain: exactly one flag; N = 0: n! flags
        let p = PhiNPoint::new(qs(), diag(&[1, 4, 16]), e(3, 0, 1).add(&e(3, 1, 2))).unwrap();
        assert_eq!(stable_flags(&p).unwrap().len(), 1);
        let p = PhiNPoint::new(qs(), diag(&[1, 3, 9]), QMat::zeros(3, 3)).unwrap();
        assert_eq!(stable_flags(&p).unwrap().len(), 6);
    }
}
