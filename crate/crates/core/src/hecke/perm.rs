//! Permutations of `{0, .., n-1}` in one-line notation, with the Coxeter
//! structure of the symmetric group: lengths, reduced words, descents.

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// Simple transposition `s_i` swapping `i` and `i+1` (0-based).
    pub fn simple(n: usize, i: usize) -> Self {
        assert!(i + 1 < n);
        let mut v: Vec<u8> = (0..n as u8).collect();
        v.swap(i, i + 1);
        Perm(v)
    }

    pub fn inverse(&self) -> Perm {
        let n = self.n();
        let mut v = vec![0u8; n];
        for i in 0..n {
            v[self.0[i] as usize] = i as u8;
        }
        Perm(v)
    }

    /// `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n());
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn length(&self) -> usize {
        let n = self.n();
        let mut inv = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.0[i] > self.0[j] {
                    inv += 1;
                }
            }
        }
        inv
    }

    /// Longest element `w_0`.
    pub fn longest(n: usize) -> Self {
        Perm((0..n as u8).rev().collect())
    }

    /// Left multiplication by `s_i`: swaps the *values* `i` and `i+1`.
    pub fn left_simple(&self, i: usize) -> Perm {
        Perm::simple(self.n(), i).compose(self)
    }

    /// Right multiplication by `s_i`: swaps positions `i` and `i+1`.
    pub fn right_simple(&self, i: usize) -> Perm {
        self.compose(&Perm::simple(self.n(), i))
    }

    /// A reduced word `[i_1, ..., i_l]` with `self = s_{i_1} ... s_{i_l}`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut v = self.clone();
        let mut suffix = Vec::new();
        'outer: loop {
            for i in 0..v.n().saturating_sub(1) {
                if v.0[i] > v.0[i + 1] {
                    // right descent: v s_i is shorter
                    v = v.right_simple(i);
                    suffix.push(i);
                    continue 'outer;
                }
            }
            break;
        }
        // self = (s_{i_1} ... s_{i_k})^{-1} reversed
        suffix.reverse();
        suffix
    }

    /// Applies the permutation to an exponent vector: `w(x)_i = x_{w^{-1}(i)}`.
    pub fn permute_exps(&self, x: &[i32]) -> Vec<i32> {
        let n = self.n();
        let mut out = vec![0; n];
        for (i, &xi) in x.iter().enumerate() {
            out[self.0[i] as usize] = xi;
        }
        out
    }
}

/// All permutations of `{0..n-1}` in lexicographic order of one-line notation.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    fn rec(remaining: &[u8], prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if remaining.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for (k, &x) in remaining.iter().enumerate() {
            let mut rest = remaining.to_vec();
            rest.remove(k);
            prefix.push(x);
            rec(&rest, prefix, out);
            prefix.pop();
        }
    }
    let all: Vec<u8> = (0..n as u8).collect();
    rec(&all, &mut Vec::new(), &mut out);
    out.into_iter().map(Perm).collect()
}
