//! Exact rational numbers and their string form.
//!
//! Rationals cross serialization boundaries as `"p/q"` strings so that no
//! consumer is tempted to round them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

/// Rational from an integer.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Rational `num/den`.
pub fn qr(num: i64, den: i64) -> Q {
    assert!(den != 0, "zero denominator");
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical string form, always with an explicit denominator.
pub fn q_to_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `"p/q"` or a bare integer.
pub fn q_from_string(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt, String> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| format!("bad integer {t:?}: {e}"))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Q::new(parse_int(num)?, d))
        }
        None => Ok(Q::from_integer(parse_int(s)?)),
    }
}

/// Integer power with negative exponents allowed (base must be nonzero).
pub fn q_pow(base: &Q, exp: i64) -> Q {
    if exp == 0 {
        return Q::one();
    }
    assert!(!base.is_zero() || exp > 0, "negative power of zero");
    let p = base.pow(i32::try_from(exp.unsigned_abs()).expect("exponent fits in i32"));
    if exp > 0 {
        p
    } else {
        p.recip()
    }
}

/// `true` if `x = q^k` for some `|k| <= bound`.
pub fn is_small_q_power(x: &Q, q: &Q, bound: i64) -> Option<i64> {
    for k in -bound..=bound {
        if *x == q_pow(q, k) {
            return Some(k);
        }
    }
    None
}

/// Deterministic "size" used to pick nice pivots.
pub fn q_complexity(x: &Q) -> usize {
    x.numer().abs().to_string().len() + x.denom().to_string().len()
}
