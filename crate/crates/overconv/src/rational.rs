//! p-adic helpers on exact rationals.
//!
//! Every coefficient in the crate is a [`Q`] (an exact rational). These helpers
//! compute p-adic valuations and p-adic truncations, which is all the precision
//! machinery the algorithms need.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Q = BigRational;

/// `n` as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `num / den` as a rational.
pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// `p^k` as a big integer.
pub fn pow_p(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// `p^k` as a rational, `k` may be negative.
pub fn pow_p_q(p: u64, k: i64) -> Q {
    if k >= 0 {
        Q::from_integer(pow_p(p, k as u32))
    } else {
        Q::new(BigInt::one(), pow_p(p, (-k) as u32))
    }
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn vp_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (quo, rem) = n.div_rem(&pb);
        if !rem.is_zero() {
            return Some(v);
        }
        n = quo;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn vp(x: &Q, p: u64) -> Option<i64> {
    let a = vp_int(x.numer(), p)?;
    let b = vp_int(x.denom(), p).unwrap_or(0);
    Some(a - b)
}

/// Split a nonzero rational as `p^v * u` with `u` a p-adic unit.
pub fn split_unit(x: &Q, p: u64) -> (i64, Q) {
    let v = vp(x, p).expect("split_unit of zero");
    (v, x * pow_p_q(p, -v))
}

/// Inverse of `a` modulo `m` (`a` must be coprime to `m`).
pub fn inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one(), "inv_mod of a non-unit");
    e.x.mod_floor(m)
}

/// A representative of `x` modulo `p^n` with only p-power denominators.
///
/// Returns zero when `v_p(x) >= n`. The result `y` satisfies
/// `v_p(x - y) >= n`, and for `x` with only p-power denominators the result is
/// the canonical representative with numerator digits in `[0, p^(n + k))`.
pub fn trunc(x: &Q, p: u64, n: i64) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let (v, u) = split_unit(x, p);
    if v >= n {
        return Q::zero();
    }
    let modulus = pow_p(p, (n - v) as u32);
    let num = u.numer().mod_floor(&modulus);
    let den = u.denom();
    let r = if den.is_one() { num } else { (num * inv_mod(den, &modulus)).mod_floor(&modulus) };
    Q::from_integer(r) * pow_p_q(p, v)
}

/// Like [`trunc`], but choosing the representative of least absolute value.
pub fn trunc_balanced(x: &Q, p: u64, n: i64) -> Q {
    let t = trunc(x, p, n);
    if t.is_zero() {
        return t;
    }
    let (v, u) = split_unit(&t, p);
    let m = Q::from_integer(pow_p(p, (n - v) as u32));
    let u = if &u + &u > m { u - m } else { u };
    u * pow_p_q(p, v)
}

/// Reduce a p-integral rational to `F_p`.
pub fn to_fp(x: &Q, p: u64) -> Result<u64> {
    if x.is_zero() {
        return Ok(0);
    }
    if vp(x, p).unwrap() < 0 {
        return Err(Error::Domain(format!("{} is not p-integral", fmt_q(x))));
    }
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb);
    let den = x.denom().mod_floor(&pb);
    let r = (num * inv_mod(&den, &pb)).mod_floor(&pb);
    Ok(r.to_u64().unwrap())
}

/// Canonical string form `a/b` (or `a` for integers).
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `a`, `-a` or `a/b`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse { pos: 0, msg: format!("not a rational: {s:?}") };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// Floor of a rational.
pub fn floor_q(x: &Q) -> BigInt {
    x.floor().to_integer()
}

/// Ceiling of a rational.
pub fn ceil_q(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

/// Absolute value helper that keeps the sign convention of `BigInt`.
pub fn is_negative(x: &Q) -> bool {
    x.is_negative()
}

/// Small integer conversion used where exponents are known to be machine size.
pub fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("integer does not fit in i64")
}

/// Sign of a big integer as -1, 0, 1.
pub fn sign(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Whether `p` is prime (trial division; primes here are small).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(vp(&qf(18, 5), 3), Some(2));
        assert_eq!(vp(&qf(5, 27), 3), Some(-3));
        assert_eq!(vp(&q(0), 3), None);
    }

    #[test]
    fn truncation_is_congruent() {
        let x = qf(7, 10);
        let t = trunc(&x, 3, 5);
        assert!(vp(&(x - &t), 3).unwrap() >= 5);
        assert!(t.denom().is_one());
        let y = qf(2, 9);
        let t = trunc(&y, 3, 1);
        assert_eq!(t, qf(2, 9));
        assert_eq!(trunc(&q(27), 3, 3), q(0));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("-3/6").unwrap(), qf(-1, 2));
        assert_eq!(fmt_q(&qf(4, 2)), "2");
        assert_eq!(fmt_q(&qf(1, 3)), "1/3");
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn fp_reduction() {
        assert_eq!(to_fp(&qf(1, 2), 3).unwrap(), 2);
        assert!(to_fp(&qf(1, 3), 3).is_err());
    }
}
