//! Small helpers on arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// Shorthand constructor.
pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer power with negative exponents (panics on 0^negative).
pub fn pow_rational(base: &BigRational, exp: i64) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    let positive = if exp < 0 {
        assert!(!base.is_zero(), "zero to a negative power");
        base.recip()
    } else {
        base.clone()
    };
    let mut e = exp.unsigned_abs();
    let mut result = BigRational::one();
    let mut b = positive;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * &b;
        }
    }
    result
}

/// Parses `p/q` or a plain integer.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = n.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
        let denom: BigInt = d.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
        if denom.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(BigRational::new(numer, denom))
    } else {
        let numer: BigInt = s.parse().map_err(|e| format!("bad integer: {e}"))?;
        Ok(BigRational::from_integer(numer))
    }
}

/// Renders as `p/q`, or just `p` for integers.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A random rational with numerator in [-bound, bound] and denominator in
/// [1, bound]. Small heights keep exact arithmetic fast.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    let numer = rng.gen_range(-bound..=bound);
    let denom = rng.gen_range(1..=bound);
    rat(numer, denom)
}

/// A random nonzero rational with the same bounds.
pub fn random_nonzero_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    loop {
        let r = random_rational(rng, bound);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Absolute value helper re-exported for convenience in tests.
pub fn abs(r: &BigRational) -> BigRational {
    r.abs()
}
