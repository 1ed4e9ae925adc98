//! Exact rational scalars.
//!
//! Every slope, degree, probability and tail value in this crate is a
//! [`Rational`]: an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. `num-rational` canonicalizes on construction and
//! after every arithmetic operation, so equality is structural.

use alloc::string::{String, ToString};

use num_bigint::BigUint;
use num_traits::{Signed, Zero};

/// Arbitrary-precision rational number, always canonical.
pub type Rational = num_rational::BigRational;

/// Shorthand for building a rational from machine integers.
///
/// Panics if `denom == 0`.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    assert!(denom != 0, "rational denominator must be nonzero");
    Rational::new(numer.into(), denom.into())
}

/// Rational from a machine integer.
pub fn integer(value: i64) -> Rational {
    Rational::from_integer(value.into())
}

fn pow10(exp: u32) -> BigUint {
    BigUint::from(10u32).pow(exp)
}

fn digit_count(value: &BigUint) -> u64 {
    // Number of decimal digits; values here stay well below the point where
    // the radix conversion would matter.
    value.to_str_radix(10).len() as u64
}

/// Renders `value` as a decimal string with exactly `sig` significant
/// digits, correctly rounded (ties away from zero) from the exact rational.
///
/// Output is positional for moderate exponents and falls back to `d.dde±E`
/// scientific notation for very small or very large magnitudes. Zero renders
/// as `"0"`. The rendering is a pure function of the value, so identical
/// inputs always produce identical bytes.
pub fn decimal_string(value: &Rational, sig: usize) -> String {
    assert!(sig > 0, "need at least one significant digit");
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let numer = value.numer().magnitude();
    let denom = value.denom().magnitude();

    // Decimal exponent e with 10^e <= |value| < 10^(e+1). The digit-count
    // difference is either e or e+1; compare once to settle it.
    let mut exp = digit_count(numer) as i64 - digit_count(denom) as i64;
    if !at_least_pow10(numer, denom, exp) {
        exp -= 1;
    }
    debug_assert!(at_least_pow10(numer, denom, exp));
    debug_assert!(!at_least_pow10(numer, denom, exp + 1));

    // t = round(|value| * 10^(sig-1-exp)) has sig digits, except when
    // rounding carries all the way up to 10^sig.
    let shift = sig as i64 - 1 - exp;
    let (num_scaled, den_scaled) = if shift >= 0 {
        (numer * pow10(shift as u32), denom.clone())
    } else {
        (numer.clone(), denom * pow10((-shift) as u32))
    };
    let mut t = (num_scaled * 2u32 + &den_scaled) / (den_scaled * 2u32);
    if t == pow10(sig as u32) {
        t /= 10u32;
        exp += 1;
    }
    let digits = t.to_str_radix(10);
    debug_assert_eq!(digits.len(), sig);

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exp >= 0 && (exp as usize) < sig {
        let split = exp as usize + 1;
        out.push_str(&digits[..split]);
        if split < sig {
            out.push('.');
            out.push_str(&digits[split..]);
        }
    } else if exp < 0 && exp >= -6 {
        out.push_str("0.");
        for _ in 0..(-exp - 1) {
            out.push('0');
        }
        out.push_str(&digits);
    } else {
        out.push_str(&digits[..1]);
        if sig > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push('e');
        out.push_str(&exp.to_string());
    }
    out
}

/// True iff numer/denom >= 10^exp.
fn at_least_pow10(numer: &BigUint, denom: &BigUint, exp: i64) -> bool {
    if exp >= 0 {
        *numer >= denom * pow10(exp as u32)
    } else {
        numer * pow10((-exp) as u32) >= *denom
    }
}
