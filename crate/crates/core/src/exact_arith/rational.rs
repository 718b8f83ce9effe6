use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};

use super::Field;
use crate::error::{invalid, Result};

/// The rational numbers with arbitrary precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Q;

impl Field for Q {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(&self, r: &BigRational) -> Option<BigRational> {
        Some(r.clone())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }

    fn random(&self, rng: &mut dyn RngCore) -> BigRational {
        let n: i64 = rng.gen_range(-20..=20);
        let d: i64 = rng.gen_range(1..=6);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn to_json(&self, a: &BigRational) -> serde_json::Value {
        serde_json::Value::String(format_rational(a))
    }

    fn fmt_elem(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("({})", format_rational(a))
        }
    }
}

/// "num/den" with the denominator always present.
pub fn format_rational(a: &BigRational) -> String {
    format!("{}/{}", a.numer(), a.denom())
}

/// Parse "n", "-n" or "n/d".
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let (Ok(n), Ok(d)) = (n.parse::<BigInt>(), d.parse::<BigInt>()) else {
        return invalid(format!("cannot parse rational {s:?}"));
    };
    if d.is_zero() {
        return invalid(format!("zero denominator in {s:?}"));
    }
    let r = BigRational::new(n, d);
    debug_assert!(r.denom().is_positive());
    Ok(r)
}
