use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::Field;
use crate::error::{Error, Result};

/// C(r, n) = r (r-1) ... (r-n+1) / n! for rational r.
pub fn gen_binomial(r: &BigRational, n: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..n {
        acc *= r - BigRational::from_integer(BigInt::from(i));
        acc /= BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

/// C(r, n) reduced into `field`; fails when the exact value has a
/// denominator divisible by the characteristic.
pub fn gen_binomial_mod<F: Field>(r: &BigRational, n: u64, field: &F) -> Result<F::Elem> {
    let value = gen_binomial(r, n);
    field.from_rational(&value).ok_or_else(|| {
        Error::Inapplicable(format!("characteristic {} divides the denominator of C({r}, {n})", field.characteristic()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{parse_rational, Fq};
    use proptest::prelude::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn half_choose_two() {
        assert_eq!(gen_binomial(&q("1/2"), 2), q("-1/8"));
    }

    #[test]
    fn n_one_is_identity() {
        assert_eq!(gen_binomial(&q("4/3"), 1), q("4/3"));
        assert_eq!(gen_binomial(&q("4/3"), 0), q("1"));
    }

    #[test]
    fn integer_case_is_pascal() {
        let mut row = vec![BigInt::one()];
        for m in 1..=12u64 {
            let mut next = vec![BigInt::one(); m as usize + 1];
            for k in 1..m as usize {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
            for (n, v) in row.iter().enumerate() {
                assert_eq!(
                    gen_binomial(&BigRational::from_integer(BigInt::from(m)), n as u64),
                    BigRational::from_integer(v.clone())
                );
            }
        }
    }

    #[test]
    fn mod_p_reduction() {
        let f5 = Fq::prime(5).unwrap();
        // C(4/3, 2) = 2/9, and 9^{-1} = 4 mod 5.
        assert_eq!(gen_binomial_mod(&q("4/3"), 2, &f5).unwrap(), 3);
        let f3 = Fq::prime(3).unwrap();
        assert!(gen_binomial_mod(&q("1/3"), 1, &f3).is_err());
        // C(6, 3) = 20 is an integer even though 3 | 3!.
        assert_eq!(gen_binomial_mod(&q("6"), 3, &f3).unwrap(), 2);
    }

    proptest! {
        #[test]
        fn pascal_recursion(num in -40i64..40, den in 1i64..9, n in 1u64..9) {
            let r = BigRational::new(BigInt::from(num), BigInt::from(den));
            let lhs = gen_binomial(&r, n);
            let one = BigRational::one();
            let rhs = gen_binomial(&(&r - &one), n - 1) * &r
                / BigRational::from_integer(BigInt::from(n));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
