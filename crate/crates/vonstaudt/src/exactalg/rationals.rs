//! The field of rational numbers, backed by arbitrary-precision ratios.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

use super::{ExactAlgError, Field, FieldSpec};

/// The field `Q`. Stateless; elements are [`BigRational`]s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
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

    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational, ExactAlgError> {
        BigRational::from_str(s.trim())
            .map_err(|_| ExactAlgError::ElemParse(s.to_string(), "Q".to_string()))
    }

    fn format_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else if a.denom().is_negative() {
            // BigRational keeps denominators positive, but stay defensive.
            format!("{}/{}", -a.numer(), -a.denom())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let q = Rationals;
        let x = q.parse_elem("3/4").unwrap();
        let y = q.parse_elem("-2").unwrap();
        assert_eq!(q.format_elem(&x), "3/4");
        assert_eq!(q.format_elem(&y), "-2");
        assert_eq!(q.format_elem(&q.mul(&x, &y)), "-3/2");
        assert!(q.parse_elem("1.5").is_err());
    }

    #[test]
    fn inverse() {
        let q = Rationals;
        let x = q.parse_elem("-7/3").unwrap();
        let inv = q.inv(&x).unwrap();
        assert_eq!(q.mul(&x, &inv), q.one());
        assert_eq!(q.inv(&q.zero()), None);
    }
}
