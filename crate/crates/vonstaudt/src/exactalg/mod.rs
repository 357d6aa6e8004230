//! Exact field tower and dense exact linear algebra.
//!
//! Three fields are supported: the rationals, prime fields `F_p`, and the
//! bivariate rational-function fields `F_p(l,m)`. Matrices are dense and
//! always carry their field; rank is computed by exact Gaussian elimination,
//! with a fraction-free (Bareiss) path for polynomial entries.

mod bipoly;
mod fp;
mod matrix;
mod rationals;
mod ratfunc;
mod unipoly;

pub use bipoly::BiPoly;
pub use fp::PrimeField;
pub use matrix::{lemma_block_rank, lemma_block_matrix, BlockCase, BlockMatrix, Matrix, SolveOutcome};
pub use rationals::Rationals;
pub use ratfunc::{RatFunc, RatFuncField};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Errors raised by exact-algebra operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactAlgError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("matrices belong to different fields")]
    FieldMismatch,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("block column index {0} out of range (have {1})")]
    BlockColumnOutOfRange(usize, usize),
    #[error("cannot parse {0:?} as an element of {1}")]
    ElemParse(String, String),
    #[error("gcd of two zero polynomials is undefined")]
    GcdOfZeros,
    #[error("division by zero")]
    DivisionByZero,
}

/// Runtime description of one of the three supported fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FieldSpec {
    /// The field of rational numbers.
    #[serde(rename = "Q")]
    Rationals,
    /// The prime field `F_p`.
    #[serde(rename = "Fp")]
    Prime { p: u64 },
    /// The field of rational functions `F_p(vars[0], vars[1])` in two
    /// algebraically independent variables.
    #[serde(rename = "Fpxy")]
    RationalFunctions { p: u64, vars: [String; 2] },
}

impl FieldSpec {
    /// Builds the spec for `F_p`, verifying primality.
    pub fn prime(p: u64) -> Result<Self, ExactAlgError> {
        if !is_prime(p) {
            return Err(ExactAlgError::NotPrime(p));
        }
        Ok(FieldSpec::Prime { p })
    }

    /// Builds the spec for `F_p(l, m)`, verifying primality.
    pub fn rational_functions(p: u64, vars: [&str; 2]) -> Result<Self, ExactAlgError> {
        if !is_prime(p) {
            return Err(ExactAlgError::NotPrime(p));
        }
        Ok(FieldSpec::RationalFunctions {
            p,
            vars: [vars[0].to_string(), vars[1].to_string()],
        })
    }

    /// Validates the spec as read from JSON (primality of `p`).
    pub fn validate(&self) -> Result<(), ExactAlgError> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::Prime { p } | FieldSpec::RationalFunctions { p, .. } => {
                if is_prime(*p) {
                    Ok(())
                } else {
                    Err(ExactAlgError::NotPrime(*p))
                }
            }
        }
    }

    /// The characteristic of the field (0 for the rationals).
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime { p } | FieldSpec::RationalFunctions { p, .. } => *p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime { p } => write!(f, "F{p}"),
            FieldSpec::RationalFunctions { p, vars } => {
                write!(f, "F{p}({},{})", vars[0], vars[1])
            }
        }
    }
}

/// Trial-division primality test; adequate for the desk-scale primes used
/// throughout.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field, in the "context object" style: the field value carries the
/// parameters (modulus, variable names) and all arithmetic goes through it.
pub trait Field: Clone + PartialEq + fmt::Debug {
    /// Elements of the field.
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// The image of an integer under the unique ring map from `Z`.
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    fn from_int(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    /// The runtime description of this field.
    fn spec(&self) -> FieldSpec;

    /// Parses an element from its canonical string form.
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, ExactAlgError>;

    /// Canonical string form of an element.
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Exact column rank of a dense `rows x cols` row-major matrix.
    ///
    /// The default is plain Gaussian elimination over the field; fields with
    /// expensive canonical forms may override (the rational-function field
    /// uses fraction-free elimination on cleared numerators).
    fn matrix_rank(&self, rows: usize, cols: usize, data: &mut [Self::Elem]) -> usize {
        gauss_rank(self, rows, cols, data)
    }
}

/// Plain exact Gaussian elimination, counting pivots.
pub(crate) fn gauss_rank<F: Field>(
    field: &F,
    rows: usize,
    cols: usize,
    data: &mut [F::Elem],
) -> usize {
    debug_assert_eq!(data.len(), rows * cols);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = (rank..rows).find(|&r| !field.is_zero(&data[r * cols + col]));
        let Some(pivot) = pivot else { continue };
        if pivot != rank {
            for j in 0..cols {
                data.swap(pivot * cols + j, rank * cols + j);
            }
        }
        let inv = field
            .inv(&data[rank * cols + col])
            .expect("pivot is nonzero");
        for r in rank + 1..rows {
            if field.is_zero(&data[r * cols + col]) {
                continue;
            }
            let factor = field.mul(&data[r * cols + col], &inv);
            for j in col..cols {
                let sub = field.mul(&factor, &data[rank * cols + j]);
                data[r * cols + j] = field.sub(&data[r * cols + j], &sub);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(5));
        assert!(is_prime(97));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(!is_prime(4));
        assert!(!is_prime(91));
    }

    #[test]
    fn field_spec_rejects_composite_modulus() {
        assert_eq!(FieldSpec::prime(6), Err(ExactAlgError::NotPrime(6)));
        assert!(FieldSpec::rational_functions(9, ["l", "m"]).is_err());
        assert!(FieldSpec::prime(7).is_ok());
    }

    #[test]
    fn field_spec_json_round_trip() {
        let spec = FieldSpec::rational_functions(2, ["l", "m"]).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"Fpxy","p":2,"vars":["l","m"]}"#
        );
        let back: FieldSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
