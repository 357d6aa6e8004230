//! The prime field `F_p`, with elements stored as reduced `u64` residues.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{is_prime, ExactAlgError, Field, FieldSpec};

/// The field `F_p` for a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Constructs `F_p`; panics if `p` is not prime (use [`FieldSpec::prime`]
    /// for fallible validation of untrusted input).
    pub fn new(p: u64) -> Self {
        assert!(is_prime(p), "{p} is not prime");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary residue into `[0, p)`.
    pub fn reduce(&self, n: u64) -> u64 {
        n % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2) mod p.
        Some(self.pow(*a, self.p - 2))
    }

    fn from_bigint(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = n.mod_floor(&p);
        r.to_u64().expect("residue fits in u64")
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime { p: self.p }
    }

    fn parse_elem(&self, s: &str) -> Result<u64, ExactAlgError> {
        let t = s.trim();
        t.parse::<i128>()
            .map(|n| {
                let p = self.p as i128;
                (n.rem_euclid(p)) as u64
            })
            .map_err(|_| ExactAlgError::ElemParse(s.to_string(), format!("F{}", self.p)))
    }

    fn format_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}
