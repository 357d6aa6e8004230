//! The bivariate rational-function field `F_p(l, m)`.
//!
//! Elements are fractions of [`BiPoly`]s in canonical form: the gcd of
//! numerator and denominator is a unit and the denominator is monic under
//! graded lex, so equality is structural.

use num_bigint::BigInt;

use super::bipoly::{gcd_bipoly, BiPoly};
use super::{ExactAlgError, Field, FieldSpec, PrimeField};

/// An element of `F_p(l, m)` in reduced form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: BiPoly,
    den: BiPoly,
}

impl RatFunc {
    pub fn numerator(&self) -> &BiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &BiPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
}

/// The field `F_p(vars[0], vars[1])` of rational functions in two variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFuncField {
    fp: PrimeField,
    vars: [String; 2],
}

impl RatFuncField {
    /// Constructs `F_p(l, m)` with the given variable names; panics on a
    /// composite modulus.
    pub fn new(p: u64, vars: [&str; 2]) -> Self {
        RatFuncField {
            fp: PrimeField::new(p),
            vars: [vars[0].to_string(), vars[1].to_string()],
        }
    }

    pub fn base(&self) -> &PrimeField {
        &self.fp
    }

    pub fn var_names(&self) -> &[String; 2] {
        &self.vars
    }

    /// The first variable as a field element.
    pub fn var_first(&self) -> RatFunc {
        self.from_poly(BiPoly::var_first(&self.fp))
    }

    /// The second variable as a field element.
    pub fn var_second(&self) -> RatFunc {
        self.from_poly(BiPoly::var_second(&self.fp))
    }

    pub fn from_poly(&self, num: BiPoly) -> RatFunc {
        RatFunc {
            num,
            den: BiPoly::one(&self.fp),
        }
    }

    /// Builds and reduces `num / den`; errors when `den` is zero.
    pub fn fraction(&self, num: BiPoly, den: BiPoly) -> Result<RatFunc, ExactAlgError> {
        if den.is_zero() {
            return Err(ExactAlgError::DivisionByZero);
        }
        Ok(self.reduce(num, den))
    }

    fn reduce(&self, num: BiPoly, den: BiPoly) -> RatFunc {
        let fp = &self.fp;
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFunc {
                num,
                den: BiPoly::one(fp),
            };
        }
        let g = gcd_bipoly(&num, &den, fp).expect("operands nonzero");
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g, fp).expect("gcd divides numerator"),
                den.exact_div(&g, fp).expect("gcd divides denominator"),
            )
        };
        // normalize: denominator monic under graded lex
        let (_, lc) = den.leading_term().expect("denominator nonzero");
        if lc != 1 {
            let inv = fp.inv(&lc).unwrap();
            num = num.scale(inv, fp);
            den = den.scale(inv, fp);
        }
        RatFunc { num, den }
    }

    /// Substitutes base-field values for the variables; `None` when the
    /// denominator vanishes at the point.
    pub fn eval(&self, a: &RatFunc, first: u64, second: u64) -> Option<u64> {
        let fp = &self.fp;
        let d = a.den.eval(first, second, fp);
        let inv = fp.inv(&d)?;
        Some(fp.mul(&a.num.eval(first, second, fp), &inv))
    }
}

impl Field for RatFuncField {
    type Elem = RatFunc;

    fn zero(&self) -> RatFunc {
        self.from_poly(BiPoly::zero())
    }

    fn one(&self) -> RatFunc {
        self.from_poly(BiPoly::one(&self.fp))
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.num.is_zero()
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let fp = &self.fp;
        let num = a
            .num
            .mul(&b.den, fp)
            .add(&b.num.mul(&a.den, fp), fp);
        let den = a.den.mul(&b.den, fp);
        self.reduce(num, den)
    }

    fn neg(&self, a: &RatFunc) -> RatFunc {
        RatFunc {
            num: a.num.neg(&self.fp),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        let fp = &self.fp;
        self.reduce(a.num.mul(&b.num, fp), a.den.mul(&b.den, fp))
    }

    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        if a.num.is_zero() {
            return None;
        }
        Some(self.reduce(a.den.clone(), a.num.clone()))
    }

    fn from_bigint(&self, n: &BigInt) -> RatFunc {
        let c = self.fp.from_bigint(n);
        self.from_poly(BiPoly::constant(&self.fp, c))
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::RationalFunctions {
            p: self.fp.modulus(),
            vars: self.vars.clone(),
        }
    }

    fn parse_elem(&self, s: &str) -> Result<RatFunc, ExactAlgError> {
        let t = s.trim();
        match split_fraction(t) {
            Some((num, den)) => {
                let n = BiPoly::parse(num, &self.fp, &self.vars)?;
                let d = BiPoly::parse(den, &self.fp, &self.vars)?;
                self.fraction(n, d)
            }
            None => {
                let body = strip_outer_parens(t);
                Ok(self.from_poly(BiPoly::parse(body, &self.fp, &self.vars)?))
            }
        }
    }

    fn format_elem(&self, a: &RatFunc) -> String {
        let num = a.num.format(&self.fp, &self.vars);
        if a.den.is_one() {
            num
        } else {
            format!("({})/({})", num, a.den.format(&self.fp, &self.vars))
        }
    }

    fn matrix_rank(&self, rows: usize, cols: usize, data: &mut [RatFunc]) -> usize {
        bareiss_rank(self, rows, cols, data)
    }
}

/// Splits `"(..)/(..)"` (or `a/b` with paren-free operands) at the top-level
/// `/`; returns the operands with outer parentheses stripped.
fn split_fraction(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => {
                return Some((strip_outer_parens(&s[..i]), strip_outer_parens(&s[i + 1..])));
            }
            _ => {}
        }
    }
    None
}

fn strip_outer_parens(s: &str) -> &str {
    let t = s.trim();
    if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        // only strip when the parens actually match each other
        let mut depth = 0i32;
        for ch in inner.chars() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return t;
                    }
                }
                _ => {}
            }
        }
        if depth == 0 {
            return inner.trim();
        }
    }
    t
}

/// Rank via fraction-free (Bareiss) elimination: each row is cleared to a
/// common polynomial denominator, then one-step fraction-free elimination
/// runs on the numerators with exact division by the previous pivot. This
/// keeps intermediate entries to minors of the cleared matrix instead of
/// letting reduced fractions blow up.
fn bareiss_rank(field: &RatFuncField, rows: usize, cols: usize, data: &mut [RatFunc]) -> usize {
    let fp = field.base();
    let one = BiPoly::one(fp);
    let mut m: Vec<BiPoly> = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let row = &data[r * cols..(r + 1) * cols];
        // least common denominator of the row
        let mut lcd = one.clone();
        for e in row {
            if e.den.is_one() {
                continue;
            }
            let g = gcd_bipoly(&lcd, &e.den, fp).expect("nonzero");
            lcd = lcd.mul(&e.den.exact_div(&g, fp).unwrap(), fp);
        }
        for e in row {
            let scale = lcd.exact_div(&e.den, fp).expect("lcd is a common multiple");
            m.push(e.num.mul(&scale, fp));
        }
    }

    let mut rank = 0usize;
    let mut prev = one;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r * cols + col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            for j in 0..cols {
                m.swap(pivot * cols + j, rank * cols + j);
            }
        }
        let p = m[rank * cols + col].clone();
        for r in rank + 1..rows {
            let head = m[r * cols + col].clone();
            for j in col + 1..cols {
                let t = p
                    .mul(&m[r * cols + j], fp)
                    .sub(&head.mul(&m[rank * cols + j], fp), fp);
                m[r * cols + j] = t
                    .exact_div(&prev, fp)
                    .expect("Bareiss division is exact");
            }
            m[r * cols + col] = BiPoly::zero();
        }
        prev = p;
        rank += 1;
    }
    rank
}
