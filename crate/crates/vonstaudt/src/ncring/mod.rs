//! Noncommutative polynomials over the integers, equation systems, and
//! evaluation at matrix assignments.
//!
//! A [`Word`] is an ordered sequence of variable indices (the empty word is
//! the multiplicative unit); an [`NcPolynomial`] maps words to nonzero
//! integer coefficients, so equality is structural. Systems carry the
//! variable names from the source text; indices are assigned to names in
//! lexicographic order.

mod parse;

pub use parse::{parse_system, ParseError, ParseErrorKind};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

use crate::exactalg::{Field, Matrix};

/// A monomial in noncommuting variables: the ordered sequence of variable
/// indices. The empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(var: usize) -> Self {
        Word(vec![var])
    }

    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation; associative with the empty word as identity.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

/// Graded lexicographic order: shorter words first, ties broken left to
/// right on the indices. This is the canonical term order everywhere.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// An element of `Z<X_1,...,X_n>`: a finite map from words to nonzero
/// integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NcPolynomial {
    terms: BTreeMap<Word, BigInt>,
}

impl NcPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(Word::empty(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn variable(var: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(Word::single(var), BigInt::one());
        p
    }

    pub fn monomial(word: Word, coeff: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `coeff * word`, dropping the term if the total cancels.
    pub fn add_term(&mut self, word: Word, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(word.clone()).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        NcPolynomial {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.concat(wb), ca * cb);
            }
        }
        out
    }

    /// The terms with positive coefficients, as-is.
    pub fn positive_part(&self) -> Self {
        NcPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.is_positive())
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// The negated terms with negative coefficients, so that
    /// `p = p.positive_part() - p.negative_part()`.
    pub fn negative_part(&self) -> Self {
        NcPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.is_negative())
                .map(|(w, c)| (w.clone(), -c))
                .collect(),
        }
    }

    /// The variables occurring in the polynomial.
    pub fn variables(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().flat_map(|w| w.letters().iter().copied())
    }
}

/// An equation `lhs = rhs`; both sides are retained as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcEquation {
    pub lhs: NcPolynomial,
    pub rhs: NcPolynomial,
}

/// A finite system of polynomial equations in noncommuting variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcSystem {
    var_names: Vec<String>,
    pub equations: Vec<NcEquation>,
}

impl NcSystem {
    /// Builds a system over the given variable names. Equation variable
    /// indices refer to positions in `var_names`.
    pub fn new(var_names: Vec<String>, equations: Vec<NcEquation>) -> Self {
        let sys = NcSystem {
            var_names,
            equations,
        };
        debug_assert!(sys
            .equations
            .iter()
            .flat_map(|e| e.lhs.variables().chain(e.rhs.variables()))
            .all(|v| v < sys.var_names.len()));
        sys
    }

    pub fn num_vars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn var_name(&self, idx: usize) -> &str {
        &self.var_names[idx]
    }

    /// Canonical text form: one equation per line, terms in graded-lex
    /// order. `parse_system(to_text(s))` equals `s`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for eq in &self.equations {
            out.push_str(&format_poly(&eq.lhs, &self.var_names));
            out.push_str(" = ");
            out.push_str(&format_poly(&eq.rhs, &self.var_names));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for NcSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn format_poly(p: &NcPolynomial, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (word, coeff)) in p.terms().enumerate() {
        let mag = coeff.abs();
        if idx == 0 {
            if coeff.is_negative() {
                out.push('-');
            }
        } else if coeff.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let word_str = word
            .letters()
            .iter()
            .map(|&v| names[v].as_str())
            .collect::<Vec<_>>()
            .join("*");
        if word.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&word_str);
        } else {
            out.push_str(&mag.to_string());
            out.push('*');
            out.push_str(&word_str);
        }
    }
    out
}

/// Errors raised by evaluation at a matrix assignment.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable {0} has no assigned matrix")]
    UnassignedVariable(usize),
    #[error("variable {var} is assigned a {rows}x{cols} matrix, expected {c}x{c}")]
    WrongSize {
        var: usize,
        rows: usize,
        cols: usize,
        c: usize,
    },
    #[error("assigned matrices do not all live over the evaluation field")]
    FieldMismatch,
}

/// Evaluates a polynomial at an assignment of `c x c` matrices: the sum over
/// terms of coefficient times the ordered product of assigned matrices. The
/// empty word evaluates to the identity.
pub fn evaluate<F: Field>(
    poly: &NcPolynomial,
    assignment: &BTreeMap<usize, Matrix<F>>,
    field: &F,
    c: usize,
) -> Result<Matrix<F>, EvalError> {
    for v in poly.variables() {
        let m = assignment
            .get(&v)
            .ok_or(EvalError::UnassignedVariable(v))?;
        if m.rows() != c || m.cols() != c {
            return Err(EvalError::WrongSize {
                var: v,
                rows: m.rows(),
                cols: m.cols(),
                c,
            });
        }
        if m.field() != field {
            return Err(EvalError::FieldMismatch);
        }
    }
    let mut acc = Matrix::zero(field.clone(), c, c);
    for (word, coeff) in poly.terms() {
        let mut prod = Matrix::identity(field.clone(), c);
        for &v in word.letters() {
            prod = prod.mul(&assignment[&v]).expect("dimensions checked");
        }
        let scalar = field.from_bigint(coeff);
        let scaled = Matrix::from_fn(field.clone(), c, c, |r, s| {
            field.mul(&scalar, prod.get(r, s))
        });
        acc = acc.add(&scaled).expect("dimensions checked");
    }
    Ok(acc)
}

/// True iff the assignment solves every equation of the system.
pub fn is_solution<F: Field>(
    system: &NcSystem,
    assignment: &BTreeMap<usize, Matrix<F>>,
    field: &F,
    c: usize,
) -> Result<bool, EvalError> {
    for eq in &system.equations {
        let lhs = evaluate(&eq.lhs, assignment, field, c)?;
        let rhs = evaluate(&eq.rhs, assignment, field, c)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{PrimeField, Rationals};

    fn map<F: Field>(entries: Vec<(usize, Matrix<F>)>) -> BTreeMap<usize, Matrix<F>> {
        entries.into_iter().collect()
    }

    #[test]
    fn word_order_is_graded_lex() {
        let e = Word::empty();
        let x = Word::new(vec![0]);
        let xy = Word::new(vec![0, 1]);
        let yx = Word::new(vec![1, 0]);
        assert!(e < x);
        assert!(x < xy);
        assert!(xy < yx);
    }

    #[test]
    fn polynomial_normalization_cancels() {
        let mut p = NcPolynomial::zero();
        p.add_term(Word::new(vec![0, 1]), BigInt::from(2));
        p.add_term(Word::new(vec![0, 1]), BigInt::from(-2));
        assert!(p.is_zero());
    }

    #[test]
    fn evaluate_word_product_over_f5() {
        // XYX at X=[[0,1],[1,0]], Y=[[1,0],[0,2]] over F_5 is [[2,0],[0,1]]
        let f5 = PrimeField::new(5);
        let x = Matrix::from_ints(f5, 2, 2, &[0, 1, 1, 0]);
        let y = Matrix::from_ints(f5, 2, 2, &[1, 0, 0, 2]);
        let poly = NcPolynomial::monomial(Word::new(vec![0, 1, 0]), BigInt::one());
        let out = evaluate(&poly, &map(vec![(0, x), (1, y)]), &f5, 2).unwrap();
        assert_eq!(out, Matrix::from_ints(f5, 2, 2, &[2, 0, 0, 1]));
    }

    #[test]
    fn evaluate_zero_assignment_kills_constant_free_poly() {
        let q = Rationals;
        let z = Matrix::zero(q, 2, 2);
        let poly = NcPolynomial::variable(0)
            .mul(&NcPolynomial::variable(1))
            .add(&NcPolynomial::variable(0));
        let out = evaluate(&poly, &map(vec![(0, z.clone()), (1, z)]), &q, 2).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn evaluate_errors() {
        let q = Rationals;
        let poly = NcPolynomial::variable(3);
        let err = evaluate(&poly, &BTreeMap::new(), &q, 1).unwrap_err();
        assert_eq!(err, EvalError::UnassignedVariable(3));
        let wrong = Matrix::zero(q, 1, 2);
        let err = evaluate(&poly, &map(vec![(3, wrong)]), &q, 1).unwrap_err();
        assert!(matches!(err, EvalError::WrongSize { var: 3, .. }));
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let f3 = PrimeField::new(3);
        let mut rng = StdRng::seed_from_u64(9);
        let rand_poly = |rng: &mut StdRng| {
            let mut p = NcPolynomial::zero();
            for _ in 0..rng.gen_range(1..4) {
                let len = rng.gen_range(0..3);
                let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..2)).collect();
                p.add_term(Word::new(w), BigInt::from(rng.gen_range(-2..3)));
            }
            p
        };
        for _ in 0..20 {
            let a = rand_poly(&mut rng);
            let b = rand_poly(&mut rng);
            let asg = map(vec![
                (0, Matrix::from_fn(f3, 2, 2, |_, _| rng.gen_range(0..3))),
                (1, Matrix::from_fn(f3, 2, 2, |_, _| rng.gen_range(0..3))),
            ]);
            let ev = |p: &NcPolynomial| evaluate(p, &asg, &f3, 2).unwrap();
            assert_eq!(ev(&a.add(&b)), ev(&a).add(&ev(&b)).unwrap());
            assert_eq!(ev(&a.mul(&b)), ev(&a).mul(&ev(&b)).unwrap());
        }
    }

    #[test]
    fn scalar_evaluation_matches_commutative_arithmetic() {
        // at c = 1 over Q with a commutative-by-construction assignment,
        // evaluation is ordinary polynomial evaluation
        let q = Rationals;
        let two = Matrix::from_ints(q, 1, 1, &[2]);
        let three = Matrix::from_ints(q, 1, 1, &[3]);
        // 2*X*Y - Y*X + 5 at X=2, Y=3: 2*6 - 6 + 5 = 11
        let xy = NcPolynomial::monomial(Word::new(vec![0, 1]), BigInt::from(2));
        let yx = NcPolynomial::monomial(Word::new(vec![1, 0]), BigInt::from(-1));
        let poly = xy.add(&yx).add(&NcPolynomial::constant(BigInt::from(5)));
        let out = evaluate(&poly, &map(vec![(0, two), (1, three)]), &q, 1).unwrap();
        assert_eq!(out, Matrix::from_ints(q, 1, 1, &[11]));
    }
}
