//! Reduction of an equation system to atomic form, and translation of
//! solutions in both directions.
//!
//! An atomic system over `X_0, ..., X_N` uses only equations
//! `X_i = X_j + X_k` and `X_i = X_j * X_k`, together with the conventions
//! `X_0 = 0` and `X_1 = 1` (represented implicitly, never stored). Index 0
//! may appear in the `j`/`k` slots of additive equations; this is how a
//! reduced equation `P = Q` is encoded, as `X_P = X_Q + X_0`.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{Field, Matrix};
use crate::ncring::{self, EvalError, NcPolynomial, NcSystem, Word};

/// One atomic equation. `Add { i, j, k }` means `X_i = X_j + X_k`;
/// `Mul { i, j, k }` means `X_i = X_j * X_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum AtomicEquation {
    Add { i: usize, j: usize, k: usize },
    Mul { i: usize, j: usize, k: usize },
}

/// An atomic system: the highest variable index `N`, the equations, and the
/// map from original variable names to their atomic indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomicSystem {
    #[serde(rename = "N")]
    n: usize,
    equations: Vec<AtomicEquation>,
    origin_map: BTreeMap<String, usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AtomicError {
    #[error("atomic systems need N >= 1, got {0}")]
    EmptyVariableRange(usize),
    #[error("equation {0:?} references an index outside the legal range")]
    IndexOutOfRange(AtomicEquation),
    #[error("origin map entry {0:?} -> {1} is outside 1..=N")]
    OriginOutOfRange(String, usize),
}

impl AtomicSystem {
    /// Validating constructor. Multiplicative slots must lie in `1..=N`;
    /// additive `j`/`k` slots may also be 0.
    pub fn new(
        n: usize,
        equations: Vec<AtomicEquation>,
        origin_map: BTreeMap<String, usize>,
    ) -> Result<Self, AtomicError> {
        if n == 0 {
            return Err(AtomicError::EmptyVariableRange(n));
        }
        for eq in &equations {
            let ok = match *eq {
                AtomicEquation::Mul { i, j, k } => {
                    (1..=n).contains(&i) && (1..=n).contains(&j) && (1..=n).contains(&k)
                }
                AtomicEquation::Add { i, j, k } => (1..=n).contains(&i) && j <= n && k <= n,
            };
            if !ok {
                return Err(AtomicError::IndexOutOfRange(*eq));
            }
        }
        for (name, idx) in &origin_map {
            if !(1..=n).contains(idx) {
                return Err(AtomicError::OriginOutOfRange(name.clone(), *idx));
            }
        }
        Ok(AtomicSystem {
            n,
            equations,
            origin_map,
        })
    }

    /// Semantic validation of a deserialized value.
    pub fn validate(&self) -> Result<(), AtomicError> {
        Self::new(self.n, self.equations.clone(), self.origin_map.clone()).map(|_| ())
    }

    /// The highest variable index `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn equations(&self) -> &[AtomicEquation] {
        &self.equations
    }

    pub fn origin_map(&self) -> &BTreeMap<String, usize> {
        &self.origin_map
    }
}

/// How far an atomicized coefficient expansion is allowed to go; a positive
/// integer `n` becomes `n` summands.
const MAX_COEFF_EXPANSION: usize = 1 << 20;

struct Builder {
    next: usize,
    equations: Vec<AtomicEquation>,
}

enum Reduced {
    /// The side is a single variable (possibly `X_0` or `X_1`), no equations
    /// were needed.
    Bare(usize),
    /// The side was reduced through chains ending in a fresh variable.
    Fresh(usize),
    /// The side was reduced through chains whose last step wrote directly
    /// into the supplied target variable.
    Targeted,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        let v = self.next;
        self.next += 1;
        v
    }

    /// Reduces a monomial to a single variable via a product chain.
    /// `target` (if any) becomes the variable defined by the final step.
    fn reduce_monomial(&mut self, letters: &[usize], target: Option<usize>) -> Reduced {
        match letters.len() {
            0 => Reduced::Bare(1),
            1 => Reduced::Bare(letters[0]),
            _ => {
                let mut acc = letters[0];
                for (step, &v) in letters[1..].iter().enumerate() {
                    let last = step + 2 == letters.len();
                    let out = match (last, target) {
                        (true, Some(t)) => t,
                        _ => self.fresh(),
                    };
                    self.equations.push(AtomicEquation::Mul {
                        i: out,
                        j: acc,
                        k: v,
                    });
                    acc = out;
                }
                if target.is_some() {
                    Reduced::Targeted
                } else {
                    Reduced::Fresh(acc)
                }
            }
        }
    }

    /// Reduces one (positivized) side of an equation to a single variable.
    /// Positive coefficients expand into repeated summands; the summands are
    /// folded left to right through a sum chain.
    fn reduce_side(&mut self, side: &NcPolynomial, atomic_word: &dyn Fn(&Word) -> Vec<usize>, target: Option<usize>) -> Reduced {
        let mut summands: Vec<Vec<usize>> = Vec::new();
        for (word, coeff) in side.terms() {
            debug_assert!(coeff.is_positive(), "sides are positivized before reduction");
            let copies = usize::try_from(coeff.magnitude().clone())
                .ok()
                .filter(|&c| c <= MAX_COEFF_EXPANSION)
                .expect("coefficient magnitude exceeds atomicization capacity");
            for _ in 0..copies {
                summands.push(atomic_word(word));
            }
        }
        match summands.len() {
            0 => Reduced::Bare(0),
            1 => self.reduce_monomial(&summands[0], target),
            _ => {
                let vars: Vec<usize> = summands
                    .iter()
                    .map(|m| match self.reduce_monomial(m, None) {
                        Reduced::Bare(v) | Reduced::Fresh(v) => v,
                        Reduced::Targeted => unreachable!(),
                    })
                    .collect();
                let mut acc = vars[0];
                for (step, &v) in vars[1..].iter().enumerate() {
                    let last = step + 2 == vars.len();
                    let out = match (last, target) {
                        (true, Some(t)) => t,
                        _ => self.fresh(),
                    };
                    self.equations.push(AtomicEquation::Add {
                        i: out,
                        j: acc,
                        k: v,
                    });
                    acc = out;
                }
                if target.is_some() {
                    Reduced::Targeted
                } else {
                    Reduced::Fresh(acc)
                }
            }
        }
    }
}

/// Reduces an arbitrary system to an equivalent atomic system.
///
/// Original variables keep their order and occupy indices `2..`, after the
/// reserved `X_0` and `X_1`. Each equation `P = Q` is first rewritten with
/// all coefficients positive by moving negated terms across the equality;
/// monomials and sums are then collapsed through chains of fresh variables,
/// allocated in equation order, left to right. When both sides need chains,
/// the right side's final chain step writes straight into the left side's
/// result; when the left side is already a variable `a`, the reduced right
/// side `t` is linked by `X_a = X_t + X_0`.
pub fn atomicize(system: &NcSystem) -> AtomicSystem {
    let offset = 2usize;
    let mut b = Builder {
        next: system.num_vars() + offset,
        equations: Vec::new(),
    };
    let atomic_word =
        |w: &Word| -> Vec<usize> { w.letters().iter().map(|&v| v + offset).collect() };

    for eq in &system.equations {
        // P = Q becomes P+ + Q- = Q+ + P-, with every coefficient positive.
        let left = eq.lhs.positive_part().add(&eq.rhs.negative_part());
        let right = eq.rhs.positive_part().add(&eq.lhs.negative_part());
        let l = b.reduce_side(&left, &atomic_word, None);
        match l {
            Reduced::Targeted => unreachable!(),
            Reduced::Bare(a) => match b.reduce_side(&right, &atomic_word, None) {
                Reduced::Targeted => unreachable!(),
                Reduced::Bare(v) if v == a => {} // X = X carries no content
                Reduced::Bare(v) => {
                    // keep index 0 out of the defined slot
                    let (i, j) = if a == 0 { (v, a) } else { (a, v) };
                    b.equations.push(AtomicEquation::Add { i, j, k: 0 });
                }
                Reduced::Fresh(t) => {
                    let (i, j) = if a == 0 { (t, a) } else { (a, t) };
                    b.equations.push(AtomicEquation::Add { i, j, k: 0 });
                }
            },
            Reduced::Fresh(f) => match b.reduce_side(&right, &atomic_word, Some(f)) {
                Reduced::Targeted => {}
                Reduced::Bare(v) => {
                    b.equations.push(AtomicEquation::Add { i: f, j: v, k: 0 });
                }
                Reduced::Fresh(_) => unreachable!(),
            },
        }
    }

    let origin_map = system
        .var_names()
        .iter()
        .enumerate()
        .map(|(i, name)| (name.clone(), i + offset))
        .collect();

    let n = (b.next - 1).max(1);
    AtomicSystem::new(n, b.equations, origin_map).expect("construction is valid")
}

/// Errors raised when moving solutions between a system and its atomic form.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolutionError {
    #[error("the given assignment does not solve the system")]
    NotASolution,
    #[error("auxiliary variable X_{0} is not reachable from the assignment")]
    UndefinedAuxiliary(usize),
    #[error("origin variable {0:?} (atomic index {1}) is missing from the assignment")]
    MissingOrigin(String, usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Checks an assignment (indices `1..=N`, with `X_0` implicitly zero)
/// against all atomic equations plus the `X_1 = 1` convention.
pub fn is_solution<F: Field>(
    system: &AtomicSystem,
    assignment: &BTreeMap<usize, Matrix<F>>,
    field: &F,
    c: usize,
) -> Result<bool, EvalError> {
    let zero = Matrix::zero(field.clone(), c, c);
    let get = |v: usize| -> Result<Matrix<F>, EvalError> {
        if v == 0 {
            return Ok(zero.clone());
        }
        let m = assignment.get(&v).ok_or(EvalError::UnassignedVariable(v))?;
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
        Ok(m.clone())
    };
    if !get(1)?.is_identity() {
        return Ok(false);
    }
    for eq in system.equations() {
        let holds = match *eq {
            AtomicEquation::Add { i, j, k } => {
                get(i)? == get(j)?.add(&get(k)?).expect("same size")
            }
            AtomicEquation::Mul { i, j, k } => {
                get(i)? == get(j)?.mul(&get(k)?).expect("same size")
            }
        };
        if !holds {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Extends an assignment of the original variables to all atomic variables
/// by evaluating defining chains. Makes no solution check; the result is a
/// candidate, not necessarily a solution of the atomic system.
pub fn complete_assignment<F: Field>(
    system: &AtomicSystem,
    original: &BTreeMap<usize, Matrix<F>>,
    origin_of: &NcSystem,
    field: &F,
    c: usize,
) -> Result<BTreeMap<usize, Matrix<F>>, SolutionError> {
    let mut out: BTreeMap<usize, Matrix<F>> = BTreeMap::new();
    out.insert(1, Matrix::identity(field.clone(), c));
    for (name, &atomic_idx) in system.origin_map() {
        let orig_idx = origin_of
            .var_names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| SolutionError::MissingOrigin(name.clone(), atomic_idx))?;
        let m = original
            .get(&orig_idx)
            .ok_or_else(|| SolutionError::MissingOrigin(name.clone(), atomic_idx))?;
        out.insert(atomic_idx, m.clone());
    }
    let zero = Matrix::zero(field.clone(), c, c);
    let mut progress = true;
    while progress {
        progress = false;
        for eq in system.equations() {
            let (i, j, k, mul) = match *eq {
                AtomicEquation::Add { i, j, k } => (i, j, k, false),
                AtomicEquation::Mul { i, j, k } => (i, j, k, true),
            };
            if out.contains_key(&i) {
                continue;
            }
            let known = |v: usize| v == 0 || out.contains_key(&v);
            if !known(j) || !known(k) {
                continue;
            }
            let get = |v: usize| if v == 0 { &zero } else { &out[&v] };
            let val = if mul {
                get(j).mul(get(k)).expect("square blocks")
            } else {
                get(j).add(get(k)).expect("square blocks")
            };
            out.insert(i, val);
            progress = true;
        }
    }
    for v in 1..=system.n() {
        if !out.contains_key(&v) {
            return Err(SolutionError::UndefinedAuxiliary(v));
        }
    }
    Ok(out)
}

/// Lifts a solution of the original system to a solution of its atomic form
/// (indices `1..=N`). Both solution properties are checked.
pub fn lift_solution<F: Field>(
    system: &NcSystem,
    atomic: &AtomicSystem,
    assignment: &BTreeMap<usize, Matrix<F>>,
    field: &F,
    c: usize,
) -> Result<BTreeMap<usize, Matrix<F>>, SolutionError> {
    if !ncring::is_solution(system, assignment, field, c)? {
        return Err(SolutionError::NotASolution);
    }
    let lifted = complete_assignment(atomic, assignment, system, field, c)?;
    if !is_solution(atomic, &lifted, field, c)? {
        return Err(SolutionError::NotASolution);
    }
    Ok(lifted)
}

/// Projects a solution of the atomic system back to the original variables
/// along the origin map. The input is checked (including the `X_0 = 0`,
/// `X_1 = 1` conventions); the output is keyed by original variable index,
/// names in lexicographic order.
pub fn project_solution<F: Field>(
    atomic: &AtomicSystem,
    assignment: &BTreeMap<usize, Matrix<F>>,
    field: &F,
    c: usize,
) -> Result<BTreeMap<usize, Matrix<F>>, SolutionError> {
    if !is_solution(atomic, assignment, field, c)? {
        return Err(SolutionError::NotASolution);
    }
    let mut out = BTreeMap::new();
    for (orig_idx, (name, &atomic_idx)) in atomic.origin_map().iter().enumerate() {
        let m = assignment
            .get(&atomic_idx)
            .ok_or_else(|| SolutionError::MissingOrigin(name.clone(), atomic_idx))?;
        out.insert(orig_idx, m.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{PrimeField, Rationals};
    use crate::ncring::parse_system;
    use AtomicEquation::{Add, Mul};

    #[test]
    fn weyl_equation_atomicizes_to_three_equations() {
        let s = parse_system("X*Y - Y*X = 1").unwrap();
        let a = atomicize(&s);
        assert_eq!(a.n(), 5);
        assert_eq!(
            a.equations(),
            &[
                Mul { i: 4, j: 2, k: 3 },
                Mul { i: 5, j: 3, k: 2 },
                Add { i: 4, j: 1, k: 5 },
            ]
        );
        assert_eq!(a.origin_map()[&"X".to_string()], 2);
        assert_eq!(a.origin_map()[&"Y".to_string()], 3);
    }

    #[test]
    fn reflexive_equation_produces_no_equations() {
        let s = parse_system("X = X").unwrap();
        let a = atomicize(&s);
        assert_eq!(a.n(), 2);
        assert!(a.equations().is_empty());
    }

    #[test]
    fn constant_equation_uses_a_sum_chain() {
        let s = parse_system("A = 2").unwrap();
        let a = atomicize(&s);
        assert_eq!(
            a.equations(),
            &[Add { i: 3, j: 1, k: 1 }, Add { i: 2, j: 3, k: 0 }]
        );
        assert_eq!(a.n(), 3);
        // the solution sets correspond: A = 2 forces t = 2, a = 2
        let q = Rationals;
        let orig: BTreeMap<_, _> = [(0usize, Matrix::from_ints(q, 1, 1, &[2]))].into();
        let lifted = lift_solution(&s, &a, &orig, &q, 1).unwrap();
        assert_eq!(lifted[&3], Matrix::from_ints(q, 1, 1, &[2]));
        assert_eq!(lifted[&2], Matrix::from_ints(q, 1, 1, &[2]));
    }

    #[test]
    fn every_constant_is_eliminated() {
        for src in ["A = 2", "A = -7 + 3*B", "X*Y - Y*X = 1", "A*A + 4 = B - 1"] {
            let a = atomicize(&parse_system(src).unwrap());
            // only Add/Mul forms exist by type; indices stay in range
            assert!(a.validate().is_ok(), "{src}");
        }
    }

    #[test]
    fn zero_product_lifts_to_zero_auxiliary() {
        let s = parse_system("X*Y = 0").unwrap();
        let a = atomicize(&s);
        let q = Rationals;
        let zero = Matrix::zero(q, 1, 1);
        let orig: BTreeMap<_, _> = [(0usize, zero.clone()), (1, zero.clone())].into();
        let lifted = lift_solution(&s, &a, &orig, &q, 1).unwrap();
        // the product chain variable evaluates to zero
        let aux = a.n();
        assert!(lifted[&aux].is_zero());
    }

    #[test]
    fn lift_rejects_non_solutions() {
        let s = parse_system("X = 1").unwrap();
        let a = atomicize(&s);
        let q = Rationals;
        let orig: BTreeMap<_, _> = [(0usize, Matrix::zero(q, 1, 1))].into();
        assert_eq!(
            lift_solution(&s, &a, &orig, &q, 1),
            Err(SolutionError::NotASolution)
        );
    }

    #[test]
    fn project_round_trips_over_f3() {
        let f3 = PrimeField::new(3);
        let s = parse_system("A*B = B + 1").unwrap();
        let a = atomicize(&s);
        // exhaustive scalar search for a solution
        let mut found = false;
        for x in 0..3u64 {
            for y in 0..3u64 {
                let orig: BTreeMap<_, _> = [
                    (0usize, Matrix::from_ints(f3, 1, 1, &[x as i64])),
                    (1usize, Matrix::from_ints(f3, 1, 1, &[y as i64])),
                ]
                .into();
                if ncring::is_solution(&s, &orig, &f3, 1).unwrap() {
                    found = true;
                    let lifted = lift_solution(&s, &a, &orig, &f3, 1).unwrap();
                    let back = project_solution(&a, &lifted, &f3, 1).unwrap();
                    assert_eq!(back, orig);
                }
            }
        }
        assert!(found, "A*B = B + 1 has a solution over F_3");
    }

    #[test]
    fn atomic_system_validation() {
        assert!(AtomicSystem::new(0, vec![], BTreeMap::new()).is_err());
        assert!(AtomicSystem::new(
            2,
            vec![Mul { i: 1, j: 0, k: 2 }],
            BTreeMap::new()
        )
        .is_err());
        assert!(AtomicSystem::new(
            2,
            vec![Add { i: 1, j: 0, k: 2 }],
            BTreeMap::new()
        )
        .is_ok());
        assert!(AtomicSystem::new(
            2,
            vec![Add { i: 0, j: 1, k: 2 }],
            BTreeMap::new()
        )
        .is_err());
    }

    #[test]
    fn atomic_json_round_trip() {
        let s = parse_system("X*Y - Y*X = 1").unwrap();
        let a = atomicize(&s);
        let json = crate::jsonio::canonical_json(&a);
        assert!(json.contains("\"op\": \"mul\""));
        let back: AtomicSystem = serde_json::from_str(&json).unwrap();
        back.validate().unwrap();
        assert_eq!(back, a);
    }
}
