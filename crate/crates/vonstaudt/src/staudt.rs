//! The von Staudt circuit collection of an atomic system, matroid axiom
//! checking, and membership in the associated matroid family.
//!
//! The ground set of a system over `X_0..X_N` is
//! `{O, xinf, yinf} ∪ {x_i, y_i, z_i}_{i=1..N} ∪ {r_k per additive equation}`.
//! Three "lines" contribute all of their 3-subsets as circuits; each
//! multiplicative equation `X_i = X_j * X_k` contributes `{x_i, y_k, z_j}`;
//! each additive equation `X_i = X_j + X_k` contributes an element `r_k` and
//! the circuits `{y_1, r_k, xinf}`, `{x_k, r_k, yinf}`, `{x_i, r_k, z_j}`.
//! On top of these, `{x_i, y_i, z_1}` and `{x_i, y_1, z_i}` are circuits for
//! every `i` (the triples forced by `X_i = X_1 * X_i` and `X_i = X_i * X_1`),
//! and every 4-subset not containing a listed circuit is a circuit.
//!
//! The collection need not satisfy the circuit elimination axiom;
//! [`CircuitFamily::check_matroid`] decides it and produces a witness on
//! failure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atomic::{AtomicEquation, AtomicSystem};

/// One element of a von Staudt ground set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundElement {
    /// The origin.
    O,
    /// The point at infinity of the x-axis.
    XInf,
    /// The point at infinity of the y-axis.
    YInf,
    /// The point `x_i` on the x-axis.
    X(usize),
    /// The point `y_i` on the y-axis.
    Y(usize),
    /// The point `z_i` on the line at infinity.
    Z(usize),
    /// The auxiliary point `r_k` of an additive equation.
    R(usize),
}

impl fmt::Display for GroundElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundElement::O => write!(f, "O"),
            GroundElement::XInf => write!(f, "xinf"),
            GroundElement::YInf => write!(f, "yinf"),
            GroundElement::X(i) => write!(f, "x{i}"),
            GroundElement::Y(i) => write!(f, "y{i}"),
            GroundElement::Z(i) => write!(f, "z{i}"),
            GroundElement::R(k) => write!(f, "r{k}"),
        }
    }
}

impl FromStr for GroundElement {
    type Err = StaudtError;

    fn from_str(s: &str) -> Result<Self, StaudtError> {
        let bad = || StaudtError::UnknownElement(s.to_string());
        match s {
            "O" => return Ok(GroundElement::O),
            "xinf" => return Ok(GroundElement::XInf),
            "yinf" => return Ok(GroundElement::YInf),
            _ => {}
        }
        if s.len() < 2 {
            return Err(bad());
        }
        let (head, idx) = s.split_at(1);
        let idx: usize = idx.parse().map_err(|_| bad())?;
        match head {
            "x" => Ok(GroundElement::X(idx)),
            "y" => Ok(GroundElement::Y(idx)),
            "z" => Ok(GroundElement::Z(idx)),
            "r" => Ok(GroundElement::R(idx)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for GroundElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroundElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StaudtError {
    #[error("unknown ground element name {0:?}")]
    UnknownElement(String),
    #[error("element {0} appears twice in the ground set")]
    DuplicateElement(String),
    #[error("circuit references {0}, which is not in the ground set")]
    ElementNotInGround(String),
    #[error("the two objects live on different ground sets")]
    GroundMismatch,
    #[error("matroid has loops; simplification requires a loop-free matroid")]
    LoopsPresent,
    #[error("circuits do not form a matroid: {0}")]
    NotAMatroid(MatroidViolation),
}

/// Why a circuit collection fails the matroid axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum MatroidViolation {
    /// The empty set was declared a circuit.
    EmptyCircuit,
    /// One circuit properly contains another.
    Containment {
        inner: Vec<GroundElement>,
        outer: Vec<GroundElement>,
    },
    /// Circuit elimination fails: no circuit lies inside
    /// `(c1 ∪ c2) \ {pivot}`.
    Elimination {
        c1: Vec<GroundElement>,
        c2: Vec<GroundElement>,
        pivot: GroundElement,
        union_without_pivot: Vec<GroundElement>,
    },
}

impl fmt::Display for MatroidViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |v: &[GroundElement]| v.iter().map(|e| e.to_string()).join(",");
        match self {
            MatroidViolation::EmptyCircuit => write!(f, "the empty set is a circuit"),
            MatroidViolation::Containment { inner, outer } => write!(
                f,
                "circuit {{{}}} contains circuit {{{}}}",
                names(outer),
                names(inner)
            ),
            MatroidViolation::Elimination {
                c1,
                c2,
                pivot,
                union_without_pivot,
            } => write!(
                f,
                "circuits {{{}}} and {{{}}} share {pivot} but no circuit lies in {{{}}}",
                names(c1),
                names(c2),
                names(union_without_pivot)
            ),
        }
    }
}

/// A collection of circuits over an ordered ground set. Circuits are stored
/// as sorted index vectors into the ground, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitFamily {
    ground: Vec<GroundElement>,
    circuits: BTreeSet<Vec<usize>>,
}

/// A matroid given by its circuits; constructed only through axiom checks
/// or axiom-preserving operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    ground: Vec<GroundElement>,
    circuits: BTreeSet<Vec<usize>>,
}

/// Wire form shared by circuit families and matroids.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircuitsJson {
    pub ground: Vec<String>,
    pub circuits: Vec<Vec<String>>,
}

fn parse_ground(
    names: &[String],
) -> Result<(Vec<GroundElement>, BTreeMap<GroundElement, usize>), StaudtError> {
    let mut ground = Vec::with_capacity(names.len());
    let mut index = BTreeMap::new();
    for name in names {
        let e: GroundElement = name.parse()?;
        if index.insert(e, ground.len()).is_some() {
            return Err(StaudtError::DuplicateElement(name.clone()));
        }
        ground.push(e);
    }
    Ok((ground, index))
}

fn circuits_to_json(ground: &[GroundElement], circuits: &BTreeSet<Vec<usize>>) -> CircuitsJson {
    CircuitsJson {
        ground: ground.iter().map(|e| e.to_string()).collect(),
        circuits: circuits
            .iter()
            .map(|c| c.iter().map(|&i| ground[i].to_string()).collect())
            .collect(),
    }
}

fn circuits_from_json(
    json: &CircuitsJson,
) -> Result<(Vec<GroundElement>, BTreeSet<Vec<usize>>), StaudtError> {
    let (ground, index) = parse_ground(&json.ground)?;
    let mut circuits = BTreeSet::new();
    for c in &json.circuits {
        let mut idx = Vec::with_capacity(c.len());
        for name in c {
            let e: GroundElement = name.parse()?;
            let i = index
                .get(&e)
                .ok_or_else(|| StaudtError::ElementNotInGround(name.clone()))?;
            idx.push(*i);
        }
        idx.sort_unstable();
        idx.dedup();
        circuits.insert(idx);
    }
    Ok((ground, circuits))
}

/// The ground set of the von Staudt construction for an atomic system:
/// `O, xinf, yinf`, then `x_1..x_N`, `y_1..y_N`, `z_1..z_N`, then one `r_k`
/// per distinct third slot of an additive equation, ascending.
pub fn ground_set(system: &AtomicSystem) -> Vec<GroundElement> {
    let n = system.n();
    let mut ground = vec![GroundElement::O, GroundElement::XInf, GroundElement::YInf];
    ground.extend((1..=n).map(GroundElement::X));
    ground.extend((1..=n).map(GroundElement::Y));
    ground.extend((1..=n).map(GroundElement::Z));
    let r_indices: BTreeSet<usize> = system
        .equations()
        .iter()
        .filter_map(|eq| match *eq {
            AtomicEquation::Add { k, .. } => Some(k),
            AtomicEquation::Mul { .. } => None,
        })
        .collect();
    ground.extend(r_indices.into_iter().map(GroundElement::R));
    ground
}

/// The element playing the role of `x_i`; index 0 is the origin.
fn x_role(i: usize) -> GroundElement {
    if i == 0 {
        GroundElement::O
    } else {
        GroundElement::X(i)
    }
}

/// The element playing the role of `z_j`; index 0 is `yinf` (the projective
/// point `[0 : 0 : -1]`).
fn z_role(j: usize) -> GroundElement {
    if j == 0 {
        GroundElement::YInf
    } else {
        GroundElement::Z(j)
    }
}

/// Builds the von Staudt circuit collection of an atomic system.
pub fn build_circuits(system: &AtomicSystem) -> CircuitFamily {
    let ground = ground_set(system);
    let index: BTreeMap<GroundElement, usize> =
        ground.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let idx = |e: GroundElement| index[&e];
    let n = system.n();

    let mut circuits: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut insert = |mut c: Vec<usize>| {
        c.sort_unstable();
        debug_assert!(c.windows(2).all(|w| w[0] != w[1]));
        circuits.insert(c);
    };

    // step 1: the three lines contribute all of their 3-subsets
    let x_line: Vec<usize> = [GroundElement::O, GroundElement::XInf]
        .into_iter()
        .chain((1..=n).map(GroundElement::X))
        .map(idx)
        .collect();
    let y_line: Vec<usize> = [GroundElement::O, GroundElement::YInf]
        .into_iter()
        .chain((1..=n).map(GroundElement::Y))
        .map(idx)
        .collect();
    let inf_line: Vec<usize> = [GroundElement::XInf, GroundElement::YInf]
        .into_iter()
        .chain((1..=n).map(GroundElement::Z))
        .map(idx)
        .collect();
    for line in [&x_line, &y_line, &inf_line] {
        for triple in line.iter().copied().combinations(3) {
            insert(triple);
        }
    }

    // step 2: one circuit per multiplicative equation, three per additive
    for eq in system.equations() {
        match *eq {
            AtomicEquation::Mul { i, j, k } => {
                insert(vec![
                    idx(GroundElement::X(i)),
                    idx(GroundElement::Y(k)),
                    idx(GroundElement::Z(j)),
                ]);
            }
            AtomicEquation::Add { i, j, k } => {
                let r = idx(GroundElement::R(k));
                insert(vec![idx(GroundElement::Y(1)), r, idx(GroundElement::XInf)]);
                insert(vec![idx(x_role(k)), r, idx(GroundElement::YInf)]);
                insert(vec![idx(GroundElement::X(i)), r, idx(z_role(j))]);
            }
        }
    }

    // the triples every representation honors identically: X_i = X_1 * X_i
    // and X_i = X_i * X_1
    for i in 1..=n {
        insert(vec![
            idx(GroundElement::X(i)),
            idx(GroundElement::Y(i)),
            idx(GroundElement::Z(1)),
        ]);
        insert(vec![
            idx(GroundElement::X(i)),
            idx(GroundElement::Y(1)),
            idx(GroundElement::Z(i)),
        ]);
    }

    // step 3: every 4-subset not containing a listed circuit
    let mut quads = Vec::new();
    for quad in (0..ground.len()).combinations(4) {
        let contains = quad
            .iter()
            .copied()
            .combinations(3)
            .any(|t| circuits.contains(&t));
        if !contains {
            quads.push(quad);
        }
    }
    circuits.extend(quads);

    CircuitFamily { ground, circuits }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    // both sorted ascending
    let mut it = big.iter();
    'outer: for s in small {
        for b in it.by_ref() {
            match b.cmp(s) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// Does the circuit set contain a circuit inside `set` (sorted, deduped)?
fn set_contains_circuit(circuits: &BTreeSet<Vec<usize>>, set: &[usize]) -> bool {
    let sizes: BTreeSet<usize> = circuits.iter().map(Vec::len).collect();
    for s in sizes {
        if s > set.len() {
            break;
        }
        for sub in set.iter().copied().combinations(s) {
            if circuits.contains(&sub) {
                return true;
            }
        }
    }
    false
}

impl CircuitFamily {
    pub fn new(
        ground: Vec<GroundElement>,
        circuits: impl IntoIterator<Item = Vec<GroundElement>>,
    ) -> Result<Self, StaudtError> {
        let index: BTreeMap<GroundElement, usize> =
            ground.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        if index.len() != ground.len() {
            let dup = ground.iter().duplicates().next().expect("duplicate exists");
            return Err(StaudtError::DuplicateElement(dup.to_string()));
        }
        let mut set = BTreeSet::new();
        for c in circuits {
            let mut idx = Vec::with_capacity(c.len());
            for e in c {
                let i = index
                    .get(&e)
                    .ok_or_else(|| StaudtError::ElementNotInGround(e.to_string()))?;
                idx.push(*i);
            }
            idx.sort_unstable();
            idx.dedup();
            set.insert(idx);
        }
        Ok(CircuitFamily {
            ground,
            circuits: set,
        })
    }

    pub fn ground(&self) -> &[GroundElement] {
        &self.ground
    }

    pub fn num_circuits(&self) -> usize {
        self.circuits.len()
    }

    /// Circuits as element lists, in lexicographic order.
    pub fn circuits(&self) -> impl Iterator<Item = Vec<GroundElement>> + '_ {
        self.circuits
            .iter()
            .map(move |c| c.iter().map(|&i| self.ground[i]).collect())
    }

    pub(crate) fn circuit_indices(&self) -> &BTreeSet<Vec<usize>> {
        &self.circuits
    }

    fn resolve(&self, elements: &[GroundElement]) -> Option<Vec<usize>> {
        let mut idx = Vec::with_capacity(elements.len());
        for e in elements {
            idx.push(self.ground.iter().position(|g| g == e)?);
        }
        idx.sort_unstable();
        idx.dedup();
        Some(idx)
    }

    pub fn has_circuit(&self, circuit: &[GroundElement]) -> bool {
        self.resolve(circuit)
            .map_or(false, |idx| self.circuits.contains(&idx))
    }

    /// Decides the circuit axioms. On success the family is repackaged as a
    /// [`Matroid`]; on failure the reported witness is the lexicographically
    /// first violating circuit pair, with the pivot scanned from the back of
    /// the ground order.
    pub fn check_matroid(&self) -> Result<Matroid, MatroidViolation> {
        check_axioms(&self.ground, &self.circuits)?;
        Ok(Matroid {
            ground: self.ground.clone(),
            circuits: self.circuits.clone(),
        })
    }

    /// Convenience wrapper: a bare verdict plus the witness on failure.
    pub fn is_matroid(&self) -> (bool, Option<MatroidViolation>) {
        match self.check_matroid() {
            Ok(_) => (true, None),
            Err(v) => (false, Some(v)),
        }
    }

    pub fn to_json(&self) -> CircuitsJson {
        circuits_to_json(&self.ground, &self.circuits)
    }

    pub fn from_json(json: &CircuitsJson) -> Result<Self, StaudtError> {
        let (ground, circuits) = circuits_from_json(json)?;
        Ok(CircuitFamily { ground, circuits })
    }
}

fn check_axioms(
    ground: &[GroundElement],
    circuits: &BTreeSet<Vec<usize>>,
) -> Result<(), MatroidViolation> {
    let resolve = |c: &[usize]| -> Vec<GroundElement> { c.iter().map(|&i| ground[i]).collect() };

    if circuits.contains(&Vec::new()) {
        return Err(MatroidViolation::EmptyCircuit);
    }

    // antichain: no circuit properly contains another
    let sizes: BTreeSet<usize> = circuits.iter().map(Vec::len).collect();
    for outer in circuits {
        for &s in sizes.iter().take_while(|&&s| s < outer.len()) {
            for sub in outer.iter().copied().combinations(s) {
                if circuits.contains(&sub) {
                    return Err(MatroidViolation::Containment {
                        inner: resolve(&sub),
                        outer: resolve(outer),
                    });
                }
            }
        }
    }

    // Elimination: every pair of distinct circuits sharing an element e must
    // leave a circuit inside (C1 ∪ C2) \ {e}. When every 4-subset of the
    // ground contains a circuit (true for all von Staudt families by the
    // 4-subset closure), pairs whose union minus pivot keeps at least 4
    // elements pass automatically, so only circuits of size <= 3 need
    // pairwise scanning.
    let quads_all_dependent = ground.len() >= 4
        && (0..ground.len())
            .combinations(4)
            .all(|q| set_contains_circuit(circuits, &q));

    let scan: Vec<&Vec<usize>> = if quads_all_dependent {
        circuits.iter().filter(|c| c.len() <= 3).collect()
    } else {
        circuits.iter().collect()
    };

    let mut worst: Option<(Vec<usize>, Vec<usize>, usize)> = None;
    for (a, b) in scan.iter().tuple_combinations() {
        if !a.iter().any(|e| b.contains(e)) {
            continue;
        }
        let union: Vec<usize> = a.iter().chain(b.iter()).copied().sorted().dedup().collect();
        if quads_all_dependent && union.len() >= 5 {
            continue;
        }
        let shared: Vec<usize> = a.iter().filter(|e| b.contains(e)).copied().collect();
        for &e in shared.iter().rev() {
            let rest: Vec<usize> = union.iter().copied().filter(|&x| x != e).collect();
            if quads_all_dependent && rest.len() >= 4 {
                continue;
            }
            if set_contains_circuit(circuits, &rest) {
                continue;
            }
            let better = match &worst {
                None => true,
                Some((w1, w2, we)) => {
                    ((*a).clone(), (*b).clone(), std::cmp::Reverse(e))
                        < (w1.clone(), w2.clone(), std::cmp::Reverse(*we))
                }
            };
            if better {
                worst = Some(((*a).clone(), (*b).clone(), e));
            }
        }
    }

    if let Some((c1, c2, e)) = worst {
        let union_without_pivot: Vec<usize> = c1
            .iter()
            .chain(c2.iter())
            .copied()
            .sorted()
            .dedup()
            .filter(|&x| x != e)
            .collect();
        return Err(MatroidViolation::Elimination {
            c1: resolve(&c1),
            c2: resolve(&c2),
            pivot: ground[e],
            union_without_pivot: resolve(&union_without_pivot),
        });
    }
    Ok(())
}

impl Matroid {
    /// Builds a matroid from explicit circuits, checking the axioms.
    pub fn new(
        ground: Vec<GroundElement>,
        circuits: impl IntoIterator<Item = Vec<GroundElement>>,
    ) -> Result<Self, StaudtError> {
        let family = CircuitFamily::new(ground, circuits)?;
        family.check_matroid().map_err(StaudtError::NotAMatroid)
    }

    /// Wraps circuits known to satisfy the axioms (deletions, induced
    /// matroids of verified arrangements). Debug builds re-check.
    pub(crate) fn new_unchecked(
        ground: Vec<GroundElement>,
        circuits: BTreeSet<Vec<usize>>,
    ) -> Self {
        debug_assert!(check_axioms(&ground, &circuits).is_ok());
        Matroid { ground, circuits }
    }

    pub fn ground(&self) -> &[GroundElement] {
        &self.ground
    }

    pub fn circuits(&self) -> impl Iterator<Item = Vec<GroundElement>> + '_ {
        self.circuits
            .iter()
            .map(move |c| c.iter().map(|&i| self.ground[i]).collect())
    }

    pub fn num_circuits(&self) -> usize {
        self.circuits.len()
    }

    fn resolve(&self, elements: &[GroundElement]) -> Option<Vec<usize>> {
        let mut idx = Vec::with_capacity(elements.len());
        for e in elements {
            idx.push(self.ground.iter().position(|g| g == e)?);
        }
        idx.sort_unstable();
        idx.dedup();
        Some(idx)
    }

    pub fn has_circuit(&self, circuit: &[GroundElement]) -> bool {
        self.resolve(circuit)
            .map_or(false, |idx| self.circuits.contains(&idx))
    }

    pub(crate) fn contains_circuit_within(&self, set: &[usize]) -> bool {
        set_contains_circuit(&self.circuits, set)
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        !set_contains_circuit(&self.circuits, set)
    }

    /// The loops (single-element circuits).
    pub fn loops(&self) -> Vec<GroundElement> {
        self.circuits
            .iter()
            .filter(|c| c.len() == 1)
            .map(|c| self.ground[c[0]])
            .collect()
    }

    /// Rank of a subset: the size of a maximal independent subset, grown
    /// greedily in ground order (exact because the circuit axioms hold).
    pub fn rank_of(&self, subset: &[GroundElement]) -> usize {
        let indices: Vec<usize> = subset
            .iter()
            .filter_map(|e| self.ground.iter().position(|g| g == e))
            .sorted()
            .dedup()
            .collect();
        let mut independent: Vec<usize> = Vec::new();
        for e in indices {
            let mut candidate = independent.clone();
            let pos = candidate.binary_search(&e).unwrap_err();
            candidate.insert(pos, e);
            if self.is_independent(&candidate) {
                independent = candidate;
            }
        }
        independent.len()
    }

    /// Rank of the whole ground set.
    pub fn rank(&self) -> usize {
        self.rank_of(&self.ground.clone())
    }

    /// True iff `{a, b}` is a circuit (parallel elements).
    pub fn parallel(&self, a: GroundElement, b: GroundElement) -> bool {
        self.has_circuit(&[a, b])
    }

    /// Deletes all but the first element (in ground order) of each parallel
    /// class. Requires a loop-free matroid.
    pub fn simplify(&self) -> Result<Matroid, StaudtError> {
        if !self.loops().is_empty() {
            return Err(StaudtError::LoopsPresent);
        }
        let n = self.ground.len();
        let mut class: Vec<usize> = (0..n).collect();
        for c in self.circuits.iter().filter(|c| c.len() == 2) {
            let (ra, rb) = (class[c[0]], class[c[1]]);
            if ra != rb {
                let lo = ra.min(rb);
                for r in class.iter_mut() {
                    if *r == ra || *r == rb {
                        *r = lo;
                    }
                }
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&i| class[i] == i).collect();
        let remap: BTreeMap<usize, usize> = kept
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let ground: Vec<GroundElement> = kept.iter().map(|&i| self.ground[i]).collect();
        let circuits: BTreeSet<Vec<usize>> = self
            .circuits
            .iter()
            .filter(|c| c.iter().all(|e| remap.contains_key(e)))
            .map(|c| c.iter().map(|e| remap[e]).collect())
            .collect();
        Ok(Matroid::new_unchecked(ground, circuits))
    }

    /// The circuits fully contained in a subset of the ground, as element
    /// lists.
    pub fn restriction_circuits(&self, subset: &[GroundElement]) -> BTreeSet<Vec<GroundElement>> {
        let indices: BTreeSet<usize> = subset
            .iter()
            .filter_map(|e| self.ground.iter().position(|g| g == e))
            .collect();
        self.circuits
            .iter()
            .filter(|c| c.iter().all(|e| indices.contains(e)))
            .map(|c| c.iter().map(|&i| self.ground[i]).collect())
            .collect()
    }

    pub fn to_json(&self) -> CircuitsJson {
        circuits_to_json(&self.ground, &self.circuits)
    }

    /// Parses and axiom-checks a matroid from its wire form.
    pub fn from_json(json: &CircuitsJson) -> Result<Self, StaudtError> {
        let (ground, circuits) = circuits_from_json(json)?;
        check_axioms(&ground, &circuits).map_err(StaudtError::NotAMatroid)?;
        Ok(Matroid { ground, circuits })
    }
}

/// True iff every circuit of `of` contains a circuit of `candidate`
/// (the candidate matroid is a weak image of the collection).
pub fn is_weak_image(candidate: &Matroid, of: &CircuitFamily) -> Result<bool, StaudtError> {
    if candidate.ground != of.ground {
        return Err(StaudtError::GroundMismatch);
    }
    Ok(of
        .circuits
        .iter()
        .all(|c| candidate.contains_circuit_within(c)))
}

/// Which membership condition a candidate fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FamilyFailure {
    /// Some circuit of the construction contains no circuit of the
    /// candidate.
    NotWeakImage { uncovered: Vec<GroundElement> },
    /// Condition 1: the candidate has a loop.
    Loop { element: GroundElement },
    /// Condition 2: the restriction to `{O, x1, y1, xinf, yinf}` differs
    /// from the construction's restriction.
    FrameRestriction {
        expected: Vec<Vec<GroundElement>>,
        found: Vec<Vec<GroundElement>>,
    },
    /// Condition 3: some `x_i` is parallel to `xinf`.
    ParallelToXInfinity { element: GroundElement },
}

/// The outcome of a family-membership test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyVerdict {
    pub failures: Vec<FamilyFailure>,
}

impl FamilyVerdict {
    pub fn is_member(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Decides membership of `candidate` in the family of von Staudt matroids
/// of `system`: a matroidal weak image of the construction that is
/// loop-free, restricts to the construction's frame on
/// `{O, x1, y1, xinf, yinf}`, and has no `x_i` parallel to `xinf`.
pub fn in_family(candidate: &Matroid, system: &AtomicSystem) -> Result<FamilyVerdict, StaudtError> {
    let family = build_circuits(system);
    if candidate.ground != family.ground {
        return Err(StaudtError::GroundMismatch);
    }
    let mut failures = Vec::new();

    for c in &family.circuits {
        if !candidate.contains_circuit_within(c) {
            failures.push(FamilyFailure::NotWeakImage {
                uncovered: c.iter().map(|&i| family.ground[i]).collect(),
            });
            break;
        }
    }

    if let Some(&element) = candidate.loops().first() {
        failures.push(FamilyFailure::Loop { element });
    }

    let frame = [
        GroundElement::O,
        GroundElement::X(1),
        GroundElement::Y(1),
        GroundElement::XInf,
        GroundElement::YInf,
    ];
    // the frame restriction of the construction involves no equation
    // circuits, so it can be read off the raw family
    let frame_indices: BTreeSet<usize> = frame
        .iter()
        .filter_map(|e| family.ground.iter().position(|g| g == e))
        .collect();
    let reference: BTreeSet<Vec<GroundElement>> = family
        .circuits
        .iter()
        .filter(|c| c.iter().all(|i| frame_indices.contains(i)))
        .map(|c| c.iter().map(|&i| family.ground[i]).collect())
        .collect();
    let found = candidate.restriction_circuits(&frame);
    if reference != found {
        failures.push(FamilyFailure::FrameRestriction {
            expected: reference.into_iter().collect(),
            found: found.into_iter().collect(),
        });
    }

    for e in &candidate.ground {
        if let GroundElement::X(_) = e {
            if candidate.parallel(*e, GroundElement::XInf) {
                failures.push(FamilyFailure::ParallelToXInfinity { element: *e });
                break;
            }
        }
    }

    Ok(FamilyVerdict { failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic::atomicize;
    use crate::ncring::parse_system;
    use GroundElement::{O, R, X, XInf, Y, YInf, Z};

    fn weyl_atomic() -> AtomicSystem {
        atomicize(&parse_system("X*Y - Y*X = 1").unwrap())
    }

    #[test]
    fn weyl_ground_set_has_19_elements() {
        let family = build_circuits(&weyl_atomic());
        assert_eq!(family.ground().len(), 19);
        assert_eq!(family.ground()[0], O);
        assert_eq!(family.ground()[18], R(5));
    }

    #[test]
    fn weyl_equation_circuits_are_present() {
        let family = build_circuits(&weyl_atomic());
        for circuit in [
            vec![X(4), Y(3), Z(2)],
            vec![X(5), Y(2), Z(3)],
            vec![Y(1), R(5), XInf],
            vec![X(5), R(5), YInf],
            vec![X(4), R(5), Z(1)],
        ] {
            assert!(family.has_circuit(&circuit), "{circuit:?}");
        }
    }

    #[test]
    fn smallest_ground_set() {
        let sys = AtomicSystem::new(1, vec![], BTreeMap::new()).unwrap();
        let family = build_circuits(&sys);
        assert_eq!(family.ground(), &[O, XInf, YInf, X(1), Y(1), Z(1)]);
        assert!(family.has_circuit(&[O, XInf, X(1)]));
        assert!(family.has_circuit(&[O, YInf, Y(1)]));
        assert!(family.has_circuit(&[XInf, YInf, Z(1)]));
        assert!(family.has_circuit(&[X(1), Y(1), Z(1)]));
        assert!(!family.has_circuit(&[O, X(1), Y(1)]));
    }

    #[test]
    fn four_subsets_never_contain_a_three_circuit() {
        let family = build_circuits(&weyl_atomic());
        let triples: Vec<Vec<usize>> = family
            .circuits
            .iter()
            .filter(|c| c.len() == 3)
            .cloned()
            .collect();
        for c in family.circuits.iter().filter(|c| c.len() == 4) {
            assert!(!triples.iter().any(|t| is_subset(t, c)));
        }
        assert!(family.circuits.iter().all(|c| c.len() == 3 || c.len() == 4));
    }

    #[test]
    fn weyl_family_is_a_matroid() {
        let family = build_circuits(&weyl_atomic());
        let (ok, witness) = family.is_matroid();
        assert!(ok, "witness: {witness:?}");
    }

    #[test]
    fn warning_instance_fails_elimination_with_exact_witness() {
        // X_2 = X_2 * X_3 yields the circuit {x2, y3, z2}, which together
        // with {x2, y1, z2} breaks elimination at z2
        let sys = AtomicSystem::new(
            3,
            vec![AtomicEquation::Mul { i: 2, j: 2, k: 3 }],
            BTreeMap::new(),
        )
        .unwrap();
        let family = build_circuits(&sys);
        let (ok, witness) = family.is_matroid();
        assert!(!ok);
        match witness.unwrap() {
            MatroidViolation::Elimination {
                c1,
                c2,
                pivot,
                union_without_pivot,
            } => {
                let pair: BTreeSet<Vec<GroundElement>> = [c1, c2].into_iter().collect();
                let expected: BTreeSet<Vec<GroundElement>> =
                    [vec![X(2), Y(3), Z(2)], vec![X(2), Y(1), Z(2)]]
                        .into_iter()
                        .collect();
                assert_eq!(pair, expected);
                assert_eq!(pivot, Z(2));
                assert_eq!(union_without_pivot, vec![X(2), Y(1), Y(3)]);
            }
            other => panic!("expected an elimination failure, got {other:?}"),
        }
    }

    #[test]
    fn transposed_warning_instance_also_fails() {
        // X_2 = X_3 * X_2 breaks elimination as well, with its own witness
        let sys = AtomicSystem::new(
            3,
            vec![AtomicEquation::Mul { i: 2, j: 3, k: 2 }],
            BTreeMap::new(),
        )
        .unwrap();
        let (ok, witness) = build_circuits(&sys).is_matroid();
        assert!(!ok);
        assert!(matches!(
            witness,
            Some(MatroidViolation::Elimination { .. })
        ));
    }

    #[test]
    fn single_circuit_family_is_a_matroid() {
        let family =
            CircuitFamily::new(vec![X(1), X(2), X(3), X(4)], vec![vec![X(1), X(2), X(3)]])
                .unwrap();
        assert!(family.is_matroid().0);
    }

    #[test]
    fn rank_of_weyl_matroid() {
        let family = build_circuits(&weyl_atomic());
        let m = family.check_matroid().unwrap();
        assert_eq!(m.rank(), 3);
        assert_eq!(m.rank_of(&[]), 0);
        assert_eq!(m.rank_of(&[X(4), Y(3), Z(2)]), 2); // a circuit has rank size-1
        for e in m.ground().to_vec() {
            assert_eq!(m.rank_of(&[e]), 1);
        }
        // exhaustive independent-set oracle for the full rank
        let all = m.ground().to_vec();
        let mut best = 0;
        for size in 1..=4usize {
            for sub in (0..all.len()).combinations(size) {
                if m.is_independent(&sub) {
                    best = best.max(size);
                }
            }
        }
        assert_eq!(best, 3);
    }

    #[test]
    fn weak_image_trivia() {
        let family = build_circuits(&weyl_atomic());
        let m = family.check_matroid().unwrap();
        assert!(is_weak_image(&m, &family).unwrap());

        // loops are inside every circuit
        let loops = Matroid {
            ground: family.ground().to_vec(),
            circuits: (0..family.ground().len()).map(|i| vec![i]).collect(),
        };
        assert!(is_weak_image(&loops, &family).unwrap());

        // the rank-3 uniform matroid covers no 3-element line circuit
        let uniform = Matroid::new(
            family.ground().to_vec(),
            (0..family.ground().len())
                .combinations(4)
                .map(|c| c.into_iter().map(|i| family.ground()[i]).collect()),
        )
        .unwrap();
        assert!(!is_weak_image(&uniform, &family).unwrap());

        let other = Matroid::new(vec![X(1), X(2)], vec![]).unwrap();
        assert_eq!(
            is_weak_image(&other, &family),
            Err(StaudtError::GroundMismatch)
        );
    }

    #[test]
    fn in_family_accepts_the_principal_matroid() {
        let sys = weyl_atomic();
        let m = build_circuits(&sys).check_matroid().unwrap();
        let verdict = in_family(&m, &sys).unwrap();
        assert!(verdict.is_member(), "{:?}", verdict.failures);
    }

    #[test]
    fn in_family_rejects_loops_and_parallels() {
        let sys = weyl_atomic();
        let family = build_circuits(&sys);
        let principal = family.check_matroid().unwrap();

        // a loop at x2 (stripping the circuits it now sits inside)
        let x2 = principal.ground.iter().position(|e| *e == X(2)).unwrap();
        let mut circuits: BTreeSet<Vec<usize>> = principal
            .circuits
            .iter()
            .filter(|c| !c.contains(&x2))
            .cloned()
            .collect();
        circuits.insert(vec![x2]);
        let with_loop = Matroid {
            ground: principal.ground.clone(),
            circuits,
        };
        let verdict = in_family(&with_loop, &sys).unwrap();
        assert!(!verdict.is_member());
        assert!(verdict
            .failures
            .iter()
            .any(|f| matches!(f, FamilyFailure::Loop { element } if *element == X(2))));

        // x1 parallel to y1 breaks the frame restriction
        let x1 = principal.ground.iter().position(|e| *e == X(1)).unwrap();
        let y1 = principal.ground.iter().position(|e| *e == Y(1)).unwrap();
        let mut circuits: BTreeSet<Vec<usize>> = principal
            .circuits
            .iter()
            .filter(|c| !(c.contains(&x1) && c.contains(&y1)))
            .cloned()
            .collect();
        circuits.insert(vec![x1.min(y1), x1.max(y1)]);
        let parallel_frame = Matroid {
            ground: principal.ground.clone(),
            circuits,
        };
        let verdict = in_family(&parallel_frame, &sys).unwrap();
        assert!(!verdict.is_member());
        assert!(verdict
            .failures
            .iter()
            .any(|f| matches!(f, FamilyFailure::FrameRestriction { .. })));
    }

    #[test]
    fn simplify_collapses_parallel_classes() {
        // a rank-2 matroid on x1..x4 with x2 parallel to x3
        let ground = vec![X(1), X(2), X(3), X(4)];
        let circuits = vec![
            vec![X(2), X(3)],
            vec![X(1), X(2), X(4)],
            vec![X(1), X(3), X(4)],
        ];
        let m = Matroid::new(ground, circuits).unwrap();
        assert_eq!(m.rank(), 2);
        let s = m.simplify().unwrap();
        assert_eq!(s.ground(), &[X(1), X(2), X(4)]);
        assert_eq!(s.rank(), 2);

        // simple matroids are fixed points
        let again = s.simplify().unwrap();
        assert_eq!(again, s);

        // an all-parallel rank-1 matroid collapses to one element
        let all_parallel = Matroid::new(
            vec![X(1), X(2), X(3)],
            vec![vec![X(1), X(2)], vec![X(1), X(3)], vec![X(2), X(3)]],
        )
        .unwrap();
        let s = all_parallel.simplify().unwrap();
        assert_eq!(s.ground(), &[X(1)]);

        // loops block simplification
        let looped = Matroid {
            ground: vec![X(1), X(2)],
            circuits: [vec![0usize]].into_iter().collect(),
        };
        assert_eq!(
            looped.simplify().unwrap_err(),
            StaudtError::LoopsPresent
        );
    }

    #[test]
    fn json_round_trip() {
        let family = build_circuits(&weyl_atomic());
        let json = family.to_json();
        assert_eq!(json.ground[0], "O");
        assert_eq!(json.ground[3], "x1");
        assert_eq!(json.ground[18], "r5");
        let back = CircuitFamily::from_json(&json).unwrap();
        assert_eq!(back, family);

        let m = family.check_matroid().unwrap();
        let back = Matroid::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn brute_force_axiom_agreement_on_small_antichains() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(31);
        let mut disagreements = 0;
        for _ in 0..150 {
            let n = rng.gen_range(3..=6usize);
            let ground: Vec<GroundElement> = (1..=n).map(X).collect();
            let mut circuits: BTreeSet<Vec<usize>> = BTreeSet::new();
            for _ in 0..rng.gen_range(1..6) {
                let size = rng.gen_range(1..=3usize.min(n));
                let mut c: Vec<usize> = (0..n).collect();
                for i in (1..c.len()).rev() {
                    c.swap(i, rng.gen_range(0..=i));
                }
                c.truncate(size);
                c.sort_unstable();
                let comparable = circuits
                    .iter()
                    .any(|d| is_subset(d, &c) || is_subset(&c, d));
                if !comparable {
                    circuits.insert(c);
                }
            }
            let family = CircuitFamily {
                ground: ground.clone(),
                circuits: circuits.clone(),
            };
            let fast = family.is_matroid().0;
            let brute = brute_force_is_matroid(n, &circuits);
            if fast != brute {
                disagreements += 1;
                eprintln!("disagreement on {circuits:?}: fast={fast} brute={brute}");
            }
        }
        assert_eq!(disagreements, 0);
    }

    /// Exchange-axiom oracle on the independence system derived from the
    /// circuits; independent = contains no circuit.
    fn brute_force_is_matroid(n: usize, circuits: &BTreeSet<Vec<usize>>) -> bool {
        let masks: Vec<u32> = circuits
            .iter()
            .map(|c| c.iter().fold(0u32, |m, &e| m | (1 << e)))
            .collect();
        let independent: Vec<u32> = (0u32..(1 << n))
            .filter(|s| masks.iter().all(|c| c & s != *c))
            .collect();
        for &a in &independent {
            for &b in &independent {
                if a.count_ones() >= b.count_ones() {
                    continue;
                }
                let candidates = b & !a;
                let mut ok = false;
                for e in 0..n {
                    if candidates & (1 << e) != 0 && independent.contains(&(a | (1 << e))) {
                        ok = true;
                        break;
                    }
                }
                if !ok {
                    return false;
                }
            }
        }
        true
    }
}
