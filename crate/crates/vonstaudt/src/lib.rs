//! Von Staudt constructions for systems of polynomial equations in
//! noncommuting variables.
//!
//! The crate turns a finite system of equations over `Z<X_1,...,X_n>` into a
//! rank-3 circuit collection (the von Staudt circuits), decides whether that
//! collection is a matroid, and moves back and forth between solutions of the
//! system in `c x c` matrices and multilinear representations of order `c`:
//!
//! * [`ncring`] — noncommutative polynomials, a text parser for equation
//!   systems, and evaluation at matrix assignments.
//! * [`exactalg`] — exact fields (`Q`, `F_p`, `F_p(l,m)`), dense matrices,
//!   exact rank, and closed-form block-rank identities.
//! * [`atomic`] — reduction of a system to atomic equations
//!   `X_i = X_j + X_k` / `X_i = X_j * X_k`, with solution lifting and
//!   projection.
//! * [`staudt`] — the circuit collection of an atomic system, matroid axiom
//!   checking, weak images and family membership.
//! * [`represent`] — representations of order `c`: construction from
//!   solutions, arrangement verification, frame normalization and solution
//!   extraction.
//! * [`casebook`] — worked case studies: the Weyl system in characteristic
//!   `p`, the Baumslag–Solitar system, and Horn-sentence reduction.
//!
//! Every computation is exact; there is no floating point anywhere.

pub mod atomic;
pub mod casebook;
pub mod exactalg;
pub mod jsonio;
pub mod ncring;
pub mod represent;
pub mod staudt;

pub use exactalg::{FieldSpec, Matrix};
pub use ncring::NcSystem;
