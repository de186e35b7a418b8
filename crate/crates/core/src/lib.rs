//! Nondeterministic one-dimensional lattice walks.
//!
//! An *N-step* is a nonempty set of integer heights and an *N-walk* is a
//! sequence of N-steps; the walk explores every compatible classical walk in
//! parallel. This crate counts N-walks, N-bridges, N-meanders and
//! N-excursions exactly, expands their closed-form generating functions,
//! evaluates the known asymptotic formulas, builds the finite type automaton
//! describing reachable-point sets for arbitrary step sets, simulates random
//! N-walks, and decides feasibility of encapsulation/decapsulation paths.
//!
//! Module map:
//!
//! - [`walk`]: N-steps, weighted step sets, reachable-point semantics and
//!   classification of a single N-walk.
//! - [`exact`]: exact weighted counting for the Dyck and Motzkin step sets.
//! - [`series`]: truncated power series over the rationals and the
//!   closed-form generating functions.
//! - [`asym`]: floating-point asymptotic estimates.
//! - [`structure`]: reach-set shapes, the type automaton, Frobenius numbers
//!   and N-bridge counting for general step sets.
//! - [`oracle`]: brute-force enumeration used as ground truth.
//! - [`montecarlo`]: seeded simulation of random N-walks.
//! - [`tunnel`]: protocol-tunnel path feasibility and the text formats used
//!   by the command-line front-end.

pub mod asym;
pub mod error;
pub mod exact;
pub mod montecarlo;
pub mod oracle;
pub mod rational;
pub mod series;
pub mod structure;
pub mod tunnel;
pub mod walk;

pub use error::{Error, Result};
pub use num_rational::BigRational;
pub use walk::{classify, walk_weight, Classes, Family, NStep, NWalk, ReachState, WalkClass, WeightedStepSet};
