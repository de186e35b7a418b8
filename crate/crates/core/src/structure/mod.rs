//! Machinery for arbitrary N-step sets: canonical reach-set shapes, the type
//! automaton, numerical-semigroup data and N-bridge counting.

mod automaton;
mod bridges;
mod semigroup;
mod shape;

pub use automaton::{
    build_type_automaton, build_type_automaton_with, AutomatonConfig, AutomatonState, StepDelta, Tracked,
    TypeAutomaton,
};
pub use bridges::{count_bridges_general, count_bridges_with};
pub use semigroup::{frobenius, semigroup_info, SemigroupInfo};
pub use shape::{joint_shape, normalize, shape_of, ShapeType};
