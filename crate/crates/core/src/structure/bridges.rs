use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use super::automaton::{build_type_automaton, TypeAutomaton};
use crate::error::{Error, Result};
use crate::exact::{add_scaled, finish, scale, CountTable};
use crate::walk::{WalkClass, WeightedStepSet};

/// Weighted N-bridge counts for an arbitrary step set, building the type
/// automaton with the default margin.
pub fn count_bridges_general(set: &WeightedStepSet, max_n: usize) -> Result<CountTable> {
    let aut = build_type_automaton(set, 3)?;
    count_bridges_with(&aut, set, max_n)
}

/// DP over `(state, min, max)`; a terminal triple counts when 0 belongs to
/// the state's shape at that min and max.
pub fn count_bridges_with(aut: &TypeAutomaton, set: &WeightedStepSet, max_n: usize) -> Result<CountTable> {
    let weights: Vec<BigRational> = set.weights().cloned().collect();
    let (w, d) = scale(&weights);
    let index: Vec<usize> = set
        .steps()
        .map(|s| aut.step_index(s).ok_or_else(|| Error::UnknownStep(s.to_string())))
        .collect::<Result<_>>()?;

    let mut layer: HashMap<(usize, i64, i64), BigUint> = HashMap::from([((aut.initial, 0, 0), BigUint::from(1u8))]);
    let mut mass = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let mut total = BigUint::zero();
        for (&(state, min, max), v) in &layer {
            if aut.state(state).shape.contains(0, min, max)? {
                total += v;
            }
        }
        mass.push(total);
        if n == max_n {
            break;
        }
        let mut next: HashMap<(usize, i64, i64), BigUint> = HashMap::with_capacity(layer.len() * 2);
        for (&(state, min, max), v) in &layer {
            for (j, &k) in index.iter().enumerate() {
                let d = &aut.steps[k];
                let key = (aut.state(state).transitions[k], min + d.min_delta, max + d.max_delta);
                add_scaled(next.entry(key).or_default(), v, &w[j]);
            }
        }
        layer = next;
    }
    Ok(finish(WalkClass::Bridge, set.clone(), mass, &d))
}
