use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::walk::WeightedStepSet;

/// Largest integer that is not a nonnegative combination of `gens`; `-1` when
/// every nonnegative integer is representable.
///
/// Round-robin residue table modulo the smallest generator: `n[r]` is the
/// least representable number congruent to `r`, and the answer is
/// `max(n) - min(gens)`.
pub fn frobenius(gens: &[i64]) -> Result<i64> {
    if gens.is_empty() || gens.iter().any(|&g| g <= 0) {
        return Err(Error::InvalidStep(format!("generators must be positive, got {gens:?}")));
    }
    let g = gens.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g != 1 {
        return Err(Error::InvalidStep(format!("generators {gens:?} have gcd {g}; divide by it first")));
    }
    let a1 = *gens.iter().min().expect("nonempty");
    let m = a1 as usize;
    let mut n = vec![i64::MAX; m];
    n[0] = 0;
    for &ai in gens {
        if ai == a1 {
            continue;
        }
        let d = a1.gcd(&ai) as usize;
        for r in 0..d {
            let start = (r..m).step_by(d).min_by_key(|&q| n[q]).expect("nonempty class");
            if n[start] == i64::MAX {
                continue;
            }
            let mut cur = n[start];
            for _ in 0..(m / d) {
                cur += ai;
                let q = (cur % a1) as usize;
                cur = cur.min(n[q]);
                n[q] = cur;
            }
        }
    }
    Ok(n.into_iter().max().expect("nonempty") - a1)
}

/// Numerical-semigroup data of a step set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupInfo {
    /// gcd of all `h - min(s)`; `None` when every N-step is a singleton.
    pub p_s: Option<i64>,
    /// Frobenius number of the normalized generators.
    pub frobenius: Option<i64>,
    /// Positive values `(h - min(s)) / p_s`, with multiplicity.
    pub generators: Vec<i64>,
}

pub fn semigroup_info(set: &WeightedStepSet) -> SemigroupInfo {
    let diffs: Vec<i64> = set
        .steps()
        .flat_map(|s| s.heights().iter().map(move |h| h - s.min()))
        .filter(|&d| d > 0)
        .collect();
    if diffs.is_empty() {
        return SemigroupInfo { p_s: None, frobenius: None, generators: Vec::new() };
    }
    let p = diffs.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    let generators: Vec<i64> = diffs.iter().map(|d| d / p).collect();
    let frob = frobenius(&generators).ok();
    SemigroupInfo { p_s: Some(p), frobenius: frob, generators }
}
