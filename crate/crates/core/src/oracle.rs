//! Brute-force ground truth for small lengths.
//!
//! Classes are decided from the compatible classical walks themselves, never
//! through reach sets, so agreement with [`crate::walk::classify`] and the
//! counting modules is independent evidence. Every entry point takes an
//! explicit budget and fails fast when the enumeration would exceed it.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::CountTable;
use crate::walk::{Classes, NStep, NWalk, WalkClass, WeightedStepSet};

/// Default cap on enumerated objects.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

fn check_budget(what: &str, size: Option<u128>, budget: u128) -> Result<u128> {
    match size {
        Some(s) if s <= budget => Ok(s),
        Some(s) => Err(Error::BudgetExceeded(format!("{what}: {s} items, budget {budget}"))),
        None => Err(Error::BudgetExceeded(format!("{what}: size overflows, budget {budget}"))),
    }
}

fn power(base: usize, n: usize) -> Option<u128> {
    (0..n).try_fold(1u128, |acc, _| acc.checked_mul(base as u128))
}

/// Lexicographic stream of all N-walks of a fixed length, ordered by the
/// position of each N-step in the step set.
#[derive(Clone, Debug)]
pub struct NWalkIter {
    steps: Vec<NStep>,
    digits: Option<Vec<usize>>,
}

impl Iterator for NWalkIter {
    type Item = NWalk;

    fn next(&mut self) -> Option<NWalk> {
        let digits = self.digits.as_mut()?;
        let w = NWalk::new(digits.iter().map(|&d| self.steps[d].clone()).collect());
        let k = self.steps.len();
        match digits.iter().rposition(|&d| d + 1 < k) {
            Some(i) => {
                digits[i] += 1;
                digits[i + 1..].iter_mut().for_each(|d| *d = 0);
            }
            None => self.digits = None,
        }
        Some(w)
    }
}

pub fn enumerate_nwalks(set: &WeightedStepSet, n: usize) -> Result<NWalkIter> {
    enumerate_nwalks_with_budget(set, n, DEFAULT_BUDGET)
}

pub fn enumerate_nwalks_with_budget(set: &WeightedStepSet, n: usize, budget: u128) -> Result<NWalkIter> {
    check_budget("N-walk enumeration", power(set.len(), n), budget)?;
    Ok(NWalkIter { steps: set.steps().cloned().collect(), digits: Some(vec![0; n]) })
}

/// One classical walk: the chosen height per N-step and the ordinates after
/// each step, starting from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalWalk {
    pub heights: Vec<i64>,
    pub ordinates: Vec<i64>,
}

impl ClassicalWalk {
    pub fn end(&self) -> i64 {
        *self.ordinates.last().expect("ordinates start at 0")
    }

    pub fn is_bridge(&self) -> bool {
        self.end() == 0
    }

    pub fn is_meander(&self) -> bool {
        self.ordinates.iter().all(|&y| y >= 0)
    }

    pub fn is_excursion(&self) -> bool {
        self.is_bridge() && self.is_meander()
    }
}

pub fn compatible_walks(w: &NWalk) -> Result<Vec<ClassicalWalk>> {
    compatible_walks_with_budget(w, DEFAULT_BUDGET)
}

pub fn compatible_walks_with_budget(w: &NWalk, budget: u128) -> Result<Vec<ClassicalWalk>> {
    let size = w.iter().try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128));
    check_budget("compatible walks", size, budget)?;
    let mut out = vec![ClassicalWalk { heights: Vec::new(), ordinates: vec![0] }];
    for s in w.iter() {
        out = out
            .into_iter()
            .flat_map(|cw| {
                s.heights().iter().map(move |&h| {
                    let mut next = cw.clone();
                    next.heights.push(h);
                    next.ordinates.push(cw.end() + h);
                    next
                })
            })
            .collect();
    }
    Ok(out)
}

/// Classes of `w` by depth-first search over its compatible walks; stops as
/// soon as every class is witnessed.
pub fn brute_classes(w: &NWalk) -> Classes {
    let steps: Vec<&NStep> = w.iter().collect();
    let mut found = Classes { walk: true, bridge: false, meander: false, excursion: false };
    dfs(&steps, 0, 0, true, &mut found);
    found
}

fn dfs(steps: &[&NStep], i: usize, y: i64, nonneg: bool, found: &mut Classes) {
    if i == steps.len() {
        found.bridge |= y == 0;
        found.meander |= nonneg;
        found.excursion |= nonneg && y == 0;
        return;
    }
    for &h in steps[i].heights() {
        if found.bridge && found.meander && found.excursion {
            return;
        }
        let y2 = y + h;
        let nonneg2 = nonneg && y2 >= 0;
        // Once a bridge is known, only nonnegative prefixes can add anything.
        if !nonneg2 && found.bridge {
            continue;
        }
        dfs(steps, i + 1, y2, nonneg2, found);
    }
}

/// Weighted number of length-`n` N-walks in class `kind`.
pub fn brute_count(set: &WeightedStepSet, kind: WalkClass, n: usize) -> Result<BigRational> {
    brute_count_with_budget(set, kind, n, DEFAULT_BUDGET)
}

pub fn brute_count_with_budget(set: &WeightedStepSet, kind: WalkClass, n: usize, budget: u128) -> Result<BigRational> {
    let k = set.len();
    let total = check_budget("N-walk enumeration", power(k, n), budget)?;
    let steps: Vec<NStep> = set.steps().cloned().collect();
    // The weight of an N-walk depends only on its step multiplicities.
    let by_multiplicity = (0..total)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<Vec<u16>, u64>, idx| {
            let mut digits = vec![0usize; n];
            let mut rest = idx;
            for d in digits.iter_mut().rev() {
                *d = (rest % k as u128) as usize;
                rest /= k as u128;
            }
            let w = NWalk::new(digits.iter().map(|&d| steps[d].clone()).collect());
            if brute_classes(&w).contains(kind) {
                let mut mult = vec![0u16; k];
                digits.iter().for_each(|&d| mult[d] += 1);
                *acc.entry(mult).or_default() += 1;
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (m, c) in b {
                *a.entry(m).or_default() += c;
            }
            a
        });
    let weights: Vec<&BigRational> = set.weights().collect();
    let mut sum = BigRational::from_integer(BigInt::from(0));
    for (mult, c) in by_multiplicity {
        let mut term = BigRational::from_integer(BigInt::from(c));
        for (w, &m) in weights.iter().zip(&mult) {
            term *= num_traits::pow((*w).clone(), m as usize);
        }
        sum += term;
    }
    Ok(sum)
}

/// Brute-force counts for every length `0..=max_n`, in [`CountTable`] form.
pub fn brute_table(set: &WeightedStepSet, kind: WalkClass, max_n: usize) -> Result<CountTable> {
    let counts = (0..=max_n).map(|n| brute_count(set, kind, n)).collect::<Result<_>>()?;
    Ok(CountTable { kind, stepset: set.clone(), counts })
}

/// Number of classical walks compatible with `w`.
pub fn compatible_count(w: &NWalk) -> BigUint {
    w.iter().fold(BigUint::one(), |acc, s| acc * BigUint::from(s.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::walk::classify;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn st(h: &[i64]) -> NStep {
        NStep::new(h.to_vec()).unwrap()
    }

    #[test]
    fn enumeration_sizes_and_order() {
        assert_eq!(enumerate_nwalks(&WeightedStepSet::dyck(), 2).unwrap().count(), 9);
        assert_eq!(enumerate_nwalks(&WeightedStepSet::motzkin(), 1).unwrap().count(), 7);
        let empty: Vec<NWalk> = enumerate_nwalks(&WeightedStepSet::dyck(), 0).unwrap().collect();
        assert_eq!(empty, vec![NWalk::new(vec![])]);
        let two: Vec<String> = enumerate_nwalks(&WeightedStepSet::dyck(), 2).unwrap().take(4).map(|w| w.to_string()).collect();
        assert_eq!(two, ["({-1},{-1})", "({-1},{1})", "({-1},{-1,1})", "({1},{-1})"]);
        assert!(enumerate_nwalks_with_budget(&WeightedStepSet::motzkin(), 10, 1000).unwrap_err().is_budget());
    }

    #[test]
    fn compatible_walks_of_the_example() {
        let w = NWalk::new(vec![st(&[1]), st(&[-1, 1]), st(&[-1, 1]), st(&[-1])]);
        let walks = compatible_walks(&w).unwrap();
        assert_eq!(walks.len(), 4);
        let mut ends: Vec<i64> = walks.iter().map(ClassicalWalk::end).collect();
        ends.sort_unstable();
        ends.dedup();
        assert_eq!(ends, vec![-2, 0, 2]);
        assert_eq!(walks.iter().filter(|c| c.is_excursion()).count(), 2);
        assert_eq!(compatible_walks(&NWalk::new(vec![])).unwrap().len(), 1);
        assert_eq!(compatible_walks(&NWalk::new(vec![st(&[-1, 0, 1])])).unwrap().len(), 3);
        let long = NWalk::new(vec![st(&[-1, 0, 1]); 20]);
        assert!(compatible_walks_with_budget(&long, 1000).unwrap_err().is_budget());
    }

    #[test]
    fn dyck_values() {
        let d = WeightedStepSet::dyck();
        assert_eq!(brute_count(&d, WalkClass::Excursion, 4).unwrap(), int(28));
        assert_eq!(brute_count(&d, WalkClass::Meander, 3).unwrap(), int(16));
        assert_eq!(brute_count(&d, WalkClass::Excursion, 6).unwrap(), int(224));
        assert_eq!(brute_count(&d, WalkClass::Excursion, 8).unwrap(), int(1888));
        assert_eq!(brute_count(&d, WalkClass::Bridge, 8).unwrap(), int(5407));
        assert_eq!(brute_count(&d, WalkClass::Walk, 5).unwrap(), int(243));
    }

    #[test]
    fn motzkin_values() {
        let m = WeightedStepSet::motzkin();
        assert_eq!(brute_count(&m, WalkClass::Meander, 1).unwrap(), int(6));
        assert_eq!(brute_count(&m, WalkClass::Excursion, 1).unwrap(), int(4));
        assert_eq!(brute_count(&m, WalkClass::Bridge, 1).unwrap(), int(4));
        // Regression value pinned by this oracle.
        assert_eq!(brute_count(&m, WalkClass::Meander, 2).unwrap(), int(40));
    }

    #[test]
    fn weighted_counts() {
        let set = WeightedStepSet::new(vec![(st(&[-1]), ratio(1, 3)), (st(&[1]), ratio(1, 2)), (st(&[-1, 1]), ratio(1, 6))]).unwrap();
        assert_eq!(brute_count(&set, WalkClass::Walk, 6).unwrap(), int(1));
        let direct: BigRational = enumerate_nwalks(&set, 4)
            .unwrap()
            .filter(|w| brute_classes(w).excursion)
            .map(|w| crate::walk::walk_weight(&w, &set).unwrap())
            .sum();
        assert_eq!(brute_count(&set, WalkClass::Excursion, 4).unwrap(), direct);
    }

    #[test]
    fn classify_agrees_exhaustively() {
        for n in 0..=8 {
            for w in enumerate_nwalks(&WeightedStepSet::dyck(), n).unwrap() {
                assert_eq!(classify(&w), brute_classes(&w), "{w}");
            }
        }
        for n in 0..=6 {
            for w in enumerate_nwalks(&WeightedStepSet::motzkin(), n).unwrap() {
                assert_eq!(classify(&w), brute_classes(&w), "{w}");
            }
        }
    }

    #[test]
    fn classify_agrees_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sets = [WeightedStepSet::dyck(), WeightedStepSet::motzkin()];
        for i in 0..10_000 {
            let steps: Vec<NStep> = sets[i % 2].steps().cloned().collect();
            let n = rng.gen_range(0..=14);
            let w: NWalk = (0..n).map(|_| steps[rng.gen_range(0..steps.len())].clone()).collect();
            assert_eq!(classify(&w), brute_classes(&w), "{w}");
        }
    }

    #[test]
    fn dfs_matches_full_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let steps: Vec<NStep> = WeightedStepSet::motzkin().steps().cloned().collect();
        for _ in 0..500 {
            let n = rng.gen_range(0..=7);
            let w: NWalk = (0..n).map(|_| steps[rng.gen_range(0..steps.len())].clone()).collect();
            let walks = compatible_walks(&w).unwrap();
            let expected = Classes {
                walk: true,
                bridge: walks.iter().any(ClassicalWalk::is_bridge),
                meander: walks.iter().any(ClassicalWalk::is_meander),
                excursion: walks.iter().any(ClassicalWalk::is_excursion),
            };
            assert_eq!(brute_classes(&w), expected, "{w}");
            assert_eq!(compatible_count(&w), BigUint::from(walks.len()));
        }
    }
}
