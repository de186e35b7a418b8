//! N-steps, weighted step sets and the reachable-point semantics of a single
//! N-walk.
//!
//! Reach sets are kept as explicit sorted vectors. Everything else in the
//! crate (DP state compression, shapes, the automaton) is checked against the
//! functions in this module.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational;

/// A nonempty set of integer heights, stored sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct NStep {
    heights: Vec<i64>,
}

impl NStep {
    pub fn new(mut heights: Vec<i64>) -> Result<Self> {
        if heights.is_empty() {
            return Err(Error::InvalidStep("an N-step needs at least one height".into()));
        }
        heights.sort_unstable();
        heights.dedup();
        Ok(NStep { heights })
    }

    pub fn singleton(h: i64) -> Self {
        NStep { heights: vec![h] }
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    pub fn min(&self) -> i64 {
        self.heights[0]
    }

    pub fn max(&self) -> i64 {
        self.heights[self.heights.len() - 1]
    }

    pub fn contains(&self, h: i64) -> bool {
        self.heights.binary_search(&h).is_ok()
    }

    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl TryFrom<Vec<i64>> for NStep {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        NStep::new(v)
    }
}

impl From<NStep> for Vec<i64> {
    fn from(s: NStep) -> Self {
        s.heights
    }
}

impl fmt::Display for NStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, h) in self.heights.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{h}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for NStep {
    type Err = Error;

    /// Parses `{-1,1}`; surrounding whitespace is ignored.
    fn from_str(text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("N-step must look like {{h1,h2,...}}: {text:?}")))?;
        let heights = inner
            .split(',')
            .map(|h| {
                h.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad height {h:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        NStep::new(heights)
    }
}

/// N-steps with a strictly positive rational weight each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<WeightedStep>", into = "Vec<WeightedStep>")]
pub struct WeightedStepSet {
    steps: Vec<(NStep, BigRational)>,
}

/// Serialized form of one entry of a [`WeightedStepSet`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedStep {
    pub step: NStep,
    #[serde(with = "rational::serde_str")]
    pub weight: BigRational,
}

impl WeightedStepSet {
    pub fn new(steps: Vec<(NStep, BigRational)>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::InvalidWeights("step set is empty".into()));
        }
        for (i, (s, w)) in steps.iter().enumerate() {
            if !w.is_positive() {
                return Err(Error::InvalidWeights(format!("weight of {s} is {w}, must be > 0")));
            }
            if steps[..i].iter().any(|(t, _)| t == s) {
                return Err(Error::InvalidStep(format!("duplicate N-step {s}")));
            }
        }
        Ok(WeightedStepSet { steps })
    }

    /// Every step with weight 1.
    pub fn unweighted(steps: Vec<NStep>) -> Result<Self> {
        Self::new(steps.into_iter().map(|s| (s, BigRational::one())).collect())
    }

    /// `{-1}`, `{1}`, `{-1,1}` in that order.
    pub fn dyck_steps() -> Vec<NStep> {
        vec![NStep::singleton(-1), NStep::singleton(1), NStep { heights: vec![-1, 1] }]
    }

    /// `{-1}`, `{0}`, `{1}`, `{-1,0}`, `{-1,1}`, `{0,1}`, `{-1,0,1}` in that order.
    pub fn motzkin_steps() -> Vec<NStep> {
        [
            vec![-1],
            vec![0],
            vec![1],
            vec![-1, 0],
            vec![-1, 1],
            vec![0, 1],
            vec![-1, 0, 1],
        ]
        .into_iter()
        .map(|heights| NStep { heights })
        .collect()
    }

    pub fn dyck() -> Self {
        Self::unweighted(Self::dyck_steps()).expect("static step set")
    }

    pub fn motzkin() -> Self {
        Self::unweighted(Self::motzkin_steps()).expect("static step set")
    }

    pub fn steps(&self) -> impl ExactSizeIterator<Item = &NStep> + Clone {
        self.steps.iter().map(|(s, _)| s)
    }

    pub fn entries(&self) -> &[(NStep, BigRational)] {
        &self.steps
    }

    pub fn weights(&self) -> impl ExactSizeIterator<Item = &BigRational> + Clone {
        self.steps.iter().map(|(_, w)| w)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn index_of(&self, s: &NStep) -> Option<usize> {
        self.steps.iter().position(|(t, _)| t == s)
    }

    pub fn weight_of(&self, s: &NStep) -> Option<&BigRational> {
        self.steps.iter().find(|(t, _)| t == s).map(|(_, w)| w)
    }

    pub fn total_weight(&self) -> BigRational {
        self.weights().fold(BigRational::zero(), |acc, w| acc + w)
    }

    pub fn is_probability(&self) -> bool {
        self.total_weight().is_one()
    }

    /// `(scaled, d)` with weight `i` equal to `scaled[i] / d`.
    pub fn integer_weights(&self) -> (Vec<BigInt>, BigInt) {
        rational::common_denominator(self.weights())
    }

    /// Least and greatest height over all steps.
    pub fn height_range(&self) -> (i64, i64) {
        let lo = self.steps().map(NStep::min).min().unwrap_or(0);
        let hi = self.steps().map(NStep::max).max().unwrap_or(0);
        (lo, hi)
    }
}

impl TryFrom<Vec<WeightedStep>> for WeightedStepSet {
    type Error = Error;
    fn try_from(v: Vec<WeightedStep>) -> Result<Self> {
        WeightedStepSet::new(v.into_iter().map(|e| (e.step, e.weight)).collect())
    }
}

impl From<WeightedStepSet> for Vec<WeightedStep> {
    fn from(s: WeightedStepSet) -> Self {
        s.steps
            .into_iter()
            .map(|(step, weight)| WeightedStep { step, weight })
            .collect()
    }
}

impl fmt::Display for WeightedStepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, w)) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{s}:{w}")?;
        }
        Ok(())
    }
}

/// Reachable points of an N-walk, or the dead state once no compatible
/// meander is left.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReachState {
    pub points: Vec<i64>,
    pub min: i64,
    pub max: i64,
    pub dead: bool,
}

impl ReachState {
    /// Reach set of the empty walk.
    pub fn origin() -> Self {
        Self::from_points(vec![0])
    }

    pub fn dead() -> Self {
        ReachState { points: Vec::new(), min: 0, max: 0, dead: true }
    }

    /// Builds a state from an arbitrary point list; an empty list is dead.
    pub fn from_points(mut points: Vec<i64>) -> Self {
        points.sort_unstable();
        points.dedup();
        match (points.first(), points.last()) {
            (Some(&min), Some(&max)) => ReachState { points, min, max, dead: false },
            _ => Self::dead(),
        }
    }

    pub fn is_dead(&self) -> bool {
        self.dead
    }

    pub fn contains(&self, r: i64) -> bool {
        self.points.binary_search(&r).is_ok()
    }

    pub fn span(&self) -> i64 {
        self.max - self.min
    }
}

/// Minkowski sum of the reach set with the step's heights.
///
/// A dead state stays dead.
pub fn step_reach(state: &ReachState, s: &NStep) -> ReachState {
    if state.dead {
        return ReachState::dead();
    }
    let lo = state.min + s.min();
    let hi = state.max + s.max();
    let mut hit = vec![false; (hi - lo + 1) as usize];
    for &r in &state.points {
        for &h in s.heights() {
            hit[(r + h - lo) as usize] = true;
        }
    }
    let points = hit
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| lo + i as i64)
        .collect();
    ReachState { points, min: lo, max: hi, dead: false }
}

/// Like [`step_reach`] but keeps only nonnegative points; dead is sticky.
pub fn step_reach_meander(state: &ReachState, s: &NStep) -> ReachState {
    if state.dead {
        return ReachState::dead();
    }
    let mut next = step_reach(state, s);
    next.points.retain(|&r| r >= 0);
    ReachState::from_points(next.points)
}

/// A sequence of N-steps; may be empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NWalk {
    pub nsteps: Vec<NStep>,
}

impl NWalk {
    pub fn new(nsteps: Vec<NStep>) -> Self {
        NWalk { nsteps }
    }

    pub fn len(&self) -> usize {
        self.nsteps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nsteps.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, NStep> {
        self.nsteps.iter()
    }

    /// Reach sets after each prefix, starting with the empty prefix.
    pub fn reach_sequence(&self) -> Vec<ReachState> {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(ReachState::origin());
        for s in &self.nsteps {
            let next = step_reach(out.last().expect("nonempty"), s);
            out.push(next);
        }
        out
    }

    /// Meander reach sets after each prefix, starting with the empty prefix.
    pub fn meander_sequence(&self) -> Vec<ReachState> {
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(ReachState::origin());
        for s in &self.nsteps {
            let next = step_reach_meander(out.last().expect("nonempty"), s);
            out.push(next);
        }
        out
    }

    pub fn final_reach(&self) -> ReachState {
        self.nsteps.iter().fold(ReachState::origin(), |r, s| step_reach(&r, s))
    }

    pub fn final_meander_reach(&self) -> ReachState {
        self.nsteps
            .iter()
            .fold(ReachState::origin(), |r, s| step_reach_meander(&r, s))
    }
}

impl FromIterator<NStep> for NWalk {
    fn from_iter<I: IntoIterator<Item = NStep>>(iter: I) -> Self {
        NWalk { nsteps: iter.into_iter().collect() }
    }
}

impl fmt::Display for NWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.nsteps.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// Step-set family selector shared by the counting front-ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Dyck,
    Motzkin,
    General,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Dyck => "dyck",
            Family::Motzkin => "motzkin",
            Family::General => "general",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        [Family::Dyck, Family::Motzkin, Family::General]
            .into_iter()
            .find(|f| f.name() == text.trim())
            .ok_or_else(|| Error::Parse(format!("unknown family {text:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkClass {
    Walk,
    Bridge,
    Meander,
    Excursion,
}

impl WalkClass {
    pub const ALL: [WalkClass; 4] = [WalkClass::Walk, WalkClass::Bridge, WalkClass::Meander, WalkClass::Excursion];

    pub fn name(self) -> &'static str {
        match self {
            WalkClass::Walk => "walk",
            WalkClass::Bridge => "bridge",
            WalkClass::Meander => "meander",
            WalkClass::Excursion => "excursion",
        }
    }
}

impl fmt::Display for WalkClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WalkClass {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        WalkClass::ALL
            .into_iter()
            .find(|k| k.name() == text.trim())
            .ok_or_else(|| Error::Parse(format!("unknown walk class {text:?}")))
    }
}

/// The classes an N-walk belongs to; `walk` is always set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Classes {
    pub walk: bool,
    pub bridge: bool,
    pub meander: bool,
    pub excursion: bool,
}

impl Classes {
    pub fn contains(&self, k: WalkClass) -> bool {
        match k {
            WalkClass::Walk => self.walk,
            WalkClass::Bridge => self.bridge,
            WalkClass::Meander => self.meander,
            WalkClass::Excursion => self.excursion,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = WalkClass> + '_ {
        WalkClass::ALL.into_iter().filter(|&k| self.contains(k))
    }
}

pub fn classify(w: &NWalk) -> Classes {
    let reach = w.final_reach();
    let meander = w.final_meander_reach();
    Classes {
        walk: true,
        bridge: reach.contains(0),
        meander: !meander.dead,
        excursion: !meander.dead && meander.contains(0),
    }
}

/// Product of the weights of the walk's N-steps.
pub fn walk_weight(w: &NWalk, set: &WeightedStepSet) -> Result<BigRational> {
    w.iter().try_fold(BigRational::one(), |acc, s| {
        set.weight_of(s)
            .map(|p| acc * p)
            .ok_or_else(|| Error::UnknownStep(s.to_string()))
    })
}
