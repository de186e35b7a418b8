//! Seeded simulation of random N-walks under a probability-weighted step set.
//!
//! RNG: ChaCha8 (`rand_chacha`), seeded with `seed_from_u64(seed)`; run `r`
//! uses stream `r`. Each run draws one walk of the largest requested length
//! and is classified at every requested length along the way, so results are
//! a function of `(config, seed)` alone and do not depend on thread count.
//! Steps are drawn exactly: weights are scaled to integers over a common
//! denominator and sampled with a uniform integer draw.
//!
//! Classification is streaming. Dyck and Motzkin sets track `(min, max)` and
//! the meander descriptor `(min⁺, max⁺)` in O(1) per step; other sets track
//! bridges through the type automaton and meanders through the explicit
//! meander reach set.

use std::fmt::Write as _;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::motzkin_meander_step;
use crate::structure::{build_type_automaton, Tracked, TypeAutomaton};
use crate::walk::{step_reach_meander, Classes, NStep, ReachState, WalkClass, WeightedStepSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub stepset: WeightedStepSet,
    pub lengths: Vec<usize>,
    pub runs: u64,
    pub seed: u64,
}

/// Classes reported per length; `walk` is always 1 and omitted.
pub const REPORTED: [WalkClass; 3] = [WalkClass::Bridge, WalkClass::Meander, WalkClass::Excursion];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimRow {
    pub n: usize,
    pub kind: WalkClass,
    pub hits: u64,
    pub proportion: f64,
    /// `√(p̂(1 − p̂)/runs)`.
    pub stderr: f64,
    pub runs: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub rows: Vec<SimRow>,
}

impl SimResult {
    pub fn row(&self, n: usize, kind: WalkClass) -> Option<&SimRow> {
        self.rows.iter().find(|r| r.n == n && r.kind == kind)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,kind,proportion,stderr,runs,seed\n");
        for r in &self.rows {
            writeln!(out, "{},{},{},{},{},{}", r.n, r.kind, r.proportion, r.stderr, r.runs, r.seed).expect("string write");
        }
        out
    }
}

/// Streaming classifier for one step set; `step` takes the index of the
/// N-step in the step set.
pub trait Track: Sync {
    type State: Clone;
    fn start(&self) -> Self::State;
    fn step(&self, st: &mut Self::State, j: usize);
    fn classes(&self, st: &Self::State) -> Classes;
}

const DYCK_MIN: [i64; 3] = [-1, 1, -1];
const DYCK_MAX: [i64; 3] = [-1, 1, 1];

/// Dyck steps: the reach set is `{min, min + 2, ..., max}` and the meander
/// set `{min⁺, min⁺ + 2, ..., max⁺}`.
pub struct DyckTracker {
    index: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DyckState {
    min: i64,
    max: i64,
    minp: i64,
    maxp: i64,
    dead: bool,
}

impl Track for DyckTracker {
    type State = DyckState;

    fn start(&self) -> DyckState {
        DyckState { min: 0, max: 0, minp: 0, maxp: 0, dead: false }
    }

    fn step(&self, st: &mut DyckState, j: usize) {
        let d = self.index[j];
        st.min += DYCK_MIN[d];
        st.max += DYCK_MAX[d];
        if st.dead {
            return;
        }
        let (m, big_m) = (st.minp, st.maxp);
        let next = if m > 0 {
            Some((m + DYCK_MIN[d], big_m + DYCK_MAX[d]))
        } else if big_m > 0 {
            Some((1, big_m + DYCK_MAX[d]))
        } else if d == 0 {
            None
        } else {
            Some((1, 1))
        };
        match next {
            Some((a, b)) => (st.minp, st.maxp) = (a, b),
            None => st.dead = true,
        }
    }

    fn classes(&self, st: &DyckState) -> Classes {
        Classes {
            walk: true,
            bridge: st.min <= 0 && st.max >= 0 && st.min % 2 == 0,
            meander: !st.dead,
            excursion: !st.dead && st.minp == 0,
        }
    }
}

const MOTZKIN_MIN: [i64; 7] = [-1, 0, 1, -1, -1, 0, -1];
const MOTZKIN_MAX: [i64; 7] = [-1, 0, 1, 0, 1, 1, 1];
const MOTZKIN_ADJACENT: [bool; 7] = [false, false, false, true, false, true, true];

/// Motzkin steps: a step-2 progression until a step with two adjacent heights
/// makes the set contiguous; the meander side follows the exact DP tables.
pub struct MotzkinTracker {
    index: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MotzkinState {
    contiguous: bool,
    min: i64,
    max: i64,
    /// `(type, min⁺, y)` as in the exact meander DP; `None` once dead.
    meander: Option<(u8, i64, i64)>,
}

impl Track for MotzkinTracker {
    type State = MotzkinState;

    fn start(&self) -> MotzkinState {
        MotzkinState { contiguous: false, min: 0, max: 0, meander: Some((1, 0, 0)) }
    }

    fn step(&self, st: &mut MotzkinState, j: usize) {
        let d = self.index[j];
        st.min += MOTZKIN_MIN[d];
        st.max += MOTZKIN_MAX[d];
        st.contiguous |= MOTZKIN_ADJACENT[d];
        st.meander = st.meander.and_then(|(ty, m, y)| motzkin_meander_step(ty, m, y, d));
    }

    fn classes(&self, st: &MotzkinState) -> Classes {
        Classes {
            walk: true,
            bridge: st.min <= 0 && st.max >= 0 && (st.contiguous || st.min % 2 == 0),
            meander: st.meander.is_some(),
            excursion: matches!(st.meander, Some((_, 0, _))),
        }
    }
}

/// Arbitrary step sets. The meander side is explicit, so a step costs time
/// proportional to the meander set size.
pub struct GeneralTracker {
    aut: TypeAutomaton,
    steps: Vec<NStep>,
    aut_index: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralState {
    tracked: Tracked,
    meander: ReachState,
}

impl GeneralTracker {
    pub fn new(set: &WeightedStepSet) -> Result<Self> {
        let aut = build_type_automaton(set, 3)?;
        let steps: Vec<NStep> = set.steps().cloned().collect();
        let aut_index = steps.iter().map(|s| aut.step_index(s).expect("automaton built on this set")).collect();
        Ok(GeneralTracker { aut, steps, aut_index })
    }
}

impl Track for GeneralTracker {
    type State = GeneralState;

    fn start(&self) -> GeneralState {
        GeneralState { tracked: self.aut.start(), meander: ReachState::origin() }
    }

    fn step(&self, st: &mut GeneralState, j: usize) {
        st.tracked = self.aut.advance(st.tracked, self.aut_index[j]);
        if !st.meander.dead {
            st.meander = step_reach_meander(&st.meander, &self.steps[j]);
        }
    }

    fn classes(&self, st: &GeneralState) -> Classes {
        let t = st.tracked;
        let bridge = self
            .aut
            .state(t.state)
            .shape
            .contains(0, t.min, t.max)
            .expect("reachable automaton states have applicable shapes");
        Classes {
            walk: true,
            bridge,
            meander: !st.meander.dead,
            excursion: !st.meander.dead && st.meander.contains(0),
        }
    }
}

fn positions(steps: &[NStep], family: &[NStep]) -> Option<Vec<usize>> {
    steps.iter().map(|s| family.iter().position(|f| f == s)).collect()
}

/// Streaming classifier matched to the step set: Dyck and Motzkin fast paths
/// when every N-step belongs to the family, the automaton otherwise.
pub enum Tracker {
    Dyck(DyckTracker),
    Motzkin(MotzkinTracker),
    General(Box<GeneralTracker>),
}

impl Tracker {
    pub fn for_set(set: &WeightedStepSet) -> Result<Self> {
        let steps: Vec<NStep> = set.steps().cloned().collect();
        if let Some(index) = positions(&steps, &WeightedStepSet::dyck_steps()) {
            return Ok(Tracker::Dyck(DyckTracker { index }));
        }
        if let Some(index) = positions(&steps, &WeightedStepSet::motzkin_steps()) {
            return Ok(Tracker::Motzkin(MotzkinTracker { index }));
        }
        Ok(Tracker::General(Box::new(GeneralTracker::new(set)?)))
    }

    /// Classes of the walk given by step indices, for testing and one-offs.
    pub fn classify_indices(&self, js: &[usize]) -> Classes {
        fn go<T: Track>(t: &T, js: &[usize]) -> Classes {
            let mut st = t.start();
            js.iter().for_each(|&j| t.step(&mut st, j));
            t.classes(&st)
        }
        match self {
            Tracker::Dyck(t) => go(t, js),
            Tracker::Motzkin(t) => go(t, js),
            Tracker::General(t) => go(t.as_ref(), js),
        }
    }
}

/// Exact sampler over integer weights.
struct Sampler {
    cumulative: Vec<u64>,
}

impl Sampler {
    fn new(set: &WeightedStepSet) -> Result<Self> {
        let (ints, _) = set.integer_weights();
        let mut acc = 0u64;
        let mut cumulative = Vec::with_capacity(ints.len());
        for w in ints {
            let w = w
                .to_u64()
                .ok_or_else(|| Error::Unsupported(format!("weight numerator {w} too large for the sampler")))?;
            acc = acc
                .checked_add(w)
                .ok_or_else(|| Error::Unsupported("weight denominators too large for the sampler".into()))?;
            cumulative.push(acc);
        }
        Ok(Sampler { cumulative })
    }

    #[inline]
    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let x = rng.gen_range(0..*self.cumulative.last().expect("nonempty set"));
        self.cumulative.partition_point(|&c| c <= x)
    }
}

fn validate(cfg: &SimConfig) -> Result<()> {
    if !cfg.stepset.is_probability() {
        return Err(Error::InvalidWeights(format!("weights sum to {}, expected 1", cfg.stepset.total_weight())));
    }
    if cfg.runs == 0 {
        return Err(Error::InvalidWeights("runs must be at least 1".into()));
    }
    if cfg.lengths.is_empty() {
        return Err(Error::InvalidWeights("no lengths requested".into()));
    }
    Ok(())
}

pub fn simulate(cfg: &SimConfig) -> Result<SimResult> {
    validate(cfg)?;
    let tracker = Tracker::for_set(&cfg.stepset)?;
    let sampler = Sampler::new(&cfg.stepset)?;
    let mut lengths = cfg.lengths.clone();
    lengths.sort_unstable();
    lengths.dedup();
    let hits = match &tracker {
        Tracker::Dyck(t) => run_all(t, &sampler, &lengths, cfg),
        Tracker::Motzkin(t) => run_all(t, &sampler, &lengths, cfg),
        Tracker::General(t) => run_all(t.as_ref(), &sampler, &lengths, cfg),
    };
    let runs = cfg.runs;
    let hits = &hits;
    let rows = cfg
        .lengths
        .iter()
        .flat_map(|&n| {
            let i = lengths.binary_search(&n).expect("deduplicated lengths");
            REPORTED.iter().enumerate().map(move |(k, &kind)| (n, kind, hits[i][k]))
        })
        .map(|(n, kind, h)| {
            let p = h as f64 / runs as f64;
            SimRow { n, kind, hits: h, proportion: p, stderr: (p * (1.0 - p) / runs as f64).sqrt(), runs, seed: cfg.seed }
        })
        .collect();
    Ok(SimResult { rows })
}

/// Same as [`simulate`] on a dedicated pool of `threads` workers.
pub fn simulate_with_threads(cfg: &SimConfig, threads: usize) -> Result<SimResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    pool.install(|| simulate(cfg))
}

fn run_all<T: Track>(tracker: &T, sampler: &Sampler, lengths: &[usize], cfg: &SimConfig) -> Vec<[u64; 3]> {
    let zero = || vec![[0u64; 3]; lengths.len()];
    (0..cfg.runs)
        .into_par_iter()
        .fold(zero, |mut acc, run| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(run);
            let mut st = tracker.start();
            let mut done = 0usize;
            for (i, &n) in lengths.iter().enumerate() {
                while done < n {
                    tracker.step(&mut st, sampler.draw(&mut rng));
                    done += 1;
                }
                let c = tracker.classes(&st);
                for (k, &kind) in REPORTED.iter().enumerate() {
                    acc[i][k] += u64::from(c.contains(kind));
                }
            }
            acc
        })
        .reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(&b) {
                for k in 0..3 {
                    x[k] += y[k];
                }
            }
            a
        })
}
