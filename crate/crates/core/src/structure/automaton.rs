//! Finite automaton over reach-set shapes.
//!
//! The reach set of an N-walk depends only on how often each N-step occurs,
//! and the offsets from the minimum are the Minkowski sum of the normalized
//! steps `s - min(s)`. Construction:
//!
//! 1. For a cap `q`, every count vector in `{0..=q}^k` is a candidate state;
//!    the transition on step `s` adds one to coordinate `s` and caps at `q`.
//! 2. A capped vector stands for all vectors whose capped coordinates are at
//!    least `q`. Its label is the joint shape of a sample of those ("members"):
//!    the vector itself, plus `j` extra copies of each capped step and of all
//!    capped steps together, for `j = 1..=margin`. No joint shape means the cap
//!    is too small.
//! 3. Moore refinement merges equivalent vectors; then states are merged
//!    greedily whenever the union still has a joint shape, determinism can be
//!    restored by merging successors, and the graph stays acyclic apart from
//!    self-loops.
//! 4. Random walks are replayed against the explicit reach sets. A mismatch
//!    retries with `q + 1`; running out of caps is a budget error.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::shape::{joint_shape, ShapeType};
use crate::error::{Error, Result};
use crate::walk::{NStep, NWalk, WeightedStepSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomatonConfig {
    pub margin: usize,
    pub max_cap: usize,
    /// Upper bound on `(q + 1)^k` count vectors explored for one cap.
    pub max_vectors: usize,
    pub validation_walks: usize,
    pub validation_max_len: usize,
    pub seed: u64,
}

impl Default for AutomatonConfig {
    fn default() -> Self {
        AutomatonConfig {
            margin: 3,
            max_cap: 8,
            max_vectors: 100_000,
            validation_walks: 1000,
            validation_max_len: 40,
            seed: 0x6e77_616c_6b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDelta {
    pub step: NStep,
    pub min_delta: i64,
    pub max_delta: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonState {
    pub id: usize,
    pub shape: ShapeType,
    /// Target state id for each step, in the order of `TypeAutomaton::steps`.
    pub transitions: Vec<usize>,
}

/// Deterministic automaton whose state, together with the running min and
/// max, determines the reach set. State ids start at 1 and never decrease
/// along a walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeAutomaton {
    pub steps: Vec<StepDelta>,
    pub states: Vec<AutomatonState>,
    pub initial: usize,
    /// Count cap at which construction stabilized.
    pub cap: usize,
    pub margin: usize,
}

/// Position of a walk in the automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Tracked {
    pub state: usize,
    pub min: i64,
    pub max: i64,
}

impl TypeAutomaton {
    pub fn state(&self, id: usize) -> &AutomatonState {
        &self.states[id - 1]
    }

    pub fn step_index(&self, s: &NStep) -> Option<usize> {
        self.steps.iter().position(|d| &d.step == s)
    }

    pub fn start(&self) -> Tracked {
        Tracked { state: self.initial, min: 0, max: 0 }
    }

    pub fn advance(&self, t: Tracked, step: usize) -> Tracked {
        let d = &self.steps[step];
        Tracked {
            state: self.state(t.state).transitions[step],
            min: t.min + d.min_delta,
            max: t.max + d.max_delta,
        }
    }

    pub fn run(&self, w: &NWalk) -> Result<Tracked> {
        w.iter().try_fold(self.start(), |t, s| {
            let j = self.step_index(s).ok_or_else(|| Error::UnknownStep(s.to_string()))?;
            Ok(self.advance(t, j))
        })
    }

    pub fn reach(&self, t: Tracked) -> Result<Vec<i64>> {
        self.state(t.state).shape.expand(t.min, t.max)
    }

    pub fn predict(&self, w: &NWalk) -> Result<Vec<i64>> {
        self.reach(self.run(w)?)
    }

    /// Every transition goes to the same or a larger id.
    pub fn is_triangular(&self) -> bool {
        self.states.iter().all(|st| st.transitions.iter().all(|&t| t >= st.id))
    }
}

pub fn build_type_automaton(set: &WeightedStepSet, stabilization_margin: usize) -> Result<TypeAutomaton> {
    build_type_automaton_with(set, &AutomatonConfig { margin: stabilization_margin, ..AutomatonConfig::default() })
}

pub fn build_type_automaton_with(set: &WeightedStepSet, cfg: &AutomatonConfig) -> Result<TypeAutomaton> {
    let steps: Vec<NStep> = set.steps().cloned().collect();
    for q in 1..=cfg.max_cap {
        let vectors = (q + 1)
            .checked_pow(steps.len() as u32)
            .filter(|&v| v <= cfg.max_vectors)
            .ok_or_else(|| {
                Error::BudgetExceeded(format!(
                    "cap {q} needs {}^{} count vectors, limit is {}",
                    q + 1,
                    steps.len(),
                    cfg.max_vectors
                ))
            })?;
        let Some(candidate) = Builder::new(&steps, q, cfg.margin).build(vectors) else {
            continue;
        };
        if validate(&candidate, &steps, cfg) {
            return Ok(candidate);
        }
    }
    Err(Error::BudgetExceeded(format!("reach shapes did not stabilize up to cap {}", cfg.max_cap)))
}

fn minkowski(a: &[bool], b: &[bool]) -> Vec<bool> {
    let mut out = vec![false; a.len() + b.len() - 1];
    for (i, _) in a.iter().enumerate().filter(|(_, &x)| x) {
        for (j, _) in b.iter().enumerate().filter(|(_, &y)| y) {
            out[i + j] = true;
        }
    }
    out
}

struct Builder<'a> {
    steps: &'a [NStep],
    q: usize,
    margin: usize,
    /// `powers[s][j]`: `j`-fold Minkowski sum of normalized step `s`.
    powers: Vec<Vec<Vec<bool>>>,
    interned: HashMap<Vec<bool>, usize>,
    sets: Vec<Vec<bool>>,
}

impl<'a> Builder<'a> {
    fn new(steps: &'a [NStep], q: usize, margin: usize) -> Self {
        let powers = steps
            .iter()
            .map(|s| {
                let mut unit = vec![false; (s.max() - s.min() + 1) as usize];
                for h in s.heights() {
                    unit[(h - s.min()) as usize] = true;
                }
                let mut pw = vec![vec![true]];
                for j in 1..=(q + margin) {
                    let next = minkowski(&pw[j - 1], &unit);
                    pw.push(next);
                }
                pw
            })
            .collect();
        Builder { steps, q, margin, powers, interned: HashMap::new(), sets: Vec::new() }
    }

    fn decode(&self, mut idx: usize) -> Vec<usize> {
        let base = self.q + 1;
        (0..self.steps.len())
            .map(|_| {
                let d = idx % base;
                idx /= base;
                d
            })
            .collect()
    }

    fn encode(&self, v: &[usize]) -> usize {
        let base = self.q + 1;
        v.iter().rev().fold(0, |acc, &d| acc * base + d.min(self.q))
    }

    fn reach_id(&mut self, v: &[usize]) -> usize {
        let mut acc = vec![true];
        for (s, &count) in v.iter().enumerate() {
            acc = minkowski(&acc, &self.powers[s][count]);
        }
        if let Some(&id) = self.interned.get(&acc) {
            return id;
        }
        let id = self.sets.len();
        self.interned.insert(acc.clone(), id);
        self.sets.push(acc);
        id
    }

    fn member_sets(&mut self, u: &[usize]) -> Vec<usize> {
        let capped: Vec<usize> = (0..u.len()).filter(|&s| u[s] == self.q).collect();
        let mut members = vec![u.to_vec()];
        for j in 1..=self.margin {
            for &s in &capped {
                let mut v = u.to_vec();
                v[s] += j;
                members.push(v);
            }
            if capped.len() > 1 {
                let mut v = u.to_vec();
                capped.iter().for_each(|&s| v[s] += j);
                members.push(v);
            }
        }
        let mut ids: Vec<usize> = members.iter().map(|v| self.reach_id(v)).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    fn shape(&self, ids: &[usize]) -> Option<ShapeType> {
        let sets: Vec<Vec<bool>> = ids.iter().map(|&i| self.sets[i].clone()).collect();
        joint_shape(&sets)
    }

    fn build(mut self, n_vectors: usize) -> Option<TypeAutomaton> {
        let k = self.steps.len();
        let mut members = Vec::with_capacity(n_vectors);
        let mut labels = Vec::with_capacity(n_vectors);
        let mut delta = Vec::with_capacity(n_vectors);
        for i in 0..n_vectors {
            let u = self.decode(i);
            let ids = self.member_sets(&u);
            labels.push(self.shape(&ids)?);
            members.push(ids);
            delta.push(
                (0..k)
                    .map(|s| {
                        let mut v = u.clone();
                        v[s] += 1;
                        self.encode(&v)
                    })
                    .collect::<Vec<_>>(),
            );
        }

        let mut class = moore(&labels, &delta);
        let n_classes = class.iter().max().map_or(0, |m| m + 1);
        let mut cdelta = vec![Vec::new(); n_classes];
        let mut cmembers: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
        for i in 0..n_vectors {
            cdelta[class[i]] = delta[i].iter().map(|&t| class[t]).collect();
            cmembers[class[i]].extend(&members[i]);
        }
        if has_cycle(&cdelta, &(0..n_classes).collect::<Vec<_>>()) {
            class = (0..n_vectors).collect();
            cdelta = delta.clone();
            cmembers = members.clone();
        }
        for m in &mut cmembers {
            m.sort_unstable();
            m.dedup();
        }

        let order = bfs_order(&cdelta, class[0]);
        let groups = self.greedy_merge(&order, &cdelta, &cmembers);
        Some(self.assemble(&order, &cdelta, &cmembers, &groups))
    }

    fn greedy_merge(&self, order: &[usize], cdelta: &[Vec<usize>], cmembers: &[Vec<usize>]) -> Vec<usize> {
        let n = cdelta.len();
        let mut uf = UnionFind::new(n);
        for (pos, &y) in order.iter().enumerate() {
            for &x in &order[..pos] {
                if uf.find(x) == uf.find(y) {
                    continue;
                }
                let mut trial = uf.clone();
                let mut queue = VecDeque::from([(x, y)]);
                while let Some((a, b)) = queue.pop_front() {
                    if trial.union(a, b) {
                        queue.extend(cdelta[a].iter().copied().zip(cdelta[b].iter().copied()));
                    }
                }
                let roots: Vec<usize> = (0..n).map(|c| trial.find(c)).collect();
                let old: Vec<usize> = (0..n).map(|c| uf.find(c)).collect();
                let mut touched: HashMap<usize, Vec<usize>> = HashMap::new();
                for c in 0..n {
                    touched.entry(roots[c]).or_default().push(c);
                }
                // Only groups that absorbed something need a new joint shape.
                let ok = touched.values().all(|cs| {
                    let grew = cs.iter().any(|&c| old[c] != old[cs[0]]);
                    !grew || {
                        let mut ids: Vec<usize> = cs.iter().flat_map(|&c| cmembers[c].iter().copied()).collect();
                        ids.sort_unstable();
                        ids.dedup();
                        self.shape(&ids).is_some()
                    }
                });
                if ok && !has_cycle_grouped(cdelta, &roots) {
                    uf = trial;
                }
            }
        }
        (0..n).map(|c| uf.find(c)).collect()
    }

    fn assemble(&self, order: &[usize], cdelta: &[Vec<usize>], cmembers: &[Vec<usize>], root: &[usize]) -> TypeAutomaton {
        // Topological order of groups, ties broken by BFS position.
        let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut group_pos: HashMap<usize, usize> = HashMap::new();
        for &c in order {
            group_pos.entry(root[c]).or_insert(pos[&c]);
        }
        let mut edges: HashMap<usize, HashSet<usize>> = HashMap::new();
        let mut indeg: HashMap<usize, usize> = group_pos.keys().map(|&g| (g, 0)).collect();
        for &c in order {
            for &t in &cdelta[c] {
                let (g, h) = (root[c], root[t]);
                if g != h && edges.entry(g).or_default().insert(h) {
                    *indeg.get_mut(&h).expect("reachable group") += 1;
                }
            }
        }
        let mut ready: Vec<usize> = indeg.iter().filter(|(_, &d)| d == 0).map(|(&g, _)| g).collect();
        let mut topo = Vec::new();
        while !ready.is_empty() {
            ready.sort_by_key(|g| std::cmp::Reverse(group_pos[g]));
            let g = ready.pop().expect("nonempty");
            topo.push(g);
            for &h in edges.get(&g).into_iter().flatten() {
                let d = indeg.get_mut(&h).expect("known group");
                *d -= 1;
                if *d == 0 {
                    ready.push(h);
                }
            }
        }
        let id_of: HashMap<usize, usize> = topo.iter().enumerate().map(|(i, &g)| (g, i + 1)).collect();
        let states = topo
            .iter()
            .map(|&g| {
                let cs: Vec<usize> = order.iter().copied().filter(|&c| root[c] == g).collect();
                let mut ids: Vec<usize> = cs.iter().flat_map(|&c| cmembers[c].iter().copied()).collect();
                ids.sort_unstable();
                ids.dedup();
                AutomatonState {
                    id: id_of[&g],
                    shape: self.shape(&ids).expect("merged groups keep a joint shape"),
                    transitions: cdelta[cs[0]].iter().map(|&t| id_of[&root[t]]).collect(),
                }
            })
            .collect();
        TypeAutomaton {
            steps: self
                .steps
                .iter()
                .map(|s| StepDelta { step: s.clone(), min_delta: s.min(), max_delta: s.max() })
                .collect(),
            states,
            initial: id_of[&root[order[0]]],
            cap: self.q,
            margin: self.margin,
        }
    }
}

/// Coarsest partition refining `labels` that is compatible with `delta`.
fn moore<L: Eq + std::hash::Hash>(labels: &[L], delta: &[Vec<usize>]) -> Vec<usize> {
    let mut ids: HashMap<&L, usize> = HashMap::new();
    let mut class: Vec<usize> = labels
        .iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(l).or_insert(next)
        })
        .collect();
    let mut count = ids.len();
    loop {
        let mut sig: HashMap<Vec<usize>, usize> = HashMap::new();
        let next: Vec<usize> = (0..labels.len())
            .map(|i| {
                let mut key = vec![class[i]];
                key.extend(delta[i].iter().map(|&t| class[t]));
                let n = sig.len();
                *sig.entry(key).or_insert(n)
            })
            .collect();
        class = next;
        if sig.len() == count {
            return class;
        }
        count = sig.len();
    }
}

fn bfs_order(delta: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut seen = vec![false; delta.len()];
    let mut order = vec![start];
    seen[start] = true;
    let mut i = 0;
    while i < order.len() {
        for &t in &delta[order[i]] {
            if !seen[t] {
                seen[t] = true;
                order.push(t);
            }
        }
        i += 1;
    }
    order
}

fn has_cycle(delta: &[Vec<usize>], root: &[usize]) -> bool {
    has_cycle_grouped(delta, root)
}

/// Cycle detection on the quotient graph `root[c] -> root[delta[c][s]]`,
/// ignoring self-loops.
fn has_cycle_grouped(delta: &[Vec<usize>], root: &[usize]) -> bool {
    let mut adj: HashMap<usize, HashSet<usize>> = HashMap::new();
    for (c, ts) in delta.iter().enumerate() {
        for &t in ts {
            if root[c] != root[t] {
                adj.entry(root[c]).or_default().insert(root[t]);
            }
        }
    }
    // 0 = unvisited, 1 = on stack, 2 = done.
    let mut mark: HashMap<usize, u8> = HashMap::new();
    for &start in adj.keys() {
        if mark.get(&start).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut stack = vec![(start, adj[&start].iter().copied().collect::<Vec<_>>())];
        mark.insert(start, 1);
        while let Some((node, pending)) = stack.last_mut() {
            if let Some(next) = pending.pop() {
                match mark.get(&next).copied().unwrap_or(0) {
                    1 => return true,
                    0 => {
                        mark.insert(next, 1);
                        let succ = adj.get(&next).map(|s| s.iter().copied().collect()).unwrap_or_default();
                        stack.push((next, succ));
                    }
                    _ => {}
                }
            } else {
                mark.insert(*node, 2);
                stack.pop();
            }
        }
    }
    false
}

#[derive(Clone)]
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    /// Merges the two sets; the smaller root survives. False if already one.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        true
    }
}

fn validate(aut: &TypeAutomaton, steps: &[NStep], cfg: &AutomatonConfig) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.validation_walks).all(|_| {
        let len = rng.gen_range(0..=cfg.validation_max_len);
        let w: NWalk = (0..len).map(|_| steps[rng.gen_range(0..steps.len())].clone()).collect();
        matches!(aut.predict(&w), Ok(p) if p == w.final_reach().points)
    })
}
