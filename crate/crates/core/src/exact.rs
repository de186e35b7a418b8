//! Exact weighted counting for the Dyck and Motzkin step sets.
//!
//! All DPs run on integers: the weights are rescaled to a common denominator
//! `d`, the DP accumulates integer mass, and length `n` is divided by `d^n`
//! once at the end.
//!
//! Weights of zero are accepted and mean "step absent"; the step set stored in
//! the resulting [`CountTable`] lists only the steps of positive weight.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, serde_vec};
use crate::walk::{NStep, WalkClass, WeightedStepSet};

/// Exact weighted counts by length for one walk class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub kind: WalkClass,
    pub stepset: WeightedStepSet,
    #[serde(with = "serde_vec")]
    pub counts: Vec<BigRational>,
}

impl CountTable {
    pub fn max_n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn get(&self, n: usize) -> Result<&BigRational> {
        self.counts.get(n).ok_or(Error::OutOfRange { index: n, max: self.max_n() })
    }

    pub fn ratio(&self, n: usize) -> Result<BigRational> {
        ratio(self, n)
    }
}

/// `counts[n]` divided by the total walk weight `(sum of weights)^n`.
pub fn ratio(table: &CountTable, n: usize) -> Result<BigRational> {
    let c = table.get(n)?;
    Ok(c / num_traits::pow(table.stepset.total_weight(), n))
}

fn check_weights(ws: &[BigRational], what: &str) -> Result<()> {
    if let Some(w) = ws.iter().find(|w| w.is_negative()) {
        return Err(Error::InvalidWeights(format!("{what} weight {w} is negative")));
    }
    if ws.iter().all(Zero::is_zero) {
        return Err(Error::InvalidWeights(format!("all {what} weights are zero")));
    }
    Ok(())
}

fn positive_stepset(steps: Vec<NStep>, ws: &[BigRational]) -> WeightedStepSet {
    let entries = steps
        .into_iter()
        .zip(ws.iter().cloned())
        .filter(|(_, w)| w.is_positive())
        .collect();
    WeightedStepSet::new(entries).expect("validated weights")
}

/// Integer weights over a common denominator; all weights are nonnegative.
pub(crate) fn scale(ws: &[BigRational]) -> (Vec<BigUint>, BigUint) {
    let (scaled, d) = rational::common_denominator(ws);
    let to_u = |x: BigInt| x.to_biguint().expect("nonnegative");
    (scaled.into_iter().map(to_u).collect(), to_u(d))
}

pub(crate) fn finish(kind: WalkClass, stepset: WeightedStepSet, mass: Vec<BigUint>, d: &BigUint) -> CountTable {
    let mut den = BigUint::one();
    let counts = mass
        .into_iter()
        .map(|m| {
            let q = BigRational::new(BigInt::from(m), BigInt::from(den.clone()));
            den *= d;
            q
        })
        .collect();
    CountTable { kind, stepset, counts }
}

#[inline]
pub(crate) fn add_scaled(acc: &mut BigUint, v: &BigUint, w: &BigUint) {
    if w.is_one() {
        *acc += v;
    } else {
        *acc += v * w;
    }
}

/// Weights `(p_{-1}, p_1, p_{-1,1})` of the Dyck N-steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyckWeights {
    #[serde(with = "rational::serde_str")]
    pub down: BigRational,
    #[serde(with = "rational::serde_str")]
    pub up: BigRational,
    #[serde(with = "rational::serde_str")]
    pub both: BigRational,
}

impl DyckWeights {
    pub fn new(down: BigRational, up: BigRational, both: BigRational) -> Result<Self> {
        check_weights(&[down.clone(), up.clone(), both.clone()], "Dyck")?;
        Ok(DyckWeights { down, up, both })
    }

    pub fn unweighted() -> Self {
        DyckWeights { down: BigRational::one(), up: BigRational::one(), both: BigRational::one() }
    }

    /// Reads weights off a step set made of Dyck N-steps only.
    pub fn from_stepset(set: &WeightedStepSet) -> Result<Self> {
        let mut ws = vec![BigRational::zero(); 3];
        let order = WeightedStepSet::dyck_steps();
        for (s, w) in set.entries() {
            let i = order
                .iter()
                .position(|t| t == s)
                .ok_or_else(|| Error::Unsupported(format!("{s} is not a Dyck N-step")))?;
            ws[i] = w.clone();
        }
        let [down, up, both]: [BigRational; 3] = ws.try_into().expect("three weights");
        Self::new(down, up, both)
    }

    pub fn swapped(&self) -> Self {
        DyckWeights { down: self.up.clone(), up: self.down.clone(), both: self.both.clone() }
    }

    pub fn as_array(&self) -> [BigRational; 3] {
        [self.down.clone(), self.up.clone(), self.both.clone()]
    }

    pub fn stepset(&self) -> WeightedStepSet {
        positive_stepset(WeightedStepSet::dyck_steps(), &self.as_array())
    }
}

/// Weights of the seven Motzkin N-steps in the order of
/// [`WeightedStepSet::motzkin_steps`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MotzkinWeights(#[serde(with = "serde_vec")] pub Vec<BigRational>);

impl MotzkinWeights {
    pub fn new(ws: Vec<BigRational>) -> Result<Self> {
        if ws.len() != 7 {
            return Err(Error::InvalidWeights(format!("expected 7 Motzkin weights, got {}", ws.len())));
        }
        check_weights(&ws, "Motzkin")?;
        Ok(MotzkinWeights(ws))
    }

    pub fn unweighted() -> Self {
        MotzkinWeights(vec![BigRational::one(); 7])
    }

    pub fn from_stepset(set: &WeightedStepSet) -> Result<Self> {
        let mut ws = vec![BigRational::zero(); 7];
        let order = WeightedStepSet::motzkin_steps();
        for (s, w) in set.entries() {
            let i = order
                .iter()
                .position(|t| t == s)
                .ok_or_else(|| Error::Unsupported(format!("{s} is not a Motzkin N-step")))?;
            ws[i] = w.clone();
        }
        Self::new(ws)
    }

    pub fn stepset(&self) -> WeightedStepSet {
        positive_stepset(WeightedStepSet::motzkin_steps(), &self.0)
    }
}

/// Square grid of DP masses, row-major over two coordinates.
struct Grid {
    width: usize,
    cells: Vec<BigUint>,
}

impl Grid {
    fn new(width: usize, layers: usize) -> Self {
        Grid { width, cells: vec![BigUint::zero(); width * width * layers] }
    }

    #[inline]
    fn idx(&self, layer: usize, a: usize, b: usize) -> usize {
        (layer * self.width + a) * self.width + b
    }

    fn clear(&mut self) {
        self.cells.iter_mut().for_each(BigUint::set_zero);
    }
}

pub fn count_dyck(kind: WalkClass, weights: &DyckWeights, max_n: usize) -> Result<CountTable> {
    let (w, d) = scale(&weights.as_array());
    let mass = match kind {
        WalkClass::Walk | WalkClass::Bridge => dyck_free(kind, &w, max_n),
        WalkClass::Meander | WalkClass::Excursion => dyck_meander(kind, &w, max_n),
    };
    Ok(finish(kind, weights.stepset(), mass, &d))
}

/// DP over `(min, max)` of the unconstrained reach set.
fn dyck_free(kind: WalkClass, w: &[BigUint], max_n: usize) -> Vec<BigUint> {
    // Shifted coordinates: index = value + max_n.
    let off = max_n as i64;
    let width = 2 * max_n + 1;
    let mut cur = Grid::new(width, 1);
    let mut next = Grid::new(width, 1);
    let i0 = cur.idx(0, max_n, max_n);
    cur.cells[i0] = BigUint::one();
    // (delta min, delta max) per step, in step order.
    let moves = [(-1i64, -1i64), (1, 1), (-1, 1)];
    let mut out = Vec::with_capacity(max_n + 1);
    for k in 0..=max_n {
        let k = k as i64;
        let mut total = BigUint::zero();
        for lo in (-k..=k).step_by(2) {
            for hi in (lo..=k).step_by(2) {
                let v = &cur.cells[cur.idx(0, (lo + off) as usize, (hi + off) as usize)];
                if v.is_zero() {
                    continue;
                }
                debug_assert_eq!(lo.rem_euclid(2), k.rem_euclid(2));
                let accept = match kind {
                    WalkClass::Walk => true,
                    _ => lo <= 0 && hi >= 0 && lo % 2 == 0,
                };
                if accept {
                    total += v;
                }
                if k as usize == max_n {
                    continue;
                }
                for (j, &(dl, dh)) in moves.iter().enumerate() {
                    if w[j].is_zero() {
                        continue;
                    }
                    let t = next.idx(0, (lo + dl + off) as usize, (hi + dh + off) as usize);
                    add_scaled(&mut next.cells[t], v, &w[j]);
                }
            }
        }
        out.push(total);
        std::mem::swap(&mut cur, &mut next);
        next.clear();
    }
    out
}

/// DP over `(min⁺, max⁺)` of the meander reach set.
fn dyck_meander(kind: WalkClass, w: &[BigUint], max_n: usize) -> Vec<BigUint> {
    let width = max_n + 2;
    let mut cur = Grid::new(width, 1);
    let mut next = Grid::new(width, 1);
    cur.cells[0] = BigUint::one();
    let mut out = Vec::with_capacity(max_n + 1);
    for k in 0..=max_n {
        let mut total = BigUint::zero();
        for m in (k % 2..=k).step_by(2) {
            for big_m in (m..=k).step_by(2) {
                let v = &cur.cells[cur.idx(0, m, big_m)];
                if v.is_zero() {
                    continue;
                }
                if kind == WalkClass::Meander || m == 0 {
                    total += v;
                }
                if k == max_n {
                    continue;
                }
                // Targets for {-1}, {1}, {-1,1}; None kills the walk.
                let targets: [Option<(usize, usize)>; 3] = if m > 0 {
                    [Some((m - 1, big_m - 1)), Some((m + 1, big_m + 1)), Some((m - 1, big_m + 1))]
                } else if big_m > 0 {
                    [Some((1, big_m - 1)), Some((1, big_m + 1)), Some((1, big_m + 1))]
                } else {
                    [None, Some((1, 1)), Some((1, 1))]
                };
                for (j, t) in targets.iter().enumerate() {
                    if let (Some((a, b)), false) = (t, w[j].is_zero()) {
                        let i = next.idx(0, *a, *b);
                        add_scaled(&mut next.cells[i], v, &w[j]);
                    }
                }
            }
        }
        out.push(total);
        std::mem::swap(&mut cur, &mut next);
        next.clear();
    }
    out
}

pub fn count_motzkin(kind: WalkClass, weights: &MotzkinWeights, max_n: usize) -> Result<CountTable> {
    let (w, d) = scale(&weights.0);
    let mass = match kind {
        WalkClass::Walk | WalkClass::Bridge => motzkin_free(kind, &w, max_n),
        WalkClass::Meander | WalkClass::Excursion => motzkin_meander(kind, &w, max_n),
    };
    Ok(finish(kind, weights.stepset(), mass, &d))
}

/// Steps whose heights include two adjacent integers turn the reach set
/// contiguous for good.
const MAKES_CONTIGUOUS: [bool; 7] = [false, false, false, true, false, true, true];
const MIN_DELTA: [i64; 7] = [-1, 0, 1, -1, -1, 0, -1];
const MAX_DELTA: [i64; 7] = [-1, 0, 1, 0, 1, 1, 1];

/// DP over `(type, min, max)`; type 0 is the step-2 progression, type 1 the
/// contiguous interval.
fn motzkin_free(kind: WalkClass, w: &[BigUint], max_n: usize) -> Vec<BigUint> {
    let off = max_n as i64;
    let width = 2 * max_n + 1;
    let mut cur = Grid::new(width, 2);
    let mut next = Grid::new(width, 2);
    let i0 = cur.idx(0, max_n, max_n);
    cur.cells[i0] = BigUint::one();
    let mut out = Vec::with_capacity(max_n + 1);
    for k in 0..=max_n {
        let k = k as i64;
        let mut total = BigUint::zero();
        for ty in 0..2 {
            for lo in -k..=k {
                for hi in lo..=k {
                    let v = &cur.cells[cur.idx(ty, (lo + off) as usize, (hi + off) as usize)];
                    if v.is_zero() {
                        continue;
                    }
                    let accept = match kind {
                        WalkClass::Walk => true,
                        _ => lo <= 0 && hi >= 0 && (ty == 1 || lo % 2 == 0),
                    };
                    if accept {
                        total += v;
                    }
                    if k as usize == max_n {
                        continue;
                    }
                    for j in 0..7 {
                        if w[j].is_zero() {
                            continue;
                        }
                        let nty = if ty == 1 || MAKES_CONTIGUOUS[j] { 1 } else { 0 };
                        let t = next.idx(nty, (lo + MIN_DELTA[j] + off) as usize, (hi + MAX_DELTA[j] + off) as usize);
                        add_scaled(&mut next.cells[t], v, &w[j]);
                    }
                }
            }
        }
        out.push(total);
        std::mem::swap(&mut cur, &mut next);
        next.clear();
    }
    out
}

/// One transition of the Motzkin meander DP: target type and either a
/// relative move or an absolute target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MotzkinMove {
    Dead,
    /// `(type, Δmin⁺, Δy)` relative to the source.
    Shift(u8, i64, i64),
    /// `(type, min⁺, y)` absolute.
    To(u8, i64, i64),
}

use MotzkinMove::{Dead, Shift, To};

/// Meander transitions indexed `[regime][source type - 1][step]`.
///
/// The state is `(type, min⁺, y)` with `y = max⁺` for type 1 and
/// `y = max⁺ - 1` for type 2. Regime 0 is `min⁺ > 0`, regime 1 is
/// `min⁺ = 0 < y`, regime 2 is `min⁺ = y = 0`.
pub const MOTZKIN_MEANDER_MOVES: [[[MotzkinMove; 7]; 2]; 3] = [
    [
        [Shift(1, -1, -1), Shift(1, 0, 0), Shift(1, 1, 1), Shift(2, -1, -1), Shift(1, -1, 1), Shift(2, 0, 0), Shift(2, -1, 0)],
        [Shift(2, -1, -1), Shift(2, 0, 0), Shift(2, 1, 1), Shift(2, -1, 0), Shift(2, -1, 1), Shift(2, 0, 1), Shift(2, -1, 1)],
    ],
    [
        [Shift(1, 1, -1), Shift(1, 0, 0), Shift(1, 1, 1), Shift(2, 0, -1), Shift(1, 1, 1), Shift(2, 0, 0), Shift(2, 0, 0)],
        [Shift(2, 0, -1), Shift(2, 0, 0), Shift(2, 1, 1), Shift(2, 0, 0), Shift(2, 0, 1), Shift(2, 0, 1), Shift(2, 0, 1)],
    ],
    [
        [Dead, To(1, 0, 0), To(1, 1, 1), To(1, 0, 0), To(1, 1, 1), To(2, 0, 0), To(2, 0, 0)],
        [To(1, 0, 0), To(2, 0, 0), To(2, 1, 1), To(2, 0, 0), To(2, 0, 1), To(2, 0, 1), To(2, 0, 1)],
    ],
];

/// Regime of a meander state `(min⁺, y)`.
pub fn motzkin_regime(minp: i64, y: i64) -> usize {
    match (minp > 0, y > 0) {
        (true, _) => 0,
        (false, true) => 1,
        (false, false) => 2,
    }
}

/// Applies one transition; `None` if the walk dies.
pub fn motzkin_meander_step(ty: u8, minp: i64, y: i64, step: usize) -> Option<(u8, i64, i64)> {
    match MOTZKIN_MEANDER_MOVES[motzkin_regime(minp, y)][ty as usize - 1][step] {
        Dead => None,
        Shift(t, dx, dy) => Some((t, minp + dx, y + dy)),
        To(t, x, yy) => Some((t, x, yy)),
    }
}

fn motzkin_meander(kind: WalkClass, w: &[BigUint], max_n: usize) -> Vec<BigUint> {
    let width = max_n + 2;
    let mut cur = Grid::new(width, 2);
    let mut next = Grid::new(width, 2);
    cur.cells[0] = BigUint::one();
    let mut out = Vec::with_capacity(max_n + 1);
    for k in 0..=max_n {
        let mut total = BigUint::zero();
        for ty in 1..=2u8 {
            for m in 0..=k {
                for y in 0..=k {
                    let v = &cur.cells[cur.idx(ty as usize - 1, m, y)];
                    if v.is_zero() {
                        continue;
                    }
                    if kind == WalkClass::Meander || m == 0 {
                        total += v;
                    }
                    if k == max_n {
                        continue;
                    }
                    for j in 0..7 {
                        if w[j].is_zero() {
                            continue;
                        }
                        if let Some((nt, nm, ny)) = motzkin_meander_step(ty, m as i64, y as i64, j) {
                            debug_assert!(nm >= 0 && ny >= 0);
                            let t = next.idx(nt as usize - 1, nm as usize, ny as usize);
                            add_scaled(&mut next.cells[t], v, &w[j]);
                        }
                    }
                }
            }
        }
        out.push(total);
        std::mem::swap(&mut cur, &mut next);
        next.clear();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio as q};
    use crate::walk::{step_reach_meander, ReachState};
    use proptest::prelude::*;

    fn ints(t: &CountTable) -> Vec<i64> {
        t.counts
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn dyck_unweighted_values() {
        let u = DyckWeights::unweighted();
        let m = count_dyck(WalkClass::Meander, &u, 4).unwrap();
        assert_eq!(ints(&m), vec![1, 2, 6, 16, 48]);
        let e = count_dyck(WalkClass::Excursion, &u, 8).unwrap();
        assert_eq!(ints(&e), vec![1, 0, 4, 0, 28, 0, 224, 0, 1888]);
        let b = count_dyck(WalkClass::Bridge, &u, 8).unwrap();
        assert_eq!(ints(&b), vec![1, 0, 7, 0, 63, 0, 583, 0, 5407]);
        let w = count_dyck(WalkClass::Walk, &u, 10).unwrap();
        assert_eq!(ints(&w), (0..=10).map(|n| 3i64.pow(n)).collect::<Vec<_>>());
    }

    #[test]
    fn motzkin_small_values() {
        let u = MotzkinWeights::unweighted();
        let w = count_motzkin(WalkClass::Walk, &u, 6).unwrap();
        assert_eq!(ints(&w), (0..=6).map(|n| 7i64.pow(n)).collect::<Vec<_>>());
        assert_eq!(count_motzkin(WalkClass::Meander, &u, 1).unwrap().counts[1], int(6));
        assert_eq!(count_motzkin(WalkClass::Excursion, &u, 1).unwrap().counts[1], int(4));
        assert_eq!(count_motzkin(WalkClass::Bridge, &u, 1).unwrap().counts[1], int(4));
    }

    #[test]
    fn ratio_examples() {
        let b = count_dyck(WalkClass::Bridge, &DyckWeights::unweighted(), 4).unwrap();
        assert_eq!(ratio(&b, 4).unwrap(), q(63, 81));
        assert_eq!(ratio(&b, 0).unwrap(), int(1));
        assert_eq!(ratio(&b, 5), Err(Error::OutOfRange { index: 5, max: 4 }));
    }

    #[test]
    fn probability_weights_give_unit_walk_mass() {
        let w = DyckWeights::new(q(1, 3), q(1, 2), q(1, 6)).unwrap();
        let t = count_dyck(WalkClass::Walk, &w, 12).unwrap();
        assert!(t.counts.iter().all(|c| c.is_one()));
        let mw = MotzkinWeights::new(vec![q(1, 7), q(1, 14), q(1, 14), q(1, 7), q(2, 7), q(1, 7), q(1, 7)]).unwrap();
        let t = count_motzkin(WalkClass::Walk, &mw, 8).unwrap();
        assert!(t.counts.iter().all(|c| c.is_one()));
    }

    #[test]
    fn zero_weight_drops_the_step() {
        let w = DyckWeights::new(q(1, 2), q(1, 2), q(0, 1)).unwrap();
        let t = count_dyck(WalkClass::Excursion, &w, 4).unwrap();
        assert_eq!(t.stepset.len(), 2);
        // Classical Dyck paths of length 4: 2 of them, each of weight 1/16.
        assert_eq!(t.counts[4], q(2, 16));
        assert!(DyckWeights::new(q(0, 1), q(0, 1), q(0, 1)).is_err());
        assert!(DyckWeights::new(q(-1, 2), q(1, 2), q(1, 1)).is_err());
        assert!(MotzkinWeights::new(vec![q(1, 1); 6]).is_err());
    }

    /// Sums the Fig.-style transition polynomials: for each regime and source
    /// type, collects `coefficient[target][(dx, dy)]` over the seven steps.
    fn aggregate(regime: usize, src: u8) -> std::collections::BTreeMap<(u8, i64, i64, bool), u32> {
        let mut acc = std::collections::BTreeMap::new();
        for mv in MOTZKIN_MEANDER_MOVES[regime][src as usize - 1] {
            let key = match mv {
                Dead => continue,
                Shift(t, dx, dy) => (t, dx, dy, false),
                To(t, x, y) => (t, x, y, true),
            };
            *acc.entry(key).or_insert(0) += 1;
        }
        acc
    }

    #[test]
    fn meander_tables_sum_to_the_transfer_matrices() {
        use std::collections::BTreeMap;
        let m = |v: &[((u8, i64, i64, bool), u32)]| v.iter().cloned().collect::<BTreeMap<_, _>>();
        // Regime A: x^-1 y^-1 + 1 + xy + x^-1 y into type 1; x^-1 y^-1 + 1 + x^-1 into type 2.
        assert_eq!(
            aggregate(0, 1),
            m(&[
                ((1, -1, -1, false), 1),
                ((1, 0, 0, false), 1),
                ((1, 1, 1, false), 1),
                ((1, -1, 1, false), 1),
                ((2, -1, -1, false), 1),
                ((2, 0, 0, false), 1),
                ((2, -1, 0, false), 1),
            ])
        );
        // x^-1 y^-1 + 1 + xy + x^-1 + y + 2 x^-1 y.
        assert_eq!(
            aggregate(0, 2),
            m(&[
                ((2, -1, -1, false), 1),
                ((2, 0, 0, false), 1),
                ((2, 1, 1, false), 1),
                ((2, -1, 0, false), 1),
                ((2, 0, 1, false), 1),
                ((2, -1, 1, false), 2),
            ])
        );
        // Regime B: x y^-1 + 1 + 2xy into type 1; y^-1 + 2 into type 2.
        assert_eq!(
            aggregate(1, 1),
            m(&[
                ((1, 1, -1, false), 1),
                ((1, 0, 0, false), 1),
                ((1, 1, 1, false), 2),
                ((2, 0, -1, false), 1),
                ((2, 0, 0, false), 2),
            ])
        );
        // y^-1 + 2 + xy + 3y.
        assert_eq!(
            aggregate(1, 2),
            m(&[((2, 0, -1, false), 1), ((2, 0, 0, false), 2), ((2, 1, 1, false), 1), ((2, 0, 1, false), 3)])
        );
        // Regime C: 2 + 2xy into type 1, 2 into type 2; from type 2: 1 into type 1, xy + 2 + 3y.
        assert_eq!(
            aggregate(2, 1),
            m(&[((1, 0, 0, true), 2), ((1, 1, 1, true), 2), ((2, 0, 0, true), 2)])
        );
        assert_eq!(
            aggregate(2, 2),
            m(&[((1, 0, 0, true), 1), ((2, 1, 1, true), 1), ((2, 0, 0, true), 2), ((2, 0, 1, true), 3)])
        );
    }

    fn expand(ty: u8, minp: i64, y: i64) -> Vec<i64> {
        if ty == 1 {
            (minp..=y).step_by(2).collect()
        } else {
            (minp..=y + 1).collect()
        }
    }

    #[test]
    fn meander_moves_agree_with_explicit_reach() {
        let steps = WeightedStepSet::motzkin_steps();
        let mut states = vec![];
        for m in 0..6i64 {
            for big in m..8 {
                if (big - m) % 2 == 0 {
                    states.push((1u8, m, big));
                }
                if big > m {
                    states.push((2u8, m, big - 1));
                }
            }
        }
        for (ty, m, y) in states {
            let reach = ReachState::from_points(expand(ty, m, y));
            for (j, s) in steps.iter().enumerate() {
                let explicit = step_reach_meander(&reach, s);
                match motzkin_meander_step(ty, m, y, j) {
                    None => assert!(explicit.dead, "state {:?} step {s}", (ty, m, y)),
                    Some((t, nm, ny)) => {
                        assert_eq!(explicit.points, expand(t, nm, ny), "state {:?} step {s}", (ty, m, y))
                    }
                }
            }
        }
    }

    fn arb_dyck_weights() -> impl Strategy<Value = DyckWeights> {
        (1i64..20, 1i64..20, 0i64..20, 1i64..10, 1i64..10, 1i64..10)
            .prop_map(|(a, b, c, x, y, z)| DyckWeights::new(q(a, x), q(b, y), q(c, z)).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(8))]

        #[test]
        fn dyck_excursions_are_symmetric(w in arb_dyck_weights()) {
            let a = count_dyck(WalkClass::Excursion, &w, 30).unwrap();
            let b = count_dyck(WalkClass::Excursion, &w.swapped(), 30).unwrap();
            prop_assert_eq!(a.counts, b.counts);
        }

        #[test]
        fn class_inclusions_and_parity(w in arb_dyck_weights()) {
            let n = 16;
            let t = |k| count_dyck(k, &w, n).unwrap().counts;
            let (wk, br, me, ex) = (t(WalkClass::Walk), t(WalkClass::Bridge), t(WalkClass::Meander), t(WalkClass::Excursion));
            for i in 0..=n {
                prop_assert!(ex[i] <= me[i] && ex[i] <= br[i] && br[i] <= wk[i] && me[i] <= wk[i]);
                if i % 2 == 1 {
                    prop_assert!(br[i].is_zero() && ex[i].is_zero());
                }
            }
        }

        #[test]
        fn motzkin_class_inclusions(ws in prop::collection::vec(0i64..5, 7)) {
            prop_assume!(ws.iter().any(|&x| x > 0));
            let w = MotzkinWeights::new(ws.into_iter().map(int).collect()).unwrap();
            let n = 10;
            let t = |k| count_motzkin(k, &w, n).unwrap().counts;
            let (wk, br, me, ex) = (t(WalkClass::Walk), t(WalkClass::Bridge), t(WalkClass::Meander), t(WalkClass::Excursion));
            for i in 0..=n {
                prop_assert!(ex[i] <= me[i] && ex[i] <= br[i] && br[i] <= wk[i] && me[i] <= wk[i]);
            }
        }
    }
}
