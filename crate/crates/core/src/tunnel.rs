//! Encapsulation/decapsulation path feasibility and the text formats of the
//! command-line front-end.
//!
//! A node that can encapsulate contributes the N-step `{1}`, one that can
//! decapsulate `{-1}`, one that can do either `{-1,1}`, and a passive node
//! `{0}`. A path is feasible iff its N-walk is an N-excursion: some choice
//! of operations never removes a header that is not there and ends with the
//! packet as dispatched.
//!
//! Step-set grammar:
//!
//! ```text
//! stepset  ::= keyword | entry (";" entry)* [";"]
//! keyword  ::= "dyck" | "motzkin" | "default"
//! entry    ::= nstep [":" rational]
//! nstep    ::= "{" int ("," int)* "}"
//! rational ::= int ["/" int]
//! ```
//!
//! Whitespace is ignored around tokens. A missing weight is 1.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::asym::{dyck_excursion_probability_regime, RegimeLabel};
use crate::error::{Error, Result};
use crate::exact::{count_motzkin, DyckWeights, MotzkinWeights};
use crate::rational::{parse_rational, to_f64};
use crate::series::dyck_excursion_even_counts;
use crate::walk::{Family, NStep, NWalk, WalkClass, WeightedStepSet};

/// Parses the step-set DSL; `default` names the unweighted set of `family`.
pub fn parse_stepset(text: &str, family: Family) -> Result<WeightedStepSet> {
    match text.trim() {
        "dyck" => return Ok(WeightedStepSet::dyck()),
        "motzkin" => return Ok(WeightedStepSet::motzkin()),
        "default" => {
            return match family {
                Family::Dyck => Ok(WeightedStepSet::dyck()),
                Family::Motzkin => Ok(WeightedStepSet::motzkin()),
                Family::General => Err(Error::Parse("`default` needs the dyck or motzkin family".into())),
            }
        }
        _ => {}
    }
    let mut entries = Vec::new();
    for part in text.split(';').map(str::trim) {
        if part.is_empty() {
            continue;
        }
        let (step, weight) = match part.rsplit_once(':') {
            Some((s, w)) => (s, parse_rational(w)?),
            None => (part, BigRational::one()),
        };
        entries.push((step.trim().parse::<NStep>()?, weight));
    }
    if entries.is_empty() {
        return Err(Error::Parse(format!("empty step set {text:?}")));
    }
    WeightedStepSet::new(entries)
}

/// What a node on the path can do to the header stack.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeCapability {
    Encap,
    Decap,
    Both,
    Passive,
    AnyOf(Vec<i64>),
}

impl NodeCapability {
    pub fn nstep(&self) -> Result<NStep> {
        match self {
            NodeCapability::Encap => Ok(NStep::singleton(1)),
            NodeCapability::Decap => Ok(NStep::singleton(-1)),
            NodeCapability::Both => NStep::new(vec![-1, 1]),
            NodeCapability::Passive => Ok(NStep::singleton(0)),
            NodeCapability::AnyOf(hs) => NStep::new(hs.clone()),
        }
    }
}

impl fmt::Display for NodeCapability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeCapability::Encap => f.write_str("encap"),
            NodeCapability::Decap => f.write_str("decap"),
            NodeCapability::Both => f.write_str("both"),
            NodeCapability::Passive => f.write_str("passive"),
            NodeCapability::AnyOf(hs) => {
                let inner: Vec<String> = hs.iter().map(i64::to_string).collect();
                write!(f, "any-of({})", inner.join(","))
            }
        }
    }
}

impl FromStr for NodeCapability {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let cap = match t {
            "encap" => NodeCapability::Encap,
            "decap" => NodeCapability::Decap,
            "both" => NodeCapability::Both,
            "passive" => NodeCapability::Passive,
            _ => {
                let inner = t
                    .strip_prefix("any-of(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("unknown capability {t:?}")))?;
                let hs = inner
                    .split(',')
                    .map(|h| h.trim().parse::<i64>().map_err(|e| Error::Parse(format!("height {h:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                NodeCapability::AnyOf(hs)
            }
        };
        cap.nstep()?;
        Ok(cap)
    }
}

/// Capabilities of the nodes between sender and receiver, in order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CapabilityPath(pub Vec<NodeCapability>);

impl CapabilityPath {
    pub fn nwalk(&self) -> Result<NWalk> {
        self.0.iter().map(NodeCapability::nstep).collect()
    }
}

impl FromStr for CapabilityPath {
    type Err = Error;

    /// Comma-separated capabilities; commas inside `any-of(...)` do not split.
    fn from_str(text: &str) -> Result<Self> {
        let mut out = Vec::new();
        let mut depth = 0usize;
        let mut start = 0;
        for (i, ch) in text.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth = depth.checked_sub(1).ok_or_else(|| Error::Parse(format!("unbalanced ')' in {text:?}")))?,
                ',' if depth == 0 => {
                    out.push(text[start..i].parse()?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::Parse(format!("unbalanced '(' in {text:?}")));
        }
        let last = text[start..].trim();
        if !last.is_empty() {
            out.push(last.parse()?);
        } else if !out.is_empty() {
            return Err(Error::Parse(format!("trailing comma in {text:?}")));
        }
        Ok(CapabilityPath(out))
    }
}

impl fmt::Display for CapabilityPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(NodeCapability::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// One height per node forming an excursion, when feasible.
    pub witness: Option<Vec<i64>>,
}

/// Decides feasibility with the meander reach sets and, when feasible,
/// traces a witness backwards from 0, picking the smallest ordinate that is
/// still reachable at each node.
pub fn path_feasible(path: &CapabilityPath) -> Result<Feasibility> {
    let w = path.nwalk()?;
    let seq = w.meander_sequence();
    let last = seq.last().expect("sequence holds the empty prefix");
    if last.dead || !last.contains(0) {
        return Ok(Feasibility { feasible: false, witness: None });
    }
    let mut y = 0i64;
    let mut witness = vec![0i64; w.len()];
    for i in (0..w.len()).rev() {
        let prev = &seq[i];
        let (h, py) = w.nsteps[i]
            .heights()
            .iter()
            .map(|&h| (h, y - h))
            .filter(|&(_, py)| prev.contains(py))
            .min_by_key(|&(_, py)| py)
            .expect("meander sets are closed under predecessors");
        witness[i] = h;
        y = py;
    }
    debug_assert_eq!(y, 0);
    Ok(Feasibility { feasible: true, witness: Some(witness) })
}

/// Whether `heights` is an excursion compatible with the path.
pub fn verify_witness(path: &CapabilityPath, heights: &[i64]) -> Result<bool> {
    let w = path.nwalk()?;
    if heights.len() != w.len() {
        return Ok(false);
    }
    let mut y = 0i64;
    for (s, &h) in w.iter().zip(heights) {
        if !s.contains(h) {
            return Ok(false);
        }
        y += h;
        if y < 0 {
            return Ok(false);
        }
    }
    Ok(y == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbabilityMode {
    Exact,
    Asym,
}

impl FromStr for ProbabilityMode {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        match text.trim() {
            "exact" => Ok(ProbabilityMode::Exact),
            "asym" => Ok(ProbabilityMode::Asym),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// Largest path length accepted in exact mode for `{encap, decap, both}`
/// distributions, possibly with `passive`.
pub const MAX_EXACT_DYCK: usize = 8000;
/// Largest path length accepted in exact mode for other Motzkin-type
/// distributions.
pub const MAX_EXACT_MOTZKIN: usize = 400;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityReport {
    pub mode: ProbabilityMode,
    pub n: usize,
    pub value: f64,
    /// Exact value as `num/den` in exact mode.
    pub exact: Option<String>,
    pub regime: Option<RegimeLabel>,
    pub note: String,
}

/// Parses `encap=1/3,decap=1/2,both=1/6`.
pub fn parse_distribution(text: &str) -> Result<Vec<(NodeCapability, BigRational)>> {
    let path: Vec<&str> = split_top_level(text);
    path.into_iter()
        .filter(|p| !p.trim().is_empty())
        .map(|part| {
            let (cap, w) = part
                .rsplit_once('=')
                .ok_or_else(|| Error::Parse(format!("expected capability=weight, got {part:?}")))?;
            Ok((cap.parse()?, parse_rational(w)?))
        })
        .collect()
}

fn split_top_level(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

/// Merged per-height-set weights; duplicates add up, zero weights drop out.
fn merge(dist: &[(NodeCapability, BigRational)]) -> Result<BTreeMap<Vec<i64>, BigRational>> {
    let mut merged: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
    for (cap, w) in dist {
        if w.is_negative() {
            return Err(Error::InvalidWeights(format!("weight of {cap} is negative")));
        }
        *merged.entry(cap.nstep()?.heights().to_vec()).or_insert_with(BigRational::zero) += w;
    }
    merged.retain(|_, w| !w.is_zero());
    let total: BigRational = merged.values().sum();
    if !total.is_one() {
        return Err(Error::InvalidWeights(format!("distribution sums to {total}, expected 1")));
    }
    Ok(merged)
}

/// Dyck weights `(down, up, both)` and passive weight, if every height set
/// is one of `{-1}`, `{1}`, `{-1,1}`, `{0}`.
fn dyck_with_passive(merged: &BTreeMap<Vec<i64>, BigRational>) -> Option<([BigRational; 3], BigRational)> {
    let mut w: [BigRational; 3] = Default::default();
    let mut p0 = BigRational::zero();
    for (hs, p) in merged {
        match hs.as_slice() {
            [-1] => w[0] = p.clone(),
            [1] => w[1] = p.clone(),
            [-1, 1] => w[2] = p.clone(),
            [0] => p0 = p.clone(),
            _ => return None,
        }
    }
    Some((w, p0))
}

/// Probability that a random path of `n` nodes, drawn i.i.d. from `dist`,
/// is feasible.
///
/// Exact mode handles `{encap, decap, both}` with optional `passive` through
/// the excursion counts of the non-passive subsequence, and other
/// capabilities within `{-1,0,1}` through the Motzkin DP. Asym mode covers
/// the first family only: with passive mass `p₀`, the non-passive part is
/// renormalized, the effective length is `(1 - p₀)n`, and the regime
/// estimate is halved because the effective length is even half the time.
pub fn feasibility_probability(n: usize, dist: &[(NodeCapability, BigRational)], mode: ProbabilityMode) -> Result<ProbabilityReport> {
    let merged = merge(dist)?;
    let dyck = dyck_with_passive(&merged);
    if n == 0 {
        return Ok(ProbabilityReport {
            mode,
            n,
            value: 1.0,
            exact: (mode == ProbabilityMode::Exact).then(|| "1".to_string()),
            regime: None,
            note: "the empty path is feasible".into(),
        });
    }
    match mode {
        ProbabilityMode::Exact => {
            let p = match &dyck {
                Some((w, p0)) => exact_dyck_passive(n, w, p0)?,
                None => exact_motzkin(n, &merged)?,
            };
            Ok(ProbabilityReport {
                mode,
                n,
                value: to_f64(&p),
                exact: Some(p.to_string()),
                regime: None,
                note: "exact excursion probability".into(),
            })
        }
        ProbabilityMode::Asym => {
            let Some((w, p0)) = dyck else {
                return Err(Error::Unsupported("asym mode needs capabilities among encap, decap, both, passive".into()));
            };
            let q = BigRational::one() - &p0;
            if q.is_zero() {
                return Ok(ProbabilityReport {
                    mode,
                    n,
                    value: 1.0,
                    exact: None,
                    regime: None,
                    note: "all nodes are passive".into(),
                });
            }
            let regime = dyck_excursion_probability_regime(&(&w[1] / &q), &(&w[0] / &q))?;
            let (value, note) = if p0.is_zero() {
                if n % 2 == 1 {
                    (0.0, "odd length: no excursion".to_string())
                } else {
                    (regime.estimate(n as f64 / 2.0).value(), "regime estimate at half the length".to_string())
                }
            } else {
                let eff = to_f64(&q) * n as f64;
                let est = regime.estimate(eff / 2.0).value() / 2.0;
                (est, format!("passive mass {p0}: effective length {eff}, parity factor 1/2"))
            };
            Ok(ProbabilityReport { mode, n, value, exact: None, regime: Some(regime.label), note })
        }
    }
}

fn exact_dyck_passive(n: usize, w: &[BigRational; 3], p0: &BigRational) -> Result<BigRational> {
    if n > MAX_EXACT_DYCK {
        return Err(Error::BudgetExceeded(format!("exact mode is limited to n <= {MAX_EXACT_DYCK}, got {n}")));
    }
    let q = BigRational::one() - p0;
    if q.is_zero() {
        return Ok(BigRational::one());
    }
    let dw = DyckWeights::new(&w[0] / &q, &w[1] / &q, &w[2] / &q)?;
    let even = dyck_excursion_even_counts(&dw, n / 2)?;
    if p0.is_zero() {
        return Ok(if n % 2 == 0 { even[n / 2].clone() } else { BigRational::zero() });
    }
    // The passive nodes are irrelevant; condition on the number k of others.
    let mut total = BigRational::zero();
    for (half, p) in even.iter().enumerate() {
        let k = 2 * half;
        let choose = BigRational::from_integer(binomial(BigInt::from(n), BigInt::from(k)));
        total += choose * num_traits::pow(q.clone(), k) * num_traits::pow(p0.clone(), n - k) * p;
    }
    Ok(total)
}

fn exact_motzkin(n: usize, merged: &BTreeMap<Vec<i64>, BigRational>) -> Result<BigRational> {
    let steps = WeightedStepSet::motzkin_steps();
    let mut ws = vec![BigRational::zero(); steps.len()];
    for (hs, p) in merged {
        let j = steps
            .iter()
            .position(|s| s.heights() == hs.as_slice())
            .ok_or_else(|| Error::Unsupported(format!("exact mode needs heights within {{-1,0,1}}, got {hs:?}")))?;
        ws[j] = p.clone();
    }
    if n > MAX_EXACT_MOTZKIN {
        return Err(Error::BudgetExceeded(format!("exact mode is limited to n <= {MAX_EXACT_MOTZKIN} here, got {n}")));
    }
    let table = count_motzkin(WalkClass::Excursion, &MotzkinWeights::new(ws)?, n)?;
    table.ratio(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::count_dyck;
    use crate::oracle::brute_classes;
    use crate::rational::ratio;
    use NodeCapability::*;

    fn path(text: &str) -> CapabilityPath {
        text.parse().unwrap()
    }

    #[test]
    fn stepset_dsl() {
        let s = parse_stepset("{-1}:1/3; {1}:1/3;{-1,1}:1/3", Family::General).unwrap();
        assert!(s.is_probability());
        assert_eq!(s.len(), 3);
        assert_eq!(parse_stepset("default", Family::Dyck).unwrap(), WeightedStepSet::dyck());
        assert_eq!(parse_stepset("default", Family::Motzkin).unwrap(), WeightedStepSet::motzkin());
        assert_eq!(parse_stepset("motzkin", Family::General).unwrap(), WeightedStepSet::motzkin());
        assert!(parse_stepset("default", Family::General).is_err());
        let u = parse_stepset("{0,3};{-2,1}", Family::General).unwrap();
        assert_eq!(u.total_weight(), ratio(2, 1));
        assert!(parse_stepset("", Family::General).is_err());
        assert!(parse_stepset("{1}:1/3;{1}:1/3", Family::General).is_err());
        assert!(parse_stepset("{1}:0", Family::General).is_err());
        assert!(parse_stepset("{a}", Family::General).is_err());
        assert!(parse_stepset("{1}:0.5", Family::General).is_err());
    }

    #[test]
    fn capability_parsing() {
        assert_eq!(path("encap,both,both,decap").0, vec![Encap, Both, Both, Decap]);
        assert_eq!(path("").0, vec![]);
        assert_eq!(path("any-of(0,1),passive").0, vec![AnyOf(vec![0, 1]), Passive]);
        assert_eq!(path("any-of(0,1),passive").to_string(), "any-of(0,1),passive");
        assert!("encap,".parse::<CapabilityPath>().is_err());
        assert!("any-of(1".parse::<CapabilityPath>().is_err());
        assert!("tunnel".parse::<CapabilityPath>().is_err());
        assert!("any-of()".parse::<CapabilityPath>().is_err());
    }

    #[test]
    fn feasibility_examples() {
        let f = path_feasible(&path("encap,both,both,decap")).unwrap();
        assert!(f.feasible);
        assert_eq!(f.witness, Some(vec![1, -1, 1, -1]));
        assert_eq!(path_feasible(&path("")).unwrap(), Feasibility { feasible: true, witness: Some(vec![]) });
        assert!(!path_feasible(&path("decap")).unwrap().feasible);
        assert!(!path_feasible(&path("encap,passive")).unwrap().feasible);
        let f = path_feasible(&path("both,any-of(-1,0),passive")).unwrap();
        assert_eq!(f.witness, Some(vec![1, -1, 0]));
    }

    #[test]
    fn feasibility_matches_the_oracle_exhaustively() {
        let caps = [Encap, Decap, Both, Passive];
        for n in 0..=7u32 {
            for idx in 0..4usize.pow(n) {
                let mut rest = idx;
                let p = CapabilityPath(
                    (0..n)
                        .map(|_| {
                            let c = caps[rest % 4].clone();
                            rest /= 4;
                            c
                        })
                        .collect(),
                );
                let f = path_feasible(&p).unwrap();
                assert_eq!(f.feasible, brute_classes(&p.nwalk().unwrap()).excursion, "{p}");
                if let Some(wit) = &f.witness {
                    assert!(verify_witness(&p, wit).unwrap(), "{p}");
                }
            }
        }
    }

    #[test]
    fn probabilities() {
        let uniform = parse_distribution("encap=1/3,decap=1/3,both=1/3").unwrap();
        let r = feasibility_probability(4, &uniform, ProbabilityMode::Exact).unwrap();
        assert_eq!(r.exact.as_deref(), Some("28/81"));
        assert_eq!(feasibility_probability(0, &uniform, ProbabilityMode::Exact).unwrap().value, 1.0);
        assert_eq!(feasibility_probability(0, &uniform, ProbabilityMode::Asym).unwrap().value, 1.0);

        let half = parse_distribution("encap=1/2,decap=1/2").unwrap();
        let r = feasibility_probability(1000, &half, ProbabilityMode::Asym).unwrap();
        assert_eq!(r.regime, Some(RegimeLabel::InverseSqrtCubed));
        assert!((r.value - 1.0 / (std::f64::consts::PI * 500f64.powi(3)).sqrt()).abs() < 1e-15);
        assert_eq!(feasibility_probability(999, &half, ProbabilityMode::Asym).unwrap().value, 0.0);

        let with_dup = parse_distribution("encap=1/6,encap=1/6,decap=1/3,both=1/3").unwrap();
        let a = feasibility_probability(6, &with_dup, ProbabilityMode::Exact).unwrap();
        let b = feasibility_probability(6, &uniform, ProbabilityMode::Exact).unwrap();
        assert_eq!(a.exact, b.exact);

        assert!(feasibility_probability(4, &parse_distribution("encap=1/2").unwrap(), ProbabilityMode::Exact).is_err());
        let odd = parse_distribution("any-of(-2,1)=1").unwrap();
        assert!(matches!(feasibility_probability(4, &odd, ProbabilityMode::Asym), Err(Error::Unsupported(_))));
        assert!(feasibility_probability(4, &odd, ProbabilityMode::Exact).is_err());
        assert!(feasibility_probability(MAX_EXACT_DYCK + 2, &uniform, ProbabilityMode::Exact).unwrap_err().is_budget());
    }

    #[test]
    fn passive_mixture_matches_the_motzkin_dp() {
        let dist = parse_distribution("encap=1/4,decap=1/4,both=1/4,passive=1/4").unwrap();
        let merged = merge(&dist).unwrap();
        for n in 0..=12 {
            let mixed = feasibility_probability(n, &dist, ProbabilityMode::Exact).unwrap();
            let direct = exact_motzkin(n, &merged).unwrap();
            assert_eq!(mixed.exact, Some(direct.to_string()), "n={n}");
        }
        let motz = parse_distribution("encap=1/4,any-of(-1,0)=1/2,passive=1/4").unwrap();
        let r = feasibility_probability(3, &motz, ProbabilityMode::Exact).unwrap();
        assert!(r.value > 0.0);
    }

    #[test]
    fn passive_asym_is_close_for_long_paths() {
        let dist = parse_distribution("encap=1/4,decap=1/4,both=1/4,passive=1/4").unwrap();
        let exact = feasibility_probability(600, &dist, ProbabilityMode::Exact).unwrap().value;
        let asym = feasibility_probability(600, &dist, ProbabilityMode::Asym).unwrap().value;
        assert!((exact - asym).abs() / exact < 0.05, "{exact} vs {asym}");
        let w = DyckWeights::new(ratio(1, 3), ratio(1, 3), ratio(1, 3)).unwrap();
        let t = count_dyck(WalkClass::Excursion, &w, 4).unwrap();
        assert_eq!(t.counts[4], ratio(28, 81));
    }
}
