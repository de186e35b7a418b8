//! Double-precision evaluation of the asymptotic formulas for unweighted
//! Dyck and Motzkin counts and for the Dyck excursion probability.

use std::f64::consts::PI;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{ratio, to_f64};
use crate::walk::{Family, WalkClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeLabel {
    /// The count is known in closed form (all N-walks).
    Exact,
    /// Leading exponential term plus one polynomially damped correction.
    TwoTerm,
    /// Excursion probability tends to a positive constant.
    ConstantLimit,
    /// Excursion probability decays like `n^(-1/2)`.
    InverseSqrt,
    /// Excursion probability decays like `n^(-3/2)`.
    InverseSqrtCubed,
    /// Excursion probability decays exponentially; no constant is reported.
    Vanishing,
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeLabel::Exact => "exact",
            RegimeLabel::TwoTerm => "two-term",
            RegimeLabel::ConstantLimit => "constant-limit",
            RegimeLabel::InverseSqrt => "inverse-sqrt",
            RegimeLabel::InverseSqrtCubed => "inverse-sqrt-cubed",
            RegimeLabel::Vanishing => "vanishing",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymEstimate {
    pub main_term: f64,
    pub correction_term: f64,
    pub regime_label: RegimeLabel,
    pub validity_note: String,
    /// Exponential decay base, set only for [`RegimeLabel::Vanishing`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay_base: Option<f64>,
}

impl AsymEstimate {
    pub fn value(&self) -> f64 {
        self.main_term + self.correction_term
    }

    fn two_term(main_term: f64, correction_term: f64, note: &str) -> Self {
        AsymEstimate {
            main_term,
            correction_term,
            regime_label: RegimeLabel::TwoTerm,
            validity_note: note.into(),
            decay_base: None,
        }
    }
}

/// Two-term estimate of the unweighted count of length-`n` N-walks of the
/// given class.
///
/// Parity factors `(1 ± (-1)^n)` are applied, so Dyck bridges and excursions
/// estimate to 0 at odd `n`.
pub fn asym_count(family: Family, kind: WalkClass, n: u32) -> Result<AsymEstimate> {
    if n == 0 {
        return Err(Error::Unsupported("asymptotic formulas need n >= 1".into()));
    }
    let nf = n as f64;
    let even = n % 2 == 0;
    let sign = if even { 1.0 } else { -1.0 };
    let sqrt_pi = PI.sqrt();
    let est = match (family, kind) {
        (Family::Dyck, WalkClass::Walk) => AsymEstimate {
            main_term: 3f64.powf(nf),
            correction_term: 0.0,
            regime_label: RegimeLabel::Exact,
            validity_note: "exact for every n".into(),
            decay_base: None,
        },
        (Family::Motzkin, WalkClass::Walk) => AsymEstimate {
            main_term: 7f64.powf(nf),
            correction_term: 0.0,
            regime_label: RegimeLabel::Exact,
            validity_note: "exact for every n".into(),
            decay_base: None,
        },
        (Family::Dyck, WalkClass::Bridge) => {
            let parity = (1.0 + sign) / 2.0;
            let main = parity * 3f64.powf(nf);
            let corr = -parity * 2.0 * 2f64.sqrt() / sqrt_pi * 8f64.powf(nf / 2.0) / nf.sqrt();
            AsymEstimate::two_term(main, corr, "even n only; zero at odd n")
        }
        (Family::Dyck, WalkClass::Meander) => {
            let c = 3.0 * 2f64.sqrt() * (1.0 + sign) + 4.0 * (1.0 - sign);
            let corr = c / sqrt_pi * 8f64.powf(nf / 2.0) / nf.powf(1.5);
            AsymEstimate::two_term(3f64.powf(nf) / 2.0, corr, "all n; correction constant depends on parity")
        }
        (Family::Dyck, WalkClass::Excursion) => {
            let parity = (1.0 + sign) / 2.0;
            let main = parity * 3f64.powf(nf) / 4.0;
            let corr = parity * 4.0 * 2f64.sqrt() * 8f64.powf(nf / 2.0) / (PI * nf.powi(3)).sqrt();
            AsymEstimate::two_term(main, corr, "even n only; zero at odd n")
        }
        (Family::Motzkin, WalkClass::Bridge) => {
            let corr = -(3.0 / PI).sqrt() * 6f64.powf(nf) / nf.sqrt();
            AsymEstimate::two_term(7f64.powf(nf), corr, "all n")
        }
        (Family::Motzkin, WalkClass::Meander) => {
            let corr = 3.0 * 3f64.sqrt() / (2.0 * sqrt_pi) * 6f64.powf(nf) / nf.powf(1.5);
            AsymEstimate::two_term(0.75 * 7f64.powf(nf), corr, "all n")
        }
        (Family::Motzkin, WalkClass::Excursion) => {
            let corr = -motzkin_gamma() * 6f64.powf(nf) / (PI * nf.powi(3)).sqrt();
            AsymEstimate::two_term(9.0 / 16.0 * 7f64.powf(nf), corr, "all n")
        }
        (Family::General, _) => {
            return Err(Error::Unsupported("asymptotics are only known for the Dyck and Motzkin families".into()))
        }
    };
    Ok(est)
}

/// Which of the four asymptotic regimes a Dyck weight pair falls into.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcursionRegime {
    /// Smaller of `p₁`, `p₋₁`.
    pub lo: f64,
    /// Larger of `p₁`, `p₋₁`.
    pub hi: f64,
    pub label: RegimeLabel,
}

impl ExcursionRegime {
    /// Estimate of the probability that a walk of length `2n` is an
    /// N-excursion.
    pub fn estimate(&self, n: f64) -> AsymEstimate {
        let (lo, hi) = (self.lo, self.hi);
        let note = "n is half the walk length; odd lengths have probability 0".to_string();
        let (main_term, decay_base) = match self.label {
            RegimeLabel::ConstantLimit => ((1.0 - 2.0 * lo) * (1.0 - 2.0 * hi) / ((1.0 - lo) * (1.0 - hi)), None),
            RegimeLabel::InverseSqrt => ((1.0 - 2.0 * lo) / ((1.0 - lo) * (PI * n).sqrt()), None),
            RegimeLabel::InverseSqrtCubed => (1.0 / (PI * n.powi(3)).sqrt(), None),
            _ => (0.0, Some(4.0 * hi * (1.0 - hi))),
        };
        AsymEstimate { main_term, correction_term: 0.0, regime_label: self.label, validity_note: note, decay_base }
    }
}

/// Classifies `(p₁, p₋₁)`; the remaining mass `1 - p₁ - p₋₁` sits on
/// `{-1,1}`.
///
/// The inputs are exact so that the boundary cases `1/2` are decided exactly.
/// The result does not depend on the order of the two arguments.
pub fn dyck_excursion_probability_regime(p1: &BigRational, pm1: &BigRational) -> Result<ExcursionRegime> {
    if !p1.is_positive() || !pm1.is_positive() || p1 + pm1 > BigRational::one() {
        return Err(Error::InvalidWeights(format!(
            "need p1 > 0, p-1 > 0 and p1 + p-1 <= 1, got p1 = {p1}, p-1 = {pm1}"
        )));
    }
    let (lo, hi) = if p1 <= pm1 { (p1, pm1) } else { (pm1, p1) };
    let half = ratio(1, 2);
    let label = if *hi < half {
        RegimeLabel::ConstantLimit
    } else if *hi == half && *lo < half {
        RegimeLabel::InverseSqrt
    } else if *hi == half {
        RegimeLabel::InverseSqrtCubed
    } else {
        RegimeLabel::Vanishing
    };
    debug_assert!(!(hi - lo).is_negative() && !lo.is_zero());
    Ok(ExcursionRegime { lo: to_f64(lo), hi: to_f64(hi), label })
}

/// The root near 0.6183 of `1024γ⁴ - 8019γ² + 2916`.
pub fn motzkin_gamma() -> f64 {
    let (small, _) = gamma_square_roots();
    let mut g = small.sqrt();
    // One Newton step on the quartic removes the rounding of the square root.
    let f = |g: f64| 1024.0 * g.powi(4) - 8019.0 * g * g + 2916.0;
    let df = |g: f64| 4096.0 * g.powi(3) - 16038.0 * g;
    g -= f(g) / df(g);
    g
}

/// Both roots `γ²` of `1024z² - 8019z + 2916`, smaller first.
pub fn gamma_square_roots() -> (f64, f64) {
    let (a, b, c) = (1024.0f64, -8019.0f64, 2916.0f64);
    let disc = (b * b - 4.0 * a * c).sqrt();
    // Stable pairing: compute the large root directly, the small one by Vieta.
    let big = (-b + disc) / (2.0 * a);
    (c / (a * big), big)
}

/// `1 - √(3/π)·(6/7)^n/√n`, the fraction of Motzkin N-walks that are
/// N-bridges.
pub fn motzkin_bridge_proportion(n: u32) -> f64 {
    let nf = n as f64;
    1.0 - (3.0 / PI).sqrt() * (6.0f64 / 7.0).powf(nf) / nf.sqrt()
}
