//! Truncated power series with exact rational coefficients, and the
//! closed-form generating functions of Dyck and Motzkin N-walk classes.
//!
//! A [`Series`] knows its coefficients exactly for exponents below `prec`
//! (absolute precision). Every operation derives the precision of its result
//! from its operands:
//!
//! | operation | result precision |
//! |-----------|------------------|
//! | `a ± b`   | `min(a.prec, b.prec)` |
//! | `a · b`   | `min(a.val + b.prec, b.val + a.prec)` |
//! | `a / b`   | `a.val - b.val + min(a.prec - a.val, b.prec - b.val)` |
//! | `√a`      | `a.val / 2 + (a.prec - a.val)` |
//!
//! Negative valuations are allowed for intermediates. The public generating
//! functions reject them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::DyckWeights;
use crate::rational::{self, int, serde_vec};

pub const DEFAULT_ORDER: usize = 64;

/// Extra terms carried internally so that divisions by powers of `t` do not
/// eat into the requested order.
const MARGIN: i64 = 4;

/// `Σ coeffs[i] t^(valuation + i) + O(t^prec)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Series {
    valuation: i64,
    #[serde(with = "serde_vec")]
    coeffs: Vec<BigRational>,
    prec: i64,
}

impl Series {
    /// Normalizes: drops leading zeros into the valuation and terms at or
    /// beyond `prec`. A series with no known nonzero term has
    /// `valuation == prec`.
    pub fn new(valuation: i64, mut coeffs: Vec<BigRational>, prec: i64) -> Self {
        coeffs.truncate((prec - valuation).max(0) as usize);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Series { valuation: prec, coeffs: Vec::new(), prec },
            Some(k) => {
                coeffs.drain(..k);
                while coeffs.last().is_some_and(Zero::is_zero) {
                    coeffs.pop();
                }
                Series { valuation: valuation + k as i64, coeffs, prec }
            }
        }
    }

    pub fn from_poly(coeffs: Vec<BigRational>, prec: i64) -> Self {
        Self::new(0, coeffs, prec)
    }

    pub fn from_ints(coeffs: &[i64], prec: i64) -> Self {
        Self::new(0, coeffs.iter().map(|&c| int(c)).collect(), prec)
    }

    pub fn constant(c: BigRational, prec: i64) -> Self {
        Self::new(0, vec![c], prec)
    }

    pub fn one(prec: i64) -> Self {
        Self::constant(BigRational::one(), prec)
    }

    /// `c · t^k`.
    pub fn monomial(c: BigRational, k: i64, prec: i64) -> Self {
        Self::new(k, vec![c], prec)
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^k`; `None` when `k` is at or beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<BigRational> {
        if k >= self.prec {
            return None;
        }
        let i = k - self.valuation;
        if i < 0 || i as usize >= self.coeffs.len() {
            return Some(BigRational::zero());
        }
        Some(self.coeffs[i as usize].clone())
    }

    /// Coefficients of `t^0 .. t^(prec-1)`.
    pub fn coefficients(&self) -> Vec<BigRational> {
        (0..self.prec.max(0)).map(|k| self.coeff(k).expect("below prec")).collect()
    }

    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(self.valuation, self.coeffs.clone(), prec.min(self.prec))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.valuation, self.coeffs.iter().map(|x| x * c).collect(), self.prec)
    }

    /// Multiplies by `t^k`; `k` may be negative.
    pub fn shift(&self, k: i64) -> Self {
        Series { valuation: self.valuation + k, coeffs: self.coeffs.clone(), prec: self.prec + k }
    }

    fn dense(&self, from: i64, to: i64) -> Vec<BigRational> {
        (from..to).map(|k| self.coeff(k).unwrap_or_default()).collect()
    }

    pub fn add(&self, other: &Series) -> Series {
        let prec = self.prec.min(other.prec);
        let val = self.valuation.min(other.valuation).min(prec);
        let a = self.dense(val, prec);
        let b = other.dense(val, prec);
        Series::new(val, a.into_iter().zip(b).map(|(x, y)| x + y).collect(), prec)
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        self.scale(&int(-1))
    }

    pub fn mul(&self, other: &Series) -> Series {
        let prec = (self.valuation + other.prec).min(other.valuation + self.prec);
        let val = self.valuation + other.valuation;
        let len = (prec - val).max(0) as usize;
        let mut out = vec![BigRational::zero(); len];
        for (i, x) in self.coeffs.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        Series::new(val, out, prec)
    }

    pub fn div(&self, other: &Series) -> Result<Series> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let rel = (self.prec - self.valuation).min(other.prec - other.valuation);
        let val = self.valuation - other.valuation;
        let len = rel.max(0) as usize;
        let b0 = &other.coeffs[0];
        let a = self.dense(self.valuation, self.valuation + rel);
        let b = other.dense(other.valuation, other.valuation + rel);
        let mut q: Vec<BigRational> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = a[k].clone();
            for i in 1..=k {
                if !b[i].is_zero() {
                    acc -= &b[i] * &q[k - i];
                }
            }
            q.push(acc / b0);
        }
        Ok(Series::new(val, q, val + rel))
    }

    pub fn sqrt(&self) -> Result<Series> {
        if self.is_zero() {
            return Err(Error::NotASquare("series is zero to the known precision".into()));
        }
        if self.valuation % 2 != 0 {
            return Err(Error::NotASquare(format!("odd valuation {}", self.valuation)));
        }
        let s0 = rational_sqrt(&self.coeffs[0])
            .ok_or_else(|| Error::NotASquare(format!("leading coefficient {}", self.coeffs[0])))?;
        let rel = self.prec - self.valuation;
        let len = rel.max(0) as usize;
        let a = self.dense(self.valuation, self.prec);
        let two_s0 = &s0 * int(2);
        let mut s = Vec::with_capacity(len);
        s.push(s0);
        for k in 1..len {
            let mut acc = a[k].clone();
            for i in 1..k {
                acc -= &s[i] * &s[k - i];
            }
            s.push(acc / &two_s0);
        }
        let val = self.valuation / 2;
        Ok(Series::new(val, s, val + rel))
    }

    /// Final check for generating functions: valuation ≥ 0 and at least
    /// `order + 1` known coefficients, truncated to exactly that.
    pub fn into_gf(self, order: usize) -> Result<Series> {
        if !self.is_zero() && self.valuation < 0 {
            return Err(Error::NegativeValuation(self.valuation));
        }
        let want = order as i64 + 1;
        assert!(self.prec >= want, "internal precision margin too small: {} < {want}", self.prec);
        Ok(self.truncate(want))
    }
}

/// Positive rational square root, if it exists.
fn rational_sqrt(c: &BigRational) -> Option<BigRational> {
    if !c.is_positive() {
        return None;
    }
    let root = |x: &BigInt| {
        let r = x.sqrt();
        (&r * &r == *x).then_some(r)
    };
    Some(BigRational::new(root(c.numer())?, root(c.denom())?))
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match self.valuation + i as i64 {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                k => write!(f, "({c})*t^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.prec)
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        Series::add(self, rhs)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        Series::sub(self, rhs)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        Series::mul(self, rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(self)
    }
}

pub fn series_add(a: &Series, b: &Series) -> Series {
    a.add(b)
}

pub fn series_mul(a: &Series, b: &Series) -> Series {
    a.mul(b)
}

pub fn series_div(a: &Series, b: &Series) -> Result<Series> {
    a.div(b)
}

pub fn series_sqrt(a: &Series) -> Result<Series> {
    a.sqrt()
}

fn work_prec(order: usize) -> i64 {
    order as i64 + 1 + MARGIN
}

fn require_positive(w: &DyckWeights) -> Result<()> {
    if w.as_array().iter().all(Signed::is_positive) {
        Ok(())
    } else {
        Err(Error::InvalidWeights("closed forms need all three Dyck weights > 0".into()))
    }
}

/// `(1 - √(1 - 4·c·t²)) / (2·d·t)`, the small root shared by `Y` and `X`.
fn kernel_root(c: &BigRational, d: &BigRational, prec: i64) -> Result<Series> {
    let disc = Series::new(0, vec![int(1), int(0), -(c * int(4))], prec);
    let num = &Series::one(prec) - &disc.sqrt()?;
    num.div(&Series::monomial(d * int(2), 1, prec))
}

/// `Y(t)` at the given weights.
pub fn dyck_y(w: &DyckWeights, prec: i64) -> Result<Series> {
    let up_both = &w.up + &w.both;
    kernel_root(&(&w.down * &up_both), &up_both, prec)
}

/// `X(1, t)` at the given weights.
pub fn dyck_x1(w: &DyckWeights, prec: i64) -> Result<Series> {
    let down_both = &w.down + &w.both;
    kernel_root(&(&w.up * &down_both), &w.up, prec)
}

/// `1 / (1 - c·t)`.
pub fn geometric(c: &BigRational, prec: i64) -> Result<Series> {
    Series::one(prec).div(&Series::from_poly(vec![int(1), -c.clone()], prec))
}

/// Generating function of all weighted N-walks, `1 / (1 - (Σp)·t)`.
pub fn gf_walks(total_weight: &BigRational, order: usize) -> Result<Series> {
    geometric(total_weight, work_prec(order))?.into_gf(order)
}

/// Dyck N-meanders, the meander closed form evaluated at `x = y = 1`.
pub fn gf_dyck_meander(w: &DyckWeights, order: usize) -> Result<Series> {
    require_positive(w)?;
    let prec = work_prec(order);
    let x = dyck_x1(w, prec)?;
    let y = dyck_y(w, prec)?;
    let one = Series::one(prec);
    let first = (&one - &x).div(&(&one - &(&x * &x)))?;
    let second = &(&(&one - &y) - &(&x * &y)) + &x;
    let total = &(&w.down + &w.up) + &w.both;
    let walks = geometric(&total, prec)?;
    (&(&first * &second) * &walks).into_gf(order)
}

/// Dyck N-excursions: `X/(1-X²) · (1-XY) / ((p₋₁+p₋₁,₁)t)` with `X = X(1,t)`.
pub fn gf_dyck_excursion(w: &DyckWeights, order: usize) -> Result<Series> {
    require_positive(w)?;
    let prec = work_prec(order);
    let x = dyck_x1(w, prec)?;
    let y = dyck_y(w, prec)?;
    let one = Series::one(prec);
    let first = x.div(&(&one - &(&x * &x)))?;
    let second = (&one - &(&x * &y)).div(&Series::monomial(&w.down + &w.both, 1, prec))?;
    (&first * &second).into_gf(order)
}

fn sqrt_1_minus_8t2(prec: i64) -> Result<Series> {
    Series::from_ints(&[1, 0, -8], prec).sqrt()
}

/// Unweighted Dyck N-meanders, `-(1 - 4t - √(1-8t²)) / (4t(1-3t))`.
pub fn gf_dyck_meander_unweighted(order: usize) -> Result<Series> {
    let prec = work_prec(order);
    let num = (&Series::from_ints(&[1, -4], prec) - &sqrt_1_minus_8t2(prec)?).neg();
    num.div(&Series::from_ints(&[0, 4, -12], prec))?.into_gf(order)
}

/// Unweighted Dyck N-excursions,
/// `(1 - 8t² - (1 - 12t²)√(1-8t²)) / (8t²(1 - 9t²))`.
pub fn gf_dyck_excursion_unweighted(order: usize) -> Result<Series> {
    let prec = work_prec(order);
    let s = sqrt_1_minus_8t2(prec)?;
    let num = &Series::from_ints(&[1, 0, -8], prec) - &(&Series::from_ints(&[1, 0, -12], prec) * &s);
    num.div(&Series::from_ints(&[0, 0, 8, 0, -72], prec))?.into_gf(order)
}

/// Unweighted Dyck N-bridges, `(1 - 6t²) / (√(1-8t²)(1 - 9t²))`.
pub fn gf_dyck_bridge_unweighted(order: usize) -> Result<Series> {
    let prec = work_prec(order);
    let den = &sqrt_1_minus_8t2(prec)? * &Series::from_ints(&[1, 0, -9], prec);
    Series::from_ints(&[1, 0, -6], prec).div(&den)?.into_gf(order)
}

/// Unweighted Motzkin N-meanders,
/// `(10t - 1 + √((1+2t)(1-6t))) / (8t(1 - 7t))`.
pub fn gf_motzkin_meander_unweighted(order: usize) -> Result<Series> {
    let prec = work_prec(order);
    let radicand = &Series::from_ints(&[1, 2], prec) * &Series::from_ints(&[1, -6], prec);
    let num = &Series::from_ints(&[-1, 10], prec) + &radicand.sqrt()?;
    if num.coeff(0) != Some(BigRational::zero()) {
        return Err(Error::NegativeValuation(-1));
    }
    num.div(&Series::from_ints(&[0, 8, -56], prec))?.into_gf(order)
}

/// Integer Catalan-type coefficients `Cat_k · a^k` for `k = 0..=n`.
fn catalan_scaled(a: &BigInt, n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigInt::one());
    for k in 1..=n {
        let prev = &out[k - 1];
        let kk = BigInt::from(k);
        // Cat_k = Cat_{k-1} · 2(2k-1)/(k+1); the division is exact.
        let next = prev * a * (BigInt::from(2) * (BigInt::from(2) * &kk - 1)) / (kk + 1);
        out.push(next);
    }
    out
}

/// Weighted Dyck N-excursion counts at even lengths `0, 2, ..., 2·half_max`.
///
/// Equivalent to the even coefficients of [`gf_dyck_excursion`], but the
/// excursion generating function is rewritten in `u = t²` through the two
/// Catalan series `C(a·u)` and `C(b·u)` so that the whole computation costs a
/// single `O(n²)` integer convolution. Zero weights are allowed.
pub fn dyck_excursion_even_counts(w: &DyckWeights, half_max: usize) -> Result<Vec<BigRational>> {
    let (scaled, den) = rational::common_denominator(w.as_array().iter());
    let [dm, du, db]: [BigInt; 3] = scaled.try_into().expect("three weights");
    let n = half_max;
    let q = &dm + &db;
    let scaled_counts: Vec<BigInt> = if q.is_zero() {
        // Only up-steps: the empty walk is the only excursion.
        (0..=n).map(|k| if k == 0 { BigInt::one() } else { BigInt::zero() }).collect()
    } else {
        let a = &du * &q;
        let b = &dm * (&du + &db);
        let k1 = &dm * &q;
        let e = catalan_scaled(&b, n);
        if a.is_zero() {
            // E = (1 - k1·u·e) / (1 - q²u).
            let q2 = &q * &q;
            let mut out = Vec::with_capacity(n + 1);
            let mut prev = BigInt::zero();
            for k in 0..=n {
                let num = if k == 0 { BigInt::one() } else { -(&k1 * &e[k - 1]) };
                prev = num + &q2 * &prev;
                out.push(prev.clone());
            }
            out
        } else {
            let c = catalan_scaled(&a, n);
            // c_i / a for i ≥ 1, exact.
            let c_over_a: Vec<BigInt> = c.iter().skip(1).map(|x| x / &a).collect();
            // T = (c·e - e) / a and S = c·e.
            let t_ser: Vec<BigInt> = (0..=n)
                .into_par_iter()
                .map(|k| (1..=k).map(|i| &c_over_a[i - 1] * &e[k - i]).sum())
                .collect();
            let s_ser: Vec<BigInt> = (0..=n).map(|k| &e[k] + &a * &t_ser[k]).collect();
            let n1: Vec<BigInt> = (0..=n).map(|k| &c[k] - &k1 * &t_ser[k]).collect();
            let alpha = &du + &q;
            let alpha_a = &alpha * &a;
            let nm: Vec<BigInt> = (0..=n)
                .map(|k| {
                    let (u_n1, u_s) = if k == 0 {
                        (BigInt::zero(), BigInt::zero())
                    } else {
                        (n1[k - 1].clone(), s_ser[k - 1].clone())
                    };
                    let c_minus_one = if k == 0 { &c[0] - 1 } else { c[k].clone() };
                    &alpha_a * u_n1 - &q * &n1[k] + &q * c_minus_one - &q * &k1 * (&t_ser[k] - u_s)
                })
                .collect();
            // E = du·NM / (-q·du + α²·a·u).
            let beta = -(&q * &du);
            let gamma = &alpha * &alpha * &a;
            let mut out = Vec::with_capacity(n + 1);
            let mut prev = BigInt::zero();
            for nm_k in &nm {
                let (y, r) = (&du * nm_k - &gamma * &prev).div_rem(&beta);
                debug_assert!(r.is_zero(), "excursion recurrence left a remainder");
                prev = y;
                out.push(prev.clone());
            }
            out
        }
    };
    let den2 = &den * &den;
    let mut scale = BigInt::one();
    Ok(scaled_counts
        .into_iter()
        .map(|v| {
            let r = BigRational::new(v, scale.clone());
            scale *= &den2;
            r
        })
        .collect())
}

/// Probability that a length-`2n` walk is an N-excursion, for weights that
/// sum to one, as an exact rational.
pub fn dyck_excursion_probability_even(w: &DyckWeights, half_len: usize) -> Result<BigRational> {
    let total = &(&w.down + &w.up) + &w.both;
    if !total.is_one() {
        return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
    }
    let counts = dyck_excursion_even_counts(w, half_len)?;
    Ok(counts[half_len].clone())
}
