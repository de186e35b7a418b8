use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::walk::ReachState;

/// Eventually periodic description of a reach set relative to its min and max.
///
/// With `o = r - min` and `span = max - min`, the point `r` is reachable iff
/// `o ∈ A`, or `span - o ∈ C`, or `o ≥ max(A)`, `span - o ≥ max(C)` and
/// `(o - max(A) - 1) mod period ∈ B`. Valid only for `span ≥ max(A) + max(C)`,
/// with `max(∅) = 0`.
///
/// Canonical form, as produced by [`shape_of`] and [`joint_shape`]:
/// `0 ∈ A`; `A` and `C` are initial segments of the reachable offsets seen
/// from the min and from the max; `B` holds exactly the residues that occur;
/// a shape whose periodic range is gap-free carries `0 ∈ C`; the period fits
/// twice into the longest periodic range, or is 1. Among those, the
/// minimum of `(|A| + |C|, period, |A|)` wins.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShapeType {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub period: i64,
    pub c: Vec<i64>,
}

impl ShapeType {
    pub fn max_a(&self) -> i64 {
        self.a.last().copied().unwrap_or(0)
    }

    pub fn max_c(&self) -> i64 {
        self.c.last().copied().unwrap_or(0)
    }

    /// Whether the membership test is defined at this span.
    pub fn applies(&self, span: i64) -> bool {
        span >= self.max_a() + self.max_c()
    }

    /// Membership of the offset `o` (from the min) in a set of the given span.
    pub fn contains_offset(&self, o: i64, span: i64) -> bool {
        if o < 0 || o > span {
            return false;
        }
        let (ma, mc) = (self.max_a(), self.max_c());
        self.a.binary_search(&o).is_ok()
            || self.c.binary_search(&(span - o)).is_ok()
            || (o >= ma && span - o >= mc && self.b.binary_search(&(o - ma - 1).rem_euclid(self.period)).is_ok())
    }

    /// Membership of `r` for a reach set with the given min and max.
    pub fn contains(&self, r: i64, min: i64, max: i64) -> Result<bool> {
        self.check(max - min)?;
        Ok(self.contains_offset(r - min, max - min))
    }

    /// All reachable points for the given min and max.
    pub fn expand(&self, min: i64, max: i64) -> Result<Vec<i64>> {
        let span = max - min;
        self.check(span)?;
        Ok((0..=span).filter(|&o| self.contains_offset(o, span)).map(|o| min + o).collect())
    }

    fn check(&self, span: i64) -> Result<()> {
        if self.applies(span) {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("shape {self} needs span >= {}, got {span}", self.max_a() + self.max_c())))
        }
    }
}

fn fmt_set(f: &mut fmt::Formatter<'_>, xs: &[i64]) -> fmt::Result {
    f.write_str("{")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("}")
}

impl fmt::Display for ShapeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("A=")?;
        fmt_set(f, &self.a)?;
        f.write_str(" B=")?;
        fmt_set(f, &self.b)?;
        write!(f, " p={} C=", self.period)?;
        fmt_set(f, &self.c)
    }
}

/// Canonical shape of one reach set; `None` for the dead state.
pub fn shape_of(reach: &ReachState) -> Option<ShapeType> {
    if reach.dead {
        return None;
    }
    joint_shape(&[normalize(reach)])
}

/// Reach set as a bitset of offsets from its min.
pub fn normalize(reach: &ReachState) -> Vec<bool> {
    let mut bits = vec![false; (reach.max - reach.min + 1) as usize];
    for &r in &reach.points {
        bits[(r - reach.min) as usize] = true;
    }
    bits
}

/// Offsets `o ≤ limit` on which every set agrees with the first, as long as
/// they agree; the reachable ones among them are the admissible `max(A)`.
fn common_prefix(sets: &[&[bool]], limit: usize) -> Vec<usize> {
    let first = sets[0];
    let mut out = Vec::new();
    for o in 0..=limit {
        if sets.iter().any(|s| s[o] != first[o]) {
            break;
        }
        if first[o] {
            out.push(o);
        }
    }
    out
}

/// Shape shared by several normalized reach sets (bit 0 and the last bit set
/// in each), or `None` if no single shape reproduces all of them.
pub fn joint_shape(sets: &[Vec<bool>]) -> Option<ShapeType> {
    let fwd: Vec<&[bool]> = sets.iter().map(Vec::as_slice).collect();
    let rev_store: Vec<Vec<bool>> = sets.iter().map(|s| s.iter().rev().copied().collect()).collect();
    let rev: Vec<&[bool]> = rev_store.iter().map(Vec::as_slice).collect();
    let spans: Vec<usize> = sets.iter().map(|s| s.len() - 1).collect();
    let min_span = *spans.iter().min()?;
    let a_list = common_prefix(&fwd, min_span);
    let c_list = common_prefix(&rev, min_span);

    for total in 1..=(a_list.len() + c_list.len()) {
        let mut best: Option<((i64, usize), ShapeType)> = None;
        for na in 1..=a_list.len().min(total) {
            let nc = total - na;
            if nc > c_list.len() {
                continue;
            }
            let a = a_list[na - 1];
            let c = if nc == 0 { None } else { Some(c_list[nc - 1]) };
            if a + c.unwrap_or(0) > min_span {
                continue;
            }
            let Some(status) = range_status(&fwd, a, c) else { continue };
            let solid = status.iter().any(|s| *s == Some(true)) && !status.contains(&Some(false));
            if solid && c.is_none() {
                continue;
            }
            // A period must repeat at least twice inside some member's range.
            let range = spans.iter().map(|&sp| sp.saturating_sub(a + c.map_or(0, |c| c + 1))).max().unwrap_or(0);
            for p in 1..=(range / 2).max(1) {
                if let Some(b) = residues(&status, a, p) {
                    let key = (p as i64, na);
                    if best.as_ref().is_none_or(|(k, _)| key < *k) {
                        let shape = ShapeType {
                            a: a_list[..na].iter().map(|&x| x as i64).collect(),
                            b,
                            period: p as i64,
                            c: c_list[..nc].iter().map(|&x| x as i64).collect(),
                        };
                        best = Some((key, shape));
                    }
                    break;
                }
            }
        }
        if let Some((_, shape)) = best {
            return Some(shape);
        }
    }
    None
}

/// Merged reachability over the offsets governed by `B`: `Some(true)` /
/// `Some(false)` where some set pins the offset, `None` where none does.
/// Returns `None` overall if two sets disagree on an offset.
fn range_status(sets: &[&[bool]], a: usize, c: Option<usize>) -> Option<Vec<Option<bool>>> {
    let max_span = sets.iter().map(|s| s.len() - 1).max().unwrap_or(0);
    let mut status = vec![None; max_span + 1];
    for s in sets {
        let span = s.len() - 1;
        let hi = match c {
            Some(c) => span - c,
            None => span + 1,
        };
        for o in (a + 1)..hi {
            match status[o] {
                None => status[o] = Some(s[o]),
                Some(v) if v != s[o] => return None,
                _ => {}
            }
        }
    }
    Some(status)
}

fn residues(status: &[Option<bool>], a: usize, p: usize) -> Option<Vec<i64>> {
    let mut hit = vec![false; p];
    let mut miss = vec![false; p];
    for (o, st) in status.iter().enumerate().skip(a + 1) {
        if let Some(v) = st {
            let r = (o - a - 1) % p;
            if *v {
                hit[r] = true;
            } else {
                miss[r] = true;
            }
            if hit[r] && miss[r] {
                return None;
            }
        }
    }
    Some((0..p as i64).filter(|&r| hit[r as usize]).collect())
}
