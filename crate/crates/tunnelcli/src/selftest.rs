//! Cross-checks between the brute-force oracle, the exact DPs, the type
//! automaton and the closed-form series at small lengths.

use nwalk::exact::{count_dyck, count_motzkin, DyckWeights, MotzkinWeights};
use nwalk::oracle::brute_table;
use nwalk::series::{gf_dyck_bridge_unweighted, gf_dyck_excursion_unweighted, gf_dyck_meander_unweighted, gf_motzkin_meander_unweighted};
use nwalk::structure::{count_bridges_general, frobenius};
use nwalk::{BigRational, Result, WalkClass, WeightedStepSet};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub checks: Vec<SelftestCheck>,
    pub passed: bool,
}

fn check(name: &str, outcome: Result<Option<String>>) -> SelftestCheck {
    let (passed, detail) = match outcome {
        Ok(None) => (true, "ok".to_string()),
        Ok(Some(mismatch)) => (false, mismatch),
        Err(e) => (false, format!("error: {e}")),
    };
    SelftestCheck { name: name.into(), passed, detail }
}

fn compare(what: &str, a: &[BigRational], b: &[BigRational]) -> Option<String> {
    let n = a.len().min(b.len());
    (0..n).find(|&i| a[i] != b[i]).map(|i| format!("{what}: length {i} gives {} vs {}", a[i], b[i]))
}

pub fn run() -> SelftestReport {
    let dyck = WeightedStepSet::dyck();
    let motz = WeightedStepSet::motzkin();
    let mut checks = Vec::new();
    for kind in WalkClass::ALL {
        checks.push(check(
            &format!("dyck {kind}: oracle = DP, n <= 8"),
            (|| {
                let o = brute_table(&dyck, kind, 8)?;
                let d = count_dyck(kind, &DyckWeights::unweighted(), 8)?;
                Ok(compare("oracle vs DP", &o.counts, &d.counts))
            })(),
        ));
        checks.push(check(
            &format!("motzkin {kind}: oracle = DP, n <= 5"),
            (|| {
                let o = brute_table(&motz, kind, 5)?;
                let d = count_motzkin(kind, &MotzkinWeights::unweighted(), 5)?;
                Ok(compare("oracle vs DP", &o.counts, &d.counts))
            })(),
        ));
    }
    let series_checks: [(&str, WalkClass, fn(usize) -> Result<nwalk::series::Series>); 3] = [
        ("dyck meander: series = DP, n <= 30", WalkClass::Meander, gf_dyck_meander_unweighted),
        ("dyck excursion: series = DP, n <= 30", WalkClass::Excursion, gf_dyck_excursion_unweighted),
        ("dyck bridge: series = DP, n <= 30", WalkClass::Bridge, gf_dyck_bridge_unweighted),
    ];
    for (name, kind, gf) in series_checks {
        checks.push(check(
            name,
            (|| {
                let s = gf(30)?.coefficients();
                let d = count_dyck(kind, &DyckWeights::unweighted(), 30)?;
                Ok(compare("series vs DP", &s, &d.counts))
            })(),
        ));
    }
    checks.push(check(
        "motzkin meander: series = DP, n <= 20",
        (|| {
            let s = gf_motzkin_meander_unweighted(20)?.coefficients();
            let d = count_motzkin(WalkClass::Meander, &MotzkinWeights::unweighted(), 20)?;
            Ok(compare("series vs DP", &s, &d.counts))
        })(),
    ));
    checks.push(check(
        "automaton bridges = DP, dyck and motzkin, n <= 12",
        (|| {
            let a = count_bridges_general(&dyck, 12)?;
            let b = count_dyck(WalkClass::Bridge, &DyckWeights::unweighted(), 12)?;
            let c = count_bridges_general(&motz, 12)?;
            let d = count_motzkin(WalkClass::Bridge, &MotzkinWeights::unweighted(), 12)?;
            Ok(compare("dyck", &a.counts, &b.counts).or_else(|| compare("motzkin", &c.counts, &d.counts)))
        })(),
    ));
    checks.push(check(
        "frobenius {3,5} = 7",
        frobenius(&[3, 5]).map(|f| (f != 7).then(|| format!("got {f}"))),
    ));
    let passed = checks.iter().all(|c| c.passed);
    SelftestReport { checks, passed }
}
