//! Command-line front-end for `nwalk`.
//!
//! Every subcommand prints one JSON document on stdout (`simulate --csv`
//! prints CSV). Exit codes: 0 on success, 1 when `selftest` finds a
//! mismatch, 2 on invalid input, 3 when a computation budget is exhausted.
//! Rationals are printed as `"num/den"` strings, integers as `"num"`.

use clap::{Args, Parser, Subcommand};
use nwalk::asym::{asym_count, dyck_excursion_probability_regime, AsymEstimate, RegimeLabel};
use nwalk::exact::{count_dyck, count_motzkin, CountTable, DyckWeights, MotzkinWeights};
use nwalk::montecarlo::{simulate, simulate_with_threads, SimConfig};
use nwalk::rational::{parse_rational, serde_str, serde_vec};
use nwalk::series::{
    gf_dyck_bridge_unweighted, gf_dyck_excursion, gf_dyck_meander, gf_motzkin_meander_unweighted, DEFAULT_ORDER,
};
use nwalk::structure::{build_type_automaton, count_bridges_general, frobenius};
use nwalk::tunnel::{
    feasibility_probability, parse_distribution, parse_stepset, path_feasible, CapabilityPath, ProbabilityMode,
};
use nwalk::{BigRational, Error, Family, WalkClass};
use num_traits::One;
use serde::{Deserialize, Serialize};

pub mod selftest;

#[derive(Debug, Parser)]
#[command(name = "tunnelcli", version, about = "Nondeterministic walks: counting, series, asymptotics, automata, simulation and tunnel feasibility")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact weighted counts by length.
    Count {
        #[arg(long, default_value = "dyck")]
        family: Family,
        /// Step set in the DSL, or `dyck`, `motzkin`, `default`.
        #[arg(long, default_value = "default")]
        steps: String,
        #[arg(long)]
        kind: WalkClass,
        #[arg(long)]
        max_n: usize,
    },
    /// Coefficients of a closed-form generating function.
    Series {
        #[arg(long)]
        form: SeriesForm,
        /// Dyck weights `p-1,p1,p-1_1` for the weighted forms; all 1 if absent.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Asymptotic estimates.
    Asym(AsymArgs),
    /// Type automaton of a step set.
    Automaton {
        #[arg(long)]
        steps: String,
        #[arg(long, default_value_t = 3)]
        margin: usize,
    },
    /// Frobenius number of coprime positive generators.
    Frobenius {
        /// Comma-separated generators.
        #[arg(long, value_delimiter = ',', required = true)]
        gens: Vec<i64>,
    },
    /// Monte Carlo class proportions.
    Simulate {
        #[arg(long)]
        steps: String,
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        runs: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Worker threads; results do not depend on it.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        csv: bool,
    },
    /// Feasibility of an encapsulation path.
    Feasible(FeasibleArgs),
    /// Oracle, DP and series agreement at small lengths.
    Selftest,
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct AsymArgs {
    #[command(subcommand)]
    pub prob: Option<AsymSub>,
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub kind: Option<WalkClass>,
    #[arg(long)]
    pub n: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum AsymSub {
    /// Dyck excursion probability regime.
    Prob {
        #[arg(long, allow_hyphen_values = true)]
        p1: String,
        #[arg(long, allow_hyphen_values = true)]
        pm1: String,
        /// Half the walk length.
        #[arg(long)]
        n: f64,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct FeasibleArgs {
    #[command(subcommand)]
    pub prob: Option<FeasibleSub>,
    /// Comma-separated capabilities: encap, decap, both, passive, any-of(h,...).
    #[arg(long, allow_hyphen_values = true)]
    pub path: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum FeasibleSub {
    /// Probability that a random path is feasible.
    Prob {
        /// `capability=weight` pairs, e.g. `encap=1/3,decap=1/2,both=1/6`.
        #[arg(long, allow_hyphen_values = true)]
        dist: String,
        /// Path length.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "exact")]
        mode: ProbabilityMode,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesForm {
    DyckMeander,
    DyckExcursion,
    DyckBridge,
    MotzkinMeander,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesOutput {
    pub form: SeriesForm,
    pub order: usize,
    /// `[p-1, p1, p-1_1]` for the weighted Dyck forms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<[String; 3]>,
    /// Coefficients of `t^0 ..= t^order`.
    #[serde(with = "serde_vec")]
    pub coefficients: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymCountOutput {
    pub family: Family,
    pub kind: WalkClass,
    pub n: u32,
    pub estimate: AsymEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymProbOutput {
    #[serde(with = "serde_str")]
    pub p1: BigRational,
    #[serde(with = "serde_str")]
    pub pm1: BigRational,
    pub n: f64,
    pub regime: RegimeLabel,
    pub estimate: AsymEstimate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusOutput {
    pub generators: Vec<i64>,
    pub frobenius: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibleOutput {
    pub path: String,
    pub feasible: bool,
    #[serde(default)]
    pub witness: Option<Vec<i64>>,
}

/// Error payload written to stderr.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorOutput {
    pub error: String,
    pub kind: String,
}

/// Text to print and the exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_budget() {
        3
    } else {
        2
    }
}

pub fn error_json(err: &Error) -> String {
    let kind = if err.is_budget() { "budget" } else { "validation" };
    json(&ErrorOutput { error: err.to_string(), kind: kind.into() })
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output types serialize")
}

fn ok(stdout: String) -> Result<Outcome, Error> {
    Ok(Outcome { stdout, code: 0 })
}

pub fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Count { family, steps, kind, max_n } => ok(json(&count(family, &steps, kind, max_n)?)),
        Command::Series { form, weights, order } => ok(json(&series(form, weights.as_deref(), order)?)),
        Command::Asym(args) => asym(args),
        Command::Automaton { steps, margin } => {
            let set = parse_stepset(&steps, Family::General)?;
            ok(json(&build_type_automaton(&set, margin)?))
        }
        Command::Frobenius { gens } => {
            let f = frobenius(&gens)?;
            ok(json(&FrobeniusOutput { generators: gens, frobenius: f }))
        }
        Command::Simulate { steps, lengths, runs, seed, threads, csv } => {
            let cfg = SimConfig { stepset: parse_stepset(&steps, Family::General)?, lengths, runs, seed };
            let res = match threads {
                Some(t) => simulate_with_threads(&cfg, t)?,
                None => simulate(&cfg)?,
            };
            ok(if csv { res.to_csv() } else { json(&res) })
        }
        Command::Feasible(args) => feasible(args),
        Command::Selftest => {
            let report = selftest::run();
            let code = if report.passed { 0 } else { 1 };
            Ok(Outcome { stdout: json(&report), code })
        }
    }
}

pub fn count(family: Family, steps: &str, kind: WalkClass, max_n: usize) -> Result<CountTable, Error> {
    let set = parse_stepset(steps, family)?;
    match family {
        Family::Dyck => count_dyck(kind, &DyckWeights::from_stepset(&set)?, max_n),
        Family::Motzkin => count_motzkin(kind, &MotzkinWeights::from_stepset(&set)?, max_n),
        Family::General => match kind {
            WalkClass::Bridge => count_bridges_general(&set, max_n),
            WalkClass::Walk => {
                let total = set.total_weight();
                let mut counts = Vec::with_capacity(max_n + 1);
                let mut acc = BigRational::one();
                for _ in 0..=max_n {
                    counts.push(acc.clone());
                    acc *= &total;
                }
                Ok(CountTable { kind, stepset: set, counts })
            }
            _ => Err(Error::Unsupported(format!(
                "{kind} counts for general step sets are not implemented; use the dyck or motzkin family"
            ))),
        },
    }
}

fn parse_dyck_weights(text: &str) -> Result<DyckWeights, Error> {
    let parts: Vec<&str> = text.split(',').collect();
    let [d, u, b] = parts.as_slice() else {
        return Err(Error::Parse(format!("expected three weights p-1,p1,p-1_1, got {text:?}")));
    };
    DyckWeights::new(parse_rational(d)?, parse_rational(u)?, parse_rational(b)?)
}

pub fn series(form: SeriesForm, weights: Option<&str>, order: usize) -> Result<SeriesOutput, Error> {
    let w = weights.map(parse_dyck_weights).transpose()?;
    if w.is_some() && matches!(form, SeriesForm::DyckBridge | SeriesForm::MotzkinMeander) {
        return Err(Error::Unsupported(format!("{form:?} has no weighted closed form")));
    }
    let dw = w.clone().unwrap_or_else(DyckWeights::unweighted);
    let s = match form {
        SeriesForm::DyckMeander => gf_dyck_meander(&dw, order)?,
        SeriesForm::DyckExcursion => gf_dyck_excursion(&dw, order)?,
        SeriesForm::DyckBridge => gf_dyck_bridge_unweighted(order)?,
        SeriesForm::MotzkinMeander => gf_motzkin_meander_unweighted(order)?,
    };
    let coefficients = (0..=order as i64).map(|k| s.coeff(k).expect("expanded to the requested order")).collect();
    Ok(SeriesOutput {
        form,
        order,
        weights: w.map(|w| w.as_array().map(|x| x.to_string())),
        coefficients,
    })
}

fn asym(args: AsymArgs) -> Result<Outcome, Error> {
    if let Some(AsymSub::Prob { p1, pm1, n }) = args.prob {
        let (p1, pm1) = (parse_rational(&p1)?, parse_rational(&pm1)?);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Parse(format!("n must be positive, got {n}")));
        }
        let regime = dyck_excursion_probability_regime(&p1, &pm1)?;
        let estimate = regime.estimate(n);
        return ok(json(&AsymProbOutput { p1, pm1, n, regime: regime.label, estimate }));
    }
    let (Some(family), Some(kind), Some(n)) = (args.family, args.kind, args.n) else {
        return Err(Error::Parse("asym needs --family, --kind and --n (or the `prob` subcommand)".into()));
    };
    ok(json(&AsymCountOutput { family, kind, n, estimate: asym_count(family, kind, n)? }))
}

fn feasible(args: FeasibleArgs) -> Result<Outcome, Error> {
    if let Some(FeasibleSub::Prob { dist, n, mode }) = args.prob {
        return ok(json(&feasibility_probability(n, &parse_distribution(&dist)?, mode)?));
    }
    let text = args.path.ok_or_else(|| Error::Parse("feasible needs --path (or the `prob` subcommand)".into()))?;
    let path: CapabilityPath = text.parse()?;
    let f = path_feasible(&path)?;
    ok(json(&FeasibleOutput { path: path.to_string(), feasible: f.feasible, witness: f.witness }))
}
