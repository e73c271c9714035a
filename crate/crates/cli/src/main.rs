//! `boolsp` command-line front end.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use boolsp::constructs::{character_compose, negate_inputs, product_compose};
use boolsp::experiments::{
    fraction_curve_csv, graph_scan, predictor_orbit, sp_fraction_curve, threshold_constants, FractionMode,
};
use boolsp::io::{FunctionFile, PlanFile};
use boolsp::noise::{closeness_to_sp, optimal_predictor, prediction_gain, stability_report, TieRule};
use boolsp::rational::{check_unit, parse_decimal, parse_rational};
use boolsp::sp::{
    classify_with, is_sp, ltf_approximation, ltf_ratio_check, necessary_checks, sp_region,
    sufficient_thresholds_with, Endpoint, SpRegion,
};
use boolsp::spectrum::spectral_summary;
use boolsp::{BooleanFunction, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use input::{read_digested, InputArgs, InputDigest};
use report::{assemble, to_json, to_text, write_out, Header};

/// Misuse of the command line; exits with status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

const SCHEMAS: &str = "\
Input formats (bit j of an input index set means x_{j+1} = -1, so index 0 is the all-(+1) point):
  function  {\"format\":\"boolsp-fn-v1\",\"n\":N,\"table_hex\":\"...\"}
            ceil(2^n/4) hex digits, little-endian nibbles, a set bit means f = +1
  ltf       {\"format\":\"boolsp-ltf-v1\",\"a0\":A0,\"a\":[A1,...,An]}   f = sgn(A0 + sum Ai xi)
  ptf       {\"format\":\"boolsp-ptf-v1\",\"n\":N,\"terms\":[{\"set\":[1,3],\"coeff\":C},...]}
  plan      {\"outer\":<function>,\"blocks\":[[1,2],[3,4],...],\"n\":N}

Reports are JSON objects with sorted keys and a `header` entry (tool version,
configuration echo, sha256 of every input file). Exact rationals appear as
{\"num\":\"p\",\"den\":\"q\",\"approx\":x}; region endpoints are either
{\"kind\":\"exact\",\"value\":...} or {\"kind\":\"isolated\",\"lo\":...,\"hi\":...,\"approx\":x}.
The census CSV has columns rho_num,rho_den,fraction_num,fraction_den (exhaustive)
or rho_num,rho_den,estimate,stderr,samples (sampled).

Rationals such as rho and delta are given as p/q. Exit status: 0 success,
1 domain error, 2 usage error.";

#[derive(Parser, Debug)]
#[command(name = "boolsp", version, about = "Self-predictability of Boolean functions", after_long_help = SCHEMAS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads
    #[arg(long, global = true, env = "BOOLSP_THREADS")]
    threads: Option<usize>,
    /// Largest n accepted for dense truth tables
    #[arg(long = "cap-n", global = true, env = "BOOLSP_CAP_N")]
    cap_n: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long, short, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Ties {
    Zero,
    Keep,
}

#[derive(Args, Debug)]
struct Epsilon {
    /// Isolation width for irrational endpoints, e.g. 1e-9 or 1/1000
    #[arg(long, default_value = "1e-9", value_parser = positive_decimal)]
    epsilon: Rational,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectrum, properties and sufficient thresholds; pointwise checks with --rho
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_parser = unit_rational)]
        rho: Option<Rational>,
        #[command(flatten)]
        eps: Epsilon,
    },
    /// Exact SP region in [0, 1]
    Region {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        eps: Epsilon,
    },
    /// USP / LCSP / WST / SST flags with witnesses
    Classify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        eps: Epsilon,
    },
    /// Stab, Stab* and the matching noise sensitivities
    Stability {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_parser = unit_rational)]
        rho: Rational,
    },
    /// Optimal predictor sgn(T_rho f)
    Predict {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_parser = unit_rational)]
        rho: Rational,
        #[arg(long, value_enum, default_value_t = Ties::Zero)]
        ties: Ties,
    },
    /// Build a function from a plan, a product or an input negation
    Compose {
        #[command(flatten)]
        what: ComposeArgs,
        /// One of + or - per coordinate, e.g. --signs=+-+
        #[arg(long, allow_hyphen_values = true)]
        signs: Option<String>,
    },
    /// Fraction of SP functions on n variables
    Census {
        #[arg(long)]
        n: usize,
        /// Comma-separated p/q values
        #[arg(long, value_delimiter = ',', value_parser = unit_rational, required_unless_present = "grid")]
        rho: Vec<Rational>,
        /// Use rho = k/G for k = 1..G-1
        #[arg(long, conflicts_with = "rho")]
        grid: Option<u32>,
        /// Sample this many random functions instead of enumerating
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Resumable progress file for exhaustive runs
        #[arg(long, value_name = "PATH")]
        checkpoint: Option<PathBuf>,
    },
    /// Iterate f -> sgn(T_rho f) until a fixpoint, a cycle or the step budget
    Orbit {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_parser = unit_rational)]
        rho: Rational,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
    /// Predictor graph over all functions on n <= 4 variables
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = unit_rational)]
        rho: Rational,
    },
    /// eta_alpha, eta_delta and delta_max
    Thresholds {
        #[arg(long, value_parser = rational_arg)]
        alpha: Option<Rational>,
        #[arg(long, value_parser = rational_arg)]
        delta: Option<Rational>,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "construction")]
struct ComposeArgs {
    /// Plan file (see --help)
    #[arg(long, value_name = "PATH")]
    plan: Option<PathBuf>,
    /// g(x_1..x_k) h(x_{k+1}..x_n) for two function documents
    #[arg(long, num_args = 2, value_names = ["G", "H"])]
    product: Option<Vec<PathBuf>>,
    /// Function document whose inputs are negated according to --signs
    #[arg(long, value_name = "PATH", requires = "signs")]
    negate: Option<PathBuf>,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn unit_rational(s: &str) -> Result<Rational, String> {
    let r = rational_arg(s)?;
    check_unit(&r, "rho").map_err(|e| e.to_string())?;
    Ok(r)
}

fn positive_decimal(s: &str) -> Result<Rational, String> {
    let r = parse_decimal(s).map_err(|e| e.to_string())?;
    if r <= Rational::from_integer(0.into()) {
        return Err(format!("epsilon = {r} must be positive"));
    }
    Ok(r)
}

fn text_region(r: &SpRegion) -> String {
    let end = |e: &Endpoint| match e {
        Endpoint::Exact { value } => value.to_string(),
        Endpoint::Isolated { approx, .. } => format!("{approx:.9}"),
    };
    let parts: Vec<String> = r
        .intervals
        .iter()
        .map(|iv| {
            format!(
                "{}{}, {}{}",
                if iv.lo_closed { '[' } else { '(' },
                end(&iv.lo),
                end(&iv.hi),
                if iv.hi_closed { ']' } else { ')' }
            )
        })
        .collect();
    if parts.is_empty() {
        "SP region: empty".into()
    } else {
        format!("SP region: {}", parts.join(" ∪ "))
    }
}

struct Output {
    command: &'static str,
    config: Value,
    inputs: Vec<InputDigest>,
    body: Value,
    summary: Vec<String>,
    csv: Option<String>,
}

impl Output {
    fn new(command: &'static str, config: Value, inputs: Vec<InputDigest>, body: Value) -> Self {
        Output { command, config, inputs, body, summary: Vec::new(), csv: None }
    }
}

fn sv<T: serde::Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn function_value(f: &BooleanFunction) -> Result<Value> {
    sv(&FunctionFile::from_function(f))
}

fn execute(command: Command) -> Result<Output> {
    Ok(match command {
        Command::Analyze { input, rho, eps } => {
            let l = input.load()?;
            let f = &l.f;
            let mut body = json!({
                "function": function_value(f)?,
                "properties": sv(&f.properties())?,
                "spectrum": sv(&spectral_summary(f))?,
                "sufficient": sv(&sufficient_thresholds_with(f, &eps.epsilon))?,
            });
            if let Some(spec) = &l.ltf {
                let approx = ltf_approximation(f).map_or_else(|e| json!({ "error": e.to_string() }), |a| json!(a));
                let ratio = ltf_ratio_check(spec).map_or_else(|e| json!({ "error": e.to_string() }), |a| json!(a));
                body["ltf"] = json!({ "approximation": approx, "ratio_check": ratio });
            }
            if let Some(rho) = &rho {
                body["at_rho"] = json!({
                    "decision": sv(&is_sp(f, rho, f.is_monotone())?)?,
                    "stability": sv(&stability_report(f, rho)?)?,
                    "necessary": sv(&necessary_checks(f, rho)?)?,
                    "closeness": sv(&closeness_to_sp(f, rho)?)?,
                    "gain": prediction_gain(f, rho).map_or_else(|e| json!({ "error": e.to_string() }), |g| json!(g)),
                });
            }
            let config = json!({ "rho": rho.map(|r| r.to_string()), "epsilon": eps.epsilon.to_string() });
            Output::new("analyze", config, vec![l.digest], body)
        }
        Command::Region { input, eps } => {
            let l = input.load()?;
            let region = sp_region(&l.f, &eps.epsilon)?;
            let mut out = Output::new("region", json!({ "epsilon": eps.epsilon.to_string() }), vec![l.digest], sv(&region)?);
            out.summary.push(text_region(&region));
            out
        }
        Command::Classify { input, eps } => {
            let l = input.load()?;
            let c = classify_with(&l.f, &eps.epsilon)?;
            let mut out = Output::new("classify", json!({ "epsilon": eps.epsilon.to_string() }), vec![l.digest], sv(&c)?);
            out.summary.push(format!("usp {}  lcsp {}  wst {}  sst {}", c.usp, c.lcsp, c.wst, c.sst));
            out.summary.push(text_region(&c.region));
            out
        }
        Command::Stability { input, rho } => {
            let l = input.load()?;
            let s = stability_report(&l.f, &rho)?;
            Output::new("stability", json!({ "rho": rho.to_string() }), vec![l.digest], sv(&s)?)
        }
        Command::Predict { input, rho, ties } => {
            let l = input.load()?;
            let rule = match ties {
                Ties::Zero => TieRule::Zero,
                Ties::Keep => TieRule::Keep,
            };
            let p = optimal_predictor(&l.f, &rho, rule)?;
            let as_function = p.to_boolean().map(|g| function_value(&g)).transpose()?;
            let body = json!({
                "predictor": sv(&p)?,
                "counts": { "plus": p.count(1), "minus": p.count(-1), "zero": p.count(0) },
                "balanced": p.is_balanced(),
                "monotone": p.is_monotone(),
                "odd": p.is_odd(),
                "even": p.is_even(),
                "symmetric": p.is_symmetric(),
                "function": as_function,
                "is_fixpoint": p.to_boolean().is_some_and(|g| g == l.f),
            });
            let config = json!({ "rho": rho.to_string(), "ties": format!("{ties:?}").to_lowercase() });
            Output::new("predict", config, vec![l.digest], body)
        }
        Command::Compose { what, signs } => compose(what, signs)?,
        Command::Census { n, rho, grid, samples, seed, checkpoint } => {
            let rhos: Vec<Rational> = match grid {
                Some(0 | 1) => bail!(Usage("--grid needs at least 2".into())),
                Some(g) => (1..g).map(|k| Rational::new(k.into(), g.into())).collect(),
                None => rho,
            };
            let mode = match samples {
                Some(count) => FractionMode::Sample { count, seed },
                None => FractionMode::Exhaustive,
            };
            if checkpoint.is_some() && samples.is_some() {
                bail!(Usage("--checkpoint applies to exhaustive runs only".into()));
            }
            let fractions = sp_fraction_curve(n, &rhos, mode, checkpoint.as_deref())?;
            let curve: Vec<Value> = rhos
                .iter()
                .zip(&fractions)
                .map(|(r, fr)| Ok(json!({ "rho": r.to_string(), "fraction": sv(fr)? })))
                .collect::<Result<_>>()?;
            let config = json!({
                "n": n,
                "rhos": rhos.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "mode": sv(&mode)?,
                "checkpoint": checkpoint.map(|p| p.display().to_string()),
            });
            let mut out = Output::new("census", config, Vec::new(), json!({ "curve": curve }));
            out.csv = Some(fraction_curve_csv(&rhos, &fractions)?);
            out
        }
        Command::Orbit { input, rho, max_steps } => {
            let l = input.load()?;
            let o = predictor_orbit(&l.f, &rho, max_steps)?;
            let config = json!({ "rho": rho.to_string(), "max_steps": max_steps });
            Output::new("orbit", config, vec![l.digest], sv(&o)?)
        }
        Command::Graph { n, rho } => {
            let g = graph_scan(n, &rho)?;
            Output::new("graph", json!({ "n": n, "rho": rho.to_string() }), Vec::new(), sv(&g)?)
        }
        Command::Thresholds { alpha, delta } => {
            let t = threshold_constants(alpha.as_ref(), delta.as_ref())?;
            let config = json!({ "alpha": alpha.map(|a| a.to_string()), "delta": delta.map(|d| d.to_string()) });
            let mut out = Output::new("thresholds", config, Vec::new(), sv(&t)?);
            out.summary.push(match t.eta_delta {
                Some(e) => format!("eta_delta = {e:.9}"),
                None if t.delta.is_some() => "eta_delta undefined (delta at or above delta_max)".into(),
                None => "no delta given".into(),
            });
            out
        }
    })
}

fn compose(args: ComposeArgs, signs: Option<String>) -> Result<Output> {
    let (f, construction, inputs) = if let Some(path) = &args.plan {
        let (text, digest) = read_digested(path, "plan")?;
        let plan: PlanFile = serde_json::from_str(&text)
            .map_err(|e| boolsp::Error::Format(format!("{}: {e}", path.display())))?;
        (character_compose(&plan.to_plan()?)?, json!({ "kind": "plan" }), vec![digest])
    } else if let Some(paths) = &args.product {
        let g = input::load_any(&paths[0], "fn")?;
        let h = input::load_any(&paths[1], "fn")?;
        let f = product_compose(&g.f, &h.f)?;
        (f, json!({ "kind": "product", "split": g.f.n() }), vec![g.digest, h.digest])
    } else if let Some(path) = &args.negate {
        let signs_text = signs.as_deref().unwrap_or_default();
        let signs = signs_text
            .chars()
            .map(|c| match c {
                '+' => Ok(1i8),
                '-' => Ok(-1),
                other => Err(Usage(format!("sign `{other}` in --signs is neither + nor -"))),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let g = input::load_any(path, "fn")?;
        (negate_inputs(&g.f, &signs)?, json!({ "kind": "negate", "signs": signs_text }), vec![g.digest])
    } else {
        bail!(Usage("one of --plan, --product, --negate is required".into()));
    };
    // the report doubles as a function document
    let mut body = function_value(&f)?;
    body["construction"] = construction;
    Ok(Output::new("compose", json!({}), inputs, body))
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!(Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    if let Some(c) = cli.cap_n {
        if !(1..=30).contains(&c) {
            bail!(Usage(format!("--cap-n {c} outside 1..=30")));
        }
        boolsp::set_dense_cap(c);
    }
    let format = cli.format;
    let out = execute(cli.command)?;
    let mut config = out.config;
    config["threads"] = json!(cli.threads);
    config["cap_n"] = json!(cli.cap_n.unwrap_or(boolsp::DEFAULT_DENSE_CAP));
    config["format"] = json!(format!("{format:?}").to_lowercase());
    let header = Header::new(out.command, config, out.inputs);
    let report = assemble(&header, out.body)?;
    let text = match format {
        Format::Json => to_json(&report),
        Format::Text => to_text(&report, &out.summary),
        Format::Csv => match out.csv {
            Some(csv) => csv,
            None => bail!(Usage(format!("--format csv is only available for census, not {}", out.command))),
        },
    };
    write_out(cli.output.as_deref(), &text)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
