//! `ptasynth`: model checking, synthesis and boundary learning for parametric timed automata.
//!
//! Results go to stdout as JSON with sorted keys (`serde_json` maps are ordered);
//! diagnostics go to stderr. Exit codes: 0 success or a true verdict, 1 a false verdict,
//! 2 usage or validation errors, 3 no decidable synthesis mode.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ptasynth::learn::{self, LearnConfig};
use ptasynth::mc;
use ptasynth::model::{classify_params, validate_valuation, ParamValuation, Property, Pta, Quantifier};
use ptasynth::synth::{self, Mode};
use ptasynth::textio::{
    emit_property, emit_run, emit_valuation, parse_model, parse_property, parse_valuation, Source,
};
use ptasynth::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ptasynth", version, about = "Parameter synthesis for parametric timed automata")]
struct Cli {
    /// Worker threads for oracle calls; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a property under one parameter valuation.
    Check {
        #[command(flatten)]
        input: Input,
        /// `p1=3,p2=inf`
        #[arg(long)]
        valuation: String,
    },
    /// Compute the feasible parameter region exactly.
    Synth {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
    },
    /// Decide whether any valuation of an L/U automaton satisfies `E<> phi`.
    Empty {
        #[command(flatten)]
        input: Input,
    },
    /// Learn the feasible region's boundary from oracle-labeled samples.
    Learn {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 40)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        rounds: usize,
        /// Samples are drawn from `[0, box]^m`.
        #[arg(long = "box", default_value_t = 10)]
        box_bound: u64,
        #[arg(long, default_value_t = 1)]
        margin: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report agreement with the oracle over `[0, box]^m`.
        #[arg(long)]
        eval_grid: bool,
        /// Emit every grid point with its oracle and predicted labels.
        #[arg(long)]
        dump_grid: bool,
    },
    /// Print a concrete run reaching the property's target, if one exists.
    Run {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        valuation: String,
    },
}

#[derive(clap::Args)]
struct Input {
    /// Model file.
    model: PathBuf,
    /// Property text such as `E<> loc == b`, or a file holding it.
    property: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    OneOne,
    LuOne,
    LOnly,
    UOnly,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Auto => Mode::Auto,
            ModeArg::OneOne => Mode::OneOne,
            ModeArg::LuOne => Mode::LuOneParam,
            ModeArg::LOnly => Mode::LOnly,
            ModeArg::UOnly => Mode::UOnly,
        }
    }
}

/// A failed command: the exit code and the message for stderr.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Undecidable(_) => 3,
            _ => 2,
        };
        Failure(code, e.to_string())
    }
}

type Outcome = Result<(Value, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        set_jobs(n);
    }
    match run(cli.command) {
        Ok((value, code)) => {
            let text = serde_json::to_string_pretty(&value).expect("json values serialize");
            // a closed pipe is the reader's choice, not an error of ours
            let _ = writeln!(std::io::stdout(), "{text}");
            ExitCode::from(code)
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

#[cfg(feature = "parallel")]
fn set_jobs(n: usize) {
    // only fails if a pool already exists, which cannot happen this early
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
}

#[cfg(not(feature = "parallel"))]
fn set_jobs(_: usize) {}

fn run(command: Command) -> Outcome {
    match command {
        Command::Check { input, valuation } => {
            let (pta, property) = load(&input)?;
            let gamma = valuation_arg(&pta, &property, &valuation)?;
            let verdict = mc::check(&pta, &gamma, &property)?;
            let out = json!({
                "method": "zone",
                "property": emit_property(&property, &pta),
                "valuation": emit_valuation(&gamma, &pta),
                "verdict": verdict,
            });
            Ok((out, verdict_code(verdict)))
        }
        Command::Synth { input, mode } => {
            let (pta, property) = load(&input)?;
            let r = synth::synthesize(&pta, &property, mode.into())?;
            let out = json!({
                "constant_b": r.constant_b,
                "constant_c": r.constant_c,
                "dual": r.dual,
                "method": r.method,
                "oracle_calls": r.certificate_checks.len(),
                "params": pta.params,
                "property": emit_property(&property, &pta),
                "region": r.region,
            });
            Ok((out, 0))
        }
        Command::Empty { input } => {
            let (pta, property) = load(&input)?;
            if property.quantifier != Quantifier::Exists {
                return Err(Failure(2, "emptiness is defined for `E<>` properties".into()));
            }
            let nonempty = synth::lu_emptiness(&pta, &property.formula)?;
            let classes = classify_params(&pta, &property);
            let out = json!({
                "nonempty": nonempty,
                "property": emit_property(&property, &pta),
                "valuation": emit_valuation(&synth::zero_inf_valuation(&classes), &pta),
            });
            Ok((out, verdict_code(nonempty)))
        }
        Command::Learn { input, samples, rounds, box_bound, margin, seed, eval_grid, dump_grid } => {
            let (pta, property) = load(&input)?;
            let config = LearnConfig { samples, box_bound, margin, max_rounds: rounds, seed };
            let classifier = learn::learn_boundary(&pta, &property, &config)?;
            let mut out = json!({
                "classifier": classifier,
                "params": pta.params,
                "property": emit_property(&property, &pta),
            });
            if eval_grid || dump_grid {
                let grid = learn::evaluate_grid(&pta, &property, &classifier, box_bound)?;
                let agree = grid.iter().filter(|g| g.oracle == g.predicted).count();
                out["grid"] = json!({
                    "accuracy": learn::agreement(&grid),
                    "agree": agree,
                    "bound": box_bound,
                    "points": grid.len(),
                });
                if dump_grid {
                    out["grid"]["labels"] = serde_json::to_value(&grid).expect("grid serializes");
                }
            }
            Ok((out, 0))
        }
        Command::Run { input, valuation } => {
            let (pta, property) = load(&input)?;
            let gamma = valuation_arg(&pta, &property, &valuation)?;
            let verdict = mc::check(&pta, &gamma, &property)?;
            // the reach target is phi for `E<>` and not phi for `A[]`
            let hit = match property.quantifier {
                Quantifier::Exists => verdict,
                Quantifier::Forall => !verdict,
            };
            let run = if hit {
                let w = mc::witness_run(&pta, &gamma, &property.reach_target())?;
                emit_run(&w.run, &pta)
            } else {
                Value::Null
            };
            let out = json!({
                "property": emit_property(&property, &pta),
                "run": run,
                "valuation": emit_valuation(&gamma, &pta),
                "verdict": verdict,
            });
            Ok((out, verdict_code(verdict)))
        }
    }
}

fn verdict_code(v: bool) -> u8 {
    if v {
        0
    } else {
        1
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn load(input: &Input) -> Result<(Pta, Property), Failure> {
    let text = read(&input.model)?;
    let origin = input.model.display().to_string();
    let pta = parse_model(&Source::new(&text, &origin)).map_err(|d| Failure(2, d.to_string()))?;
    let prop_path = Path::new(&input.property);
    let (prop_text, prop_origin) = if prop_path.is_file() {
        (read(prop_path)?, input.property.clone())
    } else {
        (input.property.clone(), "<property>".to_string())
    };
    let property = parse_property(&Source::new(&prop_text, &prop_origin), &pta)
        .map_err(|d| Failure(2, d.to_string()))?;
    Ok((pta, property))
}

fn valuation_arg(pta: &Pta, property: &Property, text: &str) -> Result<ParamValuation, Failure> {
    let gamma =
        parse_valuation(&Source::new(text, "<valuation>"), pta).map_err(|d| Failure(2, d.to_string()))?;
    validate_valuation(pta, property, &gamma)?;
    Ok(gamma)
}
