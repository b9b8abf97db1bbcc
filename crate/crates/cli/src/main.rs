//! `gdof` command line: sum-GDoF bounds for the two-user asymmetric
//! interference channel with delayed transmitter CSI.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O
//! error. All outputs are deterministic given the flags and seed.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gdof::verify::{run_battery, VerifyConfig};
use gdof::{
    bounds_at, canonical, mc, three_slot_ledger, CovarianceSpec, RegionCase, Selector,
};

#[derive(Parser)]
#[command(
    name = "gdof",
    version,
    about = "Sum-GDoF bounds for the 2x1 asymmetric interference channel with delayed CSIT",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format; JSON emits one object per row.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds at a single exponent pair.
    Bounds {
        #[arg(long, allow_negative_numbers = true)]
        alpha1: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha2: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bounds over a square grid of exponent pairs.
    Sweep {
        #[arg(long, default_value_t = 0.0)]
        min: f64,
        #[arg(long, default_value_t = 3.0)]
        max: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the self-verification battery; exits nonzero on any failure.
    Verify {
        /// Exponent-grid step for the tightness check.
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Closed-form comparison tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Power-split grid step for the max-min check.
        #[arg(long = "grid-step-a", default_value_t = 0.02)]
        grid_step_a: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Monte Carlo slope regression of the log-det coefficients.
    Slopes {
        /// BE5, BE6, BE7 or all.
        #[arg(long, default_value = "all")]
        selector: String,
        /// Rank deficiency 0, 1, 2 or all.
        #[arg(long, default_value = "all")]
        k: String,
        /// Comma-separated alpha2 values.
        #[arg(long, default_value = "0.3,0.7,1.0,1.5,2.5")]
        alpha2: String,
        /// Comma-separated rho grid.
        #[arg(long, default_value = "1e2,1e3,1e4,1e5,1e6")]
        rhos: String,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// GDoF accounting of the 3-slot scheme (weak-interference region).
    Ledger {
        #[arg(long, allow_negative_numbers = true)]
        alpha1: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha2: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Usage-class failure: exit 2.
struct UsageError(String);

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds {
            alpha1,
            alpha2,
            output,
        } => cmd_bounds(alpha1, alpha2, &output),
        Command::Sweep {
            min,
            max,
            step,
            output,
        } => cmd_sweep(min, max, step, &output),
        Command::Verify {
            step,
            tol,
            grid_step_a,
            seed,
        } => return cmd_verify(step, tol, grid_step_a, seed),
        Command::Slopes {
            selector,
            k,
            alpha2,
            rhos,
            trials,
            seed,
            output,
        } => cmd_slopes(&selector, &k, &alpha2, &rhos, trials, seed, &output),
        Command::Ledger {
            alpha1,
            alpha2,
            output,
        } => cmd_ledger(alpha1, alpha2, &output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(err)) => {
            eprintln!("i/o error: {err}");
            ExitCode::from(3)
        }
    }
}

enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

/// 9-decimal fixed formatting used in every numeric field.
fn fmt9(x: f64) -> String {
    format!("{x:.9}")
}

fn fmt9_opt(x: Option<f64>) -> String {
    x.map(fmt9).unwrap_or_default()
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn json_num(x: f64) -> serde_json::Value {
    // Serialize at the same 9-decimal precision as the CSV fields.
    serde_json::Value::from(format!("{x:.9}").parse::<f64>().unwrap())
}

fn json_opt(x: Option<f64>) -> serde_json::Value {
    x.map(json_num).unwrap_or(serde_json::Value::Null)
}

fn cmd_bounds(alpha1: f64, alpha2: f64, output: &OutputArgs) -> Result<(), Failure> {
    let (a, swapped) =
        canonical(alpha1, alpha2).map_err(|e| UsageError(e.to_string()))?;
    let b = bounds_at(&a);
    let theorem = gdof::theorem1_sum_gdof(&a);
    let text = match output.format {
        Format::Csv => {
            let mut s = String::from("alpha1,alpha2,swapped,region,closed_form,lower,upper,tight,a_sum_star\n");
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{}",
                fmt9(alpha1),
                fmt9(alpha2),
                u8::from(swapped),
                b.region.tag(),
                fmt9_opt(theorem),
                fmt9_opt(b.lower),
                fmt9(b.upper),
                u8::from(b.tight),
                fmt9_opt(b.a_sum_star),
            )
            .unwrap();
            s
        }
        Format::Json => {
            let obj = serde_json::json!({
                "alpha1": json_num(alpha1),
                "alpha2": json_num(alpha2),
                "swapped": swapped,
                "region": b.region.tag(),
                "closed_form": json_opt(theorem),
                "lower": json_opt(b.lower),
                "upper": json_num(b.upper),
                "tight": b.tight,
                "a_sum_star": json_opt(b.a_sum_star),
            });
            format!("{obj}\n")
        }
    };
    emit(output, &text)
}

fn grid_points(min: f64, max: f64, step: f64) -> Result<Vec<f64>, UsageError> {
    if !(min >= 0.0 && min < max && step > 0.0) {
        return Err(UsageError(format!(
            "need 0 <= min < max and step > 0, got min {min}, max {max}, step {step}"
        )));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| min + step * i as f64).collect())
}

fn cmd_sweep(min: f64, max: f64, step: f64, output: &OutputArgs) -> Result<(), Failure> {
    let axis = grid_points(min, max, step)?;
    let mut text = String::new();
    if output.format == Format::Csv {
        text.push_str("alpha1,alpha2,region,lower,upper,tight,a_sum_star\n");
    }
    for &alpha1 in &axis {
        for &alpha2 in &axis {
            let (a, _) = canonical(alpha1, alpha2).map_err(|e| UsageError(e.to_string()))?;
            let b = bounds_at(&a);
            match output.format {
                Format::Csv => writeln!(
                    text,
                    "{},{},{},{},{},{},{}",
                    fmt9(alpha1),
                    fmt9(alpha2),
                    b.region.tag(),
                    fmt9_opt(b.lower),
                    fmt9(b.upper),
                    u8::from(b.tight),
                    fmt9_opt(b.a_sum_star),
                )
                .unwrap(),
                Format::Json => {
                    let obj = serde_json::json!({
                        "alpha1": json_num(alpha1),
                        "alpha2": json_num(alpha2),
                        "region": b.region.tag(),
                        "lower": json_opt(b.lower),
                        "upper": json_num(b.upper),
                        "tight": b.tight,
                        "a_sum_star": json_opt(b.a_sum_star),
                    });
                    writeln!(text, "{obj}").unwrap();
                }
            }
        }
    }
    emit(output, &text)
}

fn cmd_verify(step: f64, tol: f64, grid_step_a: f64, seed: u64) -> ExitCode {
    if !(step > 0.0 && tol > 0.0 && grid_step_a > 0.0 && grid_step_a <= 0.1) {
        eprintln!("error: step, tol and grid-step-a must be positive (grid-step-a <= 0.1)");
        return ExitCode::from(2);
    }
    let cfg = VerifyConfig {
        step,
        tol,
        grid_step_a,
        seed,
        perturb_theorem: 0.0,
    };
    let reports = run_battery(&cfg);
    let mut failed = false;
    for r in &reports {
        match &r.failure {
            None => println!("[PASS] {} ({} points)", r.name, r.points),
            Some(counterexample) => {
                failed = true;
                println!("[FAIL] {} ({} points): {counterexample}", r.name, r.points);
            }
        }
    }
    if failed {
        ExitCode::from(1)
    } else {
        println!("all checks passed");
        ExitCode::SUCCESS
    }
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, UsageError>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<T>()
                .map_err(|e| UsageError(format!("bad {what} `{tok}`: {e}")))
        })
        .collect()
}

fn cmd_slopes(
    selector: &str,
    k: &str,
    alpha2: &str,
    rhos: &str,
    trials: usize,
    seed: u64,
    output: &OutputArgs,
) -> Result<(), Failure> {
    let selectors: Vec<Selector> = if selector.eq_ignore_ascii_case("all") {
        Selector::ALL.to_vec()
    } else {
        parse_list(selector, "selector")?
    };
    let ks: Vec<u8> = if k.eq_ignore_ascii_case("all") {
        vec![0, 1, 2]
    } else {
        parse_list(k, "k")?
    };
    let alpha2s: Vec<f64> = parse_list(alpha2, "alpha2")?;
    let rho_grid: Vec<f64> = parse_list(rhos, "rho")?;

    let mut text = String::new();
    if output.format == Format::Csv {
        text.push_str("selector,k,alpha2,slope,expected,abs_err,r2\n");
    }
    for &sel in &selectors {
        for &kk in &ks {
            for &a2 in &alpha2s {
                let spec = CovarianceSpec {
                    selector: sel,
                    k: kk,
                    alpha2: a2,
                };
                let expected = sel
                    .expected(kk, a2)
                    .map_err(|e| UsageError(e.to_string()))?;
                let est = mc::logdet_slope(&spec, &rho_grid, trials, seed)
                    .map_err(|e| UsageError(e.to_string()))?;
                let abs_err = (est.slope - expected).abs();
                match output.format {
                    Format::Csv => writeln!(
                        text,
                        "{},{},{},{},{},{},{}",
                        sel.tag(),
                        kk,
                        fmt9(a2),
                        fmt9(est.slope),
                        fmt9(expected),
                        fmt9(abs_err),
                        fmt9(est.r_squared),
                    )
                    .unwrap(),
                    Format::Json => {
                        let obj = serde_json::json!({
                            "selector": sel.tag(),
                            "k": kk,
                            "alpha2": json_num(a2),
                            "slope": json_num(est.slope),
                            "expected": json_num(expected),
                            "abs_err": json_num(abs_err),
                            "r2": json_num(est.r_squared),
                        });
                        writeln!(text, "{obj}").unwrap();
                    }
                }
            }
        }
    }
    emit(output, &text)
}

fn cmd_ledger(alpha1: f64, alpha2: f64, output: &OutputArgs) -> Result<(), Failure> {
    let (a, swapped) =
        canonical(alpha1, alpha2).map_err(|e| UsageError(e.to_string()))?;
    if a.region() != RegionCase::BothWeak {
        return Err(UsageError(format!(
            "the 3-slot ledger applies to BOTH_WEAK only; ({alpha1}, {alpha2}) is {}. \
             Use `gdof bounds --alpha1 {alpha1} --alpha2 {alpha2}` for this region.",
            a.region().tag()
        ))
        .into());
    }
    let ledger = three_slot_ledger(&a).expect("region checked above");
    let text = match output.format {
        Format::Csv => {
            let mut s = String::from("slot,receiver,source,symbols,gdof\n");
            for e in &ledger.entries {
                writeln!(
                    s,
                    "{},{},{},\"{}\",{}",
                    e.slot,
                    e.receiver.index(),
                    e.source.tag(),
                    e.symbols,
                    fmt9(e.gdof),
                )
                .unwrap();
            }
            writeln!(s, ",1,TOTAL,\"d1\",{}", fmt9(ledger.d1)).unwrap();
            writeln!(s, ",2,TOTAL,\"d2\",{}", fmt9(ledger.d2)).unwrap();
            s
        }
        Format::Json => {
            let entries: Vec<serde_json::Value> = ledger
                .entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "slot": e.slot,
                        "receiver": e.receiver.index(),
                        "source": e.source.tag(),
                        "symbols": e.symbols,
                        "gdof": json_num(e.gdof),
                    })
                })
                .collect();
            let obj = serde_json::json!({
                "alpha1": json_num(alpha1),
                "alpha2": json_num(alpha2),
                "swapped": swapped,
                "entries": entries,
                "d1": json_num(ledger.d1),
                "d2": json_num(ledger.d2),
            });
            format!("{obj}\n")
        }
    };
    emit(output, &text)
}
