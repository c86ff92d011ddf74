use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use quadcf::histogram::write_histogram;
use quadcf::{run_sweep, sqrt_stats, ClassData, Error, Mode, Result, SweepConfig};
use quadcf_core::gk::DEFAULT_DIGIT_CAP;
use quadcf_core::kuzmin::kuzmin_montecarlo_with_cap;
use quadcf_core::{cf_expand, xsection_checks, Surd};

#[derive(Parser)]
#[command(name = "quadcf", version, about = "Continued fractions of quadratic irrationals and their digit statistics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Continued fraction of sqrt(n), or of (p + sqrt d)/q given as p,q,d
    Cf {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(long)]
        json: bool,
    },
    /// Rho cycles of reduced forms of discriminant d
    Class {
        d: BigInt,
        #[arg(long)]
        json: bool,
    },
    /// Fundamental solution of x^2 - d y^2 = 4 and the regulator
    Pell {
        d: BigInt,
        #[arg(long)]
        json: bool,
    },
    /// Digit statistics of the period of sqrt(n)
    Stats {
        #[arg(long)]
        sqrt: BigInt,
        #[arg(long, default_value_t = DEFAULT_DIGIT_CAP)]
        digit_cap: usize,
        /// Print the full record as JSON
        #[arg(long)]
        json: bool,
        /// Also write the digit histogram as CSV
        #[arg(long)]
        histogram: Option<PathBuf>,
    },
    /// Digit statistics over a range of discriminants or of n
    Sweep {
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
        #[arg(long, default_value_t = 8)]
        class_cap: usize,
        #[arg(long)]
        fundamental_only: bool,
        #[arg(long, default_value_t = DEFAULT_DIGIT_CAP)]
        digit_cap: usize,
        #[arg(long, value_enum, default_value_t = Mode::Discriminant)]
        mode: Mode,
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        out_jsonl: Option<PathBuf>,
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Worker threads (0 = all CPUs)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Accepted for symmetry with the other commands; sweeps are deterministic
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Measure-theoretic checks of the cross-section return map (JSON report)
    Xsection {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo law of the n-th continued-fraction digit (CSV)
    Kuzmin {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_DIGIT_CAP)]
        digit_cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_surd(s: &str) -> Result<Surd> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let int = |t: &str| t.parse::<BigInt>().map_err(|_| Error::Input(format!("not an integer: {t:?}")));
    match parts[..] {
        [n] => Ok(Surd::sqrt(int(n)?)?),
        [p, q, d] => Ok(Surd::new(int(p)?, int(q)?, int(d)?)?),
        _ => Err(Error::Input(format!("expected n or p,q,d, got {s:?}"))),
    }
}

fn list(v: &[BigInt]) -> String {
    let items: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", items.join(", "))
}

fn stdout_err(e: io::Error) -> Error {
    Error::io(Path::new("<stdout>"), e)
}

fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    match cli.cmd {
        Cmd::Cf { x, json } => {
            let x = parse_surd(&x)?;
            let e = cf_expand(&x);
            if json {
                let v = json!({ "surd": x, "expansion": e });
                writeln!(out, "{v}").map_err(stdout_err)?;
            } else {
                writeln!(out, "{x}\npreperiod {}\nperiod {}", list(&e.preperiod), list(&e.period)).map_err(stdout_err)?;
            }
        }
        Cmd::Class { d, json } => {
            let data = ClassData::compute(&d)?;
            if json {
                let cycles: Vec<_> = data
                    .cycles
                    .iter()
                    .zip(&data.periods)
                    .map(|(c, p)| json!({ "forms": c, "period": p.iter().map(ToString::to_string).collect::<Vec<_>>() }))
                    .collect();
                let v = json!({ "d": d.to_string(), "h_plus": data.h_plus(), "h": data.h(), "cycles": cycles });
                writeln!(out, "{v}").map_err(stdout_err)?;
            } else {
                writeln!(out, "d = {d}, h+ = {}, h = {}", data.h_plus(), data.h()).map_err(stdout_err)?;
                for (c, p) in data.cycles.iter().zip(&data.periods) {
                    let forms: Vec<String> = c.iter().map(ToString::to_string).collect();
                    writeln!(out, "cycle of {} forms, period {}: {}", c.len(), list(p), forms.join(" ")).map_err(stdout_err)?;
                }
            }
        }
        Cmd::Pell { d, json } => {
            let sol = quadcf_core::pell4_fundamental(&d)?;
            let reg = sol.ln_unit();
            if json {
                let v = json!({ "d": d.to_string(), "x": sol.x.to_string(), "y": sol.y.to_string(), "regulator": reg });
                writeln!(out, "{v}").map_err(stdout_err)?;
            } else {
                writeln!(out, "x = {}\ny = {}\nregulator = {reg}", sol.x, sol.y).map_err(stdout_err)?;
            }
        }
        Cmd::Stats { sqrt, digit_cap, json, histogram } => {
            let r = sqrt_stats(&sqrt, digit_cap)?;
            if json {
                writeln!(out, "{}", serde_json::to_string(&r).expect("record serializes")).map_err(stdout_err)?;
            } else {
                writeln!(
                    out,
                    "sqrt {sqrt}: period length {}, tv {}, chi2 {}\nd = {}, h+ = {}, fundamental {}",
                    r.total_period, r.agg_tv, r.agg_chi2, r.d, r.h_plus, r.fundamental
                )
                .map_err(stdout_err)?;
            }
            if let Some(path) = histogram {
                let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
                write_histogram(BufWriter::new(file), &r.agg_stats).map_err(|e| Error::io(&path, e))?;
            }
        }
        Cmd::Sweep {
            min,
            max,
            class_cap,
            fundamental_only,
            digit_cap,
            mode,
            out_csv,
            out_jsonl,
            cache,
            jobs,
            seed,
        } => {
            let cfg = SweepConfig {
                min,
                max,
                class_cap,
                fundamental_only,
                digit_cap,
                mode,
                out_csv,
                out_jsonl,
                cache,
                jobs,
                seed,
            };
            let outcome = run_sweep(&cfg)?;
            write!(out, "{}", outcome.summary).map_err(stdout_err)?;
        }
        Cmd::Xsection { samples, seed } => {
            let report = xsection_checks(samples, seed)?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            writeln!(out, "{text}").map_err(stdout_err)?;
        }
        Cmd::Kuzmin { n, samples, seed, digit_cap, out: path } => {
            let s = kuzmin_montecarlo_with_cap(n, samples, seed, digit_cap)?;
            match path {
                Some(path) => {
                    let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
                    write_histogram(BufWriter::new(file), &s).map_err(|e| Error::io(&path, e))?;
                }
                None => write_histogram(&mut *out, &s).map_err(|e| stdout_err(e.into()))?,
            }
        }
    }
    out.flush().map_err(stdout_err)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let stdout = io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
