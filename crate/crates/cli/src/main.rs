//! `ruzsa`: verify witnesses, compute Ruzsa numbers, run the bound scans,
//! check difference-set parameters, and replay the full reproduction
//! reports.
//!
//! Exit codes: 0 success, 1 verified-false, 2 usage or parse error,
//! 3 timeout with a resumable checkpoint.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use ruzsa_core::bounds::{maximal_pair, render_rational, scan, PairCandidate, ScanFilter, ScanRow};
use ruzsa_core::diffset::{test_c, DiffSetParams, TestCVerdict};
use ruzsa_core::pipeline::{
    reproduce_theorem1, reproduce_theorem2, verify_appendix, ReproOpts, ReproReport,
};
use ruzsa_core::search::{
    resume, ruzsa_number, Checkpoint, RuzsaOutcome, SearchOpts, DEFAULT_R_CEILING,
};
use ruzsa_core::zm::{first_violation, rep_function, verify_witness};
use ruzsa_core::ResidueSet;

const EXIT_OK: u8 = 0;
const EXIT_FALSE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "ruzsa", version, about = "Ruzsa numbers of cyclic groups")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Worker threads; defaults to RUZSA_THREADS or 1. Never changes any
    /// result, only runtime.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a set is a basis with all representation counts <= r.
    Verify {
        /// Set in the form "m:{a,b,c}".
        set: String,
        #[arg(short = 'r', long = "r")]
        r: u32,
    },
    /// Compute the least cap admitting a basis of Z_m, with a witness.
    Ruzsa {
        m: u64,
        #[arg(long, default_value_t = DEFAULT_R_CEILING)]
        ceiling: u32,
        /// Wall-clock budget, e.g. "30s", "5m", "1h". Default 5m.
        #[arg(long, default_value = "5m")]
        time_budget: String,
        /// Checkpoint path: resumed from if it exists, written on timeout.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
    },
    /// List (m, k) pairs surviving one of the bound filters.
    Scan {
        /// Inclusive range "lo..hi".
        #[arg(default_value = "21..500")]
        range: String,
        #[arg(long, value_enum, default_value = "eq5")]
        filter: FilterArg,
        /// Print only the lexicographically maximal surviving pair.
        #[arg(long)]
        max: bool,
    },
    /// Re-run the reproduction reports.
    Reproduce {
        #[arg(long, value_enum, default_value = "all")]
        stage: StageArg,
        /// Budget per exhaustive-search stage, e.g. "10m". Default 5s.
        #[arg(long, default_value = "5s")]
        time_budget: String,
        /// Treat budget-limited stages as failures.
        #[arg(long)]
        strict: bool,
        /// Directory to write resumable checkpoints of budget-limited
        /// stages into.
        #[arg(long)]
        checkpoint_dir: Option<PathBuf>,
    },
    /// Run the prime-power nonexistence test for a difference set.
    Diffset {
        #[arg(long)]
        v: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        lambda: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FilterArg {
    Eq5,
    Step1,
    Step2,
}

impl From<FilterArg> for ScanFilter {
    fn from(f: FilterArg) -> ScanFilter {
        match f {
            FilterArg::Eq5 => ScanFilter::Eq5,
            FilterArg::Step1 => ScanFilter::Step1,
            FilterArg::Step2 => ScanFilter::Step2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StageArg {
    All,
    T1,
    T2,
    Appendix,
}

fn parse_duration(text: &str) -> Result<Duration, String> {
    let text = text.trim();
    let (num, mult) = match text.chars().last() {
        Some('s') => (&text[..text.len() - 1], 1u64),
        Some('m') => (&text[..text.len() - 1], 60),
        Some('h') => (&text[..text.len() - 1], 3600),
        Some(c) if c.is_ascii_digit() => (text, 1),
        _ => return Err(format!("unparseable duration {text:?}")),
    };
    let n: u64 = num
        .parse()
        .map_err(|_| format!("unparseable duration {text:?}"))?;
    Ok(Duration::from_secs(n * mult))
}

fn parse_range(text: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {text:?}"))?;
    let lo: u64 = lo.parse().map_err(|_| format!("bad range bound {lo:?}"))?;
    let hi: u64 = hi.parse().map_err(|_| format!("bad range bound {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok((lo, hi))
}

fn threads_default(cli: &Cli) -> usize {
    cli.threads
        .or_else(|| {
            std::env::var("RUZSA_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    match &cli.command {
        Command::Verify { set, r } => cmd_verify(cli, set, *r),
        Command::Ruzsa {
            m,
            ceiling,
            time_budget,
            checkpoint,
        } => cmd_ruzsa(cli, *m, *ceiling, time_budget, checkpoint.as_deref()),
        Command::Scan { range, filter, max } => cmd_scan(cli, range, (*filter).into(), *max),
        Command::Reproduce {
            stage,
            time_budget,
            strict,
            checkpoint_dir,
        } => cmd_reproduce(cli, *stage, time_budget, *strict, checkpoint_dir.as_deref()),
        Command::Diffset { v, k, lambda } => cmd_diffset(cli, *v, *k, *lambda),
    }
}

fn cmd_verify(cli: &Cli, spec: &str, r: u32) -> Result<u8, String> {
    let set: ResidueSet = spec.parse().map_err(|e| format!("{e}"))?;
    let m = set.modulus();
    let ok = verify_witness(m, &set, r).map_err(|e| format!("{e}"))?;
    let rep = rep_function(&set);
    let violation = first_violation(&set, r);
    match cli.format {
        Format::Text => {
            if ok {
                println!("ok: {set} has 1 <= R(n) <= {r} for all n");
                println!("rep: {:?}", rep.counts);
            } else {
                let (n, count) = violation.expect("violation exists when not ok");
                println!("violation: n = {n} has R(n) = {count} (cap {r})");
            }
        }
        Format::Json => {
            let payload = serde_json::json!({
                "set": set.to_string(),
                "m": m.get(),
                "r": r,
                "ok": ok,
                "rep": rep.counts,
                "violation": violation.map(|(n, count)| {
                    serde_json::json!({"n": n, "count": count})
                }),
            });
            println!("{payload}");
        }
        Format::Csv => {
            println!("n,count");
            for (n, c) in rep.counts.iter().enumerate() {
                println!("{n},{c}");
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FALSE })
}

fn cmd_ruzsa(
    cli: &Cli,
    m: u64,
    ceiling: u32,
    budget: &str,
    checkpoint: Option<&std::path::Path>,
) -> Result<u8, String> {
    let budget = parse_duration(budget)?;
    let opts = SearchOpts {
        threads: threads_default(cli),
        time_budget: Some(budget),
        ..Default::default()
    };
    let outcome = match checkpoint {
        Some(path) if path.exists() => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{e}"))?;
            let cp = Checkpoint::from_json(&text).map_err(|e| format!("{e}"))?;
            if cp.m != m {
                return Err(format!("checkpoint is for m = {}, not {m}", cp.m));
            }
            let r = cp.r;
            let out = resume(&cp, &opts).map_err(|e| format!("{e}"))?;
            match out.verdict {
                ruzsa_core::search::Verdict::Found(witness) => RuzsaOutcome::Determined {
                    r,
                    witness,
                    nodes: out.nodes_explored,
                },
                ruzsa_core::search::Verdict::Exhausted => {
                    // this cap is now certified empty; continue upward
                    continue_upward(m, r + 1, ceiling, &opts)?
                }
                ruzsa_core::search::Verdict::Timeout(cp) => RuzsaOutcome::Timeout {
                    r,
                    checkpoint: cp,
                    nodes: 0,
                },
            }
        }
        _ => ruzsa_number(m, ceiling, &opts).map_err(|e| format!("{e}"))?,
    };
    match outcome {
        RuzsaOutcome::Determined { r, witness, nodes } => {
            match cli.format {
                Format::Text => {
                    println!("R = {r} for m = {m}");
                    println!("witness: {witness}");
                    println!("nodes: {nodes}");
                }
                Format::Json | Format::Csv => {
                    let payload = serde_json::json!({
                        "m": m, "r": r,
                        "witness": witness.to_string(),
                        "nodes": nodes,
                    });
                    println!("{payload}");
                }
            }
            Ok(EXIT_OK)
        }
        RuzsaOutcome::Timeout {
            r, checkpoint: cp, ..
        } => {
            let path = match checkpoint {
                Some(p) => p.to_path_buf(),
                None => PathBuf::from(format!("ruzsa-{m}-r{r}.checkpoint.json")),
            };
            std::fs::write(&path, cp.to_json()).map_err(|e| format!("{e}"))?;
            match cli.format {
                Format::Text => {
                    println!("timeout at cap r = {r}; checkpoint: {}", path.display());
                }
                Format::Json | Format::Csv => {
                    let payload = serde_json::json!({
                        "m": m, "timeout_at_r": r,
                        "checkpoint": path.display().to_string(),
                    });
                    println!("{payload}");
                }
            }
            Ok(EXIT_TIMEOUT)
        }
    }
}

fn continue_upward(
    m: u64,
    r_from: u32,
    ceiling: u32,
    opts: &SearchOpts,
) -> Result<RuzsaOutcome, String> {
    use ruzsa_core::search::{find_basis, SearchTask, Verdict};
    let mut nodes = 0;
    for r in r_from..=ceiling {
        let task = SearchTask::new(m, r).map_err(|e| format!("{e}"))?;
        let out = find_basis(&task, opts).map_err(|e| format!("{e}"))?;
        nodes += out.nodes_explored;
        match out.verdict {
            Verdict::Found(witness) => return Ok(RuzsaOutcome::Determined { r, witness, nodes }),
            Verdict::Exhausted => continue,
            Verdict::Timeout(cp) => {
                return Ok(RuzsaOutcome::Timeout {
                    r,
                    checkpoint: cp,
                    nodes,
                })
            }
        }
    }
    Err(format!("no basis found up to cap {ceiling}"))
}

fn cmd_scan(cli: &Cli, range: &str, filter: ScanFilter, max: bool) -> Result<u8, String> {
    let (lo, hi) = parse_range(range)?;
    if max {
        let pair = maximal_pair(filter, lo, hi);
        match cli.format {
            Format::Text => match pair {
                Some(PairCandidate { m, k }) => println!("({m},{k})"),
                None => println!("none"),
            },
            Format::Json | Format::Csv => {
                let payload = serde_json::json!({
                    "max": pair.map(|p| serde_json::json!({"m": p.m, "k": p.k})),
                });
                println!("{payload}");
            }
        }
        return Ok(EXIT_OK);
    }
    let rows: Vec<ScanRow> = scan(filter, lo, hi);
    match cli.format {
        Format::Text => {
            for row in rows.iter().filter(|r| r.survives) {
                println!("({},{})", row.m, row.k);
            }
        }
        Format::Json => {
            let payload: Vec<_> = rows
                .iter()
                .filter(|r| r.survives)
                .map(|r| {
                    serde_json::json!({
                        "m": r.m, "k": r.k,
                        "margin": r.margin.as_ref().map(render_rational),
                    })
                })
                .collect();
            println!("{}", serde_json::json!(payload));
        }
        Format::Csv => {
            println!("m,k,verdict,margin_num,margin_den");
            for row in &rows {
                let (num, den) = row
                    .margin
                    .as_ref()
                    .map(|q| (q.numer().to_string(), q.denom().to_string()))
                    .unwrap_or_default();
                println!(
                    "{},{},{},{},{}",
                    row.m,
                    row.k,
                    if row.survives { "survives" } else { "excluded" },
                    num,
                    den
                );
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_reproduce(
    cli: &Cli,
    stage: StageArg,
    budget: &str,
    strict: bool,
    checkpoint_dir: Option<&std::path::Path>,
) -> Result<u8, String> {
    let budget = parse_duration(budget)?;
    let opts = ReproOpts {
        search_budget: Some(budget),
        threads: threads_default(cli),
        ..Default::default()
    };
    let mut reports: Vec<ReproReport> = Vec::new();
    if matches!(stage, StageArg::All | StageArg::T1) {
        reports.push(reproduce_theorem1().map_err(|e| format!("{e}"))?);
    }
    if matches!(stage, StageArg::All | StageArg::T2) {
        reports.push(reproduce_theorem2(&opts).map_err(|e| format!("{e}"))?);
    }
    if matches!(stage, StageArg::All | StageArg::Appendix) {
        reports.push(verify_appendix().map_err(|e| format!("{e}"))?);
    }

    if let Some(dir) = checkpoint_dir {
        std::fs::create_dir_all(dir).map_err(|e| format!("{e}"))?;
        for report in &reports {
            for (name, cp) in &report.checkpoints {
                let path = dir.join(format!("{name}.checkpoint.json"));
                std::fs::write(&path, cp.to_json()).map_err(|e| format!("{e}"))?;
            }
        }
    }

    match cli.format {
        Format::Text => {
            for report in &reports {
                print!("{}", report.render_text());
            }
        }
        Format::Json | Format::Csv => {
            let payload: Vec<_> = reports
                .iter()
                .map(|r| serde_json::to_value(r).expect("report serializes"))
                .collect();
            println!("{}", serde_json::json!(payload));
        }
    }

    let failed = reports.iter().any(|r| r.any_failed());
    let incomplete = reports.iter().any(|r| r.any_incomplete());
    Ok(if failed || (strict && incomplete) {
        EXIT_FALSE
    } else {
        EXIT_OK
    })
}

fn cmd_diffset(cli: &Cli, v: u64, k: u64, lambda: u64) -> Result<u8, String> {
    let params = DiffSetParams::new(v, k, lambda).map_err(|e| format!("{e}"))?;
    let verdict = test_c(params).map_err(|e| format!("{e}"))?;
    match cli.format {
        Format::Text => match verdict {
            TestCVerdict::RuledOut(w) => println!(
                "ruled_out: (p,w,f,e,l) = ({},{},{},{},{})",
                w.p, w.w, w.f, w.e, w.l
            ),
            TestCVerdict::Passes => println!("passes"),
        },
        Format::Json | Format::Csv => {
            let payload = match verdict {
                TestCVerdict::RuledOut(w) => serde_json::json!({
                    "verdict": "ruled_out",
                    "witness": {"p": w.p, "w": w.w, "f": w.f, "e": w.e, "l": w.l},
                }),
                TestCVerdict::Passes => serde_json::json!({
                    "verdict": "passes",
                    "witness": null,
                }),
            };
            println!("{payload}");
        }
    }
    Ok(EXIT_OK)
}
