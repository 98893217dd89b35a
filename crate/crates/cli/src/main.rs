//! `qha`: runs experiment suites and writes JSON reports and CSV series.

mod config;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, ValueEnum};
use qha::io::{series_to_csv, write_text};
use qha::ExperimentReport;

use config::Settings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Verify,
    HausdorffYoung,
    WernerYoung,
    BochnerRiesz,
    GaussianWeyl,
    Equivalence,
    ParityLimit,
    MAtZero,
    TraceProbe,
    ModulationProbe,
    Refine,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Verify => "verify",
            Suite::HausdorffYoung => "hausdorff-young",
            Suite::WernerYoung => "werner-young",
            Suite::BochnerRiesz => "bochner-riesz",
            Suite::GaussianWeyl => "gaussian-weyl",
            Suite::Equivalence => "equivalence",
            Suite::ParityLimit => "parity-limit",
            Suite::MAtZero => "m-at-zero",
            Suite::TraceProbe => "trace-probe",
            Suite::ModulationProbe => "modulation-probe",
            Suite::Refine => "refine",
        }
    }

    fn default_grid(self) -> (usize, f64) {
        match self {
            Suite::BochnerRiesz | Suite::Equivalence => (128, 12.0),
            Suite::ModulationProbe => (24, 24f64.sqrt()),
            _ => (256, 12.0),
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Flags {
    /// Run configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid points per axis.
    #[arg(long)]
    n: Option<usize>,
    /// Length of the position box.
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "./qha-out")]
    out: PathBuf,
    /// Omit timestamps so that reports are byte-reproducible.
    #[arg(long)]
    frozen_clock: bool,
    /// Comma-separated values of eps^2.
    #[arg(long)]
    eps2: Option<String>,
    /// Symbol family: bochner_riesz, gaussian, sine, constant or csv.
    #[arg(long)]
    symbol: Option<String>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    value: Option<f64>,
    #[arg(long)]
    path: Option<PathBuf>,
    /// Comma-separated exponents (`inf` allowed).
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
}

#[derive(Debug, Parser)]
#[command(name = "qha", version, about = "Phase-space multiplier experiments")]
struct Cli {
    suite: Suite,
    #[command(flatten)]
    flags: Flags,
}

fn run(suite: Suite, s: &Settings) -> Result<Vec<ExperimentReport>, String> {
    match suite {
        Suite::Verify => suites::verify(s),
        Suite::HausdorffYoung => suites::hausdorff_young_suite(s),
        Suite::WernerYoung => suites::werner_young_suite(s),
        Suite::BochnerRiesz => suites::bochner_riesz_suite(s),
        Suite::GaussianWeyl => suites::gaussian_weyl_suite(s),
        Suite::Equivalence => suites::equivalence_suite(s),
        Suite::ParityLimit => suites::parity_limit_suite(s),
        Suite::MAtZero => suites::m_at_zero_suite(s),
        Suite::TraceProbe => suites::trace_probe_suite(s),
        Suite::ModulationProbe => suites::modulation_probe_suite(s),
        Suite::Refine => suites::refine(s),
    }
}

fn write_outputs(dir: &Path, suite: Suite, reports: &[ExperimentReport]) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let json = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(reports)
    }
    .map_err(|e| e.to_string())?;
    write_text(dir.join(format!("{}.json", suite.name())), &(json + "\n")).map_err(|e| e.to_string())?;
    for (i, r) in reports.iter().enumerate() {
        if r.series.is_empty() {
            continue;
        }
        let file = format!("{}_{:02}_{}.csv", suite.name(), i, r.name);
        write_text(dir.join(file), &series_to_csv(&r.series)).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn print_summary(suite: Suite, reports: &[ExperimentReport]) {
    if suite == Suite::GaussianWeyl {
        if let Some(r) = reports.first() {
            println!("{:>8} {:>14} {:>14} {:>14}", "eps2", "min_eig", "S1", "S2");
            let col = |k: &str| r.series.get(k).cloned().unwrap_or_default();
            let (e, m, s1, s2) = (col("eps2"), col("min_eigenvalue"), col("trace_norm"), col("hs_norm"));
            for i in 0..e.len() {
                println!("{:>8.4} {:>14.6e} {:>14.8} {:>14.8}", e[i], m[i], s1[i], s2[i]);
            }
        }
    }
    for r in reports {
        let tag = if r.checks.is_empty() {
            "REPORT"
        } else if r.pass {
            "PASS"
        } else {
            "FAIL"
        };
        let label = r.params.get("symbol").and_then(|v| v.as_str()).map(|s| format!(" [{s}]")).unwrap_or_default();
        println!("{tag:<6} {}{label}", r.name);
    }
}

fn init_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("QHA_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| format!("QHA_THREADS={v:?} is not a thread count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let (n, length) = cli.suite.default_grid();
    let settings = match Settings::resolve(&cli.flags, n, length) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut reports = match run(cli.suite, &settings) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if !settings.frozen_clock {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        for r in &mut reports {
            r.timestamp = Some(format!("{secs}"));
        }
    }
    if let Err(msg) = write_outputs(&settings.out, cli.suite, &reports) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    print_summary(cli.suite, &reports);
    let failing: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    if failing.is_empty() {
        return ExitCode::SUCCESS;
    }
    eprintln!("{} failing report(s):", failing.len());
    for r in failing {
        for c in r.failing_checks() {
            eprintln!("  {}: {} = {:.6e} ({} {:.6e})", r.name, c.name, c.value, c.relation, c.bound);
        }
    }
    ExitCode::from(1)
}
