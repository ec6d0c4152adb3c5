//! `sppcert` command line: analyze states, emit figure data, sweep families,
//! run the verification suites.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Deserialize;

use sppcert::bounds::{self, AnalysisInput, BoundReport};
use sppcert::families::FamilySpec;
use sppcert::fock::{ObservableSet, PhotonDistribution};
use sppcert::oracle::{
    default_comparison_grids, exact_quantities, run_comparison_suite, run_saturation_suite,
    run_set_inclusion_suite, run_soundness_suite, SuiteOutcome,
};
use sppcert::qd;
use sppcert::Error as CoreError;

const EXIT_HELP: &str = "Exit codes:\n  0  success\n  1  usage error, malformed input, or verification violations\n  2  insufficient data (e.g. vacuum input leaves g2 undefined)\n  3  I/O error";

#[derive(Parser)]
#[command(
    name = "sppcert",
    version,
    about = "Certified single-photon projection bounds from g2, mean photon number, and vacuum projection",
    after_help = EXIT_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a distribution or observables JSON (stdin or --in) into a bound report
    Analyze {
        /// Read input from this file instead of stdin
        #[arg(long = "in", value_name = "PATH")]
        input: Option<PathBuf>,
    },
    /// Emit one figure's data as CSV (fig1..fig5)
    Figure {
        /// One of: fig1, fig2, fig3, fig4, fig5
        which: String,
        /// Write CSV here instead of stdout
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Grid step override (defaults: 0.005 coherent, 0.0025 thermal, 0.01 fig5)
        #[arg(long, value_name = "X")]
        grid_step: Option<f64>,
        /// Truncation cap for family construction
        #[arg(long, value_name = "X", default_value_t = 1e-14)]
        tail_cap: f64,
    },
    /// Sweep a state family over a parameter grid and emit selected columns as CSV
    Sweep {
        /// Family kind (coherent|thermal|fock|qd|random) or a FamilySpec JSON object
        #[arg(long)]
        family: String,
        #[arg(long, value_name = "X")]
        grid_start: f64,
        #[arg(long, value_name = "X")]
        grid_stop: f64,
        #[arg(long, value_name = "X")]
        grid_step: f64,
        /// Comma-separated column names (see --help-columns)
        #[arg(long)]
        columns: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "X", default_value_t = 1e-14)]
        tail_cap: f64,
    },
    /// Run a verification suite (soundness|set-inclusion|saturation|comparison)
    Verify {
        suite: String,
        #[arg(long, value_name = "N", default_value_t = 100_000)]
        trials: u64,
        #[arg(long, value_name = "N", default_value_t = 42)]
        seed: u64,
        /// Largest Fock index of sampled states (default 6, set-inclusion 8)
        #[arg(long, value_name = "N")]
        max_n: Option<u32>,
        /// Saturation grid step
        #[arg(long, value_name = "X", default_value_t = 0.01)]
        grid_step: f64,
        /// Dump violated checks (full distribution and intermediates) as JSON lines
        #[arg(long, value_name = "PATH")]
        diagnostics: Option<PathBuf>,
    },
}

enum CliError {
    Usage(String),
    Malformed(String),
    Insufficient(String),
    Io(String),
    Violations(u64),
}

impl CliError {
    fn report(&self) -> (String, u8) {
        match self {
            CliError::Usage(m) => (format!("usage error: {m}"), 1),
            CliError::Malformed(m) => (format!("malformed input: {m}"), 1),
            CliError::Insufficient(m) => (format!("insufficient data: {m}"), 2),
            CliError::Io(m) => (format!("io error: {m}"), 3),
            CliError::Violations(n) => (format!("verification found {n} violation(s)"), 1),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InsufficientData(m) => CliError::Insufficient(m),
            CoreError::NotADistribution(m)
            | CoreError::Domain(m)
            | CoreError::NotApplicable(m)
            | CoreError::NoSolution(m) => CliError::Malformed(m),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are not errors.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (msg, code) = e.report();
            eprintln!("sppcert: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { input } => cmd_analyze(input),
        Command::Figure {
            which,
            out,
            grid_step,
            tail_cap,
        } => cmd_figure(&which, out.as_deref(), grid_step, tail_cap),
        Command::Sweep {
            family,
            grid_start,
            grid_stop,
            grid_step,
            columns,
            out,
            tail_cap,
        } => cmd_sweep(
            &family,
            grid_start,
            grid_stop,
            grid_step,
            &columns,
            out.as_deref(),
            tail_cap,
        ),
        Command::Verify {
            suite,
            trials,
            seed,
            max_n,
            grid_step,
            diagnostics,
        } => cmd_verify(&suite, trials, seed, max_n, grid_step, diagnostics.as_deref()),
    }
}

// ---------------------------------------------------------------------------
// analyze

#[derive(Deserialize)]
struct DistributionInput {
    probs: Vec<f64>,
    #[serde(default)]
    tail_bound: f64,
}

fn cmd_analyze(input: Option<PathBuf>) -> Result<(), CliError> {
    let text = match input {
        Some(path) => fs::read_to_string(&path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            buf
        }
    };
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Malformed(e.to_string()))?;
    let report = report_for_value(&value)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(())
}

fn report_for_value(value: &serde_json::Value) -> Result<BoundReport, CliError> {
    let input = if value.get("probs").is_some() {
        let raw: DistributionInput = serde_json::from_value(value.clone())
            .map_err(|e| CliError::Malformed(e.to_string()))?;
        let d = PhotonDistribution::validate(&raw.probs, raw.tail_bound)?;
        let obs = exact_quantities(&d);
        if obs.g2.is_none() {
            return Err(CliError::Insufficient(
                "g2 is undefined for a vacuum distribution".into(),
            ));
        }
        AnalysisInput::from(&obs)
    } else {
        serde_json::from_value(value.clone()).map_err(|e| CliError::Malformed(e.to_string()))?
    };
    Ok(bounds::analyze(&input)?)
}

// ---------------------------------------------------------------------------
// CSV plumbing

/// Fixed 12-significant-digit scientific notation; `nan`/`inf` spelled out.
/// Deterministic and locale-independent.
fn fmt_value(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.11e}")
    }
}

fn write_csv(out: Option<&Path>, header: &str, rows: &[Vec<f64>]) -> Result<(), CliError> {
    let mut text = String::with_capacity(rows.len() * 96);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| fmt_value(v)).collect();
        text.push_str(&line.join(","));
        text.push('\n');
    }
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn grid(stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Usage(format!("grid step must be > 0, got {step}")));
    }
    let points = (stop / step).round() as usize;
    if points == 0 {
        return Err(CliError::Usage("grid step larger than the grid range".into()));
    }
    Ok((1..=points).map(|k| k as f64 * step).collect())
}

// ---------------------------------------------------------------------------
// figure

fn cmd_figure(
    which: &str,
    out: Option<&Path>,
    grid_step: Option<f64>,
    tail_cap: f64,
) -> Result<(), CliError> {
    check_tail_cap(tail_cap)?;
    let coherent = FamilySpec::Coherent { mean_photons: 0.0 };
    let thermal = FamilySpec::Thermal { mean_photons: 0.0 };
    let (header, rows) = match which {
        "fig1" => absolute_bound_rows(&coherent, grid_step.unwrap_or(0.005), 1.0, tail_cap)?,
        "fig2" => relative_bound_rows(&coherent, grid_step.unwrap_or(0.005), 1.0, tail_cap)?,
        "fig3" => absolute_bound_rows(&thermal, grid_step.unwrap_or(0.0025), 0.5, tail_cap)?,
        "fig4" => relative_bound_rows(&thermal, grid_step.unwrap_or(0.0025), 0.5, tail_cap)?,
        "fig5" => designed_state_rows(grid_step.unwrap_or(0.01))?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown figure '{other}' (expected fig1..fig5)"
            )))
        }
    };
    write_csv(out, header, &rows)
}

type Table = (&'static str, Vec<Vec<f64>>);

/// Exact SPP with both absolute bound pairs along a family grid.
fn absolute_bound_rows(
    family: &FamilySpec,
    step: f64,
    stop: f64,
    tail_cap: f64,
) -> Result<Table, CliError> {
    let mut rows = Vec::new();
    for n in grid(stop, step)? {
        let obs = exact_quantities(&family.with_principal(n).build(tail_cap)?);
        let g2 = obs.g2.expect("family states at n > 0 have photons");
        let (lv, uv) = bounds::spp_bounds_vacuum(g2, obs.p0);
        let (lp, up) = bounds::spp_bounds_photon(g2, obs.mean_n);
        rows.push(vec![n, obs.p1, lv, uv, lp, up, lp - lv]);
    }
    Ok((
        "x,exact_p1,lower_vacuum,upper_vacuum,lower_photon,upper_photon,diff_lower",
        rows,
    ))
}

/// Exact SMPPR with both relative lower bounds along a family grid; `nan`
/// marks grid points outside a criterion's validity range.
fn relative_bound_rows(
    family: &FamilySpec,
    step: f64,
    stop: f64,
    tail_cap: f64,
) -> Result<Table, CliError> {
    let mut rows = Vec::new();
    for n in grid(stop, step)? {
        let obs = exact_quantities(&family.with_principal(n).build(tail_cap)?);
        let g2 = obs.g2.expect("family states at n > 0 have photons");
        let exact_ratio = if obs.q_multi > 0.0 {
            obs.p1 / obs.q_multi
        } else {
            f64::INFINITY
        };
        let eff_vac = (1.0 - obs.p0) * g2;
        let eff_pho = obs.mean_n * g2;
        let lv = if eff_vac < 0.5 {
            bounds::smppr_lower_vacuum(eff_vac).expect("in range")
        } else {
            f64::NAN
        };
        let lp = if eff_pho <= 1.0 {
            bounds::smppr_lower_photon(eff_pho).expect("in range")
        } else {
            f64::NAN
        };
        rows.push(vec![n, exact_ratio, lv, lp, lv / lp]);
    }
    Ok((
        "x,exact_ratio,lower_vacuum,lower_photon,ratio_vacuum_over_photon",
        rows,
    ))
}

/// The designed quantum-dot sweep (background pinned to the g2 = 1/2 boundary).
fn designed_state_rows(step: f64) -> Result<Table, CliError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Usage(format!("grid step must be > 0, got {step}")));
    }
    let mut values = Vec::new();
    let mut k = 0u32;
    loop {
        let x = k as f64 * step;
        if x > 0.99 + 1e-12 {
            break;
        }
        values.push(x.min(0.99));
        k += 1;
    }
    let records = qd::figure5_sweep(&values)?;
    let rows = records
        .iter()
        .map(|r| {
            vec![
                r.p1_tilde,
                r.n_alpha,
                r.g2,
                r.mean_n,
                r.exact_p1,
                r.lower_photon,
                r.lower_vacuum,
            ]
        })
        .collect();
    Ok((
        "p1_tilde,n_alpha,g2,mean_n,exact_p1,lower_photon,lower_vacuum",
        rows,
    ))
}

// ---------------------------------------------------------------------------
// sweep

const SWEEP_COLUMNS: &[&str] = &[
    "mean_n",
    "g2",
    "variance",
    "mandel_q",
    "p0",
    "p1",
    "q",
    "n2",
    "g2_multi",
    "eff_g2_vacuum",
    "eff_g2_photon",
    "zubizarreta_g2_lower",
    "spp_lower",
    "spp_upper",
    "smppr_lower",
    "q_upper",
    "p0_plus_p1_lower",
    "lower_vacuum",
    "upper_vacuum",
    "lower_photon",
    "upper_photon",
    "smppr_lower_vacuum",
    "smppr_lower_photon",
    "m1",
    "m2",
    "m3",
];

fn cmd_sweep(
    family: &str,
    start: f64,
    stop: f64,
    step: f64,
    columns: &str,
    out: Option<&Path>,
    tail_cap: f64,
) -> Result<(), CliError> {
    check_tail_cap(tail_cap)?;
    let spec = parse_family(family)?;
    let cols: Vec<&str> = columns.split(',').map(str::trim).collect();
    for c in &cols {
        if !SWEEP_COLUMNS.contains(c) {
            return Err(CliError::Usage(format!(
                "unknown column '{c}' (available: {})",
                SWEEP_COLUMNS.join(", ")
            )));
        }
    }
    if !(step > 0.0 && step.is_finite() && stop >= start) {
        return Err(CliError::Usage(
            "grid requires step > 0 and stop >= start".into(),
        ));
    }
    let mut rows = Vec::new();
    let mut k = 0u64;
    loop {
        let x = start + k as f64 * step;
        if x > stop + 1e-12 {
            break;
        }
        let obs = exact_quantities(&spec.with_principal(x).build(tail_cap)?);
        let report = obs
            .g2
            .map(|_| bounds::analyze(&AnalysisInput::from(&obs)).expect("observables in range"));
        let mut row = vec![x];
        row.extend(cols.iter().map(|c| column_value(c, &obs, report.as_ref())));
        rows.push(row);
        k += 1;
    }
    let header = format!("x,{}", cols.join(","));
    write_csv(out, &header, &rows)
}

fn parse_family(family: &str) -> Result<FamilySpec, CliError> {
    if family.trim_start().starts_with('{') {
        return serde_json::from_str(family).map_err(|e| CliError::Malformed(e.to_string()));
    }
    match family {
        "coherent" => Ok(FamilySpec::Coherent { mean_photons: 0.0 }),
        "thermal" => Ok(FamilySpec::Thermal { mean_photons: 0.0 }),
        "fock" => Ok(FamilySpec::Fock { n: 0 }),
        "qd" => Ok(FamilySpec::QdBackground {
            p1_tilde: 0.0,
            n_alpha: 0.0,
        }),
        "random" => Ok(FamilySpec::RandomTruncated { max_n: 6, seed: 0 }),
        other => Err(CliError::Usage(format!(
            "unknown family '{other}' (expected coherent|thermal|fock|qd|random or a JSON spec)"
        ))),
    }
}

fn column_value(name: &str, obs: &ObservableSet, report: Option<&BoundReport>) -> f64 {
    let undef = f64::NAN;
    let g2 = obs.g2.unwrap_or(undef);
    match name {
        "mean_n" => obs.mean_n,
        "g2" => g2,
        "variance" => obs.variance,
        "mandel_q" => obs.mandel_q.unwrap_or(undef),
        "p0" => obs.p0,
        "p1" => obs.p1,
        "q" => obs.q_multi,
        "n2" => obs.n2.unwrap_or(undef),
        "g2_multi" => obs.g2_multi.unwrap_or(undef),
        "eff_g2_vacuum" => report.and_then(|r| r.eff_g2_vacuum).unwrap_or(undef),
        "eff_g2_photon" => report.and_then(|r| r.eff_g2_photon).unwrap_or(undef),
        "zubizarreta_g2_lower" => {
            bounds::zubizarreta_lower_g2(obs.mean_n).unwrap_or(undef)
        }
        "spp_lower" => report.map(|r| r.spp_lower).unwrap_or(undef),
        "spp_upper" => report.map(|r| r.spp_upper).unwrap_or(undef),
        "smppr_lower" => report.and_then(|r| r.smppr_lower).unwrap_or(undef),
        "q_upper" => report.and_then(|r| r.q_upper).unwrap_or(undef),
        "p0_plus_p1_lower" => report.and_then(|r| r.p0_plus_p1_lower).unwrap_or(undef),
        "lower_vacuum" => obs
            .g2
            .map(|g| bounds::spp_bounds_vacuum(g, obs.p0).0)
            .unwrap_or(undef),
        "upper_vacuum" => obs
            .g2
            .map(|g| bounds::spp_bounds_vacuum(g, obs.p0).1)
            .unwrap_or(undef),
        "lower_photon" => obs
            .g2
            .map(|g| bounds::spp_bounds_photon(g, obs.mean_n).0)
            .unwrap_or(undef),
        "upper_photon" => obs
            .g2
            .map(|g| bounds::spp_bounds_photon(g, obs.mean_n).1)
            .unwrap_or(undef),
        "smppr_lower_vacuum" => match obs.g2 {
            Some(g) if (1.0 - obs.p0) * g < 0.5 => {
                bounds::smppr_lower_vacuum((1.0 - obs.p0) * g).expect("in range")
            }
            _ => undef,
        },
        "smppr_lower_photon" => match obs.g2 {
            Some(g) if obs.mean_n * g <= 1.0 => {
                bounds::smppr_lower_photon(obs.mean_n * g).expect("in range")
            }
            _ => undef,
        },
        "m1" | "m2" | "m3" => match obs.g2 {
            Some(g) => {
                let (m1, m2, m3) = bounds::classify_sets(g, obs.mean_n);
                let flag = match name {
                    "m1" => m1,
                    "m2" => m2,
                    _ => m3,
                };
                if flag { 1.0 } else { 0.0 }
            }
            None => undef,
        },
        _ => unreachable!("column names validated up front"),
    }
}

fn check_tail_cap(tail_cap: f64) -> Result<(), CliError> {
    if !(tail_cap > 0.0 && tail_cap <= 1e-6) {
        return Err(CliError::Usage(format!(
            "tail-cap must be in (0, 1e-6], got {tail_cap}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(
    suite: &str,
    trials: u64,
    seed: u64,
    max_n: Option<u32>,
    grid_step: f64,
    diagnostics: Option<&Path>,
) -> Result<(), CliError> {
    if trials < 1 {
        return Err(CliError::Usage("trials must be >= 1".into()));
    }
    let outcome: SuiteOutcome = match suite {
        "soundness" => run_soundness_suite(trials, max_n.unwrap_or(6), seed),
        "set-inclusion" => run_set_inclusion_suite(trials, max_n.unwrap_or(8), seed),
        "saturation" => {
            let grid = grid(8.0, grid_step)?;
            run_saturation_suite(&grid)
        }
        "comparison" => run_comparison_suite(&default_comparison_grids()),
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite '{other}' (expected soundness|set-inclusion|saturation|comparison)"
            )))
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&outcome.report).expect("report serializes")
    );
    if !outcome.violations.is_empty() {
        if let Some(path) = diagnostics {
            let mut text = String::new();
            for v in &outcome.violations {
                text.push_str(&serde_json::to_string(v).expect("record serializes"));
                text.push('\n');
            }
            fs::write(path, text)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            eprintln!(
                "sppcert: wrote {} violation record(s) to {}",
                outcome.violations.len(),
                path.display()
            );
        }
        return Err(CliError::Violations(outcome.report.violations));
    }
    Ok(())
}
