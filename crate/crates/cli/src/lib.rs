//! Command implementations for the `anyonic` binary: single runs, φ-sweeps
//! and the verification suite, plus the CSV, SVG and report writers they use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyonic::analysis::{analyze, linspace, sweep_phi, trace_series, PatternReport, SweepTable};
use anyonic::config::{parse_real, presets};
use anyonic::entropy::annotate_trajectory;
use anyonic::verification::{run_checks, CheckOutcome};
use anyonic::{spectral_info, trajectory, Error, ExperimentConfig, Trajectory};

pub mod svg;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const VERIFICATION_FAILED: u8 = 1;
    pub const INVALID_INPUT: u8 = 2;
    pub const NUMERIC: u8 = 3;
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io { path: PathBuf, message: String },
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numeric() => exit::NUMERIC,
            _ => exit::INVALID_INPUT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, message } => write!(f, "{}: {message}", path.display()),
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Which plot/table files a run writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Svg,
    Both,
}

impl Format {
    fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    fn svg(self) -> bool {
        matches!(self, Format::Svg | Format::Both)
    }
}

/// A preset name or a path to a config file.
pub fn load_config(arg: &str) -> CliResult<ExperimentConfig> {
    if presets::source(arg).is_some() {
        return Ok(presets::get(arg)?);
    }
    let path = Path::new(arg);
    if !path.exists() {
        let known: Vec<&str> = presets::names().collect();
        return Err(CliError::Usage(format!(
            "'{arg}' is neither a preset ({}) nor an existing config file",
            known.join(", ")
        )));
    }
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    Ok(ExperimentConfig::parse(&text)?)
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io { path: path.to_path_buf(), message: e.to_string() }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))
}

/// Fixed 17-significant-digit scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// `(header, values)` for every CSV column of an annotated trajectory.
pub fn csv_columns(traj: &Trajectory) -> Vec<(String, &[f64])> {
    let obs = &traj.observables;
    let mut cols: Vec<(String, &[f64])> = vec![
        ("t".into(), &traj.times),
        ("tr_omega".into(), &obs.tr_omega),
        ("neg_ln_tr".into(), &obs.neg_ln_tr),
        ("s1_omega".into(), &obs.s1_omega),
    ];
    for (alpha, series) in &obs.s_alpha {
        cols.push((format!("s_alpha_{}", alpha.label()), series));
    }
    cols.push(("s_h_1".into(), &obs.von_neumann));
    cols.push(("von_neumann".into(), &obs.von_neumann));
    if let Some(d) = &obs.dist {
        cols.push(("dist".into(), d));
    }
    cols
}

pub fn csv_table(traj: &Trajectory) -> String {
    let cols = csv_columns(traj);
    let mut out = cols.iter().map(|c| c.0.as_str()).collect::<Vec<_>>().join(",");
    out.push('\n');
    for i in 0..traj.len() {
        let row: Vec<String> = cols.iter().map(|c| fmt_f64(c.1[i])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn report_text(config: &ExperimentConfig, report: &PatternReport, warnings: &[String]) -> String {
    let info = spectral_info(&config.params);
    let p = &config.params;
    let sections: [Vec<(&str, String)>; 3] = [
        vec![
            ("name", config.name.clone()),
            ("phi", fmt_f64(p.phi)),
            ("r", fmt_f64(p.r)),
            ("theta", fmt_f64(p.theta)),
            ("r1", fmt_f64(p.r1)),
            ("theta1", fmt_f64(p.theta1)),
            ("t_max", fmt_f64(config.t_max)),
            ("dt", fmt_f64(config.dt)),
        ],
        vec![
            ("delta", fmt_f64(info.delta)),
            ("p", fmt_f64(info.p)),
            ("q", fmt_f64(info.q)),
            ("phase", info.phase.as_str().into()),
            ("lambda", fmt_opt(info.lambda)),
            ("amp_ratio", fmt_opt(info.amp_ratio)),
        ],
        vec![
            ("pattern", report.pattern.to_string()),
            ("predicted_slope", fmt_f64(report.predicted_slope)),
            ("measured_slope", fmt_opt(report.measured_slope)),
            ("osc_frequency_predicted", fmt_f64(report.osc_frequency_predicted)),
            ("osc_frequency_measured", fmt_opt(report.osc_frequency_measured)),
            ("relaxation_rate_predicted", fmt_f64(report.relaxation_rate_predicted)),
            ("relaxation_rate_measured", fmt_opt(report.relaxation_rate_measured)),
            ("pearson_corr_s1_vs_neglntr", fmt_opt(report.pearson_corr_s1_vs_neglntr)),
        ],
    ];
    let mut blocks: Vec<String> = sections
        .iter()
        .map(|sec| sec.iter().map(|(k, v)| format!("{k}: {v}\n")).collect())
        .collect();
    if !warnings.is_empty() {
        blocks.push(warnings.iter().map(|w| format!("warning: {w}\n")).collect());
    }
    blocks.join("\n")
}

/// Parses a report back into key/value pairs (later keys win).
pub fn parse_report(text: &str) -> std::collections::BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| l.split_once(": "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Everything a run produces, before it is written out.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub trajectory: Trajectory,
    pub report: PatternReport,
    pub warnings: Vec<String>,
}

pub fn execute(config: &ExperimentConfig) -> CliResult<RunArtifacts> {
    let warnings = config.validate()?;
    let traj = trajectory(config)?;
    let traj = annotate_trajectory(traj, &config.alphas, config.dist_pair.as_ref())?;
    let report = analyze(&traj, &spectral_info(&config.params))?;
    Ok(RunArtifacts { trajectory: traj, report, warnings })
}

/// Runs `config` and writes its outputs to `out`. Returns the written paths.
pub fn run(config: &ExperimentConfig, out: &Path, format: Option<Format>) -> CliResult<Vec<PathBuf>> {
    let art = execute(config)?;
    ensure_dir(out)?;
    let (csv, svg) = match format {
        Some(f) => (f.csv(), f.svg()),
        None => (config.outputs.csv, config.outputs.svg),
    };
    let mut written = Vec::new();
    if csv {
        let path = out.join(format!("{}.csv", config.name));
        write_file(&path, &csv_table(&art.trajectory))?;
        written.push(path);
    }
    if svg {
        let cols = csv_columns(&art.trajectory);
        let times = cols[0].1;
        for (name, values) in &cols[1..] {
            let path = out.join(format!("{}_{name}.svg", config.name));
            write_file(&path, &svg::line_plot(&format!("{} {name}", config.name), "t", name, times, values))?;
            written.push(path);
        }
    }
    if config.outputs.report {
        let path = out.join(format!("{}_report.txt", config.name));
        write_file(&path, &report_text(config, &art.report, &art.warnings))?;
        written.push(path);
    }
    Ok(written)
}

/// Parses `start:stop:count`; endpoints accept the config angle syntax.
pub fn parse_phi_range(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(CliError::Usage(format!("φ range '{text}' must look like start:stop:count")));
    };
    let start = parse_real(start)?;
    let stop = parse_real(stop)?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid point count '{count}'")))?;
    if count == 0 {
        return Err(CliError::Usage("point count must be positive".into()));
    }
    if count > 1 && !(start < stop) {
        return Err(CliError::Usage("φ range must have start < stop".into()));
    }
    Ok(linspace(start, stop, count))
}

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = String::from("phi,delta,p,q,phase,pattern,slope,frequency,rate\n");
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.phi),
            fmt_f64(r.delta),
            fmt_f64(r.p),
            fmt_f64(r.q),
            r.phase.as_str(),
            r.pattern,
            fmt_opt(r.slope),
            fmt_opt(r.frequency),
            fmt_opt(r.rate)
        );
    }
    let c = table.continuity;
    out.push_str("# continuity: largest jump between adjacent rows\n");
    for (k, v) in [("delta", c.delta), ("slope", c.slope), ("frequency", c.frequency), ("rate", c.rate)] {
        let _ = writeln!(out, "# {k}: {}", fmt_f64(v));
    }
    out
}

/// Sweeps φ over `phis` on top of `base` and writes `<name>_sweep.csv`.
pub fn sweep(base: &ExperimentConfig, phis: &[f64], out: &Path) -> CliResult<(PathBuf, SweepTable)> {
    base.validate()?;
    for &phi in phis {
        base.with_phi(phi).validate()?;
    }
    let table = sweep_phi(base, phis, trace_series)?;
    ensure_dir(out)?;
    let path = out.join(format!("{}_sweep.csv", base.name));
    write_file(&path, &sweep_csv(&table))?;
    Ok((path, table))
}

/// Runs the verification suite and renders its table.
pub fn verify(only: Option<&str>) -> CliResult<(Vec<CheckOutcome>, String)> {
    let outcomes = run_checks(only)?;
    Ok((outcomes.clone(), verify_table(&outcomes)))
}

pub fn verify_table(outcomes: &[CheckOutcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        s.push_str(&o.line());
        s.push('\n');
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let total: f64 = outcomes.iter().map(|o| o.elapsed.as_secs_f64()).sum();
    let _ = writeln!(s, "{} checks, {failed} failed, {total:.2} s", outcomes.len());
    s
}

pub fn verify_exit_code(outcomes: &[CheckOutcome]) -> u8 {
    if outcomes.iter().all(|o| o.passed) {
        exit::SUCCESS
    } else {
        exit::VERIFICATION_FAILED
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    fn outcome(passed: bool) -> CheckOutcome {
        CheckOutcome {
            id: 1,
            group: "oracle",
            name: "x",
            passed,
            detail: String::new(),
            elapsed: Duration::ZERO,
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(verify_exit_code(&[outcome(true), outcome(true)]), 0);
        assert_eq!(verify_exit_code(&[outcome(true), outcome(false)]), 1);
        assert_eq!(CliError::Core(Error::InvalidInput("x".into())).exit_code(), 2);
        assert_eq!(CliError::Core(Error::NumericDegradation("x".into())).exit_code(), 3);
        assert_eq!(CliError::Core(Error::VanishingTrace { trace: 0.0 }).exit_code(), 3);
    }

    #[test]
    fn phi_range_parsing() {
        let g = parse_phi_range("-pi/2:-pi/4:3").unwrap();
        assert_eq!(g.len(), 3);
        assert!((g[1] + 3.0 * std::f64::consts::PI / 8.0).abs() < 1e-15);
        assert_eq!(parse_phi_range("-0.5:-0.5:1").unwrap(), vec![-0.5]);
        assert!(parse_phi_range("-1:-2:4").is_err());
        assert!(parse_phi_range("-1:-0.5").is_err());
        assert!(parse_phi_range("-1:-0.5:0").is_err());
    }

    #[test]
    fn float_format_is_fixed_width_scientific() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-0.25), "-2.5000000000000000e-1");
    }
}
