//! Batch harness over the `open_xxz` verification suites. One run writes a
//! JSON report and prints a fixed-width summary; the exit status is 0 when
//! every hard check passed, 1 on a failed check and 2 on a bad configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use open_xxz::params::ChainMode;
use open_xxz::report::{CheckRecord, VerificationReport, SCHEMA_VERSION};
use open_xxz::spectral::BetheRoots;
use open_xxz::{suites, DoubleDouble, Real};
use serde::Serialize;
use thiserror::Error;

pub const MAX_N: usize = 6;
pub const OUT_DIR_ENV: &str = "OPEN_XXZ_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{what} failed for seed {seed}: {source}")]
    Compute {
        what: &'static str,
        seed: u64,
        #[source]
        source: open_xxz::Error,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyAxioms,
    Solve,
    ScalarProduct,
    Asymptotics,
    FullReport,
}

impl Command {
    fn label(self) -> &'static str {
        match self {
            Self::VerifyAxioms => "verify-axioms",
            Self::Solve => "solve",
            Self::ScalarProduct => "scalar-product",
            Self::Asymptotics => "asymptotics",
            Self::FullReport => "full-report",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    /// Double-double arithmetic.
    Extended,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[default]
    Inhomogeneous,
    Homogeneous,
}

impl From<Mode> for ChainMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Inhomogeneous => ChainMode::Inhomogeneous,
            Mode::Homogeneous => ChainMode::Homogeneous,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub n: usize,
    pub trials: usize,
    pub precision: Precision,
    pub mode: ChainMode,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_N).contains(&self.n) {
            return Err(CliError::Config(format!("N must lie in [1, {MAX_N}], got {}", self.n)));
        }
        if self.trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        Ok(())
    }

    fn default_file_name(&self) -> String {
        format!("{}-n{}-seed{}-{:?}.json", self.command.label(), self.n, self.seed, self.precision).to_lowercase()
    }

    /// `--out`, else `$OPEN_XXZ_OUT_DIR/<name>`, else `<name>` in the working directory.
    pub fn resolve_output(&self, env_dir: Option<&Path>) -> PathBuf {
        match (&self.output_path, env_dir) {
            (Some(p), _) => p.clone(),
            (None, Some(dir)) => dir.join(self.default_file_name()),
            (None, None) => PathBuf::from(self.default_file_name()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "open-xxz", version, about = "Verification harness for the open XXZ chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Yang-Baxter, reflection, commutativity, crossing and Hamiltonian checks.
    VerifyAxioms(Args),
    /// Bethe roots of every transfer-matrix eigenstate.
    Solve(Args),
    /// Pairings against the determinant formula.
    ScalarProduct(Args),
    /// Large spectral parameter suites.
    Asymptotics(Args),
    /// All of the above.
    FullReport(Args),
}

#[derive(Debug, clap::Args)]
pub struct Args {
    #[arg(long = "N", default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = Precision::Double)]
    pub precision: Precision,
    #[arg(long, value_enum, default_value_t = Mode::Inhomogeneous)]
    pub mode: Mode,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CliCommand {
    pub fn into_config(self) -> RunConfig {
        let (command, a) = match self {
            Self::VerifyAxioms(a) => (Command::VerifyAxioms, a),
            Self::Solve(a) => (Command::Solve, a),
            Self::ScalarProduct(a) => (Command::ScalarProduct, a),
            Self::Asymptotics(a) => (Command::Asymptotics, a),
            Self::FullReport(a) => (Command::FullReport, a),
        };
        RunConfig { command, seed: a.seed, n: a.n, trials: a.trials, precision: a.precision, mode: a.mode.into(), output_path: a.out }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSet {
    pub eigen_index: Option<usize>,
    /// `(re, im)` of each root.
    pub roots: Vec<(f64, f64)>,
    pub residuals: Vec<f64>,
    pub condition: f64,
}

impl RootSet {
    fn new<T: Real>(r: &BetheRoots<T>) -> Self {
        Self {
            eigen_index: r.eigen_index,
            roots: r.roots.iter().map(|z| open_xxz::real::to_pair(*z)).collect(),
            residuals: r.residuals.clone(),
            condition: r.condition,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub summary: BTreeMap<String, String>,
    pub records: Vec<CheckRecord>,
}

impl Section {
    fn new(name: &str, report: VerificationReport) -> Self {
        Self { name: name.into(), passed: report.passed(), summary: BTreeMap::new(), records: report.records }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub passed: bool,
    pub sections: Vec<Section>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub root_sets: Vec<RootSet>,
}

impl RunReport {
    /// First failed hard check, as `(section, record)`.
    pub fn first_failure(&self) -> Option<(&str, &CheckRecord)> {
        self.sections
            .iter()
            .flat_map(|s| s.records.iter().map(move |r| (s.name.as_str(), r)))
            .find(|(_, r)| r.hard && !r.passed)
    }

    /// One row per (section, check): count, failures, largest value, tolerance.
    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<16} {:<30} {:>6} {:>6} {:>12} {:>10}  status", "section", "check", "count", "fail", "max", "tol");
        for s in &self.sections {
            let mut rows: Vec<(&str, usize, usize, f64, f64, bool)> = Vec::new();
            for r in &s.records {
                let failed = (r.hard && !r.passed) as usize;
                match rows.iter_mut().find(|row| row.0 == r.name) {
                    Some(row) => {
                        row.1 += 1;
                        row.2 += failed;
                        row.3 = if row.3.is_nan() || r.value.is_nan() { f64::NAN } else { row.3.max(r.value) };
                        row.5 &= !r.hard;
                    }
                    None => rows.push((&r.name, 1, failed, r.value, r.tolerance, !r.hard)),
                }
            }
            for (name, count, fail, max, tol, soft) in rows {
                let status = if fail > 0 { "FAIL" } else if soft { "info" } else { "ok" };
                let _ = writeln!(out, "{:<16} {:<30} {:>6} {:>6} {:>12.3e} {:>10.1e}  {status}", s.name, name, count, fail, max, tol);
            }
        }
        let _ = writeln!(out, "overall: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

fn compute<T: Real>(cfg: &RunConfig) -> Result<(Vec<Section>, Vec<RootSet>)> {
    let (seed, n, mode) = (cfg.seed, cfg.n, cfg.mode);
    let wrap = |what: &'static str| move |source| CliError::Compute { what, seed, source };
    let mut sections = Vec::new();
    let mut root_sets = Vec::new();
    let all = cfg.command == Command::FullReport;
    if all || cfg.command == Command::VerifyAxioms {
        sections.push(Section::new("axioms", suites::verify_axioms::<T>(seed, n, mode).map_err(wrap("verify-axioms"))?));
    }
    if all || cfg.command == Command::Solve {
        let (report, roots) = suites::solve_all::<T>(seed, n, mode).map_err(wrap("solve"))?;
        sections.push(Section::new("solve", report));
        root_sets = roots.iter().map(RootSet::new).collect();
    }
    if all {
        sections.push(Section::new("offshell", suites::offshell_trials::<T>(seed, n, mode, None).map_err(wrap("offshell"))?));
        sections.push(Section::new("nu", suites::nu_check::<T>(seed, n, mode).map_err(wrap("nu"))?));
    }
    if all || cfg.command == Command::ScalarProduct {
        let t = suites::scalar_product_trials::<T>(seed, n, mode, cfg.trials).map_err(wrap("scalar-product"))?;
        let mut s = Section::new("scalar_product", t.report);
        s.summary.insert("branch".into(), format!("{:?}", t.branch).to_lowercase());
        s.summary.insert("max_relative_error".into(), format!("{:e}", t.max_relative_error));
        s.summary.insert("trials".into(), cfg.trials.to_string());
        sections.push(s);
    }
    if all || cfg.command == Command::Asymptotics {
        sections.push(Section::new("asymptotics", suites::asymptotics::<T>(seed, n, mode).map_err(wrap("asymptotics"))?));
    }
    Ok((sections, root_sets))
}

/// Runs the configured suites; does not touch the filesystem.
pub fn build_report(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let (sections, root_sets) = match cfg.precision {
        Precision::Double => compute::<f64>(cfg)?,
        Precision::Extended => compute::<DoubleDouble>(cfg)?,
    };
    let passed = sections.iter().all(|s| s.passed);
    Ok(RunReport { schema_version: SCHEMA_VERSION, config: cfg.clone(), passed, sections, root_sets })
}

pub fn render_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Outcome of [`run`]: the report, where it was written, and the exit code.
#[derive(Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub path: PathBuf,
    pub exit_code: i32,
    /// Names the failed invariant and the seed; `None` on success.
    pub failure: Option<String>,
}

/// Names the first failed hard check and how to reproduce it.
pub fn failure_message(cfg: &RunConfig, report: &RunReport) -> Option<String> {
    report.first_failure().map(|(section, r)| {
        format!(
            "hard check `{}` in section `{section}` failed: value {:e} exceeds tolerance {:e}; reproduce with `{} --seed {} --N {}`",
            r.name,
            r.value,
            r.tolerance,
            cfg.command.label(),
            cfg.seed,
            cfg.n
        )
    })
}

pub fn run(cfg: &RunConfig, env_dir: Option<&Path>) -> Result<RunOutcome> {
    let report = build_report(cfg)?;
    let path = cfg.resolve_output(env_dir);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    }
    std::fs::write(&path, render_json(&report)).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let failure = failure_message(cfg, &report);
    let exit_code = if report.passed { 0 } else { 1 };
    Ok(RunOutcome { report, path, exit_code, failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(command: Command, n: usize) -> RunConfig {
        RunConfig { command, seed: 3, n, trials: 2, precision: Precision::Double, mode: ChainMode::Inhomogeneous, output_path: None }
    }

    #[test]
    fn validation() {
        assert!(cfg(Command::Solve, 1).validate().is_ok());
        assert!(cfg(Command::Solve, 6).validate().is_ok());
        for bad in [RunConfig { n: 0, ..cfg(Command::Solve, 1) }, RunConfig { n: 7, ..cfg(Command::Solve, 1) }, RunConfig { trials: 0, ..cfg(Command::Solve, 1) }] {
            let e = bad.validate().unwrap_err();
            assert_eq!(e.exit_code(), 2);
        }
    }

    #[test]
    fn output_resolution() {
        let c = cfg(Command::ScalarProduct, 2);
        assert_eq!(c.resolve_output(None), PathBuf::from("scalar-product-n2-seed3-double.json"));
        assert_eq!(c.resolve_output(Some(Path::new("/x"))), PathBuf::from("/x/scalar-product-n2-seed3-double.json"));
        let explicit = RunConfig { output_path: Some("r.json".into()), ..c };
        assert_eq!(explicit.resolve_output(Some(Path::new("/x"))), PathBuf::from("r.json"));
    }

    #[test]
    fn failure_names_check_and_seed() {
        let c = cfg(Command::Solve, 2);
        let mut report = build_report(&c).unwrap();
        assert!(failure_message(&c, &report).is_none());
        report.sections[0].records[1] = CheckRecord::new("eigenvalue_held_out", 1.0, 1e-8);
        let msg = failure_message(&c, &report).unwrap();
        assert!(msg.contains("eigenvalue_held_out") && msg.contains("--seed 3") && msg.contains("--N 2"), "{msg}");
    }

    #[test]
    fn summary_marks_failures() {
        let c = cfg(Command::Solve, 1);
        let mut report = build_report(&c).unwrap();
        assert!(report.summary_table().ends_with("overall: PASS\n"));
        report.sections[0].records[0] = CheckRecord::new("bethe_residual", f64::NAN, 1e-8);
        report.passed = false;
        let table = report.summary_table();
        assert!(table.contains("FAIL"));
        assert!(table.contains("NaN"));
    }
}
