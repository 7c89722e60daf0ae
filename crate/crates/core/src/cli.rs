//! Command orchestration behind the `qcs` binary.
//!
//! Every command takes a [`RunConfig`] and returns an [`Outcome`]: the
//! rendered table or report plus a flag for violated invariants. Nothing in
//! the output depends on wall-clock time or thread count, so two runs with
//! the same configuration write identical bytes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bounds::{
    all_bounds, best_bound, lower_bound_thm47, lower_bound_thm51, payne_weinberger, quasidisc_mk,
    SpectralBound, DEFAULT_N_QUAD,
};
use crate::error::{Error, Result};
use crate::fem::{mesh_for_map, solve_map, EigenOptions, Mesher, SpectralReport};
use crate::qcmaps::{make_ellipse_map, AnalyticQCMap};
use crate::special::DISC_MU1;

/// Relative slack allowed between a lower bound and the FEM eigenvalue.
pub const DOMINANCE_BUDGET: f64 = 0.02;

/// Default exponent for the `beta`-regular bound.
pub const DEFAULT_BETA: f64 = 2.0;

/// Environment variable capping the rayon pool.
pub const THREADS_ENV: &str = "QCS_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Estimate,
    Verify,
    Constants,
    ReproduceExamples,
    Bounds,
    Mesh,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Estimate => "estimate",
            Command::Verify => "verify",
            Command::Constants => "constants",
            Command::ReproduceExamples => "reproduce-examples",
            Command::Bounds => "bounds",
            Command::Mesh => "mesh",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Parse(format!("unknown format `{s}` (expected csv or json)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub map_id: String,
    pub beta: Option<f64>,
    pub n_radial: usize,
    pub n_angular: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub seed: u64,
    pub m_eigs: usize,
    pub k_list: Vec<f64>,
    pub mesher: Mesher,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            map_id: "ellipse:a=2,b=1".into(),
            beta: None,
            n_radial: 32,
            n_angular: 128,
            out: None,
            format: OutputFormat::Csv,
            seed: 7,
            m_eigs: 4,
            k_list: vec![1.0, 1.5, 2.0, 4.0],
            mesher: Mesher::Pullback,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn map(&self) -> Result<AnalyticQCMap> {
        self.map_id.parse()
    }

    pub fn beta_or_default(&self) -> f64 {
        self.beta.unwrap_or(DEFAULT_BETA)
    }

    pub fn eigen_options(&self) -> EigenOptions {
        EigenOptions { m: self.m_eigs, seed: self.seed, ..Default::default() }
    }

    /// Where `constants` writes its `K log10_M` plot data, next to `out`.
    pub fn plot_path(&self) -> Option<PathBuf> {
        self.out.as_ref().map(|p| p.with_extension("plot.dat"))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_radial < 4 || self.n_angular < 16 {
            return Err(Error::InvalidResolution(format!(
                "need n_radial >= 4 and n_angular >= 16, got ({}, {})",
                self.n_radial, self.n_angular
            )));
        }
        if self.m_eigs < 2 {
            return Err(Error::InvalidParams(format!("m_eigs must be >= 2, got {}", self.m_eigs)));
        }
        if let Some(b) = self.beta {
            if !(b > 1.0) || !b.is_finite() {
                return Err(Error::InvalidParams(format!("beta must be a finite number > 1, got {b}")));
            }
        }
        if let Some(k) = self.k_list.iter().find(|k| !(**k >= 1.0) || !k.is_finite()) {
            return Err(Error::InvalidParams(format!("every K must be finite and >= 1, got {k}")));
        }
        Ok(())
    }
}

/// Rendered output of a command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    /// Extra lines meant for the terminal even when `body` goes to a file.
    pub summary: Vec<String>,
    /// Additional files, written next to the main output.
    pub extra_files: Vec<(PathBuf, String)>,
    pub violation: bool,
}

impl Outcome {
    fn plain(body: String) -> Self {
        Self { body, summary: Vec::new(), extra_files: Vec::new(), violation: false }
    }
}

/// Exit codes of the binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATION: i32 = 2;
    pub const SOLVER_FAILURE: i32 = 3;
    pub const CONFIG_ERROR: i32 = 4;
}

/// Exit code for an error: numerical failures give 3, bad input gives 4.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnknownMap(_)
        | Error::Parse(_)
        | Error::InvalidParams(_)
        | Error::InvalidResolution(_)
        | Error::Io(_) => exit::CONFIG_ERROR,
        _ => exit::SOLVER_FAILURE,
    }
}

/// Applies `QCS_THREADS` to the global rayon pool. Unset or unparsable
/// values leave rayon's default in place.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    match config.command {
        Command::Estimate => cmd_estimate(config),
        Command::Verify => cmd_verify(config),
        Command::Constants => cmd_constants(config),
        Command::ReproduceExamples => cmd_reproduce_examples(config),
        Command::Bounds => cmd_bounds(config),
        Command::Mesh => cmd_mesh(config),
    }
}

/// Writes the outcome to `config.out` (or returns it for stdout).
/// Returns the text that should go to stdout.
pub fn emit(config: &RunConfig, outcome: &Outcome) -> Result<String> {
    for (path, text) in &outcome.extra_files {
        std::fs::write(path, text)?;
    }
    let mut stdout = String::new();
    match &config.out {
        Some(path) => write_file(path, &outcome.body)?,
        None => stdout.push_str(&outcome.body),
    }
    for line in &outcome.summary {
        stdout.push_str(line);
        stdout.push('\n');
    }
    Ok(stdout)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

/// Every bound for the configured map with the best applicable one flagged
/// inside its parameter record.
pub fn estimate_bounds(config: &RunConfig) -> Result<(Vec<SpectralBound>, Option<usize>)> {
    let map = config.map()?;
    let mut bounds = all_bounds(&map, config.beta_or_default(), DEFAULT_N_QUAD)?;
    let best = best_bound(&bounds);
    for (i, b) in bounds.iter_mut().enumerate() {
        b.params.insert("best".into(), json!(Some(i) == best));
    }
    Ok((bounds, best))
}

/// One row per bound: `kind,value,log10_value,param_json`.
pub fn cmd_estimate(config: &RunConfig) -> Result<Outcome> {
    let (bounds, best) = estimate_bounds(config)?;
    let body = match config.format {
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = bounds
                .iter()
                .map(|b| vec![b.kind.to_string(), num(b.value), num(b.log10_value), b.param_json()])
                .collect();
            csv_string(&["kind", "value", "log10_value", "param_json"], &rows)?
        }
        OutputFormat::Json => json_string(&json!({ "map": config.map_id, "best": best, "bounds": bounds })),
    };
    let mut out = Outcome::plain(body);
    if let Some(i) = best {
        out.summary.push(format!("best: {} = {:.6e}", bounds[i].kind, bounds[i].value));
    }
    Ok(out)
}

/// One row per bound with the quadrature error in its own column.
pub fn cmd_bounds(config: &RunConfig) -> Result<Outcome> {
    let map = config.map()?;
    let bounds = all_bounds(&map, config.beta_or_default(), DEFAULT_N_QUAD)?;
    let body = match config.format {
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = bounds
                .iter()
                .map(|b| {
                    vec![
                        b.kind.to_string(),
                        num(b.value),
                        num(b.log10_value),
                        serde_json::to_string(&b.params).expect("params serialize"),
                        b.quadrature_error.map(num).unwrap_or_default(),
                    ]
                })
                .collect();
            csv_string(&["kind", "value", "log10_value", "parameters", "quadrature_error"], &rows)?
        }
        OutputFormat::Json => json_string(&bounds),
    };
    Ok(Outcome::plain(body))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub map: String,
    pub mesher: Mesher,
    pub n_radial: usize,
    pub n_angular: usize,
    pub report: SpectralReport,
    pub dominance_holds: bool,
    /// Kinds of applicable bounds exceeding `mu_1 (1 + budget)`.
    pub violations: Vec<String>,
}

/// Observed order from three nested resolutions, without an exact oracle:
/// `ln(|d_1| / |d_2|) / ln(h_1 / h_2)` for successive differences `d`.
fn richardson_slope(coarse: &SpectralReport, mid: &SpectralReport, fine: &SpectralReport) -> Option<f64> {
    let d1 = (coarse.mu1_fem - mid.mu1_fem).abs();
    let d2 = (mid.mu1_fem - fine.mu1_fem).abs();
    let ratio = coarse.mesh_h / mid.mesh_h;
    (d1 > 0.0 && d2 > 0.0 && ratio > 1.0).then(|| (d1 / d2).ln() / ratio.ln())
}

/// FEM solve, bound attachment and the dominance check.
pub fn verify(config: &RunConfig) -> Result<VerifyReport> {
    let map = config.map()?;
    let opts = config.eigen_options();
    let mut report = solve_map(&map, config.mesher, config.n_radial, config.n_angular, &opts)?;
    // two coarser levels for an observed convergence order
    if config.n_radial >= 16 && config.n_angular >= 64 {
        let level = |k: usize| {
            let na = (config.n_angular / k) & !1;
            solve_map(&map, config.mesher, config.n_radial / k, na, &opts)
        };
        let coarse = level(4)?;
        let mid = level(2)?;
        report.convergence_slope = richardson_slope(&coarse, &mid, &report);
    }
    report.bounds = all_bounds(&map, config.beta_or_default(), DEFAULT_N_QUAD)?;
    let violations: Vec<String> = report
        .bounds
        .iter()
        .filter(|b| b.applicable && !b.holds_for(report.mu1_fem, DOMINANCE_BUDGET))
        .map(|b| b.kind.to_string())
        .collect();
    Ok(VerifyReport {
        map: map.id(),
        mesher: config.mesher,
        n_radial: config.n_radial,
        n_angular: config.n_angular,
        dominance_holds: violations.is_empty(),
        violations,
        report,
    })
}

pub fn cmd_verify(config: &RunConfig) -> Result<Outcome> {
    let v = verify(config)?;
    let body = match config.format {
        OutputFormat::Json => json_string(&v),
        OutputFormat::Csv => {
            let mut rows = vec![vec![
                "fem_mu1".to_string(),
                num(v.report.mu1_fem),
                num(v.report.mu1_fem.log10()),
                serde_json::to_string(&json!({
                    "mesh_h": v.report.mesh_h,
                    "n_dofs": v.report.n_dofs,
                    "solver": v.report.solver,
                    "mu_sequence": v.report.mu_sequence,
                }))
                .expect("json"),
            ]];
            rows.extend(v.report.bounds.iter().map(|b| {
                vec![b.kind.to_string(), num(b.value), num(b.log10_value), b.param_json()]
            }));
            csv_string(&["kind", "value", "log10_value", "param_json"], &rows)?
        }
    };
    let mut out = Outcome::plain(body);
    out.summary.push(format!(
        "{}: mu1_fem = {:.6} (h = {:.4}, {} dofs); dominance {}",
        v.map,
        v.report.mu1_fem,
        v.report.mesh_h,
        v.report.n_dofs,
        if v.dominance_holds { "holds".to_string() } else { format!("violated by {}", v.violations.join(", ")) }
    ));
    out.violation = !v.dominance_holds;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRow {
    #[serde(rename = "K")]
    pub k: f64,
    pub log10_m: f64,
    pub log10_m_star: f64,
    pub beta_star: f64,
    pub beta_opt: f64,
    pub beta_tilde: f64,
    /// `beta - 1` columns keep the digits that `beta` itself rounds away.
    pub beta_star_minus_one: f64,
    pub beta_opt_minus_one: f64,
    pub beta_tilde_minus_one: f64,
}

pub fn constants_table(k_list: &[f64]) -> Result<Vec<ConstantsRow>> {
    k_list
        .par_iter()
        .map(|&k| {
            let c = quasidisc_mk(k)?;
            Ok(ConstantsRow {
                k,
                log10_m: c.log10_m,
                log10_m_star: c.log10_m_star(),
                beta_star: c.beta_star(),
                beta_opt: c.beta_opt(),
                beta_tilde: c.beta_tilde(),
                beta_star_minus_one: c.delta_star,
                beta_opt_minus_one: c.delta_opt,
                beta_tilde_minus_one: c.delta_tilde,
            })
        })
        .collect()
}

pub fn cmd_constants(config: &RunConfig) -> Result<Outcome> {
    let rows = constants_table(&config.k_list)?;
    let body = match config.format {
        OutputFormat::Json => json_string(&rows),
        OutputFormat::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.k.to_string(),
                        format!("{:.12}", r.log10_m),
                        format!("{:.12}", r.log10_m_star),
                        r.beta_star.to_string(),
                        r.beta_opt.to_string(),
                        r.beta_tilde.to_string(),
                        num(r.beta_star_minus_one),
                        num(r.beta_opt_minus_one),
                        num(r.beta_tilde_minus_one),
                    ]
                })
                .collect();
            csv_string(
                &[
                    "K",
                    "log10_M",
                    "log10_M_star",
                    "beta_star",
                    "beta_opt",
                    "beta_tilde",
                    "beta_star_minus_one",
                    "beta_opt_minus_one",
                    "beta_tilde_minus_one",
                ],
                &table,
            )?
        }
    };
    let mut out = Outcome::plain(body);
    if let Some(path) = config.plot_path() {
        let mut plot = String::from("# K log10_M\n");
        for r in &rows {
            plot.push_str(&format!("{} {:.12}\n", r.k, r.log10_m));
        }
        out.extra_files.push((path, plot));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleRow {
    pub example: String,
    pub map: String,
    pub thm47: f64,
    pub classical: f64,
    pub thm51: f64,
    pub fem_mu1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThinEllipseRow {
    pub a: f64,
    pub b: f64,
    pub a_minus_b: f64,
    /// `a^2 - b^2`.
    pub jacobian_inverse: f64,
    pub thm47: f64,
    pub classical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ordering {
    pub label: String,
    pub lesser: f64,
    pub greater: f64,
    pub holds: bool,
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {:.6} < {:.6} {}",
            self.label,
            self.lesser,
            self.greater,
            if self.holds { "holds" } else { "FAILS" }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExamplesReport {
    pub examples: Vec<ExampleRow>,
    pub thin_ellipse: Vec<ThinEllipseRow>,
    pub orderings: Vec<Ordering>,
}

/// Thin ellipses with `a + b = 3` and the given `a - b`.
pub fn thin_ellipse_sweep(gaps: &[f64]) -> Result<Vec<ThinEllipseRow>> {
    gaps.iter()
        .map(|&d| {
            let (a, b) = (0.5 * (3.0 + d), 0.5 * (3.0 - d));
            let map = make_ellipse_map(a, b)?;
            let (_, classical) = payne_weinberger(map.domain(), map.ellipticity_k())?;
            Ok(ThinEllipseRow {
                a,
                b,
                a_minus_b: d,
                jacobian_inverse: a * a - b * b,
                thm47: lower_bound_thm47(&map)?.value,
                classical: classical.value,
            })
        })
        .collect()
}

pub fn reproduce_examples(config: &RunConfig) -> Result<ExamplesReport> {
    let opts = config.eigen_options();
    let maps = crate::qcmaps::example_maps();
    let examples = maps
        .par_iter()
        .enumerate()
        .map(|(i, map)| {
            let (_, classical) = payne_weinberger(map.domain(), map.ellipticity_k())?;
            let fem = solve_map(map, config.mesher, config.n_radial, config.n_angular, &opts)?;
            Ok(ExampleRow {
                example: format!("example{}", i + 1),
                map: map.id(),
                thm47: lower_bound_thm47(map)?.value,
                classical: classical.value,
                thm51: lower_bound_thm51(map, config.beta_or_default(), DEFAULT_N_QUAD)?.value,
                fem_mu1: fem.mu1_fem,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let thin_ellipse = thin_ellipse_sweep(&[1.0, 0.1, 0.01])?;
    let ordering = |label: &str, lesser: f64, greater: f64| Ordering {
        label: label.into(),
        lesser,
        greater,
        holds: lesser < greater,
    };
    let orderings = vec![
        ordering("pi^2/108 < j'^2/3", PI * PI / 108.0, DISC_MU1 / 3.0),
        ordering("(pi/4)^2 < j'^2", (PI / 4.0).powi(2), DISC_MU1),
    ];
    Ok(ExamplesReport { examples, thin_ellipse, orderings })
}

pub fn cmd_reproduce_examples(config: &RunConfig) -> Result<Outcome> {
    let rep = reproduce_examples(config)?;
    let body = match config.format {
        OutputFormat::Json => json_string(&rep),
        OutputFormat::Csv => {
            let mut rows: Vec<Vec<String>> = rep
                .examples
                .iter()
                .map(|r| {
                    vec![
                        r.example.clone(),
                        r.map.clone(),
                        String::new(),
                        num(r.thm47),
                        num(r.classical),
                        num(r.thm51),
                        num(r.fem_mu1),
                    ]
                })
                .collect();
            rows.extend(rep.thin_ellipse.iter().map(|r| {
                vec![
                    "thin_ellipse".into(),
                    make_ellipse_map(r.a, r.b).map(|m| m.id()).unwrap_or_default(),
                    r.a_minus_b.to_string(),
                    num(r.thm47),
                    num(r.classical),
                    String::new(),
                    String::new(),
                ]
            }));
            csv_string(&["row", "map", "a_minus_b", "thm47", "classical", "thm51", "fem_mu1"], &rows)?
        }
    };
    let mut out = Outcome::plain(body);
    out.summary = rep.orderings.iter().map(|o| o.to_string()).collect();
    out.violation = rep.orderings.iter().any(|o| !o.holds)
        || rep.examples.iter().any(|r| r.thm47 > r.fem_mu1 * (1.0 + DOMINANCE_BUDGET));
    Ok(out)
}

/// Mesh export in the plain-text `nv nt` format.
pub fn cmd_mesh(config: &RunConfig) -> Result<Outcome> {
    let map = config.map()?;
    let mesh = mesh_for_map(&map, config.mesher, config.n_radial, config.n_angular)?;
    let mut buf = Vec::new();
    mesh.write_text(&mut buf)?;
    let mut out = Outcome::plain(String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))?);
    out.summary.push(format!(
        "{}: {} vertices, {} triangles, h = {:.4}, area = {:.6}",
        map.id(),
        mesh.n_vertices(),
        mesh.n_triangles(),
        mesh.h_max,
        mesh.area()
    ));
    Ok(out)
}
