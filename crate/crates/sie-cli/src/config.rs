//! The JSON run configuration: contour, problem, discretization, output
//! blocks; loading, validation, and construction of the core objects.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use sie_core::catalog::Catalog;
use sie_core::collocation::{manufactured_rhs, ProblemSpec};
use sie_core::contour::{make_circle, make_ellipse};
use sie_core::piecewise::{JumpSet, PiecewiseFn};
use sie_core::singular_ops::{KernelFn, QuadratureSpec};
use sie_core::{Contour64, Cx};

use crate::CliError;

type C64 = Cx<f64>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub contour: ContourCfg,
    #[serde(default)]
    pub problem: ProblemCfg,
    pub discretization: DiscretizationCfg,
    pub output: OutputCfg,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourCfg {
    pub kind: String,
    pub radius: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ProblemCfg {
    pub c: Option<String>,
    pub d: Option<String>,
    pub f: Option<String>,
    #[serde(default = "default_kernel")]
    pub kernel: String,
    pub f_csv: Option<PathBuf>,
    pub jumps_csv: Option<PathBuf>,
    /// Chosen exact solution; the right-hand side is built from it through
    /// the principal-value oracle.
    pub manufactured_solution: Option<String>,
    /// Known exact solution used as the study reference.
    pub exact_solution: Option<String>,
    /// Approximation target for the approx command.
    pub target: Option<String>,
}

fn default_kernel() -> String {
    "zero".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscretizationCfg {
    pub n_b: Option<usize>,
    pub ladder: Option<Vec<usize>>,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_epsilon2")]
    pub epsilon2: f64,
    #[serde(default)]
    pub quadrature: QuadratureCfg,
    pub slope_target: Option<f64>,
    #[serde(default = "default_dense_factor")]
    pub dense_factor: usize,
}

fn default_m() -> usize {
    4
}
fn default_alpha() -> f64 {
    1.0
}
fn default_beta() -> f64 {
    0.3
}
fn default_epsilon2() -> f64 {
    0.01
}
fn default_dense_factor() -> usize {
    8
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureCfg {
    #[serde(default = "default_panels")]
    pub panels_per_interval: usize,
    #[serde(default = "default_gauss")]
    pub gauss_order: usize,
    #[serde(default = "default_epsilons")]
    pub oracle_epsilons: Vec<f64>,
}

fn default_panels() -> usize {
    4
}
fn default_gauss() -> usize {
    8
}
fn default_epsilons() -> Vec<f64> {
    vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5]
}

impl Default for QuadratureCfg {
    fn default() -> Self {
        QuadratureCfg {
            panels_per_interval: default_panels(),
            gauss_order: default_gauss(),
            oracle_epsilons: default_epsilons(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputCfg {
    pub directory: PathBuf,
    #[serde(default)]
    pub formats: Vec<String>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {path:?}: {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("config parse failure: {e}")))
    }

    pub fn contour(&self) -> Result<Contour64, CliError> {
        match self.contour.kind.as_str() {
            "circle" => {
                let r = self.contour.radius.ok_or_else(|| {
                    CliError::config("circle contour needs a radius field".into())
                })?;
                make_circle(r).map_err(CliError::from_config_stage)
            }
            "ellipse" => {
                let a = self
                    .contour
                    .a
                    .ok_or_else(|| CliError::config("ellipse contour needs field a".into()))?;
                let b = self
                    .contour
                    .b
                    .ok_or_else(|| CliError::config("ellipse contour needs field b".into()))?;
                make_ellipse(a, b).map_err(CliError::from_config_stage)
            }
            other => Err(CliError::config(format!(
                "unknown contour kind '{other}' (expected circle or ellipse)"
            ))),
        }
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec<f64>, CliError> {
        let q = &self.discretization.quadrature;
        QuadratureSpec::new(q.panels_per_interval, q.gauss_order, q.oracle_epsilons.clone())
            .map_err(CliError::from_config_stage)
    }

    pub fn kernel(&self) -> Result<Option<KernelFn<f64>>, CliError> {
        Catalog::kernel(&self.problem.kernel).map_err(CliError::from_config_stage)
    }

    fn function(&self, contour: &Contour64, expr: &str) -> Result<PiecewiseFn<f64>, CliError> {
        Catalog::function(contour, expr).map_err(CliError::from_config_stage)
    }

    /// Builds the full problem description for the solve/study commands.
    pub fn problem_spec(&self, n_b: usize) -> Result<BuiltProblem, CliError> {
        let contour = self.contour()?;
        let quad = self.quadrature()?;
        let kernel = self.kernel()?;
        let c = match &self.problem.c {
            Some(expr) => self.function(&contour, expr)?,
            None => return Err(CliError::config("problem.c is required".into())),
        };
        let d = match &self.problem.d {
            Some(expr) => self.function(&contour, expr)?,
            None => return Err(CliError::config("problem.d is required".into())),
        };

        let manufactured = match &self.problem.manufactured_solution {
            Some(expr) => Some(self.function(&contour, expr)?),
            None => None,
        };
        let (f, extra_jumps): (PiecewiseFn<f64>, Vec<(f64, C64)>) =
            if let Some(phi_star) = &manufactured {
                let f = manufactured_rhs(&contour, &quad, &c, &d, kernel.as_ref(), phi_star);
                let jumps: Vec<(f64, C64)> = phi_star
                    .jump_set()
                    .thetas()
                    .iter()
                    .zip(phi_star.jump_set().jumps())
                    .map(|(&t, &b)| (t, b))
                    .collect();
                (f, jumps)
            } else if let Some(expr) = &self.problem.f {
                (self.function(&contour, expr)?, Vec::new())
            } else if let Some(path) = &self.problem.f_csv {
                let jumps = match &self.problem.jumps_csv {
                    Some(jp) => read_jumps_csv(jp)?,
                    None => Vec::new(),
                };
                (tabulated_function(path, &jumps)?, jumps)
            } else {
                return Err(CliError::config(
                    "problem needs one of: f, f_csv, manufactured_solution".into(),
                ));
            };

        // shared jump set: union of the data functions' jumps
        let mut all: Vec<(f64, C64)> = extra_jumps;
        for fun in [&c, &d, &f] {
            for (&t, &b) in fun.jump_set().thetas().iter().zip(fun.jump_set().jumps()) {
                if !all.iter().any(|(x, _)| (x - t).abs() < 1e-12) {
                    all.push((t, b));
                }
            }
        }
        all.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let jump_set = JumpSet::new(all).map_err(CliError::from_config_stage)?;

        let disc = &self.discretization;
        let spec = ProblemSpec::new(
            contour,
            c,
            d,
            f,
            kernel,
            jump_set,
            n_b,
            disc.m,
            disc.alpha,
            disc.beta,
            disc.epsilon2,
            quad,
        )
        .map_err(CliError::from_config_stage)?;
        Ok(BuiltProblem { spec, manufactured })
    }

    pub fn reference(&self) -> Result<Option<String>, CliError> {
        match (&self.problem.exact_solution, &self.problem.manufactured_solution) {
            (Some(e), _) => Ok(Some(e.clone())),
            (None, Some(m)) => Ok(Some(m.clone())),
            (None, None) => Ok(None),
        }
    }
}

pub struct BuiltProblem {
    pub spec: ProblemSpec<f64>,
    pub manufactured: Option<PiecewiseFn<f64>>,
}

/// Reads sample rows (theta, re, im) from a CSV file.
pub fn read_samples_csv(path: &Path) -> Result<Vec<(f64, C64)>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::config(format!("cannot open samples csv {path:?}: {e}")))?;
    {
        let headers = reader
            .headers()
            .map_err(|e| CliError::config(format!("bad csv header: {e}")))?;
        let want = ["theta", "re", "im"];
        for (i, name) in want.iter().enumerate() {
            if headers.get(i).map(|h| h != *name).unwrap_or(true) {
                return Err(CliError::config(format!(
                    "samples csv must have columns theta,re,im; got {headers:?}"
                )));
            }
        }
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| CliError::config(format!("bad csv record: {e}")))?;
        let theta: f64 = parse_field(&record, 0)?;
        let re: f64 = parse_field(&record, 1)?;
        let im: f64 = parse_field(&record, 2)?;
        out.push((theta, C64::new(re, im)));
    }
    if out.is_empty() {
        return Err(CliError::config(format!("samples csv {path:?} has no rows")));
    }
    Ok(out)
}

/// Reads jump metadata rows (theta_d, re_jump, im_jump).
pub fn read_jumps_csv(path: &Path) -> Result<Vec<(f64, C64)>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::config(format!("cannot open jumps csv {path:?}: {e}")))?;
    {
        let headers = reader
            .headers()
            .map_err(|e| CliError::config(format!("bad csv header: {e}")))?;
        let want = ["theta_d", "re_jump", "im_jump"];
        for (i, name) in want.iter().enumerate() {
            if headers.get(i).map(|h| h != *name).unwrap_or(true) {
                return Err(CliError::config(format!(
                    "jumps csv must have columns theta_d,re_jump,im_jump; got {headers:?}"
                )));
            }
        }
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| CliError::config(format!("bad csv record: {e}")))?;
        let theta: f64 = parse_field(&record, 0)?;
        let re: f64 = parse_field(&record, 1)?;
        let im: f64 = parse_field(&record, 2)?;
        out.push((theta, C64::new(re, im)));
    }
    Ok(out)
}

fn parse_field(record: &csv::StringRecord, idx: usize) -> Result<f64, CliError> {
    record
        .get(idx)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::config(format!("bad numeric field in csv record {record:?}")))
}

/// Builds a piecewise function from tabulated samples: periodic linear
/// interpolation in theta, with declared jumps carried as metadata. The
/// one-sided limits pair the interpolant's left value with its jump-shifted
/// counterpart.
pub fn tabulated_function(
    path: &Path,
    jumps: &[(f64, C64)],
) -> Result<PiecewiseFn<f64>, CliError> {
    let mut samples = read_samples_csv(path)?;
    samples.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let tau = std::f64::consts::TAU;
    let eval_samples = samples.clone();
    let eval = move |theta: f64| -> C64 {
        let n = eval_samples.len();
        let idx = eval_samples.partition_point(|s| s.0 <= theta);
        let (t0, v0, t1, v1) = if idx == 0 {
            let last = eval_samples[n - 1];
            (last.0 - tau, last.1, eval_samples[0].0, eval_samples[0].1)
        } else if idx == n {
            let first = eval_samples[0];
            (eval_samples[n - 1].0, eval_samples[n - 1].1, first.0 + tau, first.1)
        } else {
            (
                eval_samples[idx - 1].0,
                eval_samples[idx - 1].1,
                eval_samples[idx].0,
                eval_samples[idx].1,
            )
        };
        if t1 == t0 {
            return v0;
        }
        let w = (theta - t0) / (t1 - t0);
        v0 + (v1 - v0) * C64::new(w, 0.0)
    };
    if jumps.is_empty() {
        return Ok(PiecewiseFn::continuous(eval));
    }
    let jump_set =
        JumpSet::new(jumps.to_vec()).map_err(CliError::from_config_stage)?;
    let mut one_sided = Vec::with_capacity(jumps.len());
    for &(theta_d, beta) in jumps {
        let left = eval(theta_d - 1e-6);
        one_sided.push((left, left + beta));
    }
    PiecewiseFn::with_jumps(eval, jump_set, one_sided).map_err(CliError::from_config_stage)
}
