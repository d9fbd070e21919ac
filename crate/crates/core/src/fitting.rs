//! One-parameter weighted least-squares fits of the Bell-parameter model:
//! the collection solid-angle ratio from `S(m)` data and the storage
//! lifetime from `S(t)` data.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{bell_parameter, bell_vs_time, ChannelParams, DecayKind, DecayModel, V1Convention};
use crate::numfmt::format_sig;

/// Convergence tolerance on the fitted parameter (relative).
pub const PARAM_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 500;
/// Relative step of the second difference used for the standard error.
const CURVATURE_STEP: f64 = 1e-4;
const GRID_POINTS: usize = 241;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub x: f64,
    pub s: f64,
    pub sigma: f64,
}

/// Measured `(x, S, sigma_S)` points; `x` is a mode number or a storage time
/// in microseconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSeries {
    points: Vec<DataPoint>,
}

impl DataSeries {
    pub fn new(points: Vec<DataPoint>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !(p.x.is_finite() && p.s.is_finite()) {
                return Err(Error::InvalidArgument(format!("point {i} is not finite")));
            }
            if !(p.sigma > 0.0 && p.sigma.is_finite()) {
                return Err(Error::InvalidArgument(format!("point {i} has non-positive sigma {}", p.sigma)));
            }
            if points[..i].iter().any(|q| q.x == p.x) {
                return Err(Error::InvalidArgument(format!("duplicate x value {}", p.x)));
            }
        }
        Ok(Self { points })
    }

    pub fn from_triples(triples: &[(f64, f64, f64)]) -> Result<Self> {
        Self::new(triples.iter().map(|&(x, s, sigma)| DataPoint { x, s, sigma }).collect())
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Copy with every sigma multiplied by `factor`.
    pub fn with_scaled_sigma(&self, factor: f64) -> Result<Self> {
        Self::new(self.points.iter().map(|p| DataPoint { sigma: p.sigma * factor, ..*p }).collect())
    }

    /// Reads `x,s,sigma` CSV (header required, `#` comment lines allowed).
    pub fn from_csv<R: Read>(mut reader: R) -> Result<Self> {
        let mut text = String::new();
        reader.read_to_string(&mut text).map_err(|e| Error::Parse { line: 0, message: e.to_string() })?;
        // The csv reader does not count skipped comment lines, so strip them
        // here and keep the original line number of every surviving line.
        let mut kept = String::with_capacity(text.len());
        let mut origin = Vec::new();
        for (i, l) in text.lines().enumerate() {
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            kept.push_str(l);
            kept.push('\n');
            origin.push(i as u64 + 1);
        }
        let source_line = |csv_line: u64| origin.get(csv_line.saturating_sub(1) as usize).copied().unwrap_or(0);
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(kept.as_bytes());
        let header_line = source_line(1).max(1);
        let headers = rdr.headers().map_err(|e| csv_error(e, header_line))?.clone();
        let col = |name: &str| {
            headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
                line: header_line,
                message: format!("missing column `{name}` (expected header x,s,sigma)"),
            })
        };
        let (ix, is, isig) = (col("x")?, col("s")?, col("sigma")?);
        let mut points = Vec::new();
        for row in rdr.records() {
            let row = row.map_err(|e| {
                let line = e.position().map_or(0, |p| source_line(p.line()));
                csv_error(e, line)
            })?;
            let line = row.position().map_or(0, |p| source_line(p.line()));
            let field = |i: usize, name: &str| -> Result<f64> {
                let raw = row.get(i).unwrap_or("");
                raw.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("column `{name}`: cannot parse `{raw}` as a number"),
                })
            };
            points.push(DataPoint { x: field(ix, "x")?, s: field(is, "s")?, sigma: field(isig, "sigma")? });
        }
        Self::new(points).map_err(|e| Error::Parse { line: 0, message: e.to_string() })
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,s,sigma")?;
        for p in &self.points {
            writeln!(out, "{},{},{}", format_sig(p.x), format_sig(p.s), format_sig(p.sigma))?;
        }
        Ok(())
    }
}

fn csv_error(e: csv::Error, line: u64) -> Error {
    Error::Parse { line, message: e.to_string() }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub value: f64,
    pub std_error: f64,
    pub chi2_per_dof: f64,
    pub n_iterations: usize,
    /// Best objective value after each iteration.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub objective_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub residuals: Vec<f64>,
    pub chi2: f64,
    pub chi2_per_dof: f64,
}

/// Normalized residuals `(s - model(x)) / sigma` and reduced chi-square for
/// a model with `n_params` free parameters.
pub fn residual_report<F>(series: &DataSeries, model: F, n_params: usize) -> Result<ResidualReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let n = series.len();
    if n <= n_params {
        return Err(Error::DegreesOfFreedom { points: n, params: n_params });
    }
    let residuals =
        series.points().iter().map(|p| model(p.x).map(|y| (p.s - y) / p.sigma)).collect::<Result<Vec<_>>>()?;
    let chi2: f64 = residuals.iter().map(|r| r * r).sum();
    Ok(ResidualReport { residuals, chi2, chi2_per_dof: chi2 / (n - n_params) as f64 })
}

fn weighted_sse<F: Fn(f64) -> Result<f64>>(series: &DataSeries, model: &F) -> Result<f64> {
    series.points().iter().try_fold(0.0, |acc, p| {
        let y = match model(p.x) {
            Ok(y) => y,
            // e.g. the retrieval efficiency decayed to exactly zero
            Err(Error::DegenerateModel(_)) => return Ok(f64::INFINITY),
            Err(e) => return Err(e),
        };
        let r = (p.s - y) / p.sigma;
        Ok(acc + r * r)
    })
}

struct Minimum {
    at: f64,
    iterations: usize,
    trace: Vec<f64>,
}

/// Minimizes `f` over the positive interval `[lo, hi]`: log-spaced grid scan
/// followed by golden-section refinement in log space.
fn minimize_positive<F: Fn(f64) -> Result<f64>>(f: F, lo: f64, hi: f64) -> Result<Minimum> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    let g = |u: f64| f(u.exp());
    let grid: Vec<(f64, f64)> = (0..GRID_POINTS)
        .map(|i| {
            let u = llo + (lhi - llo) * i as f64 / (GRID_POINTS - 1) as f64;
            g(u).map(|v| (u, if v.is_nan() { f64::INFINITY } else { v }))
        })
        .collect::<Result<_>>()?;
    let best = (0..GRID_POINTS).min_by(|&a, &b| grid[a].1.total_cmp(&grid[b].1)).expect("non-empty grid");
    if best == 0 || best == GRID_POINTS - 1 {
        return Err(Error::Convergence(0));
    }
    let (mut a, mut b) = (grid[best - 1].0, grid[best + 1].0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (g(c)?, g(d)?);
    let mut best_u = grid[best].0;
    let mut best_f = grid[best].1;
    let mut trace = vec![best_f];
    for iteration in 1..=MAX_ITERATIONS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = g(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = g(d)?;
        }
        for (u, v) in [(c, fc), (d, fd)] {
            if v < best_f {
                best_f = v;
                best_u = u;
            }
        }
        trace.push(best_f);
        if b - a < PARAM_TOLERANCE {
            return Ok(Minimum { at: best_u.exp(), iterations: iteration, trace });
        }
    }
    Err(Error::Convergence(MAX_ITERATIONS))
}

fn finish<F: Fn(f64) -> Result<f64>>(series: &DataSeries, objective: F, min: Minimum) -> Result<FitResult> {
    let p = min.at;
    let h = CURVATURE_STEP * p;
    let curvature = (objective(p + h)? - 2.0 * objective(p)? + objective(p - h)?) / (h * h);
    if !(curvature > 0.0) {
        return Err(Error::Unidentifiable("objective has no curvature at the minimum".into()));
    }
    let chi2 = objective(p)?;
    Ok(FitResult {
        value: p,
        std_error: (2.0 / curvature).sqrt(),
        chi2_per_dof: chi2 / (series.len() - 1) as f64,
        n_iterations: min.iterations,
        objective_trace: min.trace,
    })
}

/// Which solid-angle ratio the fit reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioOrientation {
    /// `beta_w / beta_r`.
    #[default]
    WriteOverRead,
    /// `beta_r / beta_w`, the model's `beta_ratio`.
    ReadOverWrite,
}

fn mode_number(x: f64) -> Result<u32> {
    if x >= 1.0 && x.fract() == 0.0 && x <= f64::from(u32::MAX) {
        Ok(x as u32)
    } else {
        Err(Error::InvalidArgument(format!("mode number {x} is not a positive integer")))
    }
}

/// Fits `beta_w / beta_r` to `S(m)` data, all other parameters fixed.
pub fn fit_beta_ratio(series: &DataSeries, fixed: &ChannelParams, convention: V1Convention) -> Result<FitResult> {
    fit_beta_ratio_oriented(series, fixed, convention, RatioOrientation::WriteOverRead)
}

pub fn fit_beta_ratio_oriented(
    series: &DataSeries,
    fixed: &ChannelParams,
    convention: V1Convention,
    orientation: RatioOrientation,
) -> Result<FitResult> {
    if series.len() < 2 {
        return Err(Error::Unidentifiable("a one-parameter fit needs at least two points".into()));
    }
    for p in series.points() {
        mode_number(p.x)?;
    }
    if series.points().iter().all(|p| p.x == 1.0) || fixed.chi * fixed.xi_se == 0.0 {
        return Err(Error::Unidentifiable("the solid-angle ratio has no effect on this series".into()));
    }
    let to_beta = move |r: f64| match orientation {
        RatioOrientation::WriteOverRead => 1.0 / r,
        RatioOrientation::ReadOverWrite => r,
    };
    let objective = |r: f64| {
        let params = fixed.with_beta_ratio(to_beta(r));
        weighted_sse(series, &|x| bell_parameter(&params, mode_number(x)?, convention))
    };
    let min = minimize_positive(objective, 1e-4, 1e4)?;
    finish(series, objective, min)
}

/// Fits the storage lifetime (microseconds) to `S(t)` data at `m` modes.
pub fn fit_lifetime(series: &DataSeries, fixed: &ChannelParams, m: u32, kind: DecayKind) -> Result<FitResult> {
    if kind == DecayKind::None {
        return Err(Error::InvalidArgument("a lifetime fit needs a decay law".into()));
    }
    if series.len() < 2 {
        return Err(Error::Unidentifiable("a one-parameter fit needs at least two points".into()));
    }
    if series.points().iter().any(|p| p.x < 0.0) {
        return Err(Error::InvalidArgument("storage times must be non-negative".into()));
    }
    if series.points().iter().all(|p| p.x == 0.0) {
        return Err(Error::Unidentifiable("all points at t = 0".into()));
    }
    let objective = |tau: f64| {
        let decay = DecayModel { kind, tau };
        weighted_sse(series, &|t| bell_vs_time(fixed, m, &decay, t))
    };
    let min = minimize_positive(objective, 1e-3, 1e6)?;
    finish(series, objective, min)
}
