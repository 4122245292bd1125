//! Level-set functionals of radial harmonic functions: the level energy
//! w = integral of |grad G|^2 over the level sphere, its derivative by two
//! independent routes, and the monotone quantities built from it.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::harmonic::{HarmonicError, RadialHarmonic};
use crate::profiles::linspace;

#[derive(Debug, Error)]
pub enum LevelsetError {
    #[error("grid value {value} outside the admissible range ({lo}, {hi})")]
    GridOutsideRange { value: f64, lo: f64, hi: f64 },
    #[error("grid must be strictly increasing and have at least 3 points")]
    BadGrid,
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
}

/// Per-level quantities at a coordinate point t.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LevelSetReport {
    /// Coordinate of the level sphere.
    pub t: f64,
    /// Level value G(t).
    pub level: f64,
    pub area: f64,
    pub grad_norm: f64,
    pub w: f64,
    /// dw/d(level) via the surface-integral identity.
    pub w_prime_integral: f64,
    /// dw/d(level) via central finite differences of w.
    pub w_prime_fd: f64,
    pub mean_curvature: f64,
    /// Total scalar curvature of the level sphere (Gauss-Bonnet: 8 pi).
    pub gauss_bonnet: f64,
}

/// The level energy w at a coordinate point.
pub fn w_at(h: &RadialHarmonic, t: f64) -> f64 {
    let gn = h.grad_norm(t);
    h.metric.area(t) * gn * gn
}

/// dw/d(level) from the surface-integral form: the integrand
/// <grad|grad G|, grad G>/|grad G| is constant on the level sphere and
/// equals the frame Hessian component G_11.
pub fn w_prime_integral(h: &RadialHarmonic, t: f64) -> f64 {
    h.metric.area(t) * h.d2g_arc(t)
}

fn w_prime_fd(h: &RadialHarmonic, t: f64) -> f64 {
    let dom = h.metric.domain;
    let scale = 1e-5 * t.abs().max(1.0);
    let room_lo = t - dom.lo;
    let room_hi = dom.hi - t;
    // Central difference when there is room on both sides; fall back to a
    // one-sided difference at (or next to) a closed domain endpoint.
    let gap = 0.45 * room_lo.min(room_hi);
    let (ta, tb) = if gap > 0.0 {
        let s = scale.min(gap);
        (t - s, t + s)
    } else if room_hi > room_lo {
        (t, t + scale.min(0.45 * room_hi))
    } else {
        (t - scale.min(0.45 * room_lo), t)
    };
    (w_at(h, tb) - w_at(h, ta)) / (h.value(tb) - h.value(ta))
}

/// Full level-set report at a coordinate point.
pub fn level_report(h: &RadialHarmonic, t: f64) -> Result<LevelSetReport, LevelsetError> {
    let grad_norm = h.grad_norm(t);
    if grad_norm == 0.0 {
        return Err(HarmonicError::CriticalLevel { t }.into());
    }
    let area = h.metric.area(t);
    let b = h.metric.b(t);
    let hd = h.hessian_data(t)?;
    Ok(LevelSetReport {
        t,
        level: h.value(t),
        area,
        grad_norm,
        w: area * grad_norm * grad_norm,
        w_prime_integral: w_prime_integral(h, t),
        w_prime_fd: w_prime_fd(h, t),
        mean_curvature: hd.mean_curvature,
        gauss_bonnet: area * 2.0 / (b * b),
    })
}

/// Which monotone quantity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    /// (1-t)^-3 t^-1 w(t) - 4 pi (1-t)^-1 on (0, 1).
    Plus,
    /// (1+t)^-3 t^-1 w(t) + 4 pi (1+t)^-1 on (-inf, -1).
    Minus,
    /// w(t)/t - 4 pi t on (0, inf).
    Mw,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Plus => "plus",
            Quantity::Minus => "minus",
            Quantity::Mw => "mw",
        }
    }

    /// Admissible range of level values.
    pub fn level_range(self) -> (f64, f64) {
        match self {
            Quantity::Plus => (0.0, 1.0),
            Quantity::Minus => (f64::NEG_INFINITY, -1.0),
            Quantity::Mw => (0.0, f64::INFINITY),
        }
    }

    pub fn eval(self, level: f64, w: f64) -> f64 {
        match self {
            Quantity::Plus => {
                let s = 1.0 - level;
                w / (s * s * s * level) - 4.0 * PI / s
            }
            Quantity::Minus => {
                let s = 1.0 + level;
                w / (s * s * s * level) + 4.0 * PI / s
            }
            Quantity::Mw => w / level - 4.0 * PI * level,
        }
    }
}

/// A monotone quantity sampled on a grid of level values, with central
/// finite-difference derivative estimates.
#[derive(Debug, Clone, Serialize)]
pub struct MonotoneSeries {
    pub quantity: Quantity,
    /// Level-value grid, strictly increasing.
    pub ts: Vec<f64>,
    pub values: Vec<f64>,
    pub derivative_estimates: Vec<f64>,
    /// Largest (signed) derivative estimate.
    pub max_derivative: f64,
    /// Mean value when the series is constant to relative 1e-7.
    pub constant_value: Option<f64>,
}

/// Verdict of a monotonicity check: every derivative estimate must stay
/// below the tolerance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub tol: f64,
    pub worst_index: usize,
    pub worst_t: f64,
    pub worst_derivative: f64,
}

const CONSTANCY_TOL: f64 = 1e-7;

fn assemble_series(quantity: Quantity, ts: Vec<f64>, values: Vec<f64>) -> MonotoneSeries {
    let n = ts.len();
    let mut deriv = vec![0.0; n];
    for i in 0..n {
        let (j, k) = if i == 0 {
            (0, 1)
        } else if i == n - 1 {
            (n - 2, n - 1)
        } else {
            (i - 1, i + 1)
        };
        deriv[i] = (values[k] - values[j]) / (ts[k] - ts[j]);
    }
    let max_derivative = deriv.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / n as f64;
    let max_dev = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    let constant_value = if max_dev < CONSTANCY_TOL * (1.0 + mean.abs()) {
        Some(mean)
    } else {
        None
    };
    MonotoneSeries {
        quantity,
        ts,
        values,
        derivative_estimates: deriv,
        max_derivative,
        constant_value,
    }
}

/// Evaluate a monotone quantity on a strictly increasing grid of level
/// values.
pub fn monotone_series(
    h: &RadialHarmonic,
    quantity: Quantity,
    grid: &[f64],
) -> Result<MonotoneSeries, LevelsetError> {
    if grid.len() < 3 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LevelsetError::BadGrid);
    }
    let (lo, hi) = quantity.level_range();
    let mut ts = Vec::with_capacity(grid.len());
    let mut values = Vec::with_capacity(grid.len());
    for &level in grid {
        if level <= lo || level >= hi {
            return Err(LevelsetError::GridOutsideRange {
                value: level,
                lo,
                hi,
            });
        }
        let t = h.coordinate_of_level(level)?;
        // Evaluate the quantity at the level actually attained at the
        // resolved coordinate; near a pole of the quantity this keeps the
        // level and w consistent, which a root-finding residual in `t`
        // would otherwise amplify.
        let attained = h.value(t);
        let attained = if attained > lo && attained < hi {
            attained
        } else {
            level
        };
        ts.push(attained);
        values.push(quantity.eval(attained, w_at(h, t)));
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LevelsetError::BadGrid);
    }
    Ok(assemble_series(quantity, ts, values))
}

pub fn monotone_plus(h: &RadialHarmonic, grid: &[f64]) -> Result<MonotoneSeries, LevelsetError> {
    monotone_series(h, Quantity::Plus, grid)
}

pub fn monotone_minus(h: &RadialHarmonic, grid: &[f64]) -> Result<MonotoneSeries, LevelsetError> {
    monotone_series(h, Quantity::Minus, grid)
}

pub fn monotone_mw(h: &RadialHarmonic, grid: &[f64]) -> Result<MonotoneSeries, LevelsetError> {
    monotone_series(h, Quantity::Mw, grid)
}

/// Default grid for the (0,1)-chart quantity: uniform on [eps, 1-eps].
pub fn default_plus_grid(n: usize, eps: f64) -> Vec<f64> {
    linspace(eps, 1.0 - eps, n)
}

/// Default grid for the (-inf,-1)-chart quantity: log-spaced distances from
/// -1, resolving the (1+t)^-3 singularity.
pub fn default_minus_grid(n: usize, eps: f64, t_lo: f64) -> Vec<f64> {
    let d_min: f64 = eps;
    let d_max: f64 = -1.0 - t_lo;
    let mut grid: Vec<f64> = (0..n)
        .map(|i| {
            let x = i as f64 / (n - 1) as f64;
            let d = d_min * (d_max / d_min).powf(x);
            -1.0 - d
        })
        .collect();
    grid.reverse();
    grid
}

/// Build a level-value grid for a quantity from the levels the harmonic
/// actually attains on its evaluation region, intersected with the
/// quantity's admissible range. Returns an error when the intersection is
/// empty (domain mismatch). Grids near the -1 singularity are log-spaced.
pub fn auto_grid(
    h: &RadialHarmonic,
    quantity: Quantity,
    n: usize,
    eps: f64,
) -> Result<Vec<f64>, LevelsetError> {
    let (lo, hi) = h.metric.domain.sample_region(eps);
    let (ga, gb) = (h.value(lo), h.value(hi));
    let (gmin, gmax) = if ga < gb { (ga, gb) } else { (gb, ga) };
    let (qlo, qhi) = quantity.level_range();
    let (lo2, hi2) = match quantity {
        Quantity::Plus => (gmin.max(qlo + eps), gmax.min(qhi - eps)),
        Quantity::Minus => (gmin.max(-1.0 - 1.0 / eps), gmax.min(qhi - eps)),
        Quantity::Mw => (gmin.max(qlo + eps), gmax),
    };
    if !(lo2 < hi2) || n < 3 {
        return Err(LevelsetError::GridOutsideRange {
            value: lo2,
            lo: qlo,
            hi: qhi,
        });
    }
    if quantity == Quantity::Minus {
        Ok(default_minus_grid(n, -1.0 - hi2, lo2))
    } else {
        Ok(linspace(lo2, hi2, n))
    }
}

pub fn monotonicity_verdict(s: &MonotoneSeries, tol: f64) -> Verdict {
    let mut worst = 0;
    for (i, d) in s.derivative_estimates.iter().enumerate() {
        if *d > s.derivative_estimates[worst] {
            worst = i;
        }
    }
    Verdict {
        pass: s.derivative_estimates[worst] <= tol,
        tol,
        worst_index: worst,
        worst_t: s.ts[worst],
        worst_derivative: s.derivative_estimates[worst],
    }
}
