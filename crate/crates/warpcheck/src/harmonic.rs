//! Radial harmonic functions on warped-product metrics.
//!
//! A radial function G(t) is harmonic iff the first integral
//! `(B^2/A) G' = k` is constant; all derivative data below is derived from
//! that closed form, so the harmonicity residual is zero up to rounding by
//! construction and the tests pin it down numerically.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::numeric::{adaptive_simpson, invert_monotone, ls_slope, NumericError};
use crate::profiles::{MetricProfile, DEFAULT_EPSILON};

/// Absolute quadrature tolerance and bisection depth for boundary-value
/// construction.
pub const QUAD_TOL: f64 = 1e-12;
pub const QUAD_DEPTH: u32 = 60;

#[derive(Debug, Error)]
pub enum HarmonicError {
    #[error("degenerate boundary data: a = b = {value}")]
    DegenerateBoundary { value: f64 },
    #[error("boundary points must satisfy t0 < t1 inside the domain (got {t0}, {t1})")]
    BadBoundaryPoints { t0: f64, t1: f64 },
    #[error("A/B^2 is not constant: relative variation {variation:.3e} exceeds 1e-10")]
    NotCoordinateHarmonic { variation: f64 },
    #[error("vanishing gradient at t = {t}: critical level")]
    CriticalLevel { t: f64 },
    #[error("level value {value} not attained on the evaluation region")]
    LevelOutOfRange { value: f64 },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

type ValueFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A radial harmonic function on a warped-product metric.
pub struct RadialHarmonic {
    pub metric: Arc<MetricProfile>,
    g: ValueFn,
    /// First-integral constant k = (B^2/A) G'.
    pub flux: f64,
    pub bc: String,
}

/// Hessian and mean-curvature data of a radial harmonic at a point, in the
/// orthonormal frame adapted to the level sphere.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HessianData {
    pub t: f64,
    pub grad_norm: f64,
    pub u11: f64,
    pub u_aa: f64,
    pub hess_sq: f64,
    pub grad_grad_norm_sq: f64,
    pub mean_curvature: f64,
    pub lap_grad_norm: f64,
}

impl RadialHarmonic {
    /// Construct from a closed-form value function and its first-integral
    /// constant. The caller asserts that `(B^2/A) g' = flux` holds.
    pub fn from_closed_form<F>(
        metric: Arc<MetricProfile>,
        g: F,
        flux: f64,
        bc: &str,
    ) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RadialHarmonic {
            metric,
            g: Arc::new(g),
            flux,
            bc: bc.to_string(),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.g)(t)
    }

    /// G'(t) = flux * A / B^2.
    pub fn d1(&self, t: f64) -> f64 {
        let m = &self.metric;
        let b = m.b(t);
        self.flux * m.a(t) / (b * b)
    }

    pub fn d2(&self, t: f64) -> f64 {
        let m = &self.metric;
        let (a, b) = (m.a(t), m.b(t));
        let (da, db) = (m.da(t), m.db(t));
        self.flux * (da / (b * b) - 2.0 * a * db / (b * b * b))
    }

    pub fn d3(&self, t: f64) -> f64 {
        let m = &self.metric;
        let (a, b) = (m.a(t), m.b(t));
        let (da, db) = (m.da(t), m.db(t));
        let (d2a, d2b) = (m.d2a(t), m.d2b(t));
        self.flux
            * (d2a / (b * b) - 4.0 * da * db / (b * b * b) - 2.0 * a * d2b / (b * b * b)
                + 6.0 * a * db * db / (b * b * b * b))
    }

    /// |grad G| = |G'| / A.
    pub fn grad_norm(&self, t: f64) -> f64 {
        (self.d1(t) / self.metric.a(t)).abs()
    }

    /// Arclength derivative of G: DG = G'/A (signed).
    pub fn dg(&self, t: f64) -> f64 {
        self.d1(t) / self.metric.a(t)
    }

    /// Second arclength derivative of G (the frame Hessian component G_11).
    pub fn d2g_arc(&self, t: f64) -> f64 {
        let a = self.metric.a(t);
        self.d2(t) / (a * a) - self.d1(t) * self.metric.da(t) / (a * a * a)
    }

    /// Arclength derivative of |grad G|.
    pub fn d_grad_norm(&self, t: f64) -> f64 {
        self.dg(t).signum() * self.d2g_arc(t)
    }

    /// Residual of the Laplace equation D^2 G + 2 (DB/B) DG at t, scaled by
    /// the magnitude of the terms so it is meaningful where the individual
    /// terms are large (e.g. near a pole of G).
    pub fn harmonicity_residual(&self, t: f64) -> f64 {
        let m = &self.metric;
        let db_over_b = m.db(t) / (m.a(t) * m.b(t));
        let term1 = self.d2g_arc(t);
        let term2 = 2.0 * db_over_b * self.dg(t);
        let scale = 1.0_f64.max(term1.abs()).max(term2.abs());
        (term1 + term2) / scale
    }

    /// Laplacian of |grad G| by direct differentiation of the closed-form
    /// derivative data (uses third derivatives of G, i.e. second derivatives
    /// of the warp profiles).
    pub fn lap_grad_norm(&self, t: f64) -> f64 {
        let m = &self.metric;
        let s = self.dg(t).signum();
        let a = m.a(t);
        let da = m.da(t);
        let d2a = m.d2a(t);
        let (g1, g2, g3) = (self.d1(t), self.d2(t), self.d3(t));
        // phi = s * G'/A; coordinate derivatives of phi:
        let phi1 = s * (g2 / a - g1 * da / (a * a));
        let phi2 = s
            * (g3 / a - 2.0 * g2 * da / (a * a) - g1 * d2a / (a * a)
                + 2.0 * g1 * da * da / (a * a * a));
        let d_phi = phi1 / a;
        let d2_phi = phi2 / (a * a) - phi1 * da / (a * a * a);
        let db_over_b = m.db(t) / (a * m.b(t));
        d2_phi + 2.0 * db_over_b * d_phi
    }

    /// Map a level value back to its coordinate, by bisection on the
    /// evaluation region. G is strictly monotone for nonzero flux.
    pub fn coordinate_of_level(&self, level: f64) -> Result<f64, HarmonicError> {
        let (lo, hi) = self.metric.domain.sample_region(DEFAULT_EPSILON);
        invert_monotone(&|t| self.value(t), lo, hi, level)
            .map_err(|_| HarmonicError::LevelOutOfRange { value: level })
    }

    /// Hessian/mean-curvature package at a coordinate point.
    pub fn hessian_data(&self, t: f64) -> Result<HessianData, HarmonicError> {
        let grad_norm = self.grad_norm(t);
        if grad_norm == 0.0 {
            return Err(HarmonicError::CriticalLevel { t });
        }
        let m = &self.metric;
        let u11 = self.d2g_arc(t);
        let u_aa = m.db(t) / (m.a(t) * m.b(t)) * self.dg(t);
        Ok(HessianData {
            t,
            grad_norm,
            u11,
            u_aa,
            hess_sq: u11 * u11 + 2.0 * u_aa * u_aa,
            grad_grad_norm_sq: u11 * u11,
            mean_curvature: -u11 / grad_norm,
            lap_grad_norm: self.lap_grad_norm(t),
        })
    }
}

/// Solve the radial Dirichlet problem G(t0) = a, G(t1) = b by quadrature of
/// A/B^2 (adaptive Simpson, absolute tolerance 1e-12).
pub fn solve_radial_harmonic(
    metric: Arc<MetricProfile>,
    t0: f64,
    a: f64,
    t1: f64,
    b: f64,
) -> Result<RadialHarmonic, HarmonicError> {
    if !(t0 < t1) || !metric.domain.contains(t0) || !metric.domain.contains(t1) {
        return Err(HarmonicError::BadBoundaryPoints { t0, t1 });
    }
    if a == b {
        return Err(HarmonicError::DegenerateBoundary { value: a });
    }
    let m = metric.clone();
    let integrand = move |t: f64| {
        let bb = m.b(t);
        m.a(t) / (bb * bb)
    };
    let total = adaptive_simpson(&integrand, t0, t1, QUAD_TOL, QUAD_DEPTH)?;
    let flux = (b - a) / total;
    let m2 = metric.clone();
    let g = move |t: f64| {
        let m = &m2;
        let integrand = |x: f64| {
            let bb = m.b(x);
            m.a(x) / (bb * bb)
        };
        a + flux
            * adaptive_simpson(&integrand, t0, t, QUAD_TOL, QUAD_DEPTH)
                .expect("quadrature convergence inside solved interval")
    };
    Ok(RadialHarmonic {
        metric,
        g: Arc::new(g),
        flux,
        bc: format!("G({t0}) = {a}, G({t1}) = {b}"),
    })
}

/// Accept the coordinate function G(t) = t as the harmonic when A/B^2 is
/// constant on the evaluation region (relative variation below 1e-10).
pub fn coordinate_harmonic(metric: Arc<MetricProfile>) -> Result<RadialHarmonic, HarmonicError> {
    let pts = metric.domain.sample_points(64, DEFAULT_EPSILON);
    let ratios: Vec<f64> = pts
        .iter()
        .map(|&t| {
            let b = metric.b(t);
            metric.a(t) / (b * b)
        })
        .collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let variation = ratios
        .iter()
        .map(|r| (r - mean).abs())
        .fold(0.0, f64::max)
        / mean.abs();
    if variation >= 1e-10 {
        return Err(HarmonicError::NotCoordinateHarmonic { variation });
    }
    Ok(RadialHarmonic {
        metric,
        g: Arc::new(|t| t),
        flux: 1.0 / mean,
        bc: "coordinate function G(t) = t".to_string(),
    })
}

/// Which theorem's boundary conditions a limit check targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremTag {
    /// Chart (0,1): G -> 1 at the inner end, G -> 0 at infinity.
    Plus,
    /// Chart (-inf,-1): G -> -1 at the inner end.
    Minus,
}

/// Decay record of one quantity along a geometric sequence approaching an
/// endpoint.
#[derive(Debug, Clone, Serialize)]
pub struct DecayCheck {
    pub quantity: String,
    pub endpoint: f64,
    /// (distance to endpoint, value) pairs, decreasing distance.
    pub samples: Vec<(f64, f64)>,
    /// Least-squares slope of log|value| against log(distance).
    pub fitted_order: f64,
    pub final_magnitude: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryReport {
    pub theorem: TheoremTag,
    pub checks: Vec<DecayCheck>,
}

/// The two boundary integrands of the theorems' condition (2), with
/// f(u) = u^-2, integrated over the level sphere at t.
fn condition2_integrands(h: &RadialHarmonic, t: f64) -> (f64, f64) {
    let area = h.metric.area(t);
    let g = h.value(t);
    let gn = h.grad_norm(t);
    let f = g.powi(-2);
    let fp = -2.0 * g.powi(-3);
    let i1 = area * f * h.d_grad_norm(t);
    let i2 = area * fp * gn * gn;
    (i1, i2)
}

fn w_of(h: &RadialHarmonic, t: f64) -> f64 {
    let gn = h.grad_norm(t);
    h.metric.area(t) * gn * gn
}

fn decay_check<F: Fn(f64) -> f64>(
    name: &str,
    endpoint: f64,
    toward: f64,
    start_dist: f64,
    eval: F,
) -> DecayCheck {
    let n = 8;
    let mut samples = Vec::with_capacity(n);
    let dir = (toward - endpoint).signum();
    let mut d = start_dist;
    for _ in 0..n {
        let t = endpoint + dir * d;
        samples.push((d, eval(t)));
        d *= 0.5;
    }
    let xs: Vec<f64> = samples.iter().map(|(d, _)| d.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, v)| v.abs().max(1e-300).ln()).collect();
    DecayCheck {
        quantity: name.to_string(),
        endpoint,
        fitted_order: ls_slope(&xs, &ys),
        final_magnitude: samples.last().unwrap().1.abs(),
        samples,
    }
}

/// Evaluate the theorems' hypothesis quantities along geometric sequences
/// approaching the singular endpoints and report fitted decay orders.
/// Report-only: no pass/fail judgement is made here.
pub fn boundary_limit_checks(h: &RadialHarmonic, which: TheoremTag) -> BoundaryReport {
    let start = 1e-2;
    let mut checks = Vec::new();
    match which {
        TheoremTag::Plus => {
            checks.push(decay_check("w(t)/t", 0.0, 1.0, start, |t| w_of(h, t) / t));
            checks.push(decay_check("w(t)/(1-t)", 1.0, 0.0, start, |t| {
                w_of(h, t) / (1.0 - t)
            }));
            checks.push(decay_check("cond2-hessian-flux", 1.0, 0.0, start, |t| {
                condition2_integrands(h, t).0
            }));
            checks.push(decay_check("cond2-weight-flux", 1.0, 0.0, start, |t| {
                condition2_integrands(h, t).1
            }));
        }
        TheoremTag::Minus => {
            checks.push(decay_check("w(t)/(1+t)", -1.0, -2.0, start, |t| {
                w_of(h, t) / (1.0 + t)
            }));
            checks.push(decay_check("cond2-hessian-flux", -1.0, -2.0, start, |t| {
                condition2_integrands(h, t).0
            }));
            checks.push(decay_check("cond2-weight-flux", -1.0, -2.0, start, |t| {
                condition2_integrands(h, t).1
            }));
        }
    }
    BoundaryReport {
        theorem: which,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::curvature_at;
    use crate::profiles::{self, linspace, DEFAULT_EPSILON};
    use std::f64::consts::PI;

    #[test]
    fn thm1_boundary_value_problem_recovers_identity() {
        let m = profiles::thm1_metric(1.0).unwrap().profile;
        let h = solve_radial_harmonic(m, 0.01, 0.01, 0.99, 0.99).unwrap();
        for t in linspace(0.02, 0.98, 25) {
            assert!((h.value(t) - t).abs() < 1e-9, "G({t}) = {}", h.value(t));
        }
    }

    #[test]
    fn euclidean_green_function_is_affine_in_inverse_radius() {
        let m = profiles::euclidean().profile;
        let h = solve_radial_harmonic(m, 1.0, 1.0, 10.0, 0.1).unwrap();
        // G = alpha + beta / rho through (1,1) and (10, 0.1) gives G = 1/rho.
        for rho in [1.5, 2.0, 5.0, 8.0] {
            assert!((h.value(rho) - 1.0 / rho).abs() < 1e-8);
        }
    }

    #[test]
    fn constant_boundary_data_rejected() {
        let m = profiles::euclidean().profile;
        let r = solve_radial_harmonic(m, 1.0, 0.5, 2.0, 0.5);
        assert!(matches!(r, Err(HarmonicError::DegenerateBoundary { .. })));
    }

    #[test]
    fn coordinate_harmonic_accepts_rigidity_metrics() {
        for c in [0.5, 1.0, 2.0] {
            let h = coordinate_harmonic(profiles::thm1_metric(c).unwrap().profile).unwrap();
            assert!(
                (h.flux - c).abs() < 1e-10 * c,
                "flux = {} for c = {c}",
                h.flux
            );
            let h3 = coordinate_harmonic(profiles::thm3_metric(c).unwrap().profile).unwrap();
            assert!((h3.flux - c.sqrt()).abs() < 1e-10 * c.sqrt());
        }
    }

    #[test]
    fn coordinate_harmonic_rejects_euclidean() {
        let r = coordinate_harmonic(profiles::euclidean().profile);
        assert!(matches!(r, Err(HarmonicError::NotCoordinateHarmonic { .. })));
    }

    #[test]
    fn harmonicity_residual_small_everywhere() {
        let h = coordinate_harmonic(profiles::thm1_metric(1.0).unwrap().profile).unwrap();
        for t in linspace(0.01, 0.99, 50) {
            assert!(h.harmonicity_residual(t).abs() < 1e-8);
        }
        let m = profiles::euclidean().profile;
        let hg = solve_radial_harmonic(m, 1.0, 1.0, 10.0, 0.1).unwrap();
        for rho in linspace(1.1, 9.9, 30) {
            assert!(hg.harmonicity_residual(rho).abs() < 1e-8);
        }
    }

    #[test]
    fn first_integral_constancy() {
        let metric = profiles::schwarzschild(1.0).unwrap().profile;
        let h = solve_radial_harmonic(metric.clone(), 0.5, 1.0, 50.0, 0.0).unwrap();
        let k0 = h.flux;
        for t in linspace(0.6, 49.0, 40) {
            let b = metric.b(t);
            let k = b * b / metric.a(t) * h.d1(t);
            assert!((k - k0).abs() < 1e-8 * k0.abs());
        }
    }

    #[test]
    fn thm1_gradient_norm_at_midpoint() {
        let h = coordinate_harmonic(profiles::thm1_metric(1.0).unwrap().profile).unwrap();
        let d = h.hessian_data(0.5).unwrap();
        // |grad G| = 1/A(1/2) = t^2(1-t)^2 = 1/16
        assert!((d.grad_norm - 1.0 / 16.0).abs() < 1e-13);
    }

    #[test]
    fn hessian_trace_free_and_lemma24_equality() {
        let h = coordinate_harmonic(profiles::thm1_metric(1.0).unwrap().profile).unwrap();
        for t in linspace(0.05, 0.95, 30) {
            let d = h.hessian_data(t).unwrap();
            assert!((d.u11 + 2.0 * d.u_aa).abs() < 1e-12 * d.u11.abs().max(1e-12));
            let gap = d.hess_sq - 1.5 * d.grad_grad_norm_sq;
            assert!(gap.abs() < 1e-9, "gap {gap} at t = {t}");
        }
    }

    #[test]
    fn mean_curvature_matches_lambda() {
        let h = coordinate_harmonic(profiles::thm1_metric(1.0).unwrap().profile).unwrap();
        let d = h.hessian_data(0.5).unwrap();
        let lambda = h.d_grad_norm(0.5) / h.dg(0.5);
        assert!((d.mean_curvature + lambda).abs() < 1e-12);
    }

    #[test]
    fn bochner_self_consistency() {
        // Direct Laplacian of |grad G| equals the Bochner expression.
        for entry in [
            profiles::thm1_metric(1.0).unwrap(),
            profiles::thm3_metric(1.0).unwrap(),
        ] {
            let h = coordinate_harmonic(entry.profile.clone()).unwrap();
            for t in entry.profile.domain.sample_points(20, DEFAULT_EPSILON) {
                let d = h.hessian_data(t).unwrap();
                let ric11 = curvature_at(&entry.profile, t).unwrap().ric_11;
                let bochner =
                    (d.hess_sq - d.grad_grad_norm_sq) / d.grad_norm + ric11 * d.grad_norm;
                let scale = d.lap_grad_norm.abs().max(bochner.abs()).max(1.0);
                assert!(
                    (d.lap_grad_norm - bochner).abs() < 1e-7 * scale,
                    "Bochner residual at t = {t} on {}: {} vs {}",
                    entry.profile.label,
                    d.lap_grad_norm,
                    bochner
                );
            }
        }
    }

    #[test]
    fn monotone_when_flux_positive() {
        let h = coordinate_harmonic(profiles::thm1_metric(1.0).unwrap().profile).unwrap();
        assert!(h.flux > 0.0);
        let pts = linspace(0.05, 0.95, 20);
        for win in pts.windows(2) {
            assert!(h.value(win[0]) < h.value(win[1]));
        }
    }

    #[test]
    fn boundary_limits_thm1() {
        let h = coordinate_harmonic(profiles::thm1_metric(1.0).unwrap().profile).unwrap();
        let report = boundary_limit_checks(&h, TheoremTag::Plus);
        let wt = &report.checks[0];
        // w/t = 4 pi t (1-t)^2 decays with order 1 toward t = 0.
        assert!((wt.fitted_order - 1.0).abs() < 0.05, "order {}", wt.fitted_order);
        let at_milli = 4.0 * PI * 1e-3 * 0.999_f64.powi(2);
        assert!(at_milli < 0.013);
        let w1t = &report.checks[1];
        assert!(w1t.final_magnitude < 0.013);
        assert!(w1t.fitted_order > 0.9);
    }

    #[test]
    fn boundary_limits_thm3() {
        let h = coordinate_harmonic(profiles::thm3_metric(1.0).unwrap().profile).unwrap();
        let report = boundary_limit_checks(&h, TheoremTag::Minus);
        let c = &report.checks[0];
        // w/(1+t) = 4 pi t^2 (1+t) -> 0 as t -> -1.
        let near = c.samples.iter().find(|(d, _)| (*d - 1e-2 / 128.0).abs() < 1e-12);
        assert!(near.is_some());
        assert!(c.final_magnitude < 1e-2);
        assert!(c.fitted_order > 0.9);
    }
}
