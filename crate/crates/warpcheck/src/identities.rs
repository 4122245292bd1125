//! Pointwise and integral verification of the identity and inequality chain
//! relating curvature, the Hessian of a radial harmonic, and the level-set
//! energy: the Ricci trace identity, the frame Hessian inequality, the
//! Bochner formula, Green's identity bookkeeping, the Cauchy-Schwarz gap,
//! and the rigidity (reconstruction) structure.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::curvature::{curvature_at, CurvatureError};
use crate::harmonic::{HarmonicError, RadialHarmonic};
use crate::levelset::{w_at, w_prime_integral};
use crate::numeric::{adaptive_simpson, NumericError};
use crate::profiles::DEFAULT_EPSILON;

#[derive(Debug, Error)]
pub enum IdentityError {
    #[error("evaluation point t = {t} too close to a pole of h_c (c = {c})")]
    PoleProximity { t: f64, c: f64 },
    #[error("unknown tolerance name: {0}")]
    UnknownTolerance(String),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error(transparent)]
    Harmonic(#[from] HarmonicError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// One residual record: `residual = lhs - rhs`, with the pass rule depending
/// on whether the check is an equality or a one-sided bound.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityResidual {
    pub name: String,
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn scale_of(lhs: f64, rhs: f64) -> f64 {
    lhs.abs().max(rhs.abs()).max(1.0)
}

impl IdentityResidual {
    /// Equality check: pass iff |lhs - rhs| <= tol * max(1, |lhs|, |rhs|).
    pub fn equality(name: &str, t: f64, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let residual = lhs - rhs;
        IdentityResidual {
            name: name.to_string(),
            t,
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual.abs() <= tolerance * scale_of(lhs, rhs),
        }
    }

    /// Lower bound: pass iff lhs >= rhs - tol * max(1, |lhs|, |rhs|).
    pub fn lower_bound(name: &str, t: f64, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let residual = lhs - rhs;
        IdentityResidual {
            name: name.to_string(),
            t,
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual >= -tolerance * scale_of(lhs, rhs),
        }
    }

    /// Upper bound: pass iff lhs <= rhs + tol * max(1, |lhs|, |rhs|).
    pub fn upper_bound(name: &str, t: f64, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let residual = lhs - rhs;
        IdentityResidual {
            name: name.to_string(),
            t,
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual <= tolerance * scale_of(lhs, rhs),
        }
    }
}

/// Named tolerances with defaults, overridable by name (CLI flags or
/// environment). Unknown names are rejected.
#[derive(Debug, Clone)]
pub struct Tolerances {
    map: BTreeMap<String, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        let defaults: &[(&str, f64)] = &[
            ("scalar_flat", 1e-9),
            ("oracle", 1e-6),
            ("harmonicity", 1e-8),
            ("lemma21", 1e-8),
            ("lemma24", 1e-9),
            ("bochner", 1e-7),
            ("greens", 1e-6),
            ("cauchy_schwarz", 1e-8),
            ("eqn_scalar", 1e-7),
            ("eqn_h", 1e-10),
            ("gauss_bonnet", 1e-9),
            ("w_prime", 1e-5),
            ("monotone", 1e-6),
            ("riccati", 1e-10),
            ("fh", 1e-10),
            ("generated_flat", 1e-8),
            ("reconstruction", 1e-7),
        ];
        Tolerances {
            map: defaults
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        }
    }
}

impl Tolerances {
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(|s| s.as_str())
    }

    pub fn get(&self, name: &str) -> f64 {
        self.map[name]
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<(), IdentityError> {
        match self.map.get_mut(name) {
            Some(v) => {
                *v = value;
                Ok(())
            }
            None => Err(IdentityError::UnknownTolerance(name.to_string())),
        }
    }
}

/// Ricci trace identity on a regular level:
/// Ric(e1, e1) = Sc/2 - Sc_level/2 + (|grad|grad G||^2 - |Hess G|^2/2) / |grad G|^2.
pub fn lemma21_residual(
    h: &RadialHarmonic,
    t: f64,
    tol: f64,
) -> Result<IdentityResidual, IdentityError> {
    let m = &h.metric;
    let d = h.hessian_data(t)?;
    let c = curvature_at(m, t)?;
    let b = m.b(t);
    let sc_level = 2.0 / (b * b);
    let lhs = c.ric_11;
    let rhs = 0.5 * c.sc - 0.5 * sc_level
        + (d.grad_grad_norm_sq - 0.5 * d.hess_sq) / (d.grad_norm * d.grad_norm);
    Ok(IdentityResidual::equality("lemma21", t, lhs, rhs, tol))
}

/// Frame Hessian inequality |Hess G|^2 >= (3/2) |grad|grad G||^2, with
/// equality for radial harmonics.
pub fn lemma24_check(
    h: &RadialHarmonic,
    t: f64,
    tol: f64,
) -> Result<IdentityResidual, IdentityError> {
    let d = h.hessian_data(t)?;
    Ok(IdentityResidual::lower_bound(
        "lemma24",
        t,
        d.hess_sq,
        1.5 * d.grad_grad_norm_sq,
        tol,
    ))
}

/// Bochner formula: Lap|grad G| = (|Hess G|^2 - |grad|grad G||^2)/|grad G|
/// + Ric(e1,e1) |grad G|, with the Laplacian evaluated by independent direct
/// differentiation.
pub fn bochner_residual(
    h: &RadialHarmonic,
    t: f64,
    tol: f64,
) -> Result<IdentityResidual, IdentityError> {
    let d = h.hessian_data(t)?;
    let ric11 = curvature_at(&h.metric, t)?.ric_11;
    let rhs = (d.hess_sq - d.grad_grad_norm_sq) / d.grad_norm + ric11 * d.grad_norm;
    Ok(IdentityResidual::equality(
        "bochner",
        t,
        d.lap_grad_norm,
        rhs,
        tol,
    ))
}

/// Level-integrated scalar inequality:
/// int_l Lap|grad G| / |grad G| >= (3/4) int_l |grad|grad G||^2 / |grad G|^2 - 4 pi.
/// The gap equals 2 pi B^2 Sc, so it vanishes on scalar-flat metrics and is
/// nonnegative whenever Sc >= 0.
pub fn eqn_scalar_check(
    h: &RadialHarmonic,
    t: f64,
    tol: f64,
) -> Result<IdentityResidual, IdentityError> {
    let d = h.hessian_data(t)?;
    let area = h.metric.area(t);
    let gn = d.grad_norm;
    let lhs = area * d.lap_grad_norm / gn;
    let rhs = 0.75 * area * d.grad_grad_norm_sq / (gn * gn) - 4.0 * PI;
    Ok(IdentityResidual::lower_bound("eqn_scalar", t, lhs, rhs, tol))
}

/// Cauchy-Schwarz on the level sphere:
/// (dw/dt)^2 <= (int_l |grad|grad G||^2 / |grad G|^2) * w,
/// with equality for radial harmonics since |grad G| is constant on levels.
pub fn cauchy_schwarz_gap(
    h: &RadialHarmonic,
    t: f64,
    tol: f64,
) -> Result<IdentityResidual, IdentityError> {
    let d = h.hessian_data(t)?;
    let area = h.metric.area(t);
    let wp = w_prime_integral(h, t);
    let lhs = wp * wp;
    let rhs = area * d.grad_grad_norm_sq / (d.grad_norm * d.grad_norm) * w_at(h, t);
    Ok(IdentityResidual::upper_bound(
        "cauchy_schwarz",
        t,
        lhs,
        rhs,
        tol,
    ))
}

/// Pole exclusion margin for the closed-form h_c.
pub const H_POLE_MARGIN: f64 = 1e-2;

/// h_c(t) = (1 - 2ct) / (t - c t^2), the closed-form log-derivative family.
pub fn h_family(c: f64, t: f64) -> f64 {
    (1.0 - 2.0 * c * t) / (t - c * t * t)
}

/// Completed-square gap w * (w'/w - 2 h_c)^2 >= 0; vanishes exactly on the
/// rigidity metric whose w satisfies dw/dt = 2 h_c w.
pub fn eqn_h_gap(
    h: &RadialHarmonic,
    t: f64,
    c: f64,
    tol: f64,
) -> Result<IdentityResidual, IdentityError> {
    if t.abs() < H_POLE_MARGIN || (c != 0.0 && (t - 1.0 / c).abs() < H_POLE_MARGIN) {
        return Err(IdentityError::PoleProximity { t, c });
    }
    let w = w_at(h, t);
    let ratio = w_prime_integral(h, t) / w;
    let diff = ratio - 2.0 * h_family(c, t);
    Ok(IdentityResidual::lower_bound(
        "eqn_h",
        t,
        w * diff * diff,
        0.0,
        tol,
    ))
}

/// Rigidity frame data at a level: the proportionality factor lambda with
/// grad|grad G| = lambda grad G, the frame Hessian entries, the second
/// fundamental form eigenvalue, and the constant |grad G| / w.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RigidityStructure {
    pub t: f64,
    pub lambda: f64,
    pub g11: f64,
    pub gaa: f64,
    pub a22: f64,
    pub mean_curvature: f64,
    pub prop_const: f64,
}

pub fn rigidity_structure(h: &RadialHarmonic, t: f64) -> Result<RigidityStructure, IdentityError> {
    let d = h.hessian_data(t)?;
    let lambda = h.d_grad_norm(t) / h.dg(t);
    Ok(RigidityStructure {
        t,
        lambda,
        g11: d.u11,
        gaa: d.u_aa,
        a22: d.u_aa / d.grad_norm,
        mean_curvature: d.mean_curvature,
        prop_const: d.grad_norm / w_at(h, t),
    })
}

/// Reconstruction check for rigidity metrics: in level-value
/// parametrization the metric is |grad G|^-2 dt^2 + g_t with
/// dg_t/dt = -(w'/w) g_t, whose integrated form is B^2 w = const. Also
/// verifies A / |G'| = 1 / |grad G| at the sampled points.
pub fn metric_reconstruction_check(
    h: &RadialHarmonic,
    tol: f64,
) -> Result<IdentityResidual, IdentityError> {
    let pts = h.metric.domain.sample_points(50, DEFAULT_EPSILON);
    let products: Vec<f64> = pts
        .iter()
        .map(|&t| {
            let b = h.metric.b(t);
            b * b * w_at(h, t)
        })
        .collect();
    let mean = products.iter().sum::<f64>() / products.len() as f64;
    let max_dev = products
        .iter()
        .map(|p| (p - mean).abs())
        .fold(0.0, f64::max);
    for &t in &pts {
        let lhs = h.metric.a(t) / h.d1(t).abs();
        let rhs = 1.0 / h.grad_norm(t);
        if (lhs - rhs).abs() > 1e-8 * rhs.abs() {
            return Ok(IdentityResidual::equality(
                "reconstruction",
                t,
                lhs,
                rhs,
                1e-8,
            ));
        }
    }
    // Report the constancy of B^2 w as a relative deviation from its mean.
    Ok(IdentityResidual::equality(
        "reconstruction",
        pts[0],
        mean + max_dev,
        mean,
        tol,
    ))
}

/// Quadrature controls for the volume integral of the Green's identity.
const GREENS_QUAD_TOL: f64 = 1e-9;
const GREENS_QUAD_DEPTH: u32 = 40;

/// Green's identity for the pair (f(G), |grad G|) with f(u) = u^-2 on the
/// collar between the levels through t and T:
/// int (f(G) Lap|grad G| - |grad G| Lap f(G)) = boundary(T) - boundary(t).
pub fn greens_identity_check(
    h: &RadialHarmonic,
    t: f64,
    big_t: f64,
    tol: f64,
) -> Result<IdentityResidual, IdentityError> {
    let boundary = |s: f64| {
        let area = h.metric.area(s);
        let g = h.value(s);
        let gn = h.grad_norm(s);
        let fp = -2.0 * g.powi(-3);
        area * (g.powi(-2) * h.d_grad_norm(s) - gn * fp * h.dg(s))
    };
    let volume_integrand = |s: f64| {
        let m = &h.metric;
        let b = m.b(s);
        let g = h.value(s);
        let gn = h.grad_norm(s);
        // Lap f(G) = f''(G) |grad G|^2 for harmonic G; f'' = 6 u^-4.
        4.0 * PI * m.a(s) * b * b
            * (g.powi(-2) * h.lap_grad_norm(s) - gn * 6.0 * g.powi(-4) * gn * gn)
    };
    let lhs = adaptive_simpson(&volume_integrand, t, big_t, GREENS_QUAD_TOL, GREENS_QUAD_DEPTH)?;
    let rhs = boundary(big_t) - boundary(t);
    Ok(IdentityResidual::equality("greens", t, lhs, rhs, tol))
}

/// The per-point identity suite run by `verify`: scalar-flatness,
/// harmonicity, the trace identity, the Hessian inequality, Bochner,
/// Cauchy-Schwarz, the integrated scalar inequality, and Gauss-Bonnet.
pub fn point_suite(
    h: &RadialHarmonic,
    t: f64,
    tols: &Tolerances,
) -> Result<Vec<IdentityResidual>, IdentityError> {
    let mut out = Vec::with_capacity(8);
    let sc = curvature_at(&h.metric, t)?.sc;
    out.push(IdentityResidual::equality(
        "scalar_flat",
        t,
        sc,
        0.0,
        tols.get("scalar_flat"),
    ));
    out.push(IdentityResidual::equality(
        "harmonicity",
        t,
        h.harmonicity_residual(t),
        0.0,
        tols.get("harmonicity"),
    ));
    out.push(lemma21_residual(h, t, tols.get("lemma21"))?);
    out.push(lemma24_check(h, t, tols.get("lemma24"))?);
    out.push(bochner_residual(h, t, tols.get("bochner"))?);
    out.push(cauchy_schwarz_gap(h, t, tols.get("cauchy_schwarz"))?);
    out.push(eqn_scalar_check(h, t, tols.get("eqn_scalar"))?);
    let b = h.metric.b(t);
    out.push(IdentityResidual::equality(
        "gauss_bonnet",
        t,
        h.metric.area(t) * 2.0 / (b * b),
        8.0 * PI,
        tols.get("gauss_bonnet"),
    ));
    Ok(out)
}

/// Full verification suite over an interior grid, plus one Green's identity
/// check across the middle half of the evaluation region.
pub fn verification_suite(
    h: &RadialHarmonic,
    grid_n: usize,
    epsilon: f64,
    tols: &Tolerances,
) -> Result<Vec<IdentityResidual>, IdentityError> {
    let mut out = Vec::new();
    for t in h.metric.domain.sample_points(grid_n, epsilon) {
        out.extend(point_suite(h, t, tols)?);
    }
    let (lo, hi) = h.metric.domain.sample_region(epsilon);
    let (q1, q3) = (lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo));
    out.push(greens_identity_check(h, q1, q3, tols.get("greens"))?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::{coordinate_harmonic, solve_radial_harmonic, RadialHarmonic};
    use crate::profiles::{self, linspace};

    fn thm1(c: f64) -> RadialHarmonic {
        coordinate_harmonic(profiles::thm1_metric(c).unwrap().profile).unwrap()
    }

    fn euclidean_green() -> RadialHarmonic {
        RadialHarmonic::from_closed_form(
            profiles::euclidean().profile,
            |rho| 1.0 / rho,
            -1.0,
            "G = 1/rho",
        )
    }

    fn cylinder_harmonic() -> RadialHarmonic {
        coordinate_harmonic(profiles::cylinder().profile).unwrap()
    }

    #[test]
    fn lemma21_on_catalog() {
        for t in [0.2, 0.5, 0.8] {
            let r = lemma21_residual(&thm1(1.0), t, 1e-8).unwrap();
            assert!(r.pass, "lemma21 residual {} at t = {t}", r.residual);
        }
        for rho in [0.5, 2.0, 20.0] {
            let r = lemma21_residual(&euclidean_green(), rho, 1e-8).unwrap();
            assert!(r.pass, "euclidean lemma21 residual {}", r.residual);
        }
        let r = lemma21_residual(&cylinder_harmonic(), 5.0, 1e-8).unwrap();
        assert!(r.pass, "cylinder lemma21 residual {}", r.residual);
    }

    #[test]
    fn lemma24_equality_for_radial_harmonics() {
        let h3 = coordinate_harmonic(profiles::thm3_metric(1.0).unwrap().profile).unwrap();
        let r = lemma24_check(&h3, -2.0, 1e-9).unwrap();
        assert!(r.pass);
        assert!(r.residual.abs() < 1e-9, "equality gap {}", r.residual);
        for t in linspace(0.1, 0.9, 10) {
            let r = lemma24_check(&thm1(0.5), t, 1e-9).unwrap();
            assert!(r.residual.abs() < 1e-9);
        }
    }

    #[test]
    fn bochner_on_catalog() {
        for t in linspace(0.1, 0.9, 10) {
            assert!(bochner_residual(&thm1(1.0), t, 1e-7).unwrap().pass);
        }
        assert!(bochner_residual(&cylinder_harmonic(), 4.0, 1e-7).unwrap().pass);
    }

    #[test]
    fn eqn_scalar_tight_on_flat_and_slack_on_cylinder() {
        for t in linspace(0.05, 0.95, 20) {
            let r = eqn_scalar_check(&thm1(1.0), t, 1e-7).unwrap();
            assert!(r.pass);
            assert!(
                r.residual.abs() < 1e-7 * scale_of(r.lhs, r.rhs),
                "gap {} at t = {t}",
                r.residual
            );
        }
        for rho in [1.0, 5.0, 50.0] {
            let r = eqn_scalar_check(&euclidean_green(), rho, 1e-7).unwrap();
            assert!(r.residual.abs() < 1e-7 * scale_of(r.lhs, r.rhs));
        }
        // Cylinder: gap = 2 pi B^2 Sc = 4 pi, strictly positive.
        let r = eqn_scalar_check(&cylinder_harmonic(), 5.0, 1e-7).unwrap();
        assert!(r.pass);
        assert!((r.residual - 4.0 * PI).abs() < 1e-9, "gap {}", r.residual);
    }

    #[test]
    fn cauchy_schwarz_equality_for_radial() {
        let metrics: Vec<RadialHarmonic> = vec![
            thm1(1.0),
            coordinate_harmonic(profiles::thm3_metric(1.0).unwrap().profile).unwrap(),
            solve_radial_harmonic(profiles::schwarzschild(2.0).unwrap().profile, 0.5, 1.0, 50.0, 0.1)
                .unwrap(),
        ];
        for h in &metrics {
            for t in h.metric.domain.sample_points(10, DEFAULT_EPSILON) {
                let r = cauchy_schwarz_gap(h, t, 1e-8).unwrap();
                assert!(r.pass, "CS gap {} at t = {t} on {}", r.residual, h.metric.label);
                assert!(r.residual.abs() <= 1e-8 * scale_of(r.lhs, r.rhs));
            }
        }
    }

    #[test]
    fn eqn_h_matches_rigidity_and_rejects_mismatch() {
        let h = thm1(1.0);
        for t in [0.2, 0.4, 0.6, 0.8] {
            let r = eqn_h_gap(&h, t, 1.0, 1e-10).unwrap();
            assert!(r.lhs < 1e-10, "matched gap {} at t = {t}", r.lhs);
        }
        // Mismatched c = 0: strictly positive gap.
        let r = eqn_h_gap(&h, 0.5, 0.0, 1e-10).unwrap();
        assert!(r.lhs > 1e-3, "mismatched gap {}", r.lhs);
        assert!(r.pass, "nonnegativity must still hold");
        // Pole proximity rejected.
        assert!(matches!(
            eqn_h_gap(&h, 0.995, 1.0, 1e-10),
            Err(IdentityError::PoleProximity { .. })
        ));
    }

    #[test]
    fn rigidity_structure_relations() {
        let h = thm1(1.0);
        let mut props = Vec::new();
        for t in linspace(0.05, 0.95, 50) {
            let s = rigidity_structure(&h, t).unwrap();
            let gn = h.grad_norm(t);
            assert!((s.g11 - s.lambda * gn).abs() < 1e-12 * s.g11.abs().max(1e-12));
            assert!((s.gaa + s.lambda * gn / 2.0).abs() < 1e-12 * s.gaa.abs().max(1e-12));
            assert!((s.a22 + s.lambda / 2.0).abs() < 1e-9 * s.lambda.abs().max(1e-9));
            assert!((s.mean_curvature + s.lambda).abs() < 1e-9 * s.lambda.abs().max(1e-9));
            // lambda = prop_const * w'(t)
            let wp = w_prime_integral(&h, t);
            assert!(
                (s.lambda - s.prop_const * wp).abs() < 1e-6 * s.lambda.abs().max(1.0),
                "lambda {} vs c*w' {} at t = {t}",
                s.lambda,
                s.prop_const * wp
            );
            props.push(s.prop_const);
        }
        let mean = props.iter().sum::<f64>() / props.len() as f64;
        for p in &props {
            assert!((p - mean).abs() < 1e-8 * mean.abs());
        }
    }

    #[test]
    fn reconstruction_on_rigidity_metrics() {
        for h in [
            thm1(1.0),
            coordinate_harmonic(profiles::thm3_metric(1.0).unwrap().profile).unwrap(),
        ] {
            let r = metric_reconstruction_check(&h, 1e-7).unwrap();
            assert!(r.pass, "reconstruction failed: {:?}", r);
        }
        // thm1(c): B^2 w = 4 pi c^2.
        let h = thm1(2.0);
        let b = h.metric.b(0.3);
        let prod = b * b * w_at(&h, 0.3);
        assert!((prod - 16.0 * PI).abs() < 1e-9 * prod);
    }

    #[test]
    fn greens_identity_on_catalog() {
        let r = greens_identity_check(&thm1(1.0), 0.3, 0.7, 1e-6).unwrap();
        assert!(r.pass, "greens residual {} ({} vs {})", r.residual, r.lhs, r.rhs);
        // Degenerate collar: both sides vanish.
        let r0 = greens_identity_check(&thm1(1.0), 0.5, 0.5, 1e-6).unwrap();
        assert!(r0.lhs.abs() < 1e-12 && r0.rhs.abs() < 1e-12);
        // Schwarzschild with the bounded harmonic G = c/(r+c).
        let m = profiles::schwarzschild(1.0).unwrap().profile;
        let h = RadialHarmonic::from_closed_form(m, |r| 1.0 / (r + 1.0), -1.0, "G = c/(r+c)");
        let r = greens_identity_check(&h, 1.0, 5.0, 1e-6).unwrap();
        assert!(r.pass, "greens residual {}", r.residual);
    }

    #[test]
    fn inequalities_nonnegative_on_perturbed_profiles() {
        for m in profiles::perturbed_profiles(10, 2024) {
            let m = std::sync::Arc::new(m);
            let h = solve_radial_harmonic(m.clone(), 0.45, 1.0, 2.55, 0.5).unwrap();
            for t in linspace(0.5, 2.5, 20) {
                let r = eqn_scalar_check(&h, t, 1e-7).unwrap();
                assert!(r.pass, "eqn_scalar gap {} at t = {t} on {}", r.residual, m.label);
                let rh = eqn_h_gap(&h, t, 0.3, 1e-10).unwrap();
                assert!(rh.pass && rh.lhs >= 0.0);
                let l24 = lemma24_check(&h, t, 1e-9).unwrap();
                assert!(l24.pass);
            }
        }
    }

    #[test]
    fn tolerance_registry_rejects_unknown_names() {
        let mut tols = Tolerances::default();
        assert!(tols.set("lemma21", 1e-6).is_ok());
        assert!((tols.get("lemma21") - 1e-6).abs() < 1e-20);
        assert!(matches!(
            tols.set("not_a_tolerance", 1.0),
            Err(IdentityError::UnknownTolerance(_))
        ));
    }

    #[test]
    fn verification_suite_passes_on_thm1() {
        let tols = Tolerances::default();
        let suite = verification_suite(&thm1(1.0), 20, DEFAULT_EPSILON, &tols).unwrap();
        for r in &suite {
            assert!(r.pass, "{} failed at t = {}: residual {}", r.name, r.t, r.residual);
        }
    }

    #[test]
    fn verification_suite_flags_cylinder_flatness_only() {
        let tols = Tolerances::default();
        let suite = verification_suite(&cylinder_harmonic(), 12, DEFAULT_EPSILON, &tols).unwrap();
        let mut flat_failures = 0;
        for r in &suite {
            if r.name == "scalar_flat" {
                assert!(!r.pass);
                flat_failures += 1;
            } else {
                assert!(r.pass, "{} failed: residual {}", r.name, r.residual);
            }
        }
        assert!(flat_failures > 0);
    }
}
