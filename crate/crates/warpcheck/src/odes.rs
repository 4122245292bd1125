//! The Riccati-type ODE family behind the scalar-flat construction:
//! the compatibility equation f'' + 3(f'h + f h') + 3 f h^2 = 0, the Riccati
//! equation r^2 h' - 2 r h + r^2 h^2 + 2 = 0 with closed-form solutions
//! h_c(r) = (1 - 2cr)/(r - c r^2), the induced w-evolution dw/dt = 2 h_c w,
//! and a generator that rebuilds the warped-product metric from w and
//! validates scalar-flatness.

use std::f64::consts::PI;
use std::sync::Arc;

use thiserror::Error;

use crate::curvature::{
    curvature_at, curvature_oracle, oracle_step, scalar_curvature_scale, CurvatureError,
};
use crate::numeric::{integrate_ode, NumericError, OdeOptions};
use crate::profiles::{
    CatalogEntry, Interval, MetricProfile, ProfileCurve, ProfileError, DEFAULT_EPSILON,
};

/// Exclusion margin around r = 0 and the pole r = 1/c of the closed form.
pub const POLE_MARGIN: f64 = 1e-2;

#[derive(Debug, Error)]
pub enum OdeError {
    #[error("r = {r} is within {margin} of a pole (c = {c})")]
    PoleProximity { r: f64, c: f64, margin: f64 },
    #[error("w vanishes at t = {at} inside the requested domain")]
    WNotPositive { at: f64 },
    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParam { name: &'static str, value: f64 },
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
}

/// A pair (f, h) tested against the compatibility equation; `c` is set when
/// h is the closed-form family member.
pub struct FHPair {
    pub f: ProfileCurve,
    pub h: ProfileCurve,
    pub c: Option<f64>,
}

impl FHPair {
    /// The default pair of the construction: f(r) = r^-2 with a closed-form
    /// family member h_c.
    pub fn inverse_square_with_family(c: f64) -> Self {
        FHPair {
            f: ProfileCurve::analytic(
                |r| r.powi(-2),
                |r| -2.0 * r.powi(-3),
                |r| 6.0 * r.powi(-4),
            ),
            h: closed_form_h(c),
            c: Some(c),
        }
    }
}

fn check_pole(r: f64, c: f64) -> Result<(), OdeError> {
    if r.abs() < POLE_MARGIN || (c != 0.0 && (r - 1.0 / c).abs() < POLE_MARGIN) {
        return Err(OdeError::PoleProximity {
            r,
            c,
            margin: POLE_MARGIN,
        });
    }
    Ok(())
}

/// Closed-form solution family h_c(r) = (1 - 2cr)/(r - c r^2). Writing
/// p = r - c r^2 gives h = p'/p, so h' = -2c/p - h^2.
pub fn closed_form_h(c: f64) -> ProfileCurve {
    let h = move |r: f64| {
        let p = r - c * r * r;
        (1.0 - 2.0 * c * r) / p
    };
    let d1 = move |r: f64| {
        let p = r - c * r * r;
        let hv = (1.0 - 2.0 * c * r) / p;
        -2.0 * c / p - hv * hv
    };
    let d2 = move |r: f64| {
        // h'' = 2c p'/p^2 - 2 h h'
        let p = r - c * r * r;
        let dp = 1.0 - 2.0 * c * r;
        let hv = dp / p;
        let h1 = -2.0 * c / p - hv * hv;
        2.0 * c * dp / (p * p) - 2.0 * hv * h1
    };
    ProfileCurve::analytic(h, d1, d2)
}

/// Left side of the compatibility equation
/// f''(r) + 3 (f'(r) h(r) + f(r) h'(r)) + 3 f(r) h(r)^2.
pub fn fh_residual(p: &FHPair, r: f64) -> Result<f64, OdeError> {
    if let Some(c) = p.c {
        check_pole(r, c)?;
    }
    let (f, f1, f2) = (p.f.eval(r), p.f.d1(r), p.f.d2(r));
    let (h, h1) = (p.h.eval(r), p.h.d1(r));
    Ok(f2 + 3.0 * (f1 * h + f * h1) + 3.0 * f * h * h)
}

/// Left side of the Riccati equation r^2 h' - 2 r h + r^2 h^2 + 2.
pub fn riccati_residual(h: &ProfileCurve, r: f64) -> f64 {
    let (hv, h1) = (h.eval(r), h.d1(r));
    r * r * h1 - 2.0 * r * hv + r * r * hv * hv + 2.0
}

/// Family parameter from an initial condition: the closed form through
/// (r0, h0) has c = (1 - h0 r0) / (r0 (2 - h0 r0)). Returns None in the
/// degenerate case h0 = 2/r0 (the c -> infinity limit).
pub fn c_fit(r0: f64, h0: f64) -> Option<f64> {
    let den = r0 * (2.0 - h0 * r0);
    if den.abs() < 1e-12 * (1.0 + (h0 * r0 * r0).abs()) {
        None
    } else {
        Some((1.0 - h0 * r0) / den)
    }
}

/// Numerical flow of the Riccati equation h' = (2 r h - r^2 h^2 - 2) / r^2
/// from (r0, h0). Each evaluation integrates adaptively from the initial
/// point; blow-ups (expected when the trajectory crosses a closed-form pole)
/// are reported with their location.
pub struct RiccatiFlow {
    pub r0: f64,
    pub h0: f64,
    opts: OdeOptions,
}

pub fn integrate_riccati(r0: f64, h0: f64, r1: f64) -> Result<RiccatiFlow, OdeError> {
    if r0 <= 0.0 {
        return Err(OdeError::NonPositiveParam {
            name: "r0",
            value: r0,
        });
    }
    if r1 <= 0.0 {
        return Err(OdeError::NonPositiveParam {
            name: "r1",
            value: r1,
        });
    }
    Ok(RiccatiFlow {
        r0,
        h0,
        opts: OdeOptions {
            max_step: (r1 - r0).abs() / 64.0,
            ..OdeOptions::default()
        },
    })
}

impl RiccatiFlow {
    pub fn eval(&self, r: f64) -> Result<f64, OdeError> {
        let rhs = |x: f64, y: f64| (2.0 * x * y - x * x * y * y - 2.0) / (x * x);
        Ok(integrate_ode(&rhs, self.r0, self.h0, r, &self.opts)?)
    }
}

/// Closed-form solution w(t) = K t^2 (1 - c t)^2 of dw/dt = 2 h_c w.
#[derive(Debug, Clone, Copy)]
pub struct WSolution {
    pub c_family: f64,
    pub k: f64,
}

impl WSolution {
    pub fn eval(&self, t: f64) -> f64 {
        let u = 1.0 - self.c_family * t;
        self.k * t * t * u * u
    }

    pub fn d1(&self, t: f64) -> f64 {
        let c = self.c_family;
        2.0 * self.k * t * (1.0 - c * t) * (1.0 - 2.0 * c * t)
    }

    pub fn d2(&self, t: f64) -> f64 {
        let c = self.c_family;
        2.0 * self.k * (1.0 - 6.0 * c * t + 6.0 * c * c * t * t)
    }
}

/// Construct the w-solution on a domain where it stays positive.
pub fn solve_w(c_family: f64, k: f64, domain: Interval) -> Result<WSolution, OdeError> {
    if k <= 0.0 {
        return Err(OdeError::NonPositiveParam {
            name: "K",
            value: k,
        });
    }
    let mut zeros = vec![0.0];
    if c_family != 0.0 {
        zeros.push(1.0 / c_family);
    }
    for z in zeros {
        let strictly_inside = z > domain.lo && z < domain.hi;
        let at_closed_lo = z == domain.lo && !domain.open_lo;
        let at_closed_hi = z == domain.hi && !domain.open_hi;
        if strictly_inside || at_closed_lo || at_closed_hi {
            return Err(OdeError::WNotPositive { at: z });
        }
    }
    Ok(WSolution { c_family, k })
}

/// A metric rebuilt from the w-solution: A = 1/(c0 w), B = 1/(c0 sqrt(K w)).
///
/// The sphere coefficient carries the extra sqrt(K) so that the profile is
/// scalar-flat for every K (the radial and spherical normalizations are
/// independent constants of the reconstruction; tying both to c0 alone is
/// only consistent when K = 1).
pub struct GeneratedMetric {
    pub c_family: f64,
    pub k: f64,
    pub c0: f64,
    pub w: WSolution,
    pub entry: CatalogEntry,
}

pub fn generate_metric(
    c_family: f64,
    k: f64,
    c0: f64,
    domain: Interval,
) -> Result<GeneratedMetric, OdeError> {
    if c0 <= 0.0 {
        return Err(OdeError::NonPositiveParam {
            name: "c0",
            value: c0,
        });
    }
    let w = solve_w(c_family, k, domain)?;
    let a = {
        let w = w;
        ProfileCurve::analytic(
            move |t| 1.0 / (c0 * w.eval(t)),
            move |t| -w.d1(t) / (c0 * w.eval(t).powi(2)),
            move |t| {
                let (v, v1, v2) = (w.eval(t), w.d1(t), w.d2(t));
                (2.0 * v1 * v1 - v * v2) / (c0 * v * v * v)
            },
        )
    };
    let m = 1.0 / (c0 * k.sqrt());
    let b = {
        let w = w;
        ProfileCurve::analytic(
            move |t| m / w.eval(t).sqrt(),
            move |t| -m * w.d1(t) / (2.0 * w.eval(t).powf(1.5)),
            move |t| {
                let (v, v1, v2) = (w.eval(t), w.d1(t), w.d2(t));
                m * (3.0 * v1 * v1 - 2.0 * v * v2) / (4.0 * v.powf(2.5))
            },
        )
    };
    let profile = MetricProfile::new(domain, a, b, "family");
    let mut entry = CatalogEntry {
        profile: Arc::new(profile),
        params: [
            ("c_family".to_string(), c_family),
            ("K".to_string(), k),
            ("c0".to_string(), c0),
        ]
        .into_iter()
        .collect(),
        expected_scalar_curvature: Some(0.0),
        expected_w: None,
        notes: "metric rebuilt from the closed-form w-solution".to_string(),
    };
    entry.expected_w = Some(Arc::new(move |t| w.eval(t)));
    Ok(GeneratedMetric {
        c_family,
        k,
        c0,
        w,
        entry,
    })
}

/// Default generation domain: (0, 1/c) for c > 0, (0, 10) otherwise.
pub fn default_family_domain(c_family: f64) -> Interval {
    if c_family > 0.0 {
        Interval::open(0.0, 1.0 / c_family).unwrap()
    } else {
        Interval::open(0.0, 10.0).unwrap()
    }
}

/// Scalar-flatness validation report for a metric profile. The maxima are
/// of |Sc| scaled by the local sectional-curvature magnitude (see
/// [`validate_entry`]).
#[derive(Debug, Clone)]
pub struct FlatnessReport {
    pub max_sc_closed: f64,
    pub max_sc_oracle: f64,
    pub closed_tol: f64,
    pub oracle_tol: f64,
    pub pass: bool,
}

/// Oracle step adapted to the local variation scale: near a singular
/// endpoint the profiles vary on the scale of the distance to it, so the
/// finite-difference step must shrink proportionally.
pub fn adapted_oracle_step(profile: &MetricProfile, t: f64) -> f64 {
    let edge = (t - profile.domain.lo).min(profile.domain.hi - t);
    // Local variation length of the profiles; +inf (harmless) when a
    // derivative vanishes, capped by the coordinate magnitude.
    let la = (profile.a(t) / profile.da(t)).abs();
    let lb = (profile.b(t) / profile.db(t)).abs();
    let scale = la.min(lb).min(t.abs().max(1.0));
    oracle_step(t).min(1e-4 * scale).min(0.2 * edge)
}

/// Max scaled |Sc| over an interior grid, via both curvature paths. The
/// scalar curvature is the cancellation of sectional terms that can be
/// individually large, so each sample is judged relative to the
/// pre-cancellation term magnitude ([`scalar_curvature_scale`]). The grid
/// keeps a small extra margin from the evaluation-region boundary so the
/// oracle stencil always fits.
pub fn validate_entry(
    profile: &MetricProfile,
    npoints: usize,
    closed_tol: f64,
    oracle_tol: f64,
) -> Result<FlatnessReport, OdeError> {
    let (lo, hi) = profile.domain.sample_region(DEFAULT_EPSILON);
    let d = 0.002 * (hi - lo);
    let mut max_closed: f64 = 0.0;
    let mut max_oracle: f64 = 0.0;
    for t in crate::profiles::linspace(lo + d, hi - d, npoints) {
        let scale = scalar_curvature_scale(profile, t);
        max_closed = max_closed.max(curvature_at(profile, t)?.sc.abs() / scale);
        let step = adapted_oracle_step(profile, t);
        max_oracle = max_oracle.max(curvature_oracle(profile, t, step)?.sc.abs() / scale);
    }
    Ok(FlatnessReport {
        max_sc_closed: max_closed,
        max_sc_oracle: max_oracle,
        closed_tol,
        oracle_tol,
        pass: max_closed < closed_tol && max_oracle < oracle_tol,
    })
}

pub fn scalar_flat_validate(gm: &GeneratedMetric, npoints: usize) -> Result<FlatnessReport, OdeError> {
    validate_entry(&gm.entry.profile, npoints, 1e-8, 1e-6)
}

/// Convenience: K = 4 pi, c0 = 1/(4 pi) reproduces the unit-coefficient
/// rigidity metrics.
pub fn unit_normalization() -> (f64, f64) {
    (4.0 * PI, 1.0 / (4.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::coordinate_harmonic;
    use crate::levelset::{default_plus_grid, monotone_plus};
    use crate::profiles::{self, linspace};

    fn pole_free_grid(c: f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        linspace(lo, hi, n)
            .into_iter()
            .filter(|&r| check_pole(r, c).is_ok())
            .collect()
    }

    #[test]
    fn riccati_residual_vanishes_along_family() {
        for c in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let h = closed_form_h(c);
            for r in pole_free_grid(c, 0.05, 3.0, 20) {
                let res = riccati_residual(&h, r);
                assert!(res.abs() < 1e-10, "residual {res} at r = {r}, c = {c}");
            }
        }
    }

    #[test]
    fn riccati_residual_special_cases() {
        let h0 = closed_form_h(0.0);
        assert!(riccati_residual(&h0, 5.0).abs() < 1e-13);
        let zero = ProfileCurve::constant(0.0);
        assert!((riccati_residual(&zero, 1.7) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn fh_residual_vanishes_along_family() {
        for c in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
            let p = FHPair::inverse_square_with_family(c);
            for r in pole_free_grid(c, 0.05, 3.0, 25) {
                let res = fh_residual(&p, r).unwrap();
                // The equation's terms grow like r^-4 toward r = 0; judge the
                // cancellation relative to their size.
                let scale = p.f.d2(r).abs().max(1.0);
                assert!(
                    res.abs() < 1e-10 * scale,
                    "fh residual {res} at r = {r}, c = {c}"
                );
            }
        }
    }

    #[test]
    fn fh_residual_nonzero_for_non_solution() {
        // h = 3/r gives residual 6 r^-4, nonzero (pre-verified by hand).
        let p = FHPair {
            f: ProfileCurve::analytic(|r| r.powi(-2), |r| -2.0 * r.powi(-3), |r| 6.0 * r.powi(-4)),
            h: ProfileCurve::analytic(|r| 3.0 / r, |r| -3.0 / (r * r), |r| 6.0 / (r * r * r)),
            c: None,
        };
        let res = fh_residual(&p, 1.0).unwrap();
        assert!((res - 6.0).abs() < 1e-12, "residual {res}");
    }

    #[test]
    fn fh_rejects_pole_proximity() {
        let p = FHPair::inverse_square_with_family(1.0);
        assert!(matches!(
            fh_residual(&p, 1.003),
            Err(OdeError::PoleProximity { .. })
        ));
    }

    #[test]
    fn integration_matches_closed_form() {
        // c = 1 through (0.5, 0).
        let flow = integrate_riccati(0.5, 0.0, 0.9).unwrap();
        let h1 = closed_form_h(1.0);
        for r in [0.6, 0.7, 0.8, 0.9] {
            let y = flow.eval(r).unwrap();
            assert!((y - h1.eval(r)).abs() < 1e-6, "h({r}) = {y}");
        }
        // (1, 1) fits c = 0, i.e. h = 1/r.
        assert_eq!(c_fit(1.0, 1.0), Some(0.0));
        let flow0 = integrate_riccati(1.0, 1.0, 3.0).unwrap();
        let y3 = flow0.eval(3.0).unwrap();
        assert!((y3 - 1.0 / 3.0).abs() < 1e-7, "h(3) = {y3}");
    }

    #[test]
    fn c_fit_matches_family_members() {
        for c in [-2.0, -0.5, 0.0, 0.5, 2.0] {
            let h = closed_form_h(c);
            for r0 in [0.3, 0.7, 1.6] {
                if check_pole(r0, c).is_err() {
                    continue;
                }
                let fitted = c_fit(r0, h.eval(r0)).unwrap();
                assert!((fitted - c).abs() < 1e-10, "fit {fitted} vs {c}");
            }
        }
    }

    #[test]
    fn degenerate_initial_condition_has_no_fit() {
        assert!(c_fit(2.0, 1.0).is_none()); // h0 = 2/r0
        // Integration still runs for a short span.
        let flow = integrate_riccati(2.0, 1.0, 2.5).unwrap();
        assert!(flow.eval(2.2).is_ok());
    }

    #[test]
    fn blow_up_reported_when_crossing_pole() {
        // c = 1 trajectory through (0.5, 0) has a pole at r = 1.
        let flow = integrate_riccati(0.5, 0.0, 1.5).unwrap();
        let r = flow.eval(1.5);
        assert!(
            matches!(r, Err(OdeError::Numeric(NumericError::BlowUp { .. }))),
            "expected blow-up, got {r:?}"
        );
    }

    #[test]
    fn w_solution_values() {
        let w1 = solve_w(1.0, 4.0 * PI, Interval::open(0.0, 1.0).unwrap()).unwrap();
        assert!((w1.eval(0.5) - PI / 4.0).abs() < 1e-14);
        let w0 = solve_w(0.0, 4.0 * PI, Interval::open(0.0, 10.0).unwrap()).unwrap();
        assert!((w0.eval(2.0) - 16.0 * PI).abs() < 1e-12);
        // c = -1 closed form evaluated at t = -2 gives 16 pi.
        let wm = WSolution {
            c_family: -1.0,
            k: 4.0 * PI,
        };
        assert!((wm.eval(-2.0) - 16.0 * PI).abs() < 1e-11);
    }

    #[test]
    fn w_domain_with_zero_rejected() {
        let r = solve_w(1.0, 1.0, Interval::open(0.0, 2.0).unwrap());
        assert!(matches!(r, Err(OdeError::WNotPositive { at }) if (at - 1.0).abs() < 1e-15));
    }

    #[test]
    fn w_ode_consistency() {
        // Numerical integration of dw/dt = 2 h_c w matches the closed form.
        for c in [-1.0, 0.0, 1.0] {
            let (lo, hi) = if c > 0.0 { (0.1, 0.9) } else { (0.1, 3.0) };
            let w = WSolution { c_family: c, k: 4.0 * PI };
            let h = closed_form_h(c);
            let rhs = |t: f64, y: f64| 2.0 * h.eval(t) * y;
            let y = integrate_ode(&rhs, lo, w.eval(lo), hi, &OdeOptions::default()).unwrap();
            assert!(
                (y - w.eval(hi)).abs() < 1e-8 * w.eval(hi),
                "c = {c}: {y} vs {}",
                w.eval(hi)
            );
        }
    }

    #[test]
    fn generator_reproduces_unit_rigidity_metric() {
        let (k, c0) = unit_normalization();
        let gm = generate_metric(1.0, k, c0, Interval::open(0.0, 1.0).unwrap()).unwrap();
        let thm1 = profiles::thm1_metric(1.0).unwrap();
        for t in linspace(0.05, 0.95, 40) {
            let ra = (gm.entry.profile.a(t) - thm1.profile.a(t)).abs() / thm1.profile.a(t);
            let rb = (gm.entry.profile.b(t) - thm1.profile.b(t)).abs() / thm1.profile.b(t);
            assert!(ra < 1e-10, "A mismatch {ra} at t = {t}");
            assert!(rb < 1e-10, "B mismatch {rb} at t = {t}");
        }
    }

    #[test]
    fn generated_metrics_are_scalar_flat() {
        for c in [-1.0, 0.0, 1.0, 2.0] {
            let gm = generate_metric(c, 1.0, 1.0, default_family_domain(c)).unwrap();
            let report = scalar_flat_validate(&gm, 50).unwrap();
            assert!(
                report.pass,
                "c = {c}: closed {:.3e}, oracle {:.3e}",
                report.max_sc_closed, report.max_sc_oracle
            );
        }
    }

    #[test]
    fn cylinder_negative_control() {
        let cyl = profiles::cylinder();
        let report = validate_entry(&cyl.profile, 20, 1e-8, 1e-6).unwrap();
        assert!(!report.pass);
        // Sc = 2, K_tan = 1: scaled residual 2 / max(1, 2) = 1.
        assert!((report.max_sc_closed - 1.0).abs() < 1e-6);
    }

    #[test]
    fn generator_round_trip_monotone_constancy() {
        let gm = generate_metric(1.0, 1.0, 2.0, Interval::open(0.0, 1.0).unwrap()).unwrap();
        let h = coordinate_harmonic(gm.entry.profile.clone()).unwrap();
        let s = monotone_plus(&h, &default_plus_grid(128, 1e-3)).unwrap();
        assert!(
            s.constant_value.is_some(),
            "series not constant; max derivative {}",
            s.max_derivative
        );
    }
}
