//! Warped-product metric profiles `g = A(t)^2 dt^2 + B(t)^2 g_{S^2}` and the
//! catalog of explicit rotationally symmetric metrics.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use thiserror::Error;

use crate::numeric::{central_d1, central_d2, fd_step};

/// Relative margin kept away from open/singular interval endpoints.
pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("parameter {name} must be positive, got {value}")]
    NonPositiveParam { name: &'static str, value: f64 },
    #[error("invalid interval: lo = {lo} must be below hi = {hi}")]
    BadInterval { lo: f64, hi: f64 },
    #[error("reparametrization map is not strictly monotone (derivative changes sign near s = {at})")]
    NonMonotoneMap { at: f64 },
    #[error("reparametrization image leaves the source domain at s = {at} (t = {image})")]
    MapImageOutsideDomain { at: f64, image: f64 },
    #[error("profile {which} is not positive at t = {t} (value {value})")]
    NonPositiveProfile { which: &'static str, t: f64, value: f64 },
}

/// A coordinate interval, possibly open at a singular endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub open_lo: bool,
    pub open_hi: bool,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, open_lo: bool, open_hi: bool) -> Result<Self, ProfileError> {
        if !(lo < hi) {
            return Err(ProfileError::BadInterval { lo, hi });
        }
        Ok(Interval {
            lo,
            hi,
            open_lo,
            open_hi,
        })
    }

    pub fn open(lo: f64, hi: f64) -> Result<Self, ProfileError> {
        Self::new(lo, hi, true, true)
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self, ProfileError> {
        Self::new(lo, hi, false, false)
    }

    pub fn span(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        let lo_ok = if self.open_lo { t > self.lo } else { t >= self.lo };
        let hi_ok = if self.open_hi { t < self.hi } else { t <= self.hi };
        lo_ok && hi_ok
    }

    /// Evaluation region after applying the endpoint margin `eps`.
    ///
    /// The margin is relative but capped at `eps` in absolute terms so that
    /// wide truncations of half-lines (e.g. (0, 1000)) do not push the region
    /// far from a singular origin.
    pub fn sample_region(&self, eps: f64) -> (f64, f64) {
        let m = eps * self.span().min(1.0);
        let lo = if self.open_lo { self.lo + m } else { self.lo };
        let hi = if self.open_hi { self.hi - m } else { self.hi };
        (lo, hi)
    }

    /// `n` uniformly spaced points in the evaluation region.
    pub fn sample_points(&self, n: usize, eps: f64) -> Vec<f64> {
        let (lo, hi) = self.sample_region(eps);
        linspace(lo, hi, n)
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A scalar profile with two derivatives, evaluated as closed forms when
/// available and by central finite differences otherwise.
#[derive(Clone)]
pub struct ProfileCurve {
    f: ScalarFn,
    d1: ScalarFn,
    d2: ScalarFn,
}

impl ProfileCurve {
    pub fn analytic<F, D1, D2>(f: F, d1: D1, d2: D2) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D1: Fn(f64) -> f64 + Send + Sync + 'static,
        D2: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ProfileCurve {
            f: Arc::new(f),
            d1: Arc::new(d1),
            d2: Arc::new(d2),
        }
    }

    pub fn constant(v: f64) -> Self {
        Self::analytic(move |_| v, |_| 0.0, |_| 0.0)
    }

    /// Derivatives by finite differences of the values. Loses roughly half
    /// the mantissa on the second derivative; prefer `analytic` when a
    /// closed form exists.
    pub fn from_value_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let f: ScalarFn = Arc::new(f);
        let f1 = f.clone();
        let f2 = f.clone();
        ProfileCurve {
            f,
            d1: Arc::new(move |t| central_d1(&|x| f1(x), t, fd_step(t))),
            d2: Arc::new(move |t| central_d2(&|x| f2(x), t, fd_step(t))),
        }
    }

    /// Closed-form value and first derivative; second derivative by a
    /// central difference of the first.
    pub fn from_value_d1<F, D1>(f: F, d1: D1) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D1: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let d1: ScalarFn = Arc::new(d1);
        let d1c = d1.clone();
        ProfileCurve {
            f: Arc::new(f),
            d1,
            d2: Arc::new(move |t| central_d1(&|x| d1c(x), t, fd_step(t))),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn d1(&self, t: f64) -> f64 {
        (self.d1)(t)
    }

    pub fn d2(&self, t: f64) -> f64 {
        (self.d2)(t)
    }
}

/// A rotationally symmetric metric `A(t)^2 dt^2 + B(t)^2 g_{S^2}`.
#[derive(Clone)]
pub struct MetricProfile {
    pub domain: Interval,
    pub a: ProfileCurve,
    pub b: ProfileCurve,
    pub label: String,
}

impl MetricProfile {
    pub fn new(domain: Interval, a: ProfileCurve, b: ProfileCurve, label: &str) -> Self {
        MetricProfile {
            domain,
            a,
            b,
            label: label.to_string(),
        }
    }

    pub fn a(&self, t: f64) -> f64 {
        self.a.eval(t)
    }

    pub fn b(&self, t: f64) -> f64 {
        self.b.eval(t)
    }

    pub fn da(&self, t: f64) -> f64 {
        self.a.d1(t)
    }

    pub fn db(&self, t: f64) -> f64 {
        self.b.d1(t)
    }

    pub fn d2a(&self, t: f64) -> f64 {
        self.a.d2(t)
    }

    pub fn d2b(&self, t: f64) -> f64 {
        self.b.d2(t)
    }

    /// Area of the level sphere at t.
    pub fn area(&self, t: f64) -> f64 {
        let b = self.b(t);
        4.0 * PI * b * b
    }

    pub fn check_positive(&self, t: f64) -> Result<(), ProfileError> {
        let a = self.a(t);
        if a <= 0.0 {
            return Err(ProfileError::NonPositiveProfile {
                which: "A",
                t,
                value: a,
            });
        }
        let b = self.b(t);
        if b <= 0.0 {
            return Err(ProfileError::NonPositiveProfile {
                which: "B",
                t,
                value: b,
            });
        }
        Ok(())
    }
}

type WEval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A catalog metric together with its expected invariants.
#[derive(Clone)]
pub struct CatalogEntry {
    pub profile: Arc<MetricProfile>,
    pub params: BTreeMap<String, f64>,
    pub expected_scalar_curvature: Option<f64>,
    pub expected_w: Option<WEval>,
    pub notes: String,
}

impl CatalogEntry {
    fn new(profile: MetricProfile, params: &[(&str, f64)], notes: &str) -> Self {
        CatalogEntry {
            profile: Arc::new(profile),
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            expected_scalar_curvature: None,
            expected_w: None,
            notes: notes.to_string(),
        }
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<f64, ProfileError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ProfileError::NonPositiveParam { name, value })
    }
}

/// Flat metric `d rho^2 + rho^2 g_{S^2}` on a truncation of (0, inf).
pub fn euclidean() -> CatalogEntry {
    let domain = Interval::open(0.0, 1e3).unwrap();
    let a = ProfileCurve::constant(1.0);
    let b = ProfileCurve::analytic(|t| t, |_| 1.0, |_| 0.0);
    let mut e = CatalogEntry::new(
        MetricProfile::new(domain, a, b, "euclidean"),
        &[],
        "flat space in polar coordinates",
    );
    e.expected_scalar_curvature = Some(0.0);
    e
}

/// Schwarzschild metric `(1 + c/r)^4 g_R3` in its conformally flat chart:
/// A(r) = (1 + c/r)^2, B(r) = r (1 + c/r)^2.
pub fn schwarzschild(c: f64) -> Result<CatalogEntry, ProfileError> {
    let c = require_positive("c", c)?;
    let domain = Interval::open(0.0, 1e3).unwrap();
    let a = ProfileCurve::analytic(
        move |r| {
            let u = 1.0 + c / r;
            u * u
        },
        move |r| -2.0 * c / (r * r) - 2.0 * c * c / (r * r * r),
        move |r| 4.0 * c / (r * r * r) + 6.0 * c * c / (r * r * r * r),
    );
    let b = ProfileCurve::analytic(
        move |r| r + 2.0 * c + c * c / r,
        move |r| 1.0 - c * c / (r * r),
        move |r| 2.0 * c * c / (r * r * r),
    );
    let mut e = CatalogEntry::new(
        MetricProfile::new(domain, a, b, "schwarzschild"),
        &[("c", c)],
        "conformally flat chart of the Schwarzschild metric",
    );
    e.expected_scalar_curvature = Some(0.0);
    Ok(e)
}

/// Rigidity metric of the (0,1)-chart theorem:
/// A(t) = c / (t^2 (1-t)^2), B(t) = c / (t (1-t)).
pub fn thm1_metric(c: f64) -> Result<CatalogEntry, ProfileError> {
    let c = require_positive("c", c)?;
    let domain = Interval::open(0.0, 1.0).unwrap();
    // p = t(1-t)
    let a = ProfileCurve::analytic(
        move |t| {
            let p = t * (1.0 - t);
            c / (p * p)
        },
        move |t| {
            let p = t * (1.0 - t);
            -2.0 * c * (1.0 - 2.0 * t) / (p * p * p)
        },
        move |t| {
            let p = t * (1.0 - t);
            let dp = 1.0 - 2.0 * t;
            c * (6.0 * dp * dp + 4.0 * p) / (p * p * p * p)
        },
    );
    let b = ProfileCurve::analytic(
        move |t| c / (t * (1.0 - t)),
        move |t| {
            let p = t * (1.0 - t);
            -c * (1.0 - 2.0 * t) / (p * p)
        },
        move |t| {
            let p = t * (1.0 - t);
            let dp = 1.0 - 2.0 * t;
            c * (2.0 * dp * dp + 2.0 * p) / (p * p * p)
        },
    );
    let mut e = CatalogEntry::new(
        MetricProfile::new(domain, a, b, "thm1"),
        &[("c", c)],
        "rigidity metric on (0,1) x S^2",
    );
    e.expected_scalar_curvature = Some(0.0);
    e.expected_w = Some(Arc::new(|t| {
        4.0 * PI * t * t * (1.0 - t) * (1.0 - t)
    }));
    Ok(e)
}

/// Default truncation of the (-inf, -1) domain of the second rigidity metric.
pub const THM3_T_LO: f64 = -50.0;

/// Rigidity metric of the (-inf,-1)-chart theorem:
/// A(t) = sqrt(c) / (t^2 (1+t)^2), B(t) = sqrt(c) / (t (1+t)).
///
/// On t < -1 the product t(1+t) is positive, so B > 0 as written. The
/// coefficient convention differs from the (0,1) chart: here the metric
/// carries c, not c^2, so sqrt(c) enters the profiles.
pub fn thm3_metric(c: f64) -> Result<CatalogEntry, ProfileError> {
    let c = require_positive("c", c)?;
    let s = c.sqrt();
    let domain = Interval::new(THM3_T_LO, -1.0, false, true).unwrap();
    // q = t(1+t), positive on (-inf, -1)
    let a = ProfileCurve::analytic(
        move |t| {
            let q = t * (1.0 + t);
            s / (q * q)
        },
        move |t| {
            let q = t * (1.0 + t);
            -2.0 * s * (1.0 + 2.0 * t) / (q * q * q)
        },
        move |t| {
            let q = t * (1.0 + t);
            let dq = 1.0 + 2.0 * t;
            s * (6.0 * dq * dq - 4.0 * q) / (q * q * q * q)
        },
    );
    let b = ProfileCurve::analytic(
        move |t| s / (t * (1.0 + t)),
        move |t| {
            let q = t * (1.0 + t);
            -s * (1.0 + 2.0 * t) / (q * q)
        },
        move |t| {
            let q = t * (1.0 + t);
            let dq = 1.0 + 2.0 * t;
            s * (2.0 * dq * dq - 2.0 * q) / (q * q * q)
        },
    );
    let mut e = CatalogEntry::new(
        MetricProfile::new(domain, a, b, "thm3"),
        &[("c", c)],
        "rigidity metric on (-inf,-1) x S^2, truncated",
    );
    e.expected_scalar_curvature = Some(0.0);
    e.expected_w = Some(Arc::new(|t| {
        4.0 * PI * t * t * (1.0 + t) * (1.0 + t)
    }));
    Ok(e)
}

/// The r-coordinate chart of the same metric, r = t(1+t) on (0, inf):
/// A(r) = sqrt(c) r^-2 (1+4r)^{-1/2}, B(r) = sqrt(c) / r.
pub fn thm3_rcoord(c: f64) -> Result<CatalogEntry, ProfileError> {
    let c = require_positive("c", c)?;
    let s = c.sqrt();
    let domain = Interval::open(0.0, 100.0).unwrap();
    let a = ProfileCurve::analytic(
        move |r| s / (r * r * (1.0 + 4.0 * r).sqrt()),
        move |r| {
            let u = (1.0 + 4.0 * r).sqrt();
            // d/dr [ r^-2 u^-1 ] = -2 r^-3 u^-1 - 2 r^-2 u^-3
            s * (-2.0 / (r * r * r * u) - 2.0 / (r * r * u * u * u))
        },
        move |r| {
            let u = (1.0 + 4.0 * r).sqrt();
            let u3 = u * u * u;
            let u5 = u3 * u * u;
            s * (6.0 / (r * r * r * r * u) + 8.0 / (r * r * r * u3) + 12.0 / (r * r * u5))
        },
    );
    let b = ProfileCurve::analytic(
        move |r| s / r,
        move |r| -s / (r * r),
        move |r| 2.0 * s / (r * r * r),
    );
    let mut e = CatalogEntry::new(
        MetricProfile::new(domain, a, b, "thm3-rcoord"),
        &[("c", c)],
        "r-coordinate chart of the (-inf,-1) rigidity metric",
    );
    e.expected_scalar_curvature = Some(0.0);
    Ok(e)
}

/// Round cylinder R x S^2 with unit sphere radius; Sc = 2. Negative control
/// for scalar-flatness checks.
pub fn cylinder() -> CatalogEntry {
    let domain = Interval::closed(0.0, 10.0).unwrap();
    let a = ProfileCurve::constant(1.0);
    let b = ProfileCurve::constant(1.0);
    let mut e = CatalogEntry::new(
        MetricProfile::new(domain, a, b, "cylinder"),
        &[],
        "product metric R x S^2; scalar curvature 2",
    );
    e.expected_scalar_curvature = Some(2.0);
    e
}

/// A strictly monotone coordinate change with two derivatives.
pub struct MonotoneMap {
    pub map: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub d1: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub d2: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl MonotoneMap {
    pub fn identity() -> Self {
        MonotoneMap {
            map: Box::new(|s| s),
            d1: Box::new(|_| 1.0),
            d2: Box::new(|_| 0.0),
        }
    }
}

/// Pull a catalog entry back along a strictly monotone map phi:
/// `A~(s) = A(phi(s)) |phi'(s)|`, `B~(s) = B(phi(s))`.
///
/// Geometric scalars are invariant at corresponding points. The second
/// derivative of the pulled-back A is taken by a finite difference of its
/// closed-form first derivative (a third derivative of phi would otherwise
/// be required).
pub fn reparametrize(
    entry: &CatalogEntry,
    phi: MonotoneMap,
    new_domain: Interval,
    label: &str,
) -> Result<CatalogEntry, ProfileError> {
    let (lo, hi) = new_domain.sample_region(DEFAULT_EPSILON);
    let probe = linspace(lo, hi, 64);
    let sign = (phi.d1)(probe[0]).signum();
    for &s in &probe {
        let d = (phi.d1)(s);
        if d == 0.0 || d.signum() != sign {
            return Err(ProfileError::NonMonotoneMap { at: s });
        }
        let image = (phi.map)(s);
        if !entry.profile.domain.contains(image) {
            return Err(ProfileError::MapImageOutsideDomain { at: s, image });
        }
    }

    let src = entry.profile.clone();
    let phi = Arc::new(phi);

    let src_a = src.clone();
    let phi_a = phi.clone();
    let a_val = move |s: f64| src_a.a((phi_a.map)(s)) * (phi_a.d1)(s).abs();
    let src_a1 = src.clone();
    let phi_a1 = phi.clone();
    let a_d1 = move |s: f64| {
        let t = (phi_a1.map)(s);
        let d1 = (phi_a1.d1)(s);
        let d2 = (phi_a1.d2)(s);
        d1.signum() * (src_a1.da(t) * d1 * d1 + src_a1.a(t) * d2)
    };
    let a = ProfileCurve::from_value_d1(a_val, a_d1);

    let src_b = src.clone();
    let phi_b = phi.clone();
    let src_b1 = src.clone();
    let phi_b1 = phi.clone();
    let src_b2 = src.clone();
    let phi_b2 = phi.clone();
    let b = ProfileCurve::analytic(
        move |s| src_b.b((phi_b.map)(s)),
        move |s| {
            let t = (phi_b1.map)(s);
            src_b1.db(t) * (phi_b1.d1)(s)
        },
        move |s| {
            let t = (phi_b2.map)(s);
            let d1 = (phi_b2.d1)(s);
            src_b2.d2b(t) * d1 * d1 + src_b2.db(t) * (phi_b2.d2)(s)
        },
    );

    Ok(CatalogEntry {
        profile: Arc::new(MetricProfile::new(new_domain, a, b, label)),
        params: entry.params.clone(),
        expected_scalar_curvature: entry.expected_scalar_curvature,
        expected_w: None,
        notes: format!("{} (reparametrized)", entry.notes),
    })
}

/// Fixed-seed family of smooth perturbed profiles used by the inequality
/// property tests. The base metric A = 1, B = sin(t) on (0.4, 2.6) has
/// Sc = 6; Gaussian bump perturbations of amplitude up to 0.1 keep the
/// scalar curvature positive, which is the hypothesis under which the
/// inequality chain is claimed.
pub fn perturbed_profiles(n: usize, seed: u64) -> Vec<MetricProfile> {
    use rand::Rng;
    use rand::SeedableRng;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let domain = Interval::closed(0.4, 2.6).unwrap();
    let (t0, sigma) = (1.5_f64, 0.6_f64);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let amp_a: f64 = rng.gen_range(-0.1..0.1);
        let amp_b: f64 = rng.gen_range(-0.1..0.1);
        let bump = move |t: f64| (-((t - t0) / sigma).powi(2)).exp();
        let bump1 = move |t: f64| bump(t) * (-2.0 * (t - t0) / (sigma * sigma));
        let bump2 = move |t: f64| {
            bump(t) * (4.0 * (t - t0) * (t - t0) / sigma.powi(4) - 2.0 / (sigma * sigma))
        };
        let a = ProfileCurve::analytic(
            move |t| 1.0 + amp_a * bump(t),
            move |t| amp_a * bump1(t),
            move |t| amp_a * bump2(t),
        );
        let b = ProfileCurve::analytic(
            move |t| t.sin() * (1.0 + amp_b * bump(t)),
            move |t| t.cos() * (1.0 + amp_b * bump(t)) + t.sin() * amp_b * bump1(t),
            move |t| {
                -t.sin() * (1.0 + amp_b * bump(t))
                    + 2.0 * t.cos() * amp_b * bump1(t)
                    + t.sin() * amp_b * bump2(t)
            },
        );
        out.push(MetricProfile::new(
            domain,
            a,
            b,
            &format!("perturbed-{i}"),
        ));
    }
    out
}
