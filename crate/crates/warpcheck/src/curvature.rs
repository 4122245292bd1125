//! Curvature of warped-product metrics.
//!
//! The closed-form path uses arclength derivatives of the warp profile B:
//! with D = A^{-1} d/dt, the sectional curvatures are K_rad = -D^2B / B for
//! planes containing the radial direction and K_tan = (1 - (DB)^2) / B^2 for
//! the tangential plane. An independent oracle assembles the full Riemann
//! tensor from finite differences of the coordinate metric components.

use serde::Serialize;
use thiserror::Error;

use crate::profiles::MetricProfile;

#[derive(Debug, Error)]
pub enum CurvatureError {
    #[error("profile not positive at t = {t}: {what} = {value}")]
    InvalidProfile { what: &'static str, t: f64, value: f64 },
    #[error("oracle step {step} too large at t = {t}: needs 4*step inside the domain")]
    StepTooLarge { t: f64, step: f64 },
}

/// Pointwise curvature data of a rotationally symmetric metric.
///
/// Sign convention: the round cylinder (A = 1, B = 1) has K_tan = 1 and
/// Sc = 2.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurvaturePoint {
    pub t: f64,
    pub k_rad: f64,
    pub k_tan: f64,
    pub ric_11: f64,
    pub ric_aa: f64,
    pub sc: f64,
}

/// First and second arclength derivatives of B: DB = B'/A and
/// D2B = B''/A^2 - B'A'/A^3.
pub fn arclength_derivatives(m: &MetricProfile, t: f64) -> Result<(f64, f64), CurvatureError> {
    let a = m.a(t);
    if a <= 0.0 {
        return Err(CurvatureError::InvalidProfile {
            what: "A",
            t,
            value: a,
        });
    }
    let db = m.db(t) / a;
    let d2b = m.d2b(t) / (a * a) - m.db(t) * m.da(t) / (a * a * a);
    Ok((db, d2b))
}

/// Closed-form curvature from the warp profiles.
pub fn curvature_at(m: &MetricProfile, t: f64) -> Result<CurvaturePoint, CurvatureError> {
    let b = m.b(t);
    if b <= 0.0 {
        return Err(CurvatureError::InvalidProfile {
            what: "B",
            t,
            value: b,
        });
    }
    let (db, d2b) = arclength_derivatives(m, t)?;
    let k_rad = -d2b / b;
    let k_tan = (1.0 - db * db) / (b * b);
    Ok(assemble(t, k_rad, k_tan))
}

fn assemble(t: f64, k_rad: f64, k_tan: f64) -> CurvaturePoint {
    CurvaturePoint {
        t,
        k_rad,
        k_tan,
        ric_11: 2.0 * k_rad,
        ric_aa: k_rad + k_tan,
        sc: 4.0 * k_rad + 2.0 * k_tan,
    }
}

/// Default oracle finite-difference step at `t`.
pub fn oracle_step(t: f64) -> f64 {
    1e-4 * t.abs().max(1.0)
}

/// Magnitude of the scalar-curvature terms before cancellation:
/// 4 (|B''|/(A^2 B) + |B' A'|/(A^3 B)) + 2 (1 + (B'/A)^2)/B^2, floored at 1.
/// Scalar flatness is a cancellation between these terms, so a residual is
/// only meaningful relative to their size.
pub fn scalar_curvature_scale(m: &MetricProfile, t: f64) -> f64 {
    let (a, b) = (m.a(t), m.b(t));
    let db = m.db(t) / a;
    let krad_mag = m.d2b(t).abs() / (a * a * b) + (m.db(t) * m.da(t)).abs() / (a * a * a * b);
    let ktan_mag = (1.0 + db * db) / (b * b);
    1.0_f64.max(4.0 * krad_mag + 2.0 * ktan_mag)
}

/// Brute-force curvature oracle.
///
/// Builds the diagonal coordinate metric (A^2, B^2, B^2 sin^2 theta) in
/// (t, theta, phi), computes Christoffel symbols by central finite
/// differences of the metric components, differentiates those again for the
/// Riemann tensor, and contracts. Evaluated at the equator theta = pi/2.
pub fn curvature_oracle(
    m: &MetricProfile,
    t: f64,
    step: f64,
) -> Result<CurvaturePoint, CurvatureError> {
    let theta0 = std::f64::consts::FRAC_PI_2;
    if t - 4.0 * step <= m.domain.lo || t + 4.0 * step >= m.domain.hi {
        return Err(CurvatureError::StepTooLarge { t, step });
    }

    // Coordinate indices: 0 = t, 1 = theta, 2 = phi.
    let metric = |x: [f64; 2]| -> [f64; 3] {
        let a = m.a(x[0]);
        let b = m.b(x[0]);
        let s = x[1].sin();
        [a * a, b * b, b * b * s * s]
    };

    // 5-point central differences in t and theta.
    let d_metric = |x: [f64; 2], dir: usize, h: f64| -> [f64; 3] {
        let shift = |k: f64| {
            let mut y = x;
            y[dir] += k * h;
            metric(y)
        };
        let (p2, p1, m1, m2) = (shift(2.0), shift(1.0), shift(-1.0), shift(-2.0));
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h);
        }
        out
    };

    let christoffel = |x: [f64; 2]| -> [[[f64; 3]; 3]; 3] {
        let g = metric(x);
        let dg_t = d_metric(x, 0, step);
        let dg_th = d_metric(x, 1, step);
        // dg[l][i] = partial_l g_ii; phi-derivatives vanish by symmetry.
        let dg = [dg_t, dg_th, [0.0; 3]];
        let mut gamma = [[[0.0_f64; 3]; 3]; 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    // Diagonal metric: Gamma^k_ij = (1/(2 g_kk)) *
                    //   (d_i g_jk + d_j g_ik - d_k g_ij)
                    let mut v = 0.0;
                    if j == k {
                        v += dg[i][k];
                    }
                    if i == k {
                        v += dg[j][k];
                    }
                    if i == j {
                        v -= dg[k][i];
                    }
                    gamma[k][i][j] = v / (2.0 * g[k]);
                }
            }
        }
        gamma
    };

    let x0 = [t, theta0];
    let g0 = metric(x0);
    let gam0 = christoffel(x0);

    // dGamma[l][k][i][j] = partial_l Gamma^k_ij by central differences.
    let h2 = step;
    let mut dgam = [[[[0.0_f64; 3]; 3]; 3]; 2];
    for dir in 0..2 {
        let shift = |k: f64| {
            let mut y = x0;
            y[dir] += k * h2;
            christoffel(y)
        };
        let (p2, p1, m1, m2) = (shift(2.0), shift(1.0), shift(-1.0), shift(-2.0));
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    dgam[dir][k][i][j] = (-p2[k][i][j] + 8.0 * p1[k][i][j] - 8.0 * m1[k][i][j]
                        + m2[k][i][j])
                        / (12.0 * h2);
                }
            }
        }
    }
    let dgamma = |l: usize, k: usize, i: usize, j: usize| -> f64 {
        if l < 2 {
            dgam[l][k][i][j]
        } else {
            0.0 // phi-derivatives vanish
        }
    };

    // R^rho_{sigma mu nu} = d_mu Gamma^rho_{nu sigma} - d_nu Gamma^rho_{mu sigma}
    //   + Gamma^rho_{mu lam} Gamma^lam_{nu sigma} - Gamma^rho_{nu lam} Gamma^lam_{mu sigma}
    let riemann = |rho: usize, sigma: usize, mu: usize, nu: usize| -> f64 {
        let mut v = dgamma(mu, rho, nu, sigma) - dgamma(nu, rho, mu, sigma);
        for lam in 0..3 {
            v += gam0[rho][mu][lam] * gam0[lam][nu][sigma];
            v -= gam0[rho][nu][lam] * gam0[lam][mu][sigma];
        }
        v
    };

    // Lowered components for the sectional curvatures.
    let r_lower = |l: usize, s: usize, mu: usize, nu: usize| g0[l] * riemann(l, s, mu, nu);

    let k_rad = r_lower(0, 1, 0, 1) / (g0[0] * g0[1]);
    let k_tan = r_lower(1, 2, 1, 2) / (g0[1] * g0[2]);

    let ricci = |s: usize, n: usize| -> f64 {
        (0..3).map(|mu| riemann(mu, s, mu, n)).sum()
    };
    let ric_11 = ricci(0, 0) / g0[0];
    let ric_aa = ricci(1, 1) / g0[1];
    let sc = ricci(0, 0) / g0[0] + ricci(1, 1) / g0[1] + ricci(2, 2) / g0[2];

    Ok(CurvaturePoint {
        t,
        k_rad,
        k_tan,
        ric_11,
        ric_aa,
        sc,
    })
}
