//! Shared numerical kernels: adaptive quadrature, finite differences,
//! an embedded Runge-Kutta 4(5) step, and monotone root bracketing.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error("quadrature did not converge on [{lo}, {hi}] (tol {tol})")]
    QuadratureNonConvergent { lo: f64, hi: f64, tol: f64 },
    #[error("ODE solution blew up near r = {at} (|y| > {bound})")]
    BlowUp { at: f64, bound: f64 },
    #[error("ODE step size underflow near r = {at}")]
    StepUnderflow { at: f64 },
    #[error("root not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },
}

/// Adaptive composite Simpson quadrature with absolute tolerance `tol`.
///
/// Bisection depth is capped at `max_depth`; exceeding it reports
/// non-convergence instead of returning a silently inaccurate value.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64, NumericError> {
    if lo == hi {
        return Ok(0.0);
    }
    let (sign, a, b) = if lo < hi { (1.0, lo, hi) } else { (-1.0, hi, lo) };
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let v = simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth)
        .ok_or(NumericError::QuadratureNonConvergent { lo, hi, tol })?;
    Ok(sign * v)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let l = simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Some(l + r)
}

/// 5-point central first difference, O(h^4).
pub fn central_d1<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// 5-point central second difference, O(h^4).
pub fn central_d2<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}

/// Default relative finite-difference step at `t`.
pub fn fd_step(t: f64) -> f64 {
    1e-5 * t.abs().max(1.0)
}

/// Dormand-Prince 5(4) coefficients for a scalar ODE y' = f(r, y).
const DP_C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub blowup_bound: f64,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: f64::INFINITY,
            blowup_bound: 1e8,
        }
    }
}

/// Integrate a scalar ODE y' = f(r, y) from (r0, y0) to r1 with an adaptive
/// embedded Dormand-Prince 4(5) pair. `r1` may be on either side of `r0`.
pub fn integrate_ode<F: Fn(f64, f64) -> f64>(
    f: &F,
    r0: f64,
    y0: f64,
    r1: f64,
    opts: &OdeOptions,
) -> Result<f64, NumericError> {
    if r0 == r1 {
        return Ok(y0);
    }
    let dir = (r1 - r0).signum();
    let span = (r1 - r0).abs();
    let mut r = r0;
    let mut y = y0;
    let mut h = (span / 100.0).min(opts.max_step);
    let h_min = span * 1e-14;
    loop {
        if y.abs() > opts.blowup_bound {
            return Err(NumericError::BlowUp {
                at: r,
                bound: opts.blowup_bound,
            });
        }
        if (r - r1).abs() <= h_min {
            return Ok(y);
        }
        h = h.min((r1 - r).abs()).min(opts.max_step);
        let mut k = [0.0_f64; 7];
        k[0] = f(r, y);
        for i in 0..6 {
            let mut yi = y;
            for (j, kj) in k.iter().enumerate().take(i + 1) {
                yi += dir * h * DP_A[i][j] * kj;
            }
            k[i + 1] = f(r + dir * h * DP_C[i], yi);
        }
        let mut y5 = y;
        let mut y4 = y;
        for i in 0..7 {
            y5 += dir * h * DP_B5[i] * k[i];
            y4 += dir * h * DP_B4[i] * k[i];
        }
        let scale = opts.atol + opts.rtol * y.abs().max(y5.abs());
        let err = ((y5 - y4) / scale).abs();
        if err <= 1.0 || h <= h_min {
            if h <= h_min && err > 1.0 {
                return Err(NumericError::StepUnderflow { at: r });
            }
            r += dir * h;
            y = y5;
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (h * factor).max(h_min);
    }
}

/// Bisection for a strictly monotone function; `f(lo)` and `f(hi)` must
/// bracket `target`.
pub fn invert_monotone<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    target: f64,
) -> Result<f64, NumericError> {
    let flo = f(lo) - target;
    let fhi = f(hi) - target;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(NumericError::NotBracketed { lo, hi });
    }
    let (mut a, mut b) = (lo, hi);
    let mut fa = flo;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m) - target;
        if fm == 0.0 || (b - a).abs() < 1e-15 * (a.abs() + b.abs() + 1.0) {
            return Ok(m);
        }
        if fa.signum() == fm.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Least-squares slope of y against x.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}
