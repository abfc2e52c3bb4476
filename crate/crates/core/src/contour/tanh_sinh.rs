//! Double-exponential (tanh-sinh) quadrature on the unit interval.
//!
//! The integrand receives both the abscissa `t` and its complement `1 - t`,
//! each computed without cancellation, so inverse-square-root singularities
//! at either endpoint can be evaluated right up to the double-precision floor.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Half-width of the truncated `t` range; nodes beyond it sit closer than
/// ~1e-270 to an endpoint.
const T_MAX: f64 = 6.0;
const MIN_LEVEL: u32 = 3;
const MAX_LEVEL: u32 = 7;
const MAX_DEPTH: u32 = 50;
/// Total integrand evaluations allowed in one adaptive integration.
const BUDGET: usize = 4_000_000;
/// Subinterval tolerances stop halving at this fraction of the requested
/// one; only the few leaves next to a near-singularity get that deep.
const LEAF_FLOOR: f64 = 1.0 / 4096.0;
/// Differences below this multiple of `ε·∫|f|` are roundoff.
const ROUNDOFF: f64 = 200.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuadrature {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[inline]
fn node(t: f64) -> (f64, f64, f64) {
    let u = FRAC_PI_2 * t.sinh();
    let q = (-2.0 * u.abs()).exp();
    let small = q / (1.0 + q);
    let big = 1.0 / (1.0 + q);
    let w = std::f64::consts::PI * q * t.cosh() / ((1.0 + q) * (1.0 + q));
    if t >= 0.0 {
        (big, small, w)
    } else {
        (small, big, w)
    }
}

/// Integrate `f(t, 1 - t)` over `[0, 1]` with level doubling.
pub fn integrate_unit<F>(f: &mut F, tol: f64) -> UnitQuadrature
where
    F: FnMut(f64, f64) -> Complex64,
{
    let mut evaluations = 0usize;
    let l1 = std::cell::Cell::new(0.0f64);
    let mut eval = |t: f64, f: &mut F| -> Complex64 {
        let (x, xc, w) = node(t);
        if x <= 0.0 || xc <= 0.0 || w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        evaluations += 1;
        let v = f(x, xc) * w;
        if v.re.is_finite() && v.im.is_finite() {
            l1.set(l1.get() + v.norm());
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };

    // Level 0: unit spacing.
    let mut h = 1.0;
    let mut sum = eval(0.0, f);
    let kmax = T_MAX as i64;
    for k in 1..=kmax {
        let t = k as f64;
        sum += eval(t, f) + eval(-t, f);
    }
    let mut estimate = sum * h;
    let mut error = f64::INFINITY;
    let mut converged = false;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let n = (T_MAX / h) as i64;
        let mut k = 1;
        while k <= n {
            let t = k as f64 * h;
            sum += eval(t, f) + eval(-t, f);
            k += 2;
        }
        let next = sum * h;
        error = (next - estimate).norm();
        estimate = next;
        if level >= MIN_LEVEL && error <= tol.max(ROUNDOFF * l1.get() * h) {
            converged = true;
            break;
        }
    }
    UnitQuadrature {
        value: estimate,
        error,
        evaluations,
        converged,
    }
}

/// Integrate `f(t, 1 - t)` over `[0, 1]`, bisecting where the level doubling
/// stalls.
pub fn integrate_adaptive<F>(f: &mut F, tol: f64) -> UnitQuadrature
where
    F: FnMut(f64, f64) -> Complex64,
{
    let mut total = UnitQuadrature {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        evaluations: 0,
        converged: true,
    };
    recurse(f, 0.0, 1.0, 1.0, 0.0, tol, tol * LEAF_FLOOR, 0, &mut total);
    total
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &mut F,
    t0: f64,
    c0: f64,
    t1: f64,
    c1: f64,
    tol: f64,
    floor: f64,
    depth: u32,
    acc: &mut UnitQuadrature,
) where
    F: FnMut(f64, f64) -> Complex64,
{
    let width = t1 - t0;
    let mut g = |x: f64, xc: f64| -> Complex64 {
        let (t, tc) = if x <= 0.5 {
            (t0 + width * x, c0 - width * x)
        } else {
            (t1 - width * xc, c1 + width * xc)
        };
        f(t, tc) * width
    };
    let r = integrate_unit(&mut g, tol);
    if r.converged || depth >= MAX_DEPTH || acc.evaluations + r.evaluations > BUDGET {
        acc.value += r.value;
        acc.error += r.error;
        acc.evaluations += r.evaluations;
        acc.converged &= r.converged;
        return;
    }
    acc.evaluations += r.evaluations;
    let tm = t0 + 0.5 * width;
    let cm = c0 - 0.5 * width;
    // Complements travel with the subintervals so they stay exact near 1.
    let child = (0.5 * tol).max(floor);
    recurse(f, t0, c0, tm, cm, child, floor, depth + 1, acc);
    recurse(f, tm, cm, t1, c1, child, floor, depth + 1, acc);
}
