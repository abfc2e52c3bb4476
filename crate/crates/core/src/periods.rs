//! Periods, their λ-derivatives, quasi-periods and the analytic part of the
//! logarithmic expansion of ω₂ near λ = 0.

use crate::contour::{integrate_sqrt_kernel, sum_power_series, BranchPoints, ContourPath};
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

/// Internal absolute tolerance for period integrals.
pub const PERIOD_TOL: f64 = 1e-13;

/// Largest `max(|λ|, |1 − λ|)` accepted by the series route.
pub const SERIES_RADIUS: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodData {
    pub lambda: C,
    pub omega1: C,
    pub omega2: C,
    pub omega1_prime: C,
    pub omega2_prime: C,
    pub eta1: C,
    pub eta2: C,
    pub tau: C,
    /// `|ω₁ω̄₂ − ω₂ω̄₁|`.
    pub area: f64,
    /// Analytic part `u(λ)` of `ω₂ = i(ω₁/π) log λ + u(λ)`, when `|λ| ≤ ½`.
    pub u_value: Option<C>,
}

/// Branch of `√(X(X−1)(X−λ))` on the negative real axis with positive
/// imaginary part.
pub fn negative_axis_root(lam: C, x: f64) -> C {
    C::new(0.0, (x * (x - 1.0)).sqrt()) * (lam - x).sqrt()
}

/// Branch of `√(X(X−1)(X−λ))` on `(1, ∞)` asymptotic to `X^{3/2}`.
pub fn positive_axis_root(lam: C, x: f64) -> C {
    let x = C::new(x, 0.0);
    x.powf(1.5) * (1.0 - 1.0 / x).sqrt() * (1.0 - lam / x).sqrt()
}

fn ray_one(lam: C) -> ContourPath {
    ContourPath::ray(C::new(1.0, 0.0), C::new(1.0, 0.0), positive_axis_root(lam, 4.0 * lam.norm().max(1.0)))
}

fn ray_zero(lam: C) -> ContourPath {
    ContourPath::ray(C::new(0.0, 0.0), C::new(-1.0, 0.0), negative_axis_root(lam, -3.0 * lam.norm().max(1.0)))
}

/// `F(x) = Σ ((½)ₙ/n!)² xⁿ`.
pub fn hypergeometric_f(x: C, tol: f64) -> Result<C> {
    if x.norm() > SERIES_RADIUS {
        return Err(Error::SeriesOutOfRange(x));
    }
    let coeffs = f_coefficients_upto(x.norm(), tol);
    sum_power_series(|n| C::new(*coeffs.get(n).unwrap_or(&0.0), 0.0), x, tol, x.norm())
}

/// `((½)ₙ/n!)²` for as many n as the tail bound at radius r can need.
fn f_coefficients_upto(r: f64, tol: f64) -> Vec<f64> {
    let mut v = vec![1.0];
    let mut c = 1.0f64;
    let mut p = 1.0f64;
    let cap = 200_000;
    while v.len() < cap {
        let n = (v.len() - 1) as f64;
        let ratio = (n + 0.5) / (n + 1.0);
        c *= ratio * ratio;
        p *= r;
        v.push(c);
        if c * p < tol * 1e-3 * (1.0 - r).max(1e-12) {
            break;
        }
    }
    v
}

/// `ω₁ = πF(λ)`, `ω₂ = iπF(1−λ)`.
pub fn periods_series(lam: C) -> Result<(C, C)> {
    let m = lam.norm().max((1.0 - lam).norm());
    if m > SERIES_RADIUS {
        return Err(Error::SeriesOutOfRange(lam));
    }
    let w1 = PI * hypergeometric_f(lam, 1e-15)?;
    let w2 = C::new(0.0, PI) * hypergeometric_f(1.0 - lam, 1e-15)?;
    Ok((w1, w2))
}

fn check_lambda(lam: C) -> Result<()> {
    if lam.norm() < 1e-300 || (lam - 1.0).norm() < 1e-300 || !lam.re.is_finite() || !lam.im.is_finite() {
        return Err(Error::InvalidLambda(lam));
    }
    if lam.im == 0.0 && (lam.re < 0.0 || lam.re > 1.0) {
        return Err(Error::OutOfDomain(lam, "λ on the integration rays".into()));
    }
    Ok(())
}

/// `ω₁ = ∫₁^∞ dX/√g`, `ω₂ = ∫₀^{−∞} dX/√g` along the real axis.
pub fn periods_integral(lam: C) -> Result<(C, C)> {
    check_lambda(lam)?;
    let bp = BranchPoints::legendre(lam);
    let two = |_: C| C::new(2.0, 0.0);
    let w1 = integrate_sqrt_kernel(&ray_one(lam), two, &bp, PERIOD_TOL)?.value;
    let w2 = integrate_sqrt_kernel(&ray_zero(lam), two, &bp, PERIOD_TOL)?.value;
    Ok((w1, w2))
}

/// `ωᵢ′ = ∫ dX / (2(X−λ)√g)` on the same rays.
pub fn period_derivatives(lam: C) -> Result<(C, C)> {
    check_lambda(lam)?;
    let bp = BranchPoints::legendre(lam);
    let num = |x: C| 1.0 / (x - lam);
    let d1 = integrate_sqrt_kernel(&ray_one(lam), num, &bp, PERIOD_TOL)?.value;
    let d2 = integrate_sqrt_kernel(&ray_zero(lam), num, &bp, PERIOD_TOL)?.value;
    Ok((d1, d2))
}

/// `ηᵢ = (1−2λ)ωᵢ/3 + 2λ(1−λ)ωᵢ′`.
pub fn quasi_periods(lam: C, omega: (C, C), omega_prime: (C, C)) -> (C, C) {
    let a = (1.0 - 2.0 * lam) / 3.0;
    let b = 2.0 * lam * (1.0 - lam);
    (a * omega.0 + b * omega_prime.0, a * omega.1 + b * omega_prime.1)
}

/// `u(λ) = i Σ ((½)ₙ/n!)² (4 log 2 − 4γₙ) λⁿ`, `γₙ = Σ_{k=1}^{2n} (−1)^{k+1}/k`.
pub fn u_series(lam: C, tol: f64) -> Result<C> {
    if lam.norm() > 0.5 + 1e-12 {
        return Err(Error::SeriesOutOfRange(lam));
    }
    let r = lam.norm();
    let fc = f_coefficients_upto(r, tol);
    let mut coeffs = Vec::with_capacity(fc.len());
    let mut gamma = 0.0f64;
    for (n, c) in fc.iter().enumerate() {
        if n > 0 {
            let k = 2 * n;
            gamma += 1.0 / (k - 1) as f64 - 1.0 / k as f64;
        }
        coeffs.push(c * (4.0 * LN_2 - 4.0 * gamma));
    }
    let s = sum_power_series(|n| C::new(*coeffs.get(n).unwrap_or(&0.0), 0.0), lam, tol, r)?;
    Ok(C::new(0.0, 1.0) * s)
}

pub fn area(w1: C, w2: C) -> f64 {
    (w1 * w2.conj() - w2 * w1.conj()).norm()
}

impl PeriodData {
    /// Periods by the integral route, derivatives, quasi-periods and, near
    /// λ = 0, the analytic part u.
    pub fn new(lam: C) -> Result<Self> {
        let (w1, w2) = periods_integral(lam)?;
        let (d1, d2) = period_derivatives(lam)?;
        let (e1, e2) = quasi_periods(lam, (w1, w2), (d1, d2));
        let u_value = if lam.norm() <= 0.5 { Some(u_series(lam, 1e-15)?) } else { None };
        Ok(PeriodData {
            lambda: lam,
            omega1: w1,
            omega2: w2,
            omega1_prime: d1,
            omega2_prime: d2,
            eta1: e1,
            eta2: e2,
            tau: w2 / w1,
            area: area(w1, w2),
            u_value,
        })
    }

    /// `ω₂η₁ − ω₁η₂ − 2πi`.
    pub fn legendre_residual(&self) -> C {
        self.omega2 * self.eta1 - self.omega1 * self.eta2 - C::new(0.0, 2.0 * PI)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn agm(mut a: f64, mut b: f64) -> f64 {
        for _ in 0..40 {
            let t = 0.5 * (a + b);
            b = (a * b).sqrt();
            a = t;
        }
        a
    }

    #[test]
    fn f_at_zero_is_one() {
        assert_eq!(hypergeometric_f(C::new(0.0, 0.0), 1e-15).unwrap(), C::new(1.0, 0.0));
    }

    #[test]
    fn u_at_zero() {
        let u = u_series(C::new(0.0, 0.0), 1e-15).unwrap();
        assert!((u - C::new(0.0, 4.0 * LN_2)).norm() < 1e-15);
    }

    #[test]
    fn half_matches_agm() {
        let (w1, w2) = periods_integral(C::new(0.5, 0.0)).unwrap();
        let k = PI / agm(1.0, 0.5f64.sqrt());
        assert!((w1 - k).norm() < 1e-12);
        assert!((w2 / w1 - C::new(0.0, 1.0)).norm() < 1e-12);
        let (s1, _) = periods_series(C::new(0.5, 0.0)).unwrap();
        assert!((s1 - k).norm() < 1e-12);
    }

    #[test]
    fn legendre_relation_sample() {
        for lam in [C::new(0.3, 0.0), C::new(0.3, 0.2), C::new(0.1, -0.3), C::new(0.5, 0.8)] {
            let p = PeriodData::new(lam).unwrap();
            assert!(p.legendre_residual().norm() < 1e-10, "{lam}: {}", p.legendre_residual());
        }
    }
}
