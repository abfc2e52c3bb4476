//! The φ-logarithm `𝓛(ξ) = log φ(z(ξ)) − log φ(ω₁/2)` as an iterated integral
//! from 1, its small-ξ counterpart `𝓛̃` from 0, and the split of `𝓛` into a
//! leading logarithm and two remainders.

use super::route::{self, admissible};
use super::{AbelMap, Side, SlitPlanePoint};
use crate::contour::{integrate_abs_kernel, iterated_integral, ContourPath, Sheet};
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use serde::Serialize;
use std::f64::consts::PI;

/// Absolute tolerance for the iterated integrals behind `𝓛` and `𝓛̃`.
pub const LOG_PHI_TOL: f64 = 1e-11;

const I: C = C { re: 0.0, im: 1.0 };

pub const R_BOUND_FAR: f64 = 132.0;
pub const R_BOUND_NEAR: f64 = 1100.0;
pub const LEAD_IM_BOUND: f64 = 7.0;
pub const HAT_X_BOUND: f64 = 12.0;
pub const L_TILDE_BOUND: f64 = 2016.0;
pub const IM_L_BOUND: f64 = 2409.0;

fn kernel(sh: &Sheet) -> C {
    0.5 / sh.root()
}

/// Quantities behind the decomposition
/// `𝓛 = −lead − 𝓡 − 𝓡_φ + πiz/ω₁ + πi/2` and the bounds on its pieces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RTermsReport {
    pub lambda: C,
    pub xi: C,
    pub log_phi: C,
    /// `∫₁^ξ dX/(2√(X(X−λ)))` on the sheet of `z`.
    pub lead: C,
    pub r: C,
    pub r_phi: C,
    /// `|𝓛 − (−lead − 𝓡 − 𝓡_φ + πiz/ω₁ + πi/2)|`.
    pub identity_residual: f64,
    /// Bound applying to `|𝓡|, |𝓡_φ|` (132 or 1100) when `|λ/ξ| ≤ ½`.
    pub r_bound: Option<f64>,
    pub lead_im_ok: Option<bool>,
    /// `∫₀^ξ |dX/(2√g)|` along the segment, when `|ξ| ≤ 2|λ|`.
    pub hat_x_integral: Option<f64>,
    pub l_tilde: Option<C>,
    pub ok: bool,
}

impl AbelMap {
    fn iterated_from(&self, pts: &[C], n_inner: usize, inner: impl Fn(C, &Sheet, &mut [C]), outer: impl Fn(C, &Sheet, &[C]) -> C, tol: f64) -> Result<(C, Vec<C>)> {
        if pts.len() < 2 {
            return Ok((C::default(), vec![C::default(); n_inner]));
        }
        let seed = self.root_at(pts[1], Side::Interior)?;
        let path = ContourPath::polyline(pts, seed);
        let r = iterated_integral(&path, &self.bp, n_inner, inner, outer, tol)?;
        Ok((r.outer, r.inner))
    }

    fn log_phi_on(&self, pts: &[C], tol: f64) -> Result<C> {
        let c = self.shift();
        let a = self.periods.eta1 / self.omega1();
        let b = I * PI / self.omega1();
        let (v, _) = self.iterated_from(
            pts,
            2,
            |x, sh, f| {
                let k = kernel(sh);
                f[0] = k;
                f[1] = (x - c) * k;
            },
            |_, sh, s| -(a * s[0] + s[1] + b) * kernel(sh),
            tol,
        )?;
        Ok(v)
    }

    /// `𝓛(ξ)` along the standard route from 1.
    pub fn log_phi_l(&self, p: &SlitPlanePoint, tol: f64) -> Result<C> {
        let pts = self.route_to(C::new(1.0, 0.0), p)?;
        self.log_phi_on(&pts, tol)
    }

    /// `𝓛(ξ)` along `1 → waypoints… → ξ`; the polyline must stay in `X_λ`
    /// and its second vertex must be an interior point.
    pub fn log_phi_along(&self, p: &SlitPlanePoint, waypoints: &[C], tol: f64) -> Result<C> {
        let mut pts = vec![C::new(1.0, 0.0)];
        pts.extend_from_slice(waypoints);
        pts.push(p.xi);
        pts.dedup();
        if !admissible(self.lambda, &pts) {
            return Err(Error::OutOfDomain(p.xi, "waypoints leave the slit plane".into()));
        }
        self.log_phi_on(&pts, tol)
    }

    /// Path for `𝓛̃`: the segment from 0, through the approach point for a
    /// slit point.
    fn tilde_path(&self, p: &SlitPlanePoint) -> Result<Vec<C>> {
        if p.xi.norm() > 2.0 * self.lambda.norm() * (1.0 + 1e-12) {
            return Err(Error::OutOfDomain(p.xi, "𝓛̃ needs |ξ| ≤ 2|λ|".into()));
        }
        if p.region.is_boundary() && p.approach_side == Side::Interior && route::branch_point_at(self.lambda, p.xi).is_none() {
            return Err(Error::OnSlitWithoutSide(p.xi));
        }
        let a = route::approach_point(self.lambda, p.xi, p.region, p.approach_side)?;
        let mut pts = vec![C::default(), a, p.xi];
        pts.dedup();
        if admissible(self.lambda, &pts) {
            return Ok(pts);
        }
        let h = 0.5 * a.norm().max(1e-3);
        let mut alt = vec![C::default(), a + I * h, a, p.xi];
        alt.dedup();
        if admissible(self.lambda, &alt) {
            return Ok(alt);
        }
        Err(Error::OutOfDomain(p.xi, "no admissible path from 0".into()))
    }

    /// `𝓛̃(ξ) = log φ(z(ξ)) − log φ(ω₂/2)` for `|ξ| ≤ 2|λ|`, by integrating
    /// from 0 where `z = ω₂/2`.
    pub fn log_phi_l_tilde(&self, p: &SlitPlanePoint, tol: f64) -> Result<C> {
        let pts = self.tilde_path(p)?;
        let c = self.shift();
        let a = self.periods.eta1 / self.omega1();
        let (v, _) = self.iterated_from(
            &pts,
            2,
            |x, sh, f| {
                let k = kernel(sh);
                f[0] = k;
                f[1] = (x - c) * k;
            },
            |_, sh, s| -(a * s[0] + s[1]) * kernel(sh),
            tol,
        )?;
        Ok(v)
    }

    /// Relative mismatch `|e^𝓛 φ(ω₁/2) − φ(z)| / |φ(z)|`.
    pub fn log_phi_residual(&self, p: &SlitPlanePoint, l: C) -> Result<f64> {
        let z = self.z(p)?;
        let lhs = l.exp() * self.wp.phi(0.5 * self.omega1());
        let rhs = self.wp.phi(z);
        Ok((lhs - rhs).norm() / rhs.norm())
    }

    /// Relative mismatch `|e^𝓛̃ φ(ω₂/2) − φ(z)| / |φ(z)|`.
    pub fn log_phi_tilde_residual(&self, p: &SlitPlanePoint, lt: C) -> Result<f64> {
        let z = self.z(p)?;
        let lhs = lt.exp() * self.wp.phi(0.5 * self.omega2());
        let rhs = self.wp.phi(z);
        Ok((lhs - rhs).norm() / rhs.norm())
    }

    /// `κ = −2/3 + 2(1−λ)ω₁′/ω₁`, so that `η₁/ω₁ − 1/3 = λκ`.
    fn kappa(&self) -> C {
        -2.0 / 3.0 + 2.0 * (1.0 - self.lambda) * self.periods.omega1_prime / self.omega1()
    }

    pub fn r_terms(&self, p: &SlitPlanePoint, tol: f64) -> Result<RTermsReport> {
        let lam = self.lambda;
        let pts = self.route_to(C::new(1.0, 0.0), p)?;
        let log_phi = self.log_phi_on(&pts, tol)?;
        let (r, s) = self.iterated_from(
            &pts,
            3,
            |x, sh, f| {
                let k = kernel(sh);
                let s02 = sh.0[0] * sh.0[2];
                f[0] = k;
                f[1] = (x - lam / 3.0 - s02) * k;
                f[2] = 0.5 / s02;
            },
            |_, sh, s| s[1] * kernel(sh),
            tol,
        )?;
        let big_k = s[0];
        let lead = s[2];
        let r_phi = lam * self.kappa() * big_k * big_k * 0.5;
        let z = self.z(p)?;
        let rebuilt = -lead - r - r_phi + I * PI * z / self.omega1() + I * PI * 0.5;
        let identity_residual = (log_phi - rebuilt).norm();

        let ratio = lam.norm() / p.xi.norm();
        let far = ratio <= 0.5;
        let r_bound = far.then(|| if p.xi.norm() >= 1.0 { R_BOUND_FAR } else { R_BOUND_NEAR });
        let lead_im_ok = far.then(|| lead.im.abs() <= LEAD_IM_BOUND + 1e-6);
        let near = p.xi.norm() <= 2.0 * lam.norm();
        let (hat_x_integral, l_tilde) = if near {
            let seg = self.tilde_path(p)?;
            let seed = self.root_at(seg[1], Side::Interior)?;
            let path = ContourPath::polyline(&seg, seed);
            let h = integrate_abs_kernel(&path, |_| C::new(1.0, 0.0), &self.bp, 1e-9)?.value.re;
            (Some(h), Some(self.log_phi_l_tilde(p, tol)?))
        } else {
            (None, None)
        };
        let mut ok = identity_residual <= 1e-7;
        if let Some(b) = r_bound {
            ok &= r.norm() <= b + 1e-6 && r_phi.norm() <= b + 1e-6;
        }
        ok &= lead_im_ok.unwrap_or(true);
        ok &= hat_x_integral.map_or(true, |h| h <= HAT_X_BOUND + 1e-6);
        ok &= l_tilde.map_or(true, |t| t.norm() <= L_TILDE_BOUND + 1e-6);
        Ok(RTermsReport {
            lambda: lam,
            xi: p.xi,
            log_phi,
            lead,
            r,
            r_phi,
            identity_residual,
            r_bound,
            lead_im_ok,
            hat_x_integral,
            l_tilde,
            ok,
        })
    }
}

/// `𝓛(λ, ξ)` for a single evaluation.
pub fn log_phi_l(lam: C, xi: &SlitPlanePoint, tol: f64) -> Result<C> {
    AbelMap::new(lam)?.log_phi_l(xi, tol)
}

pub fn log_phi_l_tilde(lam: C, xi: &SlitPlanePoint, tol: f64) -> Result<C> {
    AbelMap::new(lam)?.log_phi_l_tilde(xi, tol)
}

pub fn r_terms_bound_check(lam: C, xi: C) -> Result<RTermsReport> {
    let m = AbelMap::new(lam)?;
    m.r_terms(&SlitPlanePoint::new(lam, xi), LOG_PHI_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn exp_matches_phi_ratio() {
        for lam in [c(0.3, 0.0), c(0.3, 0.4), c(0.2, -0.3)] {
            let m = AbelMap::new(lam).unwrap();
            for xi in [c(0.5, 2.0), c(-0.3, 0.2), c(0.6, 0.1), c(0.2, -0.7), c(3.0, -1.0)] {
                let p = SlitPlanePoint::new(lam, xi);
                let l = m.log_phi_l(&p, LOG_PHI_TOL).unwrap();
                let r = m.log_phi_residual(&p, l).unwrap();
                assert!(r < 1e-7, "{lam} {xi}: {r}");
            }
        }
    }

    #[test]
    fn vanishes_at_one() {
        let m = AbelMap::new(c(0.3, 0.2)).unwrap();
        let l = m.log_phi_l(&SlitPlanePoint::new(m.lambda, c(1.0, 0.0)), LOG_PHI_TOL).unwrap();
        assert!(l.norm() < 1e-14);
    }

    #[test]
    fn tilde_matches_phi_ratio() {
        let lam = c(0.05, 0.02);
        let m = AbelMap::new(lam).unwrap();
        for xi in [c(0.02, 0.06), c(-0.05, 0.01), c(0.04, -0.05), c(0.08, 0.01)] {
            let p = SlitPlanePoint::new(lam, xi);
            let lt = m.log_phi_l_tilde(&p, LOG_PHI_TOL).unwrap();
            let r = m.log_phi_tilde_residual(&p, lt).unwrap();
            assert!(r < 1e-7, "{xi}: {r}");
        }
    }

    #[test]
    fn decomposition_identity() {
        for (lam, xi) in [(c(0.1, 0.0), c(5.0, 0.5)), (c(0.1, 0.0), c(0.3, 0.4)), (c(0.2, 0.1), c(-3.0, 0.2))] {
            let rep = r_terms_bound_check(lam, xi).unwrap();
            assert!(rep.identity_residual < 1e-8, "{xi}: {}", rep.identity_residual);
            assert!(rep.ok);
        }
    }

    #[test]
    fn two_routes_agree() {
        let lam = c(0.3, 0.4);
        let m = AbelMap::new(lam).unwrap();
        let p = SlitPlanePoint::new(lam, c(-0.4, 0.3));
        let a = m.log_phi_l(&p, LOG_PHI_TOL).unwrap();
        let b = m.log_phi_along(&p, &[c(1.0, 0.2), c(0.8, 1.5), c(-1.0, 1.5), c(-1.0, 0.3)], LOG_PHI_TOL).unwrap();
        assert!((a - b).norm() < 1e-8, "{a} {b}");
    }

    #[test]
    fn difference_constant_on_circle() {
        let lam = c(0.01, 0.0);
        let m = AbelMap::new(lam).unwrap();
        let w = m.wp.phi(0.5 * m.omega2()) / m.wp.phi(0.5 * m.omega1());
        let mut first = None;
        for t in [0.3, 1.1, 2.0, -0.8, -2.5] {
            let xi = C::from_polar(2.0 * lam.norm(), t);
            let p = SlitPlanePoint::new(lam, xi);
            let d = m.log_phi_l(&p, LOG_PHI_TOL).unwrap() - m.log_phi_l_tilde(&p, LOG_PHI_TOL).unwrap();
            assert!((d.exp() - w).norm() < 1e-7 * w.norm());
            assert!(d.im.abs() <= 2.0 * PI);
            let f = *first.get_or_insert(d);
            assert!((d - f).norm() < 1e-7, "{t}: {d} {f}");
        }
    }
}
