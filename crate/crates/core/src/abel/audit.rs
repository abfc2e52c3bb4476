//! Pointwise audit of the pfaffian chain behind the real and imaginary parts
//! of `z` on a region: finite-difference partials of `(u, v)` against the
//! closed forms, and the algebraic relations tying `f₁ … f₅` to
//! `A + iB = g(ξ)`.
//!
//! With `z′ = −1/(2√g)` the partials carry a factor `−½` relative to the
//! unnormalized forms `Re√g/|g|`, `Im√g/|g|`.

use super::route::{branch_points, point_segment_distance};
use super::sample::{rng, sample_xi};
use super::{AbelMap, Region, Side, SlitPlanePoint, Z_TOL};
use crate::error::Result;
use num_complex::Complex64 as C;
use serde::Serialize;
use std::f64::consts::SQRT_2;

pub const FD_TOL: f64 = 1e-5;
pub const CHAIN_TOL: f64 = 1e-9;

/// `f₁ … f₅` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainValues {
    pub f: [f64; 5],
    /// Signs of `Re√g`, `Im√g` on the sheet of `z`.
    pub signs: [f64; 2],
}

impl ChainValues {
    pub fn at(g: C, root: C) -> Self {
        let (a, b) = (g.re, g.im);
        let m = g.norm();
        // m ± A without cancellation
        let (plus, minus) = if a >= 0.0 { (m + a, b * b / (m + a)) } else { (b * b / (m - a), m - a) };
        let (f4, f5) = (plus.sqrt(), minus.sqrt());
        let sgn = |x: f64| if x < 0.0 { -1.0 } else { 1.0 };
        ChainValues {
            f: [1.0 / m, 1.0 / f4, 1.0 / f5, f4, f5],
            signs: [sgn(root.re), sgn(root.im)],
        }
    }

    /// `(∂u/∂ξ_r, ∂u/∂ξ_i)` from the chain; `∂v/∂ξ_i = ∂u/∂ξ_r` and
    /// `∂v/∂ξ_r = −∂u/∂ξ_i`.
    pub fn u_gradient(&self) -> (f64, f64) {
        let [f1, _, _, f4, f5] = self.f;
        let k = -0.5 * f1 / SQRT_2;
        (k * self.signs[0] * f4, k * self.signs[1] * f5)
    }

    /// Relative residuals of the defining relations, and of the sheet root
    /// rebuilt from `f₄`, `f₅`.
    pub fn residuals(&self, g: C, root: C) -> [f64; 6] {
        let [f1, f2, f3, f4, f5] = self.f;
        let m = g.norm();
        let rebuilt = C::new(self.signs[0] * f4, self.signs[1] * f5) / SQRT_2;
        [
            (f1 * m - 1.0).abs(),
            (f2 * f4 - 1.0).abs(),
            (f3 * f5 - 1.0).abs(),
            (f4 * f4 - (m + g.re)).abs() / m,
            (f5 * f5 - (m - g.re)).abs() / m,
            (rebuilt - root).norm() / root.norm(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainAuditSample {
    pub xi: C,
    pub chain: ChainValues,
    /// Largest relative mismatch between the finite-difference and closed
    /// partials; `None` on a slit, where the stencil would cross it.
    pub fd_residual: Option<f64>,
    pub step: f64,
    pub chain_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainAuditReport {
    pub lambda: C,
    pub region: Region,
    pub samples: Vec<ChainAuditSample>,
    pub max_fd_residual: f64,
    pub max_chain_residual: f64,
    pub passed: bool,
}

fn slit_distance(lam: C, xi: C) -> f64 {
    // the two rays in closed form: a long finite segment loses the
    // distance to cancellation
    let neg = if xi.re <= 0.0 { xi.im.abs() } else { xi.norm() };
    let pos = if xi.re >= 1.0 { xi.im.abs() } else { (xi - 1.0).norm() };
    neg.min(pos).min(point_segment_distance(xi, C::default(), lam))
}

impl AbelMap {
    pub fn chain_audit_point(&self, xi: C) -> Result<ChainAuditSample> {
        let lam = self.lambda;
        let p = SlitPlanePoint::new(lam, xi);
        let v = self.z_value(&p, Z_TOL)?;
        let g = xi * (xi - 1.0) * (xi - lam);
        let root = v.root.unwrap_or_else(|| g.sqrt());
        let chain = ChainValues::at(g, root);
        let chain_residual = chain.residuals(g, root).into_iter().fold(0.0, f64::max);
        let d = branch_points(lam).iter().map(|e| (xi - e).norm()).fold(f64::INFINITY, f64::min);
        let step = (1e-3 * d).min(0.25 * slit_distance(lam, xi));
        let fd_residual = if p.region.is_boundary() {
            None
        } else {
            let z = |x: C| -> Result<C> { self.z(&SlitPlanePoint::with_side(lam, x, Side::Interior)) };
            let dr = (z(xi + step)? - z(xi - step)?) / (2.0 * step);
            let di = (z(xi + C::new(0.0, step))? - z(xi - C::new(0.0, step))?) / (2.0 * step);
            let (ur, ui) = chain.u_gradient();
            let scale = ur.hypot(ui);
            let errs = [dr.re - ur, di.re - ui, di.im - ur, dr.im + ui];
            Some(errs.iter().map(|e| e.abs()).fold(0.0, f64::max) / scale)
        };
        Ok(ChainAuditSample { xi, chain, fd_residual, step, chain_residual })
    }

    /// Audit `samples` pseudo-random points of `region`.
    pub fn chain_derivative_audit(&self, region: Region, samples: usize, seed: u64) -> Result<ChainAuditReport> {
        let mut r = rng(seed);
        let mut out = Vec::with_capacity(samples);
        let mut tries = 0;
        while out.len() < samples && tries < 100 * samples.max(1) {
            tries += 1;
            let Some(xi) = sample_xi(&mut r, self.lambda, region) else { break };
            // keep the stencil resolvable in double precision
            if branch_points(self.lambda).iter().any(|e| (xi - e).norm() < 1e-4) {
                continue;
            }
            if !region.is_boundary() && slit_distance(self.lambda, xi) < 1e-4 {
                continue;
            }
            out.push(self.chain_audit_point(xi)?);
        }
        let max_fd_residual = out.iter().filter_map(|s| s.fd_residual).fold(0.0, f64::max);
        let max_chain_residual = out.iter().map(|s| s.chain_residual).fold(0.0, f64::max);
        Ok(ChainAuditReport {
            lambda: self.lambda,
            region,
            passed: !out.is_empty() && max_fd_residual <= FD_TOL && max_chain_residual <= CHAIN_TOL,
            samples: out,
            max_fd_residual,
            max_chain_residual,
        })
    }
}

pub fn chain_derivative_audit(lam: C, region: Region, samples: usize, seed: u64) -> Result<ChainAuditReport> {
    AbelMap::new(lam)?.chain_derivative_audit(region, samples, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v1_audit_passes() {
        let rep = chain_derivative_audit(C::new(0.3, 0.4), Region::V1, 20, 5).unwrap();
        assert_eq!(rep.samples.len(), 20);
        assert!(rep.passed, "{} {}", rep.max_fd_residual, rep.max_chain_residual);
    }

    #[test]
    fn every_region() {
        let m = AbelMap::new(C::new(0.2, -0.3)).unwrap();
        for region in Region::ALL {
            let rep = m.chain_derivative_audit(region, 6, 11).unwrap();
            assert!(rep.passed, "{region:?} {} {}", rep.max_fd_residual, rep.max_chain_residual);
        }
    }

    #[test]
    fn reciprocal_pair() {
        let g = C::new(-3.0, 1e-9);
        let ch = ChainValues::at(g, g.sqrt());
        assert!((ch.f[3] * ch.f[1] - 1.0).abs() < 1e-15);
        assert!(ch.residuals(g, g.sqrt()).iter().all(|&r| r < 1e-12));
    }
}
