//! Rebuilding the graphs of `℘` and `ζ` on the fundamental parallelogram
//! from the branches `±z` of the elliptic logarithm on the regions of the
//! slit plane, shifted by lattice vectors.

use super::{route, AbelMap, BettiCoords, Region, Side, SlitPlanePoint, Z_TOL};
use crate::contour::{integrate_sqrt_kernel, ContourPath};
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use serde::Serialize;

/// Largest lattice shift the search accepts.
pub const SHIFT_BOUND: i64 = 42;

const NEWTON_STEPS: usize = 3;

/// `±z(ξ) = z₀ + mω₁ + nω₂` with `ξ − (λ+1)/3 = ℘(z₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GraphPoint {
    pub z: C,
    pub region: Region,
    pub side: Side,
    pub m: i64,
    pub n: i64,
    pub branch: i8,
    pub xi: C,
    /// `ξ − (λ+1)/3`, the reconstructed `℘(z)`.
    pub value: C,
    /// Taken from the explicit half-period list rather than searched.
    pub explicit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaGraphPoint {
    pub graph: GraphPoint,
    pub zeta: C,
}

impl AbelMap {
    fn half_period_index(&self, z: C) -> Option<usize> {
        let (w1, w2) = (self.omega1(), self.omega2());
        let scale = w1.norm().max(w2.norm());
        [0.5 * w1, 0.5 * w2, 0.5 * (w1 + w2)].iter().position(|h| (z - h).norm() <= 1e-12 * scale)
    }

    /// `(s, m, n, residual)` with `s·z_abel − mω₁ − nω₂` closest to `z`.
    fn match_branch(&self, z_abel: C, z: C) -> (i8, i64, i64, C) {
        let (w1, w2) = (self.omega1(), self.omega2());
        let mut best: Option<(f64, i8, i64, i64, C)> = None;
        for s in [1i8, -1] {
            let d = s as f64 * z_abel - z;
            let b = BettiCoords::of(d, w1, w2);
            let (m, n) = (b.b1.round(), b.b2.round());
            let r = d - m * w1 - n * w2;
            if best.map_or(true, |bst| r.norm() < bst.0) {
                best = Some((r.norm(), s, m as i64, n as i64, r));
            }
        }
        let (_, s, m, n, r) = best.unwrap();
        (s, m, n, r)
    }

    /// Find the region, branch and lattice shift through which the inverse
    /// of `℘ + (λ+1)/3` reaches `z`, and return `℘(z)` from it.
    pub fn reconstruct_wp_graph(&self, z: C) -> Result<GraphPoint> {
        let c = self.shift();
        let lam = self.lambda;
        if let Some(k) = self.half_period_index(z) {
            let xi = [C::new(1.0, 0.0), C::default(), lam][k];
            return Ok(GraphPoint {
                z,
                region: route::classify(lam, xi),
                side: Side::North,
                m: 0,
                n: 0,
                branch: 1,
                xi,
                value: xi - c,
                explicit: true,
            });
        }
        let xi0 = self.wp.wp(z)? + c;
        let region = route::classify(lam, xi0);
        let sides: &[Side] = if region.is_boundary() { &[Side::North, Side::South] } else { &[Side::Interior] };
        let scale = self.omega1().norm().max(self.omega2().norm());
        for &side in sides {
            let mut xi = xi0;
            let p = SlitPlanePoint::with_side(lam, xi, side);
            let v = self.z_value(&p, Z_TOL)?;
            let (s, m, n, mut r) = self.match_branch(v.z, z);
            if r.norm() > 1e-6 * scale {
                continue;
            }
            // Newton on ξ for the matched branch: dz/dξ = −1/(2√g).
            let mut root = v.root;
            if !region.is_boundary() {
                for _ in 0..NEWTON_STEPS {
                    let Some(g) = root else { break };
                    if r.norm() <= 1e-15 * scale {
                        break;
                    }
                    let next = xi + r * (2.0 * g) * s as f64;
                    if route::classify(lam, next) != region {
                        break;
                    }
                    let w = self.z_value(&SlitPlanePoint::with_side(lam, next, side), Z_TOL)?;
                    let r_next = s as f64 * w.z - self.omega1() * m as f64 - self.omega2() * n as f64 - z;
                    if r_next.norm() >= r.norm() {
                        break;
                    }
                    xi = next;
                    r = r_next;
                    root = w.root;
                }
            }
            if m.abs() > SHIFT_BOUND || n.abs() > SHIFT_BOUND {
                return Err(Error::SearchFailed {
                    z,
                    reason: format!("shift ({m}, {n}) exceeds {SHIFT_BOUND}"),
                });
            }
            return Ok(GraphPoint {
                z,
                region,
                side,
                m,
                n,
                branch: s,
                xi,
                value: xi - c,
                explicit: false,
            });
        }
        Err(Error::SearchFailed {
            z,
            reason: format!("no branch of the inverse at ξ = {xi0} reaches z"),
        })
    }

    /// `ζ(z) = s·ζ(z_abel(ξ)) − mη₁ − nη₂`, with `ζ(z_abel(ξ)) = −η₁/2 +
    /// ∫₁^ξ (X − (λ+1)/3) dX/(2√g)` along the route from 1.
    pub fn reconstruct_zeta_graph(&self, z: C) -> Result<ZetaGraphPoint> {
        let gp = self.reconstruct_wp_graph(z)?;
        let (e1, e2) = (self.periods.eta1, self.periods.eta2);
        if gp.explicit {
            let k = self.half_period_index(z).unwrap();
            let zeta = [0.5 * e1, 0.5 * e2, 0.5 * (e1 + e2)][k];
            return Ok(ZetaGraphPoint { graph: gp, zeta });
        }
        let c = self.shift();
        let p = SlitPlanePoint::with_side(self.lambda, gp.xi, gp.side);
        let pts = self.route_to(C::new(1.0, 0.0), &p)?;
        let seed = self.root_at(pts[1], Side::Interior)?;
        let path = ContourPath::polyline(&pts, seed);
        let w = integrate_sqrt_kernel(&path, |x| x - c, &self.bp, Z_TOL)?.value;
        let zeta_abel = -0.5 * e1 + w;
        let zeta = gp.branch as f64 * zeta_abel - e1 * gp.m as f64 - e2 * gp.n as f64;
        Ok(ZetaGraphPoint { graph: gp, zeta })
    }
}

pub fn reconstruct_wp_graph(lam: C, z: C) -> Result<GraphPoint> {
    AbelMap::new(lam)?.reconstruct_wp_graph(z)
}

pub fn reconstruct_zeta_graph(lam: C, z: C) -> Result<ZetaGraphPoint> {
    AbelMap::new(lam)?.reconstruct_zeta_graph(z)
}
