//! The elliptic logarithm `z(λ, ξ)` on the slit plane `X_λ`, its Betti
//! coordinates, the φ-logarithm and the checks built on them.
//!
//! `z` starts as `∫_ξ^{−∞} dX/(2√g)` on the negative axis, with `√g` the
//! root of positive imaginary part there, and is continued north. Every value
//! is computed along an explicit polyline inside `X_λ`, so the branch is fixed
//! by the route and not by any cut of a library square root.

mod audit;
mod bounds;
mod graph;
mod logphi;
mod monodromy;
mod route;
pub mod sample;

pub use logphi::{log_phi_l, log_phi_l_tilde, r_terms_bound_check, RTermsReport, LOG_PHI_TOL};
pub use monodromy::{monodromy_rho, monodromy_table_check, parse_word, standard_loop, Generator, Letter, LoopContinuation, MonodromyElement, MonodromyRecord, Puncture};
pub use bounds::{betti_sweep, boundary_grid, im_log_sweep, north_south_check, numerator_bound, numerator_bound_check, Boundary, NorthSouthRecord, NumeratorReport, NumeratorSample, SweepConfig, SweepRecord, SweepReport};
pub use audit::{chain_derivative_audit, ChainAuditReport, ChainAuditSample, ChainValues, CHAIN_TOL, FD_TOL};
pub use graph::{reconstruct_wp_graph, reconstruct_zeta_graph, GraphPoint, ZetaGraphPoint, SHIFT_BOUND};
pub use route::{classify, winding_number, COLLINEAR_BAND};

use crate::contour::{continue_branch, integrate_sqrt_kernel, BranchPoints, ContourPath};
use crate::error::{Error, Result};
use crate::periods::{negative_axis_root, PeriodData};
use crate::weierstrass::Weierstrass;
use num_complex::Complex64 as C;
use serde::Serialize;

/// Absolute tolerance used for the single integrals behind `z`.
pub const Z_TOL: f64 = 1e-12;

/// The ten pieces of the plane used for the graph constructions, named for
/// `Im λ ≥ 0` and mirrored in the real axis otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Region {
    /// Above the horizontal line through λ.
    V1,
    /// Strip `0 < Im ξ < Im λ`, west of `L_λ`.
    V2,
    /// Same strip, east of `L_λ`.
    V3,
    /// Lower half-plane.
    V4,
    /// Horizontal ray west from λ.
    V5,
    /// Horizontal ray east from λ.
    V6,
    /// The slit `(−∞, 0]`.
    NegAxis,
    /// The slit `L_λ = [0, λ]`.
    LSlit,
    /// The slit `[1, ∞)`.
    OneInfty,
    /// `(0, 1)` minus `L_λ`.
    UnitInterval,
}

impl Region {
    pub const ALL: [Region; 10] = [
        Region::V1,
        Region::V2,
        Region::V3,
        Region::V4,
        Region::V5,
        Region::V6,
        Region::NegAxis,
        Region::LSlit,
        Region::OneInfty,
        Region::UnitInterval,
    ];

    /// 1-based index `j` of `V_j`.
    pub fn index(self) -> usize {
        Region::ALL.iter().position(|&r| r == self).unwrap() + 1
    }

    pub fn from_index(j: usize) -> Option<Region> {
        Region::ALL.get(j.wrapping_sub(1)).copied()
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, Region::NegAxis | Region::LSlit | Region::OneInfty)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    North,
    South,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlitPlanePoint {
    pub xi: C,
    pub region: Region,
    pub approach_side: Side,
}

impl SlitPlanePoint {
    /// Classify `ξ`; points on a slit default to the north side.
    pub fn new(lam: C, xi: C) -> Self {
        let region = classify(lam, xi);
        let approach_side = if region.is_boundary() { Side::North } else { Side::Interior };
        SlitPlanePoint { xi, region, approach_side }
    }

    pub fn with_side(lam: C, xi: C, side: Side) -> Self {
        SlitPlanePoint {
            xi,
            region: classify(lam, xi),
            approach_side: side,
        }
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BettiCoords {
    pub b1: f64,
    pub b2: f64,
    /// `ω̄₂z − ω₂z̄`.
    pub B1: C,
    /// `ω₁z̄ − ω̄₁z`.
    pub B2: C,
    /// `ω₁ω̄₂ − ω₂ω̄₁`.
    pub A: C,
}

impl BettiCoords {
    pub fn of(z: C, w1: C, w2: C) -> Self {
        let a = w1 * w2.conj() - w2 * w1.conj();
        let b1 = w2.conj() * z - w2 * z.conj();
        let b2 = w1 * z.conj() - w1.conj() * z;
        BettiCoords {
            b1: (b1 / a).re,
            b2: (b2 / a).re,
            B1: b1,
            B2: b2,
            A: a,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.b1.abs().max(self.b2.abs())
    }
}

/// Everything that depends on λ only, computed once and shared by all
/// evaluations in `ξ`.
#[derive(Debug, Clone)]
pub struct AbelMap {
    pub lambda: C,
    pub periods: PeriodData,
    pub wp: Weierstrass,
    pub(crate) bp: BranchPoints,
    /// `z(−1) = ∫_{−1}^{−∞} dX/(2√g)`.
    z_minus_one: C,
    seed_minus_one: C,
}

/// A value of `z` with the route that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbelValue {
    pub point: SlitPlanePoint,
    pub z: C,
    /// `√g` at the end of the route on the sheet of `z`; `None` at a branch
    /// point.
    pub root: Option<C>,
    pub route: Vec<C>,
}

impl AbelMap {
    pub fn new(lam: C) -> Result<Self> {
        let periods = PeriodData::new(lam)?;
        let wp = Weierstrass::new(&periods)?;
        let bp = BranchPoints::legendre(lam);
        let seed = negative_axis_root(lam, -1.0);
        let ray = ContourPath::ray(C::new(-1.0, 0.0), C::new(-1.0, 0.0), seed);
        let z_minus_one = integrate_sqrt_kernel(&ray, |_| C::new(1.0, 0.0), &bp, Z_TOL)?.value;
        Ok(AbelMap {
            lambda: lam,
            periods,
            wp,
            bp,
            z_minus_one,
            seed_minus_one: seed,
        })
    }

    pub fn omega1(&self) -> C {
        self.periods.omega1
    }

    pub fn omega2(&self) -> C {
        self.periods.omega2
    }

    /// `(λ + 1)/3`, the shift between `℘` and the Legendre coordinate.
    pub fn shift(&self) -> C {
        (self.lambda + 1.0) / 3.0
    }

    pub fn route_to(&self, start: C, p: &SlitPlanePoint) -> Result<Vec<C>> {
        if p.region.is_boundary() && p.approach_side == Side::Interior && route::branch_point_at(self.lambda, p.xi).is_none() {
            return Err(Error::OnSlitWithoutSide(p.xi));
        }
        let a = route::approach_point(self.lambda, p.xi, p.region, p.approach_side)?;
        route::route(self.lambda, start, a, p.xi)
    }

    /// Value of `√g` at `x` on the sheet of `z`, for `x` inside `X_λ` or
    /// on a slit approached from `side`.
    pub fn root_at(&self, x: C, side: Side) -> Result<C> {
        let p = SlitPlanePoint::with_side(self.lambda, x, side);
        let pts = self.route_to(C::new(-1.0, 0.0), &p)?;
        continue_branch(&ContourPath::polyline(&pts, self.seed_minus_one), &self.bp)
    }

    pub fn z_value(&self, p: &SlitPlanePoint, tol: f64) -> Result<AbelValue> {
        let pts = self.route_to(C::new(-1.0, 0.0), p)?;
        let path = ContourPath::polyline(&pts, self.seed_minus_one);
        let integral = integrate_sqrt_kernel(&path, |_| C::new(1.0, 0.0), &self.bp, tol)?.value;
        let root = if route::branch_point_at(self.lambda, p.xi).is_some() {
            None
        } else {
            Some(continue_branch(&path, &self.bp)?)
        };
        Ok(AbelValue {
            point: *p,
            z: self.z_minus_one - integral,
            root,
            route: pts,
        })
    }

    pub fn z(&self, p: &SlitPlanePoint) -> Result<C> {
        Ok(self.z_value(p, Z_TOL)?.z)
    }

    /// `z` at an interior point or a branch point.
    pub fn z_at(&self, xi: C) -> Result<C> {
        self.z(&SlitPlanePoint::new(self.lambda, xi))
    }

    pub fn betti(&self, p: &SlitPlanePoint) -> Result<BettiCoords> {
        Ok(BettiCoords::of(self.z(p)?, self.omega1(), self.omega2()))
    }

    /// `℘(z(ξ)) + (λ+1)/3 − ξ`.
    pub fn round_trip_residual(&self, p: &SlitPlanePoint) -> Result<C> {
        let z = self.z(p)?;
        Ok(self.wp.wp(z)? + self.shift() - p.xi)
    }
}

/// `z(λ, ξ)` for a single evaluation.
pub fn abel_z(lam: C, xi: &SlitPlanePoint, tol: f64) -> Result<C> {
    Ok(AbelMap::new(lam)?.z_value(xi, tol)?.z)
}

pub fn betti(lam: C, xi: C, side: Side) -> Result<BettiCoords> {
    let m = AbelMap::new(lam)?;
    m.betti(&SlitPlanePoint::with_side(lam, xi, side))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn branch_point_limits() {
        // Continuing north from the negative axis makes √g negative on
        // (1, ∞), so the limit at 1 is −ω₁/2; at 0 the route arrives in the
        // sector between the negative axis and L_λ.
        for lam in [c(0.3, 0.2), c(0.4, -0.5), c(0.25, 0.0), c(0.01, 0.05), c(0.0, 0.6), c(0.0, -0.3)] {
            let m = AbelMap::new(lam).unwrap();
            let (w1, w2) = (m.omega1(), m.omega2());
            assert!((m.z_at(c(0.0, 0.0)).unwrap() - 0.5 * w2).norm() < 1e-9, "{lam}");
            assert!((m.z_at(c(1.0, 0.0)).unwrap() + 0.5 * w1).norm() < 1e-9, "{lam}");
            let zl = m.z_at(lam).unwrap();
            assert!((zl - 0.5 * (w2 - w1)).norm() < 1e-9, "{lam}: {zl}");
        }
    }

    #[test]
    fn negative_axis_matches_definition() {
        let lam = c(0.3, 0.2);
        let m = AbelMap::new(lam).unwrap();
        let xi = -2.5;
        let direct = integrate_sqrt_kernel(
            &ContourPath::ray(c(xi, 0.0), c(-1.0, 0.0), negative_axis_root(lam, xi)),
            |_| c(1.0, 0.0),
            &m.bp,
            1e-13,
        )
        .unwrap()
        .value;
        let p = SlitPlanePoint::with_side(lam, c(xi, 0.0), Side::North);
        assert!((m.z(&p).unwrap() - direct).norm() < 1e-10);
    }

    #[test]
    fn round_trip_all_regions() {
        let lam = c(0.3, 0.4);
        let m = AbelMap::new(lam).unwrap();
        for xi in [c(0.5, 2.0), c(-0.3, 0.2), c(0.6, 0.2), c(0.2, -0.7), c(-0.5, 0.4), c(2.0, 0.4), c(0.7, 0.0)] {
            let r = m.round_trip_residual(&SlitPlanePoint::new(lam, xi)).unwrap();
            assert!(r.norm() < 1e-8, "{xi}: {r}");
        }
    }

    #[test]
    fn slit_points_need_a_side() {
        let m = AbelMap::new(c(0.3, 0.2)).unwrap();
        let p = SlitPlanePoint::with_side(c(0.3, 0.2), c(-1.0, 0.0), Side::Interior);
        assert!(matches!(m.z(&p), Err(Error::OnSlitWithoutSide(_))));
    }

    #[test]
    fn betti_of_half_period() {
        let m = AbelMap::new(c(0.3, 0.2)).unwrap();
        let b = m.betti(&SlitPlanePoint::new(m.lambda, c(1.0, 0.0))).unwrap();
        assert!((b.b1.abs() - 0.5).abs() < 1e-9 && b.b2.abs() < 1e-9);
        let z = m.z_at(c(-0.4, 0.7)).unwrap();
        let b0 = BettiCoords::of(z, m.omega1(), m.omega2());
        let b1 = BettiCoords::of(z + m.omega2(), m.omega1(), m.omega2());
        assert!((b1.b2 - b0.b2 - 1.0).abs() < 1e-12 && (b1.b1 - b0.b1).abs() < 1e-12);
    }
}
