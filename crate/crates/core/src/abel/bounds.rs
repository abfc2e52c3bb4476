//! Numerical checks of the Betti-coordinate bounds: the numerator bounds on
//! the three slits, the relation between north and south continuations,
//! and the sweeps over `𝓕 ×_λ X_λ` for `max |bᵢ|` and `|Im 𝓛|`.

use super::logphi::{IM_L_BOUND, LOG_PHI_TOL};
use super::sample::{sweep_samples, Sample};
use super::{AbelMap, BettiCoords, Region, Side, SlitPlanePoint};
use crate::contour::{integrate_sqrt_kernel, ContourPath};
use crate::error::Result;
use crate::periods::positive_axis_root;
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Slack added to every bound before comparing.
pub const BOUND_SLACK: f64 = 1e-6;
pub const BETTI_BOUND: f64 = 42.0;
/// The bound proved for boundary continuations before the final step.
pub const BETTI_BOUND_BOUNDARY: f64 = 41.0;
pub const IM_L_TURNS_BOUND: f64 = 384.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Boundary {
    /// `(−∞, 0]`.
    NegAxis,
    /// `L_λ = [0, λ]`.
    LSlit,
    /// `[1, ∞)`.
    OneInfty,
}

impl Boundary {
    pub const ALL: [Boundary; 3] = [Boundary::NegAxis, Boundary::LSlit, Boundary::OneInfty];
}

/// `14 log|λ|⁻¹ + 36`, `13 log|λ|⁻¹ + 65`, `5 log|λ|⁻¹ + 25`.
pub fn numerator_bound(lam: C, boundary: Boundary) -> f64 {
    let l = -lam.norm().ln();
    match boundary {
        Boundary::NegAxis => 14.0 * l + 36.0,
        Boundary::LSlit => 13.0 * l + 65.0,
        Boundary::OneInfty => 5.0 * l + 25.0,
    }
}

/// `n` points on the slit, including its branch points, with distances to
/// the branch points log-spaced down to `1e−7`.
pub fn boundary_grid(lam: C, boundary: Boundary, n: usize) -> Vec<C> {
    let n = n.max(4);
    let logspace = |lo: f64, hi: f64, k: usize| -> Vec<f64> {
        (0..k)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (k - 1).max(1) as f64).exp())
            .collect()
    };
    match boundary {
        Boundary::NegAxis => std::iter::once(C::default())
            .chain(logspace(1e-7, 1e4, n - 1).into_iter().map(|d| C::new(-d, 0.0)))
            .collect(),
        Boundary::OneInfty => std::iter::once(C::new(1.0, 0.0))
            .chain(logspace(1e-7, 1e4, n - 1).into_iter().map(|d| C::new(1.0 + d, 0.0)))
            .collect(),
        Boundary::LSlit => {
            let half = (n - 2) / 2;
            let r = lam.norm();
            let ts = logspace(1e-7 / r, 0.5, half.max(1));
            let mut v = vec![C::default(), lam];
            v.extend(ts.iter().map(|t| lam * *t));
            v.extend(ts.iter().rev().map(|t| lam * (1.0 - *t)));
            v.truncate(n);
            v
        }
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumeratorSample {
    pub xi: C,
    pub B1_abs: f64,
    pub B2_abs: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumeratorReport {
    pub lambda: C,
    pub boundary: Boundary,
    pub bound: f64,
    pub max_numerator: f64,
    /// On `[1, ∞)`: largest `min |z_N ∓ ∫_ξ^∞ dX/(2√g)|` over the grid, the
    /// mismatch against the direct integral up to its sign.
    pub direct_mismatch: Option<f64>,
    pub samples: Vec<NumeratorSample>,
    pub all_ok: bool,
}

impl AbelMap {
    pub fn numerator_bound_check(&self, boundary: Boundary, n: usize) -> Result<NumeratorReport> {
        let lam = self.lambda;
        let bound = numerator_bound(lam, boundary);
        let mut samples = Vec::new();
        let mut direct_mismatch: Option<f64> = None;
        for (i, xi) in boundary_grid(lam, boundary, n).into_iter().enumerate() {
            let p = SlitPlanePoint::with_side(lam, xi, Side::North);
            let z = self.z(&p)?;
            let b = BettiCoords::of(z, self.omega1(), self.omega2());
            let (b1, b2) = (b.B1.norm(), b.B2.norm());
            samples.push(NumeratorSample {
                xi,
                B1_abs: b1,
                B2_abs: b2,
                ok: b1.max(b2) <= bound + BOUND_SLACK,
            });
            if boundary == Boundary::OneInfty && i % 10 == 1 && xi.re > 1.0 + 1e-4 {
                let ray = ContourPath::ray(xi, C::new(1.0, 0.0), positive_axis_root(lam, xi.re));
                let direct = integrate_sqrt_kernel(&ray, |_| C::new(1.0, 0.0), &self.bp, 1e-12)?.value;
                let d = (z - direct).norm().min((z + direct).norm());
                direct_mismatch = Some(direct_mismatch.map_or(d, |m| m.max(d)));
            }
        }
        let max_numerator = samples.iter().map(|s| s.B1_abs.max(s.B2_abs)).fold(0.0, f64::max);
        Ok(NumeratorReport {
            lambda: lam,
            boundary,
            bound,
            max_numerator,
            direct_mismatch,
            all_ok: samples.iter().all(|s| s.ok),
            samples,
        })
    }
}

pub fn numerator_bound_check(lam: C, boundary: Boundary, n: usize) -> Result<NumeratorReport> {
    AbelMap::new(lam)?.numerator_bound_check(boundary, n)
}

/// `z_S = a·z_N + m ω₁ + n ω₂` at one boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NorthSouthRecord {
    pub xi: C,
    pub boundary: Boundary,
    pub z_north: C,
    pub z_south: C,
    pub sign: i8,
    pub translation: [i64; 2],
    pub residual: f64,
    pub betti_north: f64,
    pub betti_south: f64,
    /// Translation within one step per coordinate, `max|b_S| ≤ max|b_N| + 1`
    /// and both below 41.
    pub ok: bool,
}

impl AbelMap {
    pub fn north_south(&self, xi: C, boundary: Boundary) -> Result<NorthSouthRecord> {
        let lam = self.lambda;
        let zn = self.z(&SlitPlanePoint::with_side(lam, xi, Side::North))?;
        let zs = self.z(&SlitPlanePoint::with_side(lam, xi, Side::South))?;
        let (w1, w2) = (self.omega1(), self.omega2());
        let fit = |a: f64| {
            let b = BettiCoords::of(zs - a * zn, w1, w2);
            let (m, n) = (b.b1.round(), b.b2.round());
            ((b.b1 - m).abs().max((b.b2 - n).abs()), m as i64, n as i64)
        };
        let (rp, mp, np) = fit(1.0);
        let (rm, mm, nm) = fit(-1.0);
        let (sign, residual, m, n) = if rp <= rm { (1, rp, mp, np) } else { (-1, rm, mm, nm) };
        let betti_north = BettiCoords::of(zn, w1, w2).max_abs();
        let betti_south = BettiCoords::of(zs, w1, w2).max_abs();
        let ok = residual < 1e-6
            && m.abs() <= 1
            && n.abs() <= 1
            && betti_south <= betti_north + 1.0 + BOUND_SLACK
            && betti_north.max(betti_south) <= BETTI_BOUND_BOUNDARY + BOUND_SLACK;
        Ok(NorthSouthRecord {
            xi,
            boundary,
            z_north: zn,
            z_south: zs,
            sign,
            translation: [m, n],
            residual,
            betti_north,
            betti_south,
            ok,
        })
    }
}

/// North/south comparison on an interior grid of each slit.
pub fn north_south_check(lam: C, n: usize) -> Result<Vec<NorthSouthRecord>> {
    let m = AbelMap::new(lam)?;
    let mut out = Vec::new();
    for b in Boundary::ALL {
        for xi in boundary_grid(lam, b, n + 2).into_iter().filter(|x| super::route::branch_point_at(lam, *x).is_none()) {
            out.push(m.north_south(xi, b)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepConfig {
    pub seed: u64,
    pub n_lambda: usize,
    pub per_lambda: usize,
    /// Smallest `|λ|` on the log grid.
    pub rho_min: f64,
}

impl SweepConfig {
    pub fn samples(&self) -> Vec<Sample> {
        sweep_samples(self.seed, self.n_lambda, self.per_lambda, self.rho_min)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub index: usize,
    pub lambda: C,
    pub xi: C,
    pub region: Region,
    pub side: Side,
    pub value: Option<f64>,
    pub error: Option<String>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub samples: usize,
    pub bound: f64,
    pub max_value: f64,
    pub argmax: Option<usize>,
    pub violations: usize,
    pub errors: usize,
    pub regions_hit: Vec<usize>,
    pub records: Vec<SweepRecord>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.errors == 0
    }
}

/// Evaluate `f` on every sample, one `AbelMap` per λ, in parallel over λ and
/// merged in sample order.
fn sweep<F>(samples: &[Sample], bound: f64, f: F) -> SweepReport
where
    F: Fn(&AbelMap, &SlitPlanePoint) -> Result<f64> + Sync,
{
    let mut groups: Vec<&[Sample]> = Vec::new();
    let mut start = 0;
    for i in 1..=samples.len() {
        if i == samples.len() || samples[i].lambda != samples[start].lambda {
            groups.push(&samples[start..i]);
            start = i;
        }
    }
    let records: Vec<SweepRecord> = groups
        .par_iter()
        .flat_map_iter(|g| {
            let map = AbelMap::new(g[0].lambda);
            g.iter()
                .map(|s| {
                    let res = map.as_ref().map_err(|e| e.clone()).and_then(|m| {
                        let p = SlitPlanePoint {
                            xi: s.xi,
                            region: s.region,
                            approach_side: s.side,
                        };
                        f(m, &p)
                    });
                    let (value, error) = match res {
                        Ok(v) => (Some(v), None),
                        Err(e) => (None, Some(e.to_string())),
                    };
                    SweepRecord {
                        index: s.index,
                        lambda: s.lambda,
                        xi: s.xi,
                        region: s.region,
                        side: s.side,
                        value,
                        error,
                        ok: value.is_some_and(|v| v <= bound + BOUND_SLACK),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut max_value = 0.0;
    let mut argmax = None;
    let mut regions = [false; 10];
    for r in &records {
        regions[r.region.index() - 1] = true;
        if let Some(v) = r.value {
            if v > max_value {
                max_value = v;
                argmax = Some(r.index);
            }
        }
    }
    SweepReport {
        samples: records.len(),
        bound,
        max_value,
        argmax,
        violations: records.iter().filter(|r| r.value.is_some() && !r.ok).count(),
        errors: records.iter().filter(|r| r.error.is_some()).count(),
        regions_hit: (1..=10).filter(|j| regions[j - 1]).collect(),
        records,
    }
}

/// `max{|b₁|, |b₂|}` over the sweep, against 42.
pub fn betti_sweep(cfg: &SweepConfig) -> SweepReport {
    sweep(&cfg.samples(), BETTI_BOUND, |m, p| Ok(m.betti(p)?.max_abs()))
}

/// `|Im 𝓛|` over the sweep, against 2409; `|Im 𝓛|/2π ≤ 384` follows.
pub fn im_log_sweep(cfg: &SweepConfig) -> SweepReport {
    let mut r = sweep(&cfg.samples(), IM_L_BOUND, |m, p| Ok(m.log_phi_l(p, LOG_PHI_TOL)?.im.abs()));
    r.bound = r.bound.min(IM_L_TURNS_BOUND * 2.0 * PI);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn numerator_examples() {
        for (lam, b) in [(c(1e-3, 0.0), Boundary::NegAxis), (c(0.4, 0.3), Boundary::LSlit), (c(0.2, 0.0), Boundary::OneInfty)] {
            let r = numerator_bound_check(lam, b, 60).unwrap();
            assert!(r.all_ok, "{lam} {b:?}: {} > {}", r.max_numerator, r.bound);
            if let Some(d) = r.direct_mismatch {
                assert!(d < 1e-9, "{d}");
            }
        }
    }

    #[test]
    fn north_south_relations() {
        // From the branch-point limits: z_S = z_N − ω₁ on the negative axis,
        // z_S = −z_N − ω₁ on [1, ∞) and z_S = −z_N + ω₂ − ω₁ on L_λ.
        for lam in [c(0.3, 0.2), c(0.2, -0.1), c(0.05, 0.0)] {
            for r in north_south_check(lam, 8).unwrap() {
                assert!(r.ok, "{lam} {:?}", r);
                let expect = match r.boundary {
                    Boundary::NegAxis => (1, [-1, 0]),
                    Boundary::OneInfty => (-1, [-1, 0]),
                    Boundary::LSlit => (-1, [-1, 1]),
                };
                assert_eq!((r.sign, r.translation), expect, "{lam} {:?}", r.xi);
            }
        }
    }

    #[test]
    fn small_sweeps_pass() {
        let cfg = SweepConfig { seed: 11, n_lambda: 6, per_lambda: 20, rho_min: 1e-6 };
        let b = betti_sweep(&cfg);
        assert!(b.passed(), "{:?}", b.records.iter().find(|r| !r.ok));
        assert_eq!(b.samples, cfg.samples().len());
        let l = im_log_sweep(&cfg);
        assert!(l.passed(), "{:?}", l.records.iter().find(|r| !r.ok));
    }
}
