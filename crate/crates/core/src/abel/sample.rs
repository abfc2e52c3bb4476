//! Reproducible sampling of `λ ∈ 𝓕` and of points `ξ` in each region of
//! `X_λ` and on its boundary.

use super::route::branch_points;
use super::{classify, Region, Side};
use num_complex::Complex64 as C;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Samples closer than this to a branch point are redrawn.
pub const BRANCH_POINT_MARGIN: f64 = 1e-7;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform<R: Rng + ?Sized>(r: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + r.gen::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// Admissible `|arg λ|` range for `|λ| = ρ` in
/// `𝓕 = {|λ| ≤ 1, |1−λ| ≤ 1, Re λ ≤ ½}`.
pub fn arg_range(rho: f64) -> (f64, f64) {
    let hi = (rho / 2.0).min(1.0).acos();
    let lo = if rho > 0.5 { (0.5 / rho).min(1.0).acos() } else { 0.0 };
    (lo, hi)
}

/// `λ ∈ 𝓕` with `log|λ|` uniform on `[log ρ_min, 0]`, argument uniform on
/// the admissible range, sign of `Im λ` random.
pub fn sample_lambda(r: &mut impl Rng, rho_min: f64) -> C {
    let rho = log_uniform(r, rho_min, 1.0);
    let (lo, hi) = arg_range(rho);
    let theta = lo + r.gen::<f64>() * (hi - lo);
    let s = if r.gen::<bool>() { 1.0 } else { -1.0 };
    C::from_polar(rho, s * theta)
}

/// Deterministic grid: `n` log-spaced moduli from `rho_min` to 1, each at the
/// three arguments low, middle and high of its admissible range (the real
/// value first), alternating the sign of `Im λ`.
pub fn lambda_grid(n: usize, rho_min: f64) -> Vec<C> {
    let mut out = Vec::new();
    for i in 0..n {
        let t = if n > 1 { i as f64 / (n - 1) as f64 } else { 1.0 };
        let rho = (rho_min.ln() * (1.0 - t)).exp();
        let (lo, hi) = arg_range(rho);
        for (k, f) in [0.0, 0.5, 0.95].iter().enumerate() {
            let s = if (i + k) % 2 == 0 { 1.0 } else { -1.0 };
            out.push(C::from_polar(rho, s * (lo + f * (hi - lo))));
        }
    }
    out
}

/// A point of the given region for `Im λ ≥ 0`, or `None` if the region is
/// empty for this λ. Distances to the defining lines are log-uniform so that
/// both the neighbourhoods of the slits and far points are covered.
fn raw_point(r: &mut impl Rng, l: C, region: Region) -> Option<C> {
    let d = |r: &mut dyn rand::RngCore| log_uniform(r, 1e-6, 1e3);
    let sgn = |r: &mut dyn rand::RngCore| if r.gen::<bool>() { 1.0 } else { -1.0 };
    let real_lam = l.im == 0.0;
    Some(match region {
        Region::V1 => {
            let x = sgn(r) * d(r);
            C::new(x, l.im + d(r))
        }
        Region::V2 | Region::V3 => {
            if real_lam {
                return None;
            }
            let u = 1e-6 + r.gen::<f64>() * (1.0 - 2e-6);
            let y = u * l.im;
            let xl = u * l.re;
            let off = d(r);
            C::new(if region == Region::V2 { xl - off } else { xl + off }, y)
        }
        Region::V4 => C::new(sgn(r) * d(r), -d(r)),
        Region::V5 | Region::V6 => {
            if real_lam {
                return None;
            }
            let off = d(r);
            C::new(if region == Region::V5 { l.re - off } else { l.re + off }, l.im)
        }
        Region::NegAxis => C::new(-log_uniform(r, 1e-6, 1e4), 0.0),
        Region::OneInfty => C::new(1.0 + log_uniform(r, 1e-6, 1e4), 0.0),
        Region::LSlit => l * (1e-6 + r.gen::<f64>() * (1.0 - 2e-6)),
        Region::UnitInterval => {
            let a = if real_lam { l.re } else { 0.0 };
            C::new(a + (1.0 - a) * (1e-6 + r.gen::<f64>() * (1.0 - 2e-6)), 0.0)
        }
    })
}

/// A point of `region` for this λ, redrawn until it classifies correctly and
/// keeps [`BRANCH_POINT_MARGIN`] from the branch points.
pub fn sample_xi(r: &mut impl Rng, lam: C, region: Region) -> Option<C> {
    let mirror = lam.im < 0.0;
    let l = if mirror { lam.conj() } else { lam };
    for _ in 0..1000 {
        let x = raw_point(r, l, region)?;
        let xi = if mirror { x.conj() } else { x };
        if branch_points(lam).iter().any(|e| (xi - e).norm() < BRANCH_POINT_MARGIN) {
            continue;
        }
        if classify(lam, xi) == region {
            return Some(xi);
        }
    }
    None
}

/// One `(λ, ξ, side)` sample of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub index: usize,
    pub lambda: C,
    pub xi: C,
    pub region: Region,
    pub side: Side,
}

/// `n_lambda` values of λ (the log grid first, then random draws) and
/// `per_lambda` points each, cycling through the ten regions and, on the
/// boundary, through both sides. Deterministic in `seed`.
pub fn sweep_samples(seed: u64, n_lambda: usize, per_lambda: usize, rho_min: f64) -> Vec<Sample> {
    let mut r = rng(seed);
    let grid = lambda_grid((n_lambda / 6).max(2), rho_min);
    let lambdas: Vec<C> = (0..n_lambda)
        .map(|i| if i < grid.len() { grid[i] } else { sample_lambda(&mut r, rho_min) })
        .collect();
    let mut out = Vec::with_capacity(n_lambda * per_lambda);
    for lam in lambdas {
        let mut k = 0usize;
        let mut tries = 0usize;
        while k < per_lambda && tries < 10 * per_lambda + 20 {
            let region = Region::ALL[tries % Region::ALL.len()];
            tries += 1;
            let Some(xi) = sample_xi(&mut r, lam, region) else { continue };
            let side = if !region.is_boundary() {
                Side::Interior
            } else if (tries / Region::ALL.len()) % 2 == 0 {
                Side::North
            } else {
                Side::South
            };
            out.push(Sample { index: out.len(), lambda: lam, xi, region, side });
            k += 1;
        }
    }
    out
}

/// Points on the circle `|ξ| = ρ` at `n` angles, skipping the slits.
pub fn circle_points(lam: C, rho: f64, n: usize) -> Vec<C> {
    (0..n)
        .map(|k| C::from_polar(rho, -PI + 2.0 * PI * (k as f64 + 0.5) / n as f64))
        .filter(|&x| !classify(lam, x).is_boundary())
        .collect()
}
