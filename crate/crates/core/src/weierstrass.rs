//! ℘, ℘′, ζ, σ and φ for the period lattice of a Legendre curve, evaluated
//! through the odd Jacobi theta function after reduction to the central
//! period parallelogram.

use crate::error::{Error, Result};
use crate::lattice::{g2, g3};
use crate::periods::PeriodData;
use num_complex::Complex64 as C;
use serde::Serialize;
use std::f64::consts::PI;

const I: C = C { re: 0.0, im: 1.0 };

/// Real coordinates of `z` in the basis `(ω₁, ω₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Betti {
    pub b1: f64,
    pub b2: f64,
}

pub fn betti_of(z: C, w1: C, w2: C) -> Betti {
    let a = w1 * w2.conj() - w2 * w1.conj();
    Betti {
        b1: ((w2.conj() * z - w2 * z.conj()) / a).re,
        b2: ((w1 * z.conj() - w1.conj() * z) / a).re,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticePoint {
    pub z: C,
    pub b: Betti,
    pub in_fundamental_domain: bool,
}

/// `θ₁` and its first three derivatives at `v` for nome `q = e^{iπτ}`.
#[derive(Debug, Clone, Copy)]
struct Theta {
    t0: C,
    t1: C,
    t2: C,
    t3: C,
}

#[derive(Debug, Clone)]
pub struct Weierstrass {
    pub lambda: C,
    pub omega1: C,
    pub omega2: C,
    pub tau: C,
    /// Quasi-periods obtained from the theta series, independent of the
    /// period derivatives.
    pub eta1: C,
    pub eta2: C,
    pub g2: C,
    pub g3: C,
    /// `(n + ½)²`-powers of the nome, `q^{(n+½)²}`, until negligible.
    qpow: Vec<C>,
    theta1_prime0: C,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiTranslationLaw {
    pub n: i64,
    /// Coefficient of `z̃` in `ψₙ`.
    pub slope: C,
    pub constant: C,
}

impl PhiTranslationLaw {
    /// `ψₙ(z̃) = −2πinz̃/ω₁ − πin(n−1)ω₂/ω₁`.
    pub fn new(n: i64, w1: C, w2: C) -> Self {
        let nn = (n as i128) * (n as i128 - 1);
        PhiTranslationLaw {
            n,
            slope: -2.0 * PI * I * n as f64 / w1,
            constant: -PI * I * nn as f64 * w2 / w1,
        }
    }

    pub fn eval(&self, z_tilde: C) -> C {
        self.slope * z_tilde + self.constant
    }
}

impl Weierstrass {
    pub fn new(p: &PeriodData) -> Result<Self> {
        let tau = p.omega2 / p.omega1;
        if !(tau.im > 0.0) {
            return Err(Error::NotUpperHalfPlane(tau));
        }
        let mut qpow = Vec::new();
        for n in 0..200 {
            let e = (n as f64 + 0.5) * (n as f64 + 0.5);
            let t = (I * PI * tau * e).exp();
            // Terms are multiplied by at most e^{(2n+1)·π·Im τ/2} after reduction.
            if n > 1 && t.norm() * (PI * tau.im * (2 * n + 1) as f64 * 0.5).exp() * ((2 * n + 1) as f64).powi(3) < 1e-18 {
                break;
            }
            qpow.push(t);
        }
        let mut w = Weierstrass {
            lambda: p.lambda,
            omega1: p.omega1,
            omega2: p.omega2,
            tau,
            eta1: C::default(),
            eta2: C::default(),
            g2: g2(p.lambda),
            g3: g3(p.lambda),
            qpow,
            theta1_prime0: C::default(),
        };
        let th = w.theta(C::default());
        w.theta1_prime0 = th.t1;
        w.eta1 = -PI * PI * th.t3 / (3.0 * w.omega1 * th.t1);
        w.eta2 = (w.omega2 * w.eta1 - 2.0 * PI * I) / w.omega1;
        Ok(w)
    }

    fn theta(&self, v: C) -> Theta {
        let mut t = Theta {
            t0: C::default(),
            t1: C::default(),
            t2: C::default(),
            t3: C::default(),
        };
        for (n, q) in self.qpow.iter().enumerate() {
            let k = (2 * n + 1) as f64;
            let sign = if n % 2 == 0 { 2.0 } else { -2.0 };
            let (s, c) = ((v * k).sin(), (v * k).cos());
            let a = q * sign;
            t.t0 += a * s;
            t.t1 += a * k * c;
            t.t2 -= a * k * k * s;
            t.t3 -= a * k * k * k * c;
        }
        t
    }

    pub fn betti(&self, z: C) -> Betti {
        betti_of(z, self.omega1, self.omega2)
    }

    pub fn lattice_point(&self, z: C) -> LatticePoint {
        let b = self.betti(z);
        LatticePoint {
            z,
            b,
            in_fundamental_domain: (0.0..1.0).contains(&b.b1) && (0.0..1.0).contains(&b.b2) && (b.b1 != 0.0 || b.b2 != 0.0),
        }
    }

    /// `z = z₀ + mω₁ + nω₂` with the Betti coordinates of `z₀` in `[−½, ½]`.
    pub fn reduce(&self, z: C) -> (C, i64, i64) {
        let b = self.betti(z);
        let m = b.b1.round();
        let n = b.b2.round();
        (z - self.omega1 * m - self.omega2 * n, m as i64, n as i64)
    }

    fn check_pole(&self, z0: C, z: C) -> Result<()> {
        if z0.norm() <= 1e-13 * self.omega1.norm() {
            return Err(Error::PoleAtLatticePoint(z));
        }
        Ok(())
    }

    fn v(&self, z0: C) -> C {
        PI * z0 / self.omega1
    }

    pub fn wp(&self, z: C) -> Result<C> {
        let (z0, _, _) = self.reduce(z);
        self.check_pole(z0, z)?;
        let t = self.theta(self.v(z0));
        let k = PI / self.omega1;
        Ok(-self.eta1 / self.omega1 - k * k * (t.t2 * t.t0 - t.t1 * t.t1) / (t.t0 * t.t0))
    }

    pub fn wp_prime(&self, z: C) -> Result<C> {
        let (z0, _, _) = self.reduce(z);
        self.check_pole(z0, z)?;
        let t = self.theta(self.v(z0));
        let k = PI / self.omega1;
        let r1 = t.t1 / t.t0;
        Ok(-k * k * k * (t.t3 / t.t0 - 3.0 * t.t2 / t.t0 * r1 + 2.0 * r1 * r1 * r1))
    }

    pub fn zeta(&self, z: C) -> Result<C> {
        let (z0, m, n) = self.reduce(z);
        self.check_pole(z0, z)?;
        let t = self.theta(self.v(z0));
        let base = self.eta1 * z0 / self.omega1 + PI / self.omega1 * t.t1 / t.t0;
        Ok(base + self.eta1 * m as f64 + self.eta2 * n as f64)
    }

    fn sigma_reduced(&self, z0: C) -> C {
        let t = self.theta(self.v(z0));
        self.omega1 / PI * (self.eta1 * z0 * z0 / (2.0 * self.omega1)).exp() * t.t0 / self.theta1_prime0
    }

    /// σ via `σ(z₀ + ω) = (−1)^{m+n+mn} e^{η(ω)(z₀ + ω/2)} σ(z₀)`.
    pub fn sigma(&self, z: C) -> C {
        let (z0, m, n) = self.reduce(z);
        let w = self.omega1 * m as f64 + self.omega2 * n as f64;
        let eta = self.eta1 * m as f64 + self.eta2 * n as f64;
        let parity = (m + n + m * n).rem_euclid(2);
        let sign = if parity == 0 { 1.0 } else { -1.0 };
        sign * (eta * (z0 + 0.5 * w)).exp() * self.sigma_reduced(z0)
    }

    fn phi_reduced(&self, z0: C) -> C {
        let t = self.theta(self.v(z0));
        self.omega1 / PI * (PI * I * z0 / self.omega1).exp() * t.t0 / self.theta1_prime0
    }

    /// `φ(z) = exp(−½z²η₁/ω₁ + πiz/ω₁) σ(z)`, extended with its ω₁-periodicity
    /// and `φ(z̃ + nω₂) = (−1)ⁿ e^{ψₙ(z̃)} φ(z̃)`.
    pub fn phi(&self, z: C) -> C {
        let (z0, _, n) = self.reduce(z);
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sign * self.psi_n(n, z0).exp() * self.phi_reduced(z0)
    }

    /// `φ` from its definition through σ, for cross-checks.
    pub fn phi_from_sigma(&self, z: C) -> C {
        (-0.5 * z * z * self.eta1 / self.omega1 + PI * I * z / self.omega1).exp() * self.sigma(z)
    }

    pub fn psi_n(&self, n: i64, z_tilde: C) -> C {
        PhiTranslationLaw::new(n, self.omega1, self.omega2).eval(z_tilde)
    }

    /// `℘ + (λ+1)/3` at `ω₁/2`, `ω₂/2`, `(ω₁+ω₂)/2`; expected `1, 0, λ`.
    pub fn half_period_table(&self) -> Result<[C; 3]> {
        let c = (self.lambda + 1.0) / 3.0;
        Ok([
            self.wp(0.5 * self.omega1)? + c,
            self.wp(0.5 * self.omega2)? + c,
            self.wp(0.5 * (self.omega1 + self.omega2))? + c,
        ])
    }

    /// Residual of `℘′² = 4℘³ − g₂℘ − g₃`, relative to the largest of its
    /// terms (near a half period both sides are small differences of large
    /// terms).
    pub fn differential_equation_residual(&self, z: C) -> Result<f64> {
        let p = self.wp(z)?;
        let d = self.wp_prime(z)?;
        let terms = [d * d, 4.0 * p * p * p, self.g2 * p, self.g3];
        let scale = terms.iter().map(|t| t.norm()).fold(1e-300, f64::max);
        Ok((terms[0] - terms[1] + terms[2] + terms[3]).norm() / scale)
    }
}

/// `Im(ωη)` with `ω = ω₁ + ω₂`, `η = η₁ + η₂`.
pub fn im_omega_eta(p: &PeriodData) -> f64 {
    ((p.omega1 + p.omega2) * (p.eta1 + p.eta2)).im
}

/// Number of `r ∈ [0, ½)` where `θ(r) = r·Im(ηω)/π` is an integer, i.e. the
/// integers in the half-open image interval `[0, Im(ηω)/2π)`.
pub fn psi_lambda_zero_count(p: &PeriodData) -> u64 {
    let x = (im_omega_eta(p) / (2.0 * PI)).abs();
    (x.ceil() as u64).max(1)
}

/// Largest `|Im ψₙ(z̃)/2π|` over `|n| ≤ n_max` and a `grid × grid` lattice
/// of points `z̃ = r₁ω₁ + r₂ω₂` in the fundamental domain.
pub fn psi_shift_max(w: &Weierstrass, n_max: i64, grid: usize) -> f64 {
    let mut best: f64 = 0.0;
    for n in -n_max..=n_max {
        let law = PhiTranslationLaw::new(n, w.omega1, w.omega2);
        for i in 0..grid {
            for j in 0..grid {
                let z = w.omega1 * (i as f64 / grid as f64) + w.omega2 * (j as f64 / grid as f64);
                best = best.max((law.eval(z).im / (2.0 * PI)).abs());
            }
        }
    }
    best
}

/// `σ((½+r)ω)/σ((½−r)ω)` evaluated directly; equals `exp(rηω)`.
pub fn sigma_ratio(w: &Weierstrass, r: f64) -> C {
    let om = w.omega1 + w.omega2;
    w.sigma((0.5 + r) * om) / w.sigma((0.5 - r) * om)
}

/// Symmetrised truncated lattice sum for ℘, with the `1/ω²` terms summed
/// over the same square shells; test oracle only.
pub fn wp_lattice_sum(z: C, w1: C, w2: C, shells: i64) -> C {
    let mut s = 1.0 / (z * z);
    for m in -shells..=shells {
        for n in -shells..=shells {
            if m == 0 && n == 0 {
                continue;
            }
            let w = w1 * m as f64 + w2 * n as f64;
            s += 1.0 / ((z - w) * (z - w)) - 1.0 / (w * w);
        }
    }
    s
}

/// `℘` with the sum over `n` done in closed form,
/// `Σₙ (w − nω₂)⁻² = (π/ω₂)² csc²(πw/ω₂)`, and the sum over `m` taken
/// directly; converges geometrically in `rows`. Test oracle only.
pub fn wp_row_sum(z: C, w1: C, w2: C, rows: i64) -> C {
    let k = PI / w2;
    let csc2 = |w: C| {
        let s = (k * w).sin();
        1.0 / (s * s)
    };
    let mut s = csc2(z) - 1.0 / 3.0;
    for m in (1..=rows).rev() {
        for mm in [m, -m] {
            let t = w1 * mm as f64;
            s += csc2(z - t) - csc2(t);
        }
    }
    k * k * s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(lam: C) -> Weierstrass {
        Weierstrass::new(&PeriodData::new(lam).unwrap()).unwrap()
    }

    #[test]
    fn half_periods() {
        let w = setup(C::new(0.3, 0.2));
        let t = w.half_period_table().unwrap();
        assert!((t[0] - 1.0).norm() < 1e-10, "{t:?}");
        assert!(t[1].norm() < 1e-10, "{t:?}");
        assert!((t[2] - w.lambda).norm() < 1e-10, "{t:?}");
    }

    #[test]
    fn theta_eta_matches_derivative_route() {
        let p = PeriodData::new(C::new(0.3, 0.0)).unwrap();
        let w = Weierstrass::new(&p).unwrap();
        assert!((w.eta1 - p.eta1).norm() < 1e-10);
        assert!((w.zeta(0.5 * p.omega1).unwrap() * 2.0 - p.eta1).norm() < 1e-10);
    }

    #[test]
    fn psi_examples() {
        let w = setup(C::new(0.4, 0.1));
        assert_eq!(w.psi_n(0, C::new(0.3, 0.2)), C::default());
        assert!((w.psi_n(1, 0.5 * w.omega1) + PI * I).norm() < 1e-14);
    }

    #[test]
    fn phi_laws() {
        let w = setup(C::new(0.25, 0.1));
        let z = 0.3 * w.omega1 + 0.4 * w.omega2;
        let f = w.phi(z);
        assert!(((w.phi(z + w.omega1) - f) / f).norm() < 1e-10);
        let law = -(-2.0 * PI * I * z / w.omega1).exp() * f;
        assert!(((w.phi(z + w.omega2) - law) / law).norm() < 1e-9);
        assert!(((w.phi_from_sigma(z) - f) / f).norm() < 1e-10);
    }
}
