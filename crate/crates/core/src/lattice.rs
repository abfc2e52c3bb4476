//! Classification of the Legendre parameter, S₃ and SL₂(ℤ) reductions, and
//! modular invariants of the period lattice.

use crate::error::{Error, Result};
use crate::periods::PeriodData;
use num_complex::Complex64 as C;
use serde::Serialize;
use std::f64::consts::PI;

/// Tolerance for boundary membership tests on λ.
pub const MEMBERSHIP_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LegendreParam {
    pub lambda: C,
    pub in_gamma: bool,
    pub in_f: bool,
    pub on_a: bool,
    pub on_a_star: bool,
}

fn check_lambda(lam: C) -> Result<()> {
    if !lam.re.is_finite() || !lam.im.is_finite() || lam.norm() < 1e-300 || (lam - 1.0).norm() < 1e-300 {
        return Err(Error::InvalidLambda(lam));
    }
    Ok(())
}

fn in_a(lam: C) -> bool {
    let eps = MEMBERSHIP_EPS;
    lam.im < -eps
        && (((1.0 - lam).norm() - 1.0).abs() <= eps && lam.re <= 0.5 + eps || (lam.re - 0.5).abs() <= eps)
}

impl LegendreParam {
    pub fn new(lam: C) -> Result<Self> {
        check_lambda(lam)?;
        let eps = MEMBERSHIP_EPS;
        let in_gamma = lam.norm() <= 1.0 + eps && (1.0 - lam).norm() <= 1.0 + eps;
        Ok(LegendreParam {
            lambda: lam,
            in_gamma,
            in_f: in_gamma && lam.re <= 0.5 + eps,
            on_a: in_a(lam),
            on_a_star: in_a(lam.conj()),
        })
    }
}

/// `{λ, 1/λ, 1−λ, 1/(1−λ), λ/(λ−1), (λ−1)/λ}` in this order.
pub fn s3_orbit(lam: C) -> Result<[C; 6]> {
    check_lambda(lam)?;
    let one = C::new(1.0, 0.0);
    Ok([
        lam,
        one / lam,
        one - lam,
        one / (one - lam),
        lam / (lam - one),
        (lam - one) / lam,
    ])
}

/// The orbit member lying in 𝓕, preferring 𝓕∖𝓐 and then the smallest
/// orbit index.
pub fn reduce_lambda_to_f(lam: C) -> Result<(LegendreParam, usize)> {
    let orbit = s3_orbit(lam)?;
    let mut best: Option<(bool, usize, LegendreParam)> = None;
    for (i, &mu) in orbit.iter().enumerate() {
        let p = LegendreParam::new(mu)?;
        if !p.in_f {
            continue;
        }
        let key = p.on_a;
        match best {
            Some((b, _, _)) if !b || key => {}
            _ => best = Some((key, i, p)),
        }
    }
    best.map(|(_, i, p)| (p, i))
        .ok_or_else(|| Error::OutOfDomain(lam, "no orbit member in the fundamental domain".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Generator {
    /// `τ ↦ τ + k`.
    T(i64),
    /// `τ ↦ −1/τ`.
    S,
}

/// Integer matrix `[[a, b], [c, d]]` acting by `τ ↦ (aτ + b)/(cτ + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Unimodular {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Unimodular {
    pub const IDENTITY: Unimodular = Unimodular { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(x, y)| x.checked_sub(y))
            .ok_or(Error::OverflowGuard)?;
        if det != 1 {
            return Err(Error::InvalidUnimodular(format!("determinant {det} != 1")));
        }
        Ok(Unimodular { a, b, c, d })
    }

    pub fn of(g: Generator) -> Self {
        match g {
            Generator::T(k) => Unimodular { a: 1, b: k, c: 0, d: 1 },
            Generator::S => Unimodular { a: 0, b: -1, c: 1, d: 0 },
        }
    }

    /// `self · other`.
    pub fn compose(&self, o: &Unimodular) -> Result<Unimodular> {
        let m = |x: i64, y: i64, z: i64, w: i64| -> Result<i64> {
            x.checked_mul(y)
                .zip(z.checked_mul(w))
                .and_then(|(p, q)| p.checked_add(q))
                .ok_or(Error::OverflowGuard)
        };
        Ok(Unimodular {
            a: m(self.a, o.a, self.b, o.c)?,
            b: m(self.a, o.b, self.b, o.d)?,
            c: m(self.c, o.a, self.d, o.c)?,
            d: m(self.c, o.b, self.d, o.d)?,
        })
    }

    pub fn inverse(&self) -> Unimodular {
        Unimodular { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn apply(&self, tau: C) -> C {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TauReduction {
    pub tau: C,
    /// Generators in order of application.
    pub word: Vec<Generator>,
    /// Product of the word, so that `tau = matrix.apply(input)`.
    pub matrix: Unimodular,
}

/// Move `tau` into the closed standard domain `|τ| ≥ 1, |Re τ| ≤ ½`, with
/// ties resolved to `Re τ ∈ [−½, ½)` and `Re τ ≥ 0` on the unit circle
/// (the corner `−½ + i√3/2` is kept).
pub fn reduce_tau_standard(tau: C) -> Result<TauReduction> {
    if !(tau.im > 0.0) || !tau.re.is_finite() {
        return Err(Error::NotUpperHalfPlane(tau));
    }
    const EPS: f64 = 1e-13;
    let mut t = tau;
    let mut word = Vec::new();
    let mut matrix = Unimodular::IDENTITY;
    let mut push = |g: Generator, t: &mut C, m: &mut Unimodular| -> Result<()> {
        *m = Unimodular::of(g).compose(m)?;
        *t = match g {
            Generator::T(k) => *t + k as f64,
            Generator::S => -1.0 / *t,
        };
        word.push(g);
        Ok(())
    };
    for _ in 0..10_000 {
        let n = (t.re + 0.5).floor() as i64;
        if n != 0 {
            push(Generator::T(-n), &mut t, &mut matrix)?;
        }
        let r2 = t.norm_sqr();
        if r2 < 1.0 - EPS {
            push(Generator::S, &mut t, &mut matrix)?;
            continue;
        }
        if r2 <= 1.0 + EPS && t.re < -EPS && t.re > -0.5 + EPS {
            push(Generator::S, &mut t, &mut matrix)?;
        }
        return Ok(TauReduction { tau: t, word, matrix });
    }
    Err(Error::NoConvergence("tau reduction did not terminate".into()))
}

/// `j = 256(λ² − λ + 1)³ / (λ²(λ − 1)²)`.
pub fn j_invariant(lam: C) -> C {
    let p = lam * lam - lam + 1.0;
    256.0 * p * p * p / (lam * lam * (lam - 1.0) * (lam - 1.0))
}

pub fn g2(lam: C) -> C {
    4.0 / 3.0 * (lam * lam - lam + 1.0)
}

pub fn g3(lam: C) -> C {
    4.0 / 27.0 * (lam - 2.0) * (lam + 1.0) * (2.0 * lam - 1.0)
}

pub fn discriminant(lam: C) -> C {
    16.0 * lam * lam * (1.0 - lam) * (1.0 - lam)
}

/// `∏_{n≥1} (1 − qⁿ)^24`, truncated once the remaining factors differ from
/// 1 by less than 1e−16 in total.
pub fn eta_product_24(q: C) -> C {
    let r = q.norm();
    let mut prod = C::new(1.0, 0.0);
    let mut qn = q;
    let mut rn = r;
    for _ in 0..100_000 {
        if rn / (1.0 - r) < 1e-17 {
            break;
        }
        prod *= (1.0 - qn).powu(24);
        qn *= q;
        rn *= r;
    }
    prod
}

/// `Δ(τ) = q ∏(1 − qⁿ)^24` with `q = e^{2πiτ}`.
pub fn delta(tau: C) -> C {
    let q = (C::new(0.0, 2.0 * PI) * tau).exp();
    q * eta_product_24(q)
}

/// Klein's j from the q-expansions of E₄ and E₆, independent of λ.
pub fn j_from_tau(tau: C) -> C {
    let q = (C::new(0.0, 2.0 * PI) * tau).exp();
    let mut e4 = C::new(1.0, 0.0);
    let mut e6 = C::new(1.0, 0.0);
    let mut qn = C::new(1.0, 0.0);
    for n in 1..2000u64 {
        qn *= q;
        if qn.norm() < 1e-22 {
            break;
        }
        let (mut s3, mut s5) = (0.0, 0.0);
        for d in 1..=n {
            if n % d == 0 {
                let df = d as f64;
                s3 += df.powi(3);
                s5 += df.powi(5);
            }
        }
        e4 += 240.0 * s3 * qn;
        e6 -= 504.0 * s5 * qn;
    }
    let e43 = e4 * e4 * e4;
    1728.0 * e43 / (e43 - e6 * e6)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModularInvariants {
    pub j: C,
    pub d: C,
    pub g2: C,
    pub g3: C,
    /// Reduced period ratio.
    pub tau: C,
    pub q: C,
    pub delta: C,
    pub area: f64,
    /// `(2π/ω)^12 Δ(τ)` for the reduced basis `(ω, ωτ)`; equals `d`.
    pub d_from_delta: C,
    /// `∏(1 − qⁿ)^24` at the reduced τ.
    pub eta_product: C,
}

pub fn modular_invariants(param: &LegendreParam, periods: &PeriodData) -> Result<ModularInvariants> {
    let lam = param.lambda;
    let red = reduce_tau_standard(periods.omega2 / periods.omega1)?;
    let m = red.matrix;
    // Reduced basis (ω, ωτ) with ω = cω₂ + dω₁.
    let omega = periods.omega2 * m.c as f64 + periods.omega1 * m.d as f64;
    let q = (C::new(0.0, 2.0 * PI) * red.tau).exp();
    let eta = eta_product_24(q);
    let delta = q * eta;
    let d_from_delta = (2.0 * PI / omega).powu(12) * delta;
    Ok(ModularInvariants {
        j: j_invariant(lam),
        d: discriminant(lam),
        g2: g2(lam),
        g3: g3(lam),
        tau: red.tau,
        q,
        delta,
        area: 2.0 * omega.norm_sqr() * red.tau.im,
        d_from_delta,
        eta_product: eta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `|A| ≥ max{(4/π)(log max{|λ|⁻¹, |1−λ|⁻¹} − log 11), 2√3}` for λ ∈ Γ.
pub fn area_lower_bound_check(param: &LegendreParam, periods: &PeriodData) -> AreaCheck {
    let lam = param.lambda;
    let m = (1.0 / lam.norm()).max(1.0 / (1.0 - lam).norm());
    let rhs = (4.0 / PI * (m.ln() - 11f64.ln())).max(2.0 * 3f64.sqrt());
    let lhs = periods.area;
    AreaCheck {
        lhs,
        rhs,
        ok: lhs >= rhs - 1e-6,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn orbit_of_one_half() {
        let o = s3_orbit(c(0.5, 0.0)).unwrap();
        let expect = [0.5, 2.0, 0.5, 2.0, -1.0, -1.0];
        for (a, b) in o.iter().zip(expect) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(s3_orbit(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn reduce_three_to_one_third() {
        let (p, i) = reduce_lambda_to_f(c(3.0, 0.0)).unwrap();
        assert_eq!(i, 1);
        assert!((p.lambda - 1.0 / 3.0).norm() < 1e-15);
        let (p, i) = reduce_lambda_to_f(c(0.4, 0.0)).unwrap();
        assert_eq!((p.lambda, i), (c(0.4, 0.0), 0));
    }

    #[test]
    fn a_and_a_star_are_disjoint_half_planes() {
        let lam = c(0.5, -0.3);
        let p = LegendreParam::new(lam).unwrap();
        assert!(p.on_a && !p.on_a_star);
        let p = LegendreParam::new(lam.conj()).unwrap();
        assert!(!p.on_a && p.on_a_star);
    }

    #[test]
    fn tau_translation_and_fixed_points() {
        let r = reduce_tau_standard(c(5.0, 1.0)).unwrap();
        assert!((r.tau - c(0.0, 1.0)).norm() < 1e-14);
        let r = reduce_tau_standard(c(0.0, 1.0)).unwrap();
        assert_eq!(r.tau, c(0.0, 1.0));
        assert!(r.word.is_empty());
        assert!(reduce_tau_standard(c(0.3, -0.1)).is_err());
    }

    #[test]
    fn tau_ties() {
        let r = reduce_tau_standard(c(0.5, 2.0)).unwrap();
        assert!((r.tau - c(-0.5, 2.0)).norm() < 1e-14);
        let z = C::from_polar(1.0, 2.0);
        let r = reduce_tau_standard(z).unwrap();
        assert!(r.tau.re >= 0.0 && (r.tau.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn j_is_zero_at_sixth_roots() {
        let lam = c(0.5, 3f64.sqrt() / 2.0);
        assert!(j_invariant(lam).norm() < 1e-12);
        assert!(j_invariant(lam.conj()).norm() < 1e-12);
    }

    #[test]
    fn discriminant_identity() {
        let lam = c(0.3, 0.7);
        let (a, b) = (g2(lam), g3(lam));
        assert!((a * a * a - 27.0 * b * b - discriminant(lam)).norm() < 1e-13);
    }

    #[test]
    fn j_matches_e4_e6_at_i() {
        assert!((j_from_tau(c(0.0, 1.0)) - 1728.0).norm() < 1e-8);
    }
}
