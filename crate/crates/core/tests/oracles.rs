//! Values checked against independent computations written here: row sums
//! of the lattice, finite differences and the AGM.

use legendre_pfaff::abel::{chain_derivative_audit, AbelMap, Region, SlitPlanePoint};
use legendre_pfaff::periods::{period_derivatives, periods_integral, PeriodData};
use legendre_pfaff::weierstrass::Weierstrass;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// `℘` summed over rows: the sum along `ω₂` in closed form via
/// `Σₙ (w − nω₂)⁻² = (π/ω₂)² csc²(πw/ω₂)`.
fn wp_rows(z: C, w1: C, w2: C) -> C {
    let k = PI / w2;
    let csc2 = |w: C| {
        let s = (k * w).sin();
        k * k / (s * s)
    };
    let mut sum = csc2(z) - k * k / 3.0;
    for m in 1..60 {
        for mm in [m as f64, -(m as f64)] {
            sum += csc2(z - w1 * mm) - csc2(w1 * mm);
        }
    }
    sum
}

/// `ω₁ = ∫₁^∞ dX/√(X(X−1)(X−λ)) = 2K(λ)` for real `0 < λ < 1` (substitute
/// `X = 1/t²`), with
/// `K(m) = π / (2 AGM(1, √(1−m)))`.
fn omega1_real(lam: f64) -> f64 {
    let (mut a, mut b) = (1.0f64, (1.0 - lam).sqrt());
    // quadratic convergence: 30 steps are far more than double precision needs
    for _ in 0..30 {
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    PI / a
}

#[test]
fn wp_matches_row_sum() {
    for lam in [c(0.3, 0.2), c(0.05, -0.01), c(0.45, 0.7), c(1e-4, 0.0)] {
        let p = PeriodData::new(lam).unwrap();
        let w = Weierstrass::new(&p).unwrap();
        for (s, t) in [(0.13, 0.29), (0.5, 0.41), (0.77, 0.08)] {
            let z = p.omega1 * s + p.omega2 * t;
            let a = w.wp(z).unwrap();
            let b = wp_rows(z, p.omega1, p.omega2);
            assert!((a - b).norm() < 1e-9 * a.norm().max(1.0), "{lam} {s} {t}: {a} {b}");
        }
    }
}

#[test]
fn real_period_matches_agm() {
    for lam in [0.1, 0.3, 0.5] {
        let (w1, _) = periods_integral(c(lam, 0.0)).unwrap();
        let q = omega1_real(lam);
        assert!((w1.norm() - q).abs() < 1e-10 * q, "{lam}: {w1} {q}");
        assert!(w1.im.abs() < 1e-12 * q);
    }
}

#[test]
fn period_derivatives_match_finite_differences() {
    for lam in [c(0.3, 0.2), c(0.2, -0.35), c(0.01, 0.005)] {
        let h = 1e-5 * lam.norm();
        let (d1, d2) = period_derivatives(lam).unwrap();
        for dir in [c(1.0, 0.0), c(0.0, 1.0)] {
            let (p1, p2) = periods_integral(lam + dir * h).unwrap();
            let (m1, m2) = periods_integral(lam - dir * h).unwrap();
            let f1 = (p1 - m1) / (2.0 * h * dir);
            let f2 = (p2 - m2) / (2.0 * h * dir);
            // ∂ω/∂λ = ω′ for holomorphic ω, in either direction
            assert!((f1 - d1).norm() < 1e-6 * d1.norm(), "{lam}: {f1} {d1}");
            assert!((f2 - d2).norm() < 1e-6 * d2.norm(), "{lam}: {f2} {d2}");
        }
    }
}

#[test]
fn legendre_relation_on_real_lambda() {
    let p = PeriodData::new(c(0.25, 0.0)).unwrap();
    let lhs = p.eta1 * p.omega2 - p.eta2 * p.omega1;
    assert!((lhs.norm() - 2.0 * PI).abs() < 1e-11);
}

#[test]
fn half_period_values() {
    let lam = c(0.3, 0.4);
    let p = PeriodData::new(lam).unwrap();
    let w = Weierstrass::new(&p).unwrap();
    let want = [(2.0 - lam) / 3.0, -(lam + 1.0) / 3.0, (2.0 * lam - 1.0) / 3.0];
    for (h, v) in [0.5 * p.omega1, 0.5 * p.omega2, 0.5 * (p.omega1 + p.omega2)].iter().zip(want) {
        assert!((w.wp(*h).unwrap() - v).norm() < 1e-10, "{h}");
    }
}

#[test]
fn abel_map_at_branch_points() {
    let m = AbelMap::new(c(0.5, 0.0)).unwrap();
    assert!((m.z_at(c(1.0, 0.0)).unwrap() + 0.5 * m.omega1()).norm() < 1e-12);
    assert!((m.z_at(c(0.0, 0.0)).unwrap() - 0.5 * m.omega2()).norm() < 1e-10);
    let l = m.z_at(c(0.5, 0.0)).unwrap();
    assert!((l - 0.5 * (m.omega2() - m.omega1())).norm() < 1e-10);
}

#[test]
fn abel_derivative_matches_finite_difference() {
    let lam = c(0.3, 0.2);
    let m = AbelMap::new(lam).unwrap();
    let xi = c(0.7, 1.3);
    let h = 1e-5;
    let d = (m.z(&SlitPlanePoint::new(lam, xi + h)).unwrap() - m.z(&SlitPlanePoint::new(lam, xi - h)).unwrap()) / (2.0 * h);
    // ξ = ℘(z) + (λ+1)/3, so dz/dξ = 1/℘′(z)
    let dp = m.wp.wp_prime(m.z_at(xi).unwrap()).unwrap();
    assert!((d - 1.0 / dp).norm() < 1e-7 * d.norm(), "{d} {}", 1.0 / dp);
}

#[test]
fn chain_audit_example() {
    let r = chain_derivative_audit(c(0.3, 0.4), Region::V1, 20, 11).unwrap();
    assert_eq!(r.samples.len(), 20);
    assert!(r.passed, "fd {} chain {}", r.max_fd_residual, r.max_chain_residual);
    assert!(r.max_fd_residual < 1e-5 && r.max_chain_residual < 1e-9);
}
