use legendre_pfaff::abel::sample::arg_range;
use legendre_pfaff::abel::{monodromy_rho, AbelMap, Generator, Letter, Region, Side, SlitPlanePoint};
use legendre_pfaff::lattice::{j_invariant, s3_orbit};
use legendre_pfaff::pfaffian::{component_bound, compose_theorem_format, khovanskii_zero_bound, TheoremFunction};
use legendre_pfaff::periods::PeriodData;
use legendre_pfaff::weierstrass::Weierstrass;
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn lambda_in_f() -> impl Strategy<Value = C> {
    (-6.0f64..0.0, 0.0f64..1.0, any::<bool>()).prop_map(|(lr, t, neg)| {
        let rho = 10f64.powf(lr);
        let (lo, hi) = arg_range(rho);
        let th = lo + t * (hi - lo);
        C::from_polar(rho, if neg { -th } else { th })
    })
}

fn letter() -> impl Strategy<Value = Letter> {
    (0usize..3, any::<bool>()).prop_map(|(g, inverse)| Letter {
        gen: [Generator::G1, Generator::G2, Generator::G3][g],
        inverse,
    })
}

fn word() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(), 0..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn monodromy_is_a_homomorphism(a in word(), b in word()) {
        let ab: Vec<Letter> = a.iter().chain(b.iter()).copied().collect();
        prop_assert_eq!(monodromy_rho(&ab), monodromy_rho(&a) * monodromy_rho(&b));
    }

    #[test]
    fn word_times_inverse_is_trivial(a in word()) {
        let inv: Vec<Letter> = a.iter().rev().map(|l| Letter { gen: l.gen, inverse: !l.inverse }).collect();
        let w: Vec<Letter> = a.iter().chain(inv.iter()).copied().collect();
        let id = monodromy_rho(&[]);
        prop_assert_eq!(monodromy_rho(&w), id);
        prop_assert_eq!(monodromy_rho(&a).inverse() * monodromy_rho(&a), id);
    }

    #[test]
    fn component_bound_is_monotone(r in 0u64..8, a in 1u64..10, b in 1u64..30, n in 1u64..10) {
        let base = component_bound(r, a, b, n);
        prop_assert!(component_bound(r + 1, a, b, n) >= base);
        prop_assert!(component_bound(r, a + 1, b, n) >= base);
        prop_assert!(component_bound(r, a, b + 1, n) >= base);
        prop_assert!(component_bound(r, a, b, n + 1) >= base);
    }

    #[test]
    fn zero_bound_grows_with_degree(t in 1u64..200, which in 0usize..3) {
        let f = compose_theorem_format(TheoremFunction::ALL[which]);
        prop_assert!(khovanskii_zero_bound(&f, t + 1).value >= khovanskii_zero_bound(&f, t).value);
    }

    #[test]
    fn union_adds_pieces(k in 1u32..6, which in 0usize..3) {
        let f = compose_theorem_format(TheoremFunction::ALL[which]);
        let mut u = f.clone();
        for _ in 1..k {
            u = u.union(&f).unwrap();
        }
        prop_assert_eq!(&u.L, &(&f.L * k));
        prop_assert_eq!((u.r, u.alpha, u.beta, u.n, u.M), (f.r, f.alpha, f.beta, f.n, f.M));
        // and so the zero bound scales by the same factor
        prop_assert_eq!(khovanskii_zero_bound(&u, 20).value, khovanskii_zero_bound(&f, 20).value * k);
    }

    #[test]
    fn j_is_constant_on_the_s3_orbit(lam in lambda_in_f()) {
        let j = j_invariant(lam);
        for mu in s3_orbit(lam).unwrap() {
            prop_assert!((j_invariant(mu) - j).norm() <= 1e-6 * j.norm().max(1.0), "{} vs {}", mu, lam);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn legendre_relation(lam in lambda_in_f()) {
        let p = PeriodData::new(lam).unwrap();
        // ω₂η₁ − ω₁η₂ = 2πi, with the sign fixed by the orientation
        let lhs = p.omega2 * p.eta1 - p.omega1 * p.eta2;
        prop_assert!((lhs - C::new(0.0, 2.0 * std::f64::consts::PI)).norm() < 1e-9, "{}", lhs);
    }

    #[test]
    fn wp_is_doubly_periodic_and_zeta_quasi_periodic(lam in lambda_in_f(), s in 0.05f64..0.95, t in 0.05f64..0.95) {
        let p = PeriodData::new(lam).unwrap();
        let w = Weierstrass::new(&p).unwrap();
        let z = p.omega1 * s + p.omega2 * t;
        let v = w.wp(z).unwrap();
        let zt = w.zeta(z).unwrap();
        for (om, eta) in [(p.omega1, p.eta1), (p.omega2, p.eta2)] {
            let v2 = w.wp(z + om).unwrap();
            prop_assert!((v2 - v).norm() <= 1e-8 * v.norm().max(1.0));
            let z2 = w.zeta(z + om).unwrap();
            prop_assert!((z2 - zt - eta).norm() <= 1e-8 * (zt.norm() + eta.norm()).max(1.0));
        }
    }

    #[test]
    fn inverse_round_trips(lam in lambda_in_f(), x in -3.0f64..3.0, y in 0.01f64..3.0, below in any::<bool>()) {
        let m = AbelMap::new(lam).unwrap();
        let xi = C::new(x, if below { -y } else { y });
        let region = legendre_pfaff::abel::classify(lam, xi);
        prop_assume!(!region.is_boundary());
        let r = m.round_trip_residual(&SlitPlanePoint::new(lam, xi)).unwrap();
        prop_assert!(r.norm() <= 1e-8 * xi.norm().max(1.0), "residual {}", r.norm());
    }

    #[test]
    fn log_phi_is_path_independent(lam in lambda_in_f(), x in -2.0f64..2.0, y in 0.2f64..2.0, detour in 0.5f64..3.0) {
        // both paths stay in the upper half-plane region above everything
        let lam = if lam.im < 0.0 { lam.conj() } else { lam };
        let m = AbelMap::new(lam).unwrap();
        let xi = C::new(x, lam.im + y);
        prop_assume!(legendre_pfaff::abel::classify(lam, xi) == Region::V1);
        let p = SlitPlanePoint::new(lam, xi);
        let tol = legendre_pfaff::abel::LOG_PHI_TOL;
        let direct = m.log_phi_l(&p, tol).unwrap();
        let hi = lam.im + y + detour;
        let around = m.log_phi_along(&p, &[C::new(1.0, 0.5 * lam.im + 0.1), C::new(1.0 + detour, hi), C::new(x - detour, hi)], tol).unwrap();
        prop_assert!((direct - around).norm() <= 1e-7 * direct.norm().max(1.0), "{} vs {}", direct, around);
    }

    #[test]
    fn north_and_south_differ_by_a_sign_and_a_period(lam in lambda_in_f(), t in 0.02f64..0.98, which in 0usize..3) {
        let m = AbelMap::new(lam).unwrap();
        let xi = match which {
            0 => C::new(-10f64.powf(4.0 * t - 2.0), 0.0),
            1 => C::new(1.0 + 10f64.powf(4.0 * t - 2.0), 0.0),
            _ => lam * t,
        };
        let zn = m.z(&SlitPlanePoint::with_side(lam, xi, Side::North)).unwrap();
        let zs = m.z(&SlitPlanePoint::with_side(lam, xi, Side::South)).unwrap();
        let (w1, w2) = (m.omega1(), m.omega2());
        let hit = [1.0, -1.0].iter().any(|&s| {
            (-1..=1).any(|a: i32| (-1..=1).any(|b: i32| (zs - s * zn - w1 * a as f64 - w2 * b as f64).norm() <= 1e-7 * w1.norm().max(w2.norm())))
        });
        prop_assert!(hit, "z_N = {}, z_S = {}", zn, zs);
    }
}
