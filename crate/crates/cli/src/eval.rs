//! Single evaluations of the Weierstrass functions and the inverse map.

use crate::output::Row;
use crate::parse::ZInput;
use clap::ValueEnum;
use legendre_pfaff::abel::{AbelMap, Side, SlitPlanePoint, LOG_PHI_TOL};
use legendre_pfaff::lattice::reduce_lambda_to_f;
use legendre_pfaff::{Complex64 as C, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "verbatim")]
pub enum Function {
    #[value(name = "wp")]
    Wp,
    #[value(name = "wp_prime")]
    WpPrime,
    #[value(name = "zeta")]
    Zeta,
    #[value(name = "sigma")]
    Sigma,
    #[value(name = "phi")]
    Phi,
    #[value(name = "abel_z")]
    AbelZ,
    #[value(name = "betti")]
    Betti,
    #[value(name = "L")]
    L,
}

impl Function {
    pub fn name(self) -> &'static str {
        match self {
            Function::Wp => "wp",
            Function::WpPrime => "wp_prime",
            Function::Zeta => "zeta",
            Function::Sigma => "sigma",
            Function::Phi => "phi",
            Function::AbelZ => "abel_z",
            Function::Betti => "betti",
            Function::L => "L",
        }
    }

    /// Whether the argument is a point `ξ` of the slit plane rather than `z`.
    pub fn takes_xi(self) -> bool {
        matches!(self, Function::AbelZ | Function::Betti | Function::L)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    North,
    South,
}

pub enum Arg {
    Z(ZInput),
    Xi(C, Option<SideArg>),
}

fn route_string(pts: &[C]) -> String {
    pts.iter().map(|p| format!("{},{}", p.re, p.im)).collect::<Vec<_>>().join(";")
}

/// Evaluate at the representative of λ's orbit in the fundamental domain.
pub fn eval(f: Function, lam_in: C, arg: Arg, tol: f64) -> Result<Row, Error> {
    let (param, orbit) = reduce_lambda_to_f(lam_in)?;
    let lam = param.lambda;
    let m = AbelMap::new(lam)?;
    let (w1, w2) = (m.omega1(), m.omega2());
    let mut row = Row::new("eval")
        .with("function", f.name())
        .complex("lambda_input", lam_in)
        .complex("lambda", lam)
        .with("orbit_index", orbit as u64)
        .complex("omega1", w1)
        .complex("omega2", w2);
    match arg {
        Arg::Z(zi) => {
            let z = zi.resolve(w1, w2);
            let w = &m.wp;
            let v = match f {
                Function::Wp => w.wp(z)?,
                Function::WpPrime => w.wp_prime(z)?,
                Function::Zeta => w.zeta(z)?,
                Function::Sigma => w.sigma(z),
                Function::Phi => w.phi(z),
                _ => unreachable!("xi functions take Arg::Xi"),
            };
            let b = w.betti(z);
            row = row
                .complex("z", z)
                .with("b1", b.b1)
                .with("b2", b.b2)
                .complex("value", v)
                .with("provenance", "theta series on the reduced lattice");
        }
        Arg::Xi(xi, side) => {
            let side = match side {
                Some(SideArg::North) => Side::North,
                Some(SideArg::South) => Side::South,
                None => Side::Interior,
            };
            let p = SlitPlanePoint::with_side(lam, xi, side);
            row = row.complex("xi", xi).with("side", format!("{side:?}").to_lowercase());
            match f {
                Function::AbelZ | Function::Betti => {
                    let v = m.z_value(&p, tol)?;
                    let b = legendre_pfaff::abel::BettiCoords::of(v.z, w1, w2);
                    if f == Function::AbelZ {
                        row = row.complex("value", v.z);
                    } else {
                        row = row.with("value", b.b1.abs().max(b.b2.abs()));
                    }
                    row = row
                        .with("b1", b.b1)
                        .with("b2", b.b2)
                        .with("provenance", "integral of dX/(2 sqrt g) from -1 along the route")
                        .with("route", route_string(&v.route));
                }
                Function::L => {
                    let v = m.log_phi_l(&p, tol.max(LOG_PHI_TOL))?;
                    let route = m.route_to(C::new(1.0, 0.0), &p)?;
                    row = row
                        .complex("value", v)
                        .with("im_turns", v.im / (2.0 * std::f64::consts::PI))
                        .with("provenance", "log phi integrated from 1 along the route")
                        .with("route", route_string(&route));
                }
                _ => unreachable!("z functions take Arg::Z"),
            }
        }
    }
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn get(r: &Row, k: &str) -> f64 {
        r.get(k).and_then(|v| v.as_f64()).unwrap()
    }

    #[test]
    fn half_period_by_shorthand() {
        let r = eval(Function::Wp, C::new(0.5, 0.0), Arg::Z(ZInput::Basis(0.0, 0.5)), 1e-12).unwrap();
        assert!((get(&r, "value_re") + 0.5).abs() < 1e-10);
        assert!(get(&r, "value_im").abs() < 1e-10);
    }

    #[test]
    fn abel_z_at_one_is_a_half_period() {
        let r = eval(Function::AbelZ, C::new(0.5, 0.0), Arg::Xi(C::new(1.0, 0.0), None), 1e-12).unwrap();
        assert!((get(&r, "b1").abs() - 0.5).abs() < 1e-10 && get(&r, "b2").abs() < 1e-10);
    }

    #[test]
    fn lambda_outside_f_is_reduced() {
        let r = eval(Function::Wp, C::new(2.0, 0.0), Arg::Z(ZInput::Basis(0.3, 0.4)), 1e-12).unwrap();
        assert_eq!(get(&r, "lambda_re"), 0.5);
        assert!(r.get("orbit_index").unwrap().as_u64().unwrap() > 0);
    }
}
