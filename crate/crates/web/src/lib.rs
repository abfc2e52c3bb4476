//! Browser bindings for three operations: `℘, ℘′, ζ` at a lattice point,
//! the inverse map `ξ ↦ z` with its Betti coordinates, and the monodromy of
//! a word. Each returns a JSON string; errors become JS exceptions.

use legendre_pfaff::abel::{monodromy_rho, parse_word, AbelMap, BettiCoords, Side, SlitPlanePoint, Z_TOL};
use legendre_pfaff::lattice::reduce_lambda_to_f;
use legendre_pfaff::{Complex64 as C, Error};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn cx(z: C) -> Value {
    json!([z.re, z.im])
}

fn reduced(lam: C) -> Result<(AbelMap, usize), Error> {
    let (p, orbit) = reduce_lambda_to_f(lam)?;
    Ok((AbelMap::new(p.lambda)?, orbit))
}

/// `℘`, `℘′` and `ζ` at `z = b1·ω₁ + b2·ω₂` on the reduced lattice.
pub fn wp_json(lam_re: f64, lam_im: f64, b1: f64, b2: f64) -> Result<String, Error> {
    let (m, orbit) = reduced(C::new(lam_re, lam_im))?;
    let (w1, w2) = (m.omega1(), m.omega2());
    let z = w1 * b1 + w2 * b2;
    Ok(json!({
        "lambda": cx(m.lambda),
        "orbit_index": orbit,
        "omega1": cx(w1),
        "omega2": cx(w2),
        "tau": cx(w2 / w1),
        "z": cx(z),
        "wp": cx(m.wp.wp(z)?),
        "wp_prime": cx(m.wp.wp_prime(z)?),
        "zeta": cx(m.wp.zeta(z)?),
    })
    .to_string())
}

/// `z(ξ)` with its route and Betti coordinates; `side` is `north`, `south`
/// or empty for an interior point.
pub fn abel_json(lam_re: f64, lam_im: f64, xi_re: f64, xi_im: f64, side: &str) -> Result<String, Error> {
    let (m, orbit) = reduced(C::new(lam_re, lam_im))?;
    let side = match side.trim().to_ascii_lowercase().as_str() {
        "north" | "n" => Side::North,
        "south" | "s" => Side::South,
        "" | "interior" => Side::Interior,
        other => return Err(Error::Parse(format!("unknown side {other:?}"))),
    };
    let xi = C::new(xi_re, xi_im);
    let p = SlitPlanePoint::with_side(m.lambda, xi, side);
    let v = m.z_value(&p, Z_TOL)?;
    let b = BettiCoords::of(v.z, m.omega1(), m.omega2());
    let check = m.wp.wp(v.z)? + m.shift();
    Ok(json!({
        "lambda": cx(m.lambda),
        "orbit_index": orbit,
        "region": format!("{:?}", p.region),
        "z": cx(v.z),
        "b1": b.b1,
        "b2": b.b2,
        "route": v.route.iter().map(|&q| cx(q)).collect::<Vec<_>>(),
        "round_trip": (check - xi).norm(),
    })
    .to_string())
}

/// Image of a word in `g1, g2, g3` (with `^-1` for inverses).
pub fn monodromy_json(word: &str) -> Result<String, Error> {
    let letters = parse_word(word)?;
    let e = monodromy_rho(&letters);
    Ok(json!({
        "letters": letters.len(),
        "sign": e.sign,
        "translation": e.translation,
        "element": format!("({},({},{}))", e.sign, e.translation[0], e.translation[1]),
    })
    .to_string())
}

fn js(r: Result<String, Error>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&format!("{}: {e}", e.code())))
}

#[wasm_bindgen]
pub fn wp_at(lam_re: f64, lam_im: f64, b1: f64, b2: f64) -> Result<String, JsError> {
    js(wp_json(lam_re, lam_im, b1, b2))
}

#[wasm_bindgen]
pub fn abel_at(lam_re: f64, lam_im: f64, xi_re: f64, xi_im: f64, side: &str) -> Result<String, JsError> {
    js(abel_json(lam_re, lam_im, xi_re, xi_im, side))
}

#[wasm_bindgen]
pub fn monodromy(word: &str) -> Result<String, JsError> {
    js(monodromy_json(word))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn half_period_value() {
        let v = parse(&wp_json(0.3, 0.2, 0.0, 0.5).unwrap());
        // ℘(ω₂/2) = −(λ+1)/3
        assert!((v["wp"][0].as_f64().unwrap() + 1.3 / 3.0).abs() < 1e-10);
        assert!((v["wp"][1].as_f64().unwrap() + 0.2 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn abel_round_trip() {
        let v = parse(&abel_json(0.3, 0.2, 2.0, 1.5, "").unwrap());
        assert!(v["round_trip"].as_f64().unwrap() < 1e-9);
        assert_eq!(v["region"], "V1");
        assert!(abel_json(0.3, 0.2, -1.0, 0.0, "").is_err());
        assert!(abel_json(0.3, 0.2, -1.0, 0.0, "north").is_ok());
    }

    #[test]
    fn word_square() {
        let v = parse(&monodromy_json("g1 g1").unwrap());
        assert_eq!(v["element"], "(1,(0,0))");
        assert!(monodromy_json("x").is_err());
    }
}
