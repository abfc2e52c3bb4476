//! Parsing of complex numbers, lattice shorthand and punctures.

use legendre_pfaff::abel::Puncture;
use num_complex::Complex64 as C;

/// `re,im` or a bare real part.
pub fn complex(s: &str) -> Result<C, String> {
    let s = s.trim();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("cannot parse {t:?} as a number in {s:?}"));
    let c = match s.split_once(',') {
        Some((re, im)) => C::new(num(re)?, num(im)?),
        None => C::new(num(s)?, 0.0),
    };
    if !c.re.is_finite() || !c.im.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(c)
}

/// A point `z`: either `re,im`, or `b1,b2@basis` for `b1·ω₁ + b2·ω₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZInput {
    Plain(C),
    Basis(f64, f64),
}

impl ZInput {
    pub fn resolve(self, w1: C, w2: C) -> C {
        match self {
            ZInput::Plain(z) => z,
            ZInput::Basis(b1, b2) => w1 * b1 + w2 * b2,
        }
    }
}

pub fn z_input(s: &str) -> Result<ZInput, String> {
    match s.trim().strip_suffix("@basis") {
        Some(b) => {
            let c = complex(b)?;
            Ok(ZInput::Basis(c.re, c.im))
        }
        None => complex(s).map(ZInput::Plain),
    }
}

pub fn puncture(s: &str) -> Result<Puncture, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "0" | "zero" => Ok(Puncture::Zero),
        "1" | "one" => Ok(Puncture::One),
        "lambda" | "l" => Ok(Puncture::Lambda),
        _ => Err(format!("unknown puncture {s:?}; expected 0, 1 or lambda")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(complex("0.3,0.2").unwrap(), C::new(0.3, 0.2));
        assert_eq!(complex(" -1e-3 , 2 ").unwrap(), C::new(-1e-3, 2.0));
        assert_eq!(complex("5").unwrap(), C::new(5.0, 0.0));
        assert!(complex("1,x").is_err());
        assert!(complex("inf,0").is_err());
    }

    #[test]
    fn basis_shorthand() {
        let w1 = C::new(2.0, 0.0);
        let w2 = C::new(0.0, 3.0);
        assert_eq!(z_input("0,0.5@basis").unwrap().resolve(w1, w2), C::new(0.0, 1.5));
        assert_eq!(z_input("1,1").unwrap().resolve(w1, w2), C::new(1.0, 1.0));
    }
}
