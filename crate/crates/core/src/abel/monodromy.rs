//! Monodromy of `z` around the punctures `0, 1, λ`, acting on Betti pairs by
//! `(a, t): b ↦ a·b + t`.

use super::route::winding_number;
use super::{AbelMap, BettiCoords, Z_TOL};
use crate::contour::{continue_branch, integrate_sqrt_kernel, ContourPath};
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use serde::Serialize;
use std::f64::consts::PI;
use std::ops::Mul;

/// Element `(sign, translation)` of `{±1} ⋉ ℤ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct MonodromyElement {
    pub sign: i8,
    pub translation: [i64; 2],
}

impl MonodromyElement {
    pub const IDENTITY: MonodromyElement = MonodromyElement { sign: 1, translation: [0, 0] };

    pub fn new(sign: i8, translation: [i64; 2]) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be ±1");
        MonodromyElement { sign, translation }
    }

    pub fn inverse(self) -> Self {
        let s = self.sign as i64;
        MonodromyElement {
            sign: self.sign,
            translation: [-s * self.translation[0], -s * self.translation[1]],
        }
    }

    /// `b ↦ sign·b + translation`.
    pub fn act(self, b: [f64; 2]) -> [f64; 2] {
        let s = self.sign as f64;
        [s * b[0] + self.translation[0] as f64, s * b[1] + self.translation[1] as f64]
    }
}

/// `(x₁, y₁)·(x₂, y₂) = (x₁x₂, y₁ + x₁y₂)`: first apply the right factor,
/// then the left one, as for continuation along the concatenated loop.
impl Mul for MonodromyElement {
    type Output = MonodromyElement;
    fn mul(self, o: MonodromyElement) -> MonodromyElement {
        let s = self.sign as i64;
        MonodromyElement {
            sign: self.sign * o.sign,
            translation: [self.translation[0] + s * o.translation[0], self.translation[1] + s * o.translation[1]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Puncture {
    Zero,
    One,
    Lambda,
}

impl Puncture {
    pub const ALL: [Puncture; 3] = [Puncture::Zero, Puncture::One, Puncture::Lambda];

    pub fn point(self, lam: C) -> C {
        match self {
            Puncture::Zero => C::default(),
            Puncture::One => C::new(1.0, 0.0),
            Puncture::Lambda => lam,
        }
    }

    pub fn generator(self) -> Generator {
        match self {
            Puncture::Zero => Generator::G1,
            Puncture::One => Generator::G2,
            Puncture::Lambda => Generator::G3,
        }
    }
}

/// Free generators `γ₁, γ₂, γ₃` (loops around 0, 1, λ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    G1,
    G2,
    G3,
}

/// A letter of a word in the free group: a generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Letter {
    pub gen: Generator,
    pub inverse: bool,
}

impl Generator {
    /// The tabulated image: `(−1,(0,1))`, `(−1,(1,0))`, `(−1,(1,1))`.
    pub fn rho(self) -> MonodromyElement {
        match self {
            Generator::G1 => MonodromyElement::new(-1, [0, 1]),
            Generator::G2 => MonodromyElement::new(-1, [1, 0]),
            Generator::G3 => MonodromyElement::new(-1, [1, 1]),
        }
    }
}

/// Product of the tabulated images along the word, leftmost letter first.
pub fn monodromy_rho(word: &[Letter]) -> MonodromyElement {
    word.iter().fold(MonodromyElement::IDENTITY, |acc, l| {
        let g = l.gen.rho();
        acc * if l.inverse { g.inverse() } else { g }
    })
}

/// Parse a word such as `g1 g2^-1 g3'`: letters `g1`, `g2`, `g3`, separated
/// by whitespace, commas or `*`, each optionally followed by `^-1` or `'`
/// for the inverse.
pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
    s.split(|c: char| c.is_whitespace() || c == ',' || c == '*')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let lower = t.to_ascii_lowercase();
            let (base, inverse) = match lower.strip_suffix("^-1").or_else(|| lower.strip_suffix('\'')) {
                Some(b) => (b, true),
                None => (lower.as_str(), false),
            };
            let gen = match base {
                "g1" => Generator::G1,
                "g2" => Generator::G2,
                "g3" => Generator::G3,
                _ => return Err(Error::Parse(format!("unknown letter {t:?}; expected g1, g2, g3 with optional ^-1"))),
            };
            Ok(Letter { gen, inverse })
        })
        .collect()
}

/// Closed 64-gon around one puncture, starting and ending at a base point
/// inside `X_λ`. Around 0 the base lies in the sector between the negative
/// axis and `L_λ`; around 1 it lies above 1; around λ it lies off `L_λ` on
/// the `+iλ` side.
pub fn standard_loop(lam: C, puncture: Puncture) -> Vec<C> {
    let (centre, r, theta0) = match puncture {
        Puncture::Zero => (C::default(), 0.5 * lam.norm().min(1.0), 0.5 * (lam.arg() + PI)),
        Puncture::One => (C::new(1.0, 0.0), 0.5 * (1.0 - lam).norm().min(1.0), 0.5 * PI),
        Puncture::Lambda => (lam, 0.5 * lam.norm().min((1.0 - lam).norm()), lam.arg() + 0.5 * PI),
    };
    let n = 64;
    (0..=n)
        .map(|k| centre + C::from_polar(r, theta0 + 2.0 * PI * (k % n) as f64 / n as f64))
        .collect()
}

/// Result of continuing `z` once around a closed polyline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoopContinuation {
    pub element: MonodromyElement,
    /// Distance of the translation's Betti coordinates from the nearest
    /// integers.
    pub residual: f64,
    pub z_start: C,
    pub z_end: C,
}

impl AbelMap {
    /// Continue `z` (with its square root) around the closed polyline `pts`,
    /// whose first point must lie in `X_λ`, and read off `(a, t)` from
    /// `z_end = a·z_start + t`.
    pub fn continue_around(&self, pts: &[C]) -> Result<LoopContinuation> {
        let base = pts[0];
        if pts.len() < 3 || (pts[pts.len() - 1] - base).norm() > 1e-12 * base.norm().max(1.0) {
            return Err(Error::OutOfDomain(base, "loop must be closed".into()));
        }
        let z_start = self.z_at(base)?;
        let seed = self.root_at(base, super::Side::Interior)?;
        let path = ContourPath::polyline(pts, seed);
        let integral = integrate_sqrt_kernel(&path, |_| C::new(1.0, 0.0), &self.bp, Z_TOL)?.value;
        let end_root = continue_branch(&path, &self.bp)?;
        let a: i8 = if (end_root / seed).re > 0.0 { 1 } else { -1 };
        let z_end = z_start - integral;
        let t = z_end - a as f64 * z_start;
        let b = BettiCoords::of(t, self.omega1(), self.omega2());
        let (m, n) = (b.b1.round(), b.b2.round());
        let residual = (b.b1 - m).abs().max((b.b2 - n).abs());
        Ok(LoopContinuation {
            element: MonodromyElement::new(a, [m as i64, n as i64]),
            residual,
            z_start,
            z_end,
        })
    }

    /// Monodromy of a loop that winds once around exactly one puncture.
    pub fn monodromy_numeric(&self, pts: &[C]) -> Result<(Puncture, LoopContinuation)> {
        let w: Vec<f64> = Puncture::ALL.iter().map(|p| winding_number(pts, p.point(self.lambda))).collect();
        let wi: Vec<i64> = w.iter().map(|x| x.round() as i64).collect();
        let clean = w.iter().zip(&wi).all(|(x, k)| (x - *k as f64).abs() < 1e-6);
        let ones: Vec<usize> = (0..3).filter(|&i| wi[i].abs() == 1).collect();
        if !clean || ones.len() != 1 || wi.iter().filter(|&&k| k != 0).count() != 1 {
            return Err(Error::AmbiguousLoop([wi[0], wi[1], wi[2]]));
        }
        let cont = self.continue_around(pts)?;
        if cont.residual > 1e-6 {
            return Err(Error::NoConvergence(format!("translation off the lattice by {:.3e}", cont.residual)));
        }
        Ok((Puncture::ALL[ones[0]], cont))
    }
}

/// Numeric monodromy around each puncture next to the tabulated image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonodromyRecord {
    pub puncture: Puncture,
    pub numeric: MonodromyElement,
    pub tabulated: MonodromyElement,
    pub residual: f64,
    pub matches: bool,
    /// Whether the numeric element equals the tabulated one after
    /// `(a,(m,n)) ↦ (a,(−m,n))`, the change of basis `ω₁ ↦ −ω₁`.
    pub matches_up_to_omega1_sign: bool,
}

pub fn monodromy_table_check(lam: C) -> Result<Vec<MonodromyRecord>> {
    let m = AbelMap::new(lam)?;
    Puncture::ALL
        .iter()
        .map(|&p| {
            let (found, cont) = m.monodromy_numeric(&standard_loop(lam, p))?;
            debug_assert_eq!(found, p);
            let tab = p.generator().rho();
            let e = cont.element;
            Ok(MonodromyRecord {
                puncture: p,
                numeric: e,
                tabulated: tab,
                residual: cont.residual,
                matches: e == tab,
                matches_up_to_omega1_sign: e.sign == tab.sign && e.translation == [-tab.translation[0], tab.translation[1]],
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_parse() {
        let w = parse_word("g1 g2^-1,G3'").unwrap();
        assert_eq!(monodromy_rho(&w), Generator::G1.rho() * Generator::G2.rho().inverse() * Generator::G3.rho().inverse());
        assert!(parse_word("").unwrap().is_empty());
        assert!(matches!(parse_word("g4"), Err(Error::Parse(_))));
    }

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn l(gen: Generator) -> Letter {
        Letter { gen, inverse: false }
    }

    #[test]
    fn table_words() {
        assert_eq!(monodromy_rho(&[]), MonodromyElement::IDENTITY);
        assert_eq!(monodromy_rho(&[l(Generator::G1)]), MonodromyElement::new(-1, [0, 1]));
        assert_eq!(monodromy_rho(&[l(Generator::G1), l(Generator::G1)]), MonodromyElement::IDENTITY);
    }

    #[test]
    fn law_is_associative_and_inverse_works() {
        let g = [MonodromyElement::new(-1, [2, -1]), MonodromyElement::new(1, [3, 5]), MonodromyElement::new(-1, [0, 7])];
        assert_eq!((g[0] * g[1]) * g[2], g[0] * (g[1] * g[2]));
        for x in g {
            assert_eq!(x * x.inverse(), MonodromyElement::IDENTITY);
            assert_eq!(x.inverse() * x, MonodromyElement::IDENTITY);
        }
    }

    #[test]
    fn loops_are_reflections_about_twice_the_limit() {
        // Each loop flips √g, so z ↦ 2z(e) − z with z(0) = ω₂/2,
        // z(1) = −ω₁/2, z(λ) = (ω₂ − ω₁)/2.
        for lam in [c(0.3, 0.2), c(0.2, -0.4), c(0.01, 0.0)] {
            let m = AbelMap::new(lam).unwrap();
            let expect = [[0, 1], [-1, 0], [-1, 1]];
            for (p, e) in Puncture::ALL.iter().zip(expect) {
                let (found, cont) = m.monodromy_numeric(&standard_loop(lam, *p)).unwrap();
                assert_eq!(found, *p);
                assert!(cont.residual < 1e-8, "{lam} {p:?}: {}", cont.residual);
                assert_eq!(cont.element, MonodromyElement::new(-1, e), "{lam} {p:?}");
            }
        }
    }

    #[test]
    fn concatenated_loops_compose() {
        let lam = c(0.3, 0.2);
        let m = AbelMap::new(lam).unwrap();
        let base = c(0.4, 0.9);
        let lasso = |p: Puncture| {
            let lp = standard_loop(lam, p);
            let mut v = vec![base];
            v.extend_from_slice(&lp);
            v.push(base);
            v
        };
        let (a, b) = (lasso(Puncture::One), lasso(Puncture::Lambda));
        let mut ab = a.clone();
        ab.extend_from_slice(&b[1..]);
        let ea = m.continue_around(&a).unwrap().element;
        let eb = m.continue_around(&b).unwrap().element;
        let eab = m.continue_around(&ab).unwrap().element;
        assert_eq!(eab, ea * eb);
    }

    #[test]
    fn two_punctures_are_ambiguous() {
        let m = AbelMap::new(c(0.3, 0.2)).unwrap();
        let big: Vec<C> = (0..=32).map(|k| c(0.5, 0.1) + C::from_polar(0.7, 2.0 * PI * (k % 32) as f64 / 32.0)).collect();
        assert!(matches!(m.monodromy_numeric(&big), Err(Error::AmbiguousLoop(_))));
    }
}
