//! Format algebra for pfaffian chains and piecewise semi/sub-pfaffian sets,
//! the Khovanskii-type zero bound, and the fundamental-domain-change
//! intersection count.

use crate::error::{Error, Result};
use crate::periods::PeriodData;
use crate::weierstrass::Weierstrass;
use num_bigint::BigUint;
use num_complex::Complex64 as C;
use rayon::prelude::*;
use serde::Serialize;

/// Largest Betti translation used by the graph constructions.
pub const BETTI_SHIFT: u64 = 42;
/// Largest `|k|` for the `2πik` ambiguity of `𝓛`.
pub const LOG_SHIFT: u64 = 384;
/// Largest `|l|` for the `2πil` ambiguity of `ψ_n`.
pub const PSI_SHIFT: u64 = 515;
pub const REGIONS: u64 = 10;
pub const BRANCHES: u64 = 2;
pub const HALF_PERIOD_POINTS: u64 = 3;

/// The constant stated in front of `T¹¹` for zeros of `P(z, ℘(z))` on a
/// fundamental domain.
pub const STATED_ZERO_CONSTANT: f64 = 7.5373e14;
pub const MIN_DEGREE: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    MacintyreInverse,
    Exponential,
    ZetaExtended,
    PhiExtended,
}

impl ChainKind {
    pub const ALL: [ChainKind; 4] = [
        ChainKind::MacintyreInverse,
        ChainKind::Exponential,
        ChainKind::ZetaExtended,
        ChainKind::PhiExtended,
    ];
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainSpec {
    pub name: String,
    pub order: u64,
    pub alpha: u64,
    pub beta: u64,
    pub domain: String,
}

impl ChainSpec {
    /// Concatenate two chains on a product domain: orders add, degrees are
    /// the larger of the two.
    pub fn join(&self, other: &ChainSpec) -> ChainSpec {
        ChainSpec {
            name: format!("{}+{}", self.name, other.name),
            order: self.order + other.order,
            alpha: self.alpha.max(other.alpha),
            beta: self.beta.max(other.beta),
            domain: format!("{} x {}", self.domain, other.domain),
        }
    }
}

pub fn catalog_chain(kind: ChainKind) -> ChainSpec {
    let (name, order, alpha, beta, domain) = match kind {
        // f1..f5 from A, B of g, then Re z, Im z
        ChainKind::MacintyreInverse => ("macintyre_inverse", 7, 9, 1, "V_j"),
        // exp x, tan(y/3), cos(y/3); Re/Im exp are cubic in sin, cos of y/3
        ChainKind::Exponential => ("exponential", 3, 2, 6, "R x [-pi, pi)"),
        // plus Re, Im of the second-kind integral
        ChainKind::ZetaExtended => ("zeta_extended", 9, 9, 1, "V_j"),
        // plus Re, Im of the phi-logarithm
        ChainKind::PhiExtended => ("phi_extended", 11, 9, 1, "V_j"),
    };
    ChainSpec {
        name: name.into(),
        order,
        alpha,
        beta,
        domain: domain.into(),
    }
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PfaffianFormat {
    pub r: u64,
    pub alpha: u64,
    pub beta: u64,
    pub n: u64,
    #[serde(serialize_with = "ser_big")]
    pub L: BigUint,
    pub M: u64,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl PfaffianFormat {
    pub fn tuple_string(&self) -> String {
        format!("({},{},{},{},{},{})", self.r, self.alpha, self.beta, self.n, self.L, self.M)
    }

    /// Union of two piecewise sets in the same ambient space: pieces add.
    pub fn union(&self, other: &PfaffianFormat) -> Result<PfaffianFormat> {
        if self.n != other.n {
            return Err(Error::OutOfDomain(C::default(), format!("ambient dimensions {} and {} differ", self.n, other.n)));
        }
        Ok(PfaffianFormat {
            r: self.r.max(other.r),
            alpha: self.alpha.max(other.alpha),
            beta: self.beta.max(other.beta),
            n: self.n,
            L: &self.L + &other.L,
            M: self.M.max(other.M),
        })
    }

    /// A projection keeps the format of the set it projects.
    pub fn projected(&self) -> PfaffianFormat {
        self.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremFunction {
    Wp,
    Zeta,
    Phi,
}

impl TheoremFunction {
    pub const ALL: [TheoremFunction; 3] = [TheoremFunction::Wp, TheoremFunction::Zeta, TheoremFunction::Phi];
}

fn translations(bound: u64) -> BigUint {
    BigUint::from(2 * bound + 1)
}

/// Number of pieces: regions × branches × translation choices, plus the
/// explicit half-period points.
pub fn piece_count(which: TheoremFunction) -> BigUint {
    let mut l = BigUint::from(REGIONS * BRANCHES) * translations(BETTI_SHIFT) * translations(BETTI_SHIFT);
    if which == TheoremFunction::Phi {
        l = l * translations(LOG_SHIFT) * translations(PSI_SHIFT);
    }
    l + BigUint::from(HALF_PERIOD_POINTS)
}

/// Format of the graph on a fundamental domain, assembled from the chains,
/// the coordinates of each piece and the complex equations cutting it out.
pub fn compose_theorem_format(which: TheoremFunction) -> PfaffianFormat {
    // (chain, complex coordinates, complex equations)
    let (chain, coords, eqs) = match which {
        // (z, ℘)
        TheoremFunction::Wp => (catalog_chain(ChainKind::MacintyreInverse), 2, 1),
        // (z, ℘, ζ)
        TheoremFunction::Zeta => (catalog_chain(ChainKind::ZetaExtended), 3, 2),
        // (z, ψ, 𝓛, ℘, φ), with one exponential chain for each of ψ and 𝓛
        TheoremFunction::Phi => {
            let e = catalog_chain(ChainKind::Exponential);
            (catalog_chain(ChainKind::PhiExtended).join(&e).join(&e), 5, 4)
        }
    };
    PfaffianFormat {
        r: chain.order,
        alpha: chain.alpha,
        beta: chain.beta,
        n: 2 * coords,
        L: piece_count(which),
        M: 2 * eqs,
    }
}

/// Bound on the connected components of `{f₁ = … = f_k = 0}` for pfaffian
/// `f_i` of order `r` and degree `(α, β)` in `n` variables on a simple
/// domain: `2^{r(r−1)/2+1} β (α+2β−1)^{n−1} ((2n−1)(α+β) − 2n + 2)^r`.
pub fn component_bound(r: u64, alpha: u64, beta: u64, n: u64) -> BigUint {
    let pos = |x: i128| BigUint::from(x.max(0) as u128);
    let (a, b, nn) = (alpha as i128, beta as i128, n as i128);
    let two = BigUint::from(2u32).pow((r * r.saturating_sub(1) / 2 + 1) as u32);
    let mid = pos(a + 2 * b - 1).pow(n.saturating_sub(1) as u32);
    let last = pos((2 * nn - 1) * (a + b) - 2 * nn + 2).pow(r as u32);
    two * BigUint::from(beta) * mid * last
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct ZeroBound {
    pub T: u64,
    #[serde(serialize_with = "ser_big")]
    pub per_piece: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub value: BigUint,
    /// `value / T¹¹`.
    pub coefficient: f64,
    /// `STATED_ZERO_CONSTANT · T¹¹`.
    pub stated: f64,
    pub degree_too_small: bool,
}

impl ZeroBound {
    pub fn within_stated(&self) -> bool {
        big_to_f64(&self.value) <= self.stated
    }

    pub fn ratio_to_stated(&self) -> f64 {
        big_to_f64(&self.value) / self.stated
    }
}

pub fn big_to_f64(v: &BigUint) -> f64 {
    v.to_string().parse().unwrap_or(f64::INFINITY)
}

/// Zeros of `P(z, f(z))` with `deg P ≤ T`, for `f` with a graph of the
/// given format: per piece, the `M` defining equations and `Re P = Im P = 0`
/// have degree at most `max(β, T)`, and pieces add. Values below the
/// minimal degree are computed and flagged.
#[allow(non_snake_case)]
pub fn khovanskii_zero_bound(format: &PfaffianFormat, T: u64) -> ZeroBound {
    let beta = format.beta.max(T);
    let per_piece = component_bound(format.r, format.alpha, beta, format.n);
    let value = &per_piece * &format.L;
    let t11 = (T as f64).powi(11);
    ZeroBound {
        T,
        coefficient: big_to_f64(&value) / t11,
        stated: STATED_ZERO_CONSTANT * t11,
        per_piece,
        value,
        degree_too_small: T < MIN_DEGREE,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Intersection {
    /// Parameters `r` on `{rω₂}` and `s` on `{s(aω₁ + bω₂)}`.
    pub r: f64,
    pub s: f64,
    pub point: C,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub lambda: C,
    pub matrix: [i64; 4],
    pub n: i64,
    pub count: usize,
    pub floor: i64,
    pub intersections: Vec<Intersection>,
}

pub const MAX_GROWTH_ENTRY: i64 = 15;
const R_MIN: f64 = 0.02;

fn seg_cross(p0: C, p1: C, q0: C, q1: C) -> Option<(f64, f64)> {
    let d = p1 - p0;
    let e = q1 - q0;
    let den = d.re * e.im - d.im * e.re;
    if den == 0.0 {
        return None;
    }
    let w = q0 - p0;
    let t = (w.re * e.im - w.im * e.re) / den;
    let u = (w.re * d.im - w.im * d.re) / den;
    ((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u)).then_some((t, u))
}

/// Count the intersections of `℘({rω₂})` and `℘({r(aω₁ + bω₂)})` for a
/// unimodular `(a, b, c, d)`. Both curves are symmetric under `r ↦ 1 − r`,
/// so each is traced on `[R_MIN, ½]`, with `grid` samples per unit of
/// winding. Crossings of the polylines are refined by Newton in `(r, s)`
/// and merged when closer than `1e-7`.
pub fn domain_change_growth(lam: C, m: [i64; 4], grid: usize) -> Result<GrowthReport> {
    let [a, b, c, d] = m;
    if a * d - b * c != 1 {
        return Err(Error::InvalidUnimodular(format!("ad - bc = {}", a * d - b * c)));
    }
    if m == [1, 0, 0, 1] {
        return Err(Error::InvalidUnimodular("identity: the two curves coincide".into()));
    }
    let n = m.iter().map(|x| x.abs()).max().unwrap();
    if n > MAX_GROWTH_ENTRY {
        return Err(Error::TracingBudgetExceeded(format!("max entry {n} > {MAX_GROWTH_ENTRY}")));
    }
    if grid < 16 || grid > 1 << 16 {
        return Err(Error::TracingBudgetExceeded(format!("grid {grid} outside [16, 65536]")));
    }
    let p = PeriodData::new(lam)?;
    let w = Weierstrass::new(&p)?;
    let v1 = p.omega2;
    let v2 = p.omega1 * a as f64 + p.omega2 * b as f64;
    let trace = |v: C, k: usize| -> Result<Vec<C>> {
        (0..=k)
            .into_par_iter()
            .map(|i| w.wp(v * (R_MIN + (0.5 - R_MIN) * i as f64 / k as f64)))
            .collect()
    };
    let k1 = grid;
    let k2 = grid * (a.unsigned_abs() + b.unsigned_abs()).max(1) as usize;
    let c1 = trace(v1, k1)?;
    let c2 = trace(v2, k2)?;
    let par = |i: usize, k: usize, t: f64| R_MIN + (0.5 - R_MIN) * (i as f64 + t) / k as f64;
    let mut raw: Vec<(f64, f64)> = (0..k1)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (p0, p1) = (c1[i], c1[i + 1]);
            let (lo_re, hi_re) = (p0.re.min(p1.re), p0.re.max(p1.re));
            let (lo_im, hi_im) = (p0.im.min(p1.im), p0.im.max(p1.im));
            let c2 = &c2;
            (0..k2).filter_map(move |j| {
                let (q0, q1) = (c2[j], c2[j + 1]);
                if q0.re.max(q1.re) < lo_re || q0.re.min(q1.re) > hi_re || q0.im.max(q1.im) < lo_im || q0.im.min(q1.im) > hi_im {
                    return None;
                }
                seg_cross(p0, p1, q0, q1).map(|(t, u)| (par(i, k1, t), par(j, k2, u)))
            })
        })
        .collect();
    raw.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut found: Vec<Intersection> = Vec::new();
    for (r0, s0) in raw {
        let hit = refine(&w, v1, v2, r0, s0)?;
        if !found.iter().any(|f| (f.point - hit.point).norm() <= 1e-7 * hit.point.norm().max(1.0)) {
            found.push(hit);
        }
    }
    Ok(GrowthReport {
        lambda: lam,
        matrix: m,
        n,
        count: found.len(),
        floor: (n - 1) / 2,
        intersections: found,
    })
}

/// Newton on `℘(rv₁) − ℘(sv₂) = 0` in the real unknowns `(r, s)`.
fn refine(w: &Weierstrass, v1: C, v2: C, mut r: f64, mut s: f64) -> Result<Intersection> {
    let mut res = f64::INFINITY;
    for _ in 0..30 {
        let f = w.wp(r * v1)? - w.wp(s * v2)?;
        res = f.norm();
        if res <= 1e-12 * w.wp(r * v1)?.norm().max(1.0) {
            break;
        }
        let jr = w.wp_prime(r * v1)? * v1;
        let js = -w.wp_prime(s * v2)? * v2;
        let det = jr.re * js.im - jr.im * js.re;
        if det.abs() < 1e-300 {
            break;
        }
        let dr = (f.re * js.im - f.im * js.re) / det;
        let ds = (jr.re * f.im - jr.im * f.re) / det;
        r -= dr;
        s -= ds;
    }
    Ok(Intersection { r, s, point: w.wp(r * v1)?, residual: res })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog() {
        let m = catalog_chain(ChainKind::MacintyreInverse);
        assert_eq!((m.order, m.alpha, m.beta), (7, 9, 1));
        let e = catalog_chain(ChainKind::Exponential);
        assert_eq!((e.order, e.alpha, e.beta), (3, 2, 6));
        let z = catalog_chain(ChainKind::ZetaExtended);
        assert_eq!((z.order, z.alpha, z.beta), (9, 9, 1));
    }

    #[test]
    fn theorem_tuples() {
        let t: Vec<String> = TheoremFunction::ALL.iter().map(|&w| compose_theorem_format(w).tuple_string()).collect();
        assert_eq!(t, ["(7,9,1,4,144503,2)", "(9,9,1,6,144503,4)", "(17,9,6,10,114565235503,8)"]);
    }

    #[test]
    fn union_adds_pieces() {
        let f = compose_theorem_format(TheoremFunction::Wp);
        let u = f.union(&f).unwrap();
        assert_eq!(u.L, BigUint::from(2 * 144503u64));
        assert_eq!(f.projected(), f);
        assert!(f.union(&compose_theorem_format(TheoremFunction::Zeta)).is_err());
    }

    #[test]
    fn chain_free_bound_is_bezout_like() {
        // 2β(2β−1)^{n−1}: for one variable, twice the degree
        assert_eq!(component_bound(0, 0, 5, 1), BigUint::from(10u32));
        assert_eq!(component_bound(0, 0, 3, 2), BigUint::from(2 * 3 * 5u32));
    }

    #[test]
    fn zero_bound_flags_small_degree() {
        let f = compose_theorem_format(TheoremFunction::Wp);
        assert!(khovanskii_zero_bound(&f, 10).degree_too_small);
        assert!(!khovanskii_zero_bound(&f, 20).degree_too_small);
    }

    #[test]
    fn growth_rejects_bad_input() {
        let lam = C::new(0.3, 0.0);
        assert!(matches!(domain_change_growth(lam, [1, 0, 0, 1], 256), Err(Error::InvalidUnimodular(_))));
        assert!(matches!(domain_change_growth(lam, [2, 1, 1, 2], 256), Err(Error::InvalidUnimodular(_))));
        assert!(matches!(domain_change_growth(lam, [16, 1, 15, 1], 256), Err(Error::TracingBudgetExceeded(_))));
    }

    #[test]
    fn growth_counts() {
        let lam = C::new(0.3, 0.0);
        let c5 = domain_change_growth(lam, [5, 1, 4, 1], 512).unwrap();
        let c11 = domain_change_growth(lam, [11, 1, 10, 1], 512).unwrap();
        assert!(c5.count >= 2 && c11.count >= 5 && c11.count > c5.count, "{} {}", c5.count, c11.count);
        assert!(c11.intersections.iter().all(|i| i.residual < 1e-9));
    }
}
