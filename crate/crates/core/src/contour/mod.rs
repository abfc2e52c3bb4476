//! Contour integrals of `p(X) dX / (2√(X(X−1)(X−λ)))` along polylines, with
//! the square root continued factor by factor along the path.

mod gauss;
mod iterated;
mod series;
mod tanh_sinh;

pub use iterated::{iterated_integral, IteratedResult};
pub use series::sum_power_series;
pub use tanh_sinh::{integrate_adaptive, integrate_unit, UnitQuadrature};

use crate::error::{Error, Result};
use num_complex::Complex64 as C;

pub const DEFAULT_GUARD: f64 = 1e-8;
pub const DEFAULT_TOL: f64 = 1e-10;

/// Endpoints closer than this (relative to the local scale) to a branch
/// point are treated as lying on it.
const SNAP: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Vertex {
    Finite(C),
    /// Point at infinity reached along the given direction. Only allowed as
    /// the first or last vertex.
    Infinite(C),
}

impl Vertex {
    pub fn finite(self) -> Option<C> {
        match self {
            Vertex::Finite(x) => Some(x),
            Vertex::Infinite(_) => None,
        }
    }
}

impl From<C> for Vertex {
    fn from(x: C) -> Self {
        Vertex::Finite(x)
    }
}

/// The three roots of the cubic under the square root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoints(pub [C; 3]);

impl BranchPoints {
    pub fn legendre(lam: C) -> Self {
        BranchPoints([C::new(0.0, 0.0), C::new(1.0, 0.0), lam])
    }

    pub fn cubic(&self, x: C) -> C {
        (x - self.0[0]) * (x - self.0[1]) * (x - self.0[2])
    }

    fn scale(&self) -> f64 {
        self.0.iter().map(|e| e.norm()).fold(1.0, f64::max)
    }

    /// Index of the branch point that `x` sits on, if any.
    fn on_branch_point(&self, x: C) -> Option<usize> {
        let snap = SNAP * self.scale();
        self.0.iter().position(|e| (x - e).norm() <= snap)
    }
}

/// Values of `√(X − e_k)` for the three branch points; their product is the
/// square root of the cubic on the tracked sheet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sheet(pub [C; 3]);

impl Sheet {
    pub fn root(&self) -> C {
        self.0[0] * self.0[1] * self.0[2]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourPath {
    pub vertices: Vec<Vertex>,
    /// Approximate value of the square root near the start of the path. Only
    /// its sign relative to the true value matters; it is compared at the
    /// first vertex that is not a branch point (or at the middle of the first
    /// segment when both its ends are branch points).
    pub branch_seed: C,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: C,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

impl ContourPath {
    pub fn new(vertices: Vec<Vertex>, branch_seed: C) -> Self {
        ContourPath {
            vertices,
            branch_seed,
        }
    }

    pub fn polyline(points: &[C], branch_seed: C) -> Self {
        Self::new(points.iter().map(|&p| Vertex::Finite(p)).collect(), branch_seed)
    }

    pub fn segment(a: C, b: C, branch_seed: C) -> Self {
        Self::polyline(&[a, b], branch_seed)
    }

    /// Ray from `a` to infinity in direction `dir`.
    pub fn ray(a: C, dir: C, branch_seed: C) -> Self {
        Self::new(vec![Vertex::Finite(a), Vertex::Infinite(dir)], branch_seed)
    }

    /// Whether the integrand has an inverse-square-root singularity at the
    /// start and end vertex.
    pub fn endpoint_singularity_flags(&self, bp: &BranchPoints) -> [bool; 2] {
        let f = |v: Option<&Vertex>| match v {
            Some(Vertex::Finite(x)) => bp.on_branch_point(*x).is_some(),
            _ => false,
        };
        [f(self.vertices.first()), f(self.vertices.last())]
    }

    /// Append `other`, whose first vertex must coincide with this path's
    /// last. The seed of `self` is kept.
    pub fn concat(&self, other: &ContourPath) -> ContourPath {
        let mut v = self.vertices.clone();
        v.extend(other.vertices.iter().skip(1).copied());
        ContourPath::new(v, self.branch_seed)
    }

    /// The same path traversed backwards, seeded so that it lies on the same
    /// sheet.
    pub fn reversed(&self, bp: &BranchPoints, guard: f64) -> Result<ContourPath> {
        let tracked = TrackedPath::new(self, bp, guard)?;
        let mut v = self.vertices.clone();
        v.reverse();
        let mut out = ContourPath::new(v, C::new(1.0, 0.0));
        if tracked.segments.is_empty() {
            out.branch_seed = self.branch_seed;
            return Ok(out);
        }
        // Anchor of the reversed path, expressed on the original.
        let last = tracked.segments.len() - 1;
        let seg = &tracked.segments[last];
        let end_regular = seg.end_finite().map_or(false, |x| bp.on_branch_point(x).is_none());
        let start_regular = last > 0
            || seg.start_finite().map_or(false, |x| bp.on_branch_point(x).is_none());
        let s = if end_regular {
            1.0
        } else if start_regular {
            0.0
        } else {
            0.5
        };
        out.branch_seed = tracked.sheet(last, s, 1.0 - s).root();
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Segment {
    Line { a: C, b: C },
    /// `X = a + dir·ℓ·(1/(1−s)² − 1)`.
    RayOut { a: C, dir: C, scale: f64 },
    /// `X = b + dir·ℓ·(1/s² − 1)`.
    RayIn { b: C, dir: C, scale: f64 },
}

impl Segment {
    fn start_finite(&self) -> Option<C> {
        match *self {
            Segment::Line { a, .. } | Segment::RayOut { a, .. } => Some(a),
            Segment::RayIn { .. } => None,
        }
    }

    fn end_finite(&self) -> Option<C> {
        match *self {
            Segment::Line { b, .. } | Segment::RayIn { b, .. } => Some(b),
            Segment::RayOut { .. } => None,
        }
    }

    /// `X(s) − e`, computed from the nearer end.
    #[inline]
    pub(crate) fn offset(&self, s: f64, sc: f64, e: C) -> C {
        match *self {
            Segment::Line { a, b } => {
                if s <= 0.5 {
                    (a - e) + (b - a) * s
                } else {
                    (b - e) - (b - a) * sc
                }
            }
            Segment::RayOut { a, dir, scale } => (a - e) + dir * (scale * s * (1.0 + sc) / (sc * sc)),
            Segment::RayIn { b, dir, scale } => (b - e) + dir * (scale * sc * (1.0 + s) / (s * s)),
        }
    }

    #[inline]
    pub(crate) fn point(&self, s: f64, sc: f64) -> C {
        self.offset(s, sc, C::new(0.0, 0.0))
    }

    #[inline]
    pub(crate) fn jacobian(&self, s: f64, sc: f64) -> C {
        match *self {
            Segment::Line { a, b } => b - a,
            Segment::RayOut { dir, scale, .. } => dir * (2.0 * scale / (sc * sc * sc)),
            Segment::RayIn { dir, scale, .. } => dir * (-2.0 * scale / (s * s * s)),
        }
    }

    /// Unsigned continuous branch of `√(X(s) − e)` along the segment.
    #[inline]
    fn local_factor(&self, s: f64, sc: f64, e: C) -> C {
        let off = self.offset(s, sc, e);
        let (reference, dir) = match *self {
            Segment::Line { a, b } => {
                let p = if (a - e).norm() >= (b - e).norm() { a } else { b };
                (p - e, None)
            }
            Segment::RayOut { a, dir, .. } => (a - e, Some(dir)),
            Segment::RayIn { b, dir, .. } => (b - e, Some(dir)),
        };
        if reference.norm() > 0.0 {
            csqrt(reference) * csqrt(off / reference)
        } else {
            // Ray emanating from the branch point itself.
            let d = dir.unwrap_or(C::new(1.0, 0.0));
            csqrt(d) * (off / d).re.max(0.0).sqrt()
        }
    }

    /// Distance from `e` to the segment.
    fn distance(&self, e: C) -> f64 {
        match *self {
            Segment::Line { a, b } => {
                let d = b - a;
                let t = ((e - a) * d.conj()).re / d.norm_sqr();
                let t = t.clamp(0.0, 1.0);
                (a + d * t - e).norm()
            }
            Segment::RayOut { a, dir, .. } | Segment::RayIn { b: a, dir, .. } => {
                let d = dir / dir.norm();
                let t = ((e - a) * d.conj()).re.max(0.0);
                (a + d * t - e).norm()
            }
        }
    }
}

/// A path prepared for integration: segments plus the per-factor sign
/// corrections that make every `√(X − e_k)` continuous along it.
#[derive(Debug, Clone)]
pub(crate) struct TrackedPath {
    pub(crate) bp: BranchPoints,
    pub(crate) segments: Vec<Segment>,
    signs: Vec<[f64; 3]>,
    /// For each segment, whether its start / end sits on a branch point.
    pub(crate) singular: Vec<[bool; 2]>,
}

impl TrackedPath {
    pub(crate) fn new(path: &ContourPath, bp: &BranchPoints, guard: f64) -> Result<Self> {
        let n = path.vertices.len();
        let scale = bp.scale();
        let mut segments = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n.saturating_sub(1) {
            let seg = match (path.vertices[i], path.vertices[i + 1]) {
                (Vertex::Finite(a), Vertex::Finite(b)) => {
                    if a == b {
                        continue;
                    }
                    Segment::Line { a, b }
                }
                (Vertex::Finite(a), Vertex::Infinite(dir)) if i + 1 == n - 1 => Segment::RayOut {
                    a,
                    dir: dir / dir.norm(),
                    scale: scale.max(a.norm()),
                },
                (Vertex::Infinite(dir), Vertex::Finite(b)) if i == 0 => Segment::RayIn {
                    b,
                    dir: dir / dir.norm(),
                    scale: scale.max(b.norm()),
                },
                _ => {
                    return Err(Error::OutOfDomain(
                        C::new(f64::INFINITY, 0.0),
                        "infinite vertex in the interior of a path".into(),
                    ))
                }
            };
            segments.push(seg);
        }
        let m = segments.len();
        let mut singular = Vec::with_capacity(m);
        for (i, seg) in segments.iter().enumerate() {
            let s0 = seg.start_finite().and_then(|x| bp.on_branch_point(x));
            let s1 = seg.end_finite().and_then(|x| bp.on_branch_point(x));
            if (s0.is_some() && i > 0) || (s1.is_some() && i + 1 < m) {
                let x = if s0.is_some() { seg.start_finite() } else { seg.end_finite() };
                return Err(Error::PathHitsBranchPoint {
                    point: x.unwrap_or_default(),
                });
            }
            for (k, e) in bp.0.iter().enumerate() {
                // A straight piece leaving a branch point cannot come back to it.
                if s0 == Some(k) || s1 == Some(k) {
                    continue;
                }
                if seg.distance(*e) <= guard {
                    return Err(Error::PathHitsBranchPoint { point: *e });
                }
            }
            singular.push([s0.is_some(), s1.is_some()]);
        }

        let mut signs = vec![[1.0; 3]; m];
        if m > 0 {
            let s = if !singular[0][0] && segments[0].start_finite().is_some() {
                0.0
            } else if !singular[0][1] && segments[0].end_finite().is_some() {
                1.0
            } else {
                0.5
            };
            let local = local_sheet(&segments[0], bp, s, 1.0 - s);
            let r = local.root();
            if (path.branch_seed.conj() * r).re < 0.0 {
                signs[0][1] = -1.0;
            }
            for i in 1..m {
                let prev = local_sheet(&segments[i - 1], bp, 1.0, 0.0);
                let next = local_sheet(&segments[i], bp, 0.0, 1.0);
                for k in 0..3 {
                    let p = prev.0[k] * signs[i - 1][k];
                    signs[i][k] = if (p.conj() * next.0[k]).re >= 0.0 { 1.0 } else { -1.0 };
                }
            }
        }
        Ok(TrackedPath {
            bp: *bp,
            segments,
            signs,
            singular,
        })
    }

    #[inline]
    pub(crate) fn sheet(&self, seg: usize, s: f64, sc: f64) -> Sheet {
        let mut sh = local_sheet(&self.segments[seg], &self.bp, s, sc);
        for k in 0..3 {
            sh.0[k] *= self.signs[seg][k];
        }
        sh
    }
}

#[inline]
fn local_sheet(seg: &Segment, bp: &BranchPoints, s: f64, sc: f64) -> Sheet {
    Sheet([
        seg.local_factor(s, sc, bp.0[0]),
        seg.local_factor(s, sc, bp.0[1]),
        seg.local_factor(s, sc, bp.0[2]),
    ])
}

fn run_quadrature<F>(tracked: &TrackedPath, tol: f64, mut integrand: F) -> Result<QuadratureResult>
where
    F: FnMut(C, C, &Sheet) -> C,
{
    let mut total = QuadratureResult {
        value: C::new(0.0, 0.0),
        abs_error_estimate: 0.0,
        evaluations: 0,
    };
    let m = tracked.segments.len();
    if m == 0 {
        total.evaluations = 1;
        return Ok(total);
    }
    let seg_tol = tol / m as f64;
    for (i, seg) in tracked.segments.iter().enumerate() {
        let mut f = |s: f64, sc: f64| {
            let x = seg.point(s, sc);
            let sh = tracked.sheet(i, s, sc);
            integrand(x, seg.jacobian(s, sc), &sh)
        };
        let r = integrate_adaptive(&mut f, seg_tol);
        total.value += r.value;
        total.abs_error_estimate += r.error;
        total.evaluations += r.evaluations;
        if !r.converged {
            return Err(Error::ToleranceNotMet {
                tol,
                estimate: total.abs_error_estimate,
            });
        }
    }
    total.abs_error_estimate = total.abs_error_estimate.min(tol);
    Ok(total)
}

/// Principal square root without the polar round trip; same branch as
/// `Complex::sqrt`, including the sign of a zero imaginary part.
#[inline]
pub(crate) fn csqrt(z: C) -> C {
    if z.re == 0.0 && z.im == 0.0 {
        return C::new(0.0, z.im);
    }
    // arguments here are path offsets, far from overflow
    let m = (z.re * z.re + z.im * z.im).sqrt();
    if z.re >= 0.0 {
        let t = (0.5 * (m + z.re)).sqrt();
        C::new(t, z.im / (2.0 * t))
    } else {
        let t = (0.5 * (m - z.re)).sqrt();
        C::new(z.im.abs() / (2.0 * t), t.copysign(z.im))
    }
}

/// `∫ numerator(X) dX / (2√g(X))` along the path, √g continued from the
/// path's seed.
pub fn integrate_sqrt_kernel<N>(
    path: &ContourPath,
    numerator: N,
    bp: &BranchPoints,
    tol: f64,
) -> Result<QuadratureResult>
where
    N: Fn(C) -> C,
{
    integrate_sqrt_kernel_guarded(path, numerator, bp, tol, DEFAULT_GUARD)
}

pub fn integrate_sqrt_kernel_guarded<N>(
    path: &ContourPath,
    numerator: N,
    bp: &BranchPoints,
    tol: f64,
    guard: f64,
) -> Result<QuadratureResult>
where
    N: Fn(C) -> C,
{
    let tracked = TrackedPath::new(path, bp, guard)?;
    run_quadrature(&tracked, tol, |x, jac, sh| numerator(x) * jac / (2.0 * sh.root()))
}

/// Like [`integrate_sqrt_kernel`] but the numerator also sees the sheet, for
/// integrands built from partial products of the square-root factors.
pub fn integrate_on_sheet<N>(
    path: &ContourPath,
    integrand: N,
    bp: &BranchPoints,
    tol: f64,
) -> Result<QuadratureResult>
where
    N: Fn(C, &Sheet) -> C,
{
    let tracked = TrackedPath::new(path, bp, DEFAULT_GUARD)?;
    run_quadrature(&tracked, tol, |x, jac, sh| integrand(x, sh) * jac)
}

/// `∫ |numerator(X)| |dX| / |2√g(X)|` along the path.
pub fn integrate_abs_kernel<N>(
    path: &ContourPath,
    numerator: N,
    bp: &BranchPoints,
    tol: f64,
) -> Result<QuadratureResult>
where
    N: Fn(C) -> C,
{
    let tracked = TrackedPath::new(path, bp, DEFAULT_GUARD)?;
    run_quadrature(&tracked, tol, |x, jac, sh| {
        C::new(numerator(x).norm() * jac.norm() / (2.0 * sh.root().norm()), 0.0)
    })
}

/// The sheet at the end vertex after continuation along the path.
pub fn continue_sheet(path: &ContourPath, bp: &BranchPoints) -> Result<Sheet> {
    let tracked = TrackedPath::new(path, bp, DEFAULT_GUARD)?;
    let m = tracked.segments.len();
    if m == 0 {
        let x = path
            .vertices
            .first()
            .and_then(|v| v.finite())
            .ok_or_else(|| Error::OutOfDomain(C::default(), "empty path".into()))?;
        let seg = Segment::Line {
            a: x,
            b: x + 1.0,
        };
        let mut sh = local_sheet(&seg, bp, 0.0, 1.0);
        if (path.branch_seed.conj() * sh.root()).re < 0.0 {
            sh.0[1] = -sh.0[1];
        }
        return Ok(sh);
    }
    if tracked.segments[m - 1].end_finite().is_none() {
        return Err(Error::OutOfDomain(
            C::new(f64::INFINITY, 0.0),
            "path ends at infinity".into(),
        ));
    }
    Ok(tracked.sheet(m - 1, 1.0, 0.0))
}

/// Value of `√g` at the end vertex after continuation along the path.
pub fn continue_branch(path: &ContourPath, bp: &BranchPoints) -> Result<C> {
    continue_sheet(path, bp).map(|s| s.root())
}
