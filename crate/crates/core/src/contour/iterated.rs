//! Iterated integrals `∫ g(X, I(X)) dX` where `I_j(X) = ∫_start^X f_j`.
//!
//! Each segment is cut into Gauss-Legendre panels; the inner integrals are
//! carried across panels with the spectral cumulative matrix, so the outer
//! integrand sees them at full accuracy without nested quadrature.

use super::gauss::{panel, NODES};
use super::{BranchPoints, ContourPath, Sheet, TrackedPath, DEFAULT_GUARD};
use crate::error::{Error, Result};
use num_complex::Complex64 as C;

const MAX_PANELS: usize = 200_000;
const MIN_WIDTH: f64 = 1e-13;
const PERTURB: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct IteratedResult {
    pub outer: C,
    /// Inner integrals over the whole path.
    pub inner: Vec<C>,
    pub panels: usize,
}

/// One piece of a segment: `s ∈ [p, q]` reached through `u ∈ [0, 1]`, with a
/// quadratic substitution at an endpoint carrying an inverse square root.
#[derive(Clone, Copy)]
enum Map {
    Plain,
    StartSingular,
    EndSingular,
}

#[derive(Clone, Copy)]
struct Piece {
    seg: usize,
    p: f64,
    q: f64,
    map: Map,
}

impl Piece {
    /// `(s, 1 − s, ds/du)`.
    #[inline]
    fn eval(&self, u: f64, uc: f64) -> (f64, f64, f64) {
        let w = self.q - self.p;
        match self.map {
            Map::Plain => (self.p + w * u, (1.0 - self.q) + w * uc, w),
            Map::StartSingular => (self.p + w * u * u, (1.0 - self.q) + w * (1.0 - u * u), 2.0 * w * u),
            Map::EndSingular => (self.q - w * uc * uc, (1.0 - self.q) + w * uc * uc, 2.0 * w * uc),
        }
    }
}

/// Integrate `outer(X, sheet, I(X))` along `path`, where `inner` fills the
/// densities `f_j(X, sheet)` of the running integrals `I_j`. Both densities
/// are with respect to `dX` and must include any kernel factor themselves.
pub fn iterated_integral<I, O>(
    path: &ContourPath,
    bp: &BranchPoints,
    n_inner: usize,
    inner: I,
    outer: O,
    tol: f64,
) -> Result<IteratedResult>
where
    I: Fn(C, &Sheet, &mut [C]),
    O: Fn(C, &Sheet, &[C]) -> C,
{
    let tracked = TrackedPath::new(path, bp, DEFAULT_GUARD)?;
    let mut pieces = Vec::new();
    for (i, sing) in tracked.singular.iter().enumerate() {
        match (sing[0], sing[1]) {
            (false, false) => pieces.push(Piece { seg: i, p: 0.0, q: 1.0, map: Map::Plain }),
            (true, false) => pieces.push(Piece { seg: i, p: 0.0, q: 1.0, map: Map::StartSingular }),
            (false, true) => pieces.push(Piece { seg: i, p: 0.0, q: 1.0, map: Map::EndSingular }),
            (true, true) => {
                pieces.push(Piece { seg: i, p: 0.0, q: 0.5, map: Map::StartSingular });
                pieces.push(Piece { seg: i, p: 0.5, q: 1.0, map: Map::EndSingular });
            }
        }
    }

    let g = panel();
    let mut running = vec![C::new(0.0, 0.0); n_inner];
    let mut total = C::new(0.0, 0.0);
    let mut panels = 0usize;
    let mut dens = vec![[C::new(0.0, 0.0); NODES]; n_inner];
    let mut buf = vec![C::new(0.0, 0.0); n_inner];
    let mut cum = vec![C::new(0.0, 0.0); n_inner];
    let mut xs = [C::new(0.0, 0.0); NODES];
    let mut sheets = [Sheet([C::new(0.0, 0.0); 3]); NODES];
    let mut outer_vals = [C::new(0.0, 0.0); NODES];

    for piece in &pieces {
        let seg = tracked.segments[piece.seg];
        // Stack of pending u-intervals, leftmost on top.
        let mut stack = vec![(0.0f64, 1.0f64)];
        while let Some((u0, u1)) = stack.pop() {
            panels += 1;
            if panels > MAX_PANELS {
                return Err(Error::ToleranceNotMet { tol, estimate: f64::INFINITY });
            }
            let h = 0.5 * (u1 - u0);
            for m in 0..NODES {
                let u = u0 + h * (1.0 + g.x[m]);
                let uc = (1.0 - u1) + h * (1.0 - g.x[m]);
                let (s, sc, dsdu) = piece.eval(u, uc);
                let x = seg.point(s, sc);
                let sh = tracked.sheet(piece.seg, s, sc);
                let dxdu = seg.jacobian(s, sc) * dsdu * h;
                inner(x, &sh, &mut buf);
                for j in 0..n_inner {
                    dens[j][m] = buf[j] * dxdu;
                }
                xs[m] = x;
                sheets[m] = sh;
                outer_vals[m] = dxdu;
            }
            let resolved = |vals: &[C; NODES]| -> bool {
                let coeff = |j: usize| -> C { (0..NODES).map(|m| vals[m] * g.coeff[j][m]).sum() };
                let tail = coeff(NODES - 1).norm() + coeff(NODES - 2).norm() + coeff(NODES - 3).norm();
                // Coefficients cannot be resolved below the rounding noise of
                // the node values, which may cancel in the mean.
                let noise = 64.0 * f64::EPSILON * vals.iter().map(|v| v.norm()).sum::<f64>();
                tail <= tol * (u1 - u0) + noise || u1 - u0 < MIN_WIDTH
            };
            if !dens.iter().all(resolved) {
                let mid = 0.5 * (u0 + u1);
                stack.push((mid, u1));
                stack.push((u0, mid));
                continue;
            }
            let mut vals = [C::new(0.0, 0.0); NODES];
            // Size of the terms the outer integrand combines, found by
            // perturbing each running integral: cancellation among them
            // leaves rounding noise that the values alone do not show.
            let mut scale = 0.0f64;
            for m in 0..NODES {
                for j in 0..n_inner {
                    cum[j] = running[j] + (0..NODES).map(|l| dens[j][l] * g.cumulative[m][l]).sum::<C>();
                }
                vals[m] = outer(xs[m], &sheets[m], &cum) * outer_vals[m];
                scale += vals[m].norm();
                for j in 0..n_inner {
                    let keep = cum[j];
                    let d = PERTURB * keep.norm();
                    if d > 0.0 {
                        cum[j] = keep + d;
                        let v = outer(xs[m], &sheets[m], &cum) * outer_vals[m];
                        scale += (v - vals[m]).norm() / PERTURB;
                        cum[j] = keep;
                    }
                }
            }
            let resolved_outer = |vals: &[C; NODES]| -> bool {
                let coeff = |j: usize| -> C { (0..NODES).map(|m| vals[m] * g.coeff[j][m]).sum() };
                let tail = coeff(NODES - 1).norm() + coeff(NODES - 2).norm() + coeff(NODES - 3).norm();
                tail <= tol * (u1 - u0) + 64.0 * f64::EPSILON * scale || u1 - u0 < MIN_WIDTH
            };
            if !resolved_outer(&vals) {
                let mid = 0.5 * (u0 + u1);
                stack.push((mid, u1));
                stack.push((u0, mid));
                continue;
            }
            total += (0..NODES).map(|m| vals[m] * g.w[m]).sum::<C>();
            for j in 0..n_inner {
                running[j] += (0..NODES).map(|m| dens[j][m] * g.w[m]).sum::<C>();
            }
        }
    }
    Ok(IteratedResult {
        outer: total,
        inner: running,
        panels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_abelian_integral() {
        // ∫ Z k dX with Z = ∫ k dX equals Z(end)²/2.
        let bp = BranchPoints::legendre(C::new(0.3, 0.2));
        let pts = [C::new(1.0, 0.0), C::new(1.0, 1.5), C::new(-0.7, 1.5), C::new(-0.7, 0.4)];
        let seed = C::new(0.0, 1.0);
        let path = ContourPath::polyline(&pts, seed);
        let r = iterated_integral(
            &path,
            &bp,
            1,
            |_, sh, out| out[0] = 0.5 / sh.root(),
            |_, sh, z| z[0] * 0.5 / sh.root(),
            1e-12,
        )
        .unwrap();
        let z = r.inner[0];
        assert!((r.outer - 0.5 * z * z).norm() < 1e-11, "{} vs {}", r.outer, 0.5 * z * z);
        let direct = super::super::integrate_sqrt_kernel(&path, |_| C::new(1.0, 0.0), &bp, 1e-12)
            .unwrap()
            .value;
        assert!((direct - z).norm() < 1e-11);
    }
}
