//! Geometry of the slit plane `X_λ = ℂ ∖ ((−∞,0] ∪ [0,λ] ∪ [1,∞))` and
//! polyline routes inside it.

use super::{Region, Side};
use crate::contour::DEFAULT_GUARD;
use crate::error::{Error, Result};
use num_complex::Complex64 as C;

/// Width of the band around a slit or a horizontal line through λ that is
/// classified as lying on it, relative to `max(1, |ξ|)`.
pub const COLLINEAR_BAND: f64 = 1e-12;

/// Routes keep this many guard radii away from branch points.
const CLEARANCE: f64 = 3.0;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub(crate) fn point_segment_distance(p: C, a: C, b: C) -> f64 {
    let d = b - a;
    let n = d.norm_sqr();
    if n == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / n).clamp(0.0, 1.0);
    (a + d * t - p).norm()
}

fn orient(a: C, b: C, p: C) -> f64 {
    ((b - a).conj() * (p - a)).im
}

pub(crate) fn segment_distance(a: C, b: C, p: C, q: C) -> f64 {
    let (o1, o2) = (orient(a, b, p), orient(a, b, q));
    let (o3, o4) = (orient(p, q, a), orient(p, q, b));
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return 0.0;
    }
    point_segment_distance(p, a, b)
        .min(point_segment_distance(q, a, b))
        .min(point_segment_distance(a, p, q))
        .min(point_segment_distance(b, p, q))
}

/// Region of `ξ` for `Im λ ≥ 0`; for `Im λ < 0` the picture is mirrored in
/// the real axis.
pub fn classify(lam: C, xi: C) -> Region {
    let (l, x) = if lam.im < 0.0 { (lam.conj(), xi.conj()) } else { (lam, xi) };
    let band = COLLINEAR_BAND * x.norm().max(1.0);
    if x.im.abs() <= band {
        if x.re <= band {
            return Region::NegAxis;
        }
        if x.re >= 1.0 - band {
            return Region::OneInfty;
        }
    }
    if point_segment_distance(x, C::default(), l) <= band {
        return Region::LSlit;
    }
    if x.im.abs() <= band {
        return Region::UnitInterval;
    }
    if x.im < 0.0 {
        return Region::V4;
    }
    if l.im <= band {
        return Region::V1;
    }
    if (x.im - l.im).abs() <= band {
        return if x.re < l.re { Region::V5 } else { Region::V6 };
    }
    if x.im > l.im {
        return Region::V1;
    }
    if (l.conj() * x).im > 0.0 {
        Region::V2
    } else {
        Region::V3
    }
}

/// Unit normal pointing to the north side of the slit containing `ξ`. For
/// the real slits this is `+i`; for `L_λ` it is `+iλ/|λ|`, the side that
/// shares a sector at 0 with the north side of the negative axis.
pub(crate) fn north_normal(lam: C, region: Region) -> C {
    match region {
        Region::LSlit if lam.im != 0.0 => c(0.0, 1.0) * lam / lam.norm(),
        _ => c(0.0, 1.0),
    }
}

pub(crate) fn branch_points(lam: C) -> [C; 3] {
    [C::default(), c(1.0, 0.0), lam]
}

/// Branch point that `ξ` sits on, up to the collinearity band.
pub(crate) fn branch_point_at(lam: C, xi: C) -> Option<usize> {
    let band = COLLINEAR_BAND * xi.norm().max(1.0);
    branch_points(lam).iter().position(|e| (xi - e).norm() <= band)
}

/// Point just off the slit on the requested side, or `ξ` itself. The branch
/// point 0 is approached inside the sector between the north side of the
/// negative axis and `L_λ`, where `z → ω₂/2`.
pub(crate) fn approach_point(lam: C, xi: C, region: Region, side: Side) -> Result<C> {
    match branch_point_at(lam, xi) {
        Some(0) => {
            let theta = 0.5 * (lam.arg() + std::f64::consts::PI);
            return Ok(C::from_polar(0.25 * lam.norm().min(1.0), theta));
        }
        Some(_) => return Ok(xi),
        None if !region.is_boundary() => return Ok(xi),
        None => {}
    }
    let s = match side {
        Side::North => 1.0,
        Side::South => -1.0,
        Side::Interior => return Err(Error::OnSlitWithoutSide(xi)),
    };
    let near = branch_points(lam).iter().map(|e| (xi - e).norm()).fold(f64::INFINITY, f64::min);
    let delta = (0.5 * near).min(0.1);
    Ok(xi + north_normal(lam, region) * (s * delta))
}

/// Whether the polyline stays inside `X_λ`, apart from touching a slit at
/// its first and last vertex, and keeps clear of the branch points.
pub(crate) fn admissible(lam: C, pts: &[C]) -> bool {
    let n = pts.len();
    if n < 2 {
        return true;
    }
    let extent = pts.iter().map(|p| p.norm()).fold(2.0, f64::max);
    let far = 10.0 * extent;
    let slits = [(c(-far, 0.0), C::default()), (c(1.0, 0.0), c(far, 0.0)), (C::default(), lam)];
    let bps = branch_points(lam);
    for i in 0..n - 1 {
        let (p, q) = (pts[i], pts[i + 1]);
        if p == q {
            continue;
        }
        let first = i == 0;
        let last = i + 2 == n;
        let tol = COLLINEAR_BAND * extent;
        // Step off an end that sits on a slit by enough to clear the band.
        let shrink = (1e3 * tol / (q - p).norm()).clamp(1e-9, 0.25);
        let a = if first { p + (q - p) * shrink } else { p };
        let b = if last { q - (q - p) * shrink } else { q };
        if slits.iter().any(|&(s0, s1)| segment_distance(a, b, s0, s1) <= tol) {
            return false;
        }
        for e in bps {
            if (first && p == e) || (last && q == e) {
                continue;
            }
            if point_segment_distance(e, p, q) <= CLEARANCE * DEFAULT_GUARD {
                return false;
            }
        }
    }
    true
}

/// A polyline from `start` (on a slit or a branch point, left vertically
/// upwards) to `target`, ending with the short step `approach → target`
/// when the two differ. Candidate shapes are tried in a fixed order and the
/// first admissible one is returned.
pub(crate) fn route(lam: C, start: C, approach: C, target: C) -> Result<Vec<C>> {
    let a = approach;
    let h_up = a.im.max(lam.im).max(start.im).max(0.0) + 1.0;
    let h_dn = (-a.im).max(-lam.im).max(0.0) + 1.0;
    let top = c(start.re, h_up);
    let gate = 0.5 * (lam.re.max(0.0) + 1.0);
    let mut candidates: Vec<Vec<C>> = vec![
        vec![start, top, c(a.re, h_up), a],
        vec![start, top, c(gate, h_up), c(gate, 0.0), a],
        vec![start, top, c(gate, h_up), c(gate, -h_dn), c(a.re, -h_dn), a],
    ];
    if lam.im != 0.0 {
        let up = if lam.im > 0.0 { lam } else { -lam };
        candidates.insert(1, vec![start, top, a + up * ((h_up - a.im) / up.im), a]);
        candidates.push(vec![start, top, c(gate, h_up), c(gate, -h_dn), a - up * ((h_dn + a.im) / up.im), a]);
    }
    let step = a != target;
    let ok: Vec<(Vec<C>, f64)> = candidates
        .into_iter()
        .filter_map(|mut pts| {
            if step {
                pts.push(target);
            }
            pts.dedup();
            admissible(lam, &pts).then(|| {
                let c = clearance(lam, &pts, step);
                (pts, c)
            })
        })
        .collect();
    // Earlier shapes win unless they pass much closer to a branch point,
    // which would only slow the quadrature down.
    let best = ok.iter().map(|(_, c)| *c).fold(0.0, f64::max);
    ok.into_iter()
        .find(|(_, c)| *c >= 0.25 * best)
        .map(|(p, _)| p)
        .ok_or_else(|| Error::OutOfDomain(target, "no admissible route inside the slit plane".into()))
}

/// Smallest distance from a branch point to the route, ignoring the final
/// approach step (if any), branch points the route starts or ends on, and
/// on the last segment approaches no closer than half the target's own
/// distance.
fn clearance(lam: C, pts: &[C], skip_last: bool) -> f64 {
    let n = pts.len();
    let mut best = f64::INFINITY;
    let segs = if skip_last { n.saturating_sub(2) } else { n.saturating_sub(1) };
    for i in 0..segs {
        for e in branch_points(lam) {
            if (i == 0 && pts[0] == e) || (i + 2 == n && pts[n - 1] == e) {
                continue;
            }
            let d = point_segment_distance(e, pts[i], pts[i + 1]);
            if i + 2 == n && d >= 0.5 * (pts[n - 1] - e).norm() {
                // Closest approach comparable to the target's own distance
                // is not the route's doing.
                continue;
            }
            best = best.min(d);
        }
    }
    best
}

/// Signed number of turns of the closed polyline around `p`.
pub fn winding_number(pts: &[C], p: C) -> f64 {
    let mut total = 0.0;
    for w in pts.windows(2) {
        total += ((w[1] - p) / (w[0] - p)).arg();
    }
    total / (2.0 * std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_upper() {
        let lam = c(0.3, 0.4);
        assert_eq!(classify(lam, c(0.0, 1.0)), Region::V1);
        assert_eq!(classify(lam, c(-0.2, 0.2)), Region::V2);
        assert_eq!(classify(lam, c(0.5, 0.2)), Region::V3);
        assert_eq!(classify(lam, c(0.5, -0.2)), Region::V4);
        assert_eq!(classify(lam, c(0.1, 0.4)), Region::V5);
        assert_eq!(classify(lam, c(0.9, 0.4)), Region::V6);
        assert_eq!(classify(lam, c(-2.0, 0.0)), Region::NegAxis);
        assert_eq!(classify(lam, c(0.15, 0.2)), Region::LSlit);
        assert_eq!(classify(lam, c(3.0, 0.0)), Region::OneInfty);
        assert_eq!(classify(lam, c(0.5, 0.0)), Region::UnitInterval);
    }

    #[test]
    fn classification_mirrors() {
        let lam = c(0.3, -0.4);
        assert_eq!(classify(lam, c(-0.2, -0.2)), Region::V2);
        assert_eq!(classify(lam, c(0.0, 0.5)), Region::V4);
    }

    #[test]
    fn routes_are_admissible() {
        for lam in [c(0.3, 0.4), c(0.0, 0.9), c(0.5, -0.8), c(0.2, 0.0)] {
            for xi in [c(-0.2, 0.2), c(0.5, 0.1), c(0.1, -0.3), c(-3.0, -0.01), c(0.6, 0.0), c(5.0, 5.0)] {
                if classify(lam, xi).is_boundary() {
                    continue;
                }
                let r = route(lam, c(-1.0, 0.0), xi, xi).unwrap();
                assert!(admissible(lam, &r));
            }
        }
    }

    #[test]
    fn crossing_a_slit_is_rejected() {
        let lam = c(0.3, 0.4);
        assert!(!admissible(lam, &[c(-1.0, 0.0), c(-1.0, 1.0), c(-1.0, -1.0)]));
        assert!(!admissible(lam, &[c(-1.0, 0.0), c(-1.0, 1.0), c(0.3, 1.0), c(0.2, 0.1)]));
        assert!(admissible(lam, &[c(-1.0, 0.0), c(-1.0, 1.0), c(0.2, 1.0), c(0.2, 0.5)]));
    }

    #[test]
    fn winding() {
        let sq = [c(1.0, 1.0), c(-1.0, 1.0), c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0)];
        assert!((winding_number(&sq, C::default()) - 1.0).abs() < 1e-12);
        assert!(winding_number(&sq, c(3.0, 0.0)).abs() < 1e-12);
    }
}
