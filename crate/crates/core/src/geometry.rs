//! Planar loop geometry: enclosed area and distance between curves.

use crate::analytic::LoopSample;
use crate::error::{Error, Result};

/// Signed shoelace area of the closed polygon through `points` (the last
/// point connects back to the first). Counter-clockwise is positive.
pub fn shoelace_area(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let (x0, y0) = points[i];
        let (x1, y1) = points[(i + 1) % n];
        acc += x0 * y1 - x1 * y0;
    }
    0.5 * acc
}

/// Signed area as `-closed integral of y dx` by the trapezoid rule.
pub fn trapezoid_area(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let (x0, y0) = points[i];
        let (x1, y1) = points[(i + 1) % n];
        acc -= 0.5 * (y0 + y1) * (x1 - x0);
    }
    acc
}

/// Area enclosed by the `(psi, y)` samples whose `rho` lies in `range`,
/// closed by the vertical segment between the two ends.
///
/// Signed as `closed integral of y d psi`: positive for clockwise traversal,
/// which is how a dissipative friction loop runs.
pub fn loop_area(samples: &[LoopSample], range: (f64, f64)) -> Result<f64> {
    let (lo, hi) = range;
    let eps = 1e-12 * (1.0 + hi.abs());
    let has = |r: f64| samples.iter().any(|s| (s.rho - r).abs() <= eps);
    if !(has(lo) && has(hi)) {
        return Err(Error::InvalidArgument(format!(
            "range [{lo}, {hi}] endpoints are not sample parameters"
        )));
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.rho >= lo - eps && s.rho <= hi + eps)
        .map(|s| (s.psi, s.y))
        .collect();
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    if (first.0 - last.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "polyline is not closed in psi: {} vs {}",
            first.0, last.0
        )));
    }
    Ok(-shoelace_area(&pts))
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let s = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (qx, qy) = (a.0 + s * dx, a.1 + s * dy);
    ((p.0 - qx).powi(2) + (p.1 - qy).powi(2)).sqrt()
}

fn directed(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    a.iter().fold(0.0, |worst, &p| {
        let nearest = if b.len() == 1 {
            point_segment_distance(p, b[0], b[0])
        } else {
            b.windows(2)
                .map(|w| point_segment_distance(p, w[0], w[1]))
                .fold(f64::INFINITY, f64::min)
        };
        worst.max(nearest)
    })
}

/// Hausdorff distance between two polylines in the plane (vertices of each
/// against the segments of the other).
pub fn hausdorff_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    directed(a, b).max(directed(b, a))
}
