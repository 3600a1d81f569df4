use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest angle subtended by one chord of a detour arc.
const ARC_STEP: f64 = PI / 12.0;

/// A polyline between two points, each either a root or a free point.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    pub waypoints: Vec<Complex64>,
    /// Index of the root at the first waypoint, `None` for a free start.
    pub start_index: Option<usize>,
    /// Index of the root at the last waypoint, `None` for a free end.
    pub end_index: Option<usize>,
}

/// Which way a detour passes an obstructing root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetourSide {
    /// The short way round, on the side the straight segment already passes.
    Near,
    /// The long way round, on the other side of the root.
    Far,
}

impl PathSpec {
    pub fn new(waypoints: Vec<Complex64>, start_index: Option<usize>, end_index: Option<usize>) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::invalid("a path needs at least two waypoints"));
        }
        if waypoints.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("consecutive waypoints coincide"));
        }
        if waypoints.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("non-finite waypoint"));
        }
        Ok(PathSpec {
            waypoints,
            start_index,
            end_index,
        })
    }

    pub fn start(&self) -> Complex64 {
        self.waypoints[0]
    }

    pub fn end(&self) -> Complex64 {
        *self.waypoints.last().unwrap()
    }

    pub fn length(&self) -> f64 {
        self.waypoints.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    /// The same polyline traversed backwards.
    pub fn reversed(&self) -> PathSpec {
        PathSpec {
            waypoints: self.waypoints.iter().rev().cloned().collect(),
            start_index: self.end_index,
            end_index: self.start_index,
        }
    }

    /// Smallest distance from the polyline to a root that is not one of its
    /// declared endpoints. An endpoint root is still checked against the
    /// segments that do not touch it.
    pub fn clearance(&self, roots: &[Complex64]) -> f64 {
        let segs = self.waypoints.len() - 1;
        let mut best = f64::INFINITY;
        for (i, &r) in roots.iter().enumerate() {
            for s in 0..segs {
                let touches_start = self.start_index == Some(i) && s == 0;
                let touches_end = self.end_index == Some(i) && s == segs - 1;
                if touches_start || touches_end {
                    continue;
                }
                best = best.min(segment_distance(r, self.waypoints[s], self.waypoints[s + 1]));
            }
        }
        best
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub(crate) fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * d.conj()).re / len2;
    let t = t.clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// Smallest pairwise distance between roots; an error if two coincide.
pub(crate) fn min_pairwise_distance(roots: &[Complex64]) -> Result<f64> {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            best = best.min((roots[i] - roots[j]).norm());
        }
    }
    if best == 0.0 || !best.is_finite() && roots.len() > 1 {
        return Err(Error::invalid("roots are not pairwise distinct"));
    }
    Ok(best)
}

/// Detour radius `δ` of the default path construction.
pub(crate) fn detour_radius(roots: &[Complex64]) -> Result<f64> {
    Ok(0.25 * min_pairwise_distance(roots)?)
}

/// Polyline from `a` to `b` that keeps distance at least `delta` from every
/// root except those listed in `skip`, bending around obstructions on arcs.
pub(crate) fn route(
    a: Complex64,
    b: Complex64,
    roots: &[Complex64],
    skip: &[usize],
    delta: f64,
    side: DetourSide,
) -> Vec<Complex64> {
    let len = (b - a).norm();
    let e = (b - a) / len;
    // Chords of an arc of radius R with angular step ≤ ARC_STEP stay R·cos(ARC_STEP/2) away.
    let radius = delta / (ARC_STEP / 2.0).cos();
    let mut blocks: Vec<(f64, f64, Complex64)> = roots
        .iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .filter_map(|(_, &r)| {
            if segment_distance(r, a, b) >= delta {
                return None;
            }
            let local = (r - a) * e.conj();
            Some((local.re, local.im, r))
        })
        .collect();
    blocks.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut out = vec![a];
    for (s, h, r) in blocks {
        let c = (radius * radius - h * h).max(0.0).sqrt();
        let p_in = a + e * (s - c);
        let p_out = a + e * (s + c);
        let t_in = (p_in - r).arg();
        let t_out = (p_out - r).arg();
        // The line passes on the side opposite to the sign of h; a root on
        // the line is passed on the left.
        let line_left = h <= 0.0;
        let go_left = match side {
            DetourSide::Near => line_left,
            DetourSide::Far => !line_left,
        };
        // Travelling along e, passing on the left means turning clockwise
        // around r (as seen from r the path runs from behind to ahead).
        let mut sweep = t_out - t_in;
        if go_left {
            while sweep >= 0.0 {
                sweep -= 2.0 * PI;
            }
        } else {
            while sweep <= 0.0 {
                sweep += 2.0 * PI;
            }
        }
        let pieces = (sweep.abs() / ARC_STEP).ceil().max(1.0) as usize;
        if (p_in - *out.last().unwrap()).norm() > 0.0 {
            out.push(p_in);
        }
        for k in 1..pieces {
            let t = t_in + sweep * k as f64 / pieces as f64;
            out.push(r + Complex64::from_polar(radius, t));
        }
        out.push(p_out);
    }
    if (b - *out.last().unwrap()).norm() > 0.0 {
        out.push(b);
    }
    out
}

/// Paths `z_1 → z_j` for `j = 2..2n`: straight where clear, otherwise bent
/// around each obstructing root at radius `δ = ¼·(min pairwise distance)`.
pub fn default_paths(roots: &[Complex64]) -> Result<Vec<PathSpec>> {
    detour_paths(roots, DetourSide::Near)
}

/// Like [`default_paths`], with the detour side selectable.
pub fn detour_paths(roots: &[Complex64], side: DetourSide) -> Result<Vec<PathSpec>> {
    let delta = detour_radius(roots)?;
    (1..roots.len())
        .map(|j| {
            let wp = route(roots[0], roots[j], roots, &[0, j], delta, side);
            PathSpec::new(wp, Some(0), Some(j))
        })
        .collect()
}

/// Paths through a via point pushed sideways off the chord `z_1 → z_j` by
/// `bulge · |z_j − z_1|`, each leg routed like the default paths. Useful
/// as a second path family when checking path independence.
pub fn bent_paths(roots: &[Complex64], bulge: f64) -> Result<Vec<PathSpec>> {
    let delta = detour_radius(roots)?;
    (1..roots.len())
        .map(|j| {
            let a = roots[0];
            let b = roots[j];
            let normal = Complex64::i() * (b - a);
            let clear = |v: Complex64| roots.iter().all(|r| (r - v).norm() >= 2.0 * delta);
            let via = [1.0, 1.5, 0.5, 2.0, 0.75, 3.0, 0.25]
                .iter()
                .flat_map(|s| [s * bulge, -s * bulge])
                .map(|f| 0.5 * (a + b) + normal * f)
                .find(|&v| clear(v))
                .ok_or_else(|| Error::invalid(format!("no clear via point for path {j}")))?;
            let mut wp = route(a, via, roots, &[0], delta, DetourSide::Near);
            wp.pop();
            wp.extend(route(via, b, roots, &[j], delta, DetourSide::Near));
            PathSpec::new(wp, Some(0), Some(j))
        })
        .collect()
}
