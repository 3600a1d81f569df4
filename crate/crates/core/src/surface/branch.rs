//! Continuation of `√D` along segments and integration of `u/√D` with
//! the branch carried along.

use num_complex::Complex64;

use super::paths::PathSpec;
use crate::error::{Error, Result};
use crate::polynomials::ComplexPoly;
use crate::quadrature::{integrate, Quadrature};

/// The square root of `value` nearer to `reference`.
pub(crate) fn nearer_sqrt(value: Complex64, reference: Complex64) -> Complex64 {
    let w = value.sqrt();
    if (w - reference).norm_sqr() <= (w + reference).norm_sqr() {
        w
    } else {
        -w
    }
}

/// One step of the continuation rule: accept `h` only if `|Δw| < ½|w|` and
/// two half steps land on the same branch as the full step.
fn accept_step(d: &impl Fn(Complex64) -> Complex64, z0: Complex64, dz: Complex64, w0: Complex64) -> Option<Complex64> {
    let w1 = nearer_sqrt(d(z0 + dz), w0);
    if (w1 - w0).norm() >= 0.5 * w0.norm() {
        return None;
    }
    let wm = nearer_sqrt(d(z0 + 0.5 * dz), w0);
    let w1b = nearer_sqrt(d(z0 + dz), wm);
    if (w1b - w1).norm() > 0.5 * w1.norm() {
        return None;
    }
    Some(w1)
}

/// Walks `z(t) = a + t(b − a)` for `t ∈ [0, 1]`, returning the knots
/// `(t_k, w_k)` of the continuation. `hint(z)` proposes a step length.
fn walk(
    d: &impl Fn(Complex64) -> Complex64,
    hint: &impl Fn(Complex64) -> f64,
    a: Complex64,
    b: Complex64,
    w_a: Complex64,
) -> Result<Track> {
    let len = (b - a).norm();
    let mut ts = vec![0.0];
    let mut ws = vec![w_a];
    let mut t = 0.0;
    let mut w = w_a;
    if w.norm() == 0.0 {
        return Err(Error::Continuation {
            near: a.to_string(),
            reason: "starting value is zero (path starts on a root)".into(),
        });
    }
    while t < 1.0 {
        let z = a + (b - a) * t;
        let mut h = (hint(z) / len).min(1.0 - t);
        loop {
            let step_end = if h >= 1.0 - t { 1.0 } else { t + h };
            if let Some(w1) = accept_step(d, z, (b - a) * (step_end - t), w) {
                t = step_end;
                w = w1;
                break;
            }
            h *= 0.5;
            if h * len < 1e-13 * (1.0 + z.norm()) {
                return Err(Error::Continuation {
                    near: z.to_string(),
                    reason: "step size underflow; the path passes too close to a root".into(),
                });
            }
        }
        ts.push(t);
        ws.push(w);
    }
    Ok(Track { a, b, ts, ws })
}

/// Continues `√D` along the polyline `path`, starting from `w_start` at its
/// first waypoint, and returns the value at the last waypoint.
///
/// Each step picks the square root nearer the previous value; steps are
/// halved until `|Δw| < ½|w|` and a half-step check agrees.
pub fn continue_sqrt(d: &ComplexPoly, path: &PathSpec, w_start: Complex64) -> Result<Complex64> {
    let start = path.start();
    let dv = d.eval_at(start);
    if (w_start * w_start - dv).norm() > 1e-8 * (1.0 + dv.norm()) {
        return Err(Error::invalid("w_start is not a square root of D at the path start"));
    }
    let eval = |z: Complex64| d.eval_at(z);
    let dd = d.derivative();
    let hint = |z: Complex64| {
        let (v, dv) = (d.eval_at(z), dd.eval_at(z));
        if dv.norm() == 0.0 {
            f64::INFINITY
        } else {
            0.5 * v.norm() / dv.norm()
        }
    };
    let mut w = w_start;
    for seg in path.waypoints.windows(2) {
        w = walk(&eval, &hint, seg[0], seg[1], w)?.end_value();
    }
    Ok(w)
}

/// Knots of a continuation along one segment. Between knots the branch is
/// the square root nearer the knot value at the start of the piece.
#[derive(Clone, Debug)]
pub(crate) struct Track {
    a: Complex64,
    b: Complex64,
    ts: Vec<f64>,
    ws: Vec<Complex64>,
}

impl Track {
    pub(crate) fn end_value(&self) -> Complex64 {
        *self.ws.last().unwrap()
    }

    /// Reference value for parameter `t`.
    fn reference(&self, t: f64) -> Complex64 {
        let k = self.ts.partition_point(|&x| x <= t);
        self.ws[k.saturating_sub(1).min(self.ws.len() - 1)]
    }

    pub(crate) fn point(&self, t: f64) -> Complex64 {
        self.a + (self.b - self.a) * t
    }
}

/// `√D` for `D = Π (z − z_i)`, evaluated in product form.
#[derive(Clone, Debug)]
pub(crate) struct RootSystem {
    pub(crate) roots: Vec<Complex64>,
}

impl RootSystem {
    pub(crate) fn new(roots: Vec<Complex64>) -> Self {
        RootSystem { roots }
    }

    /// `D(z)` with the factor of root `skip` removed.
    pub(crate) fn d_without(&self, z: Complex64, skip: Option<usize>) -> Complex64 {
        self.roots
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != skip)
            .map(|(_, r)| z - r)
            .product()
    }

    pub(crate) fn d(&self, z: Complex64) -> Complex64 {
        self.d_without(z, None)
    }

    pub(crate) fn nearest(&self, z: Complex64) -> (usize, f64) {
        self.roots
            .iter()
            .enumerate()
            .map(|(i, r)| (i, (z - r).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap_or((usize::MAX, f64::INFINITY))
    }

    /// Step length keeping the argument change of `√D` well under π/2:
    /// `min(¼·d_min, ½ / Σ 1/|z − z_i|)`.
    fn step_hint(&self, z: Complex64, skip: Option<usize>) -> f64 {
        let mut dmin = f64::INFINITY;
        let mut inv = 0.0;
        for (i, r) in self.roots.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let dist = (z - r).norm();
            dmin = dmin.min(dist);
            inv += 1.0 / dist;
        }
        if inv == 0.0 {
            return f64::INFINITY;
        }
        (0.25 * dmin).min(0.5 / inv)
    }

    fn track(&self, a: Complex64, b: Complex64, w_a: Complex64, skip: Option<usize>) -> Result<Track> {
        let eval = |z: Complex64| self.d_without(z, skip);
        let hint = |z: Complex64| self.step_hint(z, skip);
        walk(&eval, &hint, a, b, w_a)
    }

    /// `√D` at `b`, continued along the straight segment from `a`.
    pub(crate) fn continue_segment(&self, a: Complex64, b: Complex64, w_a: Complex64) -> Result<Complex64> {
        Ok(self.track(a, b, w_a, None)?.end_value())
    }

    /// Prepares `∫_a^b u/√D` along a segment avoiding the roots.
    pub(crate) fn regular(&self, a: Complex64, b: Complex64, w_a: Complex64) -> Result<Segment> {
        Ok(Segment::Regular(self.track(a, b, w_a, None)?))
    }

    /// Prepares `∫_{z_r}^{p} u/√D` where `w_p = √D(p)`, via `z = z_r + s²(p − z_r)`.
    ///
    /// With `c = √(p − z_r)` (principal) and `ψ(s)` the continued square root
    /// of `D/(z − z_r)`, the integrand becomes `2c·u(z)/ψ(s)`.
    pub(crate) fn leaving_root(&self, r: usize, p: Complex64, w_p: Complex64) -> Result<Segment> {
        let zr = self.roots[r];
        let c = (p - zr).sqrt();
        let psi_p = w_p / c;
        let track = self.track(p, zr, psi_p, Some(r))?;
        Ok(Segment::FromRoot { root: r, c, track })
    }

    fn sqrt_on(&self, track: &Track, t: f64, skip: Option<usize>) -> Complex64 {
        nearer_sqrt(self.d_without(track.point(t), skip), track.reference(t))
    }
}

/// A prepared piece of a path integral.
#[derive(Clone, Debug)]
pub(crate) enum Segment {
    /// Both ends away from the roots; oriented from the track start.
    Regular(Track),
    /// From root `root` to the free end `p`; the track runs from `p` to the root.
    FromRoot { root: usize, c: Complex64, track: Track },
}

impl Segment {
    /// `∫ u/√D` over the piece in its natural orientation (for `FromRoot`,
    /// from the root outwards).
    pub(crate) fn integrate(&self, sys: &RootSystem, u: &ComplexPoly, tol: f64, context: &str) -> Result<Quadrature> {
        match self {
            Segment::Regular(track) => {
                let dz = track.b - track.a;
                integrate(
                    |t| {
                        let z = track.point(t);
                        Ok(u.eval_at(z) * dz / sys.sqrt_on(track, t, None))
                    },
                    0.0,
                    1.0,
                    tol,
                    context,
                )
            }
            Segment::FromRoot { root, c, track } => {
                let skip = Some(*root);
                integrate(
                    |s| {
                        let t = 1.0 - s * s;
                        let z = track.point(t);
                        Ok(2.0 * c * u.eval_at(z) / sys.sqrt_on(track, t, skip))
                    },
                    0.0,
                    1.0,
                    tol,
                    context,
                )
            }
        }
    }
}
