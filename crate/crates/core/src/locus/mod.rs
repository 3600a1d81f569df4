//! The zero locus `{f = 0}` of a Z2 harmonic function, traced on a lattice,
//! and a check of its expected structure: curves end at roots of `D`, meet
//! equiangularly, and never close up.

mod trace;
mod validate;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::surface::segment_distance;

pub use trace::trace_zero_locus;
pub use validate::{validate_structure, StructureReport, VertexReport, DEFAULT_ANGLE_TOL};

/// Axis-aligned rectangle cut into `resolution × resolution` cells.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceDomain {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub resolution: usize,
}

impl TraceDomain {
    pub fn new(re: (f64, f64), im: (f64, f64), resolution: usize) -> Result<Self> {
        let dom = TraceDomain {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
            resolution,
        };
        let finite = [re.0, re.1, im.0, im.1].iter().all(|v| v.is_finite());
        if !finite || !(re.1 > re.0) || !(im.1 > im.0) {
            return Err(Error::invalid("bounding box must be a finite, non-empty rectangle"));
        }
        if resolution < 8 {
            return Err(Error::invalid("resolution must be at least 8 cells per side"));
        }
        Ok(dom)
    }

    /// `[−w, w]²`.
    pub fn square(half_width: f64, resolution: usize) -> Result<Self> {
        Self::new((-half_width, half_width), (-half_width, half_width), resolution)
    }

    /// Smallest square centred on the roots' bounding box that keeps a
    /// quarter of its width (at least 2 cells) free around them.
    pub fn around(roots: &[Complex64], resolution: usize) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::invalid("no roots to enclose"));
        }
        let lo_re = roots.iter().map(|r| r.re).fold(f64::INFINITY, f64::min);
        let hi_re = roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max);
        let lo_im = roots.iter().map(|r| r.im).fold(f64::INFINITY, f64::min);
        let hi_im = roots.iter().map(|r| r.im).fold(f64::NEG_INFINITY, f64::max);
        let span = (hi_re - lo_re).max(hi_im - lo_im).max(1.0);
        let half = span;
        let c = Complex64::new(0.5 * (lo_re + hi_re), 0.5 * (lo_im + hi_im));
        Self::new((c.re - half, c.re + half), (c.im - half, c.im + half), resolution)
    }

    pub fn cell_size(&self) -> (f64, f64) {
        let n = self.resolution as f64;
        ((self.re_max - self.re_min) / n, (self.im_max - self.im_min) / n)
    }

    /// The larger side of a cell.
    pub fn cell_width(&self) -> f64 {
        let (hx, hy) = self.cell_size();
        hx.max(hy)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    /// Distance from `z` to the nearest side, in cells (negative outside).
    fn margin_cells(&self, z: Complex64) -> f64 {
        let (hx, hy) = self.cell_size();
        ((z.re - self.re_min) / hx)
            .min((self.re_max - z.re) / hx)
            .min((z.im - self.im_min) / hy)
            .min((self.im_max - z.im) / hy)
    }

    /// Whether `z` is on the boundary, up to half a cell.
    pub fn on_boundary(&self, z: Complex64) -> bool {
        self.margin_cells(z).abs() <= 0.5
    }

    fn check_roots(&self, roots: &[Complex64]) -> Result<()> {
        for r in roots {
            if self.margin_cells(*r) < 2.0 {
                return Err(Error::invalid(format!(
                    "root {r} is closer than 2 cells to the edge of the bounding box"
                )));
            }
        }
        Ok(())
    }
}

/// What a curve runs into at one of its ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EndpointTag {
    /// The root `z_i` of `D` (0-based index).
    Root(usize),
    DomainBoundary,
    /// A point where at least three curve ends meet away from the roots.
    Junction(Complex64),
    /// A loose end matching none of the above; a tracing failure.
    Unresolved(Complex64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub points: Vec<Complex64>,
    pub start: EndpointTag,
    pub end: EndpointTag,
}

impl Curve {
    pub fn is_closed(&self) -> bool {
        self.points.len() > 2 && self.points.first() == self.points.last()
    }

    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }
}

/// A point where at least three curve ends meet.
#[derive(Clone, Debug, PartialEq)]
pub struct Junction {
    pub point: Complex64,
    /// Set when the junction is a root of `D`.
    pub root: Option<usize>,
    /// Directions of the incident curves, radians in `[0, 2π)`, sorted.
    pub directions: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct CurveSet {
    pub curves: Vec<Curve>,
    pub junctions: Vec<Junction>,
    pub domain: TraceDomain,
}

impl CurveSet {
    pub fn polylines(&self) -> Vec<Vec<Complex64>> {
        self.curves.iter().map(|c| c.points.clone()).collect()
    }

    /// Hausdorff distance between the two sets of polylines.
    pub fn hausdorff_to(&self, other: &CurveSet) -> f64 {
        hausdorff(&self.polylines(), &other.polylines())
    }
}

/// Symmetric Hausdorff distance between two unions of polylines, measured
/// from the vertices of each to the segments of the other.
pub fn hausdorff(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    one_sided(a, b).max(one_sided(b, a))
}

fn one_sided(from: &[Vec<Complex64>], to: &[Vec<Complex64>]) -> f64 {
    let points = from.iter().flatten();
    let mut worst: f64 = 0.0;
    for &p in points {
        let mut best = f64::INFINITY;
        for line in to {
            if line.len() == 1 {
                best = best.min((p - line[0]).norm());
            }
            for w in line.windows(2) {
                best = best.min(segment_distance(p, w[0], w[1]));
            }
        }
        worst = worst.max(best);
    }
    if from.iter().all(|l| l.is_empty()) {
        return 0.0;
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hausdorff_of_parallel_segments() {
        let a = vec![vec![c(-1.0, 0.0), c(1.0, 0.0)]];
        let b = vec![vec![c(-1.0, 0.1), c(0.0, 0.1), c(1.0, 0.1)]];
        assert!((hausdorff(&a, &b) - 0.1).abs() < 1e-12);
        let longer = vec![vec![c(-1.0, 0.0), c(1.5, 0.0)]];
        assert!((hausdorff(&a, &longer) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn domain_checks() {
        assert!(TraceDomain::square(2.0, 4).is_err());
        assert!(TraceDomain::new((1.0, 0.0), (0.0, 1.0), 100).is_err());
        let dom = TraceDomain::square(2.0, 400).unwrap();
        assert!((dom.cell_width() - 0.01).abs() < 1e-15);
        assert!(dom.check_roots(&[c(1.0, 0.0), c(-1.0, 0.0)]).is_ok());
        assert!(dom.check_roots(&[c(1.995, 0.0)]).is_err());
        assert!(dom.on_boundary(c(2.0, 0.3)));
        assert!(!dom.on_boundary(c(1.9, 0.3)));
        let around = TraceDomain::around(&[c(1.0, 0.0), c(-1.0, 0.0)], 100).unwrap();
        assert!(around.check_roots(&[c(1.0, 0.0), c(-1.0, 0.0)]).is_ok());
    }
}
