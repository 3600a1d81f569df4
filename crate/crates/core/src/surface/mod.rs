//! The double cover `w² = D(z)`: paths between branch points, continuation
//! of `√D`, and period integrals `v_j(u) = ∫_{z_1}^{z_j} u/√D`.

mod branch;
mod paths;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

pub use branch::continue_sqrt;
pub use paths::{bent_paths, default_paths, detour_paths, DetourSide, PathSpec};

pub(crate) use branch::{RootSystem, Segment};
pub(crate) use paths::{route, segment_distance};

use crate::error::{Error, Result};
use crate::polynomials::{root_clusters, ComplexPoly, DEFAULT_CLUSTER_THRESHOLD};

/// Roots `z_1..z_2n` of a monic `D`, paths `z_1 → z_j`, and the value of
/// `√D` at an anchor point next to `z_1` that fixes every sign.
#[derive(Clone, Debug)]
pub struct BranchConfiguration {
    roots: Vec<Complex64>,
    paths: Vec<PathSpec>,
    anchor: Complex64,
    base_sheet: Complex64,
    min_distance: f64,
    clearance: f64,
    anchor_radius: f64,
    anchor_angle: f64,
    sys: RootSystem,
    plans: Vec<Vec<(Segment, f64)>>,
}

/// A complex integral with its error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
}

impl BranchConfiguration {
    /// Configuration with [`default_paths`] and the principal `√D` at the anchor.
    pub fn new(roots: Vec<Complex64>) -> Result<Self> {
        let paths = default_paths(&roots)?;
        Self::with_paths(roots, paths)
    }

    /// Configuration from explicit paths; path `j − 1` must run from root 0
    /// to root `j`.
    pub fn with_paths(roots: Vec<Complex64>, paths: Vec<PathSpec>) -> Result<Self> {
        let mut cfg = Self::unanchored(roots, paths)?;
        cfg.base_sheet = cfg.sys.d(cfg.anchor).sqrt();
        cfg.plans = cfg.build_plans()?;
        Ok(cfg)
    }

    /// Roots of a monic even-degree `D` with distinct roots.
    pub fn from_poly(d: &ComplexPoly) -> Result<Self> {
        let deg = d.degree().ok_or_else(|| Error::invalid("D is zero"))?;
        if deg == 0 || deg % 2 == 1 {
            return Err(Error::invalid(format!("D must have positive even degree, got {deg}")));
        }
        if (d.leading().unwrap() - 1.0).norm() > 1e-14 {
            return Err(Error::invalid("D must be monic"));
        }
        let clusters = root_clusters(d, DEFAULT_CLUSTER_THRESHOLD)?;
        if clusters.iter().any(|c| c.multiplicity > 1) {
            return Err(Error::invalid("D has repeated roots; split off the square part first"));
        }
        Self::new(clusters.into_iter().map(|c| c.center).collect())
    }

    fn unanchored(roots: Vec<Complex64>, paths: Vec<PathSpec>) -> Result<Self> {
        if roots.len() < 2 || roots.len() % 2 == 1 {
            return Err(Error::invalid(format!(
                "need an even number of roots (at least 2), got {}",
                roots.len()
            )));
        }
        if roots.iter().any(|r| !r.is_finite()) {
            return Err(Error::invalid("non-finite root"));
        }
        let min_distance = paths::min_pairwise_distance(&roots)?;
        if paths.len() != roots.len() - 1 {
            return Err(Error::invalid(format!(
                "expected {} paths, got {}",
                roots.len() - 1,
                paths.len()
            )));
        }
        let mut clearance = f64::INFINITY;
        for (idx, p) in paths.iter().enumerate() {
            let j = idx + 1;
            if p.start_index != Some(0) || p.end_index != Some(j) {
                return Err(Error::invalid(format!("path {j} must run from root 0 to root {j}")));
            }
            if p.start() != roots[0] || p.end() != roots[j] {
                return Err(Error::invalid(format!("path {j} endpoints do not match the roots")));
            }
            let c = p.clearance(&roots);
            if c <= 0.0 {
                return Err(Error::invalid(format!("path {j} touches another root")));
            }
            clearance = clearance.min(c);
        }
        let delta = 0.25 * min_distance;
        let first_len = paths
            .iter()
            .map(|p| (p.waypoints[1] - p.waypoints[0]).norm())
            .fold(f64::INFINITY, f64::min);
        let anchor_radius = (0.5 * delta).min(0.5 * first_len).min(0.5 * clearance);
        let mut dirs: Vec<f64> = paths.iter().map(|p| (p.waypoints[1] - p.waypoints[0]).arg()).collect();
        dirs.sort_by(f64::total_cmp);
        let mut best = (0.0, dirs[0] + PI);
        for i in 0..dirs.len() {
            let next = if i + 1 < dirs.len() {
                dirs[i + 1]
            } else {
                dirs[0] + 2.0 * PI
            };
            let gap = next - dirs[i];
            if gap > best.0 {
                best = (gap, dirs[i] + 0.5 * gap);
            }
        }
        let anchor_angle = best.1;
        let anchor = roots[0] + Complex64::from_polar(anchor_radius, anchor_angle);
        let sys = RootSystem::new(roots.clone());
        Ok(BranchConfiguration {
            roots,
            paths,
            anchor,
            base_sheet: Complex64::new(0.0, 0.0),
            min_distance,
            clearance,
            anchor_radius,
            anchor_angle,
            sys,
            plans: Vec::new(),
        })
    }

    /// The same configuration with `√D(anchor) = w`; `w` must be one of the
    /// two square roots.
    pub fn with_base_sheet(&self, w: Complex64) -> Result<Self> {
        let d = self.sys.d(self.anchor);
        if (w * w - d).norm() > 1e-10 * d.norm() {
            return Err(Error::invalid("base sheet is not a square root of D at the anchor"));
        }
        let mut cfg = self.clone();
        cfg.base_sheet = w;
        cfg.plans = cfg.build_plans()?;
        Ok(cfg)
    }

    /// The configuration on the other sheet: every integral changes sign.
    pub fn flipped(&self) -> Self {
        let mut cfg = self.clone();
        cfg.base_sheet = -cfg.base_sheet;
        for plan in &mut cfg.plans {
            for (_, sign) in plan.iter_mut() {
                *sign = -*sign;
            }
        }
        cfg
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn paths(&self) -> &[PathSpec] {
        &self.paths
    }

    /// Half the degree of `D`.
    pub fn n(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn anchor(&self) -> Complex64 {
        self.anchor
    }

    pub fn base_sheet(&self) -> Complex64 {
        self.base_sheet
    }

    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    /// Smallest distance of any path from a root it does not end at.
    pub fn clearance(&self) -> f64 {
        self.clearance
    }

    /// `D = Π (z − z_i)`.
    pub fn d(&self) -> ComplexPoly {
        ComplexPoly::from_roots(&self.roots)
    }

    /// `D(z)` in product form.
    pub fn eval_d(&self, z: Complex64) -> Complex64 {
        self.sys.d(z)
    }

    pub(crate) fn system(&self) -> &RootSystem {
        &self.sys
    }

    /// Point at angle `phi` on the anchor circle around `z_1`, with `√D`
    /// transported counterclockwise from the anchor.
    pub(crate) fn on_anchor_circle(&self, phi: f64) -> Result<(Complex64, Complex64)> {
        self.on_circle_around_base(phi, self.anchor_radius)
    }

    /// Like [`Self::on_anchor_circle`] but first moving radially from the
    /// anchor circle to radius `rho`, which must stay inside the disc that
    /// contains no other root.
    pub(crate) fn on_circle_around_base(&self, phi: f64, rho: f64) -> Result<(Complex64, Complex64)> {
        let z1 = self.roots[0];
        let sweep = (phi - self.anchor_angle).rem_euclid(2.0 * PI);
        let pieces = ((sweep / (PI / 12.0)).ceil() as usize).max(1);
        let mut z = self.anchor;
        let mut w = self.base_sheet;
        for k in 1..=pieces {
            let t = self.anchor_angle + sweep * k as f64 / pieces as f64;
            let next = z1 + Complex64::from_polar(self.anchor_radius, t);
            w = self.sys.continue_segment(z, next, w)?;
            z = next;
        }
        if rho != self.anchor_radius {
            let next = z1 + Complex64::from_polar(rho, sweep + self.anchor_angle);
            w = self.sys.continue_segment(z, next, w)?;
            z = next;
        }
        Ok((z, w))
    }

    /// `∫_a^b u/√D` along a straight segment clear of the roots, with `√D`
    /// continued from `w_a`. Returns the integral and `√D(b)`.
    pub fn integrate_segment(
        &self,
        u: &ComplexPoly,
        a: Complex64,
        b: Complex64,
        w_a: Complex64,
        tol: f64,
    ) -> Result<(Integral, Complex64)> {
        let seg = self.sys.regular(a, b, w_a)?;
        let w_b = match &seg {
            Segment::Regular(track) => track.end_value(),
            Segment::FromRoot { .. } => unreachable!(),
        };
        let q = seg.integrate(&self.sys, u, tol, "segment")?;
        Ok((
            Integral {
                value: q.value,
                error: q.error,
            },
            w_b,
        ))
    }

    /// `∫_{z_i}^p u/√D` along the straight segment from root `i`, on the
    /// sheet with `√D(p) = w_p`.
    pub fn integrate_from_root(
        &self,
        u: &ComplexPoly,
        i: usize,
        p: Complex64,
        w_p: Complex64,
        tol: f64,
    ) -> Result<Integral> {
        if i >= self.roots.len() {
            return Err(Error::invalid(format!("root index {i} out of range")));
        }
        let seg = self.sys.leaving_root(i, p, w_p)?;
        let q = seg.integrate(&self.sys, u, tol, "segment from root")?;
        Ok(Integral {
            value: q.value,
            error: q.error,
        })
    }

    /// Leaves `z_1` in direction `phi`: returns the point on the anchor
    /// circle, `√D` there, and `∫ u/√D` from `z_1` to it.
    pub fn leave_base(&self, u: &ComplexPoly, phi: f64, tol: f64) -> Result<(Complex64, Complex64, Integral)> {
        let (a, w_a) = self.on_anchor_circle(phi)?;
        let start = self.integrate_from_root(u, 0, a, w_a, tol)?;
        Ok((a, w_a, start))
    }

    /// Radius of the anchor circle around `z_1`.
    pub fn anchor_radius(&self) -> f64 {
        self.anchor_radius
    }

    fn build_plans(&self) -> Result<Vec<Vec<(Segment, f64)>>> {
        self.paths
            .iter()
            .enumerate()
            .map(|(idx, path)| {
                let j = idx + 1;
                let wp = &path.waypoints;
                let phi = (wp[1] - wp[0]).arg();
                let (a, w_a) = self.on_anchor_circle(phi)?;
                let mut plan = vec![(self.sys.leaving_root(0, a, w_a)?, 1.0)];
                let mut cur = a;
                let mut w = w_a;
                for &next in &wp[1..wp.len() - 1] {
                    let seg = self.sys.regular(cur, next, w)?;
                    if let Segment::Regular(track) = &seg {
                        w = track.end_value();
                    }
                    plan.push((seg, 1.0));
                    cur = next;
                }
                plan.push((self.sys.leaving_root(j, cur, w)?, -1.0));
                Ok(plan)
            })
            .collect()
    }

    /// `∫ u/√D` along path `j` (root index, `1 ≤ j < 2n`) with the branch
    /// continued from the anchor.
    pub fn period_integral(&self, u: &ComplexPoly, j: usize, tol: f64) -> Result<Integral> {
        if j == 0 || j >= self.roots.len() {
            return Err(Error::invalid(format!(
                "root index {j} out of range 1..{}",
                self.roots.len()
            )));
        }
        if !(tol > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        let plan = &self.plans[j - 1];
        let piece_tol = tol / plan.len() as f64;
        let mut value = Complex64::new(0.0, 0.0);
        let mut error = 0.0;
        for (i, (seg, sign)) in plan.iter().enumerate() {
            let q = seg.integrate(&self.sys, u, piece_tol, &format!("path {j}, piece {i}"))?;
            value += q.value * *sign;
            error += q.error;
        }
        Ok(Integral { value, error })
    }

    /// Integral over the closed loop that runs out along path `j` on one
    /// sheet and back on the other: twice the path integral.
    pub fn loop_integral(&self, u: &ComplexPoly, j: usize, tol: f64) -> Result<Integral> {
        let half = self.period_integral(u, j, tol / 2.0)?;
        Ok(Integral {
            value: 2.0 * half.value,
            error: 2.0 * half.error,
        })
    }

    /// `v_j(u)` for every `j = 2..2n` (indices `1..2n` here).
    pub fn periods(&self, u: &ComplexPoly, tol: f64) -> Result<Vec<Integral>> {
        (1..self.roots.len())
            .into_par_iter()
            .map(|j| self.period_integral(u, j, tol))
            .collect()
    }
}

/// `v_jk = ∫_{z_1}^{z_j} z^k/√D` for `j = 2..2n`, `k = 0..n−1`.
#[derive(Clone, Debug)]
pub struct PeriodMatrix {
    /// `entries[j − 1][k]` for root index `j`.
    pub entries: Vec<Vec<Complex64>>,
    /// Largest quadrature error estimate among the entries.
    pub max_error: f64,
    /// Requested tolerance.
    pub tol: f64,
    pub config: BranchConfiguration,
}

impl PeriodMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    /// `v_j(u)` assembled from the columns, for `u` of degree below `n`.
    pub fn apply(&self, u: &ComplexPoly) -> Vec<Complex64> {
        self.entries
            .iter()
            .map(|row| row.iter().enumerate().map(|(k, v)| u.coeff(k) * v).sum())
            .collect()
    }
}

pub fn period_matrix(config: &BranchConfiguration, tol: f64) -> Result<PeriodMatrix> {
    let rows = config.roots.len() - 1;
    let n = config.n();
    let cells: Vec<(usize, usize)> = (1..=rows).flat_map(|j| (0..n).map(move |k| (j, k))).collect();
    let values: Vec<Integral> = cells
        .par_iter()
        .map(|&(j, k)| {
            let u = ComplexPoly::monomial(Complex64::new(1.0, 0.0), k);
            config.period_integral(&u, j, tol).map_err(|e| match e {
                Error::Quadrature {
                    context,
                    estimate,
                    tol,
                    subdivisions,
                } => Error::Quadrature {
                    context: format!("period v[{j}][{k}]: {context}"),
                    estimate,
                    tol,
                    subdivisions,
                },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let mut entries = vec![vec![Complex64::new(0.0, 0.0); n]; rows];
    let mut max_error: f64 = 0.0;
    for (&(j, k), v) in cells.iter().zip(values) {
        entries[j - 1][k] = v.value;
        max_error = max_error.max(v.error);
    }
    Ok(PeriodMatrix {
        entries,
        max_error,
        tol,
        config: config.clone(),
    })
}
