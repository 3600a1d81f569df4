//! Z2 harmonic functions `f = Re ∫_{z_1}^z u/√D` on the plane punctured at
//! the roots of `D`.
//!
//! Only `|f|` is globally defined. Signed values depend on the continuation
//! of `√D` from the configuration's anchor, and an [`Evaluation`] records
//! the sheet it used so later evaluations can continue from it.

mod asymptotic;
mod growth;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polynomials::ComplexPoly;
use crate::surface::{route, segment_distance, BranchConfiguration, DetourSide, PathSpec};
use crate::upoly::{check_admissible, solve_u, vanishing_order_at_root};

pub use asymptotic::{asymptotic_fit, AsymptoticFit};
pub use growth::{construct_from_growth, GrowthSpec, MAX_GROWTH_DEGREE};

/// Relative size below which a Taylor coefficient of `u` counts as zero.
const U_ZERO_TOL: f64 = 1e-6;
const ROOT_SNAP: f64 = 1e-12;

/// `f` at one point, with the continuation that produced its sign.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub z: Complex64,
    pub abs_value: f64,
    pub signed_value: f64,
    /// The polyline followed from `z_1` (or from the previous evaluation).
    /// `None` when `z` is a root.
    pub path: Option<PathSpec>,
    /// `√D(z)` on the sheet reached by the path.
    pub sheet: Complex64,
    /// A value of the primitive `∫ u/√D` at `z`; its real part is `signed_value`.
    pub primitive: Complex64,
    pub error: f64,
}

/// Degree of a zero of `f`: `k + ½` at a branch point, an integer elsewhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree {
    twice: u32,
}

impl Degree {
    pub fn half_integer(k: u32) -> Self {
        Degree { twice: 2 * k + 1 }
    }

    pub fn integer(k: u32) -> Self {
        Degree { twice: 2 * k }
    }

    pub fn is_half_integer(&self) -> bool {
        self.twice % 2 == 1
    }

    pub fn twice(&self) -> u32 {
        self.twice
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_half_integer() {
            write!(f, "{}/2", self.twice)
        } else {
            write!(f, "{}", self.twice / 2)
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct State {
    z: Complex64,
    w: Complex64,
    primitive: Complex64,
    error: f64,
}

#[derive(Debug)]
struct Cached {
    state: State,
    waypoints: Vec<Complex64>,
    tol: f64,
}

type Cell = (i64, i64);

/// `f = Re ∫_{z_1}^z u/√D` for an admissible `u`.
pub struct HarmonicFunction {
    u: ComplexPoly,
    config: BranchConfiguration,
    tol: f64,
    max_residual: f64,
    cache: Mutex<HashMap<Cell, Arc<Cached>>>,
}

impl Clone for HarmonicFunction {
    fn clone(&self) -> Self {
        HarmonicFunction {
            u: self.u.clone(),
            config: self.config.clone(),
            tol: self.tol,
            max_residual: self.max_residual,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl fmt::Debug for HarmonicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HarmonicFunction")
            .field("u", &self.u)
            .field("roots", &self.config.roots())
            .field("tol", &self.tol)
            .field("max_residual", &self.max_residual)
            .finish()
    }
}

impl HarmonicFunction {
    /// Wraps `u` after checking `max |Re v_j(u)| < tol`.
    pub fn new(u: ComplexPoly, config: BranchConfiguration, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        let report = check_admissible(&u, &config, tol)?;
        if !report.admissible() {
            return Err(Error::invalid(format!(
                "u is not admissible: max |Re v_j(u)| = {:e} ≥ {tol:e}",
                report.max_residual
            )));
        }
        Ok(HarmonicFunction {
            u,
            config,
            tol,
            max_residual: report.max_residual,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn u(&self) -> &ComplexPoly {
        &self.u
    }

    pub fn config(&self) -> &BranchConfiguration {
        &self.config
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `max |Re v_j(u)|` measured when the function was built.
    pub fn admissibility_residual(&self) -> f64 {
        self.max_residual
    }

    /// The anchor point next to `z_1` and `√D` there; every signed value is
    /// relative to this choice.
    pub fn sign_anchor(&self) -> (Complex64, Complex64) {
        (self.config.anchor(), self.config.base_sheet())
    }

    /// The same function under the opposite trivialization, so `−f`.
    pub fn flipped(&self) -> Self {
        HarmonicFunction {
            u: self.u.clone(),
            config: self.config.flipped(),
            tol: self.tol,
            max_residual: self.max_residual,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// `s·f` for a real `s`, e.g. `λ·G = ln|p + q√D|` for a Pellian `D`.
    pub fn scaled(&self, s: f64) -> Self {
        HarmonicFunction {
            u: self.u.map(|c| c * s),
            config: self.config.clone(),
            tol: self.tol * s.abs().max(1.0),
            max_residual: self.max_residual * s.abs(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn delta(&self) -> f64 {
        0.25 * self.config.min_distance()
    }

    fn nearest_root(&self, z: Complex64) -> (usize, f64) {
        self.config.system().nearest(z)
    }

    /// Whether `z` is a root up to rounding. Roots of a numeric `D` carry
    /// errors far below this, and continuing `√D` that close would never end.
    fn on_root(&self, z: Complex64) -> bool {
        let (i, d) = self.nearest_root(z);
        d <= ROOT_SNAP * (1.0 + self.config.roots()[i].norm())
    }

    /// `z` pushed radially out to distance `2δ` from its nearest root, if closer.
    fn gate(&self, z: Complex64) -> Complex64 {
        let (i, d) = self.nearest_root(z);
        let r = self.config.roots()[i];
        if d >= 2.0 * self.delta() || self.on_root(z) {
            z
        } else {
            r + (z - r) * (2.0 * self.delta() / d)
        }
    }

    /// `f(z)` continued from `z_1` along a path that leaves `z_1` towards
    /// `z` and bends around every other root.
    pub fn eval_f(&self, z: Complex64, tol: f64) -> Result<Evaluation> {
        if !z.is_finite() {
            return Err(Error::invalid("evaluation point is not finite"));
        }
        let (i, d) = self.nearest_root(z);
        if self.on_root(z) {
            return Ok(self.at_root(z));
        }
        let delta = self.delta();
        let z1 = self.config.roots()[0];
        if i == 0 && d < 2.0 * delta {
            // inside the disc around z_1: one radial piece from the root
            let phi = (z - z1).arg();
            let (_, w) = self.config.on_circle_around_base(phi, d)?;
            let q = self.config.integrate_from_root(&self.u, 0, z, w, tol)?;
            let path = PathSpec::new(vec![z1, z], Some(0), None)?;
            return Ok(self.finish(
                State {
                    z,
                    w,
                    primitive: q.value,
                    error: q.error,
                },
                path,
            ));
        }
        if d >= 2.0 * delta {
            if let Some(cached) = self.cached_start(z, tol)? {
                let mut waypoints = cached.waypoints.clone();
                let state = self.advance(cached.state, z, tol, &mut waypoints)?;
                return Ok(self.finish(state, PathSpec::new(waypoints, Some(0), None)?));
            }
        }
        let (state, waypoints) = self.start_at_base(z, tol)?;
        Ok(self.finish(state, PathSpec::new(waypoints, Some(0), None)?))
    }

    /// `f(z)` continued from an earlier evaluation, so that signs agree
    /// locally with it.
    pub fn eval_from(&self, from: &Evaluation, z: Complex64, tol: f64) -> Result<Evaluation> {
        if !z.is_finite() {
            return Err(Error::invalid("evaluation point is not finite"));
        }
        if self.on_root(z) {
            return Ok(self.at_root(z));
        }
        if from.path.is_none() {
            // a root carries no sheet; start afresh
            return self.eval_f(z, tol);
        }
        let start = State {
            z: from.z,
            w: from.sheet,
            primitive: from.primitive,
            error: from.error,
        };
        let mut waypoints = vec![from.z];
        let state = self.advance(start, z, tol, &mut waypoints)?;
        Ok(self.finish(state, PathSpec::new(waypoints, None, None)?))
    }

    fn at_root(&self, z: Complex64) -> Evaluation {
        Evaluation {
            z,
            abs_value: 0.0,
            signed_value: 0.0,
            path: None,
            sheet: Complex64::new(0.0, 0.0),
            primitive: Complex64::new(0.0, 0.0),
            error: 0.0,
        }
    }

    fn finish(&self, state: State, path: PathSpec) -> Evaluation {
        Evaluation {
            z: state.z,
            abs_value: state.primitive.re.abs(),
            signed_value: state.primitive.re,
            path: Some(path),
            sheet: state.w,
            primitive: state.primitive,
            error: state.error,
        }
    }

    /// Full evaluation from `z_1` for a point outside the disc around `z_1`.
    fn start_at_base(&self, z: Complex64, tol: f64) -> Result<(State, Vec<Complex64>)> {
        let z1 = self.config.roots()[0];
        let phi = (self.gate(z) - z1).arg();
        let (a, w_a, start) = self.config.leave_base(&self.u, phi, tol / 2.0)?;
        let mut waypoints = vec![z1, a];
        let state = State {
            z: a,
            w: w_a,
            primitive: start.value,
            error: start.error,
        };
        let state = self.advance(state, z, tol / 2.0, &mut waypoints)?;
        Ok((state, waypoints))
    }

    /// Moves `state` to `target`: radially out of a root's `2δ`-disc, around
    /// roots on detour arcs, and radially in again. A target within `δ` of
    /// a root is finished by integrating from that root, where `f` vanishes.
    fn advance(&self, state: State, target: Complex64, tol: f64, waypoints: &mut Vec<Complex64>) -> Result<State> {
        let delta = self.delta();
        let roots = self.config.roots();
        let g_from = self.gate(state.z);
        let g_to = self.gate(target);
        let mut legs = vec![state.z];
        let push = |p: Complex64, legs: &mut Vec<Complex64>| {
            if (p - *legs.last().unwrap()).norm() > 1e-15 * (1.0 + p.norm()) {
                legs.push(p);
            }
        };
        push(g_from, &mut legs);
        if g_to != g_from {
            for p in route(g_from, g_to, roots, &[], delta, DetourSide::Near)
                .into_iter()
                .skip(1)
            {
                push(p, &mut legs);
            }
        }
        let (k, dist) = self.nearest_root(target);
        let near = dist < delta;
        if !near {
            push(target, &mut legs);
        }
        let pieces = legs.len().max(2) - 1 + near as usize;
        let piece_tol = tol / pieces as f64;
        let mut s = state;
        for pair in legs.windows(2) {
            let (q, w) = self
                .config
                .integrate_segment(&self.u, pair[0], pair[1], s.w, piece_tol)?;
            s = State {
                z: pair[1],
                w,
                primitive: s.primitive + q.value,
                error: s.error + q.error,
            };
        }
        waypoints.extend(legs.iter().skip(1));
        if near {
            let w = self.config.system().continue_segment(s.z, target, s.w)?;
            let q = self.config.integrate_from_root(&self.u, k, target, w, piece_tol)?;
            // f vanishes at the root, so the real part restarts there
            s = State {
                z: target,
                w,
                primitive: q.value,
                error: s.error + q.error,
            };
            if (target - *waypoints.last().unwrap()).norm() > 0.0 {
                waypoints.push(target);
            }
        }
        Ok(s)
    }

    /// `(√D, ∫u/√D)` at `target`, continued from a point `z` where they are
    /// `(w, primitive)`. Short steps well clear of the roots go straight.
    pub(crate) fn continue_value(
        &self,
        z: Complex64,
        w: Complex64,
        primitive: Complex64,
        target: Complex64,
        tol: f64,
    ) -> Result<(Complex64, Complex64)> {
        if self.on_root(target) {
            return Ok((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
        }
        if w == Complex64::new(0.0, 0.0) {
            let e = self.eval_f(target, tol)?;
            return Ok((e.sheet, e.primitive));
        }
        let clear = self
            .config
            .roots()
            .iter()
            .map(|&r| segment_distance(r, z, target))
            .fold(f64::INFINITY, f64::min);
        if clear >= (target - z).norm() {
            let (q, w_t) = self.config.integrate_segment(&self.u, z, target, w, tol)?;
            return Ok((w_t, primitive + q.value));
        }
        let start = State {
            z,
            w,
            primitive,
            error: 0.0,
        };
        let s = self.advance(start, target, tol, &mut vec![z])?;
        Ok((s.w, s.primitive))
    }

    /// Start state at the centre of `z`'s cache cell, if that centre is clear
    /// of the roots.
    fn cached_start(&self, z: Complex64, tol: f64) -> Result<Option<Arc<Cached>>> {
        let h = self.delta();
        let z1 = self.config.roots()[0];
        let rel = (z - z1) / h;
        let cell = (rel.re.floor() as i64, rel.im.floor() as i64);
        let centre = z1 + h * Complex64::new(cell.0 as f64 + 0.5, cell.1 as f64 + 0.5);
        if self.nearest_root(centre).1 < 2.0 * h {
            return Ok(None);
        }
        if let Some(hit) = self.cache.lock().unwrap().get(&cell) {
            if hit.tol <= tol / 2.0 {
                return Ok(Some(hit.clone()));
            }
        }
        let (state, waypoints) = self.start_at_base(centre, tol / 2.0)?;
        let entry = Arc::new(Cached {
            state,
            waypoints,
            tol: tol / 2.0,
        });
        // concurrent callers compute equivalent entries; keep the most accurate
        let mut cache = self.cache.lock().unwrap();
        let slot = cache.entry(cell).or_insert_with(|| entry.clone());
        if slot.tol > entry.tol {
            *slot = entry;
        }
        Ok(Some(slot.clone()))
    }

    /// Degree of the zero of `f` at `z0`: `k + ½` at a root where `u`
    /// vanishes to order `k`, and `m + 1` at an interior zero where `u`
    /// vanishes to order `m`.
    pub fn degree_at(&self, z0: Complex64, tol: f64) -> Result<Degree> {
        let scale = 1.0 + self.config.roots().iter().map(|r| r.norm()).fold(0.0, f64::max);
        let (i, d) = self.nearest_root(z0);
        if self.u.is_zero() {
            return Err(Error::invalid("f is identically zero; degrees are undefined"));
        }
        if d <= 1e-8 * scale {
            let k = vanishing_order_at_root(&self.u, self.config.roots()[i], U_ZERO_TOL).expect("u is nonzero");
            return Ok(Degree::half_integer(k as u32));
        }
        let value = self.eval_f(z0, tol)?;
        if value.abs_value > tol {
            return Err(Error::invalid(format!(
                "f({z0}) = {:e} is not zero",
                value.signed_value
            )));
        }
        let m = vanishing_order_at_root(&self.u, z0, U_ZERO_TOL).expect("u is nonzero");
        Ok(Degree::integer(m as u32 + 1))
    }
}

/// The Green's function `G` with `U(G) = ln ρ`: `u` is the monic `U_D`.
///
/// Checks the growth on circles of radius `10, 20, 40` (scaled by the root
/// size): the spread of `|G|` around each circle must shrink and the slope
/// in `ln ρ` must be `1`.
pub fn green_function(config: &BranchConfiguration, tol: f64) -> Result<HarmonicFunction> {
    let solved = solve_u(config, tol / 10.0)?;
    let hf = HarmonicFunction::new(solved.u, config.clone(), tol)?;
    let scale = config.roots().iter().map(|r| r.norm()).fold(1.0, f64::max);
    let radii = [10.0 * scale, 20.0 * scale, 40.0 * scale];
    let mut means = Vec::new();
    let mut spreads = Vec::new();
    for &r in &radii {
        let values = asymptotic::circle_values(&hf, r, 32, tol)?;
        let mean = values.iter().map(|v| v.abs()).sum::<f64>() / values.len() as f64;
        let spread = values.iter().map(|v| (v.abs() - mean).abs()).fold(0.0, f64::max);
        means.push(mean);
        spreads.push(spread);
    }
    let slope = (means[2] - means[0]) / (radii[2] / radii[0]).ln();
    let floor = 1e3 * tol * (1.0 + means[2]);
    if !(spreads[2] <= spreads[0].max(floor)) || !((slope - 1.0).abs() < 1e-6 + floor) {
        return Err(Error::Postcondition(format!(
            "G does not grow like ln ρ: slope {slope}, spreads {spreads:?}"
        )));
    }
    Ok(hf)
}
