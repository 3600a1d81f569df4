use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::HarmonicFunction;
use crate::error::{Error, Result};
use crate::polynomials::{sqrt_series_at_infinity, ComplexPoly, LaurentTail};
use crate::surface::{period_matrix, BranchConfiguration};

/// Largest polynomial growth degree `K` accepted.
pub const MAX_GROWTH_DEGREE: usize = 8;

/// Prescribed unbounded part `c0 ln ρ + Re Σ_{k=1}^K c_k z^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthSpec {
    pub c0: f64,
    /// `c_1..c_K`
    pub c: Vec<Complex64>,
}

impl GrowthSpec {
    pub fn new(c0: f64, c: Vec<Complex64>) -> Result<Self> {
        let spec = GrowthSpec { c0, c };
        spec.validate()?;
        Ok(spec)
    }

    /// Pure logarithmic growth `c0 ln ρ`.
    pub fn log(c0: f64) -> Self {
        GrowthSpec { c0, c: Vec::new() }
    }

    /// `K`, the top polynomial degree.
    pub fn degree(&self) -> usize {
        self.c.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.c0.is_finite() || self.c.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("growth coefficients must be finite"));
        }
        if self.c.len() > MAX_GROWTH_DEGREE {
            return Err(Error::invalid(format!(
                "growth degree {} exceeds the cap {MAX_GROWTH_DEGREE}",
                self.c.len()
            )));
        }
        if self.c.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            return Err(Error::invalid("top growth coefficient c_K is zero"));
        }
        Ok(())
    }

    /// `d/dz (c0 ln z + Σ c_k z^k) = c0/z + Σ k c_k z^{k−1}` as a finite Laurent series.
    fn derivative_series(&self) -> LaurentTail<Complex64> {
        let k = self.c.len() as i64;
        let top = (k - 1).max(-1);
        let coeffs = (-1..=top)
            .rev()
            .map(|p| {
                if p == -1 {
                    Complex64::new(self.c0, 0.0)
                } else {
                    self.c[p as usize] * (p + 1) as f64
                }
            })
            .collect();
        LaurentTail::exact(top, coeffs)
    }
}

/// The Z2 harmonic function whose unbounded part is `spec`.
///
/// `u_0` is the polynomial part of `√D·(c0/z + Σ k c_k z^{k−1})`; the
/// correction `u_1 = Σ_{k<n−1} (a_k − i b_k) z^k − i b_{n−1} z^{n−1}` solves
/// `Re v_j(u_1) = Re v_j(u_0)` for all `j`, and `u = u_0 − u_1`.
pub fn construct_from_growth(config: &BranchConfiguration, spec: &GrowthSpec, tol: f64) -> Result<HarmonicFunction> {
    spec.validate()?;
    let n = config.n();
    let k = spec.degree() as i64;
    let d = config.d();
    let series = sqrt_series_at_infinity(&d, -k - 1)?;
    let u0 = series.mul(&spec.derivative_series()).nonnegative_part()?;
    if u0.is_zero() {
        return HarmonicFunction::new(u0, config.clone(), tol);
    }

    let inner = tol / 100.0;
    let pm = period_matrix(config, inner)?;
    let rhs: Vec<f64> = config.periods(&u0, inner)?.iter().map(|p| p.value.re).collect();
    let rows = pm.rows();
    let unknowns = 2 * n - 1;
    let a = DMatrix::from_fn(rows, unknowns, |j, col| {
        let k = col / 2;
        let v = pm.entries[j][k];
        if col % 2 == 0 && col + 1 < unknowns {
            v.re
        } else {
            v.im
        }
    });
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax) {
        return Err(Error::IllConditioned(format!(
            "correction system has singular values {smin:e} … {smax:e}"
        )));
    }
    let x = svd
        .solve(&DVector::from_vec(rhs), 0.0)
        .map_err(|e| Error::IllConditioned(format!("correction system: {e}")))?;

    let mut u1 = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n - 1 {
        u1[k] = Complex64::new(x[2 * k], -x[2 * k + 1]);
    }
    u1[n - 1] = Complex64::new(0.0, -x[2 * n - 2]);
    let u = &u0 - &ComplexPoly::new(u1);

    let expected = n + spec.degree() - 1;
    if (spec.degree() > 0 || spec.c0 != 0.0) && u.degree() != Some(expected) {
        return Err(Error::Postcondition(format!(
            "constructed u has degree {:?}, expected n + K − 1 = {expected}",
            u.degree()
        )));
    }
    HarmonicFunction::new(u, config.clone(), tol)
}
