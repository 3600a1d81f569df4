//! The distinguished polynomial `U` of degree `n − 1`: the admissible
//! polynomial whose periods `v_j(U)` are all purely imaginary.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polynomials::{
    square_free_split, square_free_split_exact, ComplexPoly, ExactPoly, DEFAULT_CLUSTER_THRESHOLD,
};
use crate::surface::{period_matrix, BranchConfiguration, PeriodMatrix};

/// Smallest accepted ratio between the two smallest singular values.
pub const MIN_NULLSPACE_GAP: f64 = 10.0;

#[derive(Clone, Debug)]
pub struct USolveResult {
    /// Monic, degree `n − 1`.
    pub u: ComplexPoly,
    /// Second-smallest over smallest singular value of the constraint matrix,
    /// the smallest one floored at the quadrature error.
    pub nullspace_gap: f64,
    /// `|Im lead| / |lead|` of the raw null vector.
    pub imag_leading_before_normalization: f64,
    /// Largest over second-smallest singular value.
    pub condition: f64,
    pub singular_values: Vec<f64>,
    /// `max_j |Re v_j(U)|` measured on the same period matrix.
    pub residual: f64,
    pub periods: PeriodMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    /// `|Re v_j(u)|` for `j = 2..2n`.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tol_used: f64,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.max_residual < self.tol_used
    }
}

/// Solves for `U` from the real nullspace of `(Re v_jk, Im v_jk)`.
///
/// A coefficient `c_k = a_k − i·b_k` contributes `a_k·Re v_jk + b_k·Im v_jk`
/// to `Re v_j(u)`, so the null vector `(a_0, b_0, …)` gives the coefficients.
pub fn solve_u(config: &BranchConfiguration, tol: f64) -> Result<USolveResult> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let n = config.n();
    let pm = period_matrix(config, tol / 100.0)?;
    let rows = 2 * n - 1;
    let cols = 2 * n;
    // padded with a zero row so the SVD is square and exposes the kernel
    let mut m = DMatrix::<f64>::zeros(cols, cols);
    for j in 0..rows {
        for k in 0..n {
            let v = pm.entries[j][k];
            m[(j, 2 * k)] = v.re;
            m[(j, 2 * k + 1)] = v.im;
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smallest = sv[cols - 1];
    let second = sv[cols - 2];
    let floor = pm.max_error.max(f64::EPSILON * sv[0]) * (rows as f64).sqrt();
    let nullspace_gap = second / smallest.max(floor);
    if nullspace_gap < MIN_NULLSPACE_GAP {
        return Err(Error::IllConditioned(format!(
            "nullspace is not one-dimensional: singular values {second:e} and {smallest:e} (gap {nullspace_gap:.3})"
        )));
    }
    let x = v_t.row(order[cols - 1]);
    let raw: Vec<Complex64> = (0..n).map(|k| Complex64::new(x[2 * k], -x[2 * k + 1])).collect();
    let lead = raw[n - 1];
    if lead.norm() == 0.0 {
        return Err(Error::Postcondition(
            "null vector has a vanishing leading coefficient".into(),
        ));
    }
    let imag_leading = lead.im.abs() / lead.norm();
    let u = ComplexPoly::new(raw.iter().map(|c| c / lead).collect()).monic();
    let residual = pm.apply(&u).iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    if imag_leading >= 10.0 * tol {
        return Err(Error::Postcondition(format!(
            "leading coefficient is not real: |Im|/|lead| = {imag_leading:e}"
        )));
    }
    if residual >= 10.0 * tol {
        return Err(Error::Postcondition(format!(
            "admissibility residual {residual:e} exceeds 10·tol"
        )));
    }
    Ok(USolveResult {
        u,
        nullspace_gap,
        imag_leading_before_normalization: imag_leading,
        condition: sv[0] / second,
        singular_values: sv,
        residual,
        periods: pm,
    })
}

/// `U_D = D_1·U_{D_0}` for `D = D_1²·D_0` with `D_0` square-free, by the
/// floating split. A non-monic `D` is first divided by its leading coefficient.
pub fn u_with_multiplicity(d: &ComplexPoly, tol: f64) -> Result<ComplexPoly> {
    let (d1, d0) = square_free_split(&d.monic(), DEFAULT_CLUSTER_THRESHOLD)?;
    with_square_part(&d1, &d0, tol)
}

/// As [`u_with_multiplicity`], splitting `D` exactly.
pub fn u_with_multiplicity_exact(d: &ExactPoly, tol: f64) -> Result<ComplexPoly> {
    let (d1, d0) = square_free_split_exact(&d.monic())?;
    with_square_part(&d1.to_complex(), &d0.to_complex(), tol)
}

fn with_square_part(d1: &ComplexPoly, d0: &ComplexPoly, tol: f64) -> Result<ComplexPoly> {
    match d0.degree() {
        None => return Err(Error::invalid("D is zero")),
        Some(0) => return Err(Error::invalid("D is a perfect square; √D has no branch points")),
        Some(k) if k % 2 == 1 => return Err(Error::invalid("D has odd degree")),
        _ => {}
    }
    let cfg = BranchConfiguration::from_poly(&d0.monic())?;
    let u0 = solve_u(&cfg, tol)?.u;
    Ok((d1 * &u0).monic())
}

/// `|Re v_j(u)|` for every path of the configuration.
pub fn check_admissible(u: &ComplexPoly, config: &BranchConfiguration, tol: f64) -> Result<AdmissibilityReport> {
    let periods = config.periods(u, tol / 10.0)?;
    let residuals: Vec<f64> = periods.iter().map(|p| p.value.re.abs()).collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(AdmissibilityReport {
        residuals,
        max_residual,
        tol_used: tol,
    })
}

/// Smallest `k` with `|u^{(k)}(z_i)| > tol·max|coeff(u)|`; `None` for `u = 0`.
pub fn vanishing_order_at_root(u: &ComplexPoly, z_i: Complex64, tol: f64) -> Option<usize> {
    let deg = u.degree()?;
    let scale = u.max_abs_coeff();
    (0..=deg).find(|&k| u.derivative_at(z_i, k).norm() > tol * scale)
}
