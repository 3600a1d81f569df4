use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{Method, PellCertificate, Solution};
use crate::error::{Error, Result};
use crate::polynomials::ComplexPoly;
use crate::surface::{route, BranchConfiguration, DetourSide};

const FIT_LIMIT: f64 = 1e-6;
const IDENTITY_LIMIT: f64 = 1e-8;

/// Recovers `(p, q)` from `h = exp(λ∫_{z_1}^z U/√D) = p + q√D`.
///
/// `h` is sampled at `m` points of the circle of radius `2·max|z_i| + 1`;
/// `p = (h + 1/h)/2` and `q = (h − 1/h)/(2√D)` are then fitted by least
/// squares with `deg p = round(λ)` and `deg q = deg p − n`.
pub fn reconstruct_pell_solution(
    config: &BranchConfiguration,
    u: &ComplexPoly,
    lambda: f64,
    m: usize,
    tol: f64,
) -> Result<PellCertificate> {
    let n = config.n();
    let deg_p = lambda.round();
    if !(deg_p >= n as f64) || (lambda - deg_p).abs() > 1e-6 * lambda.max(1.0) {
        return Err(Error::invalid(format!(
            "λ = {lambda} is not an integer at least n = {n}"
        )));
    }
    let deg_p = deg_p as usize;
    let deg_q = deg_p - n;
    if m < 4 * (deg_p + 1) {
        return Err(Error::invalid(format!(
            "need at least {} samples, got {m}",
            4 * (deg_p + 1)
        )));
    }
    let roots = config.roots();
    let radius = 2.0 * roots.iter().map(|r| r.norm()).fold(0.0, f64::max) + 1.0;
    let z1 = roots[0];
    let phi0 = if z1.norm() > 0.0 { z1.arg() } else { 0.0 };
    let dir = Complex64::from_polar(1.0, phi0);

    // out from z_1 to the circle
    let piece_tol = tol / (m + 8) as f64;
    let (a, w_a, start) = config.leave_base(u, phi0, piece_tol)?;
    let proj = (z1 * dir.conj()).re;
    let t = -proj + (proj * proj - z1.norm_sqr() + radius * radius).sqrt();
    let s0 = z1 + dir * t;
    let delta = 0.25 * config.min_distance();
    let mut f = start.value;
    let mut w = w_a;
    let mut cur = a;
    for next in route(a, s0, roots, &[0], delta, DetourSide::Near).into_iter().skip(1) {
        let (piece, w_next) = config.integrate_segment(u, cur, next, w, piece_tol)?;
        f += piece.value;
        w = w_next;
        cur = next;
    }

    // around the circle
    let theta0 = s0.arg();
    let mut zs = Vec::with_capacity(m);
    let mut hs = Vec::with_capacity(m);
    let mut ws = Vec::with_capacity(m);
    for k in 0..m {
        if k > 0 {
            let next = Complex64::from_polar(radius, theta0 + 2.0 * PI * k as f64 / m as f64);
            let (piece, w_next) = config.integrate_segment(u, cur, next, w, piece_tol)?;
            f += piece.value;
            w = w_next;
            cur = next;
        }
        zs.push(cur);
        hs.push((lambda * f).exp());
        ws.push(w);
    }

    let p_vals: Vec<Complex64> = hs.iter().map(|h| 0.5 * (h + 1.0 / h)).collect();
    let q_vals: Vec<Complex64> = hs.iter().zip(&ws).map(|(h, w)| 0.5 * (h - 1.0 / h) / w).collect();
    let p = fit(&zs, &p_vals, deg_p, radius)?;
    let q = fit(&zs, &q_vals, deg_q, radius)?;

    let d = config.d();
    let identity = &(&(&p * &p) - &(&(&q * &q) * &d)) - &ComplexPoly::one();
    let residual = identity.max_abs_coeff();
    if !(residual < IDENTITY_LIMIT) {
        return Err(Error::Postcondition(format!(
            "reconstructed pair leaves p² − q²D − 1 at {residual:e}"
        )));
    }
    Ok(PellCertificate {
        solution: Solution::Complex { p, q },
        lambda,
        method: Method::AnalyticReconstructed,
        residual,
    })
}

/// Least-squares fit of a degree-`deg` polynomial in the basis `(z/R)^k`.
fn fit(zs: &[Complex64], values: &[Complex64], deg: usize, radius: f64) -> Result<ComplexPoly> {
    let a = DMatrix::from_fn(zs.len(), deg + 1, |i, k| (zs[i] / radius).powu(k as u32));
    let b = DVector::from_column_slice(values);
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::Postcondition(format!("least-squares solve failed: {e}")))?;
    let misfit = (&a * &x - &b).iter().map(|r| r.norm()).fold(0.0, f64::max);
    let size = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
    if misfit > FIT_LIMIT * size {
        return Err(Error::Postcondition(format!(
            "fit residual {:e} exceeds {FIT_LIMIT:e}",
            misfit / size
        )));
    }
    Ok(ComplexPoly::new(
        x.iter().enumerate().map(|(k, c)| c / radius.powi(k as i32)).collect(),
    ))
}
