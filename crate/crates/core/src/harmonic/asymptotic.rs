use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::HarmonicFunction;
use crate::error::{Error, Result};

/// Least-squares fit of `f` on circles far out against
/// `c0 ln ρ + Re Σ c_k z^k + b0 + Re Σ b_k z^{−k}`, on the sheet where
/// `√D ~ +z^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticFit {
    pub c0_hat: f64,
    /// `c_1..c_modes`
    pub c_hat: Vec<Complex64>,
    pub b0_hat: f64,
    /// `b_1..b_modes`
    pub b_hat: Vec<Complex64>,
    /// Smallest radius sampled.
    pub fit_radius: f64,
    /// Largest absolute misfit over all samples.
    pub fit_residual: f64,
}

/// Signed `f` at `m` equally spaced points of the circle `|z| = r`,
/// continued around the circle and normalised to the sheet `√D ~ +z^n`.
pub(crate) fn circle_values(hf: &HarmonicFunction, r: f64, m: usize, tol: f64) -> Result<Vec<f64>> {
    Ok(circle_samples(hf, r, m, tol)?.into_iter().map(|(_, f)| f).collect())
}

/// `f` is odd under the sheet swap, so multiplying by the sign of
/// `√D/z^n` makes every sample independent of the path that reached it.
fn circle_samples(hf: &HarmonicFunction, r: f64, m: usize, tol: f64) -> Result<Vec<(Complex64, f64)>> {
    let n = hf.config().n() as i32;
    let piece_tol = tol / (m + 1) as f64;
    let mut e = hf.eval_f(Complex64::new(r, 0.0), piece_tol)?;
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        if k > 0 {
            let z = Complex64::from_polar(r, 2.0 * PI * k as f64 / m as f64);
            e = hf.eval_from(&e, z, piece_tol)?;
        }
        let sign = (e.sheet / e.z.powi(n)).re.signum();
        out.push((e.z, sign * e.signed_value));
    }
    Ok(out)
}

/// Fits the expansion at infinity from samples on circles of the given
/// radii, with `modes` Fourier modes in each of the growing and decaying
/// parts. At least two distinct radii are needed to separate `ln ρ` from
/// the constant.
pub fn asymptotic_fit(hf: &HarmonicFunction, radii: &[f64], modes: usize) -> Result<AsymptoticFit> {
    let reach = hf.config().roots().iter().map(|r| r.norm()).fold(0.0, f64::max);
    if radii.iter().any(|&r| !(r > 2.0 * reach)) {
        return Err(Error::invalid(format!(
            "every radius must exceed 2·max|z_i| = {}",
            2.0 * reach
        )));
    }
    let r_max = radii.iter().cloned().fold(0.0, f64::max);
    let r_min = radii.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(r_max > r_min) {
        return Err(Error::invalid("need at least two distinct radii"));
    }
    let m = (4 * modes + 8).max(32);
    let tol = hf.tol();
    let mut samples = Vec::with_capacity(m * radii.len());
    for &r in radii {
        samples.extend(circle_samples(hf, r, m, tol)?);
    }

    // columns: 1, ln ρ, then per k: ρ^k cos, −ρ^k sin, ρ^−k cos, −ρ^−k sin (scaled by r_max)
    let cols = 2 + 4 * modes;
    let a = DMatrix::from_fn(samples.len(), cols, |i, j| {
        let (z, _) = samples[i];
        let (rho, theta) = z.to_polar();
        match j {
            0 => 1.0,
            1 => rho.ln(),
            _ => {
                let k = ((j - 2) / 4 + 1) as i32;
                let grow = (rho / r_max).powi(k);
                let decay = (r_max / rho).powi(k);
                match (j - 2) % 4 {
                    0 => grow * (k as f64 * theta).cos(),
                    1 => -grow * (k as f64 * theta).sin(),
                    2 => decay * (k as f64 * theta).cos(),
                    _ => -decay * (k as f64 * theta).sin(),
                }
            }
        }
    });
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let x = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-13)
        .map_err(|e| Error::IllConditioned(format!("asymptotic fit: {e}")))?;
    let fit_residual = (&a * &x - &b).amax();
    let c_hat = (0..modes)
        .map(|k| Complex64::new(x[2 + 4 * k], x[3 + 4 * k]) / r_max.powi(k as i32 + 1))
        .collect();
    let b_hat = (0..modes)
        .map(|k| Complex64::new(x[4 + 4 * k], x[5 + 4 * k]) * r_max.powi(k as i32 + 1))
        .collect();
    Ok(AsymptoticFit {
        c0_hat: x[1],
        c_hat,
        b0_hat: x[0],
        b_hat,
        fit_radius: r_min,
        fit_residual,
    })
}
