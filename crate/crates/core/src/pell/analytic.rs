use std::f64::consts::PI;

use num_integer::Integer;

use super::reconstruct::reconstruct_pell_solution;
use super::{Bound, PellStatus, PellVerdict};
use crate::error::{Error, Result};
use crate::polynomials::ComplexPoly;
use crate::surface::BranchConfiguration;

/// Roots closer than this, relative to `1 + max|root|`, give no verdict.
const MIN_RELATIVE_SEPARATION: f64 = 1e-3;

#[derive(Clone, Copy, Debug)]
pub struct AnalyticOptions {
    pub qmax: u64,
    pub tol: f64,
}

impl Default for AnalyticOptions {
    fn default() -> Self {
        AnalyticOptions { qmax: 64, tol: 1e-10 }
    }
}

/// Why the period test cannot give a verdict for `config` at all, if it can't:
/// roots so close that the periods are too ill-conditioned to read.
pub fn coincidence_obstruction(config: &BranchConfiguration) -> Option<String> {
    let scale = 1.0 + config.roots().iter().map(|r| r.norm()).fold(0.0, f64::max);
    (config.min_distance() < MIN_RELATIVE_SEPARATION * scale).then(|| {
        format!(
            "roots nearly coincide (separation {:e}); the periods are too ill-conditioned for a verdict",
            config.min_distance()
        )
    })
}

/// Best rational approximation `p/q` to `x` with `q ≤ qmax` among the
/// continued-fraction convergents, if one lies within `eps`.
pub(crate) fn rational_reconstruction(x: f64, qmax: u64, eps: f64) -> Option<(i64, u64)> {
    let (mut h1, mut h2) = (1i128, 0i128);
    let (mut k1, mut k2) = (0i128, 1i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i128;
        let h = a * h1 + h2;
        let k = a * k1 + k2;
        if k > qmax as i128 {
            return None;
        }
        if (x - h as f64 / k as f64).abs() <= eps {
            return Some((h as i64, k as u64));
        }
        h2 = h1;
        h1 = h;
        k2 = k1;
        k1 = k;
        let frac = r - r.floor();
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

/// The period criterion: `D` is Pellian exactly when some real `λ` makes
/// every `λ·v_j(U)` an integer multiple of `πi`.
///
/// `U` must be admissible for `config`. The scale is found from rational
/// reconstruction of `Im v_j / y*` with denominators up to `qmax`.
pub fn analytic_pell_test(config: &BranchConfiguration, u: &ComplexPoly, opts: AnalyticOptions) -> Result<PellVerdict> {
    let tol = opts.tol;
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if let Some(reason) = coincidence_obstruction(config) {
        return Ok(PellVerdict::bare(PellStatus::Inconclusive(reason)));
    }
    let periods = config.periods(u, tol)?;
    let max_re = periods.iter().map(|p| p.value.re.abs()).fold(0.0, f64::max);
    if max_re > 10.0 * tol {
        return Err(Error::invalid(format!(
            "U is not admissible: max |Re v_j| = {max_re:e}"
        )));
    }
    let ys: Vec<f64> = periods.iter().map(|p| p.value.im).collect();
    let rec_tol = 1e3 * tol;
    let y_star = ys
        .iter()
        .map(|y| y.abs())
        .filter(|&y| y > rec_tol)
        .fold(f64::INFINITY, f64::min);
    if !y_star.is_finite() {
        return Ok(PellVerdict::bare(PellStatus::Inconclusive("degenerate periods".into())));
    }
    let mut lcm: u64 = 1;
    for &y in &ys {
        match rational_reconstruction(y / y_star, opts.qmax, rec_tol) {
            Some((_, q)) => lcm = lcm.lcm(&q),
            None => return Ok(PellVerdict::bare(PellStatus::NotPellianUpTo(Bound::Qmax(opts.qmax)))),
        }
    }
    let lambda = PI * lcm as f64 / y_star;
    let mut multipliers = Vec::with_capacity(ys.len());
    for &y in &ys {
        let m = (lambda * y / PI).round();
        if (lambda * y - PI * m).abs() >= rec_tol * lambda {
            return Ok(PellVerdict::bare(PellStatus::Inconclusive(
                "rational reconstruction unstable".into(),
            )));
        }
        multipliers.push(m as i64);
    }
    Ok(PellVerdict {
        status: PellStatus::Pellian(None),
        multipliers: Some(multipliers),
        lambda: Some(lambda),
    })
}

/// [`analytic_pell_test`] followed by [`reconstruct_pell_solution`] on a
/// Pellian verdict; a failed reconstruction downgrades to `Inconclusive`.
pub fn analytic_pell_test_with_certificate(
    config: &BranchConfiguration,
    u: &ComplexPoly,
    opts: AnalyticOptions,
) -> Result<PellVerdict> {
    let mut verdict = analytic_pell_test(config, u, opts)?;
    if let (PellStatus::Pellian(None), Some(lambda)) = (&verdict.status, verdict.lambda) {
        let deg_p = lambda.round() as usize;
        let samples = 4 * (deg_p + 1) + 16;
        match reconstruct_pell_solution(config, u, lambda, samples, opts.tol) {
            Ok(cert) => verdict.status = PellStatus::Pellian(Some(cert)),
            Err(e) => {
                verdict.status =
                    PellStatus::Inconclusive(format!("periods look Pellian but reconstruction failed: {e}"));
            }
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_simple_fractions() {
        assert_eq!(rational_reconstruction(0.5, 64, 1e-9), Some((1, 2)));
        assert_eq!(rational_reconstruction(-1.0, 64, 1e-9), Some((-1, 1)));
        assert_eq!(rational_reconstruction(0.0, 64, 1e-9), Some((0, 1)));
        assert_eq!(rational_reconstruction(7.0 / 13.0 + 1e-12, 64, 1e-9), Some((7, 13)));
        assert_eq!(rational_reconstruction(std::f64::consts::SQRT_2, 64, 1e-9), None);
        assert_eq!(rational_reconstruction(1.0 / 97.0, 64, 1e-9), None);
    }
}
