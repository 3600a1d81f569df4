//! Simultaneous root iteration for small dense polynomials.
//!
//! Used internally to turn coefficient input into branch points; not a
//! general-purpose root finder.

use num_complex::Complex64;

use super::poly::ComplexPoly;
use crate::error::{Error, Result};

const MAX_ITER: usize = 500;

/// All roots of `p` (with multiplicity) by the Aberth–Ehrlich iteration.
pub(crate) fn roots(p: &ComplexPoly) -> Result<Vec<Complex64>> {
    let n = match p.degree() {
        None => return Err(Error::invalid("roots of the zero polynomial")),
        Some(0) => return Ok(Vec::new()),
        Some(n) => n,
    };
    let p = p.monic();
    if n == 1 {
        return Ok(vec![-p.coeff(0)]);
    }
    // Cauchy bound on the root moduli
    let bound = 1.0 + p.coeffs()[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mean = -p.coeff(n - 1) / n as f64;
    let radius = 0.5 * bound;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            mean + Complex64::from_polar(radius, angle)
        })
        .collect();

    let scale = p.max_abs_coeff();
    for _ in 0..MAX_ITER {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (v, dv) = p.eval_with_derivative(z[i]);
            if v.norm() <= f64::EPSILON * scale * 1e-3 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        1.0 / d
                    }
                })
                .sum();
            let denom = 1.0 - ratio * repulsion;
            let step = if denom.norm() == 0.0 || !denom.is_finite() || !ratio.is_finite() {
                Complex64::new(0.0, 0.0)
            } else {
                ratio / denom
            };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 4.0 * f64::EPSILON {
            break;
        }
    }
    if z.iter().any(|r| !r.is_finite()) {
        return Err(Error::Postcondition("root iteration diverged".into()));
    }
    Ok(z)
}
