//! Fixtures shared by the benchmarks.

use std::f64::consts::PI;

use num_complex::Complex64;
use z2pell::{BranchConfiguration, ExactPoly, GaussRat};

/// `2n` roots on a wobbly circle, far from any symmetric (Pellian) layout.
pub fn generic_roots(n: usize) -> Vec<Complex64> {
    let m = 2 * n;
    (0..m)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / m as f64 + 0.17 * (k as f64 * 1.3).sin();
            Complex64::from_polar(1.0 + 0.2 * (k as f64 * 2.1).cos(), t)
        })
        .collect()
}

pub fn generic(n: usize) -> BranchConfiguration {
    BranchConfiguration::new(generic_roots(n)).expect("distinct roots")
}

/// The roots of `z^{2n} − 1`.
pub fn unity(n: usize) -> BranchConfiguration {
    let m = 2 * n;
    let roots = (0..m)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64))
        .collect();
    BranchConfiguration::new(roots).expect("distinct roots")
}

/// Integer coefficients, ascending.
pub fn exact(coeffs: &[i64]) -> ExactPoly {
    ExactPoly::new(coeffs.iter().map(|&c| GaussRat::from_ints(c, 0)).collect())
}
