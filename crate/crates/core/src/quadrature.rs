//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex integrands
//! over a real parameter interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Subdivision budget per call.
pub const MAX_SUBDIVISIONS: usize = 2000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub subdivisions: usize,
}

struct Interval {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    abs: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<Interval>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for i in 0..7 {
        let x = h * XGK[i];
        let f1 = f(c - x)?;
        let f2 = f(c + x)?;
        let s = f1 + f2;
        kronrod += s * WGK[i];
        abs += (f1.norm() + f2.norm()) * WGK[i];
        if i % 2 == 1 {
            gauss += s * WG[i / 2];
        }
    }
    let value = kronrod * h;
    let error = ((kronrod - gauss) * h).norm();
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::Quadrature {
            context: format!("non-finite integrand on [{a}, {b}]"),
            estimate: f64::INFINITY,
            tol: 0.0,
            subdivisions: 0,
        });
    }
    Ok(Interval {
        a,
        b,
        value,
        error,
        abs: abs * h.abs(),
    })
}

/// Integrates `f` over `[a, b]` until the summed error estimate is at most
/// `max(tol, 1e-14·∫|f|)`.
///
/// The integrand may fail (for instance when branch tracking breaks down);
/// that error is passed through unchanged.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64, context: &str) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let first = gk15(&mut f, a, b)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut abs = first.abs;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 0;
    loop {
        let target = tol.max(1e-14 * abs);
        if error <= target {
            break;
        }
        if subdivisions >= MAX_SUBDIVISIONS {
            return Err(Error::Quadrature {
                context: context.to_string(),
                estimate: error,
                tol,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            return Err(Error::Quadrature {
                context: format!("{context}: interval underflow"),
                estimate: error,
                tol,
                subdivisions,
            });
        }
        let left = gk15(&mut f, worst.a, mid)?;
        let right = gk15(&mut f, mid, worst.b)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs += left.abs + right.abs - worst.abs;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        // Re-sum now and then so cancellation in the running totals cannot drift.
        if subdivisions % 64 == 0 {
            value = heap.iter().map(|i| i.value).sum();
            error = heap.iter().map(|i| i.error).sum();
            abs = heap.iter().map(|i| i.abs).sum();
        }
    }
    let value = heap.iter().map(|i| i.value).sum();
    Ok(Quadrature {
        value,
        error,
        subdivisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_polynomials_need_no_subdivision() {
        let q = integrate(|x| Ok(Complex64::new(x.powi(12), x)), -1.0, 1.0, 1e-14, "t").unwrap();
        assert!((q.value.re - 2.0 / 13.0).abs() < 1e-15);
        assert!(q.value.im.abs() < 1e-15);
        assert_eq!(q.subdivisions, 0);
    }

    #[test]
    fn oscillatory_complex_exponential() {
        // ∫_0^{2π} e^{i·7x} e^{x/5} dx = (e^{2π/5} - 1)/(1/5 + 7i)
        let f = |x: f64| Ok(Complex64::new(x / 5.0, 7.0 * x).exp());
        let q = integrate(f, 0.0, 2.0 * std::f64::consts::PI, 1e-12, "t").unwrap();
        let want = ((2.0 * std::f64::consts::PI / 5.0).exp() - 1.0) / Complex64::new(0.2, 7.0);
        assert!((q.value - want).norm() < 1e-11, "{} vs {}", q.value, want);
        assert!(q.error <= 1e-12);
    }

    #[test]
    fn reversed_interval_changes_sign() {
        let f = |x: f64| Ok(Complex64::new(x.sin(), 0.0));
        let a = integrate(f, 0.0, 1.0, 1e-12, "t").unwrap();
        let b = integrate(f, 1.0, 0.0, 1e-12, "t").unwrap();
        assert!((a.value + b.value).norm() < 1e-14);
    }

    #[test]
    fn non_integrable_singularity_fails_loudly() {
        let f = |x: f64| Ok(Complex64::new(1.0 / x, 0.0));
        let err = integrate(f, 0.0, 1.0, 1e-10, "pole").unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
