use num_complex::Complex64;

use super::poly::{ComplexPoly, ExactPoly, Poly};
use super::roots::roots;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Default relative threshold for merging floating roots into one cluster.
pub const DEFAULT_CLUSTER_THRESHOLD: f64 = 1e-6;

/// Attainable accuracy of an isolated m-fold root in double precision is
/// about `(c·eps)^{1/m}`; below that the clustering threshold cannot go.
const CLUSTER_NOISE: f64 = 1e-14;

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

/// Exact split `D = D1²·D0` with `D0` square-free, via Yun's algorithm.
///
/// `D1` is monic; the leading coefficient of `D` stays with `D0`.
pub fn square_free_split_exact(d: &ExactPoly) -> Result<(ExactPoly, ExactPoly)> {
    if d.is_zero() {
        return Err(Error::invalid("square-free split of the zero polynomial"));
    }
    let lc = d.leading().unwrap().clone();
    let mut d1 = ExactPoly::one();
    let mut d0 = ExactPoly::constant(lc);
    for (i, factor) in yun_factors(d).into_iter().enumerate() {
        let mult = i + 1;
        d1 = &d1 * &factor.pow(mult / 2);
        if mult % 2 == 1 {
            d0 = &d0 * &factor;
        }
    }
    Ok((d1, d0))
}

/// Monic square-free factors `a_1, a_2, …` with `D = lc · Π a_i^i`.
fn yun_factors(d: &ExactPoly) -> Vec<ExactPoly> {
    let f = d.monic();
    if f.degree() == Some(0) {
        return Vec::new();
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0).expect("gcd divides");
    let c = df.div_exact(&a0).expect("gcd divides");
    let mut dd = &c - &b.derivative();
    let mut out = Vec::new();
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&dd);
        let b_next = b.div_exact(&a).expect("gcd divides");
        let c_next = dd.div_exact(&a).expect("gcd divides");
        dd = &c_next - &b_next.derivative();
        b = b_next;
        out.push(a);
    }
    out
}

/// Cluster the numerically computed roots of `d`.
///
/// Two clusters merge when the merged diameter is below
/// `max(threshold, (c·eps)^{1/m}) · (1 + max|root|)` for the merged size `m`.
/// Clusters left apart but within a hundred times that radius are reported
/// as ambiguous.
pub fn root_clusters(d: &ComplexPoly, threshold: f64) -> Result<Vec<RootCluster>> {
    let rs = roots(d)?;
    let scale = 1.0 + rs.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let radius = |m: usize| threshold.max(CLUSTER_NOISE.powf(1.0 / m as f64)) * scale;

    let mut clusters: Vec<Vec<Complex64>> = rs.into_iter().map(|r| vec![r]).collect();
    let diameter = |a: &[Complex64], b: &[Complex64]| -> f64 {
        let all: Vec<&Complex64> = a.iter().chain(b.iter()).collect();
        let mut d: f64 = 0.0;
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                d = d.max((all[i] - all[j]).norm());
            }
        }
        d
    };
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let m = clusters[i].len() + clusters[j].len();
                let dia = diameter(&clusters[i], &clusters[j]);
                if dia < radius(m) && best.is_none_or(|(_, _, b)| dia < b) {
                    best = Some((i, j, dia));
                }
            }
        }
        match best {
            Some((i, j, _)) => {
                let moved = clusters.swap_remove(j);
                clusters[i].extend(moved);
            }
            None => break,
        }
    }
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let m = clusters[i].len() + clusters[j].len();
            let dia = diameter(&clusters[i], &clusters[j]);
            if dia < 100.0 * radius(m) {
                return Err(Error::IllConditioned(format!(
                    "root clusters at distance {dia:e} overlap ambiguously (threshold {:e})",
                    radius(m)
                )));
            }
        }
    }
    let mut out: Vec<RootCluster> = clusters
        .into_iter()
        .map(|c| {
            let mean = c.iter().sum::<Complex64>() / c.len() as f64;
            RootCluster {
                center: refine_center(d, mean, c.len(), radius(c.len())),
                multiplicity: c.len(),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        (a.center.re, a.center.im)
            .partial_cmp(&(b.center.re, b.center.im))
            .unwrap()
    });
    Ok(out)
}

/// Newton on `d^{(m-1)}`, where an m-fold root is simple. The cluster mean
/// is only kept if the refined point stays inside the cluster radius.
fn refine_center(d: &ComplexPoly, start: Complex64, m: usize, radius: f64) -> Complex64 {
    if m == 1 {
        return start;
    }
    let mut z = start;
    for _ in 0..20 {
        let f = d.derivative_at(z, m - 1);
        let df = d.derivative_at(z, m);
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            break;
        }
    }
    if (z - start).norm() < radius && z.is_finite() {
        z
    } else {
        start
    }
}

/// Floating split `D = D1²·D0` from clustered roots.
pub fn square_free_split(d: &ComplexPoly, threshold: f64) -> Result<(ComplexPoly, ComplexPoly)> {
    if d.is_zero() {
        return Err(Error::invalid("square-free split of the zero polynomial"));
    }
    let lc = *d.leading().unwrap();
    let clusters = root_clusters(d, threshold)?;
    let mut d1_roots = Vec::new();
    let mut d0_roots = Vec::new();
    for c in &clusters {
        d1_roots.extend(std::iter::repeat_n(c.center, c.multiplicity / 2));
        if c.multiplicity % 2 == 1 {
            d0_roots.push(c.center);
        }
    }
    Ok((
        ComplexPoly::from_roots(&d1_roots),
        ComplexPoly::from_roots(&d0_roots).scale(&lc),
    ))
}

/// Generic helper so tests can recompose either flavour.
pub fn recompose<T: Scalar>(d1: &Poly<T>, d0: &Poly<T>) -> Poly<T> {
    &(d1 * d1) * d0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: &ComplexPoly, b: &ComplexPoly) -> f64 {
        a.max_coeff_diff(b) / b.max_abs_coeff()
    }

    #[test]
    fn square_free_input_is_its_own_core() {
        let d = ExactPoly::from_ints(&[-1, 0, 1]);
        let (d1, d0) = square_free_split_exact(&d).unwrap();
        assert_eq!(d1, ExactPoly::one());
        assert_eq!(d0, d);

        let (f1, f0) = square_free_split(&d.to_complex(), DEFAULT_CLUSTER_THRESHOLD).unwrap();
        assert!(rel_err(&f1, &ComplexPoly::one()) < 1e-12);
        assert!(rel_err(&f0, &d.to_complex()) < 1e-12);
    }

    #[test]
    fn cube_of_quadratic_splits_into_equal_parts() {
        let base = ExactPoly::from_ints(&[-1, 0, 1]);
        let d = base.pow(3);
        let (d1, d0) = square_free_split_exact(&d).unwrap();
        assert_eq!(d1, base);
        assert_eq!(d0, base);
        assert_eq!(recompose(&d1, &d0), d);

        let (f1, f0) = square_free_split(&d.to_complex(), DEFAULT_CLUSTER_THRESHOLD).unwrap();
        assert!(rel_err(&f1, &base.to_complex()) < 1e-10, "{f1:?}");
        assert!(rel_err(&f0, &base.to_complex()) < 1e-10, "{f0:?}");
        assert!(rel_err(&recompose(&f1, &f0), &d.to_complex()) < 1e-10);
    }

    #[test]
    fn z4_minus_z_is_square_free() {
        let d = ExactPoly::from_ints(&[0, -1, 0, 0, 1]);
        let (d1, d0) = square_free_split_exact(&d).unwrap();
        assert_eq!(d1, ExactPoly::one());
        assert_eq!(d0, d);
        assert_eq!(d.gcd(&d.derivative()), ExactPoly::one());
    }

    #[test]
    fn mixed_multiplicities() {
        // (z - 2)^2 (z^2 - 1) (z + i)^4
        let a = ExactPoly::from_ints(&[-2, 1]);
        let b = ExactPoly::from_ints(&[-1, 0, 1]);
        let c = ExactPoly::from_gauss_ints(&[(0, 1), (1, 0)]);
        let d = &(&a.pow(2) * &b) * &c.pow(4);
        let (d1, d0) = square_free_split_exact(&d).unwrap();
        assert_eq!(d1, &a * &c.pow(2));
        assert_eq!(d0, b);
    }

    #[test]
    fn close_but_distinct_roots_are_ambiguous() {
        let eps = 1e-5;
        let d = ComplexPoly::from_roots(&[
            Complex64::new(0.0, 0.0),
            Complex64::new(eps, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ]);
        assert!(square_free_split(&d, DEFAULT_CLUSTER_THRESHOLD).is_err());
    }
}
