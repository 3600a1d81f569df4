use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::scalar::{GaussRat, Scalar};
use crate::error::{Error, Result};

/// Dense univariate polynomial, constant term first.
///
/// Trailing zero coefficients are always trimmed, so the last stored
/// coefficient is the leading one and the zero polynomial stores nothing.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<T: Scalar> {
    coeffs: Vec<T>,
}

pub type ComplexPoly = Poly<Complex64>;
pub type ExactPoly = Poly<GaussRat>;

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c · z^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == T::one())
    }

    pub fn eval(&self, z: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc.times(z).plus(c))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.times(&T::from_i64(k as i64)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.times(s)).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => {
                let inv = T::one().over(lc);
                let mut out = self.scale(&inv);
                // force an exact 1 so `is_monic` holds in floating point as well
                if let Some(last) = out.coeffs.last_mut() {
                    *last = T::one();
                }
                out
            }
            None => self.clone(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Poly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Euclidean division `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::invalid("division by the zero polynomial"))?;
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].over(&lead);
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] = rem[k + i].minus(&c.times(d));
                }
            }
            // the top coefficient is cancelled by construction
            rem[k + dd] = T::zero();
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Quotient of a division that must leave no remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self>
    where
        T: ExactScalar,
    {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::ExactDivision(format!(
                "remainder of degree {:?} when dividing degree {:?} by degree {:?}",
                r.degree(),
                self.degree(),
                divisor.degree()
            )));
        }
        Ok(q)
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    ///
    /// Only meaningful for exact coefficients; floating inputs would need a
    /// threshold on the remainders.
    pub fn gcd(&self, other: &Self) -> Self
    where
        T: ExactScalar,
    {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn map<S: Scalar>(&self, f: impl Fn(&T) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

/// Marker for coefficient types whose arithmetic is exact.
pub trait ExactScalar: Scalar {}
impl ExactScalar for GaussRat {}

impl ComplexPoly {
    /// Monic polynomial with the given multiset of roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Poly::new(coeffs)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn eval_at(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Value and first derivative by a single Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `k`-th derivative at `z`, from the formally differentiated coefficients.
    pub fn derivative_at(&self, z: Complex64, k: usize) -> Complex64 {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derivative();
        }
        p.eval_at(z)
    }

    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `p(z + c)` by repeated synthetic division.
    pub fn shift(&self, c: Complex64) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = a[j + 1] * c;
                a[j] += t;
            }
        }
        Poly::new(a)
    }

    /// Synthetic division by `(z - r)`, discarding the remainder.
    pub fn deflate(&self, r: Complex64) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Poly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (1..n).rev() {
            acc = acc * r + self.coeffs[k];
            out[k - 1] = acc;
        }
        Poly::new(out)
    }

    /// Largest coefficient difference against `other`.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

impl ExactPoly {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| GaussRat::from_ints(c, 0)).collect())
    }

    /// Coefficients given as `(re, im)` integer pairs.
    pub fn from_gauss_ints(coeffs: &[(i64, i64)]) -> Self {
        Poly::new(coeffs.iter().map(|&(a, b)| GaussRat::from_ints(a, b)).collect())
    }

    pub fn to_complex(&self) -> ComplexPoly {
        self.map(|c| c.to_complex())
    }

    /// Number of distinct complex roots: the degree of `p / gcd(p, p')`.
    pub fn distinct_root_count(&self) -> usize {
        match self.degree() {
            None | Some(0) => 0,
            Some(_) => {
                let g = self.gcd(&self.derivative());
                let radical = self.div_exact(&g).expect("gcd divides");
                radical.degree().unwrap_or(0)
            }
        }
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).plus(&rhs.coeff(k))).collect())
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).minus(&rhs.coeff(k))).collect())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Poly::new(out)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| c.negated()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Scalar> $tr<&Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: &Poly<T>) -> Poly<T> {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn from_roots_expands_products() {
        let p = ComplexPoly::from_roots(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(p, ComplexPoly::from_real(&[-1.0, 0.0, 1.0]));
        assert_eq!(ComplexPoly::from_roots(&[]), ComplexPoly::one());
    }

    #[test]
    fn cube_roots_and_zero_give_z4_minus_z() {
        let w = C::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let p = ComplexPoly::from_roots(&[c(0.0, 0.0), c(1.0, 0.0), w, w * w]);
        let expected = ComplexPoly::from_real(&[0.0, -1.0, 0.0, 0.0, 1.0]);
        assert!(p.max_coeff_diff(&expected) < 1e-14);
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        let z = ComplexPoly::new(vec![c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(ComplexPoly::one().degree(), Some(0));
    }

    #[test]
    fn exact_division_and_gcd() {
        // (z^2 - 1)^3 and its derivative share (z^2 - 1)^2
        let d = ExactPoly::from_ints(&[-1, 0, 1]).pow(3);
        let g = d.gcd(&d.derivative());
        assert_eq!(g, ExactPoly::from_ints(&[-1, 0, 1]).pow(2));
        let (q, r) = d.div_rem(&g).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, ExactPoly::from_ints(&[-1, 0, 1]));
        assert!(ExactPoly::from_ints(&[1, 1])
            .div_exact(&ExactPoly::from_ints(&[0, 1]))
            .is_err());
    }

    #[test]
    fn shift_and_deflate() {
        let p = ComplexPoly::from_roots(&[c(1.0, 0.0), c(2.0, 1.0)]);
        let shifted = p.shift(c(1.0, 0.0));
        let expected = ComplexPoly::from_roots(&[c(0.0, 0.0), c(1.0, 1.0)]);
        assert!(shifted.max_coeff_diff(&expected) < 1e-14);
        let q = p.deflate(c(1.0, 0.0));
        assert!(q.max_coeff_diff(&ComplexPoly::from_roots(&[c(2.0, 1.0)])) < 1e-14);
    }

    #[test]
    fn distinct_roots_counted_exactly() {
        assert_eq!(ExactPoly::from_ints(&[-1, 0, 1]).pow(2).distinct_root_count(), 2);
        assert_eq!(ExactPoly::from_ints(&[0, -1, 0, 0, 1]).distinct_root_count(), 4);
    }
}
