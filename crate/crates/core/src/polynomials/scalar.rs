use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Field operations shared by the floating and exact coefficient types.
///
/// Methods take references so big-rational coefficients are not cloned on
/// every operation.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    /// Division; the divisor must be nonzero.
    fn over(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn over(&self, other: &Self) -> Self {
        self / other
    }
    fn negated(&self) -> Self {
        -self
    }
}

/// An exact complex number `re + i·im` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    /// `re_num/re_den + i·im_num/im_den`.
    pub fn from_fractions(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussRat {
            re: BigRational::new(re_num.into(), re_den.into()),
            im: BigRational::new(im_num.into(), im_den.into()),
        }
    }

    pub fn i() -> Self {
        GaussRat::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    /// An exact square root inside the Gaussian rationals, when one exists.
    pub fn exact_sqrt(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        // (x + iy)^2 = a + ib  =>  x^2 = (a + |c|)/2, y^2 = (|c| - a)/2, 2xy = b
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(2.into());
        let x2 = (&modulus + &self.re) / &two;
        let y2 = (&modulus - &self.re) / &two;
        let x = rational_sqrt(&x2)?;
        let mut y = rational_sqrt(&y2)?;
        if self.im.is_negative() {
            y = -y;
        }
        let root = GaussRat::new(x, y);
        if root.times(&root) == *self {
            Some(root)
        } else {
            None
        }
    }
}

/// Square root of a nonnegative rational when both numerator and
/// denominator are perfect squares.
fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub(crate) fn ratio_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Huge numerator and denominator: scale both down before converting.
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Scalar for GaussRat {
    fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        GaussRat::new(BigRational::one(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn from_i64(v: i64) -> Self {
        GaussRat::from_ints(v, 0)
    }
    fn plus(&self, other: &Self) -> Self {
        GaussRat::new(&self.re + &other.re, &self.im + &other.im)
    }
    fn minus(&self, other: &Self) -> Self {
        GaussRat::new(&self.re - &other.re, &self.im - &other.im)
    }
    fn times(&self, other: &Self) -> Self {
        if self.im.is_zero() && other.im.is_zero() {
            return GaussRat::new(&self.re * &other.re, BigRational::zero());
        }
        GaussRat::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }
    fn over(&self, other: &Self) -> Self {
        if other.im.is_zero() {
            return GaussRat::new(&self.re / &other.re, &self.im / &other.re);
        }
        let den = other.norm_sqr();
        GaussRat::new(
            (&self.re * &other.re + &self.im * &other.im) / &den,
            (&self.im * &other.re - &self.re * &other.im) / &den,
        )
    }
    fn negated(&self) -> Self {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "({} + {}i)", self.re, self.im)
        }
    }
}

/// Parses a rational written as `"p/q"`, `"p"` or a finite decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| Error::invalid(format!("bad numerator in {s:?}")))?;
        let d = BigInt::from_str(den.trim()).map_err(|_| Error::invalid(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let digits = frac.len() as u32;
        let whole = format!("{}{}", int, frac);
        let n = BigInt::from_str(&whole).map_err(|_| Error::invalid(format!("bad decimal {s:?}")))?;
        return Ok(BigRational::new(n, BigInt::from(10).pow(digits)));
    }
    BigInt::from_str(s)
        .map(BigRational::from_integer)
        .map_err(|_| Error::invalid(format!("bad rational {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_division_round_trips() {
        let a = GaussRat::from_fractions(3, 2, -1, 5);
        let b = GaussRat::from_fractions(-2, 7, 4, 3);
        assert_eq!(a.times(&b).over(&b), a);
    }

    #[test]
    fn exact_sqrt_of_minus_one_is_i() {
        let m1 = GaussRat::from_ints(-1, 0);
        let r = m1.exact_sqrt().unwrap();
        assert_eq!(r.times(&r), m1);
        // (3 + 4i) = (2 + i)^2
        let c = GaussRat::from_ints(3, 4);
        assert_eq!(c.exact_sqrt(), Some(GaussRat::from_ints(2, 1)));
        assert_eq!(GaussRat::from_ints(2, 0).exact_sqrt(), None);
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rational("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(
            parse_rational("-0.25").unwrap(),
            BigRational::new((-1).into(), 4.into())
        );
        assert_eq!(parse_rational("-7").unwrap(), BigRational::from_integer((-7).into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }
}
