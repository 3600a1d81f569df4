use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A Laurent series in `z` around infinity, `Σ_{k ≤ top} c_k z^k`.
///
/// Coefficients are stored from `top_power` downwards. When
/// `truncation_order` is `Some(t)` every coefficient of `z^k` with `k ≥ t`
/// is known exactly and nothing is known below `t`; `None` marks a finite
/// sum whose lower coefficients are exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentTail<T: Scalar> {
    top_power: i64,
    coeffs: Vec<T>,
    truncation_order: Option<i64>,
}

impl<T: Scalar> LaurentTail<T> {
    pub fn from_poly(p: &Poly<T>) -> Self {
        match p.degree() {
            None => LaurentTail {
                top_power: 0,
                coeffs: Vec::new(),
                truncation_order: None,
            },
            Some(d) => LaurentTail {
                top_power: d as i64,
                coeffs: p.coeffs().iter().rev().cloned().collect(),
                truncation_order: None,
            },
        }
    }

    /// Finite series from descending coefficients starting at `top_power`.
    pub fn exact(top_power: i64, coeffs: Vec<T>) -> Self {
        LaurentTail {
            top_power,
            coeffs,
            truncation_order: None,
        }
    }

    pub fn top_power(&self) -> i64 {
        self.top_power
    }

    pub fn truncation_order(&self) -> Option<i64> {
        self.truncation_order
    }

    /// Lowest power with a stored coefficient.
    fn low_power(&self) -> i64 {
        self.top_power - self.coeffs.len() as i64 + 1
    }

    /// Coefficient of `z^k`, or `None` when it lies below the truncation.
    pub fn coeff(&self, k: i64) -> Option<T> {
        if let Some(t) = self.truncation_order {
            if k < t {
                return None;
            }
        }
        if k > self.top_power || k < self.low_power() {
            return Some(T::zero());
        }
        Some(self.coeffs[(self.top_power - k) as usize].clone())
    }

    /// Drops everything below `order`, marking the series as truncated there.
    pub fn truncate(&self, order: i64) -> Self {
        let lowest = match self.truncation_order {
            Some(t) => t.max(order),
            None => order,
        };
        let len = (self.top_power - lowest + 1).max(0) as usize;
        let coeffs = (0..len)
            .map(|i| self.coeff(self.top_power - i as i64).unwrap_or_else(T::zero))
            .collect();
        LaurentTail {
            top_power: self.top_power,
            coeffs,
            truncation_order: Some(lowest),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        LaurentTail {
            top_power: self.top_power,
            coeffs: self.coeffs.iter().map(|c| c.times(s)).collect(),
            truncation_order: self.truncation_order,
        }
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let top = self.top_power.max(other.top_power);
        let truncation = match (self.truncation_order, other.truncation_order) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => None,
        };
        let low = match truncation {
            Some(t) => t,
            None => self.low_power().min(other.low_power()),
        };
        let coeffs = (low..=top)
            .rev()
            .map(|k| {
                let a = self.coeff(k).unwrap_or_else(T::zero);
                let b = other.coeff(k).unwrap_or_else(T::zero);
                if subtract {
                    a.minus(&b)
                } else {
                    a.plus(&b)
                }
            })
            .collect();
        LaurentTail {
            top_power: top,
            coeffs,
            truncation_order: truncation,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    /// Product, with the truncation order lifted by the cross terms: the
    /// unknown tail of one factor times the top of the other is unknown.
    pub fn mul(&self, other: &Self) -> Self {
        let top = self.top_power + other.top_power;
        let truncation = match (self.truncation_order, other.truncation_order) {
            (Some(a), Some(b)) => Some((a + other.top_power).max(b + self.top_power)),
            (Some(a), None) => Some(a + other.top_power),
            (None, Some(b)) => Some(b + self.top_power),
            (None, None) => None,
        };
        let full_low = self.low_power() + other.low_power();
        let low = truncation.map_or(full_low, |t| t.max(full_low));
        let mut coeffs = vec![T::zero(); (top - low + 1).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let idx = i + j;
                if idx < coeffs.len() {
                    coeffs[idx] = coeffs[idx].plus(&a.times(b));
                }
            }
        }
        LaurentTail {
            top_power: top,
            coeffs,
            truncation_order: truncation,
        }
    }

    /// The part with nonnegative powers, as a polynomial.
    pub fn nonnegative_part(&self) -> Result<Poly<T>> {
        if let Some(t) = self.truncation_order {
            if t > 0 {
                return Err(Error::invalid(format!(
                    "series known only down to z^{t}; constant term unavailable"
                )));
            }
        }
        if self.top_power < 0 {
            return Ok(Poly::zero());
        }
        Ok(Poly::new(
            (0..=self.top_power)
                .map(|k| self.coeff(k).unwrap_or_else(T::zero))
                .collect(),
        ))
    }
}

/// Laurent expansion of `√D` at infinity for monic `D` of even degree `2n`:
/// the branch `z^n (1 + …)`, with every coefficient down to `z^order` exact.
///
/// Writing `D = z^{2n} E(1/z)` with `E(0) = 1`, the coefficients `s_k` of
/// `√E = Σ s_k w^k` satisfy `2 s_k = e_k − Σ_{0<i<k} s_i s_{k−i}`.
pub fn sqrt_series_at_infinity<T: Scalar>(d: &Poly<T>, order: i64) -> Result<LaurentTail<T>> {
    let deg = d
        .degree()
        .ok_or_else(|| Error::invalid("square root of the zero polynomial"))?;
    if deg % 2 != 0 {
        return Err(Error::invalid(format!("degree {deg} is odd")));
    }
    if !d.is_monic() {
        return Err(Error::invalid("polynomial is not monic"));
    }
    let n = (deg / 2) as i64;
    if order > n {
        return Err(Error::invalid(format!("order {order} above the top power {n}")));
    }
    let terms = (n - order + 1) as usize;
    let e = |k: usize| -> T {
        if k <= deg {
            d.coeff(deg - k)
        } else {
            T::zero()
        }
    };
    let two = T::from_i64(2);
    let mut s: Vec<T> = Vec::with_capacity(terms);
    s.push(T::one());
    for k in 1..terms {
        let mut acc = e(k);
        for i in 1..k {
            acc = acc.minus(&s[i].times(&s[k - i]));
        }
        s.push(acc.over(&two));
    }
    Ok(LaurentTail {
        top_power: n,
        coeffs: s,
        truncation_order: Some(order),
    })
}
