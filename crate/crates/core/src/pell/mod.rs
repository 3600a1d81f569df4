//! Pell equations `p² − q²·D = 1` in polynomials: the period criterion on
//! `U`, an exact continued-fraction search, the group law, and recovery of
//! `(p, q)` from the periods.

mod analytic;
mod cf;
mod group;
mod modular;
mod reconstruct;

use std::fmt;

pub use analytic::{analytic_pell_test, analytic_pell_test_with_certificate, coincidence_obstruction, AnalyticOptions};
pub use cf::cf_pell_solve;
pub use group::pell_group_generate;
pub use reconstruct::reconstruct_pell_solution;

use crate::polynomials::{ComplexPoly, ExactPoly, GaussRat};

/// How a certificate was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    AnalyticReconstructed,
    ExactCf,
    UserSupplied,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::AnalyticReconstructed => "analytic-reconstructed",
            Method::ExactCf => "exact-cf",
            Method::UserSupplied => "user-supplied",
        })
    }
}

/// The polynomials of a solution.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution {
    Complex {
        p: ComplexPoly,
        q: ComplexPoly,
    },
    /// `p² − q²D = c` exactly. When `c` has a square root among the Gaussian
    /// rationals the pair is already divided by it and `c = 1`.
    Exact {
        p: ExactPoly,
        q: ExactPoly,
        c: GaussRat,
    },
}

impl Solution {
    pub fn p_complex(&self) -> ComplexPoly {
        match self {
            Solution::Complex { p, .. } => p.clone(),
            Solution::Exact { p, .. } => p.to_complex(),
        }
    }

    pub fn q_complex(&self) -> ComplexPoly {
        match self {
            Solution::Complex { q, .. } => q.clone(),
            Solution::Exact { q, .. } => q.to_complex(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PellCertificate {
    pub solution: Solution,
    /// `λ` with `λ·U = p'/q` for the monic `U`; equals `deg p`.
    pub lambda: f64,
    pub method: Method,
    /// Largest coefficient of `p² − q²D − 1` (zero for exact solutions).
    pub residual: f64,
}

/// What limited a negative answer.
#[derive(Clone, Debug, PartialEq)]
pub enum Bound {
    /// No rational period ratios with denominator at most this.
    Qmax(u64),
    /// No constant `Q_k` within this many continued-fraction steps.
    Steps(usize),
    /// `D` has at most `n` distinct roots, which rules out any solution.
    FewDistinctRoots { distinct: usize, n: usize },
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Qmax(q) => write!(f, "no rational period ratios with denominator <= {q}"),
            Bound::Steps(s) => write!(f, "no solution within {s} continued-fraction steps"),
            Bound::FewDistinctRoots { distinct, n } => write!(
                f,
                "D has {distinct} distinct roots, at most n = {n}; such D is never Pellian"
            ),
        }
    }
}

impl Bound {
    /// True when the bound is a proof rather than a search limit.
    pub fn is_unconditional(&self) -> bool {
        matches!(self, Bound::FewDistinctRoots { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PellStatus {
    /// Pellian; the certificate is absent when only the multipliers are known.
    Pellian(Option<PellCertificate>),
    NotPellianUpTo(Bound),
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PellVerdict {
    pub status: PellStatus,
    /// `m_j` with `λ·Im v_j(U) = π·m_j`, present for analytic Pellian verdicts.
    pub multipliers: Option<Vec<i64>>,
    /// The scale `λ` found by the analytic route.
    pub lambda: Option<f64>,
}

impl PellVerdict {
    pub fn bare(status: PellStatus) -> Self {
        PellVerdict {
            status,
            multipliers: None,
            lambda: None,
        }
    }

    pub fn is_pellian(&self) -> bool {
        matches!(self.status, PellStatus::Pellian(_))
    }

    pub fn is_not_pellian(&self) -> bool {
        matches!(self.status, PellStatus::NotPellianUpTo(_))
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self.status, PellStatus::Inconclusive(_))
    }

    pub fn certificate(&self) -> Option<&PellCertificate> {
        match &self.status {
            PellStatus::Pellian(c) => c.as_ref(),
            _ => None,
        }
    }

    /// Short label: `pellian`, `not-pellian-up-to` or `inconclusive`.
    pub fn label(&self) -> &'static str {
        match self.status {
            PellStatus::Pellian(_) => "pellian",
            PellStatus::NotPellianUpTo(_) => "not-pellian-up-to",
            PellStatus::Inconclusive(_) => "inconclusive",
        }
    }
}
