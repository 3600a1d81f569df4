//! Z2 harmonic functions on the plane punctured at the roots of `D`, the
//! periods of `u(z)/√D(z)` that classify them, and the polynomial Pell
//! equation `p² − q²D = 1`.
//!
//! ```
//! use num_complex::Complex64;
//! use z2pell::pell::AnalyticOptions;
//! use z2pell::{analytic_pell_test, cf_pell_solve, green_function, solve_u, BranchConfiguration, ExactPoly};
//!
//! // D = z⁴ − 1
//! let roots = [1.0, -1.0].iter().flat_map(|&r| [Complex64::new(r, 0.0), Complex64::new(0.0, r)]).collect();
//! let cfg = BranchConfiguration::new(roots)?;
//! let u = solve_u(&cfg, 1e-10)?.u; // U = z
//!
//! let verdict = analytic_pell_test(&cfg, &u, AnalyticOptions::default())?;
//! assert!(verdict.is_pellian());
//! let lambda = verdict.lambda.unwrap(); // 2
//!
//! // λ·G = ln|z² + √(z⁴ − 1)|
//! let g = green_function(&cfg, 1e-10)?.scaled(lambda);
//! let z = Complex64::new(0.5, 1.5);
//! let closed = (z * z + (z.powu(4) - 1.0).sqrt()).norm().ln().abs();
//! assert!((g.eval_f(z, 1e-10)?.abs_value - closed).abs() < 1e-8);
//!
//! // the exact oracle finds p = z², q = 1
//! let exact = cf_pell_solve(&ExactPoly::from_ints(&[-1, 0, 0, 0, 1]), 200)?;
//! assert!(exact.is_pellian());
//! # Ok::<(), z2pell::Error>(())
//! ```

// `!(x > y)` is deliberate throughout: NaN has to fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harmonic;
pub mod locus;
pub mod pell;
pub mod polynomials;
pub mod quadrature;
pub mod surface;
pub mod upoly;

pub use error::{Error, Result};
pub use harmonic::{
    asymptotic_fit, construct_from_growth, green_function, AsymptoticFit, Degree, Evaluation, GrowthSpec,
    HarmonicFunction,
};
pub use locus::{
    trace_zero_locus, validate_structure, Curve, CurveSet, EndpointTag, Junction, StructureReport, TraceDomain,
};
pub use pell::{
    analytic_pell_test, cf_pell_solve, pell_group_generate, reconstruct_pell_solution, PellCertificate, PellVerdict,
};
pub use polynomials::{ComplexPoly, ExactPoly, GaussRat, LaurentTail, Poly};
pub use surface::{default_paths, period_matrix, BranchConfiguration, PathSpec, PeriodMatrix};
pub use upoly::{check_admissible, solve_u, u_with_multiplicity, USolveResult};
