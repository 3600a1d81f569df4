//! Dense complex and exact Gaussian-rational polynomials, truncated Laurent
//! tails at infinity, and square-free splitting.

mod laurent;
mod poly;
pub(crate) mod roots;
mod scalar;
mod split;

pub use laurent::{sqrt_series_at_infinity, LaurentTail};
pub use poly::{ComplexPoly, ExactPoly, ExactScalar, Poly};
pub use scalar::{parse_rational, GaussRat, Scalar};
pub use split::{
    recompose, root_clusters, square_free_split, square_free_split_exact, RootCluster, DEFAULT_CLUSTER_THRESHOLD,
};
