use crate::polynomials::{Poly, Scalar};

/// `(p_k, q_k)` with `p_k + q_k√D = (p_1 + q_1√D)^k`.
///
/// For `k = 0` this is the trivial solution `(1, 0)`.
pub fn pell_group_generate<T: Scalar>(p1: &Poly<T>, q1: &Poly<T>, d: &Poly<T>, k: usize) -> (Poly<T>, Poly<T>) {
    let mut p = Poly::one();
    let mut q = Poly::zero();
    let dq1 = d * q1;
    for _ in 0..k {
        let next_p = &(p1 * &p) + &(&dq1 * &q);
        let next_q = &(p1 * &q) + &(q1 * &p);
        p = next_p;
        q = next_q;
    }
    (p, q)
}
