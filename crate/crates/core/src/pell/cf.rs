use num_traits::{Signed, Zero};

use super::group::pell_group_generate;
use super::modular::{screen, Screen};
use super::{Bound, Method, PellCertificate, PellStatus, PellVerdict, Solution};
use crate::error::{Error, Result};
use crate::polynomials::{sqrt_series_at_infinity, square_free_split_exact, ExactPoly, GaussRat, Scalar};

/// Exact search for a solution of `p² − q²D = const` by the continued
/// fraction of `√D` over the Gaussian rationals.
///
/// With `A` the polynomial part of `√D`, `P_0 = 0`, `Q_0 = 1`:
/// `a_k = (P_k + A) div Q_k`, `P_{k+1} = a_k Q_k − P_k`,
/// `Q_{k+1} = (D − P_{k+1}²)/Q_k`. The convergents satisfy
/// `p_k² − D q_k² = (−1)^{k+1} Q_{k+1}`, so a constant `Q_{k+1}` is a solution.
///
/// A convergent after `s` steps has degree at most `n·s`, and the verdict
/// `NotPellianUpTo(Steps(s))` means no solution of that degree exists.
/// The search works on the square-free part `D_0` of `D = S²D_0`: a
/// reduction modulo a large prime bounds the degree first, and the exact
/// recurrence only runs when that screen leaves a candidate. Solutions for
/// `D` are the powers of the fundamental `D_0` solution whose `q` is
/// divisible by `S`.
pub fn cf_pell_solve(d: &ExactPoly, max_steps: usize) -> Result<PellVerdict> {
    let deg = d.degree().ok_or_else(|| Error::invalid("D is zero"))?;
    if deg == 0 || deg % 2 == 1 {
        return Err(Error::invalid(format!("D must have positive even degree, got {deg}")));
    }
    if !d.is_monic() {
        return Err(Error::invalid("D must be monic"));
    }
    let n = deg / 2;
    let distinct = d.distinct_root_count();
    if distinct <= n {
        return Ok(PellVerdict::bare(PellStatus::NotPellianUpTo(Bound::FewDistinctRoots {
            distinct,
            n,
        })));
    }
    let not_found = PellVerdict::bare(PellStatus::NotPellianUpTo(Bound::Steps(max_steps)));
    let bound = n * max_steps;

    let (s, d0) = square_free_split_exact(d)?;
    let Some((p1, q1, c1)) = minimal_solution(&d0, bound)? else {
        return Ok(not_found);
    };
    let found = if s.degree() == Some(0) {
        Some((p1, q1, c1))
    } else {
        lift(&s, &d0, &p1, &q1, &c1, bound)?
    };
    match found {
        Some((p, q, c)) => Ok(PellVerdict::bare(PellStatus::Pellian(Some(certificate(d, p, q, c)?)))),
        None => Ok(not_found),
    }
}

type Raw = (ExactPoly, ExactPoly, GaussRat);

/// Minimal solution of `p² − q²D = c` with `deg p ≤ bound` for square-free `D`.
fn minimal_solution(d: &ExactPoly, bound: usize) -> Result<Option<Raw>> {
    let a0 = sqrt_series_at_infinity(d, 0)?.nonnegative_part()?;
    let limit = match screen(d, &a0, bound) {
        Screen::NoneUpTo => return Ok(None),
        Screen::Candidate(m) => m,
        Screen::NoGoodPrime => bound,
    };
    exact_run(d, &a0, limit)
}

/// The exact recurrence, stopped once the convergent degree passes `limit`.
fn exact_run(d: &ExactPoly, a0: &ExactPoly, limit: usize) -> Result<Option<Raw>> {
    let mut p_big = ExactPoly::zero();
    let mut q_big = ExactPoly::one();
    // (p_{k-1}, p_{k-2}) and (q_{k-1}, q_{k-2})
    let (mut p1, mut p2) = (ExactPoly::one(), ExactPoly::zero());
    let (mut q1, mut q2) = (ExactPoly::zero(), ExactPoly::one());
    // every step raises the degree, so `limit + 1` steps reach past it
    for k in 0..=limit {
        let (a, _) = (&p_big + a0).div_rem(&q_big)?;
        let pk = &(&a * &p1) + &p2;
        if pk.degree().unwrap_or(0) > limit {
            break;
        }
        let p_next = &(&a * &q_big) - &p_big;
        let num = d - &(&p_next * &p_next);
        let q_next = num
            .div_exact(&q_big)
            .map_err(|_| Error::ExactDivision(format!("Q_{} does not divide D − P_{}² at step {k}", k, k + 1)))?;
        let qk = &(&a * &q1) + &q2;
        if q_next.degree() == Some(0) {
            let mut c = q_next.coeff(0);
            if k % 2 == 0 {
                c = c.negated();
            }
            return Ok(Some((pk, qk, c)));
        }
        p_big = p_next;
        q_big = q_next;
        p2 = std::mem::replace(&mut p1, pk);
        q2 = std::mem::replace(&mut q1, qk);
    }
    Ok(None)
}

/// Smallest power `(p_1 + q_1√D_0)^k` with `S | q_k` and `deg p_k ≤ bound`,
/// returned as a solution for `S²D_0`. The search runs in `K[z]/S`.
fn lift(
    s: &ExactPoly,
    d0: &ExactPoly,
    p1: &ExactPoly,
    q1: &ExactPoly,
    c1: &GaussRat,
    bound: usize,
) -> Result<Option<Raw>> {
    let m = p1.degree().unwrap_or(0).max(1);
    let reduce = |x: &ExactPoly| -> Result<ExactPoly> { Ok(x.div_rem(s)?.1) };
    let p1s = reduce(p1)?;
    let q1s = reduce(q1)?;
    let dq1 = reduce(&(d0 * q1))?;
    let (mut a, mut b) = (p1s.clone(), q1s.clone());
    for k in 1..=bound / m {
        if b.is_zero() {
            let (p, q) = pell_group_generate(p1, q1, d0, k);
            let q = q.div_exact(s)?;
            let mut c = GaussRat::one();
            for _ in 0..k {
                c = c.times(c1);
            }
            return Ok(Some((p, q, c)));
        }
        let next_a = reduce(&(&(&a * &p1s) + &(&b * &dq1)))?;
        let next_b = reduce(&(&(&a * &q1s) + &(&b * &p1s)))?;
        a = next_a;
        b = next_b;
    }
    Ok(None)
}

fn certificate(d: &ExactPoly, p: ExactPoly, q: ExactPoly, c: GaussRat) -> Result<PellCertificate> {
    let (p, q, c) = match c.exact_sqrt() {
        Some(s) => {
            let inv = GaussRat::one().over(&s);
            (p.scale(&inv), q.scale(&inv), GaussRat::one())
        }
        None => (p, q, c),
    };
    // p and −p are equally good; prefer a leading coefficient with positive real part
    let lead = p.leading().cloned().unwrap_or_else(GaussRat::one);
    let flip = lead.re.is_negative() || (lead.re.is_zero() && lead.im.is_negative());
    let (p, q) = if flip {
        (
            p.scale(&GaussRat::from_ints(-1, 0)),
            q.scale(&GaussRat::from_ints(-1, 0)),
        )
    } else {
        (p, q)
    };
    let check = &(&p * &p) - &(&(&q * &q) * d);
    if check != ExactPoly::constant(c.clone()) {
        return Err(Error::Postcondition(
            "continued-fraction certificate fails p² − q²D = c".into(),
        ));
    }
    let lambda = p.degree().unwrap_or(0) as f64;
    Ok(PellCertificate {
        solution: Solution::Exact { p, q, c },
        lambda,
        method: Method::ExactCf,
        residual: 0.0,
    })
}
