//! The continued fraction of `√D` reduced modulo a prime of good reduction.
//!
//! Over the Gaussian rationals the heights of `P_k, Q_k` grow quadratically
//! in `k` when `D` is not Pellian, which makes a long exact run hopeless.
//! For square-free `D` the order of `[∞₊ − ∞₋]` in the Jacobian equals the
//! degree of the minimal Pell solution, and reduction at a prime `𝔭` of good
//! reduction is injective on torsion of order prime to `p`. So if the
//! reduced fraction has no solution of degree `≤ bound < p`, neither does
//! the exact one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_prime::nt_funcs::is_prime64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::polynomials::{ExactPoly, GaussRat};

/// Candidate primes `p ≡ 1 (mod 4)` below this value.
const PRIME_CEILING: u64 = 1 << 61;
const MAX_PRIMES_TRIED: usize = 16;

#[derive(Clone, Copy, Debug)]
struct Field {
    p: u64,
    /// a square root of −1
    i: u64,
}

impl Field {
    fn new(p: u64) -> Self {
        let mut g = 2;
        loop {
            let s = pow_mod(g, (p - 1) / 4, p);
            if mul_mod(s, s, p) == p - 1 {
                return Field { p, i: s };
            }
            g += 1;
        }
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    fn int(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced below p")
    }

    fn rational(&self, x: &BigRational) -> Option<u64> {
        let den = self.int(x.denom());
        if den == 0 {
            return None;
        }
        Some(self.mul(self.int(x.numer()), self.inv(den)))
    }

    fn gauss(&self, x: &GaussRat) -> Option<u64> {
        Some(self.add(self.rational(&x.re)?, self.mul(self.i, self.rational(&x.im)?)))
    }

    fn poly(&self, x: &ExactPoly) -> Option<Vec<u64>> {
        let mut out = x.coeffs().iter().map(|c| self.gauss(c)).collect::<Option<Vec<_>>>()?;
        trim(&mut out);
        Some(out)
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn degree(a: &[u64]) -> Option<usize> {
    a.len().checked_sub(1)
}

fn add(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|k| f.add(*a.get(k).unwrap_or(&0), *b.get(k).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

fn sub(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|k| f.sub(*a.get(k).unwrap_or(&0), *b.get(k).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

fn mul(f: &Field, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(*x, *y));
        }
    }
    trim(&mut out);
    out
}

fn div_rem(f: &Field, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("nonzero divisor");
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let inv = f.inv(b[db]);
    let mut quot = vec![0; rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = f.mul(rem[k + db], inv);
        for (i, d) in b.iter().enumerate() {
            rem[k + i] = f.sub(rem[k + i], f.mul(c, *d));
        }
        quot[k] = c;
    }
    rem.truncate(db);
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

fn is_squarefree(f: &Field, a: &[u64]) -> bool {
    let mut x = a.to_vec();
    let mut y: Vec<u64> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| f.mul(*c, k as u64 % f.p))
        .collect();
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = div_rem(f, &x, &y);
        x = y;
        y = r;
    }
    degree(&x) == Some(0)
}

/// Degree of the minimal solution of `p² − q²D̄ = const` over `F_p`, if it
/// is at most `bound`.
fn minimal_degree(f: &Field, d: &[u64], a0: &[u64], n: usize, bound: usize) -> Option<usize> {
    let mut big_p: Vec<u64> = Vec::new();
    let mut big_q: Vec<u64> = vec![1];
    let mut deg_p = 0;
    loop {
        let (a, _) = div_rem(f, &add(f, &big_p, a0), &big_q);
        deg_p += degree(&a).expect("partial quotients are nonzero");
        if deg_p > bound {
            return None;
        }
        let p_next = sub(f, &mul(f, &a, &big_q), &big_p);
        let (q_next, r) = div_rem(f, &sub(f, d, &mul(f, &p_next, &p_next)), &big_q);
        debug_assert!(r.is_empty());
        if degree(&q_next) == Some(0) {
            return Some(deg_p);
        }
        debug_assert!(deg_p >= n);
        big_p = p_next;
        big_q = q_next;
    }
}

/// What the reduced continued fraction says about solutions of degree at
/// most `bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Screen {
    /// No solution of degree `≤ bound` exists over the Gaussian rationals.
    NoneUpTo,
    /// Any solution of degree `≤ bound` has exactly this degree.
    Candidate(usize),
    /// No prime of good reduction was found among the candidates.
    NoGoodPrime,
}

/// Screens a monic square-free `D` with polynomial part `a0` of `√D`.
///
/// When one prime reports a candidate degree a second prime is consulted;
/// two different answers also rule out every solution up to `bound`.
pub(crate) fn screen(d: &ExactPoly, a0: &ExactPoly, bound: usize) -> Screen {
    let n = a0.degree().unwrap_or(0);
    let mut first = None;
    for p in good_prime_candidates().take(MAX_PRIMES_TRIED) {
        if (p as u128) <= bound as u128 {
            break;
        }
        let f = Field::new(p);
        let (Some(db), Some(ab)) = (f.poly(d), f.poly(a0)) else {
            continue;
        };
        if degree(&db) != d.degree() || degree(&ab) != Some(n) || !is_squarefree(&f, &db) {
            continue;
        }
        let m = minimal_degree(&f, &db, &ab, n, bound);
        match (first, m) {
            (_, None) => return Screen::NoneUpTo,
            (None, Some(m)) => first = Some(m),
            (Some(m1), Some(m2)) if m1 != m2 => return Screen::NoneUpTo,
            (Some(m1), Some(_)) => return Screen::Candidate(m1),
        }
    }
    match first {
        Some(m) => Screen::Candidate(m),
        None => Screen::NoGoodPrime,
    }
}

fn good_prime_candidates() -> impl Iterator<Item = u64> {
    (0..).map(|k: u64| PRIME_CEILING - 3 - 4 * k).filter(|&p| is_prime64(p))
}
