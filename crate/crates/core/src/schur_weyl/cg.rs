//! Squared Clebsch-Gordan coefficients in exact arithmetic.
//!
//! The Racah sum is rewritten as
//!
//! ```text
//! ⟨j1 m1; j2 m2 | J M⟩² = (2J+1) (J+M)! (J-M)! (j1-m1)! (j1+m1)! (j2-m2)! (j2+m2)! T²
//!                         / ((j1+j2+J+1)! a! P! Q!)
//! T = Σ_k (-1)^k C(a, k) C(P, b-k) C(Q, c-k)
//! ```
//!
//! with `a = j1+j2-J`, `P = J+j1-j2`, `Q = J-j1+j2`, `b = j1-m1`, `c = j2+m2`.
//! `T` is an integer, so the alternating sum never loses precision; the
//! float route only takes the logarithm of exact quantities.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::numeric::{binomial_exact, binomial_u128, ln_bigint, ln_factorial};

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Exact ingredients of one squared coefficient.
#[derive(Debug, Clone)]
pub(crate) struct CgParts {
    /// `2J + 1`
    dim: u64,
    numer_facts: [u64; 6],
    denom_facts: [u64; 4],
    sum: BigInt,
}

impl CgParts {
    /// Returns `None` when a selection rule forces the coefficient to vanish.
    /// `M` is implied as `m1 + m2`.
    pub(crate) fn new(
        j1: HalfInt,
        m1: HalfInt,
        j2: HalfInt,
        m2: HalfInt,
        j: HalfInt,
    ) -> Option<Self> {
        let (j1, m1, j2, m2, j) = (j1.0, m1.0, j2.0, m2.0, j.0);
        let m = m1 + m2;
        if j1 < 0 || j2 < 0 || j < 0 {
            return None;
        }
        if m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
            return None;
        }
        if (j1 + m1) % 2 != 0 || (j2 + m2) % 2 != 0 || (j + m) % 2 != 0 {
            return None;
        }
        if j < (j1 - j2).abs() || j > j1 + j2 || (j1 + j2 + j) % 2 != 0 {
            return None;
        }
        let a = ((j1 + j2 - j) / 2) as u64;
        let p = ((j + j1 - j2) / 2) as u64;
        let q = ((j - j1 + j2) / 2) as u64;
        let b = ((j1 - m1) / 2) as u64;
        let c = ((j2 + m2) / 2) as u64;
        let sum = racah_sum(a, p, q, b, c);
        Some(CgParts {
            dim: (j + 1) as u64,
            numer_facts: [
                ((j + m) / 2) as u64,
                ((j - m) / 2) as u64,
                b,
                ((j1 + m1) / 2) as u64,
                ((j2 - m2) / 2) as u64,
                c,
            ],
            denom_facts: [((j1 + j2 + j) / 2 + 1) as u64, a, p, q],
            sum,
        })
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.sum.is_zero()
    }

    /// Largest factorial argument needed by [`CgParts::to_rational`].
    pub(crate) fn max_factorial(&self) -> u64 {
        self.numer_facts
            .iter()
            .chain(self.denom_facts.iter())
            .copied()
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn to_rational(&self, facts: &Factorials) -> BigRational {
        if self.sum.is_zero() {
            return BigRational::zero();
        }
        let mut num = BigInt::from(self.dim) * &self.sum * &self.sum;
        for &f in &self.numer_facts {
            num *= facts.get(f);
        }
        let mut den = BigInt::one();
        for &f in &self.denom_facts {
            den *= facts.get(f);
        }
        BigRational::new(num, den)
    }

    /// Natural log of the squared coefficient (`-inf` when it vanishes).
    pub(crate) fn ln(&self) -> f64 {
        if self.sum.is_zero() {
            return f64::NEG_INFINITY;
        }
        let num: f64 = self.numer_facts.iter().map(|&f| ln_factorial(f)).sum();
        let den: f64 = self.denom_facts.iter().map(|&f| ln_factorial(f)).sum();
        (self.dim as f64).ln() + num - den + 2.0 * ln_bigint(&self.sum)
    }
}

/// `Σ_k (-1)^k C(a,k) C(p, b-k) C(q, c-k)` over the range where every
/// binomial is nonzero.
fn racah_sum(a: u64, p: u64, q: u64, b: u64, c: u64) -> BigInt {
    let k_lo = b.saturating_sub(p).max(c.saturating_sub(q));
    let k_hi = a.min(b).min(c);
    if k_lo > k_hi {
        return BigInt::zero();
    }
    racah_sum_i128(a, p, q, b, c, k_lo, k_hi)
        .map(BigInt::from)
        .unwrap_or_else(|| racah_sum_big(a, p, q, b, c, k_lo, k_hi))
}

fn racah_sum_i128(a: u64, p: u64, q: u64, b: u64, c: u64, k_lo: u64, k_hi: u64) -> Option<i128> {
    let mut ca = binomial_u128(a, k_lo)? as i128;
    let mut cp = binomial_u128(p, b - k_lo)? as i128;
    let mut cq = binomial_u128(q, c - k_lo)? as i128;
    let mut total: i128 = 0;
    let mut k = k_lo;
    loop {
        let term = ca.checked_mul(cp)?.checked_mul(cq)?;
        total = if k.is_multiple_of(2) {
            total.checked_add(term)?
        } else {
            total.checked_sub(term)?
        };
        if k == k_hi {
            break;
        }
        ca = ca.checked_mul((a - k) as i128)? / (k + 1) as i128;
        cp = cp.checked_mul((b - k) as i128)? / (p + k + 1 - b) as i128;
        cq = cq.checked_mul((c - k) as i128)? / (q + k + 1 - c) as i128;
        k += 1;
    }
    Some(total)
}

fn racah_sum_big(a: u64, p: u64, q: u64, b: u64, c: u64, k_lo: u64, k_hi: u64) -> BigInt {
    let mut ca = binomial_exact(a, k_lo as i64);
    let mut cp = binomial_exact(p, (b - k_lo) as i64);
    let mut cq = binomial_exact(q, (c - k_lo) as i64);
    let mut total = BigInt::zero();
    let mut k = k_lo;
    loop {
        let term = &ca * &cp * &cq;
        if k.is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
        if k == k_hi {
            break;
        }
        ca = ca * (a - k) / (k + 1);
        cp = cp * (b - k) / (p + k + 1 - b);
        cq = cq * (c - k) / (q + k + 1 - c);
        k += 1;
    }
    total
}

/// Exact factorials `0!..=limit!`, built once per computation.
pub(crate) struct Factorials(Vec<BigInt>);

impl Factorials {
    pub(crate) fn up_to(limit: u64) -> Self {
        let mut v = Vec::with_capacity(limit as usize + 1);
        let mut acc = BigInt::one();
        v.push(acc.clone());
        for i in 1..=limit {
            acc *= i;
            v.push(acc.clone());
        }
        Factorials(v)
    }

    fn get(&self, n: u64) -> &BigInt {
        &self.0[n as usize]
    }
}

/// `|⟨j1 m1; j2 m2 | J M⟩|²` as an exact rational. Violated selection rules
/// give zero.
pub fn cg_squared(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> BigRational {
    if m1.0 + m2.0 != m.0 {
        return BigRational::zero();
    }
    match CgParts::new(j1, m1, j2, m2, j) {
        Some(parts) => parts.to_rational(&Factorials::up_to(parts.max_factorial())),
        None => BigRational::zero(),
    }
}
