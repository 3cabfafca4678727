//! Asymmetry activation for the permutation family and the antisymmetric
//! example.

use crate::asymptotics::decohered_asymmetry;
use crate::error::{domain, Result};
use crate::numeric::{ln_binomial_exact, LogBase};
use crate::schur_weyl::{avg_entropy, Params};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivationReport {
    pub asym_whole: f64,
    pub asym_added: f64,
    /// `asym_whole − asym_added`
    pub activation: f64,
    pub base: LogBase,
}

/// The tag alone carries `ln C(k, l)`; attaching the Dicke register raises
/// the total to the averaged-state entropy (or its dephased version).
pub fn permutation_activation(
    params: Params,
    coherent: bool,
    base: LogBase,
) -> Result<ActivationReport> {
    let asym_added = base.from_nats(ln_binomial_exact(params.k() as u64, params.l() as u64));
    let asym_whole = if coherent {
        avg_entropy(params, base)?
    } else {
        decohered_asymmetry(params, base)
    };
    Ok(ActivationReport {
        asym_whole,
        asym_added,
        activation: asym_whole - asym_added,
        base,
    })
}

/// `ln C(nd + n − 1, n) − ln C(d, n)`
pub fn antisym_binomial_form(n: u32, d: u32) -> Result<f64> {
    check_nd(n, d)?;
    let (n, d) = (n as u64, d as u64);
    Ok(ln_binomial_exact(n * d + n - 1, n) - ln_binomial_exact(d, n))
}

/// `Σ_{j<n} ln(n + (n − 1)(j + 1)/(d − j))`
pub fn antisym_sum_form(n: u32, d: u32) -> Result<f64> {
    check_nd(n, d)?;
    let nf = n as f64;
    Ok((0..n)
        .map(|j| (nf + (nf - 1.0) * (j + 1) as f64 / (d - j) as f64).ln())
        .sum())
}

fn check_nd(n: u32, d: u32) -> Result<()> {
    if n == 0 || d < n {
        return Err(domain(format!("need d >= n >= 1, got n = {n}, d = {d}")));
    }
    Ok(())
}

/// Activation in the antisymmetric example. Both forms are computed and
/// must agree to 1e-10.
pub fn antisym_activation(n: u32, d: u32, base: LogBase) -> Result<f64> {
    let a = antisym_binomial_form(n, d)?;
    let b = antisym_sum_form(n, d)?;
    assert!(
        (a - b).abs() <= 1e-10,
        "antisym forms disagree at n={n}, d={d}: {a} vs {b}"
    );
    Ok(base.from_nats(a))
}

/// Scan window `[n, max(4n, 50)]`.
pub fn antisym_window(n: u32) -> std::ops::RangeInclusive<u32> {
    n..=(4 * n).max(50)
}

/// First maximizer of [`antisym_activation`] over [`antisym_window`].
pub fn antisym_optimal_d(n: u32, base: LogBase) -> Result<(u32, f64)> {
    let mut best = (n, f64::NEG_INFINITY);
    for d in antisym_window(n) {
        let v = antisym_activation(n, d, base)?;
        if v > best.1 {
            best = (d, v);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_examples() {
        let p = Params::new(4, 2, 2, 1).unwrap();
        let dec = permutation_activation(p, false, LogBase::E).unwrap();
        assert!((dec.activation - (3f64.ln() - 2f64.ln())).abs() < 1e-14);
        let coh = permutation_activation(p, true, LogBase::E).unwrap();
        assert!(coh.activation >= dec.activation);
        for flag in [true, false] {
            let r = permutation_activation(Params::new(7, 3, 0, 0).unwrap(), flag, LogBase::Two)
                .unwrap();
            assert!(r.activation.abs() < 1e-12);
        }
    }

    #[test]
    fn antisym_examples() {
        assert!((antisym_activation(2, 2, LogBase::E).unwrap() - 10f64.ln()).abs() < 1e-13);
        for d in 1..20 {
            assert!(antisym_activation(1, d, LogBase::E).unwrap().abs() < 1e-14);
        }
        assert!(antisym_activation(3, 2, LogBase::E).is_err());
        assert_eq!(antisym_optimal_d(3, LogBase::E).unwrap().0, 3);
        let (_, v) = antisym_optimal_d(3, LogBase::E).unwrap();
        assert!((v - 165f64.ln()).abs() < 1e-12);
        // large d: every summand tends to ln n
        let v = antisym_activation(5, 1_000_000, LogBase::E).unwrap();
        assert!((v - 5.0 * 5f64.ln()).abs() < 1e-4);
    }
}
