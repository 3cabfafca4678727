//! Irrep dimensions and the spectrum of the permutation-averaged state.
//!
//! Averaging over `S_n` leaves `p(x)/dim V` on every vector of block `x`,
//! repeated `dim V` times.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::params::Params;
use super::pmf::{pmf, pmf_float_auto, FloatPmf, EXACT_MAX_N};
use crate::error::{domain, Result};
use crate::numeric::{
    binomial_exact, ln_bigint, ln_binomial, spectral_threshold, LogBase, Threshold,
};

fn check_row(n: u32, x: u32) -> Result<()> {
    if 2 * x > n {
        Err(domain(format!("row x = {x} exceeds n/2 for n = {n}")))
    } else {
        Ok(())
    }
}

/// `dim V_(n-x, x) = C(n, x) - C(n, x-1)`.
pub fn dim_irrep(n: u32, x: u32) -> Result<BigInt> {
    check_row(n, x)?;
    Ok(binomial_exact(n as u64, x as i64) - binomial_exact(n as u64, x as i64 - 1))
}

/// The hook-length form `C(n, x) (n - 2x + 1) / (n - x + 1)`, as a rational
/// so that a non-integer result would be visible.
pub fn dim_irrep_hook(n: u32, x: u32) -> Result<BigRational> {
    check_row(n, x)?;
    let (n, x) = (n as u64, x as u64);
    Ok(BigRational::new(
        binomial_exact(n, x as i64) * BigInt::from(n - 2 * x + 1),
        BigInt::from(n - x + 1),
    ))
}

/// `ln dim V_(n-x, x)` without forming the integer.
pub fn ln_dim_irrep(n: u32, x: u32) -> Result<f64> {
    check_row(n, x)?;
    let (n, x) = (n as u64, x as u64);
    Ok(ln_binomial(n, x) + ((n - 2 * x + 1) as f64).ln() - ((n - x + 1) as f64).ln())
}

/// One eigenvalue block of the averaged state.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumBlock {
    pub x: u32,
    pub eigenvalue: BigRational,
    pub multiplicity: BigInt,
}

/// Exact spectrum of the averaged state, blocks with `p(x) > 0` only.
#[derive(Debug, Clone, PartialEq)]
pub struct AvgSpectrum {
    pub n: u32,
    pub blocks: Vec<SpectrumBlock>,
}

impl AvgSpectrum {
    /// `Σ eigenvalue · multiplicity`, which is exactly one.
    pub fn trace(&self) -> BigRational {
        self.blocks.iter().fold(BigRational::zero(), |acc, b| {
            acc + &b.eigenvalue * BigRational::from_integer(b.multiplicity.clone())
        })
    }

    /// Eigenvalues with multiplicities expanded, largest first. Only sensible
    /// for small `n`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for b in &self.blocks {
            let v = crate::numeric::rational_to_f64(&b.eigenvalue);
            let count = b.multiplicity.to_usize().unwrap_or(usize::MAX);
            out.extend(std::iter::repeat_n(v, count));
        }
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }

    /// `(−ln eigenvalue, block mass)` pairs, the spectral atoms of the
    /// averaged state.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        self.blocks
            .iter()
            .map(|b| {
                let mult = BigRational::from_integer(b.multiplicity.clone());
                let mass = crate::numeric::rational_to_f64(&(&b.eigenvalue * mult));
                let ln_eig = crate::numeric::ln_rational(&b.eigenvalue);
                (-ln_eig, mass)
            })
            .collect()
    }
}

pub fn avg_spectrum(params: Params) -> Result<AvgSpectrum> {
    let dist = pmf(params)?;
    let n = params.n();
    let mut blocks = Vec::new();
    for (x, p) in dist.support() {
        let dim = dim_irrep(n, x)?;
        blocks.push(SpectrumBlock {
            x,
            eigenvalue: p / BigRational::from_integer(dim.clone()),
            multiplicity: dim,
        });
    }
    Ok(AvgSpectrum { n, blocks })
}

/// `(ln dim V_x − ln p(x), p(x))` for every block, from whichever pmf route
/// fits `n`.
pub(crate) fn spectral_atoms(params: Params) -> Result<Vec<(f64, f64)>> {
    let dist = float_pmf_for(params)?;
    let n = params.n();
    dist.support()
        .map(|(x, p)| Ok((ln_dim_irrep(n, x)? - dist.ln_mass(x), p)))
        .collect()
}

/// Exact below the exact cap, log-domain above.
pub(crate) fn float_pmf_for(params: Params) -> Result<FloatPmf> {
    if params.n() <= EXACT_MAX_N && !params.has_closed_form() {
        Ok(pmf(params)?.to_float())
    } else {
        pmf_float_auto(params)
    }
}

/// `S = Σ_x p(x) (ln dim V_x − ln p(x))`, reported in `base`.
pub fn avg_entropy(params: Params, base: LogBase) -> Result<f64> {
    let nats: f64 = spectral_atoms(params)?
        .iter()
        .map(|(surprisal, p)| p * surprisal)
        .sum();
    Ok(base.from_nats(nats.max(0.0)))
}

/// Same as [`avg_entropy`] but on an already computed float pmf.
pub fn entropy_of_pmf(dist: &FloatPmf, base: LogBase) -> Result<f64> {
    let n = dist.n();
    let mut nats = 0.0;
    for (x, p) in dist.support() {
        nats += p * (ln_dim_irrep(n, x)? - dist.ln_mass(x));
    }
    Ok(base.from_nats(nats.max(0.0)))
}

/// `max { λ : P[ln dim V_x − ln p(x) <= λ] <= ε }` over the spectrum of the
/// averaged state. The value sits at a jump of a right-continuous step
/// function, so it carries the open flag.
pub fn hs_epsilon_avg(params: Params, eps: f64, base: LogBase) -> Result<Threshold> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain(format!("need 0 < eps < 1, got {eps}")));
    }
    let t = spectral_threshold(&spectral_atoms(params)?, eps);
    Ok(Threshold {
        value: base.from_nats(t.value),
        open: t.open,
    })
}

/// `ln` of the exact dimension, for cross-checks.
pub fn ln_dim_irrep_exact(n: u32, x: u32) -> Result<f64> {
    Ok(ln_bigint(&dim_irrep(n, x)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn p(n: i64, m: i64, k: i64, l: i64) -> Params {
        Params::new(n, m, k, l).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(dim_irrep(4, 0).unwrap(), BigInt::from(1));
        assert_eq!(dim_irrep(4, 2).unwrap(), BigInt::from(2));
        assert_eq!(dim_irrep(6, 2).unwrap(), BigInt::from(9));
        assert!(dim_irrep(4, 3).is_err());
        for n in 0..=200u32 {
            let mut total = BigInt::zero();
            for x in 0..=n / 2 {
                let d = dim_irrep(n, x).unwrap();
                assert_eq!(
                    BigRational::from_integer(d.clone()),
                    dim_irrep_hook(n, x).unwrap()
                );
                let lnd = ln_dim_irrep(n, x).unwrap();
                assert!((lnd - ln_bigint(&d)).abs() < 1e-9 * lnd.abs().max(1.0));
                // Σ dim V · dim U = 2^n with dim U = n - 2x + 1
                total += d * BigInt::from(n - 2 * x + 1);
            }
            assert_eq!(total, BigInt::one() << n as usize);
        }
    }

    #[test]
    fn spectrum_examples() {
        let s = avg_spectrum(p(5, 2, 0, 0)).unwrap();
        assert_eq!(s.blocks.len(), 1);
        assert_eq!(s.blocks[0].eigenvalue, BigRational::one());
        let s = avg_spectrum(p(2, 1, 1, 1)).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(s.blocks[0].eigenvalue, half);
        assert_eq!(s.blocks[1].eigenvalue, half);
        assert_eq!(s.blocks[1].multiplicity, BigInt::one());
        assert_eq!(
            avg_spectrum(p(4, 2, 2, 1)).unwrap().trace(),
            BigRational::one()
        );
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(avg_entropy(p(7, 3, 0, 0), LogBase::E).unwrap(), 0.0);
        let s = avg_entropy(p(2, 1, 1, 1), LogBase::E).unwrap();
        assert!((s - 2f64.ln()).abs() < 1e-14);
        let s2 = avg_entropy(p(2, 1, 1, 1), LogBase::Two).unwrap();
        assert!((s2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hs_examples() {
        let t = hs_epsilon_avg(p(6, 2, 0, 0), 0.3, LogBase::E).unwrap();
        assert_eq!(t.value, 0.0);
        let t = hs_epsilon_avg(p(2, 1, 1, 1), 0.4, LogBase::E).unwrap();
        assert!((t.value - 2f64.ln()).abs() < 1e-14 && t.open);
        assert!(hs_epsilon_avg(p(2, 1, 1, 1), 0.0, LogBase::E).is_err());
    }

    #[test]
    fn hs_matches_grid_scan() {
        let params = p(4, 2, 2, 1);
        let atoms = spectral_atoms(params).unwrap();
        let t = hs_epsilon_avg(params, 0.5, LogBase::E).unwrap();
        // largest grid λ whose cumulative mass stays within ε
        let mut best = f64::NEG_INFINITY;
        for i in 0..40000 {
            let lambda = i as f64 * 1e-4;
            let mass: f64 = atoms.iter().filter(|a| a.0 <= lambda).map(|a| a.1).sum();
            if mass <= 0.5 {
                best = lambda;
            }
        }
        assert!(
            best < t.value && t.value - best <= 1e-4 + 1e-12,
            "{best} {t:?}"
        );
    }
}
