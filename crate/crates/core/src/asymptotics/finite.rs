//! Exact finite-`n` quantities compared against the limit formulas.

use super::type2::TypeIIParams;
use crate::error::{Error, Result};
use crate::numeric::{gaussian_cdf, ln_binomial, LogBase};
use crate::schur_weyl::{pmf_closed_kl_float, Params};

/// `ln C(n, m) − ln C(n − k, m − l)`, the asymmetry left after dephasing
/// the Dicke register.
pub fn decohered_asymmetry(params: Params, base: LogBase) -> f64 {
    let (n, m, k, l) = (
        params.n() as u64,
        params.m() as u64,
        params.k() as u64,
        params.l() as u64,
    );
    base.from_nats(ln_binomial(n, m) - ln_binomial(n - k, m - l))
}

/// Summary of one exact distribution against its Gaussian limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CltRow {
    pub n: u32,
    /// `sup_x |F(x) − Φ((x − nμ)/(√n σ))|`, taken on both sides of each jump.
    pub sup_cdf_dist: f64,
    /// `|E[X] − nμ − φ|`
    pub mean_err: f64,
    /// `|Var[X]/n − σ²|`
    pub var_err: f64,
    /// `ln P[|X/n − μ| >= width]`
    pub ln_tail: f64,
    /// Slope of `ln_tail` against `n` from the previous row; NaN on the first.
    pub tail_log_slope: f64,
}

/// Runs the `k = l` slice of `p` at each `n`. Requires `γ = 0`, `ξ <= ½`
/// and `β, δ > 0`.
pub fn clt_empirical_check(ns: &[u32], p: &TypeIIParams, tail_width: f64) -> Result<Vec<CltRow>> {
    if p.gamma.abs() > 1e-12 {
        return Err(Error::Precondition(format!(
            "the exact large-n route needs k = l (gamma = 0), got gamma = {}",
            p.gamma
        )));
    }
    if p.xi > 0.5 {
        return Err(Error::Precondition(format!(
            "xi <= 1/2 fails: xi = {}",
            p.xi
        )));
    }
    if !p.assumption_holds() {
        return Err(Error::Precondition("beta, delta > 0 fails".into()));
    }
    let sigma2 = p
        .sigma2
        .ok_or_else(|| Error::Precondition("D = 0".into()))?;
    let phi = p
        .phi
        .ok_or_else(|| Error::Precondition("mu = 1/2".into()))?;
    let mut rows: Vec<CltRow> = Vec::with_capacity(ns.len());
    for &n in ns {
        let params = p.params_at(n)?;
        let dist = pmf_closed_kl_float(params)?;
        let nf = n as f64;
        let centre = nf * p.mu;
        let scale = (nf * sigma2).sqrt();
        let mut cdf = 0.0;
        let mut sup: f64 = 0.0;
        for (x, mass) in dist.masses().iter().enumerate() {
            let g = gaussian_cdf((x as f64 - centre) / scale);
            sup = sup.max((cdf - g).abs());
            cdf += mass;
            sup = sup.max((cdf - g).abs());
        }
        let mean = dist.mean();
        let var = dist.variance();
        let ln_tail = dist.ln_mass_where(|x| (x as f64 / nf - p.mu).abs() >= tail_width);
        let tail_log_slope = match rows.last() {
            Some(prev) => (ln_tail - prev.ln_tail) / (nf - prev.n as f64),
            None => f64::NAN,
        };
        rows.push(CltRow {
            n,
            sup_cdf_dist: sup,
            mean_err: (mean - centre - phi).abs(),
            var_err: (var / nf - sigma2).abs(),
            ln_tail,
            tail_log_slope,
        });
    }
    Ok(rows)
}

/// `S_exact − (n C₁ + C₀)` along the `k = l` slice, in nats.
pub fn refined_residuals(p: &TypeIIParams, ns: &[u32]) -> Result<Vec<(u32, f64)>> {
    let c = super::type2::typeII_refined_constants(p, LogBase::E)?;
    ns.iter()
        .map(|&n| {
            let dist = pmf_closed_kl_float(p.params_at(n)?)?;
            let s = crate::schur_weyl::entropy_of_pmf(&dist, LogBase::E)?;
            Ok((n, s - c.prediction(n)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur_weyl::avg_entropy;

    fn p(n: i64, m: i64, k: i64, l: i64) -> Params {
        Params::new(n, m, k, l).unwrap()
    }

    #[test]
    fn decohered_examples() {
        assert!((decohered_asymmetry(p(4, 2, 2, 1), LogBase::E) - 3f64.ln()).abs() < 1e-14);
        assert_eq!(decohered_asymmetry(p(9, 4, 0, 0), LogBase::E), 0.0);
    }

    #[test]
    fn coherent_exceeds_decohered() {
        for n in 0..=18 {
            for params in Params::enumerate(n) {
                let s = avg_entropy(params, LogBase::E).unwrap();
                assert!(
                    s >= decohered_asymmetry(params, LogBase::E) - 1e-12,
                    "{params}"
                );
            }
        }
    }

    #[test]
    fn incoherent_branch_entropy() {
        for n in 1..=16 {
            for params in
                Params::enumerate(n).filter(|q| q.dicke_ones() == 0 || q.dicke_zeros() == 0)
            {
                let s = avg_entropy(params, LogBase::E).unwrap();
                let want = ln_binomial(n as u64, params.m() as u64);
                assert!((s - want).abs() < 1e-10, "{params}: {s} vs {want}");
            }
        }
    }

    #[test]
    fn clt_small() {
        let tp = TypeIIParams::from_fractions(0.2, 0.3, 0.0, 0.5).unwrap();
        let rows = clt_empirical_check(&[400, 800], &tp, 0.05).unwrap();
        assert!(rows[0].tail_log_slope.is_nan());
        assert!(rows[1].sup_cdf_dist < rows[0].sup_cdf_dist);
        assert!(rows[1].tail_log_slope < 0.0);
        let bad = TypeIIParams::from_fractions(0.2, 0.3, 0.1, 0.4).unwrap();
        assert!(clt_empirical_check(&[100], &bad, 0.05).is_err());
    }
}
