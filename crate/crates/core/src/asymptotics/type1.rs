//! Fixed `k, l` with `m = ξ n`: the distribution of `x` tends to the
//! convolution `B(k-l, ξ) * B(l, 1-ξ)`.

use crate::error::{domain, Error, Result};
use crate::numeric::{h, h_prime, ln_factorial, LogBase};
use crate::schur_weyl::{avg_entropy, pmf_float_auto, Params};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypeIRatios {
    pub xi: f64,
    pub k: u32,
    pub l: u32,
}

impl TypeIRatios {
    pub fn new(xi: f64, k: u32, l: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&xi) {
            return Err(domain(format!("xi must lie in [0, 1], got {xi}")));
        }
        if l > k {
            return Err(Error::Constraint(format!(
                "l <= k fails: l = {l} > k = {k}"
            )));
        }
        Ok(TypeIRatios { xi, k, l })
    }

    /// The finite-`n` tuple `(n, round(ξ n), k, l)`.
    pub fn params_at(&self, n: u32) -> Result<Params> {
        let m = (self.xi * n as f64).round() as i64;
        Params::new(n as i64, m, self.k as i64, self.l as i64)
    }

    /// Whether `q` collapses to a point mass at zero.
    pub fn is_degenerate(&self) -> bool {
        self.k == 0
    }
}

fn binomial_pmf(trials: u32, p: f64) -> Vec<f64> {
    (0..=trials)
        .map(|j| {
            let ln_c = ln_factorial(trials as u64)
                - ln_factorial(j as u64)
                - ln_factorial((trials - j) as u64);
            let a = if j == 0 { 1.0 } else { p.powi(j as i32) };
            let b = if j == trials {
                1.0
            } else {
                (1.0 - p).powi((trials - j) as i32)
            };
            ln_c.exp() * a * b
        })
        .collect()
}

/// `q(x | ξ; k, l)` for `x = 0..=k`.
pub fn typeI_q_pmf(r: TypeIRatios) -> Vec<f64> {
    let first = binomial_pmf(r.k - r.l, r.xi);
    let second = binomial_pmf(r.l, 1.0 - r.xi);
    let mut out = vec![0.0; r.k as usize + 1];
    for (a, pa) in first.iter().enumerate() {
        for (b, pb) in second.iter().enumerate() {
            out[a + b] += pa * pb;
        }
    }
    out
}

/// `u = (k - l) ξ + l (1 - ξ)`.
pub fn typeI_expectation(r: TypeIRatios) -> f64 {
    (r.k - r.l) as f64 * r.xi + r.l as f64 * (1.0 - r.xi)
}

/// The quantity `a(n, ξ, k, l)`:
/// `u ln n + u − ln √(2π) + Σ_x q(x) (−(x + ½) ln x − ln q(x))`,
/// with the `x = 0` log term taken as zero.
pub fn typeI_entropy_approx(n: u32, r: TypeIRatios, base: LogBase) -> Result<f64> {
    if n == 0 {
        return Err(domain("n must be at least 1"));
    }
    let u = typeI_expectation(r);
    let tail: f64 = typeI_q_pmf(r)
        .iter()
        .enumerate()
        .filter(|(_, q)| **q > 0.0)
        .map(|(x, q)| {
            let stirling = if x == 0 {
                0.0
            } else {
                (x as f64 + 0.5) * (x as f64).ln()
            };
            q * (-stirling - q.ln())
        })
        .sum();
    let nats = u * (n as f64).ln() + u - (2.0 * std::f64::consts::PI).sqrt().ln() + tail;
    Ok(base.from_nats(nats))
}

/// `F⁻¹(ε) · ln n` with `F` the cdf of `q`.
pub fn typeI_logM(n: u32, r: TypeIRatios, eps: f64, base: LogBase) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain(format!("need 0 < eps < 1, got {eps}")));
    }
    let q = typeI_q_pmf(r);
    let mut acc = 0.0;
    let mut x = q.len() - 1;
    for (i, qi) in q.iter().enumerate() {
        acc += qi;
        if acc >= eps - 1e-12 {
            x = i;
            break;
        }
    }
    Ok(base.from_nats(x as f64 * (n as f64).ln()))
}

/// `k h(ξ) − h′(ξ) (ξ k − l)`, the limit of the decohered baseline.
pub fn decohered_typeI(r: TypeIRatios, base: LogBase) -> Result<f64> {
    if r.xi <= 0.0 || r.xi >= 1.0 {
        return Err(Error::Pole(format!(
            "h'(xi) needs 0 < xi < 1, got {}",
            r.xi
        )));
    }
    let nats = r.k as f64 * h(r.xi) - h_prime(r.xi) * (r.xi * r.k as f64 - r.l as f64);
    Ok(base.from_nats(nats))
}

/// `n · max_x |p(x | n, ξn, k, l) − q(x)|` for each `n`.
pub fn typeI_rate(r: TypeIRatios, ns: &[u32]) -> Result<Vec<(u32, f64)>> {
    let q = typeI_q_pmf(r);
    ns.iter()
        .map(|&n| {
            let p = pmf_float_auto(r.params_at(n)?)?;
            let top = (p.x_max() as usize).max(q.len() - 1);
            let dist = (0..=top)
                .map(|x| (p.mass(x as u32) - q.get(x).copied().unwrap_or(0.0)).abs())
                .fold(0.0, f64::max);
            Ok((n, n as f64 * dist))
        })
        .collect()
}

/// One row of the entropy-versus-approximation comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1Row {
    pub n: u32,
    pub s_exact_over_logn: f64,
    pub a_over_logn: f64,
    pub u: f64,
}

pub fn fig1_row(r: TypeIRatios, n: u32) -> Result<Fig1Row> {
    if r.is_degenerate() {
        return Err(Error::Precondition("k = l = 0 gives a flat figure".into()));
    }
    let ln_n = (n as f64).ln();
    let s = avg_entropy(r.params_at(n)?, LogBase::E)?;
    let a = typeI_entropy_approx(n, r, LogBase::E)?;
    Ok(Fig1Row {
        n,
        s_exact_over_logn: s / ln_n,
        a_over_logn: a / ln_n,
        u: typeI_expectation(r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::binomial_exact;
    use num_traits::ToPrimitive;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    /// `ξ^(l-x) (1-ξ)^(k-l-x) Σ_u C(k-l, x-u) C(l, u) ξ^(2(x-u)) (1-ξ)^(2u)`
    fn double_sum(r: TypeIRatios) -> Vec<f64> {
        let (k, l, xi) = (r.k as i64, r.l as i64, r.xi);
        (0..=k)
            .map(|x| {
                let lo = 0.max(x - k + l);
                let hi = x.min(l);
                let mut s = 0.0;
                for u in lo..=hi {
                    let c = binomial_exact((k - l) as u64, x - u).to_f64().unwrap()
                        * binomial_exact(l as u64, u).to_f64().unwrap();
                    s += c * xi.powi(2 * (x - u) as i32) * (1.0 - xi).powi(2 * u as i32);
                }
                xi.powi((l - x) as i32) * (1.0 - xi).powi((k - l - x) as i32) * s
            })
            .collect()
    }

    #[test]
    fn q_examples() {
        assert!(close(
            &typeI_q_pmf(TypeIRatios::new(0.5, 1, 1).unwrap()),
            &[0.5, 0.5],
            1e-15
        ));
        assert!(close(
            &typeI_q_pmf(TypeIRatios::new(0.5, 2, 1).unwrap()),
            &[0.25, 0.5, 0.25],
            1e-15
        ));
        assert!(close(
            &typeI_q_pmf(TypeIRatios::new(0.3, 2, 0).unwrap()),
            &[0.49, 0.42, 0.09],
            1e-15
        ));
        assert_eq!(typeI_q_pmf(TypeIRatios::new(0.4, 0, 0).unwrap()), vec![1.0]);
    }

    #[test]
    fn convolution_matches_double_sum_and_moments() {
        for &xi in &[0.1, 0.3, 0.5, 0.77] {
            for k in 0..=8 {
                for l in 0..=k {
                    let r = TypeIRatios::new(xi, k, l).unwrap();
                    let q = typeI_q_pmf(r);
                    assert!(close(&q, &double_sum(r), 1e-13), "{r:?}");
                    assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                    let mean: f64 = q.iter().enumerate().map(|(x, p)| x as f64 * p).sum();
                    assert!((mean - typeI_expectation(r)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn expectation_and_logm() {
        let r = TypeIRatios::new(0.5, 2, 1).unwrap();
        assert_eq!(typeI_expectation(r), 1.0);
        assert_eq!(typeI_expectation(TypeIRatios::new(0.2, 0, 0).unwrap()), 0.0);
        assert_eq!(typeI_logM(1000, r, 0.2, LogBase::E).unwrap(), 0.0);
        assert!((typeI_logM(1000, r, 0.5, LogBase::E).unwrap() - 1000f64.ln()).abs() < 1e-12);
        assert_eq!(
            typeI_logM(1000, TypeIRatios::new(0.2, 0, 0).unwrap(), 0.7, LogBase::E).unwrap(),
            0.0
        );
        assert!(typeI_logM(10, r, 1.0, LogBase::E).is_err());
    }

    #[test]
    fn degenerate_approx() {
        let r = TypeIRatios::new(0.3, 0, 0).unwrap();
        assert!(r.is_degenerate());
        let a = typeI_entropy_approx(100, r, LogBase::E).unwrap();
        assert!((a + (2.0 * std::f64::consts::PI).sqrt().ln()).abs() < 1e-15);
    }

    #[test]
    fn decohered_limit() {
        let r = TypeIRatios::new(0.5, 2, 1).unwrap();
        assert!((decohered_typeI(r, LogBase::E).unwrap() - 4f64.ln()).abs() < 1e-14);
        assert!(matches!(
            decohered_typeI(TypeIRatios::new(0.0, 2, 1).unwrap(), LogBase::E),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn ratio_validation() {
        assert!(TypeIRatios::new(1.5, 2, 1).is_err());
        assert!(TypeIRatios::new(0.5, 1, 2).is_err());
    }
}
