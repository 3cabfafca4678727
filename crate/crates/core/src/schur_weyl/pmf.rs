//! The outcome distribution `p(x)` of measuring the Schur-Weyl block label.
//!
//! The state is `|1^l 0^(k-l)⟩ ⊗ |Dicke(N+M, M)⟩`. In spin language the
//! `l` ones form a stretched spin `l/2` with projection `-l/2`, the `k - l`
//! zeros a stretched spin `(k-l)/2` with projection `+(k-l)/2`, and the Dicke
//! register is the single state `|j3 = (N+M)/2, m3 = (N-M)/2⟩`. The block
//! `(n-x, x)` is the total-spin `n/2 - x` eigenspace, so `p(x)` is a sum of
//! products of two squared coupling coefficients over the intermediate
//! spin `j12`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::cg::{CgParts, Factorials, HalfInt};
use super::params::Params;
use crate::error::{domain, Error, Result};
use crate::numeric::{binomial_exact, ln_binomial, rational_to_f64};

/// Largest `n` handled by the exact rational route.
pub const EXACT_MAX_N: u32 = 300;

/// Largest `n` for the general float route when the attached string is
/// longer than [`CHEAP_TAG_LEN`]. The `k = l` closed form has no cap.
pub const FLOAT_MAX_N: u32 = 4000;

/// Attached strings up to this length keep the coupling sums short enough
/// that the float route is uncapped.
pub const CHEAP_TAG_LEN: u32 = 16;

/// Exact distribution over `x = 0..=x_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPmf {
    n: u32,
    masses: Vec<BigRational>,
}

/// Floating-point distribution over `x = 0..=x_max`, with logs kept
/// alongside so that tiny masses stay usable.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPmf {
    n: u32,
    masses: Vec<f64>,
    ln_masses: Vec<f64>,
}

impl ExactPmf {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Largest `x` allowed by the selection rules.
    pub fn x_max(&self) -> u32 {
        self.masses.len() as u32 - 1
    }

    pub fn mass(&self, x: u32) -> BigRational {
        self.masses
            .get(x as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.masses
    }

    /// `(x, p(x))` for every `x` with nonzero mass.
    pub fn support(&self) -> impl Iterator<Item = (u32, &BigRational)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(x, p)| (x as u32, p))
    }

    pub fn total(&self) -> BigRational {
        self.masses
            .iter()
            .fold(BigRational::zero(), |acc, p| acc + p)
    }

    pub fn to_float(&self) -> FloatPmf {
        let ln_masses = self
            .masses
            .iter()
            .map(crate::numeric::ln_rational)
            .collect();
        FloatPmf {
            n: self.n,
            masses: self.masses.iter().map(rational_to_f64).collect(),
            ln_masses,
        }
    }

    /// Smallest `x` with `F(x) >= eps`, compared exactly.
    pub fn quantile(&self, eps: f64) -> Result<u32> {
        check_eps(eps)?;
        let target = BigRational::from_float(eps).ok_or_else(|| domain("eps is not finite"))?;
        let mut acc = BigRational::zero();
        for (x, p) in self.masses.iter().enumerate() {
            acc += p;
            if acc >= target {
                return Ok(x as u32);
            }
        }
        Ok(self.x_max())
    }
}

impl FloatPmf {
    pub(crate) fn from_ln(n: u32, ln_masses: Vec<f64>) -> Self {
        FloatPmf {
            n,
            masses: ln_masses.iter().map(|l| l.exp()).collect(),
            ln_masses,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn x_max(&self) -> u32 {
        self.masses.len() as u32 - 1
    }

    pub fn mass(&self, x: u32) -> f64 {
        self.masses.get(x as usize).copied().unwrap_or(0.0)
    }

    /// `ln p(x)`, `-inf` off the support.
    pub fn ln_mass(&self, x: u32) -> f64 {
        self.ln_masses
            .get(x as usize)
            .copied()
            .unwrap_or(f64::NEG_INFINITY)
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn ln_masses(&self) -> &[f64] {
        &self.ln_masses
    }

    pub fn support(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.masses
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(x, p)| (x as u32, *p))
    }

    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// `F(x) = P[X <= x]`.
    pub fn cdf(&self, x: i64) -> f64 {
        if x < 0 {
            return 0.0;
        }
        let end = (x as usize + 1).min(self.masses.len());
        self.masses[..end].iter().sum::<f64>().min(1.0)
    }

    pub fn mean(&self) -> f64 {
        self.masses
            .iter()
            .enumerate()
            .map(|(x, p)| x as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.masses
            .iter()
            .enumerate()
            .map(|(x, p)| (x as f64 - mean).powi(2) * p)
            .sum()
    }

    /// `ln P[X in set]` by log-sum-exp over the selected atoms.
    pub fn ln_mass_where(&self, mut keep: impl FnMut(u32) -> bool) -> f64 {
        let picked: Vec<f64> = self
            .ln_masses
            .iter()
            .enumerate()
            .filter(|(x, _)| keep(*x as u32))
            .map(|(_, l)| *l)
            .collect();
        log_sum_exp(&picked)
    }

    /// Smallest `x` with `F(x) >= eps`. Accumulated rounding is absorbed
    /// with a 1e-12 slack.
    pub fn quantile(&self, eps: f64) -> Result<u32> {
        check_eps(eps)?;
        let mut acc = 0.0;
        for (x, p) in self.masses.iter().enumerate() {
            acc += p;
            if acc >= eps - 1e-12 {
                return Ok(x as u32);
            }
        }
        Ok(self.x_max())
    }
}

pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let top = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + values.iter().map(|v| (v - top).exp()).sum::<f64>().ln()
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("need 0 < eps < 1, got {eps}")))
    }
}

/// The fixed spins and projections of the coupling scheme.
struct Coupling {
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    m12: HalfInt,
    j3: HalfInt,
    m3: HalfInt,
}

impl Coupling {
    fn new(p: &Params) -> Self {
        let l = p.tag_ones() as i64;
        let kz = p.tag_zeros() as i64;
        let big_n = p.dicke_zeros() as i64;
        let big_m = p.dicke_ones() as i64;
        Coupling {
            j1: HalfInt::from_twice(l),
            m1: HalfInt::from_twice(-l),
            j2: HalfInt::from_twice(kz),
            m2: HalfInt::from_twice(kz),
            m12: HalfInt::from_twice(kz - l),
            j3: HalfInt::from_twice(big_n + big_m),
            m3: HalfInt::from_twice(big_n - big_m),
        }
    }

    /// Allowed values of `2 j12`.
    fn j12_range(&self) -> impl Iterator<Item = i64> {
        let lo = (self.j1.twice() - self.j2.twice())
            .abs()
            .max(self.m12.twice().abs());
        let hi = self.j1.twice() + self.j2.twice();
        // lo and hi share parity with j1 + j2
        let lo = if (lo + hi) % 2 == 0 { lo } else { lo + 1 };
        (lo..=hi).step_by(2)
    }

    /// Pairs of coupling coefficients contributing to block `x`.
    fn branches(&self, n: u32, x: u32) -> Vec<(CgParts, CgParts)> {
        let j = HalfInt::from_twice(n as i64 - 2 * x as i64);
        self.j12_range()
            .filter_map(|tj12| {
                let j12 = HalfInt::from_twice(tj12);
                let first = CgParts::new(self.j1, self.m1, self.j2, self.m2, j12)?;
                let second = CgParts::new(j12, self.m12, self.j3, self.m3, j)?;
                if first.is_zero() || second.is_zero() {
                    None
                } else {
                    Some((first, second))
                }
            })
            .collect()
    }
}

/// Upper end of the support: `J >= |M_total|` forces `x <= min(m, n - m)`,
/// and `J >= |j12 - j3|` bounds `x` through the smallest intermediate gap.
pub fn support_max(p: &Params) -> u32 {
    let c = Coupling::new(p);
    let n = p.n() as i64;
    let min_gap = c
        .j12_range()
        .map(|tj12| (tj12 - c.j3.twice()).abs())
        .min()
        .unwrap_or(0);
    let from_gap = (n - min_gap) / 2;
    let weight = p.m().min(p.n() - p.m()) as i64;
    weight.min(from_gap).max(0) as u32
}

/// Exact `p(x)` by three-body coupling. Refuses `n` above [`EXACT_MAX_N`];
/// see [`pmf_with_cap`] to move the cap.
pub fn pmf(params: Params) -> Result<ExactPmf> {
    pmf_with_cap(params, EXACT_MAX_N)
}

pub fn pmf_with_cap(params: Params, cap: u32) -> Result<ExactPmf> {
    if params.n() > cap {
        return Err(Error::SizeCap {
            what: "n (exact pmf)",
            value: params.n() as u64,
            cap: cap as u64,
        });
    }
    let n = params.n();
    let coupling = Coupling::new(&params);
    let facts = Factorials::up_to(n as u64 + 1);
    let masses = (0..=support_max(&params))
        .map(|x| {
            coupling
                .branches(n, x)
                .iter()
                .fold(BigRational::zero(), |acc, (a, b)| {
                    acc + a.to_rational(&facts) * b.to_rational(&facts)
                })
        })
        .collect();
    Ok(ExactPmf { n, masses })
}

/// Float `p(x)` by three-body coupling, evaluated in the log domain from
/// exact integer Racah sums.
pub fn pmf_float(params: Params) -> Result<FloatPmf> {
    pmf_float_with_cap(params, FLOAT_MAX_N)
}

pub fn pmf_float_with_cap(params: Params, cap: u32) -> Result<FloatPmf> {
    let tag = params.tag_ones().min(params.tag_zeros());
    if params.n() > cap && tag > CHEAP_TAG_LEN {
        return Err(Error::SizeCap {
            what: "n (float pmf, long attached string)",
            value: params.n() as u64,
            cap: cap as u64,
        });
    }
    let n = params.n();
    let coupling = Coupling::new(&params);
    let ln_masses = (0..=support_max(&params))
        .map(|x| {
            let terms: Vec<f64> = coupling
                .branches(n, x)
                .iter()
                .map(|(a, b)| a.ln() + b.ln())
                .collect();
            log_sum_exp(&terms)
        })
        .collect();
    Ok(FloatPmf::from_ln(n, ln_masses))
}

/// Float pmf by the cheapest sound route: the `k = l` closed form, the same
/// closed form through the `0 <-> 1` symmetry, or the general coupling.
pub fn pmf_float_auto(params: Params) -> Result<FloatPmf> {
    if params.has_closed_form() {
        pmf_closed_kl_float(params)
    } else if params.flipped().has_closed_form() {
        pmf_closed_kl_float(params.flipped())
    } else {
        pmf_float(params)
    }
}

fn check_closed(params: &Params) -> Result<()> {
    if params.k() != params.l() {
        return Err(Error::Precondition(format!(
            "closed form needs k = l, got k = {}, l = {}",
            params.k(),
            params.l()
        )));
    }
    if 2 * params.m() > params.n() {
        return Err(Error::Precondition(format!(
            "closed form needs m <= n - m, got m = {}, n = {}",
            params.m(),
            params.n()
        )));
    }
    Ok(())
}

/// Exact `k = l` closed form:
/// `p(x) = C(n,x)/C(n,m) · C(l,x)/C(m,x) · (n-2x+1)/(n-x+1) · C(n-l-x, m-l)`.
pub fn pmf_closed_kl(params: Params) -> Result<ExactPmf> {
    check_closed(&params)?;
    let (n, m, l) = (params.n() as u64, params.m() as u64, params.l() as u64);
    let c_nm = binomial_exact(n, m as i64);
    let masses = (0..=l.min(m))
        .map(|x| {
            let tail = binomial_exact(n - l - x, (m - l) as i64);
            if tail.is_zero() {
                return BigRational::zero();
            }
            let num = binomial_exact(n, x as i64)
                * binomial_exact(l, x as i64)
                * BigInt::from(n - 2 * x + 1)
                * tail;
            let den = &c_nm * binomial_exact(m, x as i64) * BigInt::from(n - x + 1);
            BigRational::new(num, den)
        })
        .collect();
    Ok(ExactPmf {
        n: params.n(),
        masses,
    })
}

/// Log-domain evaluation of the `k = l` closed form. Uncapped.
pub fn pmf_closed_kl_float(params: Params) -> Result<FloatPmf> {
    check_closed(&params)?;
    let (n, m, l) = (params.n() as u64, params.m() as u64, params.l() as u64);
    let ln_c_nm = ln_binomial(n, m);
    let ln_masses = (0..=l.min(m))
        .map(|x| {
            if m - l > n - l - x {
                return f64::NEG_INFINITY;
            }
            ln_binomial(n, x) - ln_c_nm + ln_binomial(l, x) - ln_binomial(m, x)
                + ((n - 2 * x + 1) as f64).ln()
                - ((n - x + 1) as f64).ln()
                + ln_binomial(n - l - x, m - l)
        })
        .collect();
    Ok(FloatPmf::from_ln(params.n(), ln_masses))
}

/// Pmfs of `(n, m, k, l)` and `(n, n - m, k, k - l)`.
pub fn pmf_symmetry_pair(params: Params) -> Result<(ExactPmf, ExactPmf)> {
    Ok((pmf(params)?, pmf(params.flipped())?))
}

/// Smallest `x` with `F(x) >= eps`.
pub fn pmf_quantile(pmf: &ExactPmf, eps: f64) -> Result<u32> {
    pmf.quantile(eps)
}

impl Default for ExactPmf {
    fn default() -> Self {
        ExactPmf {
            n: 0,
            masses: vec![BigRational::one()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64, m: i64, k: i64, l: i64) -> Params {
        Params::new(n, m, k, l).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn pure_dicke_is_symmetric() {
        for n in 0..=9 {
            for m in 0..=n {
                let d = pmf(p(n, m, 0, 0)).unwrap();
                assert_eq!(d.mass(0), BigRational::one());
                assert_eq!(d.total(), BigRational::one());
            }
        }
    }

    #[test]
    fn small_examples() {
        let d = pmf(p(2, 1, 1, 1)).unwrap();
        assert_eq!(d.masses(), &[rat(1, 2), rat(1, 2)]);
        let d = pmf(p(4, 2, 2, 1)).unwrap();
        assert_eq!(d.total(), BigRational::one());
        assert_eq!(d.masses(), &[rat(1, 3), rat(1, 2), rat(1, 6)]);
    }

    #[test]
    fn normalization_and_symmetry_sweep() {
        for n in 0..=14 {
            for params in Params::enumerate(n) {
                let (a, b) = pmf_symmetry_pair(params).unwrap();
                assert_eq!(a.total(), BigRational::one(), "{params}");
                assert_eq!(a, b, "{params}");
            }
        }
    }

    #[test]
    fn closed_form_agrees() {
        assert_eq!(
            pmf(p(6, 3, 2, 2)).unwrap(),
            pmf_closed_kl(p(6, 3, 2, 2)).unwrap()
        );
        for n in 0..=16 {
            for params in Params::enumerate(n).filter(|q| q.has_closed_form()) {
                let closed = pmf_closed_kl(params).unwrap();
                let general = pmf(params).unwrap();
                for x in 0..=closed.x_max().max(general.x_max()) {
                    assert_eq!(closed.mass(x), general.mass(x), "{params} x={x}");
                }
            }
        }
    }

    #[test]
    fn closed_form_preconditions() {
        assert!(matches!(
            pmf_closed_kl(p(4, 2, 2, 1)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            pmf_closed_kl(p(4, 3, 1, 1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn float_routes_match_exact() {
        for n in [7u32, 12, 19] {
            for params in Params::enumerate(n) {
                let exact = pmf(params).unwrap().to_float();
                let float = pmf_float(params).unwrap();
                let auto = pmf_float_auto(params).unwrap();
                for x in 0..=n / 2 {
                    assert!((exact.mass(x) - float.mass(x)).abs() < 1e-12, "{params}");
                    assert!((exact.mass(x) - auto.mass(x)).abs() < 1e-12, "{params}");
                }
            }
        }
    }

    #[test]
    fn large_n_float_normalizes() {
        let d = pmf_float(p(3000, 1500, 40, 17)).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-9);
        let d = pmf_float_auto(p(20000, 10000, 2, 1)).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-9);
        let d = pmf_closed_kl_float(p(4000, 2000, 800, 800)).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn caps() {
        assert!(matches!(pmf(p(301, 3, 1, 1)), Err(Error::SizeCap { .. })));
        assert!(pmf_with_cap(p(301, 3, 1, 1), 400).is_ok());
        assert!(matches!(
            pmf_float(p(5000, 2500, 100, 50)),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn quantiles() {
        let d = pmf(p(2, 1, 1, 1)).unwrap();
        assert_eq!(pmf_quantile(&d, 0.5).unwrap(), 0);
        assert_eq!(pmf_quantile(&d, 0.6).unwrap(), 1);
        assert_eq!(d.to_float().quantile(0.5).unwrap(), 0);
        assert_eq!(d.to_float().quantile(0.6).unwrap(), 1);
        let delta = pmf(p(5, 2, 0, 0)).unwrap();
        assert_eq!(pmf_quantile(&delta, 0.9).unwrap(), 0);
        assert!(pmf_quantile(&delta, 1.0).is_err());
    }

    #[test]
    fn support_bound_is_tight_enough() {
        for n in 0..=12 {
            for params in Params::enumerate(n) {
                let d = pmf(params).unwrap();
                assert!(d.x_max() <= n / 2);
            }
        }
    }
}
