//! `m, k, l` all linear in `n`: Gaussian fluctuations around `n μ`.

use crate::error::{Error, Result};
use crate::numeric::{gaussian_quantile, h, h_prime, h_second, LogBase};
use crate::schur_weyl::Params;

const SUM_TOL: f64 = 1e-12;

/// Which formula family governs a ratio point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeIIBranch {
    /// `β, δ > 0` and an attached string is present.
    Regular,
    /// `β δ = 0`: the Dicke register is a single basis state and the
    /// entropy is `ln C(n, m)`.
    Incoherent,
    /// `α + γ = 0`: nothing attached, the averaged state is pure.
    NoAttachment,
}

/// Ratios `α = L/n`, `β = M/n`, `γ = K/n`, `δ = N/n` and the limit
/// quantities derived from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypeIIParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub xi: f64,
    pub kappa: f64,
    pub d: f64,
    pub mu: f64,
    pub nu: f64,
    /// Present only when `D > 0`.
    pub sigma2: Option<f64>,
    /// Present only when `σ²` is and `μ ≠ ½`.
    pub phi: Option<f64>,
    pub branch: TypeIIBranch,
}

impl TypeIIParams {
    /// From `(α, β, γ, δ)`, which must be nonnegative and sum to one.
    pub fn from_fractions(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let parts = [alpha, beta, gamma, delta];
        if parts.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Constraint(format!(
                "ratios must be nonnegative, got {parts:?}"
            )));
        }
        if (parts.iter().sum::<f64>() - 1.0).abs() > SUM_TOL {
            return Err(Error::Constraint(format!(
                "alpha + beta + gamma + delta = 1 fails: {parts:?}"
            )));
        }
        let xi = alpha + beta;
        let kappa = alpha + gamma;
        let d = 4.0 * beta * delta + (2.0 * xi - 1.0).powi(2);
        let mu = (1.0 - d.sqrt()) / 2.0;
        let nu = 1.0 - mu;
        let sigma2 = (d > 0.0).then(|| (1.0 - beta - delta) * beta * delta / d);
        let phi = sigma2.and_then(|s| (mu != 0.5).then(|| (s - mu) / (1.0 - 2.0 * mu)));
        let branch = if kappa == 0.0 {
            TypeIIBranch::NoAttachment
        } else if beta * delta == 0.0 {
            TypeIIBranch::Incoherent
        } else {
            TypeIIBranch::Regular
        };
        Ok(TypeIIParams {
            alpha,
            beta,
            gamma,
            delta,
            xi,
            kappa,
            d,
            mu,
            nu,
            sigma2,
            phi,
            branch,
        })
    }

    /// From `(β, δ, ξ)` with `α = ξ − β`, `γ = 1 − ξ − δ`.
    pub fn from_beta_delta_xi(beta: f64, delta: f64, xi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::Constraint(format!("0 <= xi <= 1 fails: xi = {xi}")));
        }
        if beta < 0.0 || delta < 0.0 {
            return Err(Error::Constraint(format!(
                "beta, delta >= 0 fails: beta = {beta}, delta = {delta}"
            )));
        }
        if beta > xi {
            return Err(Error::Constraint(format!(
                "beta <= xi fails: {beta} > {xi}"
            )));
        }
        if delta > 1.0 - xi {
            return Err(Error::Constraint(format!(
                "delta <= 1 - xi fails: {delta} > {}",
                1.0 - xi
            )));
        }
        Self::from_fractions(xi - beta, beta, 1.0 - xi - delta, delta)
    }

    /// The ratios of a concrete tuple.
    pub fn from_params(p: &Params) -> Result<Self> {
        let n = p.n() as f64;
        if p.n() == 0 {
            return Err(Error::Constraint("n must be positive".into()));
        }
        Self::from_fractions(
            p.tag_ones() as f64 / n,
            p.dicke_ones() as f64 / n,
            p.tag_zeros() as f64 / n,
            p.dicke_zeros() as f64 / n,
        )
    }

    /// The condition `β, δ > 0` under which the Gaussian limit holds.
    pub fn assumption_holds(&self) -> bool {
        self.beta > 0.0 && self.delta > 0.0
    }

    pub fn sigma(&self) -> Option<f64> {
        self.sigma2.map(f64::sqrt)
    }

    /// The tuple `(n, round(ξn), round(κn), round(αn))`.
    pub fn params_at(&self, n: u32) -> Result<Params> {
        let nf = n as f64;
        Params::new(
            n as i64,
            (self.xi * nf).round() as i64,
            (self.kappa * nf).round() as i64,
            (self.alpha * nf).round() as i64,
        )
    }
}

/// The one-parameter family `α = ξκ`, `β = ξ(1−κ)`, `γ = (1−ξ)κ`,
/// `δ = (1−ξ)(1−κ)`.
pub fn nma_slice(xi: f64, kappa: f64) -> Result<TypeIIParams> {
    if !(0.0..=1.0).contains(&xi) || !(0.0..=1.0).contains(&kappa) {
        return Err(Error::Constraint(format!(
            "need 0 <= xi, kappa <= 1, got xi = {xi}, kappa = {kappa}"
        )));
    }
    let beta = xi * (1.0 - kappa);
    let delta = (1.0 - xi) * (1.0 - kappa);
    let alpha = xi * kappa;
    // γ by complement keeps the sum exact
    TypeIIParams::from_fractions(alpha, beta, 1.0 - alpha - beta - delta, delta)
}

/// Leading entropy term with the flag that says whether it applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeadingTerm {
    pub value: f64,
    pub assumption_holds: bool,
}

/// `n h(μ)`.
pub fn typeII_entropy_leading(p: &TypeIIParams, n: u32, base: LogBase) -> LeadingTerm {
    LeadingTerm {
        value: base.from_nats(n as f64 * h(p.mu)),
        assumption_holds: p.assumption_holds(),
    }
}

fn require_gaussian(p: &TypeIIParams) -> Result<f64> {
    if !p.assumption_holds() {
        return Err(Error::Precondition(format!(
            "beta, delta > 0 fails: beta = {}, delta = {}",
            p.beta, p.delta
        )));
    }
    p.sigma()
        .ok_or_else(|| Error::Precondition("sigma^2 undefined at D = 0".into()))
}

/// `n h(μ) + √n h′(μ) σ Φ⁻¹(ε)`: the entropy at the `ε` quantile
/// `x ≈ nμ + √n σ Φ⁻¹(ε)` of the Gaussian limit.
pub fn typeII_logM(p: &TypeIIParams, n: u32, eps: f64, base: LogBase) -> Result<f64> {
    let sigma = require_gaussian(p)?;
    let z = gaussian_quantile(eps)?;
    let nf = n as f64;
    Ok(base.from_nats(nf * h(p.mu) + nf.sqrt() * h_prime(p.mu) * sigma * z))
}

/// The same expansion with the standard deviation in the denominator,
/// `n h(μ) + √n h′(μ) Φ⁻¹(ε) / σ`, kept for comparison.
pub fn typeII_logM_sigma_divided(p: &TypeIIParams, n: u32, eps: f64, base: LogBase) -> Result<f64> {
    let sigma = require_gaussian(p)?;
    let z = gaussian_quantile(eps)?;
    let nf = n as f64;
    Ok(base.from_nats(nf * h(p.mu) + nf.sqrt() * h_prime(p.mu) * z / sigma))
}

/// Constants of the refined entropy expansion on the `γ = 0` face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedConstants {
    pub c1: f64,
    /// Constant term including the correction that makes the expansion
    /// match exact entropies.
    pub c2: f64,
    /// `½ ln[αβ/(ξ²(1−ξ)) (1 − r)]` alone.
    pub c2_uncorrected: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub phi: f64,
    pub sigma2: f64,
}

impl RefinedConstants {
    /// `C₀ = C₂ + C₃ φ + C₄ σ²`.
    pub fn c0(&self) -> f64 {
        self.c2 + self.c3 * self.phi + self.c4 * self.sigma2
    }

    /// `n C₁ + C₀`, in the base the constants were requested in.
    pub fn prediction(&self, n: u32) -> f64 {
        n as f64 * self.c1 + self.c0()
    }
}

/// `C₁ … C₆` for `γ = 0`, `0 < ξ ≤ ½`, `α, β, δ > 0`. Values are in nats;
/// `base` rescales every constant.
pub fn typeII_refined_constants(p: &TypeIIParams, base: LogBase) -> Result<RefinedConstants> {
    let TypeIIParams {
        alpha,
        beta,
        gamma,
        delta,
        xi,
        mu,
        ..
    } = *p;
    if gamma.abs() > SUM_TOL {
        return Err(Error::Precondition(format!(
            "gamma = 0 fails: gamma = {gamma}"
        )));
    }
    if !(xi > 0.0 && xi <= 0.5) {
        return Err(Error::Precondition(format!(
            "0 < xi <= 1/2 fails: xi = {xi}"
        )));
    }
    if !(alpha > 0.0 && beta > 0.0 && delta > 0.0) {
        return Err(Error::Precondition(format!(
            "alpha, beta, delta > 0 fails: ({alpha}, {beta}, {delta})"
        )));
    }
    let sigma2 = p
        .sigma2
        .ok_or_else(|| Error::Precondition("D = 0".into()))?;
    let phi = p
        .phi
        .ok_or_else(|| Error::Precondition("mu = 1/2".into()))?;
    let rest = 1.0 - alpha - mu;
    let r = beta / rest;
    let (sx, sa) = (mu / xi, mu / alpha);

    let c1 = h(xi) + xi * h(sx) - alpha * h(sa) - rest * h(r);
    let c2_uncorrected = 0.5 * (alpha * beta / (xi * xi * (1.0 - xi)) * (1.0 - r)).ln();
    let c2 = c2_uncorrected + 0.5 * ((sa * (1.0 - sa)) / (sx * (1.0 - sx))).ln();
    let c3 = h_prime(sx) - h_prime(sa) + h(r) - r * h_prime(r);
    let c4 = h_second(sx) / (2.0 * xi)
        - h_second(sa) / (2.0 * alpha)
        - beta * beta / (2.0 * rest.powi(3)) * h_second(r);
    let c5 = -0.5 * beta / (rest * (rest - beta));
    let c6 = 0.25 * (1.0 / rest.powi(2) - 1.0 / (rest - beta).powi(2));

    let s = |v: f64| base.from_nats(v);
    Ok(RefinedConstants {
        c1: s(c1),
        c2: s(c2),
        c2_uncorrected: s(c2_uncorrected),
        c3: s(c3),
        c4: s(c4),
        c5: s(c5),
        c6: s(c6),
        phi,
        sigma2,
    })
}

/// `F(w) = h(ξ) + ξ h((μ+w)/ξ) − α h((μ+w)/α) − (1−α−μ−w) h(β/(1−α−μ−w))`,
/// whose value, slope and half curvature at `w = 0` are `C₁, C₃, C₄`.
pub fn refined_leading_profile(p: &TypeIIParams, w: f64) -> f64 {
    let rest = 1.0 - p.alpha - p.mu - w;
    h(p.xi) + p.xi * h((p.mu + w) / p.xi)
        - p.alpha * h((p.mu + w) / p.alpha)
        - rest * h(p.beta / rest)
}

/// `g(w) = ½ ln(1 − β/(1−α−μ−w))`, whose slope and half curvature at
/// `w = 0` are `C₅, C₆`.
pub fn refined_log_profile(p: &TypeIIParams, w: f64) -> f64 {
    0.5 * (1.0 - p.beta / (1.0 - p.alpha - p.mu - w)).ln()
}

/// `n (h(ξ) − (β+δ) h(β/(β+δ))) + ½ ln(β+δ) − ½ ln(2π ξ(1−ξ)) + ½ ln(2π r(1−r))`
/// with `r = β/(β+δ)`.
pub fn decohered_typeII(p: &TypeIIParams, n: u32, base: LogBase) -> Result<f64> {
    if !(p.xi > 0.0 && p.xi < 1.0) {
        return Err(Error::Pole(format!("need 0 < xi < 1, got {}", p.xi)));
    }
    if !p.assumption_holds() {
        return Err(Error::Precondition(format!(
            "beta, delta > 0 fails: beta = {}, delta = {}",
            p.beta, p.delta
        )));
    }
    let bd = p.beta + p.delta;
    let r = p.beta / bd;
    let two_pi = 2.0 * std::f64::consts::PI;
    let nats = n as f64 * (h(p.xi) - bd * h(r)) + 0.5 * bd.ln()
        - 0.5 * (two_pi * p.xi * (1.0 - p.xi)).ln()
        + 0.5 * (two_pi * r * (1.0 - r)).ln();
    Ok(base.from_nats(nats))
}

/// `h(μ) − [h(ξ) − (β+δ) h(β/(β+δ))]`, nonnegative. The bracket's second
/// term is taken as zero when `β + δ = 0`.
pub fn zmy_gap(p: &TypeIIParams, base: LogBase) -> f64 {
    let bd = p.beta + p.delta;
    let mixed = if bd > 0.0 { bd * h(p.beta / bd) } else { 0.0 };
    base.from_nats(h(p.mu) - (h(p.xi) - mixed))
}

/// One row of the rate comparison at fixed `ξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig2Row {
    pub kappa: f64,
    pub h_mu: f64,
    pub kappa_h_xi: f64,
}

/// `h(μ)` against `κ h(ξ)` along the slice at fixed `ξ`, for
/// `κ = 0, 1/steps, …, 1`.
pub fn fig2_rows(xi: f64, steps: u32, base: LogBase) -> Result<Vec<Fig2Row>> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::Domain(format!("need 0 < xi < 1, got {xi}")));
    }
    if steps == 0 {
        return Err(Error::Domain("steps must be positive".into()));
    }
    (0..=steps)
        .map(|i| {
            let kappa = i as f64 / steps as f64;
            let p = nma_slice(xi, kappa)?;
            Ok(Fig2Row {
                kappa,
                h_mu: base.from_nats(h(p.mu)),
                kappa_h_xi: base.from_nats(kappa * h(xi)),
            })
        })
        .collect()
}
