//! Everything known about one parameter point, side by side.

use crate::activation::{permutation_activation, ActivationReport};
use crate::asymptotics::{
    decohered_asymmetry, typeII_entropy_leading, typeII_refined_constants, typeI_entropy_approx,
    TypeIIBranch, TypeIIParams, TypeIRatios,
};
use crate::error::Result;
use crate::numeric::{LogBase, Threshold};
use crate::schur_weyl::{avg_entropy, hs_epsilon_avg, Params};
use crate::table::{fmt_float, Table};

/// Default levels for the `H_s` profile.
pub const DEFAULT_EPS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];

#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetryReport {
    pub params: Params,
    pub base: LogBase,
    pub entropy: f64,
    pub decohered: f64,
    pub activation: ActivationReport,
    pub hs_profile: Vec<(f64, Threshold)>,
    /// `a(n)` with `ξ = m/n` and the actual `k, l`.
    pub type1_prediction: Option<f64>,
    /// `n h(μ)` at the point's own ratios.
    pub type2_leading: Option<f64>,
    /// `n C₁ + C₀`, only on the face where the constants exist.
    pub type2_refined: Option<f64>,
}

impl AsymmetryReport {
    pub fn new(params: Params, eps: &[f64], base: LogBase) -> Result<Self> {
        let n = params.n();
        let entropy = avg_entropy(params, base)?;
        let hs_profile = eps
            .iter()
            .map(|&e| Ok((e, hs_epsilon_avg(params, e, base)?)))
            .collect::<Result<Vec<_>>>()?;
        let xi = if n == 0 {
            0.0
        } else {
            params.m() as f64 / n as f64
        };
        let type1_prediction = match (n, TypeIRatios::new(xi, params.k(), params.l())) {
            (1.., Ok(r)) => typeI_entropy_approx(n, r, base).ok(),
            _ => None,
        };
        let t2 = if n > 0 {
            TypeIIParams::from_params(&params).ok()
        } else {
            None
        };
        let type2_leading = t2
            .filter(|p| p.branch == TypeIIBranch::Regular)
            .map(|p| typeII_entropy_leading(&p, n, base).value);
        let type2_refined = t2
            .and_then(|p| typeII_refined_constants(&p, base).ok())
            .map(|c| c.prediction(n));
        Ok(AsymmetryReport {
            params,
            base,
            entropy,
            decohered: decohered_asymmetry(params, base),
            activation: permutation_activation(params, true, base)?,
            hs_profile,
            type1_prediction,
            type2_leading,
            type2_refined,
        })
    }

    /// `entropy − prediction` for each available prediction.
    pub fn deltas(&self) -> Vec<(&'static str, f64)> {
        [
            ("type1", self.type1_prediction),
            ("type2_leading", self.type2_leading),
            ("type2_refined", self.type2_refined),
        ]
        .into_iter()
        .filter_map(|(name, v)| v.map(|v| (name, self.entropy - v)))
        .collect()
    }

    /// Two-column `quantity,value` table.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(&["quantity", "value"]);
        let mut row = |k: String, v: f64| t.push(vec![k, fmt_float(v)]);
        row("entropy".into(), self.entropy);
        row("decohered".into(), self.decohered);
        row("asym_added".into(), self.activation.asym_added);
        row("activation".into(), self.activation.activation);
        row(
            "activation_decohered".into(),
            self.decohered - self.activation.asym_added,
        );
        for (e, th) in &self.hs_profile {
            row(format!("hs_{}", fmt_float(*e)), th.value);
        }
        for (name, v) in [
            ("type1_prediction", self.type1_prediction),
            ("type2_leading", self.type2_leading),
            ("type2_refined", self.type2_refined),
        ] {
            if let Some(v) = v {
                row(name.into(), v);
            }
        }
        for (name, d) in self.deltas() {
            row(format!("delta_{name}"), d);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_point() {
        let p = Params::new(4, 2, 2, 1).unwrap();
        let r = AsymmetryReport::new(p, &DEFAULT_EPS, LogBase::E).unwrap();
        assert!((r.decohered - 3f64.ln()).abs() < 1e-14);
        assert!(r.entropy >= r.decohered);
        assert_eq!(r.hs_profile.len(), 5);
        assert!(r
            .hs_profile
            .windows(2)
            .all(|w| w[0].1.value <= w[1].1.value));
        assert!(r
            .to_table()
            .render()
            .starts_with("quantity,value\nentropy,"));
    }

    #[test]
    fn refined_face_is_reported() {
        let p = Params::new(100, 50, 20, 20).unwrap();
        let r = AsymmetryReport::new(p, &[0.5], LogBase::E).unwrap();
        assert!(r.type2_refined.is_some());
        let d = r
            .deltas()
            .into_iter()
            .find(|(k, _)| *k == "type2_refined")
            .unwrap()
            .1;
        assert!(d.abs() < 0.2, "{d}");
    }
}
