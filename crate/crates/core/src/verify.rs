//! Named check suites, shared by the command line and the examples.

use std::fmt;

use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::activation::{
    antisym_binomial_form, antisym_optimal_d, antisym_sum_form, antisym_window,
    permutation_activation,
};
use crate::asymptotics::{
    clt_empirical_check, decohered_asymmetry, decohered_typeI, decohered_typeII, fig1_row,
    fig2_rows, refined_residuals, typeII_refined_constants, typeI_expectation, typeI_q_pmf,
    typeI_rate, zmy_gap, TypeIIParams, TypeIRatios,
};
use crate::error::Result;
use crate::info_spectrum::{
    dh_epsilon, ll3_chain_check, m_bounds, nxu_logM, CqEnsemble, DensityMatrix,
};
use crate::numeric::{h, LogBase};
use crate::oracle::{dh_diagonal_grid, entropy_oracle, pmf_oracle};
use crate::schur_weyl::{avg_entropy, pmf, pmf_closed_kl, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    PmfOracle,
    #[value(name = "typeI")]
    TypeI,
    #[value(name = "typeII")]
    TypeII,
    Refined,
    Infospec,
    Activation,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::PmfOracle,
        Suite::TypeI,
        Suite::TypeII,
        Suite::Refined,
        Suite::Infospec,
        Suite::Activation,
    ];
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// The check is known not to hold; it is reported but does not count.
    pub known_gap: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Check {
            name: name.into(),
            passed,
            known_gap: false,
            detail,
        }
    }

    pub fn counts_as_failure(&self) -> bool {
        !self.passed && !self.known_gap
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match (self.passed, self.known_gap) {
            (true, _) => "PASS",
            (false, true) => "XFAIL",
            (false, false) => "FAIL",
        };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Runs one suite, or all of them in order.
pub fn run_suite(suite: Suite) -> Result<Vec<Check>> {
    match suite {
        Suite::PmfOracle => pmf_oracle_suite(),
        Suite::TypeI => type1_suite(),
        Suite::TypeII => type2_suite(),
        Suite::Refined => refined_suite(),
        Suite::Infospec => infospec_suite(),
        Suite::Activation => activation_suite(),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::EACH {
                out.extend(run_suite(s)?);
            }
            Ok(out)
        }
    }
}

fn pmf_oracle_suite() -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    let mut tuples = 0;
    let mut exact_sum = true;
    for n in 0..=10 {
        for p in Params::enumerate(n) {
            let ours = pmf(p)?;
            exact_sum &= ours.total().is_one();
            let theirs = pmf_oracle(p)?;
            for x in 0..theirs.len().max(ours.masses().len()) {
                let a = ours.masses().get(x).and_then(|q| q.to_f64()).unwrap_or(0.0);
                let b = theirs.get(x).and_then(|q| q.to_f64()).unwrap_or(0.0);
                worst = worst.max((a - b).abs());
            }
            tuples += 1;
        }
    }
    let mut out = vec![Check::new(
        "pmf = oracle, n <= 10",
        worst < 1e-10 && exact_sum,
        format!("{tuples} tuples, max diff {worst:e}, exact sums {exact_sum}"),
    )];

    let mut closed_ok = true;
    let mut sym_ok = true;
    for n in 0..=20 {
        for p in Params::enumerate(n) {
            let general = pmf(p)?;
            if p.has_closed_form() {
                closed_ok &= pmf_closed_kl(p)?.masses() == general.masses();
            }
            sym_ok &= pmf(p.flipped())?.masses() == general.masses();
        }
    }
    out.push(Check::new(
        "closed form = general, n <= 20",
        closed_ok,
        "rational equality".into(),
    ));
    out.push(Check::new(
        "0 <-> 1 symmetry, n <= 20",
        sym_ok,
        "rational equality".into(),
    ));

    let mut worst = 0.0f64;
    for n in 0..=6 {
        for p in Params::enumerate(n) {
            let d = (avg_entropy(p, LogBase::E)? - entropy_oracle(p, LogBase::E)?).abs();
            worst = worst.max(d);
        }
    }
    out.push(Check::new(
        "entropy = permutation average, n <= 6",
        worst < 1e-9,
        format!("max diff {worst:e}"),
    ));
    Ok(out)
}

fn type1_suite() -> Result<Vec<Check>> {
    let r = TypeIRatios::new(0.5, 2, 1)?;
    let q = typeI_q_pmf(r);
    let mean: f64 = q.iter().enumerate().map(|(x, p)| x as f64 * p).sum();
    let mut out = vec![Check::new(
        "q has mass 1 and mean u",
        (q.iter().sum::<f64>() - 1.0).abs() < 1e-12 && (mean - typeI_expectation(r)).abs() < 1e-12,
        format!("mean {mean}"),
    )];

    let ns = [100, 200, 400, 800, 1600, 3200];
    let rates = typeI_rate(r, &ns)?;
    let ratios: Vec<f64> = rates.windows(2).map(|w| w[1].1 / w[0].1).collect();
    out.push(Check::new(
        "n max|p - q| bounded",
        ratios.iter().all(|t| (0.3..=3.0).contains(t)),
        format!("ratios {ratios:.3?}"),
    ));

    let rows = [100, 1000, 10000]
        .iter()
        .map(|&n| fig1_row(r, n))
        .collect::<Result<Vec<_>>>()?;
    let last = rows[2];
    let decreasing = rows
        .windows(2)
        .all(|w| w[1].s_exact_over_logn < w[0].s_exact_over_logn);
    out.push(Check::new(
        "entropy / ln n approaches u",
        decreasing
            && (last.s_exact_over_logn - last.a_over_logn).abs() < 0.02
            && (last.s_exact_over_logn - 1.0).abs() < 0.35,
        format!(
            "S/ln n = {:.4?}, gap at 1e4 = {:e}",
            rows.iter().map(|r| r.s_exact_over_logn).collect::<Vec<_>>(),
            (last.s_exact_over_logn - last.a_over_logn).abs()
        ),
    ));

    let limit = decohered_typeI(r, LogBase::E)?;
    let errs = [100, 200, 400, 800, 1600, 3200, 6400]
        .iter()
        .map(|&n| Ok((decohered_asymmetry(r.params_at(n)?, LogBase::E) - limit).abs()))
        .collect::<Result<Vec<f64>>>()?;
    out.push(Check::new(
        "decohered baseline converges",
        errs.windows(2).all(|w| w[1] <= w[0]) && errs[errs.len() - 1] < 1e-3,
        format!("errors {}", sci_list(&errs)),
    ));
    Ok(out)
}

fn sci_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn slice() -> Result<TypeIIParams> {
    // k = l, alpha = 0.2, xi = 0.5
    TypeIIParams::from_fractions(0.2, 0.3, 0.0, 0.5)
}

fn type2_suite() -> Result<Vec<Check>> {
    let p = slice()?;
    let row = clt_empirical_check(&[2000], &p, 0.05)?[0];
    let sigma2 = p.sigma2.unwrap_or(f64::NAN);
    let mut out = vec![Check::new(
        "Gaussian limit at n = 2000",
        row.sup_cdf_dist < 0.05 && row.mean_err < 0.5 && row.var_err < 0.01 * sigma2,
        format!(
            "sup {:.4}, mean err {:.4}, var err {:.2e}",
            row.sup_cdf_dist, row.mean_err, row.var_err
        ),
    )];

    let mut min_gap = f64::INFINITY;
    for a in 0..=20 {
        for b in 0..=(20 - a) {
            for g in 0..=(20 - a - b) {
                let d = 20 - a - b - g;
                let t = TypeIIParams::from_fractions(
                    a as f64 / 20.0,
                    b as f64 / 20.0,
                    g as f64 / 20.0,
                    d as f64 / 20.0,
                )?;
                min_gap = min_gap.min(zmy_gap(&t, LogBase::E));
            }
        }
    }
    out.push(Check::new(
        "rate gap >= 0 on the 0.05 grid",
        min_gap >= -1e-12,
        format!("min gap {min_gap:e}"),
    ));

    let rows = fig2_rows(0.3, 200, LogBase::Two)?;
    let ends = (rows[0].h_mu - rows[0].kappa_h_xi)
        .abs()
        .max((rows[200].h_mu - rows[200].kappa_h_xi).abs());
    let above = rows.iter().all(|r| r.h_mu >= r.kappa_h_xi - 1e-12);
    out.push(Check::new(
        "h(mu) >= kappa h(xi), meeting at the ends",
        above && ends < 1e-12,
        format!("end mismatch {ends:e}"),
    ));

    let exact = decohered_asymmetry(p.params_at(4000)?, LogBase::E);
    let limit = decohered_typeII(&p, 4000, LogBase::E)?;
    out.push(Check::new(
        "decohered baseline expansion at n = 4000",
        (exact - limit).abs() < 0.01,
        format!("diff {:e}", (exact - limit).abs()),
    ));

    let mut nmt_ok = true;
    for n in 0..=20 {
        for q in Params::enumerate(n) {
            nmt_ok &= avg_entropy(q, LogBase::E)? >= decohered_asymmetry(q, LogBase::E) - 1e-12;
        }
    }
    out.push(Check::new(
        "coherent >= decohered, n <= 20",
        nmt_ok,
        "exhaustive".into(),
    ));
    Ok(out)
}

fn refined_suite() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let mut tried = 0;
    while tried < 1000 {
        let xi = rng.gen_range(0.01..=0.5);
        let alpha = rng.gen_range(0.0..xi);
        let Ok(p) = TypeIIParams::from_fractions(alpha, xi - alpha, 0.0, 1.0 - xi) else {
            continue;
        };
        let Ok(c) = typeII_refined_constants(&p, LogBase::E) else {
            continue;
        };
        worst = worst.max((c.c1 - h(p.mu)).abs());
        tried += 1;
    }
    let mut out = vec![Check::new(
        "C1 = h(mu), 1000 points",
        worst < 1e-12,
        format!("max diff {worst:e}"),
    )];

    let res = refined_residuals(&slice()?, &[500, 1000, 2000, 4000])?;
    let abs: Vec<f64> = res.iter().map(|r| r.1.abs()).collect();
    out.push(Check::new(
        "refined expansion converges",
        abs.windows(2).all(|w| w[1] < w[0]) && abs[3] < 0.05,
        format!("residuals {}", sci_list(&abs)),
    ));
    Ok(out)
}

fn random_probs(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(0.01..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

fn infospec_suite() -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut chain_ok = 0;
    for _ in 0..100 {
        let rho = DensityMatrix::diagonal(&random_probs(&mut rng, 4))?;
        let sigma = DensityMatrix::diagonal(&random_probs(&mut rng, 4))?;
        let eps = rng.gen_range(0.0..0.5);
        let delta = rng.gen_range(0.01..0.45);
        if ll3_chain_check(&rho, &sigma, eps, delta)?.holds {
            chain_ok += 1;
        }
    }
    let mut out = vec![Check::new(
        "D_s <= D_H <= D_s - ln delta",
        chain_ok == 100,
        format!("{chain_ok}/100 pairs"),
    )];

    let mut worst = 0.0f64;
    for i in 0..60 {
        let d = 2 + i % 2;
        let p = random_probs(&mut rng, d);
        let q = random_probs(&mut rng, d);
        let eps = rng.gen_range(0.0..0.9);
        let got = dh_epsilon(
            &DensityMatrix::diagonal(&p)?,
            &DensityMatrix::diagonal(&q)?,
            eps,
        )?;
        worst = worst.max((got - dh_diagonal_grid(&p, &q, eps, 100)).abs());
    }
    out.push(Check::new(
        "D_H = grid oracle, dim <= 3",
        worst < 1e-6,
        format!("max diff {worst:e}"),
    ));

    let mut bracket_ok = true;
    for w in [2usize, 3, 5, 8, 16] {
        let b = m_bounds(&CqEnsemble::flat_orthogonal(w)?, 0.5, 0.1, 0.1, LogBase::E)?;
        let target = nxu_logM(1, w as u64, 1, LogBase::E)?;
        bracket_ok &= b.lower <= target && target <= b.upper;
        bracket_ok &= (b.lower + 100f64.ln() - target).abs() < 1e-12;
        bracket_ok &= (b.upper - 1000f64.ln() - target).abs() < 1e-12;
    }
    out.push(Check::new(
        "spectral bounds bracket ln(w/v) on flat orbits",
        bracket_ok,
        "slack ln 100 below, ln 1000 above".into(),
    ));
    Ok(out)
}

fn activation_suite() -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    let mut monotone = true;
    for n in 1..=20 {
        let mut prev = f64::INFINITY;
        for d in n..=60 {
            let a = antisym_binomial_form(n, d)?;
            worst = worst.max((a - antisym_sum_form(n, d)?).abs());
            monotone &= a <= prev + 1e-12;
            prev = a;
        }
    }
    let mut out = vec![
        Check::new(
            "binomial form = sum form",
            worst < 1e-10,
            format!("max diff {worst:e}"),
        ),
        Check::new("nonincreasing in d", monotone, "n <= 20, d <= 60".into()),
    ];

    let mut argmax_ok = true;
    for n in 1..=10 {
        argmax_ok &= antisym_optimal_d(n, LogBase::E)?.0 == n;
    }
    out.push(Check::new(
        "maximum at d = n",
        argmax_ok,
        format!("n = 1..10, window {:?} at n = 10", antisym_window(10)),
    ));

    let (_, v) = antisym_optimal_d(10, LogBase::E)?;
    let ratio = v / (10.0 * 10f64.ln());
    let mut band = Check::new(
        "value / (n ln n) in [0.8, 1.3] at n = 10",
        (0.8..=1.3).contains(&ratio),
        format!("ratio {ratio:.4}"),
    );
    band.known_gap = true;
    out.push(band);

    let mut cmp_ok = true;
    for n in 0..=20 {
        for p in Params::enumerate(n) {
            let c = permutation_activation(p, true, LogBase::E)?.activation;
            let d = permutation_activation(p, false, LogBase::E)?.activation;
            cmp_ok &= c >= d - 1e-12;
        }
    }
    out.push(Check::new(
        "coherent activation >= decohered, n <= 20",
        cmp_ok,
        "exhaustive".into(),
    ));
    Ok(out)
}
