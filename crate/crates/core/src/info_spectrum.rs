//! One-shot entropic quantities of small density matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::numeric::{spectral_threshold, LogBase, Threshold};
use crate::schur_weyl::{hs_epsilon_avg, Params};

/// Largest matrix dimension accepted.
pub const MAX_DIM: usize = 64;

const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues below this count as zero.
const ZERO_EIG: f64 = 1e-13;

/// A validated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        let d = m.nrows();
        if d == 0 || d != m.ncols() {
            return Err(Error::InvalidState(format!(
                "matrix must be square and nonempty, got {}x{}",
                d,
                m.ncols()
            )));
        }
        if d > MAX_DIM {
            return Err(Error::SizeCap {
                what: "density matrix dimension",
                value: d as u64,
                cap: MAX_DIM as u64,
            });
        }
        let skew = (&m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if skew > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian: max |A - A†| = {skew:e}"
            )));
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > HERMITIAN_TOL || trace.im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("trace = {trace} != 1")));
        }
        let rho = DensityMatrix { m };
        let lowest = rho
            .eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if lowest < -HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {lowest:e}"
            )));
        }
        Ok(rho)
    }

    pub fn from_real(m: DMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|v| Complex64::new(v, 0.0)))
    }

    pub fn diagonal(p: &[f64]) -> Result<Self> {
        Self::from_real(DMatrix::from_diagonal(&DVector::from_column_slice(p)))
    }

    /// `|ψ⟩⟨ψ|` after normalizing `ψ`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let v = DVector::from_column_slice(psi);
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let v = v / Complex64::new(norm, 0.0);
        Self::new(&v * v.adjoint())
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0 / d as f64; d])
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        SymmetricEigen::new(self.m.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }

    /// `tr ρ²`
    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// `U ρ U†`
    pub fn conjugate(&self, u: &DMatrix<Complex64>) -> Result<Self> {
        Self::new(u * &self.m * u.adjoint())
    }

    pub fn commutes_with(&self, other: &DensityMatrix) -> bool {
        let c = &self.m * &other.m - &other.m * &self.m;
        c.iter().all(|z| z.norm() < 1e-12)
    }

    /// `-tr ρ log ρ`
    pub fn von_neumann_entropy(&self, base: LogBase) -> f64 {
        let nats: f64 = self
            .eigenvalues()
            .iter()
            .filter(|&&v| v > ZERO_EIG)
            .map(|v| -v * v.ln())
            .sum();
        base.from_nats(nats)
    }
}

fn check_unit(name: &str, v: f64, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero {
        (0.0..1.0).contains(&v)
    } else {
        v > 0.0 && v < 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(domain(format!("{name} = {v} out of range")))
    }
}

fn check_pair(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(domain(format!(
            "dimension mismatch: {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(())
}

/// `tr ρ P` where `P` projects onto eigenvectors of `a` whose eigenvalue
/// passes `keep`.
fn mass_on(rho: &DensityMatrix, a: DMatrix<Complex64>, keep: impl Fn(f64) -> bool) -> f64 {
    let eig = SymmetricEigen::new(a);
    let mut total = 0.0;
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if keep(v) {
            let u = eig.eigenvectors.column(i);
            total += (u.adjoint() * rho.matrix() * u)[(0, 0)].re;
        }
    }
    total
}

/// Joint eigenvalue pairs `(p_i, q_i)` of commuting `ρ` and `ρ′`.
fn joint_spectrum(rho: &DensityMatrix, sigma: &DensityMatrix) -> Vec<(f64, f64)> {
    let eig = SymmetricEigen::new(rho.matrix().clone());
    let d = rho.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut pairs = Vec::with_capacity(d);
    let mut i = 0;
    // ρ′ preserves each eigenspace of ρ; diagonalize it there
    while i < d {
        let p = eig.eigenvalues[order[i]];
        let mut j = i;
        while j < d && (eig.eigenvalues[order[j]] - p).abs() < 1e-10 {
            j += 1;
        }
        let cols: Vec<_> = order[i..j]
            .iter()
            .map(|&c| eig.eigenvectors.column(c).into_owned())
            .collect();
        let basis = DMatrix::from_columns(&cols);
        let block = basis.adjoint() * sigma.matrix() * &basis;
        let mean_p = order[i..j].iter().map(|&c| eig.eigenvalues[c]).sum::<f64>() / (j - i) as f64;
        for q in SymmetricEigen::new(block).eigenvalues.iter() {
            pairs.push((mean_p.max(0.0), q.max(0.0)));
        }
        i = j;
    }
    pairs
}

/// `tr ρ {ρ <= e^λ ρ′}`, the projector taken onto the nonnegative part of
/// `e^λ ρ′ − ρ`.
pub fn spectrum_cdf(rho: &DensityMatrix, sigma: &DensityMatrix, lambda: f64) -> f64 {
    let a = sigma.matrix() * Complex64::new(lambda.exp(), 0.0) - rho.matrix();
    mass_on(rho, a, |v| v >= -1e-13)
}

/// `D_s^δ(ρ‖ρ′) = max { λ : tr ρ {ρ <= e^λ ρ′} <= δ }`.
///
/// Commuting pairs are exact: the cdf is a step function with jumps at
/// `ln(p_i/q_i)` and the value is the first jump past `δ`, flagged open.
/// Other pairs are located by a grid over the pencil's crossover window
/// followed by bisection.
pub fn ds_delta(rho: &DensityMatrix, sigma: &DensityMatrix, delta: f64) -> Result<Threshold> {
    check_pair(rho, sigma)?;
    check_unit("delta", delta, true)?;
    if rho.commutes_with(sigma) {
        let atoms: Vec<(f64, f64)> = joint_spectrum(rho, sigma)
            .into_iter()
            .filter(|&(p, _)| p > ZERO_EIG)
            .map(|(p, q)| {
                let v = if q > ZERO_EIG {
                    (p / q).ln()
                } else {
                    f64::INFINITY
                };
                (v, p)
            })
            .collect();
        return Ok(spectral_threshold(&atoms, delta));
    }
    Ok(ds_general(rho, sigma, delta))
}

fn ds_general(rho: &DensityMatrix, sigma: &DensityMatrix, delta: f64) -> Threshold {
    let (lo, hi) = pencil_window(rho, sigma);
    let f = |l: f64| spectrum_cdf(rho, sigma, l);
    if f(hi + 60.0) <= delta + 1e-12 {
        return Threshold::infinite();
    }
    const STEPS: usize = 4000;
    let grid: Vec<f64> = (0..=STEPS)
        .map(|i| lo - 2.0 + (hi - lo + 4.0) * i as f64 / STEPS as f64)
        .collect();
    // last grid point that is still feasible
    let mut last_ok = None;
    for (i, &l) in grid.iter().enumerate() {
        if f(l) <= delta + 1e-12 {
            last_ok = Some(i);
        }
    }
    let Some(i) = last_ok else {
        return Threshold {
            value: grid[0],
            open: true,
        };
    };
    if i == STEPS {
        return Threshold {
            value: grid[STEPS],
            open: false,
        };
    }
    let (mut a, mut b) = (grid[i], grid[i + 1]);
    for _ in 0..60 {
        let mid = 0.5 * (a + b);
        if f(mid) <= delta + 1e-12 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Threshold {
        value: a,
        open: false,
    }
}

/// Range of `ln` of the generalized eigenvalues of `(ρ, ρ′)` on the
/// support of `ρ′`.
fn pencil_window(rho: &DensityMatrix, sigma: &DensityMatrix) -> (f64, f64) {
    let eig = SymmetricEigen::new(sigma.matrix().clone());
    let cols: Vec<_> = (0..sigma.dim())
        .filter(|&i| eig.eigenvalues[i] > ZERO_EIG)
        .map(|i| eig.eigenvectors.column(i) / Complex64::new(eig.eigenvalues[i].sqrt(), 0.0))
        .collect();
    if cols.is_empty() {
        return (0.0, 0.0);
    }
    let w = DMatrix::from_columns(&cols);
    let pencil = w.adjoint() * rho.matrix() * &w;
    let vals: Vec<f64> = SymmetricEigen::new(pencil)
        .eigenvalues
        .iter()
        .filter(|&&v| v > ZERO_EIG)
        .map(|v| v.ln())
        .collect();
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 0.0)
    }
}

/// `D_H^ε(ρ‖ρ′) = −ln min { tr Qρ′ : 0 <= Q <= I, tr Qρ >= 1 − ε }`.
///
/// The minimum equals `max_{s >= 0} [s(1−ε) − tr(sρ − ρ′)_+]`, a concave
/// function of `s` whose supergradient `(1−ε) − tr ρ{sρ − ρ′ > 0}` is
/// bisected in `ln s`. The maximizing `s` is the inverse Neyman-Pearson
/// threshold.
pub fn dh_epsilon(rho: &DensityMatrix, sigma: &DensityMatrix, eps: f64) -> Result<f64> {
    check_pair(rho, sigma)?;
    check_unit("eps", eps, true)?;
    let target = 1.0 - eps;
    // a test living on ker ρ′ costs nothing
    let kernel_mass = mass_on(rho, -sigma.matrix().clone(), |v| v > -ZERO_EIG);
    if kernel_mass >= target - 1e-12 {
        return Ok(f64::INFINITY);
    }
    let dual = |s: f64| {
        let a = rho.matrix() * Complex64::new(s, 0.0) - sigma.matrix();
        let plus: f64 = SymmetricEigen::new(a)
            .eigenvalues
            .iter()
            .filter(|&&v| v > 0.0)
            .sum();
        s * target - plus
    };
    let slope = |s: f64| {
        let a = rho.matrix() * Complex64::new(s, 0.0) - sigma.matrix();
        target - mass_on(rho, a, |v| v > 0.0)
    };
    let (mut lo, mut hi) = (-60.0f64, 60.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(mid.exp()) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let best = dual(lo.exp())
        .max(dual(hi.exp()))
        .max(dual(0.5 * (lo + hi)).max(0.0));
    Ok(-best.ln())
}

/// `H_s^ε(ρ) = max { λ : tr ρ {ρ >= e^{−λ}} <= ε }`.
pub fn hs_epsilon(rho: &DensityMatrix, eps: f64, base: LogBase) -> Result<Threshold> {
    check_unit("eps", eps, true)?;
    let atoms: Vec<(f64, f64)> = rho
        .eigenvalues()
        .into_iter()
        .filter(|&v| v > ZERO_EIG)
        .map(|v| (-v.ln(), v))
        .collect();
    let t = spectral_threshold(&atoms, eps);
    Ok(Threshold {
        value: base.from_nats(t.value),
        open: t.open,
    })
}

/// A classical-quantum ensemble `x ↦ W_x` with prior `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct CqEnsemble {
    states: Vec<DensityMatrix>,
    prior: Vec<f64>,
}

impl CqEnsemble {
    pub fn new(states: Vec<DensityMatrix>, prior: Vec<f64>) -> Result<Self> {
        if states.is_empty() || states.len() != prior.len() {
            return Err(domain("need one prior weight per state"));
        }
        if prior.iter().any(|p| *p < 0.0) || (prior.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(domain("prior must be a probability vector"));
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return Err(domain("all states must share one dimension"));
        }
        Ok(CqEnsemble { states, prior })
    }

    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let w = 1.0 / states.len().max(1) as f64;
        let prior = vec![w; states.len()];
        Self::new(states, prior)
    }

    /// `w` orthogonal basis states of `C^w`, uniformly weighted.
    pub fn flat_orthogonal(w: usize) -> Result<Self> {
        let states = (0..w)
            .map(|i| {
                let mut p = vec![0.0; w];
                p[i] = 1.0;
                DensityMatrix::diagonal(&p)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::uniform(states)
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn is_pure(&self) -> bool {
        self.states.iter().all(|s| (s.purity() - 1.0).abs() < 1e-9)
    }

    /// `W_P = Σ_x P(x) W_x`
    pub fn average(&self) -> Result<DensityMatrix> {
        let d = self.states[0].dim();
        let mut acc = DMatrix::<Complex64>::zeros(d, d);
        for (s, p) in self.states.iter().zip(&self.prior) {
            acc += s.matrix() * Complex64::new(*p, 0.0);
        }
        DensityMatrix::new(acc)
    }

    fn joint(&self, block: impl Fn(usize) -> DMatrix<Complex64>) -> Result<DensityMatrix> {
        let d = self.states[0].dim();
        let total = d * self.states.len();
        if total > MAX_DIM {
            return Err(Error::SizeCap {
                what: "joint dimension",
                value: total as u64,
                cap: MAX_DIM as u64,
            });
        }
        let mut m = DMatrix::<Complex64>::zeros(total, total);
        for (x, p) in self.prior.iter().enumerate() {
            let b = block(x) * Complex64::new(*p, 0.0);
            m.view_mut((x * d, x * d), (d, d)).copy_from(&b);
        }
        DensityMatrix::new(m)
    }

    /// `R[P] = Σ_x P(x) |x⟩⟨x| ⊗ W_x`
    pub fn r_state(&self) -> Result<DensityMatrix> {
        self.joint(|x| self.states[x].matrix().clone())
    }

    /// `S[P, ρ] = (Σ_x P(x) |x⟩⟨x|) ⊗ ρ`
    pub fn s_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.states[0].dim() {
            return Err(domain("dimension mismatch"));
        }
        self.joint(|_| rho.matrix().clone())
    }
}

/// Bounds on `ln M(ρ, ε)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MBounds {
    pub lower: f64,
    pub upper: f64,
    /// `ln(1/(δ₁δ₂))`, subtracted from the lower spectral term.
    pub lower_slack: f64,
    /// `ln(1/(δ₁δ₂²))`, added to the upper spectral term.
    pub upper_slack: f64,
}

fn check_slacks(eps: f64, d1: f64, d2: f64) -> Result<(f64, f64)> {
    if !(d1 > 0.0 && d2 > 0.0) {
        return Err(Error::Precondition(format!(
            "delta1, delta2 > 0 fails: {d1}, {d2}"
        )));
    }
    let lo = eps - d1 - d2;
    let hi = eps + d1 + 2.0 * d2;
    if lo <= 0.0 {
        return Err(Error::Precondition(format!(
            "eps - delta1 - delta2 > 0 fails: {lo}"
        )));
    }
    if hi >= 1.0 {
        return Err(Error::Precondition(format!(
            "eps + delta1 + 2 delta2 < 1 fails: {hi}"
        )));
    }
    Ok((lo, hi))
}

fn assemble(lo: Threshold, hi: Threshold, d1: f64, d2: f64, base: LogBase) -> MBounds {
    let lower_slack = base.from_nats((1.0 / (d1 * d2)).ln());
    let upper_slack = base.from_nats((1.0 / (d1 * d2 * d2)).ln());
    MBounds {
        lower: lo.value - lower_slack,
        upper: hi.value + upper_slack,
        lower_slack,
        upper_slack,
    }
}

/// `H_s^{ε−δ₁−δ₂}(W̄) − ln(1/(δ₁δ₂)) <= ln M <= H_s^{ε+δ₁+2δ₂}(W̄) + ln(1/(δ₁δ₂²))`
/// for an ensemble of pure states.
pub fn m_bounds(ens: &CqEnsemble, eps: f64, d1: f64, d2: f64, base: LogBase) -> Result<MBounds> {
    let (lo, hi) = check_slacks(eps, d1, d2)?;
    if !ens.is_pure() {
        return Err(Error::Precondition(
            "every state of the ensemble must be pure".into(),
        ));
    }
    let avg = ens.average()?;
    Ok(assemble(
        hs_epsilon(&avg, lo, base)?,
        hs_epsilon(&avg, hi, base)?,
        d1,
        d2,
        base,
    ))
}

/// The same bounds for the permutation orbit of the Dicke state with an
/// attached string, whose average has the block spectrum.
pub fn m_bounds_permutation(
    params: Params,
    eps: f64,
    d1: f64,
    d2: f64,
    base: LogBase,
) -> Result<MBounds> {
    let (lo, hi) = check_slacks(eps, d1, d2)?;
    Ok(assemble(
        hs_epsilon_avg(params, lo, base)?,
        hs_epsilon_avg(params, hi, base)?,
        d1,
        d2,
        base,
    ))
}

/// `ln j + ln(w/v)`: the distinguishable count for an orthogonal orbit of
/// rank-`v` projector states spanning `w` dimensions, at error `1 − 1/j`.
#[allow(non_snake_case)]
pub fn nxu_logM(v: u64, w: u64, j: u64, base: LogBase) -> Result<f64> {
    if v == 0 || j == 0 {
        return Err(domain("v and j must be positive"));
    }
    if w < v || !w.is_multiple_of(v) {
        return Err(domain(format!(
            "v must divide w with w >= v, got v = {v}, w = {w}"
        )));
    }
    Ok(base.from_nats((j as f64).ln() + (w as f64 / v as f64).ln()))
}

/// Values in the chain `D_s^ε <= D_H^ε <= D_s^{ε+δ} − ln δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainReport {
    pub ds_eps: f64,
    pub dh_eps: f64,
    pub ds_upper: f64,
    pub holds: bool,
}

pub fn ll3_chain_check(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    eps: f64,
    delta: f64,
) -> Result<ChainReport> {
    if !(eps >= 0.0 && delta > 0.0 && eps + delta < 1.0) {
        return Err(Error::Precondition(format!(
            "need eps >= 0, delta > 0, eps + delta < 1, got {eps}, {delta}"
        )));
    }
    let ds_eps = ds_delta(rho, sigma, eps)?.value;
    let dh_eps = dh_epsilon(rho, sigma, eps)?;
    let ds_upper = ds_delta(rho, sigma, eps + delta)?.value - delta.ln();
    let le = |a: f64, b: f64| b == f64::INFINITY || a <= b + 1e-9;
    Ok(ChainReport {
        ds_eps,
        dh_eps,
        ds_upper,
        holds: le(ds_eps, dh_eps) && le(dh_eps, ds_upper),
    })
}
