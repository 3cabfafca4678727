//! Brute-force reference computations on `(C^2)^{⊗n}`.
//!
//! Nothing here uses the coupling machinery of [`crate::schur_weyl`]. The
//! projector onto total spin `j` is the Lagrange product over the other
//! eigenvalues of `J²`, applied matrix-free to the unnormalized 0/1 state
//! vector in exact integers, and the averaged state is a literal sum over
//! all `n!` permutations.
//!
//! Qubit `i` is bit `n - 1 - i` of a basis index, and `|0⟩` is spin up.

use std::collections::HashMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numeric::{binomial_exact, LogBase};
use crate::schur_weyl::Params;

/// Largest `n` for state vectors and projectors.
pub const STATE_MAX_N: u32 = 14;
/// Largest `n` for explicit permutation averaging.
pub const AVERAGE_MAX_N: u32 = 8;

fn cap(what: &'static str, n: u32, limit: u32) -> Result<()> {
    if n > limit {
        Err(Error::SizeCap {
            what,
            value: n as u64,
            cap: limit as u64,
        })
    } else {
        Ok(())
    }
}

/// A real state vector on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub n: u32,
    pub amplitudes: Vec<f64>,
}

impl DenseState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Basis indices with nonzero amplitude.
    pub fn support(&self) -> Vec<usize> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| **a != 0.0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Basis indices of `|1^l 0^(k-l)⟩ ⊗ |Dicke(N+M, M)⟩`.
fn support_indices(p: &Params) -> Vec<usize> {
    let n = p.n();
    let dicke_len = p.dicke_len();
    // first k qubits: l ones then k - l zeros
    let mut prefix = 0usize;
    for i in 0..p.l() {
        prefix |= 1 << (n - 1 - i);
    }
    let ones = p.dicke_ones();
    (0usize..1 << dicke_len)
        .filter(|s| s.count_ones() == ones)
        .map(|s| prefix | s)
        .collect()
}

pub fn build_state(params: Params) -> Result<DenseState> {
    cap("n (dense state)", params.n(), STATE_MAX_N)?;
    let support = support_indices(&params);
    let amp = 1.0 / (support.len() as f64).sqrt();
    let mut amplitudes = vec![0.0; 1 << params.n()];
    for i in support {
        amplitudes[i] = amp;
    }
    Ok(DenseState {
        n: params.n(),
        amplitudes,
    })
}

/// `4 J²` applied to an integer vector supported on one weight sector.
///
/// `4J² = 4 J₋J₊ + (2Jz)² + 2 (2Jz)`.
fn apply_four_j_squared(
    n: u32,
    sector: &[usize],
    index: &HashMap<usize, usize>,
    v: &[i128],
) -> Result<Vec<i128>> {
    let overflow = || Error::Overflow("oracle projector");
    let mut out = vec![0i128; v.len()];
    for (pos, &s) in sector.iter().enumerate() {
        let a = v[pos];
        if a == 0 {
            continue;
        }
        let ones = s.count_ones() as i128;
        let two_jz = n as i128 - 2 * ones;
        let diag = two_jz * two_jz + 2 * two_jz;
        out[pos] = out[pos]
            .checked_add(a.checked_mul(diag).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
        // J₊ turns a 1 into a 0, then J₋ turns a 0 into a 1
        for i in 0..n {
            if s >> i & 1 == 0 {
                continue;
            }
            let raised = s & !(1 << i);
            for j in 0..n {
                if raised >> j & 1 == 1 {
                    continue;
                }
                let target = raised | 1 << j;
                let t = index[&target];
                out[t] = out[t]
                    .checked_add(a.checked_mul(4).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            }
        }
    }
    Ok(out)
}

/// `p(x) = ⟨Ξ|P_j|Ξ⟩` for `j = n/2 - x`, in exact rationals.
pub fn pmf_oracle(params: Params) -> Result<Vec<BigRational>> {
    cap("n (projector oracle)", params.n(), STATE_MAX_N)?;
    let n = params.n();
    let m = params.m();
    let sector: Vec<usize> = (0usize..1 << n).filter(|s| s.count_ones() == m).collect();
    let index: HashMap<usize, usize> = sector.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut psi = vec![0i128; sector.len()];
    for s in support_indices(&params) {
        psi[index[&s]] = 1;
    }
    let norm2 = binomial_exact(params.dicke_len() as u64, params.dicke_ones() as i64);

    // total spins present in the weight-m sector: x = 0..=min(m, n-m)
    let x_top = m.min(n - m);
    let eig = |x: u32| {
        let tj = (n - 2 * x) as i128;
        tj * (tj + 2)
    };
    let mut out = Vec::with_capacity(x_top as usize + 1);
    for x in 0..=x_top {
        let mut v = psi.clone();
        let mut denom = BigInt::from(1);
        for other in (0..=x_top).filter(|&o| o != x) {
            let c = eig(other);
            let mut w = apply_four_j_squared(n, &sector, &index, &v)?;
            for (wi, vi) in w.iter_mut().zip(&v) {
                *wi = vi
                    .checked_mul(c)
                    .and_then(|cv| wi.checked_sub(cv))
                    .ok_or(Error::Overflow("oracle projector"))?;
            }
            v = w;
            denom *= eig(x) - c;
        }
        let mut overlap = BigInt::zero();
        for (a, b) in psi.iter().zip(&v) {
            if *a != 0 {
                overlap += BigInt::from(*a) * BigInt::from(*b);
            }
        }
        out.push(BigRational::new(overlap, denom * &norm2));
    }
    Ok(out)
}

/// Heap's algorithm, calling `visit` on every permutation of `0..n`.
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Moves the bit of qubit `i` to qubit `perm[i]`.
fn permute_index(n: u32, s: usize, perm: &[usize]) -> usize {
    let mut out = 0usize;
    for (i, &target) in perm.iter().enumerate() {
        if s >> (n as usize - 1 - i) & 1 == 1 {
            out |= 1 << (n as usize - 1 - target);
        }
    }
    out
}

/// `(1/n!) Σ_σ U_σ |Ξ⟩⟨Ξ| U_σ†` as a dense `2^n × 2^n` matrix.
pub fn avg_state_oracle(params: Params) -> Result<DMatrix<f64>> {
    cap("n (permutation average)", params.n(), AVERAGE_MAX_N)?;
    let n = params.n();
    let dim = 1usize << n;
    let support = support_indices(&params);
    let weight = 1.0 / support.len() as f64;

    // many permutations map the support onto the same set
    let mut seen: HashMap<[u64; 4], (Vec<usize>, u64)> = HashMap::new();
    let mut total = 0u64;
    for_each_permutation(n as usize, |perm| {
        let mut key = [0u64; 4];
        let mut image = Vec::with_capacity(support.len());
        for &s in &support {
            let t = permute_index(n, s, perm);
            key[t / 64] |= 1 << (t % 64);
            image.push(t);
        }
        seen.entry(key).or_insert_with(|| (image, 0)).1 += 1;
        total += 1;
    });

    let mut rho = DMatrix::<f64>::zeros(dim, dim);
    for (image, count) in seen.values() {
        let w = weight * *count as f64 / total as f64;
        for &a in image {
            for &b in image {
                rho[(a, b)] += w;
            }
        }
    }
    Ok(rho)
}

/// Eigenvalues of the averaged state, largest first. Only the weight-`m`
/// block can be nonzero, so only that principal block is diagonalized.
pub fn avg_state_eigenvalues(params: Params) -> Result<Vec<f64>> {
    let rho = avg_state_oracle(params)?;
    let sector: Vec<usize> = (0usize..rho.nrows())
        .filter(|s| s.count_ones() == params.m())
        .collect();
    let block = DMatrix::from_fn(sector.len(), sector.len(), |i, j| {
        rho[(sector[i], sector[j])]
    });
    let mut eig: Vec<f64> = SymmetricEigen::new(block)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    Ok(eig)
}

/// `-tr ρ log ρ` of the explicitly averaged state.
pub fn entropy_oracle(params: Params, base: LogBase) -> Result<f64> {
    let nats: f64 = avg_state_eigenvalues(params)?
        .iter()
        .filter(|&&v| v > 1e-15)
        .map(|v| -v * v.ln())
        .sum();
    Ok(base.from_nats(nats))
}

/// Largest entry of `|P ρ P† − ρ|` over all transpositions `P`.
pub fn transposition_defect(n: u32, rho: &DMatrix<f64>) -> f64 {
    let dim = rho.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n as usize {
        for j in i + 1..n as usize {
            let mut perm: Vec<usize> = (0..n as usize).collect();
            perm.swap(i, j);
            let map: Vec<usize> = (0..dim).map(|s| permute_index(n, s, &perm)).collect();
            for a in 0..dim {
                for b in 0..dim {
                    worst = worst.max((rho[(map[a], map[b])] - rho[(a, b)]).abs());
                }
            }
        }
    }
    worst
}

/// `D_H^ε` of commuting `diag(p)`, `diag(q)` by brute force:
/// `−ln min Σ Q_i q_i` over diagonal tests with `Σ Q_i p_i >= 1 − ε`. One
/// coordinate is solved for exactly, the others range over a grid that
/// contains 0 and 1, so every vertex of the feasible polytope is visited.
pub fn dh_diagonal_grid(p: &[f64], q: &[f64], eps: f64, steps: usize) -> f64 {
    let d = p.len();
    let mut best = f64::INFINITY;
    for free in 0..d {
        let others: Vec<usize> = (0..d).filter(|&i| i != free).collect();
        let mut idx = vec![0usize; others.len()];
        loop {
            let mut cover = 0.0;
            let mut cost = 0.0;
            for (slot, &i) in others.iter().enumerate() {
                let qv = idx[slot] as f64 / steps as f64;
                cover += qv * p[i];
                cost += qv * q[i];
            }
            let need = ((1.0 - eps - cover) / p[free]).max(0.0);
            if need <= 1.0 + 1e-15 {
                best = best.min(cost + need.min(1.0) * q[free]);
            }
            let mut s = 0;
            while s < idx.len() && idx[s] == steps {
                idx[s] = 0;
                s += 1;
            }
            if s == idx.len() {
                break;
            }
            idx[s] += 1;
        }
    }
    -best.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn p(n: i64, m: i64, k: i64, l: i64) -> Params {
        Params::new(n, m, k, l).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn states() {
        let s = build_state(p(2, 1, 1, 1)).unwrap();
        assert_eq!(s.amplitudes, vec![0.0, 0.0, 1.0, 0.0]);
        let s = build_state(p(2, 1, 0, 0)).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert_eq!(s.amplitudes, vec![0.0, h, h, 0.0]);
        let s = build_state(p(3, 1, 1, 0)).unwrap();
        assert_eq!(s.support(), vec![0b001, 0b010]);
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!(matches!(
            build_state(p(15, 1, 0, 0)),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn projector_examples() {
        assert_eq!(
            pmf_oracle(p(2, 1, 1, 1)).unwrap(),
            vec![rat(1, 2), rat(1, 2)]
        );
        let d = pmf_oracle(p(6, 2, 0, 0)).unwrap();
        assert_eq!(d[0], BigRational::one());
        assert!(d[1..].iter().all(|v| v.is_zero()));
        let d = pmf_oracle(p(4, 2, 2, 1)).unwrap();
        assert_eq!(d, vec![rat(1, 3), rat(1, 2), rat(1, 6)]);
    }

    #[test]
    fn projector_normalizes() {
        for n in 0..=9 {
            for params in Params::enumerate(n) {
                let total = pmf_oracle(params)
                    .unwrap()
                    .iter()
                    .fold(BigRational::zero(), |a, b| a + b);
                assert_eq!(total, BigRational::one(), "{params}");
            }
        }
    }

    #[test]
    fn permutation_count() {
        let mut count = 0;
        let mut distinct = std::collections::HashSet::new();
        for_each_permutation(5, |perm| {
            count += 1;
            distinct.insert(perm.to_vec());
        });
        assert_eq!(count, 120);
        assert_eq!(distinct.len(), 120);
    }

    #[test]
    fn averaged_states() {
        let rho = avg_state_oracle(p(2, 1, 1, 1)).unwrap();
        assert_eq!(rho[(1, 1)], 0.5);
        assert_eq!(rho[(2, 2)], 0.5);
        assert_eq!(rho[(1, 2)], 0.0);
        let rho = avg_state_oracle(p(2, 1, 0, 0)).unwrap();
        for &(a, b) in &[(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!((rho[(a, b)] - 0.5).abs() < 1e-15);
        }
        let rho = avg_state_oracle(p(5, 2, 3, 1)).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-12);
        assert!(transposition_defect(5, &rho) < 1e-12);
        let s = entropy_oracle(p(2, 1, 1, 1), LogBase::E).unwrap();
        assert!((s - 2f64.ln()).abs() < 1e-12);
        assert!(entropy_oracle(p(6, 3, 0, 0), LogBase::E).unwrap().abs() < 1e-12);
    }
}
