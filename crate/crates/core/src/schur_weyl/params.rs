use std::fmt;

use crate::error::{Error, Result};

/// An admissible tuple `(n, m, k, l)`: `n` qubits in total, `m` of them in
/// state `|1⟩`, the first `k` qubits form the attached bit-string
/// `|1^l 0^(k-l)⟩`, and the remaining `n - k` qubits carry a Dicke state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Params {
    n: u32,
    m: u32,
    k: u32,
    l: u32,
}

impl Params {
    /// Validates membership in the admissible set:
    /// `m <= n`, `k <= n`, `m + k - n <= l <= min(m, k)`.
    pub fn new(n: i64, m: i64, k: i64, l: i64) -> Result<Self> {
        let fail = |s: String| Err(Error::Constraint(s));
        if n < 0 || m < 0 || k < 0 || l < 0 {
            return fail(format!(
                "all of n, m, k, l must be >= 0 (got {n}, {m}, {k}, {l})"
            ));
        }
        if n > u32::MAX as i64 {
            return fail(format!("n = {n} too large"));
        }
        if m > n {
            return fail(format!("m <= n fails: m = {m} > n = {n}"));
        }
        if k > n {
            return fail(format!("k <= n fails: k = {k} > n = {n}"));
        }
        if l < m + k - n {
            return fail(format!(
                "m + k - n <= l fails: m + k - n = {} > l = {l}",
                m + k - n
            ));
        }
        if l > m.min(k) {
            return fail(format!(
                "l <= min(m, k) fails: l = {l} > min(m, k) = {}",
                m.min(k)
            ));
        }
        Ok(Params {
            n: n as u32,
            m: m as u32,
            k: k as u32,
            l: l as u32,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// Zeros in the Dicke register, `N = n - m - k + l`.
    pub fn dicke_zeros(&self) -> u32 {
        self.n + self.l - self.m - self.k
    }

    /// Ones in the Dicke register, `M = m - l`.
    pub fn dicke_ones(&self) -> u32 {
        self.m - self.l
    }

    /// Zeros in the attached string, `K = k - l`.
    pub fn tag_zeros(&self) -> u32 {
        self.k - self.l
    }

    /// Ones in the attached string, `L = l`.
    pub fn tag_ones(&self) -> u32 {
        self.l
    }

    /// Size of the Dicke register, `N + M = n - k`.
    pub fn dicke_len(&self) -> u32 {
        self.n - self.k
    }

    /// The tuple after exchanging `|0⟩` and `|1⟩`: `(n, n - m, k, k - l)`.
    pub fn flipped(&self) -> Params {
        Params {
            n: self.n,
            m: self.n - self.m,
            k: self.k,
            l: self.k - self.l,
        }
    }

    /// Largest row index of a two-row diagram, `⌊n/2⌋`.
    pub fn max_row(&self) -> u32 {
        self.n / 2
    }

    /// Whether the `k = l`, `m <= n - m` closed form applies.
    pub fn has_closed_form(&self) -> bool {
        self.k == self.l && 2 * self.m <= self.n
    }

    /// Every admissible tuple with the given `n`, in lexicographic order.
    pub fn enumerate(n: u32) -> impl Iterator<Item = Params> {
        (0..=n).flat_map(move |m| {
            (0..=n).flat_map(move |k| {
                let lo = (m + k).saturating_sub(n);
                let hi = m.min(k);
                (lo..=hi).map(move |l| Params { n, m, k, l })
            })
        })
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(n={}, m={}, k={}, l={})",
            self.n, self.m, self.k, self.l
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_counts() {
        let p = Params::new(2, 1, 1, 1).unwrap();
        assert_eq!(p.dicke_zeros(), 1);
        assert_eq!(p.dicke_ones(), 0);
        assert_eq!(p.tag_zeros(), 0);
        assert_eq!(p.tag_ones(), 1);
        assert!(Params::new(4, 2, 2, 1).is_ok());
        assert!(Params::new(4, 3, 1, 0).is_ok());
    }

    #[test]
    fn boundary_violations_name_the_inequality() {
        match Params::new(2, 2, 1, 0) {
            Err(Error::Constraint(msg)) => assert!(msg.contains("m + k - n <= l"), "{msg}"),
            other => panic!("expected constraint error, got {other:?}"),
        }
        match Params::new(3, 4, 0, 0) {
            Err(Error::Constraint(msg)) => assert!(msg.contains("m <= n")),
            other => panic!("{other:?}"),
        }
        match Params::new(3, 1, 2, 2) {
            Err(Error::Constraint(msg)) => assert!(msg.contains("l <= min(m, k)")),
            other => panic!("{other:?}"),
        }
        assert!(Params::new(3, 1, 4, 0).is_err());
        assert!(Params::new(-1, 0, 0, 0).is_err());
    }

    #[test]
    fn enumeration_matches_validation() {
        for n in 0..=7u32 {
            let listed: Vec<Params> = Params::enumerate(n).collect();
            let mut brute = Vec::new();
            for m in 0..=n as i64 + 1 {
                for k in 0..=n as i64 + 1 {
                    for l in 0..=n as i64 + 1 {
                        if let Ok(p) = Params::new(n as i64, m, k, l) {
                            brute.push(p);
                        }
                    }
                }
            }
            brute.sort();
            let mut sorted = listed.clone();
            sorted.sort();
            assert_eq!(sorted, brute);
            for p in listed {
                assert_eq!(p.flipped().flipped(), p);
                let f = p.flipped();
                assert!(Params::new(f.n as i64, f.m as i64, f.k as i64, f.l as i64).is_ok());
            }
        }
    }
}
