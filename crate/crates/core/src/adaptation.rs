//! Self-adaptive choice of knowledge sources.
//!
//! Each task keeps a pool holding every task (itself included) as a candidate
//! source of transferred knowledge. Success and failure counts per source are
//! kept for the last `LP` generations; the success rate of each source over
//! that window, lifted by a base probability, decides how often it is picked.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sliding window of per-source success/failure counts over the last `lp`
/// generations, plus the column being filled for the current generation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryWindow {
    lp: usize,
    sources: usize,
    // ring of `lp` columns, each `sources` wide
    ns: Vec<u32>,
    nf: Vec<u32>,
    filled: usize,
    head: usize,
    current_ns: Vec<u32>,
    current_nf: Vec<u32>,
}

impl MemoryWindow {
    pub fn new(lp: usize, sources: usize) -> Self {
        assert!(lp >= 1, "learning period must be at least 1");
        MemoryWindow {
            lp,
            sources,
            ns: vec![0; lp * sources],
            nf: vec![0; lp * sources],
            filled: 0,
            head: 0,
            current_ns: vec![0; sources],
            current_nf: vec![0; sources],
        }
    }

    pub fn learning_period(&self) -> usize {
        self.lp
    }

    pub fn num_sources(&self) -> usize {
        self.sources
    }

    /// Number of stored generations, at most `lp`.
    pub fn filled(&self) -> usize {
        self.filled
    }

    pub fn is_full(&self) -> bool {
        self.filled == self.lp
    }

    /// Counts one offspring produced via source `k` in the current generation.
    pub fn record_outcome(&mut self, k: usize, improved: bool) -> Result<()> {
        if k >= self.sources {
            return Err(Error::SourceOutOfRange {
                index: k,
                count: self.sources,
            });
        }
        if improved {
            self.current_ns[k] += 1;
        } else {
            self.current_nf[k] += 1;
        }
        Ok(())
    }

    /// Counts recorded so far in the current (uncommitted) generation.
    pub fn current_column(&self) -> (&[u32], &[u32]) {
        (&self.current_ns, &self.current_nf)
    }

    /// Stores the current generation's column, evicting the oldest one once
    /// the window holds `lp` generations.
    pub fn commit(&mut self) {
        let k = self.sources;
        let slot = self.head * k;
        self.ns[slot..slot + k].copy_from_slice(&self.current_ns);
        self.nf[slot..slot + k].copy_from_slice(&self.current_nf);
        self.head = (self.head + 1) % self.lp;
        self.filled = (self.filled + 1).min(self.lp);
        self.current_ns.fill(0);
        self.current_nf.fill(0);
    }

    /// Stored `(ns, nf)` columns, oldest first.
    pub fn columns(&self) -> impl Iterator<Item = (&[u32], &[u32])> {
        let k = self.sources;
        let start = (self.head + self.lp - self.filled) % self.lp;
        (0..self.filled).map(move |i| {
            let slot = ((start + i) % self.lp) * k;
            (&self.ns[slot..slot + k], &self.nf[slot..slot + k])
        })
    }

    /// Per-source totals `(Σns, Σnf)` over the stored columns.
    pub fn totals(&self) -> (Vec<u64>, Vec<u64>) {
        let mut ns = vec![0u64; self.sources];
        let mut nf = vec![0u64; self.sources];
        for (cs, cf) in self.columns() {
            for k in 0..self.sources {
                ns[k] += u64::from(cs[k]);
                nf[k] += u64::from(cf[k]);
            }
        }
        (ns, nf)
    }
}

/// Chosen probabilities over the K sources of one task, and its focus flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourcePool {
    pub p: Vec<f64>,
    pub is_focus: bool,
}

impl SourcePool {
    /// Uniform probabilities, focus off.
    pub fn uniform(sources: usize) -> Self {
        SourcePool {
            p: vec![1.0 / sources as f64; sources],
            is_focus: false,
        }
    }
}

/// `p_k = SR_k / Σ SR` with `SR_k = Σns_k / (Σns_k + Σnf_k + eps) + bp`,
/// sums taken over the stored window.
pub fn update_probabilities(mem: &MemoryWindow, bp: f64, eps: f64) -> Result<Vec<f64>> {
    if mem.filled() == 0 {
        return Err(Error::EmptyWindow);
    }
    let (ns, nf) = mem.totals();
    let sr: Vec<f64> = ns
        .iter()
        .zip(&nf)
        .map(|(&s, &f)| {
            let s = s as f64;
            s / (s + f as f64 + eps) + bp
        })
        .collect();
    let total: f64 = sr.iter().sum();
    if total <= 0.0 {
        // bp = 0 and no successes anywhere: nothing to prefer
        return Ok(vec![1.0 / sr.len() as f64; sr.len()]);
    }
    Ok(sr.into_iter().map(|s| s / total).collect())
}

/// Smallest index whose cumulative probability exceeds `u`.
pub fn roulette_select(p: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (k, &pk) in p.iter().enumerate() {
        acc += pk;
        if acc > u {
            return k;
        }
    }
    // rounding left Σp just below u: fall back to the last selectable source
    p.iter().rposition(|&pk| pk > 0.0).unwrap_or(0)
}

/// True iff the window is full and every stored success count is zero.
pub fn check_focus(mem: &MemoryWindow) -> bool {
    mem.is_full() && mem.columns().all(|(ns, _)| ns.iter().all(|&c| c == 0))
}

/// Own task while focusing, otherwise a roulette draw over the pool.
pub fn choose_source(pool: &SourcePool, own_index: usize, u: f64) -> usize {
    if pool.is_focus {
        own_index
    } else {
        roulette_select(&pool.p, u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn window_with(ns: &[u32], nf: &[u32], lp: usize) -> MemoryWindow {
        let mut m = MemoryWindow::new(lp, ns.len());
        for (k, (&s, &f)) in ns.iter().zip(nf).enumerate() {
            for _ in 0..s {
                m.record_outcome(k, true).unwrap();
            }
            for _ in 0..f {
                m.record_outcome(k, false).unwrap();
            }
        }
        m.commit();
        for _ in 1..lp {
            m.commit();
        }
        m
    }

    #[test]
    fn record_into_fresh_window() {
        let mut m = MemoryWindow::new(3, 4);
        m.record_outcome(0, true).unwrap();
        assert_eq!(m.current_column().0, &[1, 0, 0, 0]);
        assert!(matches!(
            m.record_outcome(4, true),
            Err(Error::SourceOutOfRange { index: 4, count: 4 })
        ));
    }

    #[test]
    fn column_conservation() {
        let mut m = MemoryWindow::new(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            m.record_outcome(rng.random_range(0..3), rng.random_bool(0.3)).unwrap();
        }
        m.commit();
        let (ns, nf) = m.columns().next().unwrap();
        let sum: u32 = ns.iter().chain(nf).sum();
        assert_eq!(sum, 50);
    }

    #[test]
    fn ring_matches_naive_list_of_columns() {
        let lp = 4;
        let k = 3;
        let mut m = MemoryWindow::new(lp, k);
        let mut naive: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _gen in 0..(3 * lp + 1) {
            let mut col = (vec![0; k], vec![0; k]);
            for _ in 0..10 {
                let src = rng.random_range(0..k);
                let ok = rng.random_bool(0.4);
                m.record_outcome(src, ok).unwrap();
                if ok {
                    col.0[src] += 1;
                } else {
                    col.1[src] += 1;
                }
            }
            m.commit();
            naive.push(col);
            if naive.len() > lp {
                naive.remove(0);
            }
            assert_eq!(m.filled(), naive.len());
            let stored: Vec<(Vec<u32>, Vec<u32>)> =
                m.columns().map(|(a, b)| (a.to_vec(), b.to_vec())).collect();
            assert_eq!(stored, naive);
        }
        assert_eq!(m.filled(), lp);
    }

    #[test]
    fn uniform_when_no_counts() {
        let m = window_with(&[0; 4], &[0; 4], 1);
        let p = update_probabilities(&m, 0.001, 0.001).unwrap();
        for pk in p {
            assert!((pk - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn probability_examples() {
        // SR = 3/4.001 + 0.001 and 1/4.001 + 0.001
        let m = window_with(&[3, 1], &[1, 3], 1);
        let p = update_probabilities(&m, 0.001, 0.001).unwrap();
        let sr0: f64 = 3.0 / 4.001 + 0.001;
        let sr1: f64 = 1.0 / 4.001 + 0.001;
        assert!((sr0 - 0.750_812_3).abs() < 1e-6);
        assert!((sr1 - 0.250_937_7).abs() < 1e-6);
        assert!((p[0] - 0.749_500_7).abs() < 1e-6, "{p:?}");
        assert!((p[1] - 0.250_499_3).abs() < 1e-6, "{p:?}");

        let m = window_with(&[5, 0], &[0, 5], 1);
        let p = update_probabilities(&m, 0.001, 0.001).unwrap();
        assert!((p[0] - 0.999).abs() < 1e-5 && (p[1] - 0.001).abs() < 1e-5, "{p:?}");
    }

    #[test]
    fn empty_window_is_an_error() {
        let m = MemoryWindow::new(5, 2);
        assert!(matches!(
            update_probabilities(&m, 0.001, 0.001),
            Err(Error::EmptyWindow)
        ));
    }

    #[test]
    fn roulette_examples() {
        assert_eq!(roulette_select(&[1.0, 0.0], 0.0), 0);
        assert_eq!(roulette_select(&[1.0, 0.0], 0.999_999), 0);
        assert_eq!(roulette_select(&[0.5, 0.5], 0.6), 1);
        assert_eq!(roulette_select(&[0.25, 0.25, 0.5], 0.4), 1);
        assert_eq!(roulette_select(&[0.25, 0.25, 0.5], 0.9), 2);
        // Σp rounding below u
        assert_eq!(roulette_select(&[0.3, 0.3, 0.3, 0.0], 0.95), 2);
    }

    #[test]
    fn roulette_frequencies_match_probabilities() {
        let p = [0.1, 0.2, 0.3, 0.4];
        let n = 100_000;
        let mut counts = [0usize; 4];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..n {
            counts[roulette_select(&p, rng.random())] += 1;
        }
        for (c, pk) in counts.iter().zip(p) {
            let freq = *c as f64 / n as f64;
            let se = (pk * (1.0 - pk) / n as f64).sqrt();
            assert!((freq - pk).abs() < 3.0 * se, "freq {freq} vs {pk}");
        }
    }

    #[test]
    fn focus_examples() {
        assert!(check_focus(&window_with(&[0, 0], &[3, 4], 3)));
        assert!(!check_focus(&window_with(&[0, 1], &[3, 4], 3)));
        // not full yet
        let mut m = MemoryWindow::new(3, 2);
        m.commit();
        assert!(!check_focus(&m));
    }

    #[test]
    fn focus_tracks_first_success() {
        let lp = 5;
        let mut m = MemoryWindow::new(lp, 2);
        for _ in 0..lp {
            m.record_outcome(1, false).unwrap();
            m.commit();
        }
        assert!(check_focus(&m));
        // success recorded during generation g: still in focus at g's start
        m.record_outcome(0, true).unwrap();
        assert!(check_focus(&m));
        m.commit();
        assert!(!check_focus(&m));
        // the success slides out after lp more empty generations
        for i in 0..lp {
            assert!(!check_focus(&m), "step {i}");
            m.record_outcome(1, false).unwrap();
            m.commit();
        }
        assert!(check_focus(&m));
    }

    #[test]
    fn choose_source_examples() {
        let mut pool = SourcePool {
            p: vec![0.25, 0.25, 0.5, 0.0],
            is_focus: true,
        };
        assert_eq!(choose_source(&pool, 3, 0.1), 3);
        pool.is_focus = false;
        assert_eq!(choose_source(&pool, 3, 0.9), 2);
        let pool = SourcePool {
            p: vec![1.0, 0.0, 0.0],
            is_focus: false,
        };
        assert_eq!(choose_source(&pool, 2, 0.5), 0);
    }

    fn counts(k: usize) -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
        (
            proptest::collection::vec(0u32..60, k),
            proptest::collection::vec(0u32..60, k),
        )
    }

    proptest! {
        #[test]
        fn probabilities_on_simplex((ns, nf) in (2usize..6).prop_flat_map(counts), bp in 1e-6f64..0.5) {
            let m = window_with(&ns, &nf, 1);
            let p = update_probabilities(&m, bp, 0.001).unwrap();
            let sum: f64 = p.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
            prop_assert!(p.iter().all(|&x| x > 0.0));
        }

        #[test]
        fn more_successes_raise_probability(
            (ns, nf) in (2usize..6).prop_flat_map(counts),
            k in 0usize..2,
            extra in 1u32..20,
        ) {
            let before = update_probabilities(&window_with(&ns, &nf, 1), 0.001, 0.001).unwrap();
            let mut ns2 = ns.clone();
            ns2[k] += extra;
            let after = update_probabilities(&window_with(&ns2, &nf, 1), 0.001, 0.001).unwrap();
            prop_assert!(after[k] > before[k]);
        }
    }
}
