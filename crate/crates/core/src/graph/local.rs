//! Per-subset statistics on `r+1` vertices and the two local inequalities
//!
//! ```text
//! 2·B¹ − C ≤ (r² − 1)·A
//! B² − (r − 1)·C + D ≥ (r + 1)·A
//! ```
//!
//! Both sides are multilinear in the edge weights, so checking every 0/1
//! assignment settles the fractional case as well.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::report::{CheckOutcome, VerificationReport};
use crate::scalar::{Scalar, binomial};
use crate::subsets::pairs;

pub const LS_LOCAL: &str = "local-product-bound";
pub const SECOND_STEP_LOCAL: &str = "local-second-step";

#[derive(Debug, Clone, PartialEq)]
pub struct LocalCliqueStats<T> {
    /// Product of all edge weights on the subset.
    pub a_m: T,
    /// Sum over edges of the product of the other edge weights.
    pub b1_m: T,
    /// `Σ_i (Σ_{j≠i} a_ij)·A_{M−i}`.
    pub b2_m: T,
    /// Sum of `A_Q` over the `r`-subsets `Q`.
    pub c_m: T,
    /// `Σ_i Σ_{j<k, j,k≠i} (1 − a_ij)(1 − a_ik)·A_{M−i}`.
    pub d_m: T,
}

impl<T: Scalar> LocalCliqueStats<T> {
    /// Statistics for `k` vertices whose pair weights are listed in
    /// lexicographic pair order.
    pub fn from_pair_weights(k: usize, w: &[T]) -> Self {
        assert_eq!(w.len(), k * (k - 1) / 2, "pair weight count");
        let idx = |i: usize, j: usize| {
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            i * (2 * k - i - 1) / 2 + (j - i - 1)
        };

        let a_m = w.iter().cloned().fold(T::one(), |acc, v| acc * v);

        // b1 via prefix/suffix products
        let m = w.len();
        let mut prefix = Vec::with_capacity(m + 1);
        prefix.push(T::one());
        for v in w {
            let last = prefix.last().unwrap().clone();
            prefix.push(last * v.clone());
        }
        let mut b1_m = T::zero();
        let mut suffix = T::one();
        for e in (0..m).rev() {
            b1_m = b1_m + prefix[e].clone() * suffix.clone();
            suffix = suffix * w[e].clone();
        }

        let mut c_m = T::zero();
        let mut b2_m = T::zero();
        let mut d_m = T::zero();
        for i in 0..k {
            let mut facet = T::one();
            for (p, q) in pairs(k) {
                if p != i && q != i {
                    facet = facet * w[idx(p, q)].clone();
                }
            }
            let degree = (0..k).filter(|&j| j != i).fold(T::zero(), |acc, j| acc + w[idx(i, j)].clone());
            let mut missing_pairs = T::zero();
            for (p, q) in pairs(k) {
                if p != i && q != i {
                    missing_pairs = missing_pairs
                        + (T::one() - w[idx(i, p)].clone()) * (T::one() - w[idx(i, q)].clone());
                }
            }
            c_m = c_m + facet.clone();
            b2_m = b2_m + degree * facet.clone();
            d_m = d_m + missing_pairs * facet;
        }
        Self { a_m, b1_m, b2_m, c_m, d_m }
    }

    /// `(r² − 1)·A − (2·B¹ − C)`; non-negative when the first inequality holds.
    pub fn product_bound_slack(&self, r: usize) -> T {
        let r2 = T::from_usize_lossy(r * r - 1);
        r2 * self.a_m.clone() - (T::from_usize_lossy(2) * self.b1_m.clone() - self.c_m.clone())
    }

    /// `B² − (r − 1)·C + D − (r + 1)·A`; non-negative when the second holds.
    pub fn second_step_slack(&self, r: usize) -> T {
        self.b2_m.clone() - T::from_usize_lossy(r - 1) * self.c_m.clone() + self.d_m.clone()
            - T::from_usize_lossy(r + 1) * self.a_m.clone()
    }
}

/// Statistics of the subset `m_set` (which must have `r + 1` vertices).
pub fn local_clique_stats<T: Scalar>(g: &WeightedGraph<T>, m_set: &[usize], r: usize) -> Result<LocalCliqueStats<T>> {
    if m_set.len() != r + 1 {
        return Err(Error::Argument(format!("subset has {} vertices, expected r + 1 = {}", m_set.len(), r + 1)));
    }
    for (k, &v) in m_set.iter().enumerate() {
        if v >= g.order() || m_set[..k].contains(&v) {
            return Err(Error::Argument(format!("invalid or repeated vertex {}", v + 1)));
        }
    }
    let w: Vec<T> = pairs(r + 1).map(|(i, j)| g.a(m_set[i], m_set[j]).clone()).collect();
    Ok(LocalCliqueStats::from_pair_weights(r + 1, &w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalMode {
    /// All `2^C(r+1, 2)` 0/1 edge assignments.
    Exhaustive01,
    /// Uniform random edge weights in `[0, 1]`.
    RandomFractional { samples: usize, seed: u64 },
}

pub const EXHAUSTIVE_MAX_R: usize = 7;

pub fn check_local_inequalities(r: usize, mode: LocalMode) -> Result<VerificationReport> {
    if r < 2 {
        return Err(Error::Parameter(format!("r = {r} must be at least 2")));
    }
    let k = r + 1;
    let edges = binomial(k, 2) as usize;
    let (scope, mut first, mut second) = match mode {
        LocalMode::Exhaustive01 => {
            if !(3..=EXHAUSTIVE_MAX_R).contains(&r) {
                return Err(Error::Limit(format!("exhaustive mode supports 3 ≤ r ≤ {EXHAUSTIVE_MAX_R}, got {r}")));
            }
            let total: u64 = 1 << edges;
            let (a, b) = (0..total)
                .into_par_iter()
                .fold(
                    || (CheckOutcome::new(LS_LOCAL, ""), CheckOutcome::new(SECOND_STEP_LOCAL, "")),
                    |(mut a, mut b), mask| {
                        let w: Vec<f64> = (0..edges).map(|e| (mask >> e & 1) as f64).collect();
                        record(&mut a, &mut b, r, &w, || format!("mask={mask:#x}"));
                        (a, b)
                    },
                )
                .reduce(
                    || (CheckOutcome::new(LS_LOCAL, ""), CheckOutcome::new(SECOND_STEP_LOCAL, "")),
                    |(mut a1, mut b1), (a2, b2)| {
                        a1.merge(a2);
                        b1.merge(b2);
                        (a1, b1)
                    },
                );
            (format!("r={r} exhaustive01"), a, b)
        }
        LocalMode::RandomFractional { samples, seed } => {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut a = CheckOutcome::new(LS_LOCAL, "");
            let mut b = CheckOutcome::new(SECOND_STEP_LOCAL, "");
            for _ in 0..samples {
                let w: Vec<f64> = (0..edges).map(|_| rng.gen::<f64>()).collect();
                record(&mut a, &mut b, r, &w, || format!("weights={w:?}"));
            }
            (format!("r={r} random_fractional"), a, b)
        }
    };
    first.scope.clone_from(&scope);
    second.scope = scope;
    Ok(VerificationReport { checks: vec![first, second] })
}

fn record(a: &mut CheckOutcome, b: &mut CheckOutcome, r: usize, w: &[f64], witness: impl Fn() -> String) {
    let stats = LocalCliqueStats::from_pair_weights(r + 1, w);
    // integer-valued on 0/1 inputs; the slack absorbs rounding on fractional ones
    let tol = 1e-12;
    let s1 = stats.product_bound_slack(r);
    a.record(s1, s1 >= -tol, &witness);
    let s2 = stats.second_step_slack(r);
    b.record(s2, s2 >= -tol, &witness);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SymmetricWeights;

    fn stats(r: usize, zeroed: &[(usize, usize)]) -> LocalCliqueStats<f64> {
        let k = r + 1;
        let w: Vec<f64> = pairs(k).map(|p| if zeroed.contains(&p) { 0.0 } else { 1.0 }).collect();
        LocalCliqueStats::from_pair_weights(k, &w)
    }

    #[test]
    fn complete_block() {
        let s = stats(3, &[]);
        assert_eq!((s.a_m, s.b1_m, s.b2_m, s.c_m, s.d_m), (1.0, 6.0, 12.0, 4.0, 0.0));
        // B¹ = r(r+1)/2, C = r+1, B² = r(r+1) for larger r too
        let s = stats(5, &[]);
        assert_eq!((s.a_m, s.b1_m, s.b2_m, s.c_m, s.d_m), (1.0, 15.0, 30.0, 6.0, 0.0));
    }

    #[test]
    fn one_missing_edge() {
        let s = stats(3, &[(0, 1)]);
        assert_eq!((s.a_m, s.b1_m, s.b2_m, s.c_m, s.d_m), (0.0, 1.0, 4.0, 2.0, 0.0));
        let s = stats(4, &[(2, 3)]);
        // two r-cliques; B² = 2(r−1)
        assert_eq!((s.a_m, s.b2_m, s.c_m, s.d_m), (0.0, 6.0, 2.0, 0.0));
    }

    #[test]
    fn unique_clique_plus_isolated_vertex() {
        let s = stats(3, &[(0, 3), (1, 3), (2, 3)]);
        assert_eq!((s.a_m, s.b2_m, s.c_m, s.d_m), (0.0, 0.0, 1.0, 3.0));
        // unique r-clique with i = 1 extra edge: B = i, D = C(r−i, 2)
        let s = stats(4, &[(0, 4), (1, 4), (2, 4)]);
        assert_eq!((s.b2_m, s.c_m, s.d_m), (1.0, 1.0, 3.0));
    }

    #[test]
    fn subset_extraction() {
        let a = SymmetricWeights::filled(5, 1.0);
        let g = WeightedGraph::new(vec![0.2; 5], a).unwrap();
        let s = local_clique_stats(&g, &[0, 2, 3, 4], 3).unwrap();
        assert_eq!(s.c_m, 4.0);
        assert!(local_clique_stats(&g, &[0, 1, 2], 3).is_err());
        assert!(local_clique_stats(&g, &[0, 1, 1, 2], 3).is_err());
    }

    #[test]
    fn exhaustive_small_orders() {
        let report = check_local_inequalities(3, LocalMode::Exhaustive01).unwrap();
        assert!(report.passed());
        assert!(report.checks.iter().all(|c| c.samples == 64));
        let report = check_local_inequalities(4, LocalMode::Exhaustive01).unwrap();
        assert!(report.passed());
        assert!(report.checks.iter().all(|c| c.samples == 1024));
    }

    #[test]
    fn random_fractional() {
        let report =
            check_local_inequalities(3, LocalMode::RandomFractional { samples: 100_000, seed: 7 }).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn range_limits() {
        assert!(matches!(check_local_inequalities(8, LocalMode::Exhaustive01), Err(Error::Limit(_))));
        assert!(matches!(check_local_inequalities(2, LocalMode::Exhaustive01), Err(Error::Limit(_))));
    }
}
