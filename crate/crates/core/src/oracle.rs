//! Exact minimum number of `r`-cliques over all labelled simple graphs with
//! `n ≤ 8` vertices and `m` edges.
//!
//! The search decides the edges of `K_n` in lexicographic order, trying
//! "include" before "exclude", so edge sets are visited in lexicographic order
//! of their sorted index lists. Adding an edge `uv` creates exactly the
//! `(r−2)`-cliques of the current common neighbourhood of `u` and `v`, which
//! keeps the clique count incremental. Since the count never decreases, a
//! branch is abandoned once it reaches the best count found so far.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::bounds::clique_bound;
use crate::error::{Error, Result};
use crate::scalar::binomial;
use crate::simple::SimpleGraph;
use crate::subsets::{for_each_subset, pairs};

/// Largest order accepted by [`min_cliques`].
pub const MAX_ORDER: usize = 8;
/// Largest order accepted by [`sweep`].
pub const MAX_SWEEP_ORDER: usize = 7;
/// Number of leading edge decisions fixed per parallel work item.
const SPLIT_DEPTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCliques {
    pub minimum: u64,
    /// Lexicographically smallest minimizing edge set.
    pub witness: SimpleGraph,
}

/// Whether work items share their best count for pruning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sharing {
    /// Prune against a global best that other items update.
    #[default]
    Shared,
    /// Every item prunes against its own best only.
    Local,
}

fn validate(n: usize, m: usize, r: usize, limit: usize) -> Result<usize> {
    if n > limit {
        return Err(Error::Limit(format!("n = {n} exceeds the exhaustive limit {limit}")));
    }
    if n == 0 {
        return Err(Error::Argument("n must be positive".into()));
    }
    let edges = binomial(n, 2) as usize;
    if m > edges {
        return Err(Error::Argument(format!("m = {m} exceeds C({n}, 2) = {edges}")));
    }
    if r == 0 || r > n {
        return Err(Error::Argument(format!("r = {r} must lie in 1..={n}")));
    }
    Ok(edges)
}

/// Number of `k`-cliques inside the vertex set `mask`.
fn cliques_in(adj: &[u8; MAX_ORDER], mask: u8, k: usize) -> u64 {
    if k == 0 {
        return 1;
    }
    if (mask.count_ones() as usize) < k {
        return 0;
    }
    if k == 1 {
        return mask.count_ones() as u64;
    }
    let mut total = 0;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        total += cliques_in(adj, rest & adj[v], k - 1);
    }
    total
}

struct Search<'a> {
    edges: &'a [(usize, usize)],
    m: usize,
    r: usize,
    adj: [u8; MAX_ORDER],
    chosen: Vec<usize>,
    best: Option<(u64, Vec<usize>)>,
    shared: Option<&'a AtomicU64>,
}

impl Search<'_> {
    fn bound(&self) -> u64 {
        let local = self.best.as_ref().map_or(u64::MAX, |b| b.0);
        let global = self.shared.map_or(u64::MAX, |s| s.load(Ordering::Relaxed));
        // ties with other items must survive so the lexicographic merge is exact
        local.min(global.saturating_add(1))
    }

    fn add(&mut self, e: usize) -> u64 {
        let (u, v) = self.edges[e];
        let common = self.adj[u] & self.adj[v];
        let gained = if self.r >= 2 { cliques_in(&self.adj, common, self.r - 2) } else { 0 };
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        self.chosen.push(e);
        gained
    }

    fn remove(&mut self, e: usize) {
        let (u, v) = self.edges[e];
        self.adj[u] &= !(1 << v);
        self.adj[v] &= !(1 << u);
        self.chosen.pop();
    }

    fn run(&mut self, pos: usize, count: u64) {
        if count >= self.bound() {
            return;
        }
        if self.chosen.len() == self.m {
            self.best = Some((count, self.chosen.clone()));
            if let Some(s) = self.shared {
                s.fetch_min(count, Ordering::Relaxed);
            }
            return;
        }
        if self.edges.len() - pos < self.m - self.chosen.len() {
            return;
        }
        let gained = self.add(pos);
        self.run(pos + 1, count + gained);
        self.remove(pos);
        self.run(pos + 1, count);
    }
}

fn witness_graph(n: usize, edges: &[(usize, usize)], chosen: &[usize]) -> SimpleGraph {
    let mut g = SimpleGraph::empty(n);
    for &e in chosen {
        g.add_edge(edges[e].0, edges[e].1);
    }
    g
}

/// Exact minimum of `#K_r` over graphs with `n` vertices and `m` edges.
pub fn min_cliques(n: usize, m: usize, r: usize) -> Result<MinCliques> {
    min_cliques_with(n, m, r, Sharing::Shared)
}

pub fn min_cliques_with(n: usize, m: usize, r: usize, sharing: Sharing) -> Result<MinCliques> {
    let total = validate(n, m, r, MAX_ORDER)?;
    let edges: Vec<(usize, usize)> = pairs(n).collect();
    let base = if r == 1 { n as u64 } else { 0 };
    let depth = SPLIT_DEPTH.min(total);
    let shared = AtomicU64::new(u64::MAX);
    let shared_ref = (sharing == Sharing::Shared).then_some(&shared);

    // prefix patterns in include-first order: bit (depth−1−k) clear means edge k is included
    let best = (0u32..1 << depth)
        .into_par_iter()
        .filter_map(|pattern| {
            let mut search = Search {
                edges: &edges,
                m,
                r,
                adj: [0; MAX_ORDER],
                chosen: Vec::with_capacity(m),
                best: None,
                shared: shared_ref,
            };
            let mut count = base;
            for k in 0..depth {
                if pattern >> (depth - 1 - k) & 1 == 0 {
                    if search.chosen.len() == m {
                        return None;
                    }
                    count += search.add(k);
                }
            }
            search.run(depth, count);
            search.best
        })
        .min_by(|a, b| a.cmp(b))
        .expect("every edge count in range is realised");

    Ok(MinCliques { minimum: best.0, witness: witness_graph(n, &edges, &best.1) })
}

/// Reference path: counts cliques from scratch for every `m`-subset of edges.
pub fn min_cliques_reference(n: usize, m: usize, r: usize) -> Result<MinCliques> {
    let total = validate(n, m, r, MAX_ORDER)?;
    let edges: Vec<(usize, usize)> = pairs(n).collect();
    let mut best: Option<(u64, Vec<usize>)> = None;
    for_each_subset(total, m, |chosen| {
        let count = witness_graph(n, &edges, chosen).count_cliques(r);
        if best.as_ref().is_none_or(|b| count < b.0) {
            best = Some((count, chosen.to_vec()));
        }
    });
    let (minimum, chosen) = best.expect("at least one subset");
    Ok(MinCliques { minimum, witness: witness_graph(n, &edges, &chosen) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub minimum: u64,
    /// `F_r(m/n²)·n^r`.
    pub bound: f64,
    pub slack: f64,
}

/// [`min_cliques`] for every edge count `0..=C(n, 2)`.
pub fn sweep(n: usize, r: usize) -> Result<Vec<SweepRow>> {
    validate(n, 0, r, MAX_SWEEP_ORDER)?;
    let total = binomial(n, 2) as usize;
    (0..=total)
        .map(|m| {
            let minimum = min_cliques(n, m, r)?.minimum;
            let gamma = m as f64 / (n * n) as f64;
            let bound = clique_bound(r.max(2), &gamma)? * (n as f64).powi(r as i32);
            let bound = if r == 1 { n as f64 } else { bound };
            Ok(SweepRow { n, m, r, minimum, bound, slack: minimum as f64 - bound })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,m,r,minimum,bound,slack\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.n,
            row.m,
            row.r,
            row.minimum,
            crate::format::sig(row.bound),
            crate::format::sig(row.slack)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_cells() {
        let res = min_cliques(5, 7, 3).unwrap();
        assert_eq!(res.minimum, 2);
        assert_eq!(res.witness.edge_count(), 7);
        assert_eq!(res.witness.count_cliques(3), 2);
        assert_eq!(min_cliques(4, 6, 3).unwrap().minimum, 4);
        assert_eq!(min_cliques(5, 6, 3).unwrap().minimum, 0);
    }

    #[test]
    fn limits() {
        assert!(matches!(min_cliques(9, 10, 3), Err(Error::Limit(_))));
        assert!(matches!(min_cliques(5, 11, 3), Err(Error::Argument(_))));
        assert!(matches!(min_cliques(4, 2, 5), Err(Error::Argument(_))));
        assert!(matches!(sweep(8, 3), Err(Error::Limit(_))));
    }

    #[test]
    fn agrees_with_reference_including_witness() {
        for n in 1..=6 {
            for r in 1..=n.min(4) {
                for m in 0..=binomial(n, 2) as usize {
                    let fast = min_cliques(n, m, r).unwrap();
                    let local = min_cliques_with(n, m, r, Sharing::Local).unwrap();
                    let slow = min_cliques_reference(n, m, r).unwrap();
                    assert_eq!(fast, slow, "n={n} m={m} r={r}");
                    assert_eq!(local, slow, "n={n} m={m} r={r}");
                }
            }
        }
    }

    #[test]
    fn complete_graph_is_forced() {
        for n in 3..=7 {
            let m = binomial(n, 2) as usize;
            assert_eq!(min_cliques(n, m, 3).unwrap().minimum, binomial(n, 3) as u64);
        }
    }

    #[test]
    fn sweep_rows() {
        let rows = sweep(5, 3).unwrap();
        assert_eq!(rows.len(), 11);
        assert!(rows.iter().all(|r| r.slack >= -1e-9));
        assert_eq!(rows[7].minimum, 2);
        assert!((rows[7].bound - 0.392 / 27.0 * 125.0).abs() < 1e-12);

        let rows = sweep(4, 3).unwrap();
        assert_eq!((rows[4].minimum, rows[4].bound), (0, 0.0));
        let csv = sweep_csv(&rows);
        assert!(csv.starts_with("n,m,r,minimum,bound,slack\n4,0,3,0,0,0\n"));
    }
}
