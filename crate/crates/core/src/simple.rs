//! Simple (unweighted, loopless) graphs with bitset adjacency.
//!
//! Text format:
//!
//! ```text
//! sg 1
//! <n>
//! <i> <j>      one line per edge, 1-based
//! ```

use std::fmt::Write as _;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(WORD).max(1);
        Self { n, words, rows: vec![0; n * words] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    /// Complete multipartite graph with the given class sizes.
    pub fn complete_multipartite(sizes: &[usize]) -> Self {
        let n = sizes.iter().sum();
        let mut class = Vec::with_capacity(n);
        for (c, &size) in sizes.iter().enumerate() {
            class.extend(std::iter::repeat_n(c, size));
        }
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if class[i] != class[j] {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn petersen() -> Self {
        let mut g = Self::empty(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    /// Builds a graph from a symmetric 0/1 matrix with zero diagonal.
    pub fn from_adjacency(matrix: &[Vec<u8>]) -> Result<Self> {
        let n = matrix.len();
        let mut g = Self::empty(n);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!("row {} has {} entries, expected {n}", i + 1, row.len())));
            }
            if row[i] != 0 {
                return Err(Error::Format(format!("diagonal entry ({0}, {0}) is non-zero", i + 1)));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(Error::Format(format!("entry ({}, {}) = {v} is not 0/1", i + 1, j + 1)));
                }
                if matrix[j].get(i) != Some(&v) {
                    return Err(Error::Format(format!("matrix is not symmetric at ({}, {})", i + 1, j + 1)));
                }
                if v == 1 && i < j {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i != j && i < self.n && j < self.n, "invalid edge ({i}, {j})");
        self.rows[i * self.words + j / WORD] |= 1 << (j % WORD);
        self.rows[j * self.words + i / WORD] |= 1 << (i % WORD);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / WORD] >> (j % WORD) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).filter(move |&j| self.has_edge(i, j)).map(move |j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Exact number of `r`-vertex cliques.
    ///
    /// Cliques are grown in increasing vertex order; the candidate set is the
    /// bitset of later common neighbours, and the last level is a popcount.
    pub fn count_cliques(&self, r: usize) -> u64 {
        match r {
            0 => 1,
            1 => self.n as u64,
            _ => {
                let mut total = 0;
                let mut cand = vec![0u64; self.words];
                for v in 0..self.n {
                    self.later_neighbours(v, &mut cand);
                    total += self.extend_count(&cand, r - 1);
                }
                total
            }
        }
    }

    fn later_neighbours(&self, v: usize, out: &mut [u64]) {
        out.copy_from_slice(self.row(v));
        // clear bits 0..=v
        let full = (v + 1) / WORD;
        for w in out.iter_mut().take(full) {
            *w = 0;
        }
        if full < self.words {
            let bits = (v + 1) % WORD;
            if bits > 0 {
                out[full] &= !((1u64 << bits) - 1);
            }
        }
    }

    fn extend_count(&self, cand: &[u64], remaining: usize) -> u64 {
        if remaining == 1 {
            return cand.iter().map(|w| w.count_ones() as u64).sum();
        }
        let mut total = 0;
        let mut next = vec![0u64; self.words];
        for (wi, &word) in cand.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let v = wi * WORD + b;
                let mut any = false;
                for (k, slot) in next.iter_mut().enumerate() {
                    // candidates after v that are adjacent to v
                    let mask = if k < wi {
                        0
                    } else if k == wi {
                        if b + 1 == WORD { 0 } else { !((1u64 << (b + 1)) - 1) }
                    } else {
                        u64::MAX
                    };
                    *slot = cand[k] & self.rows[v * self.words + k] & mask;
                    any |= *slot != 0;
                }
                if any {
                    total += self.extend_count(&next, remaining - 1);
                }
            }
        }
        total
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("sg 1\n{}\n", self.n);
        for (i, j) in self.edges() {
            let _ = writeln!(out, "{} {}", i + 1, j + 1);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Format("empty input".into()))?;
        if header != "sg 1" {
            return Err(Error::Format(format!("expected header `sg 1`, found `{header}`")));
        }
        let n: usize = lines
            .next()
            .and_then(|l| l.parse().ok())
            .ok_or_else(|| Error::Format("missing or invalid vertex count".into()))?;
        let mut g = Self::empty(n);
        for line in lines {
            let mut parts = line.split_whitespace();
            let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Format(format!("malformed edge line `{line}`")));
            };
            let parse = |s: &str| -> Result<usize> {
                let v: usize = s.parse().map_err(|_| Error::Format(format!("invalid vertex `{s}`")))?;
                if v == 0 || v > n {
                    return Err(Error::Format(format!("vertex {v} outside 1..={n}")));
                }
                Ok(v - 1)
            };
            let (i, j) = (parse(a)?, parse(b)?);
            if i == j {
                return Err(Error::Format(format!("loop at vertex {}", i + 1)));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_triangles(g: &SimpleGraph) -> u64 {
        let n = g.order();
        let mut count = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn clique_counts() {
        assert_eq!(SimpleGraph::complete(4).count_cliques(3), 4);
        assert_eq!(SimpleGraph::complete(6).count_cliques(4), 15);
        let p = SimpleGraph::petersen();
        assert_eq!(p.edge_count(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
        assert_eq!(p.count_cliques(3), brute_force_triangles(&p));
        assert_eq!(p.count_cliques(3), 0);
        assert_eq!(SimpleGraph::complete_multipartite(&[4, 4, 4]).count_cliques(3), 64);
        assert_eq!(SimpleGraph::cycle(5).count_cliques(3), 0);
        assert_eq!(SimpleGraph::cycle(5).count_cliques(2), 5);
        assert_eq!(SimpleGraph::empty(3).count_cliques(1), 3);
    }

    #[test]
    fn wide_graphs_cross_word_boundaries() {
        let g = SimpleGraph::complete_multipartite(&[40, 40, 50]);
        assert_eq!(g.count_cliques(3), 40 * 40 * 50);
        assert_eq!(g.count_cliques(2) as usize, g.edge_count());
        assert_eq!(SimpleGraph::complete(70).count_cliques(3), 54_740);
    }

    #[test]
    fn text_round_trip() {
        let g = SimpleGraph::petersen();
        assert_eq!(SimpleGraph::parse(&g.to_text()).unwrap(), g);
        assert!(SimpleGraph::parse("sg 2\n3\n").is_err());
        assert!(SimpleGraph::parse("sg 1\n3\n1 4\n").is_err());
        assert!(SimpleGraph::parse("sg 1\n3\n2 2\n").is_err());
    }

    #[test]
    fn adjacency_validation() {
        assert!(SimpleGraph::from_adjacency(&[vec![0, 1], vec![0, 0]]).is_err());
        assert!(SimpleGraph::from_adjacency(&[vec![1, 0], vec![0, 0]]).is_err());
        let g = SimpleGraph::from_adjacency(&[vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, 0]]).unwrap();
        assert_eq!(g.edge_count(), 2);
    }
}
