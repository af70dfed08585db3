//! The weighted graphs that meet the bound, and their blow-ups to simple graphs.
//!
//! For edge density `γ` with canonical pair `(s, α)` the construction is the
//! complete graph on `s + 1` vertices, `s` of weight `(1+α)/(s+1)` and one of
//! weight `(1−sα)/(s+1)`.

use crate::bounds::decompose_density;
use crate::error::{Error, Result};
use crate::graph::{SymmetricWeights, WeightedGraph};
use crate::scalar::Scalar;
use crate::simple::SimpleGraph;

/// Offset added before flooring `N·x_i`, so products that are integers up to
/// rounding are not pushed down by one.
const APPORTION_NUDGE: f64 = 1e-9;

/// The extremal weighted graph for edge density `gamma`.
///
/// A zero-weight class (at breakpoints) is kept, so the order is always `s + 1`.
pub fn extremal_weighted<T: Scalar>(gamma: &T) -> Result<WeightedGraph<T>> {
    let d = decompose_density(gamma)?;
    let s = d.s;
    let s1 = T::from_usize_lossy(s + 1);
    let big = (T::one() + d.alpha.clone()) / s1.clone();
    let mut small = (T::one() - T::from_usize_lossy(s) * d.alpha) / s1;
    // at breakpoints 1 − sα vanishes and rounding can leave a tiny negative
    if small < T::zero() && small >= -T::tolerance(1e-12) {
        small = T::zero();
    }
    let mut x = vec![big; s];
    x.push(small);
    WeightedGraph::new(x, SymmetricWeights::filled(s + 1, T::one()))
}

/// A blow-up together with the class sizes used.
#[derive(Debug, Clone, PartialEq)]
pub struct Blowup {
    pub graph: SimpleGraph,
    pub class_sizes: Vec<usize>,
}

/// Class sizes `≈ total·x_i` summing to `total`, by largest remainder
/// (ties to the lower index).
pub fn apportion<T: Scalar>(x: &[T], total: usize) -> Vec<usize> {
    let n_f = total as f64;
    let mut sizes = Vec::with_capacity(x.len());
    let mut remainders = Vec::with_capacity(x.len());
    for (i, xi) in x.iter().enumerate() {
        let share = xi.to_f64_lossy() * n_f;
        let floor = (share + APPORTION_NUDGE).floor().max(0.0);
        sizes.push(floor as usize);
        remainders.push((share - floor, i));
    }
    let assigned: usize = sizes.iter().sum();
    // stable sort keeps lower indices first among equal remainders
    remainders.sort_by(|a, b| b.0.total_cmp(&a.0));
    for &(_, i) in remainders.iter().take(total.saturating_sub(assigned)) {
        sizes[i] += 1;
    }
    sizes
}

/// Replaces vertex `i` by an independent set of about `total·x_i` vertices,
/// joining classes completely when `a(i, j) = 1`.
pub fn blowup<T: Scalar>(g: &WeightedGraph<T>, total: usize) -> Result<Blowup> {
    let n = g.order();
    for i in 0..n {
        for j in i + 1..n {
            let w = g.a(i, j);
            if !w.is_zero() && !w.is_one() {
                return Err(Error::UnsupportedWeights { i: i + 1, j: j + 1, weight: w.to_f64_lossy() });
            }
        }
    }
    if total < n {
        return Err(Error::Argument(format!("blow-up size {total} is smaller than the order {n}")));
    }
    let class_sizes = apportion(g.vertex_weights(), total);
    let mut class = Vec::with_capacity(total);
    for (c, &size) in class_sizes.iter().enumerate() {
        class.extend(std::iter::repeat_n(c, size));
    }
    let mut graph = SimpleGraph::empty(total);
    for u in 0..total {
        for v in u + 1..total {
            let (cu, cv) = (class[u], class[v]);
            if cu != cv && g.a(cu, cv).is_one() {
                graph.add_edge(u, v);
            }
        }
    }
    Ok(Blowup { graph, class_sizes })
}

/// Exact number of `r`-cliques of a simple graph.
pub fn count_cliques(graph: &SimpleGraph, r: usize) -> u64 {
    graph.count_cliques(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn weights_at_examples() {
        let g = extremal_weighted(&q(7, 25)).unwrap();
        assert_eq!(g.vertex_weights(), &[q(7, 15), q(7, 15), q(1, 15)]);
        let g = extremal_weighted(&q(1, 4)).unwrap();
        assert_eq!(g.vertex_weights(), &[q(1, 2), q(1, 2), q(0, 1)]);
        let g = extremal_weighted(&q(1, 3)).unwrap();
        assert_eq!(g.vertex_weights(), &[q(1, 3), q(1, 3), q(1, 3), q(0, 1)]);
        assert_eq!(g.edge_density(), q(1, 3));
        assert!(extremal_weighted(&0.5f64).is_err());

        let g = extremal_weighted(&0.28f64).unwrap();
        let expect = [7.0 / 15.0, 7.0 / 15.0, 1.0 / 15.0];
        for (a, b) in g.vertex_weights().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_zero_deficit() {
        for (n, d) in [(7, 25), (1, 3), (1, 4), (3, 8), (2, 5), (0, 1)] {
            let g = extremal_weighted(&q(n, d)).unwrap();
            for r in 3..=6 {
                assert_eq!(g.deficit(r).unwrap(), q(0, 1), "γ = {n}/{d}, r = {r}");
            }
        }
    }

    #[test]
    fn blowup_examples() {
        let g = extremal_weighted(&q(1, 3)).unwrap();
        let b = blowup(&g, 12).unwrap();
        assert_eq!(b.class_sizes, vec![4, 4, 4, 0]);
        assert_eq!(count_cliques(&b.graph, 3), 64);

        let g = extremal_weighted(&0.28f64).unwrap();
        let b = blowup(&g, 15).unwrap();
        assert_eq!(b.class_sizes, vec![7, 7, 1]);
        assert_eq!(count_cliques(&b.graph, 3), 49);
        assert!((g.clique_density(3) * 15f64.powi(3) - 49.0).abs() < 1e-9);

        let half = WeightedGraph::<f64>::uniform(3, 0.5);
        assert!(matches!(blowup(&half, 9), Err(Error::UnsupportedWeights { .. })));
        assert!(blowup(&extremal_weighted(&0.28f64).unwrap(), 2).is_err());
    }

    #[test]
    fn largest_remainder_ties_go_low() {
        assert_eq!(apportion(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 13), vec![5, 4, 4]);
        assert_eq!(apportion(&[0.5, 0.5], 3), vec![2, 1]);
        assert_eq!(apportion(&[0.25, 0.75], 4), vec![1, 3]);
    }
}
