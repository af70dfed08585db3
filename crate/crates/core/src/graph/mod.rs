//! Weighted graphs and their clique densities.
//!
//! A weighted graph of order `n` carries vertex weights `x` on the probability
//! simplex and symmetric edge weights `a(i, j) ∈ [0, 1]`. Its `ρ`-clique
//! density is
//!
//! ```text
//! G(K_ρ) = Σ_{|M| = ρ} ∏_{i<j ∈ M} a(i, j) · ∏_{i ∈ M} x_i
//! ```
//!
//! Vertices are 0-based here; the text format in [`io`] is 1-based.

pub mod identities;
pub mod io;
pub mod local;


use crate::bounds::clique_bound;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::simple::SimpleGraph;

/// Drift in the vertex-weight sum accepted without renormalising.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;
/// Largest drift that is renormalised rather than rejected.
pub const WEIGHT_SUM_RENORMALIZE: f64 = 1e-9;

/// Dense symmetric edge-weight matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricWeights<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymmetricWeights<T> {
    pub fn filled(n: usize, value: T) -> Self {
        let mut data = vec![value; n * n];
        for i in 0..n {
            data[i * n + i] = T::zero();
        }
        Self { n, data }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut w = Self::filled(n, T::zero());
        for i in 0..n {
            for j in i + 1..n {
                w.set(i, j, f(i, j));
            }
        }
        w
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(i != j, "self-pairs carry no weight");
        self.data[i * self.n + j] = value.clone();
        self.data[j * self.n + i] = value;
    }

    /// Restriction to the given vertices, in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        Self::from_fn(vertices.len(), |i, j| self.get(vertices[i], vertices[j]).clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<T> {
    x: Vec<T>,
    a: SymmetricWeights<T>,
}

impl<T: Scalar> WeightedGraph<T> {
    /// Validates and builds a weighted graph.
    ///
    /// Vertex weights summing to 1 within 1e−12 are kept as is; drift up to
    /// 1e−9 is renormalised; anything larger is rejected.
    pub fn new(x: Vec<T>, a: SymmetricWeights<T>) -> Result<Self> {
        let n = x.len();
        if n == 0 {
            return Err(Error::Argument("a weighted graph needs at least one vertex".into()));
        }
        if a.order() != n {
            return Err(Error::Argument(format!("{} vertex weights but edge matrix of order {}", n, a.order())));
        }
        for (i, xi) in x.iter().enumerate() {
            if *xi < T::zero() {
                return Err(Error::Argument(format!("vertex weight x_{} = {xi} is negative", i + 1)));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let w = a.get(i, j);
                if *w < T::zero() || *w > T::one() {
                    return Err(Error::Argument(format!("edge weight a({}, {}) = {w} is outside [0, 1]", i + 1, j + 1)));
                }
            }
        }
        let sum = x.iter().cloned().fold(T::zero(), |acc, v| acc + v);
        let drift = (sum.clone() - T::one()).abs_value();
        let x = if drift <= T::tolerance(WEIGHT_SUM_TOLERANCE) {
            x
        } else if drift <= T::tolerance(WEIGHT_SUM_RENORMALIZE) {
            x.into_iter().map(|v| v / sum.clone()).collect()
        } else {
            return Err(Error::Argument(format!("vertex weights sum to {sum}, not 1")));
        };
        Ok(Self { x, a })
    }

    /// Uniform vertex weights `1/n` and every edge weight equal to `edge`.
    pub fn uniform(n: usize, edge: T) -> Self {
        let x = vec![T::from_ratio(1, n as i64); n];
        let a = SymmetricWeights::filled(n, edge);
        Self::new(x, a).expect("uniform graph is valid")
    }

    /// Embeds a simple graph: weights `1/n`, edge weights 0/1.
    ///
    /// `clique_density(ρ)·n^ρ` then equals the number of `ρ`-cliques.
    pub fn from_simple_graph(g: &SimpleGraph) -> Result<Self> {
        let n = g.order();
        let x = vec![T::from_ratio(1, n as i64); n];
        let a = SymmetricWeights::from_fn(n, |i, j| if g.has_edge(i, j) { T::one() } else { T::zero() });
        Self::new(x, a)
    }

    pub fn order(&self) -> usize {
        self.x.len()
    }

    pub fn vertex_weights(&self) -> &[T] {
        &self.x
    }

    pub fn edge_weights(&self) -> &SymmetricWeights<T> {
        &self.a
    }

    pub fn x(&self, i: usize) -> &T {
        &self.x[i]
    }

    pub fn a(&self, i: usize, j: usize) -> &T {
        self.a.get(i, j)
    }

    /// `G(K_ρ)`; equals 1 for `ρ ≤ 1` and 0 for `ρ > n`.
    pub fn clique_density(&self, rho: usize) -> T {
        clique_polynomial(&self.x, &self.a, rho)
    }

    /// `[G(K_0), G(K_1), …, G(K_max)]` from a single subset walk.
    pub fn clique_profile(&self, max_rho: usize) -> Vec<T> {
        let verts: Vec<usize> = (0..self.order()).collect();
        subset_sums(&self.x, &self.a, &verts, max_rho)
    }

    /// Edge density `G(K_2)`.
    pub fn edge_density(&self) -> T {
        self.clique_density(2)
    }

    /// Rooted density `G_{roots}(K_ρ)`: each `ρ`-subset of the non-root
    /// vertices is additionally weighted by all its edges to the roots.
    pub fn rooted_density(&self, roots: &[usize], rho: usize) -> Result<T> {
        let factors = self.rooted_factors(roots)?;
        let verts: Vec<usize> = (0..self.order()).filter(|v| !roots.contains(v)).collect();
        Ok(subset_sums(&factors, &self.a, &verts, rho).swap_remove(rho))
    }

    /// All rooted densities `G_{roots}(K_0..=K_max)` in one walk.
    pub fn rooted_profile(&self, roots: &[usize], max_rho: usize) -> Result<Vec<T>> {
        let factors = self.rooted_factors(roots)?;
        let verts: Vec<usize> = (0..self.order()).filter(|v| !roots.contains(v)).collect();
        Ok(subset_sums(&factors, &self.a, &verts, max_rho))
    }

    fn rooted_factors(&self, roots: &[usize]) -> Result<Vec<T>> {
        let n = self.order();
        for (k, &r) in roots.iter().enumerate() {
            if r >= n {
                return Err(Error::Argument(format!("root {} outside 1..={n}", r + 1)));
            }
            if roots[..k].contains(&r) {
                return Err(Error::Argument(format!("root {} listed twice", r + 1)));
            }
        }
        Ok((0..n)
            .map(|v| {
                roots
                    .iter()
                    .fold(self.x[v].clone(), |acc, &r| if r == v { acc } else { acc * self.a.get(r, v).clone() })
            })
            .collect())
    }

    /// The normalised neighbourhood graph of vertex `i`.
    ///
    /// Vertex `j ≠ i` gets weight `a(i, j)·x_j / G_i(K_1)`; edge weights are
    /// inherited. Vertices of the result keep the original order with `i`
    /// removed.
    pub fn link_graph(&self, i: usize) -> Result<Self> {
        let degree = self.rooted_density(&[i], 1)?;
        if degree <= T::zero() {
            return Err(Error::DegenerateLink { vertex: i + 1 });
        }
        let others: Vec<usize> = (0..self.order()).filter(|&j| j != i).collect();
        let x = others
            .iter()
            .map(|&j| self.a.get(i, j).clone() * self.x[j].clone() / degree.clone())
            .collect();
        Self::new(x, self.a.induced(&others))
    }

    /// `G(K_r) − F_r(G(K_2))`, non-negative for every weighted graph.
    pub fn deficit(&self, r: usize) -> Result<T> {
        let profile = self.clique_profile(r.max(2));
        let gamma = profile[2].clone();
        if gamma >= T::from_ratio(1, 2) {
            return Err(Error::OutOfTheoremDomain(gamma.to_f64_lossy()));
        }
        Ok(profile[r].clone() - clique_bound(r, &gamma)?)
    }

    /// Converts the scalar type, e.g. exact rationals to `f64`.
    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Result<WeightedGraph<U>> {
        let n = self.order();
        let x = self.x.iter().map(&f).collect();
        let a = SymmetricWeights::from_fn(n, |i, j| f(self.a.get(i, j)));
        WeightedGraph::new(x, a)
    }
}

impl WeightedGraph<f64> {
    /// Random graph of order `n`: vertex weights uniform then normalised,
    /// edge weights uniform on `[0, 1]`.
    pub fn random<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
        let sum: f64 = raw.iter().sum();
        let x = raw.into_iter().map(|v| v / sum).collect();
        let a = SymmetricWeights::from_fn(n, |_, _| rng.gen::<f64>());
        Self::new(x, a).expect("normalised weights are valid")
    }
}

/// Clique polynomial at arbitrary (not necessarily normalised) vertex weights.
///
/// This is the function whose partial derivatives the optimizer uses; it
/// coincides with [`WeightedGraph::clique_density`] on the simplex.
pub fn clique_polynomial<T: Scalar>(x: &[T], a: &SymmetricWeights<T>, rho: usize) -> T {
    let verts: Vec<usize> = (0..x.len()).collect();
    subset_sums(x, a, &verts, rho).swap_remove(rho)
}

/// `out[d]` = sum over `d`-subsets `S` of `verts` of `∏ factor · ∏ a` on `S`.
///
/// Subsets are visited in lexicographic order and zero partial products
/// are pruned, so the summation order is fixed.
fn subset_sums<T: Scalar>(factor: &[T], a: &SymmetricWeights<T>, verts: &[usize], max_rho: usize) -> Vec<T> {
    let mut out = vec![T::zero(); max_rho + 1];
    out[0] = T::one();
    let complete = verts.iter().enumerate().all(|(k, &u)| verts[k + 1..].iter().all(|&v| a.get(u, v).is_one()));
    if complete {
        // elementary symmetric polynomials: O(n·ρ) instead of C(n, ρ) subsets
        for &v in verts {
            for d in (1..=max_rho).rev() {
                let term = out[d - 1].clone() * factor[v].clone();
                out[d] = out[d].clone() + term;
            }
        }
    } else if max_rho > 0 {
        let mut chosen = Vec::with_capacity(max_rho);
        walk(factor, a, verts, 0, &mut chosen, T::one(), max_rho, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn walk<T: Scalar>(
    factor: &[T],
    a: &SymmetricWeights<T>,
    verts: &[usize],
    start: usize,
    chosen: &mut Vec<usize>,
    prod: T,
    max_rho: usize,
    out: &mut [T],
) {
    let depth = chosen.len() + 1;
    for idx in start..verts.len() {
        let v = verts[idx];
        let mut p = prod.clone() * factor[v].clone();
        for &u in chosen.iter() {
            if p.is_zero() {
                break;
            }
            p = p * a.get(u, v).clone();
        }
        if p.is_zero() {
            continue;
        }
        out[depth] = out[depth].clone() + p.clone();
        if depth < max_rho {
            chosen.push(v);
            walk(factor, a, verts, idx + 1, chosen, p, max_rho, out);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    fn weighted(x: &[(i64, i64)]) -> WeightedGraph<BigRational> {
        let x: Vec<_> = x.iter().map(|&(n, d)| q(n, d)).collect();
        let n = x.len();
        WeightedGraph::new(x, SymmetricWeights::filled(n, q(1, 1))).unwrap()
    }

    #[test]
    fn complete_shortcut_matches_subset_walk() {
        let g = weighted(&[(1, 2), (1, 4), (1, 8), (1, 16), (1, 16)]);
        let verts: Vec<usize> = (0..5).collect();
        let mut walked = vec![q(0, 1); 6];
        walked[0] = q(1, 1);
        walk(&g.x, &g.a, &verts, 0, &mut Vec::new(), q(1, 1), 5, &mut walked);
        assert_eq!(g.clique_profile(5), walked);
    }

    #[test]
    fn density_examples() {
        let g = WeightedGraph::<BigRational>::uniform(3, q(1, 1));
        assert_eq!(g.clique_density(2), q(1, 3));
        assert_eq!(g.clique_density(1), q(1, 1));
        assert_eq!(g.clique_density(3), q(1, 27));
        assert_eq!(g.clique_density(4), q(0, 1));

        let g = weighted(&[(7, 15), (7, 15), (1, 15)]);
        assert_eq!(g.clique_density(2), q(7, 25));
        assert_eq!(g.clique_profile(3), vec![q(1, 1), q(1, 1), q(7, 25), q(49, 3375)]);
    }

    #[test]
    fn rooted_examples() {
        let g = WeightedGraph::<BigRational>::uniform(3, q(1, 1));
        assert_eq!(g.rooted_density(&[0], 1).unwrap(), q(2, 3));
        assert_eq!(g.rooted_density(&[0, 1], 1).unwrap(), q(1, 3));
        assert_eq!(g.rooted_density(&[], 2).unwrap(), g.clique_density(2));
        assert!(matches!(g.rooted_density(&[1, 1], 1), Err(Error::Argument(_))));
        assert!(matches!(g.rooted_density(&[3], 1), Err(Error::Argument(_))));
        // more roots than room: empty sum
        assert_eq!(g.rooted_density(&[0, 1], 2).unwrap(), q(0, 1));
    }

    #[test]
    fn link_examples() {
        let g = WeightedGraph::<BigRational>::uniform(3, q(1, 1));
        let link = g.link_graph(2).unwrap();
        assert_eq!(link.vertex_weights(), &[q(1, 2), q(1, 2)]);
        assert_eq!(*link.a(0, 1), q(1, 1));
        assert_eq!(link.clique_density(2), q(1, 4));
        let root = g.rooted_density(&[2], 1).unwrap();
        assert_eq!(link.clique_density(2) * root.clone() * root, g.rooted_density(&[2], 2).unwrap());

        let empty = WeightedGraph::<f64>::uniform(4, 0.0);
        assert!(matches!(empty.link_graph(1), Err(Error::DegenerateLink { vertex: 2 })));
    }

    #[test]
    fn deficit_examples() {
        let g = weighted(&[(7, 15), (7, 15), (1, 15)]);
        assert_eq!(g.deficit(3).unwrap(), q(0, 1));

        let c5 = WeightedGraph::<f64>::from_simple_graph(&SimpleGraph::cycle(5)).unwrap();
        assert!((c5.edge_density() - 0.2).abs() < 1e-15);
        assert_eq!(c5.deficit(3).unwrap(), 0.0);

        let k2 = WeightedGraph::<BigRational>::uniform(2, q(1, 1));
        assert_eq!(k2.edge_density(), q(1, 4));
        assert_eq!(k2.deficit(3).unwrap(), q(0, 1));
    }

    #[test]
    fn simple_graph_embedding() {
        let k4 = WeightedGraph::<BigRational>::from_simple_graph(&SimpleGraph::complete(4)).unwrap();
        assert_eq!(k4.clique_density(3) * q(64, 1), q(4, 1));
        let c5 = WeightedGraph::<BigRational>::from_simple_graph(&SimpleGraph::cycle(5)).unwrap();
        assert_eq!(c5.clique_density(3), q(0, 1));
        let k23 = WeightedGraph::<BigRational>::from_simple_graph(&SimpleGraph::complete_multipartite(&[2, 3])).unwrap();
        assert_eq!(k23.clique_density(2) * q(25, 1), q(6, 1));
    }

    #[test]
    fn construction_validation() {
        let a = SymmetricWeights::filled(2, 1.0f64);
        assert!(WeightedGraph::new(vec![0.5, 0.6], a.clone()).is_err());
        assert!(WeightedGraph::new(vec![-0.5, 1.5], a.clone()).is_err());
        let g = WeightedGraph::new(vec![0.5, 0.5 + 5e-10], a.clone()).unwrap();
        let sum: f64 = g.vertex_weights().iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
        let bad = SymmetricWeights::filled(2, 1.5f64);
        assert!(WeightedGraph::new(vec![0.5, 0.5], bad).is_err());
        assert!(WeightedGraph::new(vec![0.5, 0.5], SymmetricWeights::filled(3, 1.0)).is_err());
    }
}
