//! Unconditional identities and inequalities that hold for every weighted
//! graph, each evaluated by literal summation so the checks stay independent
//! of the density walk in the parent module.

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::subsets::for_each_subset;

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
}

/// `Σ_i x_i·G_i(K_1)² = −Φ − Σ_T V_T·X_T + γ + 3·G(K_3)`, where
///
/// ```text
/// Φ   = Σ_{i<j} (x_i²x_j + x_i x_j²)(a_ij − a_ij²)
/// V_T = a_jk(1−a_ij)(1−a_ik) + a_ik(1−a_ij)(1−a_jk) + a_ij(1−a_ik)(1−a_jk)
/// ```
pub fn second_step_identity<T: Scalar>(g: &WeightedGraph<T>) -> IdentityCheck<T> {
    let n = g.order();
    let x = |i: usize| g.x(i).clone();
    let a = |i: usize, j: usize| g.a(i, j).clone();
    let one = T::one;

    let mut lhs = T::zero();
    for i in 0..n {
        let mut degree = T::zero();
        for j in 0..n {
            if j != i {
                degree = degree + a(i, j) * x(j);
            }
        }
        lhs = lhs + x(i) * degree.clone() * degree;
    }

    let mut phi = T::zero();
    let mut gamma = T::zero();
    for i in 0..n {
        for j in i + 1..n {
            let weight = x(i) * x(i) * x(j) + x(i) * x(j) * x(j);
            phi = phi + weight * (a(i, j) - a(i, j) * a(i, j));
            gamma = gamma + a(i, j) * x(i) * x(j);
        }
    }

    let mut v_sum = T::zero();
    let mut triangles = T::zero();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (ij, ik, jk) = (a(i, j), a(i, k), a(j, k));
                let v = jk.clone() * (one() - ij.clone()) * (one() - ik.clone())
                    + ik.clone() * (one() - ij.clone()) * (one() - jk.clone())
                    + ij.clone() * (one() - ik.clone()) * (one() - jk.clone());
                let xt = x(i) * x(j) * x(k);
                v_sum = v_sum + v * xt.clone();
                triangles = triangles + ij * ik * jk * xt;
            }
        }
    }

    let rhs = -phi - v_sum + gamma + T::from_usize_lossy(3) * triangles;
    let residual = (lhs.clone() - rhs.clone()).abs_value();
    IdentityCheck { lhs, rhs, residual }
}

/// The Cauchy–Schwarz step behind the product bound:
///
/// ```text
/// r²·G(K_r)² ≤ G(K_{r−1})·(G(K_r) + (r² − 1)·G(K_{r+1}))
/// ```
///
/// together with the two exact sums over `(r−1)`-subsets `L`,
/// `Σ A_L X_L η_L = r·G(K_r)` and `Σ A_L X_L = G(K_{r−1})`, where
/// `η_L = Σ_{i∉L} x_i ∏_{ℓ∈L} a(i, ℓ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyChainCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub ok: bool,
    pub facet_sum: T,
    pub facet_residual: T,
    pub base_sum: T,
    pub base_residual: T,
    /// `Σ A_L X_L η_L²`, the middle term of the chain.
    pub square_sum: T,
}

pub fn cauchy_chain_check<T: Scalar>(g: &WeightedGraph<T>, r: usize) -> Result<CauchyChainCheck<T>> {
    if r < 2 {
        return Err(Error::Parameter(format!("r = {r} must be at least 2")));
    }
    let n = g.order();
    let mut facet_sum = T::zero();
    let mut base_sum = T::zero();
    let mut square_sum = T::zero();
    for_each_subset(n, r - 1, |l| {
        let mut weight = T::one();
        for (p, &u) in l.iter().enumerate() {
            weight = weight * g.x(u).clone();
            for &v in &l[p + 1..] {
                weight = weight * g.a(u, v).clone();
            }
        }
        if weight.is_zero() {
            return;
        }
        let mut eta = T::zero();
        for i in (0..n).filter(|i| !l.contains(i)) {
            let link = l.iter().fold(g.x(i).clone(), |acc, &u| acc * g.a(i, u).clone());
            eta = eta + link;
        }
        base_sum = base_sum.clone() + weight.clone();
        facet_sum = facet_sum.clone() + weight.clone() * eta.clone();
        square_sum = square_sum.clone() + weight * eta.clone() * eta;
    });

    let profile = g.clique_profile(r + 1);
    let rr = T::from_usize_lossy(r);
    let lhs = rr.clone() * rr.clone() * profile[r].clone() * profile[r].clone();
    let rhs = profile[r - 1].clone()
        * (profile[r].clone() + T::from_usize_lossy(r * r - 1) * profile[r + 1].clone());
    let ok = lhs <= rhs.clone() + T::tolerance(1e-12);
    let facet_residual = (facet_sum.clone() - rr * profile[r].clone()).abs_value();
    let base_residual = (base_sum.clone() - profile[r - 1].clone()).abs_value();
    Ok(CauchyChainCheck { lhs, rhs, ok, facet_sum, facet_residual, base_sum, base_residual, square_sum })
}

/// One step of the product bound: `r·G(K_r) ≥ (2(r−1)γ − (r−2))·G(K_{r−1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductStep<T> {
    pub lhs: T,
    pub rhs: T,
    /// `false` when `γ` is below `(r−2)/(2(r−1))` and nothing is asserted.
    pub applicable: bool,
}

pub fn product_bound_step<T: Scalar>(g: &WeightedGraph<T>, r: usize) -> Result<ProductStep<T>> {
    if r < 2 {
        return Err(Error::Parameter(format!("r = {r} must be at least 2")));
    }
    let profile = g.clique_profile(r.max(2));
    let gamma = profile[2].clone();
    let lhs = T::from_usize_lossy(r) * profile[r].clone();
    let factor = T::from_usize_lossy(2 * (r - 1)) * gamma.clone() - T::from_usize_lossy(r - 2);
    let rhs = factor * profile[r - 1].clone();
    let applicable = gamma >= crate::bounds::threshold::<T>(r);
    Ok(ProductStep { lhs, rhs, applicable })
}
