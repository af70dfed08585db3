//! The minimum clique-density function `F_r`, its derivative and inverse, and
//! the weaker product bound `ls_bound`.
//!
//! An edge density `γ ∈ [0, 1/2)` is written as `γ = s/(2(s+1))·(1 − α²)`
//! with `γ ∈ [(s−1)/(2s), s/(2(s+1)))` and `α ∈ (0, 1/s]`. The bound is
//!
//! ```text
//! F_r(γ) = C(s+1, r) / (s+1)^r · (1+α)^(r−1) · (1 − (r−1)α)
//! ```
//!
//! Everything except [`clique_bound_inverse`] is generic over [`Scalar`], so
//! rational densities with rational `α` evaluate exactly with
//! [`BigRational`](num_rational::BigRational).


use crate::error::{Error, Result};
use crate::scalar::{binomial_as, powi, Real, Scalar};

/// Width at which a density counts as sitting on a breakpoint.
pub const BREAKPOINT_TOLERANCE: f64 = 1e-12;

const RADICAND_CLAMP: f64 = 1e-15;
const INVERSE_WIDTH: f64 = 1e-14;
const INVERSE_MAX_ITERATIONS: usize = 200;

/// Canonical `(s, α)` representation of an edge density.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityDecomposition<T> {
    pub gamma: T,
    pub s: usize,
    pub alpha: T,
    /// At `γ = t/(2(t+1))` the pair `(t, 0)` describes the same density.
    pub alias: Option<(usize, T)>,
}

impl<T: Scalar> DensityDecomposition<T> {
    /// Recomputes `s/(2(s+1))·(1 − α²)`.
    pub fn reconstructed_gamma(&self) -> T {
        let s = T::from_usize_lossy(self.s);
        let one = T::one();
        s.clone() / (T::from_usize_lossy(2) * (s + one.clone())) * (one - self.alpha.clone() * self.alpha.clone())
    }
}

/// Turán threshold `(r−2)/(2(r−1))` below which `F_r` vanishes.
pub fn threshold<T: Scalar>(r: usize) -> T {
    if r < 2 {
        return T::zero();
    }
    T::from_ratio(r as i64 - 2, 2 * (r as i64 - 1))
}

/// The breakpoint `t/(2(t+1))`.
pub fn breakpoint<T: Scalar>(t: usize) -> T {
    T::from_ratio(t as i64, 2 * (t as i64 + 1))
}

/// `F_r` at the breakpoint `(t−1)/(2t)`, i.e. `C(t, r)/t^r`.
pub fn breakpoint_value<T: Scalar>(r: usize, t: usize) -> T {
    if t == 0 {
        return T::zero();
    }
    binomial_as::<T>(t, r) / powi(&T::from_usize_lossy(t), r)
}

fn check_gamma<T: Scalar>(gamma: &T) -> Result<()> {
    if *gamma < T::zero() || *gamma >= T::from_ratio(1, 2) {
        return Err(Error::Domain(format!("edge density {gamma} is outside [0, 1/2)")));
    }
    Ok(())
}

fn check_order(r: usize, min: usize) -> Result<()> {
    if r < min {
        return Err(Error::Parameter(format!("clique order r = {r} must be at least {min}")));
    }
    Ok(())
}

/// Splits `γ` into its canonical `(s, α)` pair (half-open convention).
pub fn decompose_density<T: Scalar>(gamma: &T) -> Result<DensityDecomposition<T>> {
    check_gamma(gamma)?;

    // t > 2γ/(1−2γ); start from the float estimate and fix up exactly.
    let g = gamma.to_f64_lossy();
    let estimate = (2.0 * g / (1.0 - 2.0 * g)).floor() + 1.0;
    let mut t = if estimate.is_finite() && estimate >= 1.0 { estimate as usize } else { 1 };
    while t > 1 && *gamma < T::from_ratio(t as i64 - 1, 2 * t as i64) {
        t -= 1;
    }
    while *gamma >= breakpoint::<T>(t) {
        t += 1;
    }

    let tt = T::from_usize_lossy(t);
    let one = T::one();
    let mut radicand =
        one.clone() - T::from_usize_lossy(2) * gamma.clone() * (tt.clone() + one.clone()) / tt;
    if radicand < T::zero() {
        if radicand >= -T::tolerance(RADICAND_CLAMP) {
            radicand = T::zero();
        } else {
            return Err(Error::Domain(format!("negative radicand {radicand} for γ = {gamma}")));
        }
    }
    let alpha = radicand
        .sqrt_opt()
        .ok_or_else(|| Error::Inexact(format!("α = sqrt({radicand}) is not rational")))?;

    let alias = (t >= 2
        && (gamma.clone() - T::from_ratio(t as i64 - 1, 2 * t as i64)).abs_value()
            <= T::tolerance(RADICAND_CLAMP))
    .then(|| (t - 1, T::zero()));

    Ok(DensityDecomposition { gamma: gamma.clone(), s: t, alpha, alias })
}

/// Evaluates the closed form for an explicit pair `(s, α)`.
pub fn bound_from_pair<T: Scalar>(r: usize, s: usize, alpha: &T) -> T {
    let s1 = T::from_usize_lossy(s + 1);
    let one = T::one();
    let r1 = T::from_usize_lossy(r - 1);
    binomial_as::<T>(s + 1, r) / powi(&s1, r)
        * powi(&(one.clone() + alpha.clone()), r - 1)
        * (one - r1 * alpha.clone())
}

/// `F_r(γ)`. Exactly zero at or below the Turán threshold.
pub fn clique_bound<T: Scalar>(r: usize, gamma: &T) -> Result<T> {
    check_order(r, 2)?;
    let d = decompose_density(gamma)?;
    if *gamma <= threshold::<T>(r) {
        return Ok(T::zero());
    }
    Ok(bound_from_pair(r, d.s, &d.alpha))
}

fn derivative_formula<T: Scalar>(r: usize, s: usize, alpha: &T) -> T {
    let s_t = T::from_usize_lossy(s);
    let s1 = T::from_usize_lossy(s + 1);
    T::from_usize_lossy((r - 1) * r) / (s_t * powi(&s1, r - 1))
        * binomial_as::<T>(s + 1, r)
        * powi(&(T::one() + alpha.clone()), r - 2)
}

/// `F_r′(γ)` on the open pieces between breakpoints.
pub fn clique_bound_derivative<T: Scalar>(r: usize, gamma: &T) -> Result<T> {
    check_order(r, 2)?;
    let d = decompose_density(gamma)?;
    if r == 2 {
        return Ok(T::one());
    }
    let tol = T::tolerance(BREAKPOINT_TOLERANCE);
    if gamma.clone() + tol.clone() < threshold::<T>(r) {
        return Ok(T::zero());
    }
    for bp in [T::from_ratio(d.s as i64 - 1, 2 * d.s as i64), breakpoint::<T>(d.s)] {
        if (gamma.clone() - bp.clone()).abs_value() <= tol {
            return Err(Error::Breakpoint { gamma: gamma.to_f64_lossy(), breakpoint: bp.to_f64_lossy() });
        }
    }
    Ok(derivative_formula(r, d.s, &d.alpha))
}

/// Right derivative of `F_r`, defined everywhere on `[0, 1/2)`.
///
/// Equal to [`clique_bound_derivative`] away from breakpoints; at a breakpoint
/// it is the slope of the piece to the right, a valid supergradient of the
/// locally concave pieces.
pub fn clique_bound_slope<T: Scalar>(r: usize, gamma: &T) -> Result<T> {
    check_order(r, 2)?;
    let d = decompose_density(gamma)?;
    if r == 2 {
        return Ok(T::one());
    }
    if *gamma < threshold::<T>(r) {
        return Ok(T::zero());
    }
    Ok(derivative_formula(r, d.s, &d.alpha))
}

/// `1/r!`, the supremum of `F_r`.
pub fn bound_supremum<T: Scalar>(r: usize) -> T {
    let mut acc = T::one();
    for i in 2..=r {
        acc = acc / T::from_usize_lossy(i);
    }
    acc
}

/// `F_r⁻¹(y)` by monotone bisection on `[(r−2)/(2(r−1)), 1/2)`.
pub fn clique_bound_inverse<T: Real>(r: usize, y: T) -> Result<T> {
    check_order(r, 2)?;
    if y < T::zero() || y >= bound_supremum::<T>(r) {
        return Err(Error::Domain(format!("value {y} is outside [0, 1/{r}!)")));
    }
    if r == 2 {
        return Ok(y);
    }
    let mut lo = threshold::<T>(r);
    if y == T::zero() {
        return Ok(lo);
    }
    let mut hi = T::from_ratio(1, 2);
    let width = T::tolerance(INVERSE_WIDTH);
    let two = T::from_usize_lossy(2);
    for _ in 0..INVERSE_MAX_ITERATIONS {
        if hi - lo <= width {
            break;
        }
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if clique_bound(r, &mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / two)
}

/// The product bound `(1/r!)·∏_{i=1}^{r−1} (2iγ − (i−1))`, zero below the
/// Turán threshold.
pub fn ls_bound<T: Scalar>(r: usize, gamma: &T) -> Result<T> {
    check_order(r, 2)?;
    check_gamma(gamma)?;
    if *gamma < threshold::<T>(r) {
        return Ok(T::zero());
    }
    let mut acc = T::one();
    for i in 1..r {
        let factor = T::from_usize_lossy(2 * i) * gamma.clone() - T::from_usize_lossy(i - 1);
        acc = acc * factor / T::from_usize_lossy(i + 1);
    }
    Ok(acc)
}

/// Lower bound `(1/s)·C(s, r)·(2γ/(s−1))^(r−1)` used when `γ > (s−1)/(2s)`.
pub fn corollary_bound<T: Scalar>(r: usize, s: usize, gamma: &T) -> T {
    let s_minus = T::from_usize_lossy(s - 1);
    binomial_as::<T>(s, r) / T::from_usize_lossy(s)
        * powi(&(T::from_usize_lossy(2) * gamma.clone() / s_minus), r - 1)
}
