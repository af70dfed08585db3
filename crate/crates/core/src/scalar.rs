//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! Most of the combinatorial machinery (clique polynomials, the closed-form
//! bound, extremal constructions) only needs field arithmetic and therefore
//! runs over [`Scalar`], which covers `f32`, `f64` and exact big rationals.
//! Routines that need root finding or transcendental functions (the inverse
//! bound, the analytic claims, the optimizer) are bounded by [`Real`].

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive, Zero};

/// Field-like scalar used throughout the crate.
pub trait Scalar:
    Clone
    + PartialOrd
    + Debug
    + Display
    + Num
    + Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// `true` for types whose arithmetic is exact.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Square root of a non-negative value.
    ///
    /// Floats always succeed; exact types return `None` when the root is not
    /// representable.
    fn sqrt_opt(&self) -> Option<Self>;

    /// Converts a floating-point tolerance into this type. Exact types use a
    /// zero tolerance so comparisons stay exact.
    fn tolerance(eps: f64) -> Self;

    /// Parses a textual value (decimal for floats; decimal or `p/q` for exact types).
    fn parse_scalar(text: &str) -> Option<Self>;

    fn from_usize_lossy(v: usize) -> Self {
        Self::from_u64(v as u64).expect("integer conversion")
    }

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Floating-point scalars.
pub trait Real: Scalar + Float {}

impl<T: Scalar + Float> Real for T {}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn sqrt_opt(&self) -> Option<Self> {
                Some(Float::sqrt(*self))
            }

            fn tolerance(eps: f64) -> Self {
                eps as $t
            }

            fn parse_scalar(text: &str) -> Option<Self> {
                let text = text.trim();
                match text.split_once('/') {
                    Some(_) => parse_rational(text).and_then(|q| q.to_f64()).map(|v| v as $t),
                    None => text.parse::<$t>().ok(),
                }
                .filter(|v| v.is_finite())
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn sqrt_opt(&self) -> Option<Self> {
        if *self < BigRational::zero() {
            return None;
        }
        let num = exact_isqrt(self.numer())?;
        let den = exact_isqrt(self.denom())?;
        Some(BigRational::new(num, den))
    }

    fn tolerance(_eps: f64) -> Self {
        BigRational::zero()
    }

    fn parse_scalar(text: &str) -> Option<Self> {
        parse_rational(text)
    }
}

fn exact_isqrt(v: &BigInt) -> Option<BigInt> {
    let root = v.sqrt();
    (&root * &root == *v).then_some(root)
}

/// Binomial coefficient as an integer; `0` when `k > n`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn binomial_as<T: Scalar>(n: usize, k: usize) -> T {
    T::from_u128(binomial(n, k)).expect("binomial fits the scalar type")
}

pub fn powi<T: Scalar>(base: &T, exp: usize) -> T {
    num_traits::pow::pow(base.clone(), exp)
}

/// Parses `p/q`, a decimal literal, or an integer into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Some(if neg { -value } else { value })
}
