//! One-variable functions behind the stationarity argument and grid checks of
//! their shape.
//!
//! For integers `r ≥ 3`, `s ≥ r − 1` and a real `M ≥ 1` with
//!
//! ```text
//! ((s−1)/s)^{r−2} > ((s−r+1)/(s−1))·M^{r−2}
//! ```
//!
//! define on `[(r−2)/(r−1)·M, M]`
//!
//! ```text
//! H(η) = C(s, r−1)/s^{r−1} · ((r−1)η − (r−2)M) / η^{r−1}
//! ν(η) = F_{r−1}⁻¹(H(η))
//! Q(δ) = (r−1)·C(s, r−1)·δ − s^{r−1}·η^{r−2}·F_r(δ)        on [0, ν]
//! J(η) = η^k · F_k(ν(η))
//! T(η) = (r−1)·C(s, r−1)·η²·ν − s^{r−1}·η^r·F_r(ν)
//! ```
//!
//! and `ϑ_t` (for `t = r−2, …, s−1`) by `H(ϑ_t) = F_{r−1}((t−1)/(2t))`.
//! Everything here is `f64`: the functions are defined through inverses.

use rayon::prelude::*;

use crate::bounds::{clique_bound, clique_bound_inverse};
use crate::error::{Error, Result};
use crate::format::sig;
use crate::report::{CheckOutcome, VerificationReport};
use crate::scalar::binomial;

/// Width at which the `ϑ_t` bisection stops.
pub const THETA_WIDTH: f64 = 1e-13;
/// Slack allowed when an argument sits just outside `[(r−2)/(r−1)·M, M]`.
pub const DOMAIN_TOLERANCE: f64 = 1e-12;
/// Upper end of the `M` range used when the smallness condition never binds (`s = r − 1`).
pub const UNBOUNDED_M_CAP: f64 = 2.0;

const SIGN_TOLERANCE: f64 = 1e-9;
const INEQUALITY_TOLERANCE: f64 = 1e-10;
const CLOSED_FORM_POINTS: usize = 10;

/// Claim identifiers used in verification reports.
pub mod claims {
    pub const H_INCREASING: &str = "h-increasing";
    pub const H_DERIVATIVE: &str = "h-derivative-positive";
    pub const H_BRACKET: &str = "h-endpoint-bracket";
    pub const THETA_TABLE: &str = "theta-table-ordered";
    pub const THETA_UPPER: &str = "theta-upper";
    pub const THETA_LOWER: &str = "theta-lower";
    pub const THETA_SQUARE: &str = "theta-square";
    pub const Q_MAX_AT_NU: &str = "q-max-at-nu";
    pub const J_CONVEX: &str = "j-convex-k2";
    pub const J_CONCAVE: &str = "j-concave-kr";
    pub const J_CLOSED_FORM: &str = "j-second-derivative-sign";
    pub const T_BOUND: &str = "t-bound";
    pub const T_EQUALITY: &str = "t-equality-at-theta";
}

fn binom(n: usize, k: usize) -> f64 {
    binomial(n, k) as f64
}

/// `((s−1)/s)^{r−2} > ((s−r+1)/(s−1))·M^{r−2}`.
pub fn smallness_holds(r: usize, s: usize, m: f64) -> bool {
    let e = (r - 2) as i32;
    let lhs = ((s - 1) as f64 / s as f64).powi(e);
    let rhs = (s + 1 - r) as f64 / (s - 1) as f64 * m.powi(e);
    lhs > rhs
}

/// Supremum of the admissible `M`; `None` when every `M ≥ 1` is admissible.
pub fn m_supremum(r: usize, s: usize) -> Option<f64> {
    if s + 1 == r {
        return None;
    }
    let ratio = (s - 1) as f64 / (s + 1 - r) as f64;
    Some((s - 1) as f64 / s as f64 * ratio.powf(1.0 / (r - 2) as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticParams {
    r: usize,
    s: usize,
    m: f64,
    theta_table: Vec<f64>,
}

impl AnalyticParams {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    /// `[ϑ_{r−2}, …, ϑ_{s−1}]`.
    pub fn theta_table(&self) -> &[f64] {
        &self.theta_table
    }

    /// `ϑ = ϑ_{s−1}`.
    pub fn theta(&self) -> f64 {
        *self.theta_table.last().expect("table is never empty")
    }

    /// `ϑ_t` for `r−2 ≤ t ≤ s`, with `ϑ_s = M`.
    pub fn theta_at(&self, t: usize) -> f64 {
        if t == self.s {
            self.m
        } else {
            self.theta_table[t + 2 - self.r]
        }
    }

    /// Left end `(r−2)/(r−1)·M` of the domain.
    pub fn lower(&self) -> f64 {
        (self.r - 2) as f64 / (self.r - 1) as f64 * self.m
    }

    /// Pieces `(t, ϑ_t, ϑ_{t+1})` for `t = r−2, …, s−1`.
    pub fn pieces(&self) -> Vec<(usize, f64, f64)> {
        (self.r - 2..self.s).map(|t| (t, self.theta_at(t), self.theta_at(t + 1))).collect()
    }

    fn h_scale(&self) -> f64 {
        binom(self.s, self.r - 1) / (self.s as f64).powi(self.r as i32 - 1)
    }

    fn h_raw(&self, eta: f64) -> f64 {
        let r = self.r as f64;
        self.h_scale() * ((r - 1.0) * eta - (r - 2.0) * self.m) / eta.powi(self.r as i32 - 1)
    }

    fn check_eta(&self, eta: f64) -> Result<f64> {
        let (lo, hi) = (self.lower(), self.m);
        if !eta.is_finite() || eta < lo - DOMAIN_TOLERANCE || eta > hi + DOMAIN_TOLERANCE {
            return Err(Error::Domain(format!("η = {eta} is outside [{lo}, {hi}]")));
        }
        Ok(eta.clamp(lo, hi))
    }
}

/// Validates `(r, s, M)` and tabulates `ϑ_t`.
pub fn make_params(r: usize, s: usize, m: f64) -> Result<AnalyticParams> {
    if r < 3 {
        return Err(Error::Parameter(format!("r = {r} must be at least 3")));
    }
    if s + 1 < r {
        return Err(Error::Parameter(format!("s = {s} must be at least r − 1 = {}", r - 1)));
    }
    if !m.is_finite() || m < 1.0 {
        return Err(Error::Parameter(format!("M = {m} must be a finite number ≥ 1")));
    }
    if !smallness_holds(r, s, m) {
        return Err(Error::Parameter(format!(
            "smallness condition ((s−1)/s)^(r−2) > ((s−r+1)/(s−1))·M^(r−2) fails for r = {r}, s = {s}, M = {m}"
        )));
    }
    let mut p = AnalyticParams { r, s, m, theta_table: Vec::with_capacity(s + 2 - r) };
    p.theta_table.push(p.lower());
    for t in r - 1..s {
        let target = binom(t, r - 1) / (t as f64).powi(r as i32 - 1);
        let (mut lo, mut hi) = (p.lower(), m);
        while hi - lo > THETA_WIDTH {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if p.h_raw(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        p.theta_table.push(0.5 * (lo + hi));
    }
    Ok(p)
}

pub fn h_eval(p: &AnalyticParams, eta: f64) -> Result<f64> {
    let eta = p.check_eta(eta)?;
    Ok(p.h_raw(eta).max(0.0))
}

pub fn nu(p: &AnalyticParams, eta: f64) -> Result<f64> {
    let h = h_eval(p, eta)?;
    clique_bound_inverse(p.r - 1, h)
}

pub fn q_eval(p: &AnalyticParams, eta: f64, delta: f64) -> Result<f64> {
    let limit = nu(p, eta)?;
    if !(0.0..=limit + DOMAIN_TOLERANCE).contains(&delta) {
        return Err(Error::Domain(format!("δ = {delta} is outside [0, ν = {limit}]")));
    }
    let eta = p.check_eta(eta)?;
    Ok(q_at(p, eta, delta.min(limit).max(0.0)))
}

fn q_at(p: &AnalyticParams, eta: f64, delta: f64) -> f64 {
    let r = p.r;
    let f = clique_bound(r, &delta).expect("δ lies in [0, 1/2)");
    (r - 1) as f64 * binom(p.s, r - 1) * delta - (p.s as f64).powi(r as i32 - 1) * eta.powi(r as i32 - 2) * f
}

pub fn j_eval(p: &AnalyticParams, k: usize, eta: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::Parameter(format!("k = {k} must be at least 2")));
    }
    let v = nu(p, eta)?;
    let eta = p.check_eta(eta)?;
    Ok(eta.powi(k as i32) * clique_bound(k, &v)?)
}

/// Closed-form `J″(η)` on the open piece `(ϑ_t, ϑ_{t+1})` containing `η`.
///
/// Writes `ν = t/(2(t+1))·(2S − 1)/S²` with `S ∈ (t/(t+1), 1)`; then
///
/// ```text
/// J″ = C(t+1, k)/(t+1)^k · k(k−1)(r−k−1)·η^{k−2}·(S·M − η)²
///      / (S^k·(1 − S)·((r−1)η − (r−2)M)²)
/// ```
pub fn j_second_derivative(p: &AnalyticParams, k: usize, eta: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::Parameter(format!("k = {k} must be at least 2")));
    }
    let eta = p.check_eta(eta)?;
    let (t, lo, hi) = p
        .pieces()
        .into_iter()
        .find(|&(_, lo, hi)| eta > lo && eta < hi)
        .ok_or_else(|| Error::Domain(format!("η = {eta} is not interior to a piece")))?;
    debug_assert!(lo < hi);
    let v = nu(p, eta)?;
    let tf = t as f64;
    let beta = (1.0 - 2.0 * v * (tf + 1.0) / tf).max(0.0).sqrt();
    let big_s = 1.0 / (1.0 + beta);
    let (r, kf, m) = (p.r as f64, k as f64, p.m);
    let lead = binom(t + 1, k) / (tf + 1.0).powi(k as i32);
    let numer = kf * (kf - 1.0) * (r - kf - 1.0) * eta.powi(k as i32 - 2) * (big_s * m - eta).powi(2);
    let denom = big_s.powi(k as i32) * (1.0 - big_s) * ((r - 1.0) * eta - (r - 2.0) * m).powi(2);
    Ok(lead * numer / denom)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TBound {
    /// `T(η)`.
    pub lhs: f64,
    /// `(r−2)/((s−1)(s+1))·C(s+1, r)·(½(r−1)sϑ² − (r−1)sϑM + r(s−1)Mη)`.
    pub rhs: f64,
    pub slack: f64,
}

/// Compares `T(η)` with its linear upper bound in `η`.
pub fn t_bound_check(p: &AnalyticParams, eta: f64) -> Result<TBound> {
    let v = nu(p, eta)?;
    let eta = p.check_eta(eta)?;
    let (r, s) = (p.r, p.s);
    let (rf, sf, m, th) = (r as f64, s as f64, p.m, p.theta());
    let lhs = (rf - 1.0) * binom(s, r - 1) * eta * eta * v
        - sf.powi(r as i32 - 1) * eta.powi(r as i32) * clique_bound(r, &v)?;
    let rhs = (rf - 2.0) / ((sf - 1.0) * (sf + 1.0))
        * binom(s + 1, r)
        * (0.5 * (rf - 1.0) * sf * th * th - (rf - 1.0) * sf * th * m + rf * (sf - 1.0) * m * eta);
    Ok(TBound { lhs, rhs, slack: rhs - lhs })
}

/// Grid of `n` points on `[lo, hi]` offset by half a step from both ends.
fn open_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    (0..n).map(|j| lo + (j as f64 + 0.5) * h).collect()
}

fn piece_scope(t: usize, lo: f64, hi: f64) -> String {
    format!("t={t} [{}, {}]", sig(lo), sig(hi))
}

/// Checks every shape property on every piece; failures carry the witness.
pub fn verify_analytic_claims(p: &AnalyticParams, grid_points: usize) -> VerificationReport {
    use claims::*;
    let n = grid_points.max(3);
    let (r, s, m) = (p.r, p.s, p.m);
    let whole = format!("[{}, {}]", sig(p.lower()), sig(m));
    let mut report = VerificationReport::default();

    // H at the right end lies strictly above F_{r−1}((s−2)/(2(s−1))) and at most F_{r−1}((s−1)/(2s))
    let mut bracket = CheckOutcome::new(H_BRACKET, whole.clone());
    let h_m = p.h_raw(m);
    let below = clique_bound(r - 1, &((s - 2) as f64 / (2.0 * (s - 1) as f64))).unwrap_or(0.0);
    let above = clique_bound(r - 1, &((s - 1) as f64 / (2.0 * s as f64))).unwrap_or(0.0);
    let slack = (h_m - below).min(above - h_m);
    bracket.record(slack, h_m > below && h_m <= above + 1e-15, || {
        format!("H(M)={} lower={} upper={}", sig(h_m), sig(below), sig(above))
    });
    report.push(bracket);

    let mut table = CheckOutcome::new(THETA_TABLE, whole.clone());
    let thetas: Vec<f64> = (r - 2..=s).map(|t| p.theta_at(t)).collect();
    table.record(-(p.theta_table[0] - p.lower()).abs(), p.theta_table[0] == p.lower(), || {
        format!("theta_{}={}", r - 2, sig(p.theta_table[0]))
    });
    for w in thetas.windows(2).enumerate() {
        let (i, pair) = w;
        table.record(pair[1] - pair[0], pair[1] > pair[0], || format!("t={} gap={}", r - 2 + i, sig(pair[1] - pair[0])));
    }
    report.push(table);

    let mut upper = CheckOutcome::new(THETA_UPPER, whole.clone());
    for t in r - 2..s.saturating_sub(1) {
        let bound = t as f64 / (t + 1) as f64 * m;
        let th = p.theta_at(t);
        upper.record(bound - th, th <= bound + 1e-12, || format!("t={t} theta={} bound={}", sig(th), sig(bound)));
    }
    report.push(upper);

    let mut lower = CheckOutcome::new(THETA_LOWER, whole.clone());
    let th = p.theta();
    let bound = (s - 1) as f64 / s as f64 * m;
    lower.record(th - bound, th >= bound - 1e-12, || format!("theta={} bound={}", sig(th), sig(bound)));
    report.push(lower);

    let mut square = CheckOutcome::new(THETA_SQUARE, whole.clone());
    let lhs = th * th - 2.0 * m * th;
    let rhs = -(((s * s - 1) as f64) / (s * s) as f64) * m * m;
    square.record(rhs - lhs, lhs <= rhs + INEQUALITY_TOLERANCE, || format!("theta={}", sig(th)));
    report.push(square);

    let mut equality = CheckOutcome::new(T_EQUALITY, format!("eta={}", sig(th)));
    match t_bound_check(p, th) {
        Ok(c) => equality.record(-c.slack.abs(), c.slack.abs() <= INEQUALITY_TOLERANCE, || {
            format!("lhs={} rhs={}", sig(c.lhs), sig(c.rhs))
        }),
        Err(e) => equality.record(f64::NEG_INFINITY, false, || e.to_string()),
    }
    report.push(equality);

    let per_piece: Vec<Vec<CheckOutcome>> =
        p.pieces().into_par_iter().map(|(t, lo, hi)| verify_piece(p, t, lo, hi, n)).collect();
    for outcomes in per_piece {
        for o in outcomes {
            report.push(o);
        }
    }
    report
}

fn verify_piece(p: &AnalyticParams, t: usize, lo: f64, hi: f64, n: usize) -> Vec<CheckOutcome> {
    use claims::*;
    let scope = piece_scope(t, lo, hi);
    let r = p.r;
    let grid = open_grid(lo, hi, n);
    let fail = |o: &mut CheckOutcome, eta: f64, e: Error| o.record(f64::NEG_INFINITY, false, || format!("eta={} {e}", sig(eta)));

    let mut increasing = CheckOutcome::new(H_INCREASING, scope.clone());
    let mut derivative = CheckOutcome::new(H_DERIVATIVE, scope.clone());
    let mut q_max = CheckOutcome::new(Q_MAX_AT_NU, scope.clone());
    let mut t_bound = CheckOutcome::new(T_BOUND, scope.clone());
    let mut convex = CheckOutcome::new(J_CONVEX, scope.clone());
    let mut concave = CheckOutcome::new(J_CONCAVE, scope.clone());
    let mut closed = CheckOutcome::new(J_CLOSED_FORM, scope.clone());

    let hs: Vec<f64> = grid.iter().map(|&e| p.h_raw(e)).collect();
    for (j, pair) in hs.windows(2).enumerate() {
        let diff = pair[1] - pair[0];
        increasing.record(diff, diff > 0.0, || format!("eta={}", sig(grid[j + 1])));
    }

    let step = 1e-6;
    for &eta in &grid {
        if eta + step <= p.m {
            let q = (p.h_raw(eta + step) - p.h_raw(eta)) / step;
            derivative.record(q, q > 0.0, || format!("eta={}", sig(eta)));
        }

        let v = match nu(p, eta) {
            Ok(v) => v,
            Err(e) => {
                fail(&mut q_max, eta, e);
                continue;
            }
        };
        // Q on a δ-grid over [0, ν]; the maximum has to sit in the last cell
        let deltas: Vec<f64> = (0..n).map(|j| v * j as f64 / (n - 1) as f64).collect();
        let qs: Vec<f64> = deltas.iter().map(|&d| q_at(p, eta, d)).collect();
        let (arg, &best) = qs
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("non-empty grid");
        let q_nu = q_at(p, eta, v);
        let tol = INEQUALITY_TOLERANCE * (1.0 + q_nu.abs());
        let ok = arg + 2 >= n || best <= q_nu + tol;
        q_max.record(q_nu - best, ok, || format!("eta={} argmax_delta={} nu={}", sig(eta), sig(deltas[arg]), sig(v)));

        match t_bound_check(p, eta) {
            Ok(c) => t_bound.record(c.slack, c.slack >= -INEQUALITY_TOLERANCE, || {
                format!("eta={} lhs={} rhs={}", sig(eta), sig(c.lhs), sig(c.rhs))
            }),
            Err(e) => fail(&mut t_bound, eta, e),
        }
    }

    for (k, outcome, sign) in [(2usize, &mut convex, 1.0), (r, &mut concave, -1.0)] {
        let js: Vec<Result<f64>> = grid.iter().map(|&e| j_eval(p, k, e)).collect();
        for j in 1..n - 1 {
            match (&js[j - 1], &js[j], &js[j + 1]) {
                (Ok(a), Ok(b), Ok(c)) => {
                    let second = a - 2.0 * b + c;
                    outcome.record(sign * second, sign * second >= -SIGN_TOLERANCE, || {
                        format!("eta={} second_difference={}", sig(grid[j]), sig(second))
                    });
                }
                _ => fail(outcome, grid[j], Error::Domain("J undefined".into())),
            }
        }
    }

    // closed-form J″ against a central second difference at a few interior points
    let h = (hi - lo) * 1e-3;
    for &eta in &open_grid(lo, hi, CLOSED_FORM_POINTS) {
        for k in [2, r] {
            let exact = match j_second_derivative(p, k, eta) {
                Ok(v) => v,
                Err(e) => {
                    fail(&mut closed, eta, e);
                    continue;
                }
            };
            let vals: Result<Vec<f64>> = [eta - h, eta, eta + h].iter().map(|&e| j_eval(p, k, e)).collect();
            let Ok(vals) = vals else {
                fail(&mut closed, eta, Error::Domain("J undefined".into()));
                continue;
            };
            let numeric = (vals[0] - 2.0 * vals[1] + vals[2]) / (h * h);
            let expected_sign = if k == 2 { 1.0 } else { -1.0 };
            let discrepancy = (numeric - exact).abs() / (1.0 + exact.abs());
            let sign_ok = exact * expected_sign >= 0.0 && (exact * numeric >= 0.0 || discrepancy <= 1e-3);
            closed.record(-discrepancy, sign_ok, || {
                format!("eta={} k={k} closed_form={} numeric={}", sig(eta), sig(exact), sig(numeric))
            });
        }
    }

    vec![increasing, derivative, q_max, convex, concave, closed, t_bound]
}

/// The four `M` values used for parameter sweeps: `1`, `1.01`, the midpoint
/// of `[1, sup]` and `0.999·sup` (with `sup` capped at [`UNBOUNDED_M_CAP`]).
pub fn standard_m_values(r: usize, s: usize) -> Vec<f64> {
    let sup = m_supremum(r, s).unwrap_or(UNBOUNDED_M_CAP);
    let mut out = vec![1.0];
    for m in [1.01, 0.5 * (1.0 + sup), 0.999 * sup] {
        if m >= 1.0 && smallness_holds(r, s, m) {
            out.push(m);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p333() -> AnalyticParams {
        make_params(3, 3, 1.0).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn params_examples() {
        let p = make_params(3, 2, 1.0).unwrap();
        assert_eq!(p.theta_table(), &[0.5]);
        let p = p333();
        assert_eq!(p.theta_table()[0], 0.5);
        assert!(close(p.theta_table()[1], 2.0 / 3.0));
        assert!(matches!(make_params(4, 4, 1.5), Err(Error::Parameter(_))));
        assert!(make_params(3, 2, 2.0).is_ok());
        assert!(matches!(make_params(3, 3, 0.9), Err(Error::Parameter(_))));
        assert!(matches!(make_params(3, 1, 1.0), Err(Error::Parameter(_))));
        assert!(matches!(make_params(2, 3, 1.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn function_examples() {
        let p = p333();
        assert!(close(h_eval(&p, 0.5).unwrap(), 0.0));
        assert!(close(h_eval(&p, 1.0).unwrap(), 1.0 / 3.0));
        assert!(close(h_eval(&p, 2.0 / 3.0).unwrap(), 0.25));
        assert!(close(nu(&p, 2.0 / 3.0).unwrap(), 0.25));
        assert!(close(nu(&p, 0.5).unwrap(), 0.0));
        assert!(close(nu(&p, 1.0).unwrap(), 1.0 / 3.0));
        assert!(h_eval(&p, 0.4).is_err());
        assert!(h_eval(&p, 1.1).is_err());

        assert!(close(q_eval(&p, 1.0, 1.0 / 3.0).unwrap(), 5.0 / 3.0));
        assert!(close(q_eval(&p, 1.0, 0.25).unwrap(), 1.5));
        assert!(close(q_eval(&p, 1.0, 0.0).unwrap(), 0.0));
        assert!(q_eval(&p, 1.0, 0.34).is_err());

        assert!(close(j_eval(&p, 2, 1.0).unwrap(), 1.0 / 3.0));
        assert!(close(j_eval(&p, 2, 2.0 / 3.0).unwrap(), 1.0 / 9.0));
        assert!(close(j_eval(&p, 3, 0.5).unwrap(), 0.0));
    }

    #[test]
    fn t_bound_examples() {
        let p = p333();
        let c = t_bound_check(&p, 2.0 / 3.0).unwrap();
        assert!(close(c.lhs, 2.0 / 3.0) && close(c.rhs, 2.0 / 3.0));
        let c = t_bound_check(&p, 0.5).unwrap();
        assert!(close(c.lhs, 0.0) && c.rhs >= 0.0);
        assert!(t_bound_check(&p, 1.0).unwrap().slack > 0.0);
    }

    #[test]
    fn h_times_power_is_linear() {
        let p = make_params(5, 7, 1.02).unwrap();
        for eta in open_grid(p.lower(), p.m(), 50) {
            let lhs = eta.powi(4) * h_eval(&p, eta).unwrap();
            let rhs = binom(7, 4) / 7f64.powi(4) * (4.0 * eta - 3.0 * 1.02);
            assert!((lhs - rhs).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_second_derivative_matches_differences() {
        let p = make_params(4, 7, 1.0).unwrap();
        for (_, lo, hi) in p.pieces() {
            let eta = 0.5 * (lo + hi);
            let h = (hi - lo) * 1e-3;
            for k in [2, 3, 4, 5] {
                let f = |e| j_eval(&p, k, e).unwrap();
                let numeric = (f(eta - h) - 2.0 * f(eta) + f(eta + h)) / (h * h);
                let exact = j_second_derivative(&p, k, eta).unwrap();
                assert!((numeric - exact).abs() <= 1e-3 * (1.0 + exact.abs()), "k={k} {numeric} vs {exact}");
            }
        }
    }

    #[test]
    fn verification_examples() {
        for (r, s, m) in [(3, 3, 1.0), (3, 2, 1.0), (5, 6, 1.02)] {
            let p = make_params(r, s, m).unwrap();
            let report = verify_analytic_claims(&p, 101);
            assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        }
        let p = make_params(3, 2, 1.0).unwrap();
        assert_eq!(p.theta(), 0.5);
    }

    #[test]
    fn supremum() {
        assert_eq!(m_supremum(3, 2), None);
        let sup = m_supremum(4, 4).unwrap();
        assert!(smallness_holds(4, 4, sup * 0.999));
        assert!(!smallness_holds(4, 4, sup * 1.001));
        assert_eq!(standard_m_values(3, 3).len(), 4);
    }
}
