//! Numerical minimisation of the deficit `G(K_r) − F_r(G(K_2))` and the
//! first-order conditions at candidate minimisers.
//!
//! With `λ = F_r′(γ)` the Lagrange conditions on the simplex read
//!
//! ```text
//! G_i(K_{r−1}) = λ·G_i(K_1) − μ          (x_i > 0)
//! G_i(K_{r−1}) ≥ λ·G_i(K_1) − μ          (x_i = 0)
//! ```
//!
//! and for an edge with `x_i x_j > 0` the sign of `λ − G_ij(K_{r−2})` must be
//! compatible with the bounds `0 ≤ a_ij ≤ 1`: zero in the interior,
//! non-negative at `a_ij = 1`, non-positive at `a_ij = 0`.

use rand::Rng;
use rayon::prelude::*;

use crate::analytic::{make_params, smallness_holds};
use crate::bounds::{breakpoint, clique_bound, clique_bound_derivative, clique_bound_slope, decompose_density};
use crate::error::{Error, Result};
use crate::graph::{SymmetricWeights, WeightedGraph};
use crate::scalar::{binomial_as, powi, Scalar};

/// Edge weights within this distance of 0 or 1 count as on the boundary.
pub const EDGE_EPSILON: f64 = 1e-7;
/// Vertex weights at or below this count as zero.
pub const VERTEX_EPSILON: f64 = 1e-12;
/// Candidates whose edge density comes this close to `1/2` are rejected.
pub const DENSITY_MARGIN: f64 = 1e-6;
/// Candidates this close to a breakpoint are pulled back by shrinking the step.
pub const BREAKPOINT_MARGIN: f64 = 1e-9;
/// Residual level below which a graph counts as stationary.
pub const STATIONARY_TOLERANCE: f64 = 1e-6;
/// Slack in the aggregated second-step inequality.
pub const CHAIN_TOLERANCE: f64 = 1e-8;

const MAX_STEP: f64 = 1e4;
const MIN_STEP: f64 = 1e-20;
const BREAKPOINT_RETRIES: usize = 40;

/// Partial derivatives of `G(K_ρ)` as a polynomial in `x` and `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGradient<T> {
    /// `∂/∂x_i = G_i(K_{ρ−1})`.
    pub vertex: Vec<T>,
    /// `∂/∂a_ij = x_i x_j·G_ij(K_{ρ−2})`.
    pub edge: SymmetricWeights<T>,
}

pub fn density_gradient<T: Scalar>(g: &WeightedGraph<T>, rho: usize) -> Result<DensityGradient<T>> {
    let n = g.order();
    let vertex = (0..n)
        .map(|i| if rho == 0 { Ok(T::zero()) } else { g.rooted_density(&[i], rho - 1) })
        .collect::<Result<Vec<T>>>()?;
    let mut edge = SymmetricWeights::filled(n, T::zero());
    if rho >= 2 {
        for i in 0..n {
            for j in i + 1..n {
                let rooted = g.rooted_density(&[i, j], rho - 2)?;
                edge.set(i, j, g.x(i).clone() * g.x(j).clone() * rooted);
            }
        }
    }
    Ok(DensityGradient { vertex, edge })
}

/// Gradient of the deficit with the slope `λ̂` of `F_r` taken from the right.
#[derive(Debug, Clone, PartialEq)]
pub struct DeficitGradient {
    pub lambda: f64,
    pub vertex: Vec<f64>,
    pub edge: SymmetricWeights<f64>,
}

pub fn deficit_gradient(g: &WeightedGraph<f64>, r: usize) -> Result<DeficitGradient> {
    let n = g.order();
    let gamma = g.edge_density();
    let lambda = clique_bound_slope(r, &gamma)?;
    let clique = density_gradient(g, r)?;
    let vertex = (0..n).map(|i| clique.vertex[i] - lambda * g.rooted_density(&[i], 1).unwrap_or(0.0)).collect();
    let edge = SymmetricWeights::from_fn(n, |i, j| clique.edge.get(i, j) - lambda * g.x(i) * g.x(j));
    Ok(DeficitGradient { lambda, vertex, edge })
}

/// Euclidean projection onto the probability simplex (sort-based).
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&u| (u - theta).max(0.0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    /// `x_i x_j = 0`: the edge weight does not affect any density.
    Inactive,
    Zero,
    Interior,
    One,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeResidual<T> {
    pub i: usize,
    pub j: usize,
    pub class: EdgeClass,
    pub slack: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationarityReport<T> {
    pub r: usize,
    pub gamma: T,
    pub s: usize,
    pub alpha: T,
    /// `F_r′(γ)`.
    pub lambda: T,
    /// `2γλ − r·G(K_r)`.
    pub mu: T,
    /// `μ / ((r−2)r/(s+1)^r · C(s+1, r) · (1+α)^{r−1})`; `None` when `C(s+1, r) = 0`.
    pub m_stat: Option<T>,
    pub vertex_residuals: Vec<T>,
    pub edge_residuals: Vec<EdgeResidual<T>>,
    /// `G_i(K_1) / ((s/(s+1))·(1+α))`.
    pub eta: Vec<T>,
    /// `|Σ x_i η_i − (1 − α)|`.
    pub eta_mean_check: T,
}

impl<T: Scalar> StationarityReport<T> {
    pub fn max_vertex_residual(&self) -> f64 {
        self.vertex_residuals.iter().map(Scalar::to_f64_lossy).fold(0.0, f64::max)
    }

    pub fn max_edge_residual(&self) -> f64 {
        self.edge_residuals.iter().map(|e| e.slack.to_f64_lossy()).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.max_vertex_residual().max(self.max_edge_residual())
    }
}

pub fn stationarity_report<T: Scalar>(g: &WeightedGraph<T>, r: usize) -> Result<StationarityReport<T>> {
    if r < 3 {
        return Err(Error::Parameter(format!("r = {r} must be at least 3")));
    }
    let n = g.order();
    let profile = g.clique_profile(r);
    let gamma = profile[2].clone();
    let d = decompose_density(&gamma)?;
    let lambda = clique_bound_derivative(r, &gamma)?;
    let two = T::from_usize_lossy(2);
    let mu = two * gamma.clone() * lambda.clone() - T::from_usize_lossy(r) * profile[r].clone();

    let one = T::one();
    let s1 = T::from_usize_lossy(d.s + 1);
    let scale = T::from_usize_lossy((r - 2) * r) / powi(&s1, r)
        * binomial_as::<T>(d.s + 1, r)
        * powi(&(one.clone() + d.alpha.clone()), r - 1);
    let m_stat = (!scale.is_zero()).then(|| mu.clone() / scale);

    let vertex_eps = T::tolerance(VERTEX_EPSILON);
    let mut vertex_residuals = Vec::with_capacity(n);
    let mut degrees = Vec::with_capacity(n);
    for i in 0..n {
        let rooted = g.rooted_profile(&[i], r - 1)?;
        let equation = rooted[r - 1].clone() - lambda.clone() * rooted[1].clone() + mu.clone();
        let residual = if *g.x(i) > vertex_eps {
            equation.abs_value()
        } else if equation < T::zero() {
            -equation
        } else {
            T::zero()
        };
        vertex_residuals.push(residual);
        degrees.push(rooted[1].clone());
    }

    let edge_eps = T::tolerance(EDGE_EPSILON);
    let mut edge_residuals = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let weight = g.x(i).clone() * g.x(j).clone();
            let a = g.a(i, j).clone();
            let (class, slack) = if weight.is_zero() {
                (EdgeClass::Inactive, T::zero())
            } else {
                let gap = lambda.clone() - g.rooted_density(&[i, j], r - 2)?;
                if a >= one.clone() - edge_eps.clone() {
                    (EdgeClass::One, if gap < T::zero() { -gap } else { T::zero() })
                } else if a <= edge_eps {
                    (EdgeClass::Zero, if gap > T::zero() { gap } else { T::zero() })
                } else {
                    (EdgeClass::Interior, gap.abs_value())
                }
            };
            edge_residuals.push(EdgeResidual { i, j, class, slack });
        }
    }

    let eta_scale = T::from_usize_lossy(d.s) / s1 * (one.clone() + d.alpha.clone());
    let eta: Vec<T> = degrees.iter().map(|deg| deg.clone() / eta_scale.clone()).collect();
    let weighted = (0..n).fold(T::zero(), |acc, i| acc + g.x(i).clone() * eta[i].clone());
    let eta_mean_check = (weighted - (one - d.alpha.clone())).abs_value();

    Ok(StationarityReport {
        r,
        gamma,
        s: d.s,
        alpha: d.alpha,
        lambda,
        mu,
        m_stat,
        vertex_residuals,
        edge_residuals,
        eta,
        eta_mean_check,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexBound {
    pub vertex: usize,
    /// `λ·G_i(K_2) − G_i(K_r)`.
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PerVertexCheck {
    Checked { theta: f64, bounds: Vec<VertexBound> },
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainCheck {
    /// `(r−1)·G(K_r) + (r+1)·G(K_{r+1})`.
    pub lhs: f64,
    /// `λ·(γ + 3·G(K_3)) − 2γμ`.
    pub rhs: f64,
    pub ok: bool,
    pub per_vertex: PerVertexCheck,
}

impl ChainCheck {
    /// Aggregate inequality and every per-vertex bound that was checked.
    pub fn all_ok(&self) -> bool {
        self.ok
            && match &self.per_vertex {
                PerVertexCheck::Checked { bounds, .. } => bounds.iter().all(|b| b.ok),
                PerVertexCheck::Skipped(_) => true,
            }
    }
}

/// Inequalities that hold at stationary points only.
///
/// Besides the aggregate estimate, every vertex is checked against
///
/// ```text
/// λ·G_i(K_2) − G_i(K_r) ≤ (r−2)·s·(1+α)^r / ((s−1)(s+1)^{r+1}) · C(s+1, r)
///                         · (½(r−1)sϑ² − (r−1)sϑM + r(s−1)·η_i·M)
/// ```
///
/// with `ϑ` from [`crate::analytic`]; skipped when `M < 1` or `(r, s, M)`
/// violates the smallness condition.
pub fn conditional_chain_check(
    g: &WeightedGraph<f64>,
    r: usize,
    report: &StationarityReport<f64>,
) -> Result<ChainCheck> {
    let worst = report.max_residual();
    if worst.is_nan() || worst > STATIONARY_TOLERANCE {
        return Err(Error::NotStationary(format!("largest residual {worst:e} exceeds {STATIONARY_TOLERANCE:e}")));
    }
    let profile = g.clique_profile(r + 1);
    let (gamma, lambda, mu) = (report.gamma, report.lambda, report.mu);
    let lhs = (r - 1) as f64 * profile[r] + (r + 1) as f64 * profile[r + 1];
    let rhs = lambda * (gamma + 3.0 * profile[3]) - 2.0 * gamma * mu;
    let ok = lhs <= rhs + CHAIN_TOLERANCE;

    let per_vertex = per_vertex_bounds(g, r, report)?;
    Ok(ChainCheck { lhs, rhs, ok, per_vertex })
}

fn per_vertex_bounds(g: &WeightedGraph<f64>, r: usize, report: &StationarityReport<f64>) -> Result<PerVertexCheck> {
    let s = report.s;
    let Some(m_raw) = report.m_stat else {
        return Ok(PerVertexCheck::Skipped("M is undefined: C(s+1, r) = 0".into()));
    };
    // M = 1 exactly at zero-deficit points; absorb rounding just below it
    let m = if (1.0 - 1e-9..1.0).contains(&m_raw) { 1.0 } else { m_raw };
    if m < 1.0 {
        return Ok(PerVertexCheck::Skipped(format!("M = {m_raw} is below 1")));
    }
    if s + 1 < r {
        return Ok(PerVertexCheck::Skipped(format!("s = {s} is below r − 1")));
    }
    if !smallness_holds(r, s, m) {
        return Ok(PerVertexCheck::Skipped(format!("smallness condition fails for r = {r}, s = {s}, M = {m}")));
    }
    let params = make_params(r, s, m)?;
    let theta = params.theta();
    let (rf, sf, alpha) = (r as f64, s as f64, report.alpha);
    let lead = (rf - 2.0) * sf * (1.0 + alpha).powi(r as i32) / ((sf - 1.0) * (sf + 1.0).powi(r as i32 + 1))
        * binomial_as::<f64>(s + 1, r);
    let bounds = (0..g.order())
        .map(|i| {
            let rooted = g.rooted_profile(&[i], r)?;
            let lhs = report.lambda * rooted[2] - rooted[r];
            let bracket = 0.5 * (rf - 1.0) * sf * theta * theta - (rf - 1.0) * sf * theta * m
                + rf * (sf - 1.0) * report.eta[i] * m;
            let rhs = lead * bracket;
            Ok(VertexBound { vertex: i, lhs, rhs, ok: lhs <= rhs + CHAIN_TOLERANCE })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PerVertexCheck::Checked { theta, bounds })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOptions {
    pub steps: usize,
    pub step_size: f64,
    pub record_trace: bool,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self { steps: 50_000, step_size: 0.1, record_trace: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub step: usize,
    pub gamma: f64,
    pub deficit: f64,
}

#[derive(Debug, Clone)]
pub struct Optimized {
    pub graph: WeightedGraph<f64>,
    pub deficit: f64,
    /// Stationarity at the final graph; an error when `γ` is a breakpoint.
    pub report: Result<StationarityReport<f64>>,
    pub trace: Vec<TraceRow>,
    /// Iterations performed before the step size collapsed or the budget ran out.
    pub iterations: usize,
    /// Smallest deficit among all graphs evaluated during the run.
    pub min_visited_deficit: f64,
}

fn near_breakpoint(gamma: f64) -> bool {
    let Ok(d) = decompose_density(&gamma) else { return false };
    let t = d.s;
    let left = (t - 1) as f64 / (2 * t) as f64;
    (gamma - left).abs() <= BREAKPOINT_MARGIN || (gamma - breakpoint::<f64>(t)).abs() <= BREAKPOINT_MARGIN
}

fn deficit_of(g: &WeightedGraph<f64>, r: usize) -> Result<(f64, f64)> {
    let profile = g.clique_profile(r);
    let gamma = profile[2];
    Ok((gamma, profile[r] - clique_bound(r, &gamma)?))
}

/// Projected gradient descent with halving backtracking.
///
/// A candidate is accepted only if it does not increase the deficit; the step
/// then doubles (up to a cap). The run ends when the step budget is spent or
/// no step above `1e−20` is accepted.
pub fn minimize_deficit(init: &WeightedGraph<f64>, r: usize, options: &OptimizeOptions) -> Result<Optimized> {
    if r < 3 {
        return Err(Error::Parameter(format!("r = {r} must be at least 3")));
    }
    if init.order() < r {
        return Err(Error::Parameter(format!("order {} is below r = {r}", init.order())));
    }
    if !(options.step_size > 0.0 && options.step_size.is_finite()) {
        return Err(Error::Parameter(format!("step size {} must be positive", options.step_size)));
    }
    let n = init.order();
    let mut g = init.clone();
    let (mut gamma, mut deficit) = deficit_of(&g, r)?;
    let mut min_visited = deficit;
    let mut step = options.step_size;
    let mut trace = Vec::new();
    if options.record_trace {
        trace.push(TraceRow { step: 0, gamma, deficit });
    }
    let mut iterations = 0;

    'outer: for it in 1..=options.steps {
        let grad = deficit_gradient(&g, r)?;
        if grad.vertex.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence(format!("non-finite gradient at iteration {it}")));
        }
        let mut breakpoint_retries = 0;
        loop {
            if step < MIN_STEP {
                break 'outer;
            }
            let shifted: Vec<f64> = (0..n).map(|i| g.x(i) - step * grad.vertex[i]).collect();
            let x = project_to_simplex(&shifted);
            let a = SymmetricWeights::from_fn(n, |i, j| (g.a(i, j) - step * grad.edge.get(i, j)).clamp(0.0, 1.0));
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::Divergence(format!("non-finite weights at iteration {it}")));
            }
            let candidate = WeightedGraph::new(x, a)
                .map_err(|e| Error::Divergence(format!("invalid iterate at iteration {it}: {e}")))?;
            let cand_gamma = candidate.edge_density();
            if cand_gamma >= 0.5 - DENSITY_MARGIN {
                step *= 0.5;
                continue;
            }
            if near_breakpoint(cand_gamma) && breakpoint_retries < BREAKPOINT_RETRIES {
                breakpoint_retries += 1;
                step *= 0.5;
                continue;
            }
            let (cand_gamma, cand_deficit) = deficit_of(&candidate, r)?;
            if !cand_deficit.is_finite() {
                return Err(Error::Divergence(format!("non-finite deficit at iteration {it}")));
            }
            min_visited = min_visited.min(cand_deficit);
            if cand_deficit <= deficit {
                g = candidate;
                gamma = cand_gamma;
                deficit = cand_deficit;
                step = (step * 2.0).min(MAX_STEP);
                break;
            }
            step *= 0.5;
        }
        iterations = it;
        if options.record_trace {
            trace.push(TraceRow { step: it, gamma, deficit });
        }
    }

    let report = stationarity_report(&g, r);
    Ok(Optimized { graph: g, deficit, report, trace, iterations, min_visited_deficit: min_visited })
}

/// Runs from a random graph of order `n` drawn from `rng`.
pub fn minimize_from_rng<R: Rng + ?Sized>(
    n: usize,
    r: usize,
    rng: &mut R,
    options: &OptimizeOptions,
) -> Result<Optimized> {
    let init = WeightedGraph::random(n, rng);
    minimize_deficit(&init, r, options)
}

/// Independent runs in parallel; returns all outcomes and the index of the
/// lowest final deficit (ties to the lower index).
pub fn multistart(inits: &[WeightedGraph<f64>], r: usize, options: &OptimizeOptions) -> Result<(usize, Vec<Optimized>)> {
    let runs = inits.par_iter().map(|g| minimize_deficit(g, r, options)).collect::<Result<Vec<_>>>()?;
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.deficit.total_cmp(&b.1.deficit).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Argument("no starting graphs".into()))?;
    Ok((best, runs))
}

/// Adds independent `U(−amplitude, amplitude)` noise to every vertex weight,
/// clamps at zero and renormalises. Edge weights are unchanged.
pub fn perturb_vertex_weights<R: Rng + ?Sized>(
    g: &WeightedGraph<f64>,
    amplitude: f64,
    rng: &mut R,
) -> Result<WeightedGraph<f64>> {
    let raw: Vec<f64> = g.vertex_weights().iter().map(|&v| (v + rng.gen_range(-amplitude..=amplitude)).max(0.0)).collect();
    let sum: f64 = raw.iter().sum();
    if sum <= 0.0 {
        return Err(Error::Argument("perturbation removed all vertex weight".into()));
    }
    WeightedGraph::new(raw.into_iter().map(|v| v / sum).collect(), g.edge_weights().clone())
}
