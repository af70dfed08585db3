//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use clique_density::analytic::{h_eval, make_params, standard_m_values, t_bound_check, verify_analytic_claims};
use clique_density::bounds::{breakpoint, clique_bound, ls_bound};
use clique_density::extremal::{blowup, count_cliques, extremal_weighted};
use clique_density::graph::clique_polynomial;
use clique_density::graph::identities::{cauchy_chain_check, second_step_identity};
use clique_density::graph::local::{check_local_inequalities, LocalMode};
use clique_density::optimize::{deficit_gradient, minimize_deficit, perturb_vertex_weights, stationarity_report, OptimizeOptions};
use clique_density::oracle::{min_cliques, min_cliques_reference, sweep};
use clique_density::scalar::binomial;
use clique_density::{Graph, Rational};

struct Verdict {
    ok: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Verdict);

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict { ok, detail: detail.into() }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed <= limit
}

fn random_graphs(count: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|k| Graph::random(3 + k % 6, &mut rng)).collect()
}

fn bound_values() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for (r, gamma, expect) in [(3, q(1, 3), q(1, 27)), (4, q(3, 8), q(1, 256))] {
        let start = Instant::now();
        let value = clique_bound(r, &gamma);
        let elapsed = start.elapsed();
        let hit = value.as_ref() == Ok(&expect);
        ok &= hit && within(elapsed, Duration::from_millis(1));
        parts.push(format!("F_{r}({gamma}) = {} in {elapsed:?}", value.map_or_else(|e| e.to_string(), |v| v.to_string())));
    }
    verdict(ok, parts.join("; "))
}

fn ls_dominance() -> Verdict {
    let start = Instant::now();
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_gap = 0.0f64;
    for r in 3..=6 {
        for k in 0..2000 {
            let gamma = k as f64 / 4000.0;
            let excess = ls_bound(r, &gamma).unwrap() - clique_bound(r, &gamma).unwrap();
            worst_excess = worst_excess.max(excess);
        }
        for t in 1..=100 {
            let gamma = breakpoint::<f64>(t);
            let gap = (ls_bound(r, &gamma).unwrap() - clique_bound(r, &gamma).unwrap()).abs();
            worst_gap = worst_gap.max(gap);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst_excess <= 1e-12 && worst_gap <= 1e-12 && within(elapsed, Duration::from_secs(1)),
        format!("max(ls − F) = {worst_excess:.3e}, max breakpoint gap = {worst_gap:.3e} (t ≤ 100) in {elapsed:?}"),
    )
}

fn local_exhaustive() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in 3..=6 {
        let start = Instant::now();
        let report = check_local_inequalities(r, LocalMode::Exhaustive01).unwrap();
        let elapsed = start.elapsed();
        let cases = 1usize << binomial(r + 1, 2);
        let complete = report.checks.len() == 2 && report.checks.iter().all(|c| c.samples == cases);
        ok &= report.passed() && complete;
        if r == 6 {
            ok &= within(elapsed, Duration::from_secs(60));
        }
        parts.push(format!("r={r}: {cases} cases {} in {elapsed:?}", if report.passed() { "clean" } else { "VIOLATED" }));
    }
    verdict(ok, parts.join("; "))
}

fn second_step() -> Verdict {
    let start = Instant::now();
    let graphs = random_graphs(10_000, 4);
    let mut worst = 0.0f64;
    let mut ok = true;
    for g in &graphs {
        let n = g.order() as f64;
        let check = second_step_identity(g);
        ok &= check.residual <= 1e-12 * n * n * n;
        worst = worst.max(check.residual / (n * n * n));
    }
    let elapsed = start.elapsed();
    verdict(
        ok && within(elapsed, Duration::from_secs(30)),
        format!("10000 graphs, max residual/n³ = {worst:.3e} in {elapsed:?}"),
    )
}

fn cauchy_chain() -> Verdict {
    let start = Instant::now();
    let graphs = random_graphs(10_000, 5);
    let mut ok = true;
    let mut worst_identity = 0.0f64;
    let mut worst_slack = f64::INFINITY;
    for r in [3, 4] {
        for g in &graphs {
            let c = cauchy_chain_check(g, r).unwrap();
            let identity = c.facet_residual.max(c.base_residual);
            ok &= c.ok && identity <= 1e-12;
            worst_identity = worst_identity.max(identity);
            worst_slack = worst_slack.min(c.rhs - c.lhs);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        ok && within(elapsed, Duration::from_secs(60)),
        format!("r ∈ {{3,4}} × 10000 graphs, min slack = {worst_slack:.3e}, max identity residual = {worst_identity:.3e} in {elapsed:?}"),
    )
}

fn oracle_vs_bound() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    let cell = min_cliques(5, 7, 3).unwrap().minimum;
    let reference = min_cliques_reference(5, 7, 3).unwrap().minimum;
    let bound = clique_bound(3, &(7.0f64 / 25.0)).unwrap() * 125.0;
    ok &= cell == 2 && reference == 2 && (bound - 1.8148).abs() < 1e-4;
    parts.push(format!("min(5,7,3) = {cell} (enumeration {reference}) vs {bound:.4}"));
    let mut n7 = Duration::ZERO;
    for (n, r) in [(5, 3), (6, 3), (7, 3), (6, 4), (7, 4)] {
        let start = Instant::now();
        let rows = sweep(n, r).unwrap();
        let elapsed = start.elapsed();
        if n == 7 {
            n7 += elapsed;
        }
        let worst = rows.iter().map(|row| row.slack).fold(f64::INFINITY, f64::min);
        ok &= worst >= -1e-9;
        parts.push(format!("({n},{r}) min slack {worst:.3e} in {elapsed:?}"));
    }
    ok &= within(n7, Duration::from_secs(600));
    verdict(ok, parts.join("; "))
}

fn extremal_equality() -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for k in 0..200 {
        let g = extremal_weighted(&(k as f64 / 400.0)).unwrap();
        for r in 3..=7 {
            worst = worst.max(g.deficit(r).unwrap().abs());
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-12 && within(elapsed, Duration::from_secs(5)),
        format!("200 γ × r ∈ 3..=7, max |deficit| = {worst:.3e} in {elapsed:?}"),
    )
}

fn blowup_error() -> Verdict {
    let start = Instant::now();
    let g = extremal_weighted(&q(1, 3)).unwrap();
    let mut exact = true;
    for n in [12usize, 24, 48] {
        let count = count_cliques(&blowup(&g, n).unwrap().graph, 3);
        exact &= count as usize * 27 == n * n * n;
    }
    let mut worst = 0.0f64;
    for n in 13..=50usize {
        let count = count_cliques(&blowup(&g, n).unwrap().graph, 3) as f64;
        let target = (n * n * n) as f64 / 27.0;
        worst = worst.max((count - target).abs() / n as f64);
    }
    let elapsed = start.elapsed();
    verdict(
        exact && worst <= 2.0 && within(elapsed, Duration::from_secs(10)),
        format!("N ∈ {{12,24,48}} exact: {exact}; max |#K_3 − N³/27|/N over 13..=50 = {worst:.4} in {elapsed:?}"),
    )
}

fn analytic_claims() -> Verdict {
    let start = Instant::now();
    let mut runs = 0;
    let mut failures = Vec::new();
    for r in 3..=6 {
        for s in r - 1..=10 {
            for m in standard_m_values(r, s) {
                runs += 1;
                let passed = make_params(r, s, m).map(|p| verify_analytic_claims(&p, 101).passed());
                if passed != Ok(true) {
                    failures.push(format!("(r={r}, s={s}, M={m})"));
                }
            }
        }
    }
    let p = make_params(3, 3, 1.0).unwrap();
    let h = h_eval(&p, 2.0 / 3.0).unwrap();
    let theta = p.theta();
    let t = t_bound_check(&p, theta).unwrap();
    let spots = (h - 0.25).abs() <= 1e-12 && (theta - 2.0 / 3.0).abs() <= 1e-12 && (t.lhs - t.rhs).abs() <= 1e-12;
    let elapsed = start.elapsed();
    verdict(
        failures.is_empty() && spots && within(elapsed, Duration::from_secs(120)),
        format!(
            "{runs} parameter sets, {} failing {}; H(2/3) = {h}, ϑ = {theta}, T(ϑ) gap = {:.3e} in {elapsed:?}",
            failures.len(),
            failures.join(" "),
            (t.lhs - t.rhs).abs()
        ),
    )
}

/// Largest gap between the analytic deficit gradient and central differences
/// of `P_r(x, a) − F_r(P_2(x, a))`.
fn gradient_gap(g: &Graph, r: usize) -> f64 {
    let h = 1e-6;
    let n = g.order();
    let grad = deficit_gradient(g, r).unwrap();
    let value = |x: &[f64], a: &clique_density::SymmetricWeights<f64>| {
        clique_polynomial(x, a, r) - clique_bound(r, &clique_polynomial(x, a, 2)).unwrap()
    };
    let x0 = g.vertex_weights().to_vec();
    let a0 = g.edge_weights().clone();
    let mut worst = 0.0f64;
    for i in 0..n {
        let (mut up, mut down) = (x0.clone(), x0.clone());
        up[i] += h;
        down[i] -= h;
        let fd = (value(&up, &a0) - value(&down, &a0)) / (2.0 * h);
        worst = worst.max((fd - grad.vertex[i]).abs());
        for j in i + 1..n {
            let (mut up, mut down) = (a0.clone(), a0.clone());
            up.set(i, j, a0.get(i, j) + h);
            down.set(i, j, a0.get(i, j) - h);
            let fd = (value(&x0, &up) - value(&x0, &down)) / (2.0 * h);
            worst = worst.max((fd - grad.edge.get(i, j)).abs());
        }
    }
    worst
}

fn optimizer() -> Verdict {
    let start = Instant::now();
    let options = OptimizeOptions::default();
    let mut ok = true;
    let mut worst_grad = 0.0f64;
    let mut worst_deficit = f64::NEG_INFINITY;
    let mut worst_residual = 0.0f64;
    let mut worst_m = 0.0f64;
    for (k, gamma) in [0.27f64, 0.30, 0.35].into_iter().enumerate() {
        let base = extremal_weighted(&gamma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10 + k as u64);
        for _ in 0..20 {
            let init = perturb_vertex_weights(&base, 0.01, &mut rng).unwrap();
            worst_grad = worst_grad.max(gradient_gap(&init, 3));
            let run = minimize_deficit(&init, 3, &options).unwrap();
            worst_deficit = worst_deficit.max(run.deficit);
            match stationarity_report(&run.graph, 3) {
                Ok(report) => {
                    worst_residual = worst_residual.max(report.max_residual());
                    match report.m_stat {
                        Some(m) => worst_m = worst_m.max((m - 1.0).abs()),
                        None => ok = false,
                    }
                }
                Err(_) => ok = false,
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= worst_grad <= 1e-6
        && worst_deficit <= 1e-7
        && worst_residual <= 1e-5
        && worst_m <= 1e-3
        && within(elapsed, Duration::from_secs(300));
    verdict(
        ok,
        format!(
            "60 runs: max gradient gap {worst_grad:.3e}, max deficit {worst_deficit:.3e}, max residual {worst_residual:.3e}, max |M − 1| {worst_m:.3e} in {elapsed:?}"
        ),
    )
}

fn main() -> ExitCode {
    rayon::ThreadPoolBuilder::new().num_threads(8).build_global().expect("thread pool");
    let criteria: [Criterion; 10] = [
        ("exact bound values", bound_values),
        ("product bound dominance and breakpoint equality", ls_dominance),
        ("local inequalities, exhaustive", local_exhaustive),
        ("second-step identity", second_step),
        ("Cauchy–Schwarz chain", cauchy_chain),
        ("oracle against the bound", oracle_vs_bound),
        ("extremal equality", extremal_equality),
        ("blow-up error", blowup_error),
        ("analytic claims", analytic_claims),
        ("optimizer", optimizer),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        failed += usize::from(!v.ok);
        println!("{} criterion {:>2} {name}: {}", if v.ok { "PASS" } else { "FAIL" }, k + 1, v.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
