use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;

use clique_density::analytic::{make_params, verify_analytic_claims};
use clique_density::bounds::{
    clique_bound, clique_bound_derivative, clique_bound_inverse, decompose_density, ls_bound, DensityDecomposition,
};
use clique_density::extremal::{blowup, extremal_weighted};
use clique_density::format::sig;
use clique_density::graph::identities::{cauchy_chain_check, second_step_identity};
use clique_density::graph::io as wg;
use clique_density::graph::local::{check_local_inequalities, LocalMode};
use clique_density::optimize::{
    conditional_chain_check, minimize_deficit, perturb_vertex_weights, stationarity_report, OptimizeOptions,
    PerVertexCheck, StationarityReport,
};
use clique_density::oracle::{min_cliques, sweep, sweep_csv};
use clique_density::scalar::parse_rational;
use clique_density::{CheckOutcome, Error, Graph, Rational, SimpleGraph, SymmetricWeights, VerificationReport};

const EXIT_VIOLATION: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(name = "clique-density", version, about = "Clique densities of weighted graphs and the F_r lower bound")]
struct Cli {
    /// Worker threads for parallel checks (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F_r(γ) and its (s, α) decomposition.
    Bound {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        gamma: String,
        /// Exact rational arithmetic; γ may be given as p/q.
        #[arg(long)]
        exact: bool,
    },
    /// Solve F_r(γ) = y for γ.
    BoundInverse {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        y: f64,
    },
    /// The product bound (1/r!)·∏(2iγ − (i−1)) next to F_r(γ).
    LsBound {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        gamma: f64,
    },
    /// Clique densities G(K_0..K_max) of a weighted graph file.
    Eval {
        #[command(flatten)]
        input: GraphInput,
        /// Largest clique order (default: the graph order).
        #[arg(long)]
        max_rho: Option<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// G(K_r) − F_r(G(K_2)) of a weighted graph file.
    Deficit {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        r: usize,
        /// Deficits below minus this value count as a violation.
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Local inequalities and exact identities behind the bound.
    CheckIdentities {
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive01)]
        mode: Mode,
        /// Samples for random_fractional mode.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Check the identities on this weighted graph instead.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Identity residuals above this times n³ count as violations.
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Grid verification of the shape properties of H, ν, Q, J and T.
    VerifyAnalytic {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        m: f64,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// The extremal weighted graph for γ, or its blow-up to a simple graph.
    Extremal {
        #[arg(long)]
        gamma: String,
        /// Blow up to a simple graph on N vertices.
        #[arg(long)]
        blowup: Option<usize>,
        #[arg(long)]
        exact: bool,
    },
    /// Count r-cliques in a simple graph file (`sg 1` format).
    Count {
        #[arg(long)]
        r: usize,
        #[arg(long = "in", default_value = "-")]
        input: PathBuf,
    },
    /// Exact minimum of #K_r over graphs with n vertices and m edges (n ≤ 8).
    Oracle {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
    },
    /// The oracle for every m, compared with F_r(m/n²)·n^r (n ≤ 7).
    OracleSweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Minimise the deficit by projected gradient descent.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Start from this weighted graph.
        #[arg(long, conflicts_with = "gamma")]
        init: Option<PathBuf>,
        /// Start from the perturbed extremal graph for γ (padded to order n).
        #[arg(long)]
        gamma: Option<f64>,
        /// Amplitude of the vertex-weight perturbation used with --gamma.
        #[arg(long, default_value_t = 0.01)]
        perturb: f64,
        #[arg(long, default_value_t = 50_000)]
        steps: usize,
        #[arg(long, default_value_t = 0.1)]
        step_size: f64,
        /// Write the (step, gamma, deficit) trace here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the final weighted graph here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lagrange multipliers, residuals and derived checks at a weighted graph.
    Stationarity {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        r: usize,
        /// Per-vertex table.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GraphInput {
    /// Weighted graph file (`wg 1` format); `-` reads standard input.
    #[arg(long = "in", default_value = "-")]
    input: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    #[value(name = "exhaustive01")]
    Exhaustive01,
    #[value(name = "random_fractional")]
    RandomFractional,
}

/// Failure of a subcommand, carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Limit(_) => EXIT_LIMIT,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: EXIT_INPUT, message: e.to_string() }
    }
}

type Outcome = Result<bool, Failure>;

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(wg::parse(&read_input(path)?)?)
}

/// Writes `text` to `path`, or to standard output when no path is given.
fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| input_error(format!("{}: {e}", p.display()))),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn kv(key: &str, value: impl std::fmt::Display) {
    println!("{key} = {value}");
}

fn print_decomposition<T: clique_density::Scalar>(d: &DensityDecomposition<T>, show: impl Fn(&T) -> String) {
    kv("s", d.s);
    kv("alpha", show(&d.alpha));
    if let Some((t, beta)) = &d.alias {
        kv("alias", format!("(s = {t}, alpha = {})", show(beta)));
    }
}

fn report_failures(report: &VerificationReport) {
    for f in report.failures() {
        eprintln!(
            "violation: {} on {}: worst slack {} at {}",
            f.claim,
            f.scope,
            sig(f.worst_slack),
            f.witness.as_deref().unwrap_or("?")
        );
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Bound { r, gamma, exact } => {
            if exact {
                let g = parse_rational(&gamma).ok_or_else(|| input_error(format!("invalid rational `{gamma}`")))?;
                let d = decompose_density(&g)?;
                let f = clique_bound(r, &g)?;
                kv("gamma", &g);
                print_decomposition(&d, |v: &Rational| v.to_string());
                kv("bound", &f);
                kv("bound_decimal", sig(clique_density::Scalar::to_f64_lossy(&f)));
            } else {
                let g: f64 = gamma.parse().map_err(|_| input_error(format!("invalid number `{gamma}`")))?;
                let d = decompose_density(&g)?;
                kv("gamma", sig(g));
                print_decomposition(&d, |v: &f64| sig(*v));
                kv("bound", sig(clique_bound(r, &g)?));
                match clique_bound_derivative(r, &g) {
                    Ok(v) => kv("derivative", sig(v)),
                    Err(Error::Breakpoint { .. }) => kv("derivative", "undefined (breakpoint)"),
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(true)
        }
        Command::BoundInverse { r, y } => {
            let g = clique_bound_inverse(r, y)?;
            kv("gamma", sig(g));
            kv("check", sig(clique_bound(r, &g)?));
            Ok(true)
        }
        Command::LsBound { r, gamma } => {
            let ls = ls_bound(r, &gamma)?;
            let f = clique_bound(r, &gamma)?;
            kv("ls_bound", sig(ls));
            kv("bound", sig(f));
            kv("gap", sig(f - ls));
            Ok(ls <= f + 1e-12)
        }
        Command::Eval { input, max_rho, csv } => {
            let g = read_graph(&input.input)?;
            let max = max_rho.unwrap_or(g.order());
            let mut out = String::from("rho,density\n");
            for (rho, v) in g.clique_profile(max).iter().enumerate() {
                out.push_str(&format!("{rho},{}\n", sig(*v)));
            }
            emit(csv.as_deref(), &out)?;
            Ok(true)
        }
        Command::Deficit { input, r, tolerance } => {
            let g = read_graph(&input.input)?;
            let profile = g.clique_profile(r.max(2));
            let gamma = profile[2];
            let d = g.deficit(r)?;
            kv("gamma", sig(gamma));
            kv("clique_density", sig(profile[r]));
            kv("bound", sig(clique_bound(r, &gamma)?));
            kv("deficit", sig(d));
            if d < -tolerance {
                eprintln!("violation: deficit {} is below -{}", sig(d), sig(tolerance));
                return Ok(false);
            }
            Ok(true)
        }
        Command::CheckIdentities { r, mode, samples, input, tolerance, csv } => {
            let report = match input {
                Some(path) => graph_identities(&[read_graph(&path)?], r, tolerance, "input graph")?,
                None => {
                    let mut report = match mode {
                        Mode::Exhaustive01 => check_local_inequalities(r, LocalMode::Exhaustive01)?,
                        Mode::RandomFractional => {
                            check_local_inequalities(r, LocalMode::RandomFractional { samples, seed: cli.seed })?
                        }
                    };
                    if let Mode::RandomFractional = mode {
                        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
                        let graphs: Vec<Graph> = (0..samples).map(|k| Graph::random(3 + k % 6, &mut rng)).collect();
                        report.extend(graph_identities(&graphs, r, tolerance, "random graphs of order 3-8")?);
                    }
                    report
                }
            };
            emit(csv.as_deref(), &report.to_csv())?;
            report_failures(&report);
            Ok(report.passed())
        }
        Command::VerifyAnalytic { r, s, m, grid, csv } => {
            if grid < 3 {
                return Err(input_error("--grid must be at least 3"));
            }
            let params = make_params(r, s, m)?;
            let report = verify_analytic_claims(&params, grid);
            emit(csv.as_deref(), &report.to_csv())?;
            report_failures(&report);
            Ok(report.passed())
        }
        Command::Extremal { gamma, blowup: size, exact } => {
            let text = if exact {
                let g = parse_rational(&gamma).ok_or_else(|| input_error(format!("invalid rational `{gamma}`")))?;
                let e = extremal_weighted(&g)?;
                match size {
                    Some(n) => blowup(&e, n)?.graph.to_text(),
                    None => wg::to_text(&e),
                }
            } else {
                let g: f64 = gamma.parse().map_err(|_| input_error(format!("invalid number `{gamma}`")))?;
                let e = extremal_weighted(&g)?;
                match size {
                    Some(n) => {
                        let b = blowup(&e, n)?;
                        eprintln!("class sizes: {:?}", b.class_sizes);
                        b.graph.to_text()
                    }
                    None => wg::to_text(&e),
                }
            };
            emit(None, &text)?;
            Ok(true)
        }
        Command::Count { r, input } => {
            if r == 0 {
                return Err(input_error("--r must be at least 1"));
            }
            let g = SimpleGraph::parse(&read_input(&input)?)?;
            println!("{}", g.count_cliques(r));
            Ok(true)
        }
        Command::Oracle { n, m, r } => {
            let res = min_cliques(n, m, r)?;
            let gamma = m as f64 / (n * n) as f64;
            let bound = if r == 1 { n as f64 } else { clique_bound(r, &gamma)? * (n as f64).powi(r as i32) };
            let slack = res.minimum as f64 - bound;
            kv("minimum", res.minimum);
            kv("bound", sig(bound));
            kv("slack", sig(slack));
            println!("witness:");
            print!("{}", res.witness.to_text());
            Ok(slack >= -1e-9)
        }
        Command::OracleSweep { n, r, csv } => {
            let rows = sweep(n, r)?;
            emit(csv.as_deref(), &sweep_csv(&rows))?;
            let bad: Vec<_> = rows.iter().filter(|row| row.slack < -1e-9).collect();
            for row in &bad {
                eprintln!("violation: m = {} minimum {} below bound {}", row.m, row.minimum, sig(row.bound));
            }
            Ok(bad.is_empty())
        }
        Command::Optimize { n, r, init, gamma, perturb, steps, step_size, csv, out } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
            let start = match (init, gamma) {
                (Some(path), _) => {
                    let g = read_graph(&path)?;
                    if g.order() != n {
                        return Err(input_error(format!("--n {n} does not match the order {} of the file", g.order())));
                    }
                    g
                }
                (None, Some(gamma)) => {
                    let e = pad(&extremal_weighted(&gamma)?, n)?;
                    perturb_vertex_weights(&e, perturb, &mut rng)?
                }
                (None, None) => Graph::random(n, &mut rng),
            };
            let options = OptimizeOptions { steps, step_size, record_trace: csv.is_some() };
            let res = minimize_deficit(&start, r, &options)?;
            if let Some(path) = csv.as_deref() {
                let mut text = String::from("step,gamma,deficit\n");
                for row in &res.trace {
                    text.push_str(&format!("{},{},{}\n", row.step, sig(row.gamma), sig(row.deficit)));
                }
                emit(Some(path), &text)?;
            }
            if let Some(path) = out.as_deref() {
                emit(Some(path), &wg::to_text(&res.graph))?;
            }
            kv("iterations", res.iterations);
            kv("gamma", sig(res.graph.edge_density()));
            kv("deficit", sig(res.deficit));
            kv("min_visited_deficit", sig(res.min_visited_deficit));
            match &res.report {
                Ok(rep) => print_report_summary(rep),
                Err(e) => kv("stationarity", format!("unavailable ({e})")),
            }
            if res.min_visited_deficit < -1e-9 {
                eprintln!("violation: a visited graph has deficit {}", sig(res.min_visited_deficit));
                return Ok(false);
            }
            Ok(true)
        }
        Command::Stationarity { input, r, csv } => {
            let g = read_graph(&input.input)?;
            let rep = stationarity_report(&g, r)?;
            print_report_summary(&rep);
            if let Some(path) = csv.as_deref() {
                let mut text = String::from("vertex,x,eta,residual\n");
                for i in 0..g.order() {
                    text.push_str(&format!(
                        "{},{},{},{}\n",
                        i + 1,
                        sig(*g.x(i)),
                        sig(rep.eta[i]),
                        sig(rep.vertex_residuals[i])
                    ));
                }
                emit(Some(path), &text)?;
            }
            match conditional_chain_check(&g, r, &rep) {
                Ok(chain) => {
                    kv("chain_lhs", sig(chain.lhs));
                    kv("chain_rhs", sig(chain.rhs));
                    kv("chain_ok", chain.ok);
                    match &chain.per_vertex {
                        PerVertexCheck::Checked { theta, bounds } => {
                            kv("theta", sig(*theta));
                            for b in bounds {
                                println!(
                                    "vertex {}: lhs = {} rhs = {} ok = {}",
                                    b.vertex + 1,
                                    sig(b.lhs),
                                    sig(b.rhs),
                                    b.ok
                                );
                            }
                        }
                        PerVertexCheck::Skipped(reason) => kv("per_vertex", format!("skipped ({reason})")),
                    }
                    Ok(chain.all_ok())
                }
                Err(Error::NotStationary(msg)) => {
                    kv("chain", format!("not checked ({msg})"));
                    Ok(true)
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn print_report_summary(rep: &StationarityReport<f64>) {
    kv("s", rep.s);
    kv("alpha", sig(rep.alpha));
    kv("lambda", sig(rep.lambda));
    kv("mu", sig(rep.mu));
    kv("m_stat", rep.m_stat.map_or("undefined".to_string(), sig));
    kv("max_vertex_residual", sig(rep.max_vertex_residual()));
    kv("max_edge_residual", sig(rep.max_edge_residual()));
    kv("eta_mean_check", sig(rep.eta_mean_check));
    let eta: Vec<String> = rep.eta.iter().map(|v| sig(*v)).collect();
    kv("eta", eta.join(" "));
}

/// Appends zero-weight vertices joined to everything, up to order `n`.
fn pad(g: &Graph, n: usize) -> Result<Graph, Failure> {
    let k = g.order();
    if n < k {
        return Err(input_error(format!("--n {n} is below the order {k} of the extremal graph")));
    }
    let mut x = g.vertex_weights().to_vec();
    x.resize(n, 0.0);
    let a = SymmetricWeights::from_fn(n, |i, j| if i < k && j < k { *g.a(i, j) } else { 1.0 });
    Ok(Graph::new(x, a)?)
}

/// Exact identities on each graph: the second-step identity and the
/// Cauchy–Schwarz chain with its two facet sums.
fn graph_identities(graphs: &[Graph], r: usize, tolerance: f64, scope: &str) -> Result<VerificationReport, Failure> {
    if r < 2 {
        return Err(input_error("--r must be at least 2"));
    }
    let mut identity = CheckOutcome::new("second-step-identity", scope);
    let mut chain = CheckOutcome::new("cauchy-chain", scope);
    let mut sums = CheckOutcome::new("facet-sums", scope);
    for (k, g) in graphs.iter().enumerate() {
        let n = g.order() as f64;
        let limit = tolerance * n * n * n;
        let id = second_step_identity(g);
        identity.record(limit - id.residual, id.residual <= limit, || format!("graph {k}: residual {}", sig(id.residual)));
        let c = cauchy_chain_check(g, r)?;
        chain.record(c.rhs - c.lhs, c.ok, || format!("graph {k}: lhs {} rhs {}", sig(c.lhs), sig(c.rhs)));
        let worst = c.facet_residual.max(c.base_residual);
        sums.record(tolerance - worst, worst <= tolerance, || format!("graph {k}: residual {}", sig(worst)));
    }
    Ok(VerificationReport { checks: vec![identity, chain, sums] })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.workers {
        if k == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(EXIT_INPUT);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VIOLATION),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
