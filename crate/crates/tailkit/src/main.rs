//! Command-line front end: parse a problem description, run the analysis and
//! verification modules, and emit a deterministic JSON or CSV report.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use rayon::prelude::*;

use tailkit::bounds::{self, BoundEnvelope};
use tailkit::error::{Error, Result};
use tailkit::hypergraph::{self, Hypergraph, DEFAULT_EXACT_TAIL_GUARD};
use tailkit::linsys::{standard_system, LinearSystem, StandardSystem};
use tailkit::report::{csv_line, log_probability_pair, probability_pair, Json};
use tailkit::rooted::{alpha_star, Graph, RootedGraph};
use tailkit::sim::{
    envelope_check, exact_tail_rooted_with_guard, monte_carlo_tail, sample_gnp, TailEstimate,
    Truth, Verdict, DEFAULT_EXACT_ROOTED_GUARD,
};

#[derive(Parser, Debug)]
#[command(name = "tailkit", version, about = "Upper-tail bounds for substructure counts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze a k-uniform hypergraph given as a file.
    Hyper(HyperArgs),
    /// Analyze the solution hypergraph of a linear system given as a file.
    Linsys(LinsysArgs),
    /// Analyze k-term arithmetic progressions in [N].
    Ap(ApArgs),
    /// Analyze Schur triples x + y = z in [N].
    Schur(SchurArgs),
    /// Analyze rooted subgraph counts in G(n, p).
    Rooted(RootedArgs),
    /// Sweep p over a grid and emit one record per point.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
struct VerifyArgs {
    /// Inclusion probability, strictly between 0 and 1.
    #[arg(long)]
    p: f64,
    /// Tail multiplier t > 1 (threshold is t times the mean).
    #[arg(long)]
    t: f64,
    /// Monte Carlo trials; 0 disables the empirical estimate.
    #[arg(long, default_value_t = 0)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on the moment order in the Markov optimization.
    #[arg(long)]
    m_max: Option<u64>,
    /// Compute the exact tail by full enumeration (guarded by instance size).
    #[arg(long)]
    exact: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct HyperArgs {
    /// Hypergraph file: header "N k", then one edge per line.
    #[arg(long)]
    file: PathBuf,
    /// Exponent parameter q for the tail scales; defaults to k.
    #[arg(long)]
    q: Option<f64>,
    #[command(flatten)]
    verify: VerifyArgs,
}

#[derive(Args, Debug)]
struct LinsysArgs {
    /// Matrix file: header "l k", then l rows of k integers.
    #[arg(long)]
    matrix: PathBuf,
    /// Ground-set size N.
    #[arg(long = "N")]
    n: u32,
    #[command(flatten)]
    verify: VerifyArgs,
}

#[derive(Args, Debug)]
struct ApArgs {
    /// Progression length k >= 3.
    #[arg(long)]
    k: usize,
    /// Ground-set size N.
    #[arg(long = "N")]
    n: u32,
    #[command(flatten)]
    verify: VerifyArgs,
}

#[derive(Args, Debug)]
struct SchurArgs {
    /// Ground-set size N.
    #[arg(long = "N")]
    n: u32,
    #[command(flatten)]
    verify: VerifyArgs,
}

#[derive(Args, Debug)]
struct RootedArgs {
    /// Graph file: first line "n", then one edge "u v" per line (1-indexed).
    #[arg(long)]
    graph: PathBuf,
    /// Root vertices, 1-indexed, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    roots: Vec<usize>,
    /// Host graph order.
    #[arg(long)]
    n: u64,
    #[command(flatten)]
    verify: VerifyArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Which analysis to sweep.
    #[arg(long, value_enum)]
    command: SweepTarget,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "N")]
    big_n: Option<u32>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    roots: Vec<usize>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    p_min: f64,
    #[arg(long)]
    p_max: f64,
    /// Number of grid points, at least 2.
    #[arg(long)]
    steps: usize,
    /// Linearly spaced grid instead of the default log spacing.
    #[arg(long)]
    linear: bool,
    #[arg(long)]
    t: f64,
    #[arg(long)]
    m_max: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SweepTarget {
    Ap,
    Schur,
    Rooted,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(err) => {
            eprintln!("error: {}", err);
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Hyper(args) => {
            let h = Hypergraph::from_file(&args.file)?;
            let q = args.q.unwrap_or(h.uniformity() as f64);
            let mut inputs = Json::object();
            inputs.push("command", Json::Str("hyper".into()));
            inputs.push("file", Json::Str(args.file.display().to_string()));
            echo_verify(&mut inputs, &args.verify);
            run_hypergraph(&h, q, None, inputs, &args.verify)
        }
        Command::Linsys(args) => {
            let sys = LinearSystem::from_file(&args.matrix)?;
            let mut inputs = Json::object();
            inputs.push("command", Json::Str("linsys".into()));
            inputs.push("matrix", Json::Str(args.matrix.display().to_string()));
            inputs.push("N", Json::UInt(args.n as u128));
            echo_verify(&mut inputs, &args.verify);
            run_linear_system(&sys, args.n, inputs, &args.verify)
        }
        Command::Ap(args) => {
            let sys = standard_system(StandardSystem::Ap, args.k)?;
            let mut inputs = Json::object();
            inputs.push("command", Json::Str("ap".into()));
            inputs.push("k", Json::UInt(args.k as u128));
            inputs.push("N", Json::UInt(args.n as u128));
            echo_verify(&mut inputs, &args.verify);
            run_linear_system(&sys, args.n, inputs, &args.verify)
        }
        Command::Schur(args) => {
            let sys = standard_system(StandardSystem::Schur, 3)?;
            let mut inputs = Json::object();
            inputs.push("command", Json::Str("schur".into()));
            inputs.push("N", Json::UInt(args.n as u128));
            echo_verify(&mut inputs, &args.verify);
            run_linear_system(&sys, args.n, inputs, &args.verify)
        }
        Command::Rooted(args) => run_rooted(&args),
        Command::Sweep(args) => run_sweep(&args),
    }
}

fn echo_verify(inputs: &mut Json, v: &VerifyArgs) {
    inputs.push("p", Json::Float(v.p));
    inputs.push("t", Json::Float(v.t));
    inputs.push("trials", Json::UInt(v.trials as u128));
    inputs.push("seed", Json::UInt(v.seed as u128));
    inputs.push(
        "m_max",
        match v.m_max {
            Some(m) => Json::UInt(m as u128),
            None => Json::Null,
        },
    );
    inputs.push("exact", Json::Bool(v.exact));
}

fn check_open_unit(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Argument(format!(
            "p = {} must lie strictly in (0, 1)",
            p
        )));
    }
    Ok(())
}

fn guard_override() -> bool {
    std::env::var("TAILKIT_GUARD_OVERRIDE").map(|v| v == "1").unwrap_or(false)
}

fn run_linear_system(
    sys: &LinearSystem,
    n: u32,
    inputs: Json,
    v: &VerifyArgs,
) -> Result<bool> {
    let h = sys.solution_hypergraph(n)?;
    let q = sys.free_dim() as f64;
    let prefix = match sys.prefix_certificate(n, v.p, v.t) {
        Ok(cert) => Some(cert),
        Err(Error::Infeasible(_)) => None,
        Err(e) => return Err(e),
    };
    run_hypergraph(&h, q, Some(prefix), inputs, v)
}

/// `prefix`: Some(cert option) replaces the greedy certificate search with a
/// linsys prefix certificate (or, for Some(None), with no certificate at all).
fn run_hypergraph(
    h: &Hypergraph,
    q: f64,
    prefix: Option<Option<Vec<u32>>>,
    inputs: Json,
    v: &VerifyArgs,
) -> Result<bool> {
    check_open_unit(v.p)?;
    let budget = h.ground_size() as usize;
    let mut env = bounds::envelope(h, v.p, v.t, q, v.m_max, budget)?;
    if let Some(cert) = prefix {
        env.lower_log_prob = match &cert {
            Some(set) => Some(bounds::certificate_tail_lower(h, set, v.p, v.t)?),
            None => None,
        };
        env.certificate = cert;
    }
    let threshold = v.t * env.mu;

    let exact = if v.exact {
        let guard = if guard_override() { u32::MAX } else { DEFAULT_EXACT_TAIL_GUARD };
        Some(h.exact_tail_with_guard(v.p, threshold, guard)?)
    } else {
        None
    };
    let empirical = if v.trials > 0 {
        let (n, p, seed) = (h.ground_size(), v.p, v.seed);
        let model = move |i: u64| {
            let sample = hypergraph::sample_subset(n, p, seed, i).expect("validated p");
            h.induced_count(&sample.members).expect("sampled members are in range") as f64
        };
        Some(monte_carlo_tail(model, threshold, v.trials, v.seed)?)
    } else {
        None
    };
    let verdict = judge(&env, &exact, &empirical);

    let mut counts = Json::object();
    counts.push("edges", Json::UInt(h.edge_count() as u128));
    counts.push("mu", Json::Float(env.mu));
    let delta: Vec<Json> = (1..=h.uniformity())
        .map(|j| h.degree_bound(j).map(|d| Json::UInt(d as u128)))
        .collect::<Result<_>>()?;
    counts.push("delta", Json::Array(delta));

    let doc = assemble(inputs, counts, Json::Null, bounds_json(&env), &empirical, &exact, &verdict);
    print_report(&doc, v.format)?;
    Ok(verdict.as_ref().map(|v| v.pass).unwrap_or(true))
}

fn run_rooted(args: &RootedArgs) -> Result<bool> {
    let v = &args.verify;
    check_open_unit(v.p)?;
    let graph = Graph::from_file(&args.graph)?;
    let rg = RootedGraph::from_roots_1based(graph, &args.roots)?;
    let r = rg.root_count();
    let regime = rg.classify_regime(args.n, v.p, v.t)?;
    let threshold = v.t * regime.mu;

    let copies = rg.count_in(&Graph::complete(args.n as usize)?, r)?;
    let alpha = alpha_star(&rg.minus_roots());
    let m_r = rg.rooted_density()?;
    let g = match rg.extension_multiplicity(rg.vertex_count() as u64) {
        Ok(g) => Some(g),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };

    let lower_log_prob = rg
        .complete_prefix_certificate(args.n, v.p, v.t)?
        .map(|s| (s * (s - 1) / 2) as f64 * v.p.ln());
    let env = BoundEnvelope {
        mu: regime.mu,
        t: v.t,
        q: m_r.to_f64().expect("small rational"),
        lower_log_prob,
        upper_tail_bound: bounds::first_moment_upper(v.t)?,
        optimal_m: 1,
        lower_exponent_scale: regime.lower_exponent_scale,
        upper_exponent_scale: regime.upper_exponent_scale,
        condition_int: regime.mu >= 1.0,
        certificate: None,
    };

    let exact = if v.exact {
        let guard = if guard_override() { usize::MAX } else { DEFAULT_EXACT_ROOTED_GUARD };
        Some(exact_tail_rooted_with_guard(&rg, args.n as usize, v.p, threshold, guard)?)
    } else {
        None
    };
    let empirical = if v.trials > 0 {
        let (n, p, seed) = (args.n as usize, v.p, v.seed);
        let rg_ref = &rg;
        let model = move |i: u64| {
            let host = sample_gnp(n, p, seed, i).expect("validated p");
            rg_ref.count_in(&host, r).expect("count on sampled host") as f64
        };
        Some(monte_carlo_tail(model, threshold, v.trials, v.seed)?)
    } else {
        None
    };
    let verdict = judge(&env, &exact, &empirical);

    let mut inputs = Json::object();
    inputs.push("command", Json::Str("rooted".into()));
    inputs.push("graph", Json::Str(args.graph.display().to_string()));
    inputs.push(
        "roots",
        Json::Array(args.roots.iter().map(|&r| Json::UInt(r as u128)).collect()),
    );
    inputs.push("n", Json::UInt(args.n as u128));
    echo_verify(&mut inputs, v);

    let mut counts = Json::object();
    counts.push("rooted_copies", Json::UInt(copies));
    counts.push(
        "alpha_star",
        Json::Float(alpha.value.to_f64().expect("small rational")),
    );
    counts.push(
        "alpha_star_exact",
        Json::Str(format!("{}/{}", alpha.value.numer(), alpha.value.denom())),
    );
    counts.push("m_r", Json::Float(m_r.to_f64().expect("small rational")));
    counts.push("m_r_exact", Json::Str(format!("{}/{}", m_r.numer(), m_r.denom())));
    counts.push(
        "m_value",
        match regime.m_value {
            Some(m) => Json::Float(m),
            None => Json::Null,
        },
    );
    counts.push(
        "extension_multiplicity",
        match g {
            Some(g) => Json::UInt(g),
            None => Json::Null,
        },
    );

    let mut regime_json = Json::object();
    regime_json.push("regime", Json::Str(regime.regime.letter().into()));
    regime_json.push("threshold", Json::Float(regime.threshold));
    regime_json.push("p1", Json::Float(regime.p1));
    regime_json.push("p2", Json::Float(regime.p2));

    let doc = assemble(inputs, counts, regime_json, bounds_json(&env), &empirical, &exact, &verdict);
    print_report(&doc, v.format)?;
    Ok(verdict.as_ref().map(|v| v.pass).unwrap_or(true))
}

fn judge(
    env: &BoundEnvelope,
    exact: &Option<f64>,
    empirical: &Option<TailEstimate>,
) -> Option<Verdict> {
    if let Some(value) = exact {
        return Some(envelope_check(env, &Truth::Exact(*value)));
    }
    empirical
        .as_ref()
        .map(|est| envelope_check(env, &Truth::Estimate(est.clone())))
}

fn bounds_json(env: &BoundEnvelope) -> Json {
    let mut b = Json::object();
    match env.lower_log_prob {
        Some(log) => {
            let (log_field, prob_field) = log_probability_pair(log);
            b.push("lower_log_prob", log_field);
            b.push("lower_prob", prob_field);
        }
        None => {
            b.push("lower_log_prob", Json::Null);
            b.push("lower_prob", Json::Null);
        }
    }
    let (prob, log) = probability_pair(env.upper_tail_bound);
    b.push("upper_tail_bound", prob);
    b.push("upper_tail_bound_log", log);
    b.push("optimal_m", Json::UInt(env.optimal_m as u128));
    b.push("lower_exponent_scale", Json::Float(env.lower_exponent_scale));
    b.push("upper_exponent_scale", Json::Float(env.upper_exponent_scale));
    b.push("q", Json::Float(env.q));
    b.push("condition_int", Json::Bool(env.condition_int));
    b.push(
        "certificate",
        match &env.certificate {
            Some(set) => Json::Array(set.iter().map(|&v| Json::UInt(v as u128)).collect()),
            None => Json::Null,
        },
    );
    b
}

fn empirical_json(est: &TailEstimate) -> Json {
    let mut e = Json::object();
    e.push("hits", Json::UInt(est.hits as u128));
    e.push("trials", Json::UInt(est.trials as u128));
    let (prob, log) = probability_pair(est.estimate);
    e.push("estimate", prob);
    e.push("estimate_log", log);
    e.push("ci_low", Json::Float(est.ci_low));
    e.push("ci_high", Json::Float(est.ci_high));
    e.push("seed", Json::UInt(est.seed as u128));
    e
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    inputs: Json,
    counts: Json,
    regime: Json,
    bounds: Json,
    empirical: &Option<TailEstimate>,
    exact: &Option<f64>,
    verdict: &Option<Verdict>,
) -> Json {
    let mut doc = Json::object();
    doc.push("inputs", inputs);
    doc.push("counts", counts);
    doc.push("regime", regime);
    doc.push("bounds", bounds);
    doc.push(
        "empirical",
        match empirical {
            Some(est) => empirical_json(est),
            None => Json::Null,
        },
    );
    doc.push(
        "exact",
        match exact {
            Some(tail) => {
                let mut e = Json::object();
                let (prob, log) = probability_pair(*tail);
                e.push("tail", prob);
                e.push("tail_log", log);
                e
            }
            None => Json::Null,
        },
    );
    doc.push(
        "verdict",
        match verdict {
            Some(v) => {
                let mut obj = Json::object();
                obj.push("pass", Json::Bool(v.pass));
                obj.push("detail", Json::Str(v.detail.clone()));
                obj
            }
            None => Json::Null,
        },
    );
    doc
}

fn print_report(doc: &Json, format: Format) -> Result<()> {
    match format {
        Format::Json => print!("{}", doc.render()),
        Format::Csv => {
            // flatten the document into one header and one record
            let mut header = Vec::new();
            let mut record = Vec::new();
            flatten("", doc, &mut header, &mut record);
            println!("{}", header.join(","));
            println!("{}", csv_line(&record));
        }
    }
    Ok(())
}

fn flatten(prefix: &str, value: &Json, header: &mut Vec<String>, record: &mut Vec<Json>) {
    match value {
        Json::Object(entries) => {
            for (key, child) in entries {
                let name = if prefix.is_empty() {
                    key.clone()
                } else {
                    format!("{}.{}", prefix, key)
                };
                flatten(&name, child, header, record);
            }
        }
        Json::Array(items) => {
            let joined = items
                .iter()
                .map(|item| match item {
                    Json::Object(_) | Json::Array(_) => "?".to_string(),
                    other => tailkit::report::csv_cell(other),
                })
                .collect::<Vec<_>>()
                .join(";");
            header.push(prefix.to_string());
            record.push(Json::Str(joined));
        }
        other => {
            header.push(prefix.to_string());
            record.push(other.clone());
        }
    }
}

fn run_sweep(args: &SweepArgs) -> Result<bool> {
    if args.steps < 2 {
        return Err(Error::Argument("sweep needs steps >= 2".into()));
    }
    check_open_unit(args.p_min)?;
    check_open_unit(args.p_max)?;
    if args.p_min >= args.p_max {
        return Err(Error::Argument("p_min must be below p_max".into()));
    }
    if args.t <= 1.0 {
        return Err(Error::Argument(format!("t = {} must exceed 1", args.t)));
    }
    let grid: Vec<f64> = (0..args.steps)
        .map(|i| {
            let frac = i as f64 / (args.steps - 1) as f64;
            if args.linear {
                args.p_min + frac * (args.p_max - args.p_min)
            } else {
                (args.p_min.ln() + frac * (args.p_max.ln() - args.p_min.ln())).exp()
            }
        })
        .collect();

    let rows: Vec<Vec<Json>> = match args.command {
        SweepTarget::Ap | SweepTarget::Schur => {
            let k = match args.command {
                SweepTarget::Ap => args
                    .k
                    .ok_or_else(|| Error::Argument("sweep over ap needs --k".into()))?,
                _ => 3,
            };
            let n = args
                .big_n
                .ok_or_else(|| Error::Argument("hypergraph sweep needs --N".into()))?;
            let sys = match args.command {
                SweepTarget::Ap => standard_system(StandardSystem::Ap, k)?,
                _ => standard_system(StandardSystem::Schur, 3)?,
            };
            let h = sys.solution_hypergraph(n)?;
            let q = sys.free_dim() as f64;
            grid.par_iter()
                .map(|&p| hypergraph_sweep_row(&h, &sys, n, q, p, args.t, args.m_max))
                .collect::<Result<_>>()?
        }
        SweepTarget::Rooted => {
            let path = args
                .graph
                .as_ref()
                .ok_or_else(|| Error::Argument("rooted sweep needs --graph".into()))?;
            let n = args
                .n
                .ok_or_else(|| Error::Argument("rooted sweep needs --n".into()))?;
            let graph = Graph::from_file(path)?;
            let rg = RootedGraph::from_roots_1based(graph, &args.roots)?;
            grid.par_iter()
                .map(|&p| rooted_sweep_row(&rg, n, p, args.t))
                .collect::<Result<_>>()?
        }
    };

    match args.format {
        Format::Csv => {
            println!("p,regime,mu,m,lower_exponent_scale,upper_exponent_scale,lower_log_prob,upper_tail_bound");
            for row in &rows {
                println!("{}", csv_line(row));
            }
        }
        Format::Json => {
            let keys = [
                "p",
                "regime",
                "mu",
                "m",
                "lower_exponent_scale",
                "upper_exponent_scale",
                "lower_log_prob",
                "upper_tail_bound",
            ];
            let mut doc = Json::object();
            let records = rows
                .into_iter()
                .map(|row| {
                    let mut obj = Json::object();
                    for (key, cell) in keys.iter().zip(row) {
                        obj.push(key, cell);
                    }
                    obj
                })
                .collect();
            doc.push("rows", Json::Array(records));
            print!("{}", doc.render());
        }
    }
    Ok(true)
}

fn hypergraph_sweep_row(
    h: &Hypergraph,
    sys: &LinearSystem,
    n: u32,
    q: f64,
    p: f64,
    t: f64,
    m_max: Option<u64>,
) -> Result<Vec<Json>> {
    let mu = h.expected_count(p)?;
    let m_max = m_max.unwrap_or_else(|| bounds::default_m_max(mu, q));
    let (upper, _) = bounds::markov_tail_upper(h, p, t, m_max)?;
    let (lower_scale, upper_scale) = bounds::exponent_scales(mu, q, h.uniformity(), p)?;
    let lower = match sys.prefix_certificate(n, p, t) {
        Ok(cert) => Json::Float(cert.len() as f64 * p.ln()),
        Err(Error::Infeasible(_)) => Json::Null,
        Err(e) => return Err(e),
    };
    Ok(vec![
        Json::Float(p),
        Json::Str(String::new()),
        Json::Float(mu),
        Json::Null,
        Json::Float(lower_scale),
        Json::Float(upper_scale),
        lower,
        Json::Float(upper),
    ])
}

fn rooted_sweep_row(rg: &RootedGraph, n: u64, p: f64, t: f64) -> Result<Vec<Json>> {
    let regime = rg.classify_regime(n, p, t)?;
    let lower = rg
        .complete_prefix_certificate(n, p, t)?
        .map(|s| Json::Float((s * (s - 1) / 2) as f64 * p.ln()))
        .unwrap_or(Json::Null);
    Ok(vec![
        Json::Float(p),
        Json::Str(regime.regime.letter().into()),
        Json::Float(regime.mu),
        match regime.m_value {
            Some(m) => Json::Float(m),
            None => Json::Null,
        },
        Json::Float(regime.lower_exponent_scale),
        Json::Float(regime.upper_exponent_scale),
        lower,
        Json::Float(bounds::first_moment_upper(t)?),
    ])
}
