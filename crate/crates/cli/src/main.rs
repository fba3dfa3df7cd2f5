use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use treecenter::bench::{bench_suite, render_table, BenchRow};
use treecenter::feasibility::{Feasibility, SearchStrategy};
use treecenter::gen::{generate, Shape};
use treecenter::numeric::{parse_rational, ratio_to_f64};
use treecenter::optimizer::{feasibility_json, rational_json, render_json, solution_json, solve_candidate, solve_parametric, Instance, Solution};
use treecenter::oracle::{exhaustive_solve, OracleSolution};
use treecenter::tree::{parse_document, render_tree, validate};
use treecenter::{Exact, Scalar, TreeNetwork};

#[derive(Parser)]
#[command(name = "treecenter", version, about = "Weighted p-center placement on trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal cost and a placement achieving it.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p: u64,
        #[arg(long, value_enum, default_value_t = Algorithm::Candidate)]
        algorithm: Algorithm,
    },
    /// Can `p` centers serve every vertex at cost at most `alpha`?
    Feasible {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p: u64,
        /// Decimal or `num/den`.
        #[arg(long)]
        alpha: String,
    },
    /// Print a seeded random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Complete binary tree instead of a random recursive tree.
        #[arg(long)]
        balanced: bool,
    },
    /// Timing table over generated instances.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [1000, 10000, 100000])]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [4])]
        p: Vec<usize>,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        seeds: u64,
        #[arg(long)]
        balanced: bool,
        #[arg(long, value_enum, default_value_t = TreePath::Balanced)]
        tree_path: TreePath,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        output: Output,
    },
    /// Check an instance document and list every problem found.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(clap::Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = TreePath::Balanced)]
    tree_path: TreePath,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Output::Json)]
    output: Output,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Candidate,
    Parametric,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TreePath {
    Balanced,
    Std,
}

impl TreePath {
    fn strategy(self) -> SearchStrategy {
        match self {
            TreePath::Balanced => SearchStrategy::Cascade,
            TreePath::Std => SearchStrategy::Spine,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

enum Failure {
    Usage(String),
    Invalid(String),
}

/// Result of a command: what to print and whether it counts as success.
struct Report {
    text: String,
    ok: bool,
}

fn usage_error(msg: String) -> Failure {
    Failure::Usage(format!("error: {msg}\n\n{}", Cli::command().render_usage()))
}

fn load(path: &PathBuf) -> Result<TreeNetwork, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage_error(format!("cannot read {}: {e}", path.display())))?;
    let net = parse_document(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    let report = validate(&net);
    if !report.is_empty() {
        return Err(Failure::Invalid(format!("{}: {report}", path.display())));
    }
    Ok(net)
}

fn solve_text<S: Scalar>(inst: &Instance<S>, sol: &Solution<S>) -> String {
    let alpha = sol.alpha_star.to_rational();
    let mut out = format!("alpha* = {alpha} ({})\n", ratio_to_f64(&alpha));
    for p in sol.placement.points() {
        let (c, par, off) = inst.tree().to_input_edge(p);
        let labels = &inst.network.labels;
        out.push_str(&format!("center on edge {} {} at {} from {}\n", labels[c.0], labels[par.0], off.to_rational(), labels[c.0]));
    }
    out.push_str(&format!("feasibility calls {}, candidates {}", sol.feasibility_calls, sol.candidates));
    out
}

fn solve<S: Scalar>(net: TreeNetwork, common: &Common, p: usize, algorithm: Algorithm) -> Result<Report, Failure> {
    let inst = Instance::<S>::new(net, common.tree_path.strategy()).map_err(|e| Failure::Invalid(e.to_string()))?;
    let sol = match algorithm {
        Algorithm::Candidate => solve_candidate(&inst, p),
        Algorithm::Parametric => solve_parametric(&inst, p),
        Algorithm::Oracle => unreachable!("handled before preprocessing"),
    };
    let text = match common.output {
        Output::Json => render_json(&solution_json(&inst, &sol)),
        Output::Text => solve_text(&inst, &sol),
    };
    Ok(Report { text, ok: true })
}

fn oracle_report(net: &TreeNetwork, sol: &OracleSolution, output: Output) -> String {
    let labels = &net.labels;
    let centers: Vec<(u64, u64, Exact)> = sol
        .centers
        .iter()
        .map(|c| match c.parent {
            Some(par) => (labels[c.vertex], labels[par], c.offset.clone()),
            None => (labels[c.vertex], labels[c.vertex], c.offset.clone()),
        })
        .collect();
    match output {
        Output::Json => render_json(&json!({
            "alpha": rational_json(&sol.alpha_star),
            "alpha_float": ratio_to_f64(&sol.alpha_star),
            "centers": centers
                .iter()
                .map(|(c, par, off)| json!({"edge": [c, par], "offset_from_child": rational_json(off)}))
                .collect::<Vec<Value>>(),
            "stats": {"feasibility_calls": sol.greedy_calls, "candidates": sol.candidates},
        })),
        Output::Text => {
            let mut out = format!("alpha* = {} ({})\n", sol.alpha_star, ratio_to_f64(&sol.alpha_star));
            for (c, par, off) in &centers {
                out.push_str(&format!("center on edge {c} {par} at {off} from {c}\n"));
            }
            out.push_str(&format!("feasibility calls {}, candidates {}", sol.greedy_calls, sol.candidates));
            out
        }
    }
}

fn feasible<S: Scalar>(net: TreeNetwork, common: &Common, p: usize, alpha: &Exact) -> Result<Report, Failure> {
    let inst = Instance::<S>::new(net, common.tree_path.strategy()).map_err(|e| Failure::Invalid(e.to_string()))?;
    let result = inst.test(&S::from_rational(alpha), p);
    let ok = result.is_feasible();
    let text = match common.output {
        Output::Json => render_json(&feasibility_json(&inst, &result)),
        Output::Text => match &result {
            Feasibility::Feasible(pl) => format!("feasible with {} centers", pl.len()),
            Feasibility::Infeasible => "infeasible".to_string(),
        },
    };
    Ok(Report { text, ok })
}

fn bench_json(rows: &[BenchRow]) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "p": r.p,
                "preprocessing_ms": r.preprocessing_ms,
                "feasibility_ms": r.feasibility_ms,
                "solve_ms": r.solve_ms,
                "feasibility_calls": r.feasibility_calls,
                "parametric_calls": r.parametric_calls,
                "visited": r.visited,
            })
        })
        .collect();
    render_json(&Value::Array(rows))
}

fn run(cli: Cli) -> Result<Report, Failure> {
    match cli.command {
        Command::Solve { common, p, algorithm } => {
            let net = load(&common.input)?;
            let p = p as usize;
            if algorithm == Algorithm::Oracle {
                let sol = exhaustive_solve(&net, p).map_err(|e| Failure::Invalid(e.to_string()))?;
                return Ok(Report { text: oracle_report(&net, &sol, common.output), ok: true });
            }
            match common.mode {
                Mode::Exact => solve::<Exact>(net, &common, p, algorithm),
                Mode::Float => solve::<f64>(net, &common, p, algorithm),
            }
        }
        Command::Feasible { common, p, alpha } => {
            let alpha = parse_rational(&alpha).ok_or_else(|| usage_error(format!("invalid value '{alpha}' for '--alpha'")))?;
            let net = load(&common.input)?;
            match common.mode {
                Mode::Exact => feasible::<Exact>(net, &common, p as usize, &alpha),
                Mode::Float => feasible::<f64>(net, &common, p as usize, &alpha),
            }
        }
        Command::Gen { n, seed, balanced } => {
            if n == 0 {
                return Err(usage_error("'--n' must be at least 1".to_string()));
            }
            let shape = if balanced { Shape::CompleteBinary } else { Shape::RandomRecursive };
            let text = render_tree(&generate(n, seed, shape));
            Ok(Report { text: text.trim_end().to_string(), ok: true })
        }
        Command::Bench { n, p, seeds, balanced, tree_path, mode, output } => {
            if n.contains(&0) || p.contains(&0) {
                return Err(usage_error("sizes and p must be positive".to_string()));
            }
            let sizes: Vec<(usize, usize)> = n.iter().flat_map(|&n| p.iter().map(move |&p| (n, p))).collect();
            let shape = if balanced { Shape::CompleteBinary } else { Shape::RandomRecursive };
            let rows = match mode {
                Mode::Exact => bench_suite::<Exact>(&sizes, seeds, shape, tree_path.strategy()),
                Mode::Float => bench_suite::<f64>(&sizes, seeds, shape, tree_path.strategy()),
            };
            let text = match output {
                Output::Json => bench_json(&rows),
                Output::Text => render_table(&rows).trim_end().to_string(),
            };
            Ok(Report { text, ok: true })
        }
        Command::Validate { input } => {
            let text = std::fs::read_to_string(&input).map_err(|e| usage_error(format!("cannot read {}: {e}", input.display())))?;
            let net = parse_document(&text).map_err(|e| Failure::Invalid(e.to_string()))?;
            let report = validate(&net);
            if report.is_empty() {
                Ok(Report { text: format!("ok: {} vertices, {} edges", net.len(), net.edges.len()), ok: true })
            } else {
                Ok(Report { text: report.to_string(), ok: false })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(report) => {
            println!("{}", report.text);
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
