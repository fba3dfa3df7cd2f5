//! Scaling measurements on generated instances.

use std::time::Instant;

use crate::feasibility::{find_peripheral_centers, SearchStats, SearchStrategy};
use crate::gen::{generate, Shape};
use crate::numeric::Scalar;
use crate::optimizer::{solve_candidate, solve_parametric, Instance};

/// Above this size the candidate solver is skipped.
pub const CANDIDATE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub p: usize,
    pub preprocessing_ms: f64,
    /// One feasibility test at the optimum, after preprocessing.
    pub feasibility_ms: f64,
    pub solve_ms: f64,
    /// Calls made by the candidate solver; `None` when it was skipped.
    pub feasibility_calls: Option<usize>,
    pub parametric_calls: usize,
    /// Vertices visited by one feasibility test at the optimum.
    pub visited: usize,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite timings"));
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Medians over `seeds` generated instances for every `(n, p)`.
pub fn bench_suite<S: Scalar>(sizes: &[(usize, usize)], seeds: u64, shape: Shape, strategy: SearchStrategy) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &(n, p) in sizes {
        let mut samples: Vec<[f64; 6]> = Vec::new();
        let mut calls = Vec::new();
        for seed in 0..seeds {
            let net = generate(n, seed, shape);
            let start = Instant::now();
            let inst = match Instance::<S>::new(net, strategy) {
                Ok(inst) => inst,
                Err(e) => panic!("generated tree is invalid: {e}"),
            };
            let pre_ms = ms(start);
            let start = Instant::now();
            let b = solve_parametric(&inst, p);
            let solve_ms = ms(start);
            let a = (n <= CANDIDATE_LIMIT).then(|| solve_candidate(&inst, p));
            if let Some(a) = &a {
                assert!(a.alpha_star == b.alpha_star, "solvers disagree on seed {seed}");
            }
            let reps = 20;
            let mut visited = 0;
            let start = Instant::now();
            for _ in 0..reps {
                let mut stats = SearchStats::default();
                let _ = find_peripheral_centers(&inst.pre, strategy, &b.alpha_star, Some(p), &mut stats);
                visited = stats.visited;
                let _ = inst.test(&b.alpha_star, p);
            }
            let feas_ms = ms(start) / reps as f64 / 2.0;
            samples.push([pre_ms, feas_ms, solve_ms, b.feasibility_calls as f64, visited as f64, 0.0]);
            calls.push(a.map(|a| a.feasibility_calls as f64));
        }
        let col = |i: usize| median(samples.iter().map(|s| s[i]).collect());
        let cand: Option<Vec<f64>> = calls.into_iter().collect();
        rows.push(BenchRow {
            n,
            p,
            preprocessing_ms: col(0),
            feasibility_ms: col(1),
            solve_ms: col(2),
            feasibility_calls: cand.map(|c| median(c).round() as usize),
            parametric_calls: col(3).round() as usize,
            visited: col(4).round() as usize,
        });
    }
    rows
}

/// Fixed-width table with a header line.
pub fn render_table(rows: &[BenchRow]) -> String {
    let mut out = format!(
        "{:>8} {:>4} {:>16} {:>14} {:>10} {:>17} {:>16} {:>8}\n",
        "n", "p", "preprocessing_ms", "feasibility_ms", "solve_ms", "feasibility_calls", "parametric_calls", "visited"
    );
    for r in rows {
        let calls = r.feasibility_calls.map_or("-".to_string(), |c| c.to_string());
        out.push_str(&format!(
            "{:>8} {:>4} {:>16.3} {:>14.4} {:>10.3} {:>17} {:>16} {:>8}\n",
            r.n, r.p, r.preprocessing_ms, r.feasibility_ms, r.solve_ms, calls, r.parametric_calls, r.visited
        ));
    }
    out
}
