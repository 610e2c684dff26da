//! Random graphs solved through searched decompositions and compared with
//! the brute-force oracles.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rctw::compute::{find_rc_torso, nicify};
use rctw::decomposition::NiceHTreeDecomposition;
use rctw::hybrid::{solve_chromatic, solve_hamiltonian, solve_maxcut};
use rctw::oracles::{brute_chromatic, brute_hamiltonian, brute_maxcut};
use rctw::Graph;

use crate::dimacs;
use crate::document::DecompositionDocument;

pub const DENSITIES: [f64; 3] = [0.2, 0.5, 0.8];

#[derive(Clone, Copy, Debug)]
pub struct CrosscheckParams {
    pub n_max: usize,
    pub trials: usize,
    pub c: usize,
    pub seed: u64,
}

pub type Solver<T> = fn(&Graph, &NiceHTreeDecomposition) -> rctw::Result<T>;

/// The solvers under test.
#[derive(Clone, Copy)]
pub struct Solvers {
    pub chromatic: Solver<usize>,
    pub hamiltonian: Solver<bool>,
    pub maxcut: Solver<usize>,
}

impl Default for Solvers {
    fn default() -> Self {
        Self {
            chromatic: |g, d| solve_chromatic(g, d).map(|s| s.colors),
            hamiltonian: |g, d| solve_hamiltonian(g, d).map(|s| s.is_some()),
            maxcut: |g, d| solve_maxcut(g, d).map(|s| s.value),
        }
    }
}

/// The graph of trial `index`.
pub fn trial_graph(p: &CrosscheckParams, index: usize) -> (Graph, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    rng.set_stream(index as u64);
    let lo = p.n_max.min(4);
    let n = rng.gen_range(lo..=p.n_max);
    let density = DENSITIES[rng.gen_range(0..DENSITIES.len())];
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(u, v).expect("vertices in range");
            }
        }
    }
    (g, density)
}

/// Searched decomposition of `g`, passed through its JSON form.
pub fn decompose(g: &Graph, c: usize) -> Result<NiceHTreeDecomposition, String> {
    let r = find_rc_torso(g, c, None)
        .map_err(|e| e.to_string())?
        .ok_or("no modulator found")?;
    let d = nicify(g, &r).map_err(|e| e.to_string())?;
    let doc = DecompositionDocument::from_json(&DecompositionDocument::new(g, &d).to_json())?;
    let back = doc.decomposition()?;
    if back != d {
        return Err("decomposition changed in its JSON round trip".into());
    }
    Ok(back)
}

pub struct Trial {
    pub line: String,
    pub failure: Option<String>,
}

fn show<T: ToString>(r: &Result<T, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(_) => "error".into(),
    }
}

fn run_trial(p: &CrosscheckParams, solvers: &Solvers, index: usize) -> Trial {
    let (g, density) = trial_graph(p, index);
    let mut problems = Vec::new();
    let mut line = format!(
        "trial {index:>4}  n={:<2} m={:<2} p={density:.1}",
        g.n(),
        g.m()
    );
    match decompose(&g, p.c) {
        Err(e) => problems.push(format!("decompose: {e}")),
        Ok(d) => {
            let _ = write!(line, " width={}", d.width);
            let err = |e: rctw::Error| e.to_string();
            let pairs = [
                (
                    "chromatic",
                    show(&(solvers.chromatic)(&g, &d).map_err(err)),
                    show(&brute_chromatic(&g).map_err(err)),
                ),
                (
                    "hamcycle",
                    show(&(solvers.hamiltonian)(&g, &d).map_err(err)),
                    show(&brute_hamiltonian(&g).map_err(err)),
                ),
                (
                    "maxcut",
                    show(&(solvers.maxcut)(&g, &d).map_err(err)),
                    show(&brute_maxcut(&g).map_err(err)),
                ),
            ];
            for (name, got, want) in pairs {
                let _ = write!(line, "  {name} {got}/{want}");
                if got != want || got == "error" {
                    problems.push(format!("{name}: solver {got}, oracle {want}"));
                }
            }
        }
    }
    let failure = (!problems.is_empty()).then(|| {
        let comments = vec![
            format!("crosscheck trial {index} seed {} c {}", p.seed, p.c),
            problems.join("; "),
        ];
        dimacs::write(&g, &comments)
    });
    line.push_str(if failure.is_none() {
        "  PASS"
    } else {
        "  FAIL"
    });
    Trial { line, failure }
}

/// Runs every trial and returns the report and whether all passed. The
/// report lists trials in index order; failing instances follow in DIMACS.
pub fn crosscheck(p: &CrosscheckParams, solvers: &Solvers) -> (String, bool) {
    let trials: Vec<Trial> = (0..p.trials)
        .into_par_iter()
        .map(|i| run_trial(p, solvers, i))
        .collect();
    let mut report = String::new();
    for t in &trials {
        report.push_str(&t.line);
        report.push('\n');
    }
    let failures: Vec<&String> = trials.iter().filter_map(|t| t.failure.as_ref()).collect();
    let _ = writeln!(
        report,
        "crosscheck: {}/{} trials passed",
        p.trials - failures.len(),
        p.trials
    );
    for f in &failures {
        report.push_str(f);
    }
    (report, failures.is_empty())
}
