//! Command-line front end: graph input, decomposition files, solvers,
//! oracles, instance generation and batch cross-checking.

pub mod crosscheck;
pub mod dimacs;
pub mod document;
pub mod generate;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use rctw::compute::{find_rc_torso, nicify};
use rctw::decomposition::{validate_nice_h_decomposition, NiceHTreeDecomposition};
use rctw::hybrid::{solve_chromatic, solve_hamiltonian, solve_maxcut};
use rctw::oracles::{brute_chromatic, brute_hamiltonian, brute_maxcut};
use rctw::{Error, Graph, VertexSet};

use crosscheck::{CrosscheckParams, Solvers};
use document::{DecompositionDocument, Fingerprint};
use generate::GenParams;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 1;
    pub const INFEASIBLE: i32 = 2;
    pub const RESOURCE: i32 = 3;
    pub const FINGERPRINT: i32 = 4;
    pub const INVALID: i32 = 5;
    pub const MISMATCH: i32 = 6;
    /// A self-check failed.
    pub const INTERNAL: i32 = 7;
}

#[derive(Parser, Debug)]
#[command(
    name = "rctw",
    version,
    about = "Hybrid treewidth / rank-width decompositions and solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProblemArg {
    Chromatic,
    Hamcycle,
    Maxcut,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search a modulator whose torso has least treewidth and write the
    /// nice decomposition.
    Decompose {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        c: usize,
        /// Accept the first modulator whose torso has width at most this.
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve a problem with a decomposition file.
    Solve {
        #[arg(value_enum)]
        problem: ProblemArg,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        decomp: PathBuf,
        /// Also print a checked certificate.
        #[arg(long)]
        witness: bool,
    },
    /// Solve a problem by brute force.
    Oracle {
        #[arg(value_enum)]
        problem: ProblemArg,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Generate a partial k-tree with bounded rank-width components.
    Gen {
        #[arg(long)]
        skeleton_tw: usize,
        #[arg(long)]
        component_rw: usize,
        #[arg(long)]
        components: usize,
        #[arg(long)]
        component_size: usize,
        /// Smallest component size; defaults to --component-size.
        #[arg(long)]
        component_size_min: Option<usize>,
        /// Skeleton vertex count; defaults to twice --skeleton-tw plus two.
        #[arg(long)]
        skeleton_size: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the decomposition that has the components as modulator.
        #[arg(long)]
        decomp_out: Option<PathBuf>,
    },
    /// Compare solvers with oracles on random graphs.
    Crosscheck {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        seed: u64,
    },
}

/// A failure carrying its exit code and message.
struct Fail(i32, String);

type Outcome = Result<(), Fail>;

fn io_fail(path: &Path, e: std::io::Error) -> Fail {
    Fail(exit::PARSE, format!("{}: {e}", path.display()))
}

fn lib_fail(e: Error) -> Fail {
    let code = match e {
        Error::ResourceLimit { .. } => exit::RESOURCE,
        Error::InputDomain(_) => exit::INVALID,
        Error::Internal(_) => exit::INTERNAL,
    };
    Fail(code, e.to_string())
}

fn read_graph(path: &Path) -> Result<Graph, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| io_fail(path, e))?;
    dimacs::parse(&text).map_err(|e| Fail(exit::PARSE, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Fail(exit::PARSE, format!("{}: {e}", path.display())))
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return exit::PARSE;
            }
            let _ = write!(out, "{}", e.render());
            return exit::OK;
        }
    };
    let result = match cli.command {
        Command::Decompose {
            graph,
            c,
            k_max,
            out: path,
        } => decompose(&graph, c, k_max, &path, out),
        Command::Solve {
            problem,
            graph,
            decomp,
            witness,
        } => solve(problem, &graph, &decomp, witness, out),
        Command::Oracle { problem, graph } => oracle(problem, &graph, out),
        Command::Gen {
            skeleton_tw,
            component_rw,
            components,
            component_size,
            component_size_min,
            skeleton_size,
            seed,
            out: path,
            decomp_out,
        } => {
            let params = GenParams {
                skeleton_tw,
                skeleton_size,
                component_rw,
                components,
                component_size,
                component_size_min,
                seed,
            };
            gen(&params, &path, decomp_out.as_deref(), out)
        }
        Command::Crosscheck {
            n_max,
            trials,
            c,
            seed,
        } => crosscheck(
            &CrosscheckParams {
                n_max,
                trials,
                c,
                seed,
            },
            &Solvers::default(),
            out,
        ),
    };
    match result {
        Ok(()) => exit::OK,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn decompose(
    graph: &Path,
    c: usize,
    k_max: Option<usize>,
    path: &Path,
    out: &mut dyn Write,
) -> Outcome {
    let g = read_graph(graph)?;
    let Some(r) = find_rc_torso(&g, c, k_max).map_err(lib_fail)? else {
        let k = k_max.unwrap_or_default();
        return Err(Fail(
            exit::INFEASIBLE,
            format!("no modulator gives a torso of treewidth at most {k}"),
        ));
    };
    let d = nicify(&g, &r).map_err(lib_fail)?;
    check_valid(&g, &d)?;
    write_file(path, &DecompositionDocument::new(&g, &d).to_json())?;
    let _ = writeln!(out, "width {}", d.width);
    let _ = writeln!(out, "modulator {}", d.modulator.len());
    Ok(())
}

fn check_valid(g: &Graph, d: &NiceHTreeDecomposition) -> Outcome {
    let violations = validate_nice_h_decomposition(g, d, true);
    if violations.is_empty() {
        return Ok(());
    }
    let list: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
    Err(Fail(
        exit::INVALID,
        format!("decomposition rejected:\n{}", list.join("\n")),
    ))
}

/// Reads a decomposition and checks it against the graph.
pub fn load_decomposition(g: &Graph, path: &Path) -> Result<NiceHTreeDecomposition, (i32, String)> {
    let run = || -> Result<NiceHTreeDecomposition, Fail> {
        let text = std::fs::read_to_string(path).map_err(|e| io_fail(path, e))?;
        let doc = DecompositionDocument::from_json(&text)
            .map_err(|e| Fail(exit::PARSE, format!("{}: {e}", path.display())))?;
        if doc.fingerprint != Fingerprint::of(g) {
            return Err(Fail(
                exit::FINGERPRINT,
                "decomposition was made for a different graph".into(),
            ));
        }
        let d = doc
            .decomposition()
            .map_err(|e| Fail(exit::PARSE, format!("{}: {e}", path.display())))?;
        check_valid(g, &d)?;
        Ok(d)
    };
    run().map_err(|Fail(code, msg)| (code, msg))
}

fn solve(
    problem: ProblemArg,
    graph: &Path,
    decomp: &Path,
    witness: bool,
    out: &mut dyn Write,
) -> Outcome {
    let g = read_graph(graph)?;
    let d = load_decomposition(&g, decomp).map_err(|(code, msg)| Fail(code, msg))?;
    let mut lines = Vec::new();
    match problem {
        ProblemArg::Chromatic => {
            let sol = solve_chromatic(&g, &d).map_err(lib_fail)?;
            lines.push(sol.colors.to_string());
            if witness {
                check_coloring(&g, &sol.coloring, sol.colors)?;
                lines.push(format!(
                    "coloring: {}",
                    join(sol.coloring.iter().map(|c| c + 1))
                ));
            }
        }
        ProblemArg::Hamcycle => {
            let sol = solve_hamiltonian(&g, &d).map_err(lib_fail)?;
            lines.push(sol.is_some().to_string());
            if let (true, Some(order)) = (witness, &sol) {
                check_cycle(&g, order)?;
                lines.push(format!("cycle: {}", join(order.iter().map(|v| v + 1))));
            }
        }
        ProblemArg::Maxcut => {
            let sol = solve_maxcut(&g, &d).map_err(lib_fail)?;
            lines.push(sol.value.to_string());
            if witness {
                check_cut(&g, &sol.side, sol.value)?;
                lines.push(format!("side: {}", join(sol.side.iter().map(|v| v + 1))));
            }
        }
    }
    for l in lines {
        let _ = writeln!(out, "{l}");
    }
    Ok(())
}

fn join(items: impl Iterator<Item = usize>) -> String {
    items.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn self_check(ok: bool, what: &str) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Fail(exit::INTERNAL, format!("{what} failed its check")))
    }
}

fn check_coloring(g: &Graph, coloring: &[usize], colors: usize) -> Outcome {
    let ok = coloring.len() == g.n()
        && coloring.iter().all(|&c| c < colors)
        && g.edges().all(|(u, v)| coloring[u] != coloring[v]);
    self_check(ok, "coloring")
}

fn check_cycle(g: &Graph, order: &[usize]) -> Outcome {
    let distinct = order.iter().copied().collect::<VertexSet>();
    let ok = order.len() == g.n()
        && distinct == g.vertex_set()
        && (0..order.len()).all(|i| g.has_edge(order[i], order[(i + 1) % order.len()]));
    self_check(ok, "cycle")
}

fn check_cut(g: &Graph, side: &VertexSet, value: usize) -> Outcome {
    let crossing = g
        .edges()
        .filter(|&(u, v)| side.contains(u) != side.contains(v))
        .count();
    self_check(crossing == value, "cut")
}

fn oracle(problem: ProblemArg, graph: &Path, out: &mut dyn Write) -> Outcome {
    let g = read_graph(graph)?;
    let answer = match problem {
        ProblemArg::Chromatic => brute_chromatic(&g).map(|v| v.to_string()),
        ProblemArg::Hamcycle => brute_hamiltonian(&g).map(|v| v.to_string()),
        ProblemArg::Maxcut => brute_maxcut(&g).map(|v| v.to_string()),
    }
    .map_err(lib_fail)?;
    let _ = writeln!(out, "{answer}");
    Ok(())
}

fn gen(params: &GenParams, path: &Path, decomp_out: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let generated = generate::generate(params).map_err(|e| Fail(exit::PARSE, e))?;
    let comments = vec![format!(
        "rctw gen skeleton-tw={} component-rw={} components={} component-size={} seed={}",
        params.skeleton_tw,
        params.component_rw,
        params.components,
        params.component_size,
        params.seed
    )];
    write_file(path, &dimacs::write(&generated.graph, &comments))?;
    if let Some(dp) = decomp_out {
        write_file(
            dp,
            &DecompositionDocument::new(&generated.graph, &generated.decomposition).to_json(),
        )?;
    }
    let _ = writeln!(
        out,
        "n {} m {} width {}",
        generated.graph.n(),
        generated.graph.m(),
        generated.decomposition.width
    );
    Ok(())
}

/// Largest `--n-max` accepted by `crosscheck`.
pub const CROSSCHECK_N_MAX: usize = 16;

fn crosscheck(params: &CrosscheckParams, solvers: &Solvers, out: &mut dyn Write) -> Outcome {
    if params.n_max > CROSSCHECK_N_MAX {
        return Err(Fail(
            exit::RESOURCE,
            format!("--n-max {} exceeds {CROSSCHECK_N_MAX}", params.n_max),
        ));
    }
    let (report, ok) = crosscheck::crosscheck(params, solvers);
    let _ = out.write_all(report.as_bytes());
    if ok {
        Ok(())
    } else {
        Err(Fail(exit::MISMATCH, "solver and oracle disagree".into()))
    }
}
