mod common;

use std::process::Command;

use rctw::decomposition::NiceHTreeDecomposition;
use rctw::{Graph, VertexSet};
use rctw_cli::crosscheck::{crosscheck, CrosscheckParams, Solvers};
use rctw_cli::document::DecompositionDocument;
use rctw_cli::exit;

use common::{cli, complete, cycle, path_str, write_graph};

fn decompose(dir: &std::path::Path, graph: &str, c: usize) -> (common::Output, String) {
    let out = dir.join(format!("d{c}.json"));
    let out = path_str(&out).to_string();
    (
        cli(&[
            "decompose",
            "--graph",
            graph,
            "--c",
            &c.to_string(),
            "--out",
            &out,
        ]),
        out,
    )
}

fn solve(problem: &str, graph: &str, decomp: &str) -> common::Output {
    cli(&[
        "solve",
        problem,
        "--graph",
        graph,
        "--decomp",
        decomp,
        "--witness",
    ])
}

#[test]
fn complete_graph_has_an_empty_torso() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(dir.path(), "k10.col", &complete(10));
    let (out, doc) = decompose(dir.path(), &graph, 1);
    assert_eq!(out.code, exit::OK, "{}", out.stderr);
    assert_eq!(out.stdout, "width 0\nmodulator 10\n");
    let doc = DecompositionDocument::from_json(&std::fs::read_to_string(doc).unwrap()).unwrap();
    assert!(doc.torso.iter().all(|t| t.bag.is_empty()));
}

#[test]
fn trees_have_width_zero() {
    let dir = tempfile::tempdir().unwrap();
    let tree = Graph::from_edges(
        9,
        [
            (0, 1),
            (0, 2),
            (1, 3),
            (1, 4),
            (2, 5),
            (5, 6),
            (5, 7),
            (7, 8),
        ],
    )
    .unwrap();
    let graph = write_graph(dir.path(), "tree.col", &tree);
    let (out, _) = decompose(dir.path(), &graph, 1);
    assert_eq!(out.code, exit::OK, "{}", out.stderr);
    assert!(out.stdout.starts_with("width 0\n"));
}

#[test]
fn grid_with_pendant_five_cycles_keeps_the_grid_width() {
    // A 3x3 grid with a five-cycle hanging off each corner.
    let mut edges = Vec::new();
    for r in 0..3 {
        for c in 0..3 {
            let v = 3 * r + c;
            if c < 2 {
                edges.push((v, v + 1));
            }
            if r < 2 {
                edges.push((v, v + 3));
            }
        }
    }
    let mut n = 9;
    for corner in [0, 2, 6, 8] {
        for i in 0..5 {
            edges.push((n + i, n + (i + 1) % 5));
        }
        edges.push((corner, n));
        n += 5;
    }
    let g = Graph::from_edges(n, edges).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(dir.path(), "grid.col", &g);
    // Too large for the exhaustive search, so solve from the obvious modulator.
    let (out, _) = decompose(dir.path(), &graph, 2);
    assert_eq!(out.code, exit::RESOURCE);
    let cycles: VertexSet = (9..n).collect();
    let r = rctw::compute::torso_result_for(&g, 2, &cycles, &Default::default()).unwrap();
    assert_eq!(r.achieved_width, 3);
    let d = rctw::compute::nicify(&g, &r).unwrap();
    assert!(rctw::decomposition::validate_nice_h_decomposition(&g, &d, true).is_empty());
}

#[test]
fn solve_prints_answers_and_checked_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write_graph(dir.path(), "c5.col", &cycle(5));
    let (out, d5) = decompose(dir.path(), &c5, 1);
    assert_eq!(out.code, exit::OK, "{}", out.stderr);

    let chromatic = solve("chromatic", &c5, &d5);
    assert_eq!(chromatic.code, exit::OK, "{}", chromatic.stderr);
    let lines: Vec<&str> = chromatic.stdout.lines().collect();
    assert_eq!(lines[0], "3");
    let colors: Vec<usize> = lines[1]
        .strip_prefix("coloring: ")
        .unwrap()
        .split(' ')
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(colors.len(), 5);
    assert!((0..5).all(|i| colors[i] != colors[(i + 1) % 5] && (1..=3).contains(&colors[i])));

    let ham = solve("hamcycle", &c5, &d5);
    let lines: Vec<&str> = ham.stdout.lines().collect();
    assert_eq!(lines[0], "true");
    let mut order: Vec<usize> = lines[1]
        .strip_prefix("cycle: ")
        .unwrap()
        .split(' ')
        .map(|s| s.parse().unwrap())
        .collect();
    order.sort_unstable();
    assert_eq!(order, vec![1, 2, 3, 4, 5]);

    let c6 = write_graph(dir.path(), "c6.col", &cycle(6));
    let (_, d6) = decompose(dir.path(), &c6, 2);
    let cut = solve("maxcut", &c6, &d6);
    let lines: Vec<&str> = cut.stdout.lines().collect();
    assert_eq!(lines[0], "6");
    assert!(
        lines[1] == "side: 1 3 5" || lines[1] == "side: 2 4 6",
        "{}",
        lines[1]
    );

    let without = cli(&["solve", "maxcut", "--graph", &c6, "--decomp", &d6]);
    assert_eq!(without.stdout, "6\n");
}

#[test]
fn oracle_matches_the_reference_examples() {
    let dir = tempfile::tempdir().unwrap();
    let k23 = Graph::from_edges(5, (0..2).flat_map(|a| (2..5).map(move |b| (a, b)))).unwrap();
    let cases = [
        ("chromatic", cycle(5), "3"),
        ("chromatic", complete(5), "5"),
        ("chromatic", Graph::new(4), "1"),
        ("hamcycle", cycle(7), "true"),
        ("hamcycle", k23, "false"),
        ("maxcut", complete(4), "4"),
        ("maxcut", cycle(5), "4"),
    ];
    for (i, (problem, g, want)) in cases.into_iter().enumerate() {
        let graph = write_graph(dir.path(), &format!("g{i}.col"), &g);
        let out = cli(&["oracle", problem, "--graph", &graph]);
        assert_eq!(out.code, exit::OK);
        assert_eq!(out.stdout.trim(), want, "{problem} case {i}");
    }
    let big = write_graph(dir.path(), "big.col", &cycle(30));
    assert_eq!(
        cli(&["oracle", "hamcycle", "--graph", &big]).code,
        exit::RESOURCE
    );
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.col");
    std::fs::write(&bad, "c x\np edge 3 1\ne 1 4\n").unwrap();
    let out = cli(&["oracle", "maxcut", "--graph", path_str(&bad)]);
    assert_eq!(out.code, exit::PARSE);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
    let missing = cli(&["oracle", "maxcut", "--graph", "/nonexistent/graph.col"]);
    assert_eq!(missing.code, exit::PARSE);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(cli(&["frobnicate"]).code, exit::PARSE);
    assert_eq!(
        cli(&["solve", "colouring", "--graph", "a", "--decomp", "b"]).code,
        exit::PARSE
    );
    let help = cli(&["--help"]);
    assert_eq!(help.code, exit::OK);
    assert!(help.stdout.contains("crosscheck"));
}

#[test]
fn infeasible_width_bound() {
    let dir = tempfile::tempdir().unwrap();
    // No modulator of the 4x4 grid with distance-hereditary components
    // leaves an edgeless torso.
    let mut edges = Vec::new();
    for r in 0..4 {
        for c in 0..4 {
            let v = 4 * r + c;
            if c < 3 {
                edges.push((v, v + 1));
            }
            if r < 3 {
                edges.push((v, v + 4));
            }
        }
    }
    let graph = write_graph(
        dir.path(),
        "grid.col",
        &Graph::from_edges(16, edges).unwrap(),
    );
    let out = dir.path().join("d.json");
    let run = cli(&[
        "decompose",
        "--graph",
        &graph,
        "--c",
        "1",
        "--k-max",
        "0",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(run.code, exit::INFEASIBLE, "{}", run.stderr);
    assert!(!out.exists());
}

#[test]
fn decompositions_are_tied_to_their_graph() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write_graph(dir.path(), "c5.col", &cycle(5));
    let c6 = write_graph(dir.path(), "c6.col", &cycle(6));
    let (_, d5) = decompose(dir.path(), &c5, 1);
    let wrong = solve("chromatic", &c6, &d5);
    assert_eq!(wrong.code, exit::FINGERPRINT);

    let mut doc = DecompositionDocument::from_json(&std::fs::read_to_string(&d5).unwrap()).unwrap();
    doc.width += 1;
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, doc.to_json()).unwrap();
    let out = solve("chromatic", &c5, path_str(&broken));
    assert_eq!(out.code, exit::INVALID);
    assert!(out.stderr.contains("width-mismatch"), "{}", out.stderr);

    std::fs::write(&broken, "{ \"version\": 1 }").unwrap();
    assert_eq!(solve("chromatic", &c5, path_str(&broken)).code, exit::PARSE);
}

#[test]
fn document_round_trip() {
    for seed in 0..10 {
        let g = rctw_cli::crosscheck::trial_graph(
            &CrosscheckParams {
                n_max: 9,
                trials: 1,
                c: 1,
                seed,
            },
            0,
        )
        .0;
        let r = rctw::compute::find_rc_torso(&g, 1, None).unwrap().unwrap();
        let d = rctw::compute::nicify(&g, &r).unwrap();
        let text = DecompositionDocument::new(&g, &d).to_json();
        let back: NiceHTreeDecomposition = DecompositionDocument::from_json(&text)
            .unwrap()
            .decomposition()
            .unwrap();
        assert_eq!(back, d);
        assert_eq!(DecompositionDocument::new(&g, &back).to_json(), text);
    }
}

#[test]
fn generated_files_are_seed_stable() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, seed) in ["4", "4", "5"].iter().enumerate() {
        let graph = dir.path().join(format!("g{i}.col"));
        let out = cli(&[
            "gen",
            "--skeleton-tw",
            "2",
            "--component-rw",
            "1",
            "--components",
            "3",
            "--component-size",
            "4",
            "--seed",
            seed,
            "--out",
            path_str(&graph),
        ]);
        assert_eq!(out.code, exit::OK, "{}", out.stderr);
        outputs.push(std::fs::read(&graph).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_ne!(outputs[0], outputs[2]);
}

#[test]
fn generated_cliques_leave_a_narrow_torso() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.col");
    let graph = path_str(&graph);
    let gen = cli(&[
        "gen",
        "--skeleton-tw",
        "1",
        "--skeleton-size",
        "3",
        "--component-rw",
        "1",
        "--components",
        "1",
        "--component-size",
        "8",
        "--seed",
        "3",
        "--out",
        graph,
    ]);
    assert_eq!(gen.code, exit::OK, "{}", gen.stderr);
    let (out, _) = decompose(dir.path(), graph, 1);
    assert_eq!(out.code, exit::OK, "{}", out.stderr);
    let width: usize = out
        .stdout
        .lines()
        .next()
        .unwrap()
        .strip_prefix("width ")
        .unwrap()
        .parse()
        .unwrap();
    assert!(width <= 1);
}

#[test]
fn crosscheck_small_runs() {
    let zero = cli(&[
        "crosscheck",
        "--n-max",
        "6",
        "--trials",
        "0",
        "--c",
        "1",
        "--seed",
        "1",
    ]);
    assert_eq!(zero.code, exit::OK);
    assert_eq!(zero.stdout, "crosscheck: 0/0 trials passed\n");

    let fifty = cli(&[
        "crosscheck",
        "--n-max",
        "6",
        "--trials",
        "50",
        "--c",
        "1",
        "--seed",
        "9",
    ]);
    assert_eq!(fifty.code, exit::OK, "{}", fifty.stdout);
    assert!(fifty.stdout.ends_with("crosscheck: 50/50 trials passed\n"));
    let indices: Vec<usize> = fifty
        .stdout
        .lines()
        .take(50)
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(indices, (0..50).collect::<Vec<_>>());

    let too_big = cli(&[
        "crosscheck",
        "--n-max",
        "40",
        "--trials",
        "1",
        "--c",
        "1",
        "--seed",
        "1",
    ]);
    assert_eq!(too_big.code, exit::RESOURCE);
}

#[test]
fn crosscheck_catches_a_faulty_solver() {
    let faulty = Solvers {
        maxcut: |g, d| {
            rctw::hybrid::solve_maxcut(g, d)
                .map(|c| c.value.saturating_sub(usize::from(g.m() % 5 == 3)))
        },
        ..Solvers::default()
    };
    let p = CrosscheckParams {
        n_max: 7,
        trials: 40,
        c: 1,
        seed: 2,
    };
    let (report, ok) = crosscheck(&p, &faulty);
    assert!(!ok);
    assert!(report.contains("FAIL"));
    assert!(
        report.contains("p edge"),
        "failing instances are written out"
    );
    let (_, ok) = crosscheck(&p, &Solvers::default());
    assert!(ok);
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_rctw");
    let ok = Command::new(bin)
        .args([
            "crosscheck",
            "--n-max",
            "5",
            "--trials",
            "3",
            "--c",
            "1",
            "--seed",
            "1",
        ])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(exit::OK));
    let bad = Command::new(bin)
        .args(["oracle", "maxcut", "--graph", "/nonexistent"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(exit::PARSE));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));
}

#[test]
fn five_rank_width_one_components_over_a_tree_skeleton() {
    let big = rctw_cli::generate::generate(&rctw_cli::generate::GenParams {
        skeleton_tw: 1,
        skeleton_size: None,
        component_rw: 1,
        components: 5,
        component_size: 8,
        component_size_min: None,
        seed: 3,
    })
    .unwrap();
    assert_eq!(big.graph.n(), 44);
    assert!(big.decomposition.width <= 1);
    assert!(big.decomposition.components.iter().all(|c| c.rd.width <= 1));
    assert!(rctw::decomposition::validate_nice_h_decomposition(
        &big.graph,
        &big.decomposition,
        true
    )
    .is_empty());
}
