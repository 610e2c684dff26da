#![allow(dead_code)]

use std::path::Path;

use rctw::Graph;

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line in-process.
pub fn cli(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rctw").chain(args.iter().copied());
    let code = rctw_cli::run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).expect("utf-8 output"),
        stderr: String::from_utf8(err).expect("utf-8 output"),
    }
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

pub fn write_graph(dir: &Path, name: &str, g: &Graph) -> String {
    let p = dir.join(name);
    std::fs::write(&p, rctw_cli::dimacs::write(g, &[])).unwrap();
    path_str(&p).to_string()
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
}
