//! DIMACS edge format: `c` comment lines, one `p edge n m` line, then `m`
//! lines `e u v` with 1-based vertices.

use std::fmt::Write as _;

use rctw::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn parse(text: &str) -> Result<Graph, ParseError> {
    let mut graph: Option<(Graph, usize)> = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let err = |message: String| ParseError { line, message };
        let mut tok = raw.split_whitespace();
        match tok.next() {
            None | Some("c") => continue,
            Some("p") => {
                if graph.is_some() {
                    return Err(err("second problem line".into()));
                }
                let format = tok.next().ok_or_else(|| err("missing format".into()))?;
                if format != "edge" && format != "col" {
                    return Err(err(format!("unsupported format `{format}`")));
                }
                let n = number(tok.next(), "vertex count").map_err(err)?;
                let m = number(tok.next(), "edge count").map_err(err)?;
                if tok.next().is_some() {
                    return Err(err("trailing tokens".into()));
                }
                graph = Some((Graph::new(n), m));
            }
            Some("e") => {
                let (g, _) = graph
                    .as_mut()
                    .ok_or_else(|| err("edge before problem line".into()))?;
                let u = number(tok.next(), "endpoint").map_err(err)?;
                let v = number(tok.next(), "endpoint").map_err(err)?;
                if tok.next().is_some() {
                    return Err(err("trailing tokens".into()));
                }
                if u == 0 || v == 0 || u > g.n() || v > g.n() {
                    return Err(err(format!("vertex out of range 1..={}", g.n())));
                }
                if u == v {
                    return Err(err(format!("self-loop at {u}")));
                }
                if !g.add_edge(u - 1, v - 1).map_err(|e| err(e.to_string()))? {
                    return Err(err(format!("repeated edge {u} {v}")));
                }
            }
            Some(other) => return Err(err(format!("unknown line type `{other}`"))),
        }
    }
    let (g, m) = graph.ok_or(ParseError {
        line: last,
        message: "missing problem line".into(),
    })?;
    if g.m() != m {
        return Err(ParseError {
            line: last,
            message: format!("problem line announces {m} edges, found {}", g.m()),
        });
    }
    Ok(g)
}

fn number(tok: Option<&str>, what: &str) -> Result<usize, String> {
    let tok = tok.ok_or_else(|| format!("missing {what}"))?;
    tok.parse().map_err(|_| format!("bad {what} `{tok}`"))
}

pub fn write(g: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "c {c}").unwrap();
    }
    writeln!(out, "p edge {} {}", g.n(), g.m()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let text = write(&g, &["square".into()]);
        assert!(text.starts_with("c square\np edge 4 4\n"));
        assert_eq!(parse(&text).unwrap(), g);
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            ("e 1 2\n", 1, "before problem"),
            ("p edge 2 1\ne 1 3\n", 2, "out of range"),
            ("p edge 2 1\ne 1 1\n", 2, "self-loop"),
            ("p edge 3 2\ne 1 2\ne 2 1\n", 3, "repeated"),
            ("p edge 3 2\ne 1 2\n", 2, "announces"),
            ("c only\n", 1, "missing problem"),
            ("p edge x 1\n", 1, "bad vertex count"),
            ("p edge 2 0\nq\n", 2, "unknown line"),
            ("p edge 2 0\np edge 2 0\n", 2, "second"),
        ];
        for (text, line, needle) in cases {
            let e = parse(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?}");
            assert!(e.message.contains(needle), "{text:?}: {}", e.message);
        }
    }

    #[test]
    fn blank_lines_and_empty_graph() {
        assert_eq!(parse("\n\np edge 0 0\n\n").unwrap(), Graph::new(0));
    }
}
