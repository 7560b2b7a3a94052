//! Plain-text edge lists: a header line `n m`, then `m` lines `u v` with
//! 0-based endpoints, whitespace separated, LF line endings.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let err = |message: String| Error::Parse {
        line: lineno,
        message,
    };
    if line.contains('\r') {
        return Err(err("carriage return in line (LF endings expected)".into()));
    }
    let mut fields = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = fields
            .next()
            .ok_or_else(|| err(format!("missing {what}")))?;
        tok.parse::<usize>()
            .map_err(|_| err(format!("{what} {tok:?} is not a nonnegative integer")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if let Some(extra) = fields.next() {
        return Err(err(format!("unexpected trailing field {extra:?}")));
    }
    Ok((a, b))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty file".into(),
    })?;
    let (n, m) = parse_pair(header, 1)?;
    let mut edges = Vec::with_capacity(m);
    let mut last_line = 1;
    for (lineno, line) in lines {
        last_line = lineno;
        if line.is_empty() {
            // only a single trailing newline is allowed
            continue;
        }
        if edges.len() == m {
            return Err(Error::Parse {
                line: lineno,
                message: format!("more than the {m} edges announced in the header"),
            });
        }
        let (u, v) = parse_pair(line, lineno)?;
        if u >= n || v >= n {
            return Err(Error::Parse {
                line: lineno,
                message: format!("endpoint out of range for n = {n}"),
            });
        }
        edges.push((lineno, u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    let mut builder = crate::graph::GraphBuilder::new(n);
    for (lineno, u, v) in edges {
        builder.add_edge(u, v).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
    }
    Ok(builder.freeze())
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<Graph> {
    parse_edge_list(&fs::read_to_string(path)?)
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn save_graph(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(format_edge_list(g).as_bytes())?;
    Ok(())
}
