//! Plain-text edge-list format.
//!
//! ```text
//! n m [delta]
//! u v [edge_color]
//! ...
//! ```
//! Vertices are 0-indexed; either every edge line carries a color or none does.
//! Lines starting with `#` are comments.

use sha2::{Digest, Sha256};

use super::{Graph, GraphError};

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {} {}\n", g.n(), g.m(), g.delta());
    for (u, v) in g.edges() {
        match g.edge_color(u, v) {
            Some(c) => out.push_str(&format!("{u} {v} {c}\n")),
            None => out.push_str(&format!("{u} {v}\n")),
        }
    }
    out
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T, GraphError> {
    tok.parse().map_err(|_| GraphError::Parse {
        line,
        msg: format!("expected an integer, found {tok:?}"),
    })
}

pub fn read_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(GraphError::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if !(2..=3).contains(&head.len()) {
        return Err(GraphError::Parse {
            line: hl,
            msg: "header must be `n m [delta]`".into(),
        });
    }
    let n: usize = parse_num(head[0], hl)?;
    let m: usize = parse_num(head[1], hl)?;
    let declared_delta: Option<usize> = head.get(2).map(|t| parse_num(t, hl)).transpose()?;

    let mut plain = Vec::with_capacity(m);
    let mut colored = Vec::with_capacity(m);
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.len() {
            2 => plain.push((parse_num(toks[0], ln)?, parse_num(toks[1], ln)?)),
            3 => colored.push((
                parse_num(toks[0], ln)?,
                parse_num(toks[1], ln)?,
                parse_num(toks[2], ln)?,
            )),
            _ => {
                return Err(GraphError::Parse {
                    line: ln,
                    msg: "edge line must be `u v [color]`".into(),
                })
            }
        }
    }
    if !plain.is_empty() && !colored.is_empty() {
        return Err(GraphError::Parse {
            line: hl,
            msg: "either all edges carry a color or none do".into(),
        });
    }
    let g = if colored.is_empty() {
        Graph::from_edges(n, &plain)?
    } else {
        Graph::from_colored_edges(n, &colored)?
    };
    if g.m() != m {
        return Err(GraphError::Parse {
            line: hl,
            msg: format!("header declares {m} edges, found {}", g.m()),
        });
    }
    if let Some(d) = declared_delta {
        if d != g.delta() {
            return Err(GraphError::Parse {
                line: hl,
                msg: format!("header declares delta {d}, graph has {}", g.delta()),
            });
        }
    }
    Ok(g)
}

/// 64-bit digest of the canonical edge list (first eight bytes of SHA-256
/// over the text serialization).
pub fn graph_digest(g: &Graph) -> u64 {
    let hash = Sha256::digest(write_graph(g).as_bytes());
    u64::from_be_bytes(hash[..8].try_into().expect("eight bytes"))
}
