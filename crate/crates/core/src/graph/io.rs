//! graph6 and plain edge-list interchange.
//!
//! graph6 packs the upper triangle column by column (`(0,1), (0,2), (1,2),
//! (0,3), ...`) into 6-bit groups offset by 63. The edge-list format is a
//! header line `n m` followed by `m` lines `u v`.

use super::{Graph, GraphBuilder, GraphError, DEFAULT_VERTEX_CAP};
use std::fmt::Write as _;

const HEADER: &str = ">>graph6<<";

pub fn graph6_encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn graph6_decode(text: &str) -> Result<Graph, GraphError> {
    graph6_decode_capped(text, DEFAULT_VERTEX_CAP)
}

pub fn graph6_decode_capped(text: &str, cap: usize) -> Result<Graph, GraphError> {
    let s = text.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    let bad = |msg: &str| GraphError::Graph6(msg.to_string());
    if bytes.is_empty() {
        return Err(bad("empty input"));
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(GraphError::Graph6(format!("byte 0x{b:02x} outside 63..=126")));
    }
    let (n, body) = if bytes[0] != 126 {
        (bytes[0] as usize - 63, &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] != 126 {
        if bytes.len() < 4 {
            return Err(bad("truncated vertex count"));
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b as usize - 63));
        (n, &bytes[4..])
    } else {
        if bytes.len() < 8 {
            return Err(bad("truncated vertex count"));
        }
        let n = bytes[2..8]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b as usize - 63));
        (n, &bytes[8..])
    };
    if n > cap {
        return Err(GraphError::TooManyVertices { n, cap });
    }
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    if body.len() != need {
        return Err(GraphError::Graph6(format!(
            "expected {need} data bytes for {n} vertices, found {}",
            body.len()
        )));
    }
    let mut b = GraphBuilder::with_cap(n, cap)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                b.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    if bits % 6 != 0 {
        let last = body[need - 1] - 63;
        if last & ((1 << (6 - bits % 6)) - 1) != 0 {
            return Err(bad("nonzero padding bits"));
        }
    }
    Ok(b.build())
}

pub fn edge_list_encode(g: &Graph) -> String {
    let edges = g.edges();
    let mut s = format!("{} {}\n", g.order(), edges.len());
    for (u, v) in edges {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn edge_list_decode(text: &str, cap: usize) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| GraphError::EdgeList("missing `n m` header".into()))?;
    let (n, m) = parse_pair(header)
        .ok_or_else(|| GraphError::EdgeList(format!("bad header `{header}`")))?;
    let mut b = GraphBuilder::with_cap(n, cap)?;
    let mut seen = 0;
    for line in lines {
        let (u, v) = parse_pair(line)
            .ok_or_else(|| GraphError::EdgeList(format!("bad edge line `{line}`")))?;
        b.add_edge(u, v)?;
        seen += 1;
    }
    if seen != m {
        return Err(GraphError::EdgeList(format!(
            "header declares {m} edges, found {seen}"
        )));
    }
    Ok(b.build())
}

fn parse_pair(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// Input format of a graph text, decided by its first non-blank line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Graph6,
    EdgeList,
}

pub fn detect_format(text: &str) -> GraphFormat {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    if parse_pair(first).is_some() {
        GraphFormat::EdgeList
    } else {
        GraphFormat::Graph6
    }
}

/// Parses one graph in either format (for graph6, the first line).
pub fn parse_graph(text: &str, cap: usize) -> Result<Graph, GraphError> {
    match detect_format(text) {
        GraphFormat::EdgeList => edge_list_decode(text, cap),
        GraphFormat::Graph6 => {
            let line = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty())
                .ok_or_else(|| GraphError::Graph6("empty input".into()))?;
            graph6_decode_capped(line, cap)
        }
    }
}
