//! Interchange formats: graph6 and JSON for graphs, a plain text format,
//! JSON and CSV for matrices, and JSON trace records for k-trees.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::graph::{Clique, SimpleGraph, MAX_VERTICES};
use crate::ktree::KTree;
use crate::linalg::IntMatrix;

// ---------------------------------------------------------------------------
// graph6

/// Encodes a graph in graph6: the size bytes followed by the upper triangle
/// read column by column, six bits per byte, each offset by 63.
pub fn graph_to_graph6(g: &SimpleGraph) -> String {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        out.push(((n >> 12) & 0x3f) as u8 + 63);
        out.push(((n >> 6) & 0x3f) as u8 + 63);
        out.push((n & 0x3f) as u8 + 63);
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
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
    String::from_utf8(out).expect("all bytes are printable ascii")
}

/// Decodes one graph6 line; tolerates the optional `>>graph6<<` header and
/// trailing whitespace.
pub fn graph_from_graph6(text: &str) -> Result<SimpleGraph> {
    let mut s = text.trim();
    if let Some(rest) = s.strip_prefix(">>graph6<<") {
        s = rest;
    }
    let bytes = s.as_bytes();
    let parse_err = |column: usize, message: String| Error::Parse {
        line: 1,
        column,
        message,
    };
    if bytes.is_empty() {
        return Err(parse_err(1, "empty graph6 string".into()));
    }
    let sixbit = |pos: usize| -> Result<usize> {
        let b = bytes[pos];
        if !(63..=126).contains(&b) {
            return Err(parse_err(pos + 1, format!("byte {b} outside graph6 range")));
        }
        Ok((b - 63) as usize)
    };
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(Error::TooLarge(
                "graph6 8-byte size form exceeds supported graph sizes".into(),
            ));
        }
        if bytes.len() < 4 {
            return Err(parse_err(bytes.len(), "truncated graph6 size".into()));
        }
        let n = (sixbit(1)? << 12) | (sixbit(2)? << 6) | sixbit(3)?;
        (n, 4)
    } else {
        (sixbit(0)?, 1)
    };
    if n > MAX_VERTICES {
        return Err(Error::TooLarge(format!(
            "graph6 header declares {n} vertices, limit is {MAX_VERTICES}"
        )));
    }
    let mut g = SimpleGraph::empty(n)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let needed = nbits.div_ceil(6);
    if bytes.len() - pos < needed {
        return Err(parse_err(
            bytes.len(),
            format!("expected {needed} payload bytes, found {}", bytes.len() - pos),
        ));
    }
    if bytes.len() - pos > needed {
        return Err(parse_err(
            pos + needed + 1,
            "trailing bytes after graph6 payload".into(),
        ));
    }
    let mut bit = 0;
    'outer: for j in 1..n {
        for i in 0..j {
            let group = sixbit(pos + bit / 6)?;
            if group & (1 << (5 - bit % 6)) != 0 {
                g.add_edge(i, j)?;
            }
            bit += 1;
            if bit == nbits {
                break 'outer;
            }
        }
    }
    // Padding bits must be zero for a canonical encoding.
    let mut padding = bit;
    while padding % 6 != 0 {
        let group = sixbit(pos + padding / 6)?;
        if group & (1 << (5 - padding % 6)) != 0 {
            return Err(parse_err(pos + padding / 6 + 1, "nonzero padding bits".into()));
        }
        padding += 1;
    }
    pos += needed;
    let _ = pos;
    Ok(g)
}

// ---------------------------------------------------------------------------
// graph JSON

/// `{"n": 3, "edges": [[0,1],[0,2]]}` with `u < v` and edges sorted.
pub fn graph_to_json(g: &SimpleGraph) -> String {
    let edges = g
        .edges()
        .iter()
        .map(|(u, v)| format!("[{u},{v}]"))
        .collect::<Vec<_>>()
        .join(",");
    format!("{{\"n\":{},\"edges\":[{edges}]}}", g.vertex_count())
}

pub fn graph_from_json(text: &str) -> Result<SimpleGraph> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
    let n = value
        .get("n")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| invalid_input("missing integer field \"n\""))? as usize;
    let edges_value = value
        .get("edges")
        .and_then(serde_json::Value::as_array)
        .ok_or_else(|| invalid_input("missing array field \"edges\""))?;
    let mut edges = Vec::with_capacity(edges_value.len());
    for e in edges_value {
        let pair = e
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| invalid_input("edges must be two-element arrays"))?;
        let u = pair[0]
            .as_u64()
            .ok_or_else(|| invalid_input("edge endpoints must be non-negative integers"))?;
        let v = pair[1]
            .as_u64()
            .ok_or_else(|| invalid_input("edge endpoints must be non-negative integers"))?;
        edges.push((u as usize, v as usize));
    }
    SimpleGraph::new(n, &edges)
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn invalid_input(message: &str) -> Error {
    Error::Parse {
        line: 1,
        column: 1,
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// matrix text format

/// First line "rows cols", then one whitespace-separated row per line.
pub fn matrix_to_text(m: &IntMatrix) -> String {
    let mut out = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row = (0..m.cols())
            .map(|j| m.get(i, j).to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&row);
        out.push('\n');
    }
    out
}

pub fn matrix_from_text(text: &str) -> Result<IntMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| invalid_input("empty matrix file"))?;
    let dims = parse_tokens::<usize>(header, 1, "dimension")?;
    if dims.len() != 2 {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("header must be \"rows cols\", found {} tokens", dims.len()),
        });
    }
    let (rows, cols) = (dims[0], dims[1]);
    let mut data: Vec<Vec<BigInt>> = Vec::with_capacity(rows);
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if data.len() == rows {
            return Err(Error::Parse {
                line: idx + 1,
                column: 1,
                message: format!("more than {rows} rows of data"),
            });
        }
        let row = parse_tokens::<BigInt>(line, idx + 1, "integer")?;
        if row.len() != cols {
            return Err(Error::Parse {
                line: idx + 1,
                column: 1,
                message: format!("expected {cols} entries, found {}", row.len()),
            });
        }
        data.push(row);
    }
    if data.len() != rows {
        return Err(Error::Parse {
            line: text.lines().count(),
            column: 1,
            message: format!("expected {rows} rows of data, found {}", data.len()),
        });
    }
    IntMatrix::from_rows(data)
}

fn parse_tokens<T: std::str::FromStr>(line: &str, line_no: usize, what: &str) -> Result<Vec<T>> {
    let mut out = Vec::new();
    let mut column = 1;
    for token in line.split_whitespace() {
        // Column of the token's first character, 1-based.
        column = line[column - 1..]
            .find(token)
            .map(|off| column + off)
            .unwrap_or(column);
        let parsed = token.parse::<T>().map_err(|_| Error::Parse {
            line: line_no,
            column,
            message: format!("invalid {what}: {token:?}"),
        })?;
        out.push(parsed);
        column += token.len();
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// matrix JSON

/// `{"rows": r, "cols": c, "data": [[...], ...]}` with exact integers.
pub fn matrix_to_json(m: &IntMatrix) -> String {
    let rows = (0..m.rows())
        .map(|i| {
            let row = (0..m.cols())
                .map(|j| m.get(i, j).to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!("[{row}]")
        })
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{{\"rows\":{},\"cols\":{},\"data\":[{rows}]}}",
        m.rows(),
        m.cols()
    )
}

pub fn matrix_from_json(text: &str) -> Result<IntMatrix> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
    let rows = value
        .get("rows")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| invalid_input("missing integer field \"rows\""))? as usize;
    let cols = value
        .get("cols")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| invalid_input("missing integer field \"cols\""))? as usize;
    let data = value
        .get("data")
        .and_then(serde_json::Value::as_array)
        .ok_or_else(|| invalid_input("missing array field \"data\""))?;
    if data.len() != rows {
        return Err(invalid_input("\"data\" row count does not match \"rows\""));
    }
    let mut parsed = Vec::with_capacity(rows);
    for row in data {
        let row = row
            .as_array()
            .ok_or_else(|| invalid_input("matrix rows must be arrays"))?;
        if row.len() != cols {
            return Err(invalid_input("row length does not match \"cols\""));
        }
        let mut out = Vec::with_capacity(cols);
        for v in row {
            let number = v
                .as_number()
                .ok_or_else(|| invalid_input("matrix entries must be integers"))?;
            let digits = number.to_string();
            let entry: BigInt = digits
                .parse()
                .map_err(|_| invalid_input(&format!("matrix entry {digits} is not an integer")))?;
            out.push(entry);
        }
        parsed.push(out);
    }
    IntMatrix::from_rows(parsed)
}

// ---------------------------------------------------------------------------
// CSV

/// Comma-separated rows; with labels, the first row and column carry them
/// (labels are concatenated vertex ids, e.g. "03").
pub fn matrix_to_csv(m: &IntMatrix, labels: Option<&[Clique]>) -> String {
    let mut out = String::new();
    if let Some(labels) = labels {
        out.push(',');
        out.push_str(
            &labels
                .iter()
                .map(Clique::label)
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    for i in 0..m.rows() {
        if let Some(labels) = labels {
            out.push_str(&labels[i].label());
            out.push(',');
        }
        let row = (0..m.cols())
            .map(|j| m.get(i, j).to_string())
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&row);
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// k-tree trace records

/// `{"k": 2, "n": 6, "trace": [1, 4, 2]}`; the trace is replayed from the
/// (k+1)-vertex base, and "n" disambiguates the k-vertex base (empty trace).
pub fn ktree_to_json(t: &KTree) -> String {
    let steps = t
        .trace()
        .iter()
        .map(|s| s.target().to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{{\"k\":{},\"n\":{},\"trace\":[{steps}]}}",
        t.k(),
        t.vertex_count()
    )
}

/// Parses a trace record and replays it; the rebuilt object is validated
/// step by step.
pub fn ktree_from_json(text: &str) -> Result<KTree> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
    let k = value
        .get("k")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| invalid_input("missing integer field \"k\""))? as usize;
    let steps_value = value
        .get("trace")
        .and_then(serde_json::Value::as_array)
        .ok_or_else(|| invalid_input("missing array field \"trace\""))?;
    let mut steps = Vec::with_capacity(steps_value.len());
    for s in steps_value {
        let i = s
            .as_u64()
            .ok_or_else(|| invalid_input("trace steps must be positive integers"))?;
        steps.push(i as usize);
    }
    let n = value.get("n").and_then(serde_json::Value::as_u64);
    match n {
        Some(n) if n as usize == k && steps.is_empty() => KTree::trivial(k),
        Some(n) if n as usize != k + 1 + steps.len() => Err(Error::ContractViolation(format!(
            "record claims n={n} but the trace rebuilds {} vertices",
            k + 1 + steps.len()
        ))),
        _ => KTree::from_trace(k, &steps),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph6_known_vector() {
        // 5 vertices, edges 02 04 13 34.
        let g = SimpleGraph::new(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap();
        assert_eq!(graph_to_graph6(&g), "DQc");
        let back = graph_from_graph6("DQc").unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn graph6_round_trips() {
        for g in [
            SimpleGraph::empty(1).unwrap(),
            SimpleGraph::empty(2).unwrap(),
            SimpleGraph::complete(7).unwrap(),
            SimpleGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
        ] {
            let encoded = graph_to_graph6(&g);
            assert_eq!(graph_from_graph6(&encoded).unwrap(), g);
        }
    }

    #[test]
    fn graph6_with_header_and_newline() {
        let g = SimpleGraph::complete(3).unwrap();
        let line = format!(">>graph6<<{}\n", graph_to_graph6(&g));
        assert_eq!(graph_from_graph6(&line).unwrap(), g);
    }

    #[test]
    fn graph6_long_size_form() {
        let g = SimpleGraph::empty(63).unwrap();
        let encoded = graph_to_graph6(&g);
        assert!(encoded.starts_with('~'));
        assert_eq!(graph_from_graph6(&encoded).unwrap().vertex_count(), 63);
    }

    #[test]
    fn graph6_rejects_garbage() {
        assert!(graph_from_graph6("").is_err());
        assert!(graph_from_graph6("D").is_err()); // truncated payload
        assert!(matches!(
            graph_from_graph6("~~~~~~~~"),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn graph_json_round_trip() {
        let g = SimpleGraph::new(4, &[(2, 3), (0, 1)]).unwrap();
        let json = graph_to_json(&g);
        assert_eq!(json, "{\"n\":4,\"edges\":[[0,1],[2,3]]}");
        assert_eq!(graph_from_json(&json).unwrap(), g);
        assert!(graph_from_json("{\"edges\":[]}").is_err());
    }

    #[test]
    fn matrix_text_round_trip() {
        let m = IntMatrix::from_i64_rows(&[vec![0, 1], vec![-7, 12345678901234567]]).unwrap();
        let text = matrix_to_text(&m);
        assert_eq!(text, "2 2\n0 1\n-7 12345678901234567\n");
        assert_eq!(matrix_from_text(&text).unwrap(), m);
    }

    #[test]
    fn matrix_text_diagnostics() {
        let err = matrix_from_text("2 2\n1 2\n3 x\n").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert_eq!(column, 3);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matrix_from_text("2\n").is_err());
        assert!(matrix_from_text("2 2\n1 2\n").is_err());
        assert!(matrix_from_text("1 1\n1 2\n").is_err());
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = IntMatrix::from_i64_rows(&[vec![1, -2], vec![3, 4]]).unwrap();
        let json = matrix_to_json(&m);
        assert_eq!(json, "{\"rows\":2,\"cols\":2,\"data\":[[1,-2],[3,4]]}");
        assert_eq!(matrix_from_json(&json).unwrap(), m);
        // Entries beyond 64 bits survive.
        let big = "{\"rows\":1,\"cols\":1,\"data\":[[123456789012345678901234567890]]}";
        let parsed = matrix_from_json(big).unwrap();
        assert_eq!(
            parsed.get(0, 0).to_string(),
            "123456789012345678901234567890"
        );
        assert!(matrix_from_json("{\"rows\":1,\"cols\":2,\"data\":[[1]]}").is_err());
    }

    #[test]
    fn csv_with_labels() {
        let m = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        let labels = vec![Clique::new(&[0, 3]).unwrap(), Clique::new(&[1, 3]).unwrap()];
        assert_eq!(
            matrix_to_csv(&m, Some(&labels)),
            ",03,13\n03,0,1\n13,1,0\n"
        );
        assert_eq!(matrix_to_csv(&m, None), "0,1\n1,0\n");
    }

    #[test]
    fn trace_records_round_trip() {
        let t = KTree::from_trace(2, &[1, 4]).unwrap();
        let json = ktree_to_json(&t);
        assert_eq!(json, "{\"k\":2,\"n\":5,\"trace\":[1,4]}");
        assert_eq!(ktree_from_json(&json).unwrap(), t);

        let trivial = KTree::trivial(3).unwrap();
        let json = ktree_to_json(&trivial);
        assert_eq!(ktree_from_json(&json).unwrap(), trivial);

        // Records without "n" replay from the base.
        let t2 = ktree_from_json("{\"k\":2,\"trace\":[1]}").unwrap();
        assert_eq!(t2.vertex_count(), 4);

        assert!(ktree_from_json("{\"k\":2,\"n\":9,\"trace\":[1]}").is_err());
        assert!(ktree_from_json("{\"k\":2,\"n\":5,\"trace\":[1,99]}").is_err());
    }
}
