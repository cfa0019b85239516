//! graph6 short-form codec.
//!
//! Bit stream order is column-major over the upper triangle:
//! `(0,1), (0,2), (1,2), (0,3), ...`, six bits per byte, most significant
//! first, each byte offset by 63.

use std::fs;
use std::path::Path;

use super::{Graph, GraphError, MAX_N};

const BIAS: u8 = 63;

fn data_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

pub fn g6_decode(text: &str) -> Result<Graph, GraphError> {
    let text = text.strip_suffix('\n').unwrap_or(text);
    let text = text.strip_suffix('\r').unwrap_or(text);
    let bytes = text.as_bytes();
    let first = *bytes.first().ok_or(GraphError::EmptyInput)?;
    if first == b':' || first == b'~' || first == b'>' {
        return Err(GraphError::UnsupportedFormat { offset: 0 });
    }
    if !(BIAS..=126).contains(&first) {
        return Err(GraphError::ByteOutOfRange { offset: 0, byte: first });
    }
    let n = (first - BIAS) as usize;
    if n == 0 || n > MAX_N {
        return Err(GraphError::VertexCount(n));
    }
    let expected = data_len(n);
    let data = &bytes[1..];
    for (k, &b) in data.iter().enumerate().take(expected) {
        if !(BIAS..=126).contains(&b) {
            return Err(GraphError::ByteOutOfRange { offset: k + 1, byte: b });
        }
    }
    if data.len() < expected {
        return Err(GraphError::Truncated { n, expected, found: data.len(), offset: bytes.len() });
    }
    if data.len() > expected {
        return Err(GraphError::TrailingGarbage { offset: 1 + expected });
    }

    let total_bits = n * (n - 1) / 2;
    let mut g = Graph::empty(n)?;
    let mut k = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - BIAS;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    if expected > 0 {
        let used = total_bits - 6 * (expected - 1);
        let pad_mask = (1u8 << (6 - used)) - 1;
        if (data[expected - 1] - BIAS) & pad_mask != 0 {
            return Err(GraphError::NonzeroPadding { offset: expected });
        }
    }
    Ok(g)
}

pub fn g6_encode(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(1 + data_len(n));
    out.push(BIAS + n as u8);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(BIAS + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(BIAS + (acc << (6 - filled)));
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

/// Reads one graph per line. LF and CRLF line endings are accepted; blank
/// lines and comments are not.
pub fn read_g6_file(path: &Path) -> Result<Vec<Graph>, GraphError> {
    let text = fs::read_to_string(path).map_err(|e| GraphError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut graphs = Vec::new();
    for (idx, line) in text.split_inclusive('\n').enumerate() {
        let g = g6_decode(line).map_err(|e| GraphError::FileLine {
            path: path.display().to_string(),
            line: idx + 1,
            source: Box::new(e),
        })?;
        graphs.push(g);
    }
    Ok(graphs)
}

pub fn write_g6_file(path: &Path, graphs: &[Graph]) -> Result<(), GraphError> {
    let mut text = String::with_capacity(graphs.len() * 8);
    for g in graphs {
        text.push_str(&g6_encode(g));
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| GraphError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use proptest::prelude::*;

    #[test]
    fn decodes_quad_c5() {
        let g = g6_decode("GCQb`o").unwrap();
        assert_eq!(
            g.edges(),
            vec![(0, 3), (0, 5), (1, 4), (1, 6), (2, 5), (2, 6), (2, 7), (3, 6), (3, 7), (4, 7)]
        );
        assert_eq!(g6_encode(&g), "GCQb`o");
        assert_eq!(g6_encode(&named::quad_c5()), "GCQb`o");
    }

    #[test]
    fn single_vertex() {
        let g = g6_decode("@").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g6_encode(&g), "@");
    }

    #[test]
    fn extremes_round_trip() {
        let e8 = Graph::empty(8).unwrap();
        assert_eq!(g6_decode(&g6_encode(&e8)).unwrap().edge_count(), 0);
        let k8 = Graph::complete(8).unwrap();
        assert_eq!(g6_decode(&g6_encode(&k8)).unwrap().edge_count(), 28);
        let k32 = Graph::complete(32).unwrap();
        assert_eq!(g6_decode(&g6_encode(&k32)).unwrap(), k32);
    }

    #[test]
    fn known_small_strings() {
        // Path 0-1-2 and the triangle, as produced by nauty's geng.
        assert_eq!(g6_encode(&Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()), "Bg");
        assert_eq!(g6_encode(&Graph::complete(3).unwrap()), "Bw");
        assert_eq!(g6_encode(&Graph::cycle(5).unwrap()), "Dhc");
    }

    #[test]
    fn parse_errors_name_offsets() {
        assert_eq!(g6_decode(""), Err(GraphError::EmptyInput));
        assert_eq!(g6_decode("GCQb`"), Err(GraphError::Truncated { n: 8, expected: 5, found: 4, offset: 5 }));
        assert_eq!(g6_decode("GCQb`oo"), Err(GraphError::TrailingGarbage { offset: 6 }));
        assert_eq!(g6_decode("GCQ b`"), Err(GraphError::ByteOutOfRange { offset: 3, byte: b' ' }));
        assert_eq!(g6_decode(":Fa@x^"), Err(GraphError::UnsupportedFormat { offset: 0 }));
        assert_eq!(g6_decode("~??~"), Err(GraphError::UnsupportedFormat { offset: 0 }));
        // 'B' with data 'h' = 0b101001 has padding bits set for n = 3.
        assert_eq!(g6_decode("Bh"), Err(GraphError::NonzeroPadding { offset: 1 }));
        assert_eq!(g6_decode("?"), Err(GraphError::VertexCount(0)));
    }

    #[test]
    fn accepts_line_endings() {
        assert_eq!(g6_decode("GCQb`o\r\n").unwrap(), named::quad_c5());
        assert_eq!(g6_decode("GCQb`o\n").unwrap(), named::quad_c5());
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("ctxgap-g6-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("x.g6");
        let gs = vec![named::quad_c5(), named::wagner(), Graph::cycle(5).unwrap()];
        write_g6_file(&path, &gs).unwrap();
        assert_eq!(read_g6_file(&path).unwrap(), gs);
        std::fs::write(&path, "GCQb`o\r\nDhc\r\n").unwrap();
        assert_eq!(read_g6_file(&path).unwrap().len(), 2);
        std::fs::write(&path, "GCQb`o\n# comment\n").unwrap();
        assert!(matches!(read_g6_file(&path), Err(GraphError::FileLine { line: 2, .. })));
        std::fs::remove_dir_all(&dir).ok();
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..=8).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut g = Graph::empty(n).unwrap();
                let mut k = 0;
                for j in 1..n {
                    for i in 0..j {
                        if bits[k] {
                            g.add_edge(i, j).unwrap();
                        }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(g in arb_graph()) {
            prop_assert_eq!(g6_decode(&g6_encode(&g)).unwrap(), g);
        }
    }
}
