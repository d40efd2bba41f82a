//! graph6 encoding and decoding.
//!
//! Each byte carries six bits offset by 63. The order `n` comes first
//! (one byte for `n <= 62`, `~` plus three bytes up to 258047, `~~` plus six
//! bytes beyond), followed by the upper triangle of the adjacency matrix in
//! column order `x(0,1) x(0,2) x(1,2) x(0,3) ...`, zero-padded to a multiple
//! of six bits.

use thiserror::Error;

use crate::graph::Graph;

pub const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is outside the printable range 63..=126")]
    BadByte { offset: usize, byte: u8 },
    #[error("truncated size prefix")]
    BadLength,
    #[error("expected {expected} data bytes for n = {n}, found {found}")]
    WrongDataLength { n: usize, expected: usize, found: usize },
}

fn push_order(out: &mut Vec<u8>, n: usize) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

/// Encodes a graph as graph6 bytes (no header, no trailing newline).
pub fn encode(g: &Graph) -> Vec<u8> {
    let n = g.order();
    let mut out = Vec::new();
    push_order(&mut out, n);
    let mut acc = 0u8;
    let mut nbits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            nbits += 1;
            if nbits == 6 {
                out.push(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        out.push((acc << (6 - nbits)) + 63);
    }
    out
}

pub fn encode_string(g: &Graph) -> String {
    String::from_utf8(encode(g)).expect("graph6 output is ASCII")
}

/// Decodes one graph6 record. A leading `>>graph6<<` header and trailing
/// whitespace are accepted.
pub fn decode(text: &[u8]) -> Result<Graph, FormatError> {
    let text = text.strip_prefix(HEADER.as_bytes()).unwrap_or(text);
    let end = text
        .iter()
        .rposition(|b| !b.is_ascii_whitespace())
        .map_or(0, |p| p + 1);
    let text = &text[..end];
    if text.is_empty() {
        return Err(FormatError::Empty);
    }
    if let Some(offset) = text.iter().position(|b| !(63..=126).contains(b)) {
        return Err(FormatError::BadByte {
            offset,
            byte: text[offset],
        });
    }
    let (n, data) = if text[0] != 126 {
        ((text[0] - 63) as usize, &text[1..])
    } else if text.len() >= 2 && text[1] == 126 {
        if text.len() < 8 {
            return Err(FormatError::BadLength);
        }
        let n = text[2..8]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        (n, &text[8..])
    } else {
        if text.len() < 4 {
            return Err(FormatError::BadLength);
        }
        let n = text[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        (n, &text[4..])
    };
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if data.len() != expected {
        return Err(FormatError::WrongDataLength {
            n,
            expected,
            found: data.len(),
        });
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::from_edges(n, edges).expect("decoded edges are in range and loop-free"))
}

pub fn decode_str(text: &str) -> Result<Graph, FormatError> {
    decode(text.as_bytes())
}

/// Decodes a newline-separated graph6 stream, skipping blank lines and header
/// markers. Each item carries its 1-based line number.
pub fn decode_lines(text: &str) -> impl Iterator<Item = (usize, Result<Graph, FormatError>)> + '_ {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && *line != HEADER)
        .map(|(i, line)| (i, decode_str(line)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path};

    #[test]
    fn k3_is_bw() {
        assert_eq!(encode_string(&complete(3)), "Bw");
    }

    #[test]
    fn small_known_encodings() {
        assert_eq!(encode_string(&Graph::empty(0)), "?");
        assert_eq!(encode_string(&Graph::empty(1)), "@");
        assert_eq!(encode_string(&path(2)), "A_");
    }

    #[test]
    fn header_and_newline_are_accepted() {
        let g = decode_str(">>graph6<<Bw\n").unwrap();
        assert_eq!(g, complete(3));
    }

    #[test]
    fn rejects_malformed_input() {
        assert_eq!(decode_str(""), Err(FormatError::Empty));
        assert!(matches!(
            decode_str("B w"),
            Err(FormatError::BadByte { offset: 1, .. })
        ));
        assert!(matches!(
            decode_str("Bww"),
            Err(FormatError::WrongDataLength { n: 3, expected: 1, found: 2 })
        ));
        assert_eq!(decode_str("~?"), Err(FormatError::BadLength));
    }

    #[test]
    fn multi_byte_prefix_round_trip() {
        for n in [63, 100] {
            let g = cycle(n);
            let bytes = encode(&g);
            assert_eq!(bytes[0], 126);
            assert_eq!(decode(&bytes).unwrap(), g);
        }
    }

    #[test]
    fn stream_reports_line_numbers() {
        let items: Vec<_> = decode_lines(">>graph6<<\nBw\n\nB!\n").collect();
        assert_eq!(items.len(), 2);
        assert_eq!(items[0].0, 2);
        assert!(items[0].1.is_ok());
        assert_eq!(items[1].0, 4);
        assert!(items[1].1.is_err());
    }
}
