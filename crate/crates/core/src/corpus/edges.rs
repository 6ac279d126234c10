//! Parser for the SNAP `cit-HepTh` citation edge list.

use std::fs;
use std::path::Path;

use super::{CitationEdge, IngestError, PaperId};

/// Parses a `FromNodeId ToNodeId` edge list. Lines starting with `#` are
/// comments; fields may be separated by tabs or spaces. Malformed lines are
/// skipped and counted, not fatal. Edges come back in file order.
pub fn parse_edge_list(path: &Path) -> Result<(Vec<CitationEdge>, u64), IngestError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| IngestError::io(&display, e))?;
    Ok(parse_edge_lines(&text))
}

/// Line-level parser behind [`parse_edge_list`], usable on in-memory text.
pub fn parse_edge_lines(text: &str) -> (Vec<CitationEdge>, u64) {
    let mut edges = Vec::new();
    let mut malformed = 0u64;
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let edge = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => {
                PaperId::from_node_token(a).and_then(|citing| {
                    PaperId::from_node_token(b).map(|cited| CitationEdge::new(citing, cited))
                })
            }
            _ => Err(IngestError::MalformedLine { line: 0, text: trimmed.to_string() }),
        };
        match edge {
            Ok(edge) => edges.push(edge),
            Err(_) => malformed += 1,
        }
    }
    (edges, malformed)
}
