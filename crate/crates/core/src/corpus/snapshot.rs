//! Corpus snapshots: a directory holding the parsed records as line-delimited
//! JSON, the retained edges in the original two-column format, and the ingest
//! report, so analyses can skip the raw dataset parse.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    build_corpus_with_report, parse_edge_list, Corpus, IngestError, IngestReport, PaperRecord,
};

pub const PAPERS_FILE: &str = "papers.jsonl";
pub const EDGES_FILE: &str = "edges.tsv";
pub const REPORT_FILE: &str = "ingest_report.json";

#[derive(Serialize, Deserialize)]
struct SnapshotRecord<'a> {
    id: u32,
    title: &'a str,
    authors_raw: &'a str,
    r#abstract: &'a str,
}

/// Writes the snapshot files into `dir`, creating it if needed. Output is
/// byte-identical for identical corpora: records ascend by id, edges by
/// (citing, cited).
pub fn write_snapshot(corpus: &Corpus, dir: &Path) -> Result<(), IngestError> {
    let display = dir.display().to_string();
    fs::create_dir_all(dir).map_err(|e| IngestError::io(&display, e))?;

    let papers_path = dir.join(PAPERS_FILE);
    let mut papers = Vec::new();
    for record in corpus.papers.values() {
        let row = SnapshotRecord {
            id: record.id.value(),
            title: &record.title,
            authors_raw: &record.authors_raw,
            r#abstract: &record.abstract_text,
        };
        serde_json::to_writer(&mut papers, &row)
            .map_err(|e| IngestError::CorruptSnapshot(e.to_string()))?;
        papers.push(b'\n');
    }
    fs::write(&papers_path, papers)
        .map_err(|e| IngestError::io(papers_path.display().to_string(), e))?;

    let edges_path = dir.join(EDGES_FILE);
    let mut edges = Vec::new();
    writeln!(edges, "# FromNodeId\tToNodeId").expect("vec write");
    for edge in corpus.graph.edges() {
        writeln!(edges, "{}\t{}", edge.citing, edge.cited).expect("vec write");
    }
    fs::write(&edges_path, edges)
        .map_err(|e| IngestError::io(edges_path.display().to_string(), e))?;

    let report_path = dir.join(REPORT_FILE);
    let report = serde_json::to_string_pretty(&corpus.ingest_report)
        .map_err(|e| IngestError::CorruptSnapshot(e.to_string()))?;
    fs::write(&report_path, report)
        .map_err(|e| IngestError::io(report_path.display().to_string(), e))?;
    Ok(())
}

/// Loads a snapshot directory back into a [`Corpus`], restoring the ingest
/// report recorded at snapshot time.
pub fn load_snapshot(dir: &Path) -> Result<Corpus, IngestError> {
    let papers_path = dir.join(PAPERS_FILE);
    let text = fs::read_to_string(&papers_path)
        .map_err(|e| IngestError::io(papers_path.display().to_string(), e))?;
    let mut records = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: SnapshotRecordOwned = serde_json::from_str(line).map_err(|e| {
            IngestError::CorruptSnapshot(format!("{}:{}: {e}", papers_path.display(), lineno + 1))
        })?;
        records.push(PaperRecord {
            id: super::PaperId::new(row.id)?,
            title: row.title,
            authors_raw: row.authors_raw,
            abstract_text: row.r#abstract,
            date_raw: None,
        });
    }

    let (edges, _) = parse_edge_list(&dir.join(EDGES_FILE))?;

    let report_path = dir.join(REPORT_FILE);
    let report: IngestReport = match fs::read_to_string(&report_path) {
        Ok(text) => serde_json::from_str(&text)
            .map_err(|e| IngestError::CorruptSnapshot(format!("{}: {e}", report_path.display())))?,
        Err(_) => IngestReport::default(),
    };

    // Rebuild through the same path as a fresh ingest; snapshot edges are
    // already filtered so nothing should drop.
    let mut corpus = build_corpus_with_report(records, edges, IngestReport::default());
    corpus.ingest_report = report;
    Ok(corpus)
}

#[derive(Deserialize)]
struct SnapshotRecordOwned {
    id: u32,
    title: String,
    authors_raw: String,
    r#abstract: String,
}

#[cfg(test)]
mod tests {
    use super::super::{build_corpus, CitationEdge, PaperId, PaperRecord};
    use super::*;

    fn toy_corpus() -> Corpus {
        let records = vec![
            PaperRecord {
                id: PaperId::new(1001).unwrap(),
                title: "First".into(),
                authors_raw: "A. Smith".into(),
                abstract_text: "gauge theory".into(),
                date_raw: Some("Mon".into()),
            },
            PaperRecord {
                id: PaperId::new(9_301_002).unwrap(),
                title: "Second".into(),
                authors_raw: "Maria Rossi".into(),
                abstract_text: "string theory".into(),
                date_raw: None,
            },
        ];
        let edges = vec![CitationEdge::new(
            PaperId::new(9_301_002).unwrap(),
            PaperId::new(1001).unwrap(),
        )];
        build_corpus(records, edges)
    }

    #[test]
    fn snapshot_round_trip() {
        let corpus = toy_corpus();
        let dir = tempfile::tempdir().unwrap();
        write_snapshot(&corpus, dir.path()).unwrap();
        let loaded = load_snapshot(dir.path()).unwrap();
        assert_eq!(loaded.paper_count(), 2);
        assert_eq!(loaded.graph.edges(), corpus.graph.edges());
        assert_eq!(loaded.ingest_report, corpus.ingest_report);
        // date_raw is not part of the snapshot format
        assert!(loaded.papers.values().all(|r| r.date_raw.is_none()));
    }

    #[test]
    fn snapshot_bytes_are_deterministic() {
        let corpus = toy_corpus();
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        write_snapshot(&corpus, a.path()).unwrap();
        write_snapshot(&corpus, b.path()).unwrap();
        for name in [PAPERS_FILE, EDGES_FILE, REPORT_FILE] {
            let left = fs::read(a.path().join(name)).unwrap();
            let right = fs::read(b.path().join(name)).unwrap();
            assert_eq!(left, right, "{name} differs");
        }
    }

    #[test]
    fn load_missing_dir_is_io_error() {
        let err = load_snapshot(Path::new("/nonexistent/snapdir")).unwrap_err();
        assert!(matches!(err, IngestError::Io { .. }));
    }
}
