//! Parsing of the SNAP hep-th dataset artifacts and citation graph assembly.
//!
//! Two inputs feed the corpus: the per-paper abstract records (`.abs` files,
//! one record each) and the citation edge list (`FromNodeId ToNodeId` lines).
//! [`build_corpus`] joins them, keeping only edges whose endpoints both have
//! a parsed record, and accounts for every line it drops.

mod abstracts;
mod edges;
mod snapshot;

pub use abstracts::{parse_abstract_archive, parse_abstract_record, AbstractsReport};
pub use edges::{parse_edge_lines, parse_edge_list};
pub use snapshot::{
    load_snapshot, write_snapshot, EDGES_FILE as SNAPSHOT_EDGES_FILE,
    PAPERS_FILE as SNAPSHOT_PAPERS_FILE, REPORT_FILE as SNAPSHOT_REPORT_FILE,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while ingesting dataset files.
#[derive(Debug, Error)]
pub enum IngestError {
    /// Record text does not follow the two-delimiter `.abs` layout.
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    /// The `Paper:` field is not a `hep-th/NNNNNNN` identifier.
    #[error("invalid paper id: {0:?}")]
    InvalidPaperId(String),
    /// An edge-list line holds something other than two integer ids.
    #[error("malformed edge line {line}: {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// A snapshot file failed to deserialize.
    #[error("corrupt snapshot: {0}")]
    CorruptSnapshot(String),
}

impl IngestError {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        IngestError::Io { path: path.into(), source }
    }
}

/// Canonical paper identifier: the integer form of the 7-digit hep-th code.
///
/// `hep-th/9301001` parses to `9301001` and `hep-th/0001001` to `1001`,
/// matching the bare integers used by the edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PaperId(u32);

impl PaperId {
    pub const MAX_DIGITS: u32 = 7;

    /// Builds an id from its integer value. Must be positive with at most
    /// seven decimal digits.
    pub fn new(value: u32) -> Result<Self, IngestError> {
        if value == 0 || value > 9_999_999 {
            return Err(IngestError::InvalidPaperId(value.to_string()));
        }
        Ok(PaperId(value))
    }

    /// Parses the `hep-th/NNNNNNN` form used in the abstract records.
    pub fn from_arxiv(text: &str) -> Result<Self, IngestError> {
        let digits = text
            .strip_prefix("hep-th/")
            .ok_or_else(|| IngestError::InvalidPaperId(text.to_string()))?;
        if digits.len() != 7 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(IngestError::InvalidPaperId(text.to_string()));
        }
        let value: u32 = digits.parse().map_err(|_| IngestError::InvalidPaperId(text.to_string()))?;
        PaperId::new(value)
    }

    /// Parses the bare integer form used by the edge list. Leading zeros
    /// are tolerated; the value must stay in the 7-digit range.
    pub fn from_node_token(token: &str) -> Result<Self, IngestError> {
        if token.is_empty() || token.len() > 12 || !token.bytes().all(|b| b.is_ascii_digit()) {
            return Err(IngestError::InvalidPaperId(token.to_string()));
        }
        let value: u64 =
            token.parse().map_err(|_| IngestError::InvalidPaperId(token.to_string()))?;
        if value == 0 || value > 9_999_999 {
            return Err(IngestError::InvalidPaperId(token.to_string()));
        }
        PaperId::new(value as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// The full archive form, seven digits zero-padded: `hep-th/0001001`.
    pub fn to_arxiv(self) -> String {
        format!("hep-th/{:07}", self.0)
    }
}

impl fmt::Display for PaperId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One parsed abstract record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub id: PaperId,
    pub title: String,
    pub authors_raw: String,
    pub abstract_text: String,
    /// Raw `Date:` field when present; never interpreted.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub date_raw: Option<String>,
}

/// A directed citation: `citing` cites `cited`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CitationEdge {
    pub citing: PaperId,
    pub cited: PaperId,
}

impl CitationEdge {
    pub fn new(citing: PaperId, cited: PaperId) -> Self {
        CitationEdge { citing, cited }
    }
}

/// Directed paper-to-paper citation graph with adjacency indexes.
///
/// Edges form a set (no duplicates); every endpoint of a retained edge has a
/// record in the owning [`Corpus`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CitationGraph {
    edges: Vec<CitationEdge>,
    out_adj: BTreeMap<PaperId, Vec<PaperId>>,
    in_adj: BTreeMap<PaperId, Vec<PaperId>>,
}

impl CitationGraph {
    fn from_unique_sorted(edges: Vec<CitationEdge>) -> Self {
        let mut out_adj: BTreeMap<PaperId, Vec<PaperId>> = BTreeMap::new();
        let mut in_adj: BTreeMap<PaperId, Vec<PaperId>> = BTreeMap::new();
        for e in &edges {
            out_adj.entry(e.citing).or_default().push(e.cited);
            in_adj.entry(e.cited).or_default().push(e.citing);
        }
        // edges are sorted by (citing, cited), so out lists are sorted already
        for targets in in_adj.values_mut() {
            targets.sort_unstable();
        }
        CitationGraph { edges, out_adj, in_adj }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// All edges, sorted by (citing, cited).
    pub fn edges(&self) -> &[CitationEdge] {
        &self.edges
    }

    /// Papers cited by `p`, ascending.
    pub fn cited_by(&self, p: PaperId) -> &[PaperId] {
        self.out_adj.get(&p).map_or(&[], Vec::as_slice)
    }

    /// Papers citing `p`, ascending.
    pub fn citing_of(&self, p: PaperId) -> &[PaperId] {
        self.in_adj.get(&p).map_or(&[], Vec::as_slice)
    }

    pub fn out_degree(&self, p: PaperId) -> usize {
        self.cited_by(p).len()
    }

    pub fn in_degree(&self, p: PaperId) -> usize {
        self.citing_of(p).len()
    }
}

/// Per-ingest accounting. Every line read is classified exactly once, so
/// `edges_parsed = retained + dropped_unknown_endpoint + dropped_self_loop +
/// duplicates` always holds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub files_read: u64,
    pub records_parsed: u64,
    pub records_skipped_malformed: u64,
    pub records_skipped_invalid_id: u64,
    pub records_skipped_duplicate_id: u64,
    /// Non-comment edge lines that parsed into an edge.
    pub edges_parsed: u64,
    pub edge_lines_malformed: u64,
    pub edges_retained: u64,
    pub edges_dropped_unknown_endpoint: u64,
    pub edges_dropped_self_loop: u64,
    pub edges_duplicate: u64,
}

impl IngestReport {
    /// The reconciliation identity over edge classification.
    pub fn reconciles(&self) -> bool {
        self.edges_parsed
            == self.edges_retained
                + self.edges_dropped_unknown_endpoint
                + self.edges_dropped_self_loop
                + self.edges_duplicate
    }
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "files read:                 {}", self.files_read)?;
        writeln!(f, "records parsed:             {}", self.records_parsed)?;
        writeln!(f, "records skipped (malformed):{}", self.records_skipped_malformed)?;
        writeln!(f, "records skipped (bad id):   {}", self.records_skipped_invalid_id)?;
        writeln!(f, "records skipped (dup id):   {}", self.records_skipped_duplicate_id)?;
        writeln!(f, "edge lines parsed:          {}", self.edges_parsed)?;
        writeln!(f, "edge lines malformed:       {}", self.edge_lines_malformed)?;
        writeln!(f, "edges retained:             {}", self.edges_retained)?;
        writeln!(f, "edges dropped (unknown id): {}", self.edges_dropped_unknown_endpoint)?;
        writeln!(f, "edges dropped (self loop):  {}", self.edges_dropped_self_loop)?;
        write!(f, "edges duplicate:            {}", self.edges_duplicate)
    }
}

/// The assembled dataset: records, citation graph, and ingest accounting.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub papers: BTreeMap<PaperId, PaperRecord>,
    pub graph: CitationGraph,
    pub ingest_report: IngestReport,
}

impl Corpus {
    pub fn paper_count(&self) -> usize {
        self.papers.len()
    }

    /// All paper ids, ascending.
    pub fn all_ids(&self) -> BTreeSet<PaperId> {
        self.papers.keys().copied().collect()
    }

    pub fn contains(&self, id: PaperId) -> bool {
        self.papers.contains_key(&id)
    }
}

/// Joins records and raw edges into a [`Corpus`].
///
/// Edges whose endpoints lack a record are dropped and counted, self-loops
/// are dropped and counted, and duplicate (citing, cited) pairs collapse to
/// one edge. Classification order per edge: unknown endpoint, self-loop,
/// duplicate, retained.
pub fn build_corpus(records: Vec<PaperRecord>, edges: Vec<CitationEdge>) -> Corpus {
    build_corpus_with_report(records, edges, IngestReport::default())
}

/// [`build_corpus`] variant that folds edge/record accounting into an
/// existing report carrying parser-side counts.
pub fn build_corpus_with_report(
    records: Vec<PaperRecord>,
    edges: Vec<CitationEdge>,
    mut report: IngestReport,
) -> Corpus {
    let mut papers: BTreeMap<PaperId, PaperRecord> = BTreeMap::new();
    for record in records {
        if let std::collections::btree_map::Entry::Vacant(slot) = papers.entry(record.id) {
            slot.insert(record);
        } else {
            report.records_skipped_duplicate_id += 1;
        }
    }
    report.records_parsed = papers.len() as u64;
    report.edges_parsed = edges.len() as u64;

    let mut retained: BTreeSet<CitationEdge> = BTreeSet::new();
    for edge in edges {
        if !papers.contains_key(&edge.citing) || !papers.contains_key(&edge.cited) {
            report.edges_dropped_unknown_endpoint += 1;
        } else if edge.citing == edge.cited {
            report.edges_dropped_self_loop += 1;
        } else if !retained.insert(edge) {
            report.edges_duplicate += 1;
        }
    }
    report.edges_retained = retained.len() as u64;
    debug_assert!(report.reconciles());

    let graph = CitationGraph::from_unique_sorted(retained.into_iter().collect());
    Corpus { papers, graph, ingest_report: report }
}

/// Full ingest: parses the abstracts tree (or archive) and the edge list,
/// then assembles the corpus with complete accounting.
pub fn ingest(abstracts: &std::path::Path, edges: &std::path::Path) -> Result<Corpus, IngestError> {
    let (records, abs_report) = parse_abstract_archive(abstracts)?;
    let (edge_list, malformed) = parse_edge_list(edges)?;
    let report = IngestReport {
        files_read: abs_report.files_read,
        records_skipped_malformed: abs_report.skipped_malformed,
        records_skipped_invalid_id: abs_report.skipped_invalid_id,
        edge_lines_malformed: malformed,
        ..Default::default()
    };
    Ok(build_corpus_with_report(records, edge_list, report))
}

/// Citing/cited paper counts over a universe, per the paper-centered table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitingCitedSummary {
    pub n_citing: u64,
    pub n_cited: u64,
    pub n_union: u64,
    pub n_intersection: u64,
}

/// Counts universe papers with out-degree >= 1 (citing) and in-degree >= 1
/// (cited), with degrees taken over edges whose endpoints both lie in the
/// universe, plus the union and intersection of the two sets.
pub fn citing_cited_summary(corpus: &Corpus, universe: &BTreeSet<PaperId>) -> CitingCitedSummary {
    let mut citing: BTreeSet<PaperId> = BTreeSet::new();
    let mut cited: BTreeSet<PaperId> = BTreeSet::new();
    for edge in corpus.graph.edges() {
        if universe.contains(&edge.citing) && universe.contains(&edge.cited) {
            citing.insert(edge.citing);
            cited.insert(edge.cited);
        }
    }
    let n_intersection = citing.intersection(&cited).count() as u64;
    let n_union = citing.union(&cited).count() as u64;
    CitingCitedSummary {
        n_citing: citing.len() as u64,
        n_cited: cited.len() as u64,
        n_union,
        n_intersection,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: u32) -> PaperRecord {
        PaperRecord {
            id: PaperId::new(id).unwrap(),
            title: format!("paper {id}"),
            authors_raw: String::new(),
            abstract_text: String::new(),
            date_raw: None,
        }
    }

    fn edge(citing: u32, cited: u32) -> CitationEdge {
        CitationEdge::new(PaperId::new(citing).unwrap(), PaperId::new(cited).unwrap())
    }

    #[test]
    fn paper_id_round_trip() {
        let id = PaperId::from_arxiv("hep-th/0001001").unwrap();
        assert_eq!(id.value(), 1001);
        assert_eq!(id.to_arxiv(), "hep-th/0001001");
        assert_eq!(PaperId::from_arxiv(&id.to_arxiv()).unwrap(), id);

        let id = PaperId::from_arxiv("hep-th/9301001").unwrap();
        assert_eq!(id.value(), 9_301_001);
        assert_eq!(id.to_arxiv(), "hep-th/9301001");
    }

    #[test]
    fn paper_id_rejects_other_archives() {
        assert!(PaperId::from_arxiv("gr-qc/9301001").is_err());
        assert!(PaperId::from_arxiv("hep-th/930100").is_err());
        assert!(PaperId::from_arxiv("hep-th/93010011").is_err());
        assert!(PaperId::from_arxiv("hep-th/0000000").is_err());
        assert!(PaperId::from_arxiv("9301001").is_err());
    }

    #[test]
    fn build_drops_unknown_endpoints() {
        let corpus = build_corpus(vec![record(1), record(2)], vec![edge(1, 2), edge(1, 3)]);
        assert_eq!(corpus.graph.edge_count(), 1);
        assert_eq!(corpus.ingest_report.edges_dropped_unknown_endpoint, 1);
        assert!(corpus.ingest_report.reconciles());
    }

    #[test]
    fn build_collapses_duplicates() {
        let corpus = build_corpus(vec![record(1), record(2)], vec![edge(1, 2), edge(1, 2)]);
        assert_eq!(corpus.graph.edge_count(), 1);
        assert_eq!(corpus.ingest_report.edges_duplicate, 1);
        assert!(corpus.ingest_report.reconciles());
    }

    #[test]
    fn build_drops_self_loops() {
        let corpus = build_corpus(vec![record(1)], vec![edge(1, 1)]);
        assert_eq!(corpus.graph.edge_count(), 0);
        assert_eq!(corpus.ingest_report.edges_dropped_self_loop, 1);
        assert!(corpus.ingest_report.reconciles());
    }

    #[test]
    fn degree_sums_match_edge_count() {
        let corpus = build_corpus(
            (1..=4).map(record).collect(),
            vec![edge(1, 2), edge(3, 2), edge(4, 3)],
        );
        let out_sum: usize = corpus.papers.keys().map(|&p| corpus.graph.out_degree(p)).sum();
        let in_sum: usize = corpus.papers.keys().map(|&p| corpus.graph.in_degree(p)).sum();
        assert_eq!(out_sum, corpus.graph.edge_count());
        assert_eq!(in_sum, corpus.graph.edge_count());
    }

    #[test]
    fn summary_on_chain() {
        // 1 -> 2 -> 3: citing {1,2}, cited {2,3}, union 3, intersection {2}
        let corpus = build_corpus((1..=3).map(record).collect(), vec![edge(1, 2), edge(2, 3)]);
        let s = citing_cited_summary(&corpus, &corpus.all_ids());
        assert_eq!(s, CitingCitedSummary { n_citing: 2, n_cited: 2, n_union: 3, n_intersection: 1 });
        assert_eq!(s.n_union + s.n_intersection, s.n_citing + s.n_cited);
    }

    #[test]
    fn summary_isolated_paper_is_zero() {
        let corpus = build_corpus(vec![record(7)], vec![]);
        let s = citing_cited_summary(&corpus, &corpus.all_ids());
        assert_eq!(s, CitingCitedSummary::default());
    }

    #[test]
    fn summary_respects_universe_restriction() {
        // edge 1->2 leaves the universe when 2 is excluded
        let corpus = build_corpus((1..=3).map(record).collect(), vec![edge(1, 2), edge(2, 3)]);
        let universe: BTreeSet<PaperId> =
            [PaperId::new(1).unwrap(), PaperId::new(3).unwrap()].into_iter().collect();
        let s = citing_cited_summary(&corpus, &universe);
        assert_eq!(s, CitingCitedSummary::default());
    }
}
