//! Name-based gender classification and gendered views of the corpus.
//!
//! Classification runs a given name against a historical name table
//! (`name, proportion_female, count` rows) under a confidence threshold.
//! A paper is gendered when its first author's gender resolved; a link is
//! gendered when both endpoint papers are.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::authorship::{normalize_name, AuthorTable};
use crate::corpus::{CitationEdge, Corpus, PaperId};

#[derive(Debug, Error)]
pub enum GenderError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("name table has no header row")]
    MissingHeader,
    #[error("invalid gender config: {0}")]
    InvalidConfig(String),
}

/// Three-way gender label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GenderLabel {
    Female,
    Male,
    Unknown,
}

impl GenderLabel {
    pub fn is_known(self) -> bool {
        self != GenderLabel::Unknown
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GenderLabel::Female => "female",
            GenderLabel::Male => "male",
            GenderLabel::Unknown => "unknown",
        }
    }
}

/// Classification knobs. The threshold is the minimum female (or male)
/// proportion required to assign a label; names observed fewer than
/// `min_count` times stay unknown.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenderConfig {
    pub threshold: f64,
    pub min_count: u64,
}

impl Default for GenderConfig {
    fn default() -> Self {
        GenderConfig { threshold: 0.95, min_count: 5 }
    }
}

impl GenderConfig {
    pub fn validate(&self) -> Result<(), GenderError> {
        if !(self.threshold > 0.5 && self.threshold <= 1.0) {
            return Err(GenderError::InvalidConfig(format!(
                "threshold must be in (0.5, 1], got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct NameEntry {
    proportion_female: f64,
    count: u64,
}

/// Given-name table: case- and diacritic-insensitive lookup of the female
/// proportion observed for a name in historical records.
#[derive(Debug, Clone, Default)]
pub struct NameGenderTable {
    entries: HashMap<String, NameEntry>,
}

impl NameGenderTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn proportion_female(&self, given: &str) -> Option<f64> {
        self.entries.get(&normalize_name(given)).map(|e| e.proportion_female)
    }

    /// Inserts an entry; a repeated name merges by count-weighted average.
    pub fn insert(&mut self, name: &str, proportion_female: f64, count: u64) {
        let key = normalize_name(name);
        if key.is_empty() || count == 0 || !(0.0..=1.0).contains(&proportion_female) {
            return;
        }
        self.entries
            .entry(key)
            .and_modify(|e| {
                let total = e.count + count;
                e.proportion_female = (e.proportion_female * e.count as f64
                    + proportion_female * count as f64)
                    / total as f64;
                e.count = total;
            })
            .or_insert(NameEntry { proportion_female, count });
    }
}

/// Loads a delimiter-separated name table with a `name, proportion_female,
/// count` header. Returns the table and the number of malformed rows
/// skipped. The delimiter (comma, tab, or semicolon) is sniffed from the
/// header row.
pub fn load_name_table(path: &Path) -> Result<(NameGenderTable, u64), GenderError> {
    let display = path.display().to_string();
    let text =
        fs::read_to_string(path).map_err(|e| GenderError::Io { path: display, source: e })?;
    parse_name_table(&text)
}

/// Text-level parser behind [`load_name_table`].
pub fn parse_name_table(text: &str) -> Result<(NameGenderTable, u64), GenderError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or(GenderError::MissingHeader)?;
    let delim = if header.contains('\t') {
        '\t'
    } else if header.contains(';') {
        ';'
    } else {
        ','
    };

    let mut table = NameGenderTable::default();
    let mut skipped = 0u64;
    for line in lines {
        let cols: Vec<&str> = line.split(delim).map(str::trim).collect();
        if cols.len() != 3 {
            skipped += 1;
            continue;
        }
        let (Ok(prop), Ok(count)) = (cols[1].parse::<f64>(), cols[2].parse::<u64>()) else {
            skipped += 1;
            continue;
        };
        if cols[0].is_empty() || !(0.0..=1.0).contains(&prop) || count == 0 {
            skipped += 1;
            continue;
        }
        table.insert(cols[0], prop, count);
    }
    Ok((table, skipped))
}

/// Classifies one given name. Empty names, initials, unlisted names, and
/// names under the observation floor stay unknown; otherwise the proportion
/// decides against the threshold.
pub fn classify_given_name(
    given: &str,
    table: &NameGenderTable,
    cfg: &GenderConfig,
) -> GenderLabel {
    let normalized = normalize_name(given);
    if normalized.is_empty()
        || normalized.contains('.')
        || normalized.chars().filter(|c| c.is_alphabetic()).count() < 2
    {
        return GenderLabel::Unknown;
    }
    let Some(entry) = table.entries.get(&normalized) else {
        return GenderLabel::Unknown;
    };
    if entry.count < cfg.min_count {
        return GenderLabel::Unknown;
    }
    if entry.proportion_female >= cfg.threshold {
        GenderLabel::Female
    } else if entry.proportion_female <= 1.0 - cfg.threshold {
        GenderLabel::Male
    } else {
        GenderLabel::Unknown
    }
}

/// Gender labels resolved for every author and paper of a corpus.
#[derive(Debug, Clone, Default)]
pub struct GenderAssignment {
    /// Label per author, parallel to the author table records.
    pub author_labels: Vec<GenderLabel>,
    /// Label per paper: its first author's label, `Unknown` when authorless.
    pub paper_labels: BTreeMap<PaperId, GenderLabel>,
}

impl GenderAssignment {
    pub fn paper_label(&self, id: PaperId) -> GenderLabel {
        self.paper_labels.get(&id).copied().unwrap_or(GenderLabel::Unknown)
    }

    pub fn is_gendered_paper(&self, id: PaperId) -> bool {
        self.paper_label(id).is_known()
    }

    /// Ids of gendered papers, ascending.
    pub fn gendered_papers(&self) -> BTreeSet<PaperId> {
        self.paper_labels
            .iter()
            .filter(|(_, label)| label.is_known())
            .map(|(id, _)| *id)
            .collect()
    }

    /// Ids of papers with the given label, ascending.
    pub fn papers_with_label(&self, label: GenderLabel) -> BTreeSet<PaperId> {
        self.paper_labels
            .iter()
            .filter(|(_, l)| **l == label)
            .map(|(id, _)| *id)
            .collect()
    }
}

/// Classifies every author in the table and derives paper labels from first
/// authors.
pub fn infer_genders(
    corpus: &Corpus,
    authors: &AuthorTable,
    table: &NameGenderTable,
    cfg: &GenderConfig,
) -> GenderAssignment {
    let author_labels: Vec<GenderLabel> = authors
        .records()
        .iter()
        .map(|r| classify_given_name(&r.name.given, table, cfg))
        .collect();

    let mut paper_labels = BTreeMap::new();
    for &id in corpus.papers.keys() {
        let label = authors
            .first_author(id)
            .map(|r| author_labels[(r.author_id - 1) as usize])
            .unwrap_or(GenderLabel::Unknown);
        paper_labels.insert(id, label);
    }
    GenderAssignment { author_labels, paper_labels }
}

/// Edges whose citing and cited papers are both gendered, in graph order.
pub fn gendered_link_filter(corpus: &Corpus, genders: &GenderAssignment) -> Vec<CitationEdge> {
    corpus
        .graph
        .edges()
        .iter()
        .filter(|e| genders.is_gendered_paper(e.citing) && genders.is_gendered_paper(e.cited))
        .copied()
        .collect()
}

/// Corpus-level coverage percentages after gender resolution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub pct_gendered_papers: f64,
    pub pct_gendered_links: f64,
    pub avg_papers_per_gendered_author: f64,
    pub pct_female_citing: f64,
    pub pct_male_citing: f64,
    pub pct_female_cited: f64,
    pub pct_male_cited: f64,
}

fn pct(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

/// Computes the coverage report. Citing/cited author percentages run over
/// distinct gendered first authors whose first-authored papers have
/// out-degree (citing) or in-degree (cited) of at least one.
pub fn gender_coverage_report(
    corpus: &Corpus,
    authors: &AuthorTable,
    genders: &GenderAssignment,
) -> CoverageReport {
    let n_papers = corpus.paper_count() as u64;
    let n_gendered_papers =
        genders.paper_labels.values().filter(|l| l.is_known()).count() as u64;
    let n_links = corpus.graph.edge_count() as u64;
    let n_gendered_links = gendered_link_filter(corpus, genders).len() as u64;

    let mut gendered_authors = 0u64;
    let mut gendered_author_papers = 0u64;
    let mut citing = [0u64; 2]; // [female, male]
    let mut cited = [0u64; 2];
    for (record, label) in authors.records().iter().zip(&genders.author_labels) {
        if !label.is_known() {
            continue;
        }
        gendered_authors += 1;
        gendered_author_papers += record.papers_first_authored.len() as u64;
        let slot = if *label == GenderLabel::Female { 0 } else { 1 };
        let cites = record
            .papers_first_authored
            .iter()
            .any(|&p| corpus.graph.out_degree(p) > 0);
        let is_cited = record
            .papers_first_authored
            .iter()
            .any(|&p| corpus.graph.in_degree(p) > 0);
        if cites {
            citing[slot] += 1;
        }
        if is_cited {
            cited[slot] += 1;
        }
    }

    CoverageReport {
        pct_gendered_papers: pct(n_gendered_papers, n_papers),
        pct_gendered_links: pct(n_gendered_links, n_links),
        avg_papers_per_gendered_author: if gendered_authors == 0 {
            0.0
        } else {
            gendered_author_papers as f64 / gendered_authors as f64
        },
        pct_female_citing: pct(citing[0], citing[0] + citing[1]),
        pct_male_citing: pct(citing[1], citing[0] + citing[1]),
        pct_female_cited: pct(cited[0], cited[0] + cited[1]),
        pct_male_cited: pct(cited[1], cited[0] + cited[1]),
    }
}
