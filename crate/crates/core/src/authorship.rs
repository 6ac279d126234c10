//! Author-field parsing and per-author citation aggregation.
//!
//! Author identity is the exact normalized full-name string: case-folded,
//! diacritics stripped, TeX accent macros removed, single-spaced. No fuzzy
//! matching or initials merging happens anywhere, so "j. smith" and
//! "john smith" stay distinct authors.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::corpus::{Corpus, PaperId};

/// One parsed author name.
///
/// `given` is the first token of the normalized name when that token is a
/// genderable given name; bare or dotted initials yield an empty `given`
/// with the whole name kept in `family`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AuthorName {
    pub given: String,
    pub family: String,
    pub normalized_full: String,
}

impl AuthorName {
    fn from_fragment(fragment: &str) -> Option<Self> {
        let normalized_full = normalize_name(fragment);
        if normalized_full.is_empty() {
            return None;
        }
        let mut tokens = normalized_full.split(' ');
        let first = tokens.next().unwrap_or_default();
        if is_genderable_given(first) {
            Some(AuthorName {
                given: first.to_string(),
                family: tokens.collect::<Vec<_>>().join(" "),
                normalized_full,
            })
        } else {
            Some(AuthorName {
                given: String::new(),
                family: normalized_full.clone(),
                normalized_full,
            })
        }
    }
}

/// A token works as a given name if it spells at least two letters and is
/// not a dotted initial sequence ("a.", "a.b.").
fn is_genderable_given(token: &str) -> bool {
    !token.contains('.') && token.chars().filter(|c| c.is_alphabetic()).count() >= 2
}

/// Case-folds, strips TeX accent macros and diacritics, and collapses
/// whitespace runs to single spaces.
pub fn normalize_name(raw: &str) -> String {
    let detexed = strip_tex_macros(raw);
    let stripped: String = detexed.nfd().filter(|c| !is_combining_mark(*c)).collect();
    stripped
        .to_lowercase()
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

/// Removes TeX control words (backslash plus letters) and accent macros
/// (backslash plus one non-letter character), and drops braces. The base
/// letter of an accent survives: `Ara\'ujo` becomes `Araujo`.
fn strip_tex_macros(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.peek() {
                Some(n) if n.is_ascii_alphabetic() => {
                    while chars.peek().is_some_and(|n| n.is_ascii_alphabetic()) {
                        chars.next();
                    }
                }
                Some(_) => {
                    chars.next();
                }
                None => {}
            },
            '{' | '}' => {}
            _ => out.push(c),
        }
    }
    out
}

/// Removes parenthesized segments (affiliations), honoring nesting. An
/// unmatched open parenthesis truncates the rest of the string.
fn strip_parenthesized(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut depth = 0usize;
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out
}

/// Splits a raw `Authors:` field into ordered author names.
///
/// Affiliations in parentheses are removed first; the remainder splits on
/// commas, the word "and" surrounded by spaces, and ampersands. Empty
/// fragments drop out; order is preserved (first author first).
pub fn split_author_field(authors_raw: &str) -> Vec<AuthorName> {
    let cleaned = strip_parenthesized(&strip_tex_macros(authors_raw)).to_lowercase();
    let separated = cleaned.replace(" and ", ",").replace('&', ",");
    separated
        .split(',')
        .filter_map(AuthorName::from_fragment)
        .collect()
}

/// One aggregated first-author entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorRecord {
    /// Ordinal by alphabetical rank of `normalized_full`, starting at 1.
    pub author_id: u32,
    pub name: AuthorName,
    pub papers_first_authored: BTreeSet<PaperId>,
    /// Citations made from first-authored papers to papers that also have a
    /// first author.
    pub citations_made: u64,
    /// Citations received on first-authored papers from papers that also
    /// have a first author.
    pub citations_received: u64,
}

/// All first authors of a corpus, ordered alphabetically by normalized name.
#[derive(Debug, Clone, Default)]
pub struct AuthorTable {
    records: Vec<AuthorRecord>,
    index_by_name: BTreeMap<String, usize>,
    first_author_of: BTreeMap<PaperId, usize>,
}

impl AuthorTable {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records in author-id (alphabetical) order.
    pub fn records(&self) -> &[AuthorRecord] {
        &self.records
    }

    pub fn by_name(&self, normalized_full: &str) -> Option<&AuthorRecord> {
        self.index_by_name.get(normalized_full).map(|&i| &self.records[i])
    }

    /// The first author of a paper, if the paper has any authors.
    pub fn first_author(&self, paper: PaperId) -> Option<&AuthorRecord> {
        self.first_author_of.get(&paper).map(|&i| &self.records[i])
    }
}

/// Builds the first-author table: one record per distinct normalized
/// full name among first authors, with citation counts aggregated over the
/// subgraph of papers that have a first author.
pub fn assign_author_ids(corpus: &Corpus) -> AuthorTable {
    let mut first_names: BTreeMap<PaperId, AuthorName> = BTreeMap::new();
    for (id, record) in &corpus.papers {
        let mut authors = split_author_field(&record.authors_raw);
        if !authors.is_empty() {
            first_names.insert(*id, authors.remove(0));
        }
    }

    let mut distinct: BTreeMap<String, AuthorName> = BTreeMap::new();
    for name in first_names.values() {
        distinct.entry(name.normalized_full.clone()).or_insert_with(|| name.clone());
    }

    let mut records: Vec<AuthorRecord> = distinct
        .into_values()
        .enumerate()
        .map(|(i, name)| AuthorRecord {
            author_id: (i + 1) as u32,
            name,
            papers_first_authored: BTreeSet::new(),
            citations_made: 0,
            citations_received: 0,
        })
        .collect();

    let index_by_name: BTreeMap<String, usize> = records
        .iter()
        .enumerate()
        .map(|(i, r)| (r.name.normalized_full.clone(), i))
        .collect();

    let mut first_author_of: BTreeMap<PaperId, usize> = BTreeMap::new();
    for (paper, name) in &first_names {
        let idx = index_by_name[&name.normalized_full];
        first_author_of.insert(*paper, idx);
        records[idx].papers_first_authored.insert(*paper);
    }

    // Citation aggregation over edges whose papers both have a first author.
    for edge in corpus.graph.edges() {
        let (Some(&citing_idx), Some(&cited_idx)) =
            (first_author_of.get(&edge.citing), first_author_of.get(&edge.cited))
        else {
            continue;
        };
        records[citing_idx].citations_made += 1;
        records[cited_idx].citations_received += 1;
    }

    AuthorTable { records, index_by_name, first_author_of }
}
