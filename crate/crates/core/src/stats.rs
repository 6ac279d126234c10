//! Descriptive statistics: paper- and author-centered summary tables,
//! self-citation rates, per-author distribution series, and the pairwise
//! correlations between productivity and citation counts.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::authorship::{split_author_field, AuthorTable};
use crate::corpus::{citing_cited_summary, Corpus, PaperId};
use crate::gender::{
    classify_given_name, gender_coverage_report, gendered_link_filter, GenderAssignment,
    GenderConfig, GenderLabel, NameGenderTable,
};
use crate::math::{pearson, CorrelationError};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("empty edge set")]
    EmptyEdgeSet,
    #[error(transparent)]
    Correlation(#[from] CorrelationError),
}

/// One column of the paper-centered table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseCounts {
    pub papers: u64,
    pub citations: u64,
    pub citing: u64,
    pub cited: u64,
    pub union_size: u64,
    pub intersection_size: u64,
}

/// Paper-centered counts for the full corpus and its gendered restriction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperCenteredSummary {
    pub all: UniverseCounts,
    pub gendered: UniverseCounts,
}

/// Paper-centered summary: all-papers column and gendered column, the
/// latter with degrees over gendered links only.
pub fn paper_centered_summary(
    corpus: &Corpus,
    genders: &GenderAssignment,
) -> PaperCenteredSummary {
    let all_ids = corpus.all_ids();
    let all_summary = citing_cited_summary(corpus, &all_ids);
    let all = UniverseCounts {
        papers: all_ids.len() as u64,
        citations: corpus.graph.edge_count() as u64,
        citing: all_summary.n_citing,
        cited: all_summary.n_cited,
        union_size: all_summary.n_union,
        intersection_size: all_summary.n_intersection,
    };

    let gendered_ids = genders.gendered_papers();
    let gendered_summary = citing_cited_summary(corpus, &gendered_ids);
    let gendered = UniverseCounts {
        papers: gendered_ids.len() as u64,
        citations: gendered_link_filter(corpus, genders).len() as u64,
        citing: gendered_summary.n_citing,
        cited: gendered_summary.n_cited,
        union_size: gendered_summary.n_union,
        intersection_size: gendered_summary.n_intersection,
    };
    PaperCenteredSummary { all, gendered }
}

/// Counts split by gender label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenderBreakdown {
    pub all: u64,
    pub female: u64,
    pub male: u64,
    pub missing: u64,
}

impl GenderBreakdown {
    fn add(&mut self, label: GenderLabel) {
        self.all += 1;
        match label {
            GenderLabel::Female => self.female += 1,
            GenderLabel::Male => self.male += 1,
            GenderLabel::Unknown => self.missing += 1,
        }
    }

    pub fn partitions(&self) -> bool {
        self.all == self.female + self.male + self.missing
    }
}

/// Author-centered table: distinct first and second authors by gender, and
/// the citing/cited percentage split among gendered first authors.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AuthorCenteredSummary {
    pub first_authors: GenderBreakdown,
    pub second_authors: GenderBreakdown,
    pub pct_citing_female: f64,
    pub pct_citing_male: f64,
    pub pct_cited_female: f64,
    pub pct_cited_male: f64,
}

/// Builds the author-centered table. Second authors are parsed on the fly
/// (they carry no author records) and deduplicated by normalized name.
pub fn author_centered_summary(
    corpus: &Corpus,
    authors: &AuthorTable,
    genders: &GenderAssignment,
    table: &NameGenderTable,
    cfg: &GenderConfig,
) -> AuthorCenteredSummary {
    let mut first = GenderBreakdown::default();
    for label in &genders.author_labels {
        first.add(*label);
    }

    let mut second_seen: BTreeMap<String, GenderLabel> = BTreeMap::new();
    for record in corpus.papers.values() {
        let names = split_author_field(&record.authors_raw);
        if let Some(second) = names.get(1) {
            second_seen
                .entry(second.normalized_full.clone())
                .or_insert_with(|| classify_given_name(&second.given, table, cfg));
        }
    }
    let mut second = GenderBreakdown::default();
    for label in second_seen.values() {
        second.add(*label);
    }

    let coverage = gender_coverage_report(corpus, authors, genders);
    AuthorCenteredSummary {
        first_authors: first,
        second_authors: second,
        pct_citing_female: coverage.pct_female_citing,
        pct_citing_male: coverage.pct_male_citing,
        pct_cited_female: coverage.pct_female_cited,
        pct_cited_male: coverage.pct_male_cited,
    }
}

/// How self-citations match author identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelfCitationMode {
    /// Citing and cited papers share the same first author.
    #[default]
    FirstAuthor,
    /// Any author name overlaps between the two papers.
    AnyAuthor,
}

/// Fraction of edges whose endpoint papers share an author. `filter`
/// restricts the edge set to edges whose citing paper's first author has
/// that gender; the rate is taken over the restricted set.
pub fn self_citation_rate(
    corpus: &Corpus,
    authors: &AuthorTable,
    genders: &GenderAssignment,
    filter: Option<GenderLabel>,
    mode: SelfCitationMode,
) -> Result<f64, StatsError> {
    let any_author_names: BTreeMap<PaperId, HashSet<String>> = match mode {
        SelfCitationMode::FirstAuthor => BTreeMap::new(),
        SelfCitationMode::AnyAuthor => corpus
            .papers
            .iter()
            .map(|(&id, record)| {
                let names = split_author_field(&record.authors_raw)
                    .into_iter()
                    .map(|a| a.normalized_full)
                    .collect();
                (id, names)
            })
            .collect(),
    };

    let is_self = |citing: PaperId, cited: PaperId| match mode {
        SelfCitationMode::FirstAuthor => {
            match (authors.first_author(citing), authors.first_author(cited)) {
                (Some(a), Some(b)) => a.author_id == b.author_id,
                _ => false,
            }
        }
        SelfCitationMode::AnyAuthor => {
            let (Some(a), Some(b)) = (any_author_names.get(&citing), any_author_names.get(&cited))
            else {
                return false;
            };
            !a.is_disjoint(b)
        }
    };

    let mut total = 0u64;
    let mut selfs = 0u64;
    for edge in corpus.graph.edges() {
        if let Some(label) = filter {
            if genders.paper_label(edge.citing) != label {
                continue;
            }
        }
        total += 1;
        if is_self(edge.citing, edge.cited) {
            selfs += 1;
        }
    }
    if total == 0 {
        return Err(StatsError::EmptyEdgeSet);
    }
    Ok(selfs as f64 / total as f64)
}

/// Per-author series indexed by alphabetical author id, ready for plotting.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorDistributions {
    pub author_ids: Vec<u32>,
    pub n_papers: Vec<u64>,
    pub citations_made: Vec<u64>,
    pub citations_received: Vec<u64>,
}

impl AuthorDistributions {
    pub fn len(&self) -> usize {
        self.author_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.author_ids.is_empty()
    }

    pub fn total_papers(&self) -> u64 {
        self.n_papers.iter().sum()
    }

    /// Mean citations received per author (in-coming links).
    pub fn mean_in_links(&self) -> f64 {
        mean(&self.citations_received)
    }

    /// Mean citations made per author (out-going links).
    pub fn mean_out_links(&self) -> f64 {
        mean(&self.citations_made)
    }
}

fn mean(values: &[u64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<u64>() as f64 / values.len() as f64
    }
}

/// Extracts the three per-author series from the author table.
pub fn author_distributions(authors: &AuthorTable) -> AuthorDistributions {
    let mut dist = AuthorDistributions::default();
    for record in authors.records() {
        dist.author_ids.push(record.author_id);
        dist.n_papers.push(record.papers_first_authored.len() as u64);
        dist.citations_made.push(record.citations_made);
        dist.citations_received.push(record.citations_received);
    }
    dist
}

/// The three pairwise correlations between papers authored, citations made,
/// and citations received.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuthorCorrelations {
    pub r_papers_made: f64,
    pub r_papers_received: f64,
    pub r_made_received: f64,
}

/// Pearson correlations over all authors.
pub fn author_correlations(authors: &AuthorTable) -> Result<AuthorCorrelations, StatsError> {
    let dist = author_distributions(authors);
    let papers: Vec<f64> = dist.n_papers.iter().map(|&v| v as f64).collect();
    let made: Vec<f64> = dist.citations_made.iter().map(|&v| v as f64).collect();
    let received: Vec<f64> = dist.citations_received.iter().map(|&v| v as f64).collect();
    Ok(AuthorCorrelations {
        r_papers_made: pearson(&papers, &made)?,
        r_papers_received: pearson(&papers, &received)?,
        r_made_received: pearson(&made, &received)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::authorship::assign_author_ids;
    use crate::corpus::{build_corpus, CitationEdge, PaperRecord};
    use crate::gender::infer_genders;

    fn paper(id: u32, authors: &str) -> PaperRecord {
        PaperRecord {
            id: PaperId::new(id).unwrap(),
            title: String::new(),
            authors_raw: authors.to_string(),
            abstract_text: String::new(),
            date_raw: None,
        }
    }

    fn edge(citing: u32, cited: u32) -> CitationEdge {
        CitationEdge::new(PaperId::new(citing).unwrap(), PaperId::new(cited).unwrap())
    }

    fn name_table() -> NameGenderTable {
        let mut t = NameGenderTable::default();
        t.insert("maria", 1.0, 100);
        t.insert("anna", 1.0, 100);
        t.insert("john", 0.0, 100);
        t.insert("bob", 0.0, 100);
        t
    }

    /// 3-paper chain: 1 (maria) -> 2 (john) -> 3 (no authors)
    fn chain_fixture() -> (Corpus, AuthorTable, GenderAssignment) {
        let corpus = build_corpus(
            vec![paper(1, "Maria Rossi"), paper(2, "John Stone"), paper(3, "")],
            vec![edge(1, 2), edge(2, 3)],
        );
        let authors = assign_author_ids(&corpus);
        let genders = infer_genders(&corpus, &authors, &name_table(), &GenderConfig::default());
        (corpus, authors, genders)
    }

    #[test]
    fn paper_centered_summary_on_chain() {
        let (corpus, _, genders) = chain_fixture();
        let summary = paper_centered_summary(&corpus, &genders);
        assert_eq!(
            summary.all,
            UniverseCounts {
                papers: 3,
                citations: 2,
                citing: 2,
                cited: 2,
                union_size: 3,
                intersection_size: 1,
            }
        );
        // gendered universe {1, 2}: only edge 1->2 survives
        assert_eq!(
            summary.gendered,
            UniverseCounts {
                papers: 2,
                citations: 1,
                citing: 1,
                cited: 1,
                union_size: 2,
                intersection_size: 0,
            }
        );
    }

    #[test]
    fn paper_centered_summary_empty_corpus() {
        let corpus = build_corpus(vec![], vec![]);
        let genders = GenderAssignment::default();
        let summary = paper_centered_summary(&corpus, &genders);
        assert_eq!(summary, PaperCenteredSummary::default());
    }

    #[test]
    fn author_centered_counts_split_by_gender() {
        let corpus = build_corpus(
            vec![
                paper(1, "Maria Rossi and Anna Bell"),
                paper(2, "John Stone and X. Gray"),
                paper(3, "Bob Hill"),
            ],
            vec![],
        );
        let authors = assign_author_ids(&corpus);
        let table = name_table();
        let genders = infer_genders(&corpus, &authors, &table, &GenderConfig::default());
        let summary =
            author_centered_summary(&corpus, &authors, &genders, &table, &GenderConfig::default());
        assert_eq!(
            summary.first_authors,
            GenderBreakdown { all: 3, female: 1, male: 2, missing: 0 }
        );
        assert_eq!(
            summary.second_authors,
            GenderBreakdown { all: 2, female: 1, male: 0, missing: 1 }
        );
        assert!(summary.first_authors.partitions());
        assert!(summary.second_authors.partitions());
    }

    #[test]
    fn single_author_corpus_has_no_second_authors() {
        let corpus = build_corpus(vec![paper(1, "Maria Rossi")], vec![]);
        let authors = assign_author_ids(&corpus);
        let table = name_table();
        let genders = infer_genders(&corpus, &authors, &table, &GenderConfig::default());
        let summary =
            author_centered_summary(&corpus, &authors, &genders, &table, &GenderConfig::default());
        assert_eq!(summary.second_authors, GenderBreakdown::default());
    }

    #[test]
    fn self_citation_all_same_author_is_one() {
        let corpus = build_corpus(
            vec![paper(1, "Maria Rossi"), paper(2, "Maria Rossi")],
            vec![edge(1, 2), edge(2, 1)],
        );
        let authors = assign_author_ids(&corpus);
        let genders = infer_genders(&corpus, &authors, &name_table(), &GenderConfig::default());
        let rate =
            self_citation_rate(&corpus, &authors, &genders, None, SelfCitationMode::FirstAuthor)
                .unwrap();
        assert_eq!(rate, 1.0);
    }

    #[test]
    fn self_citation_distinct_authors_is_zero() {
        let (corpus, authors, genders) = chain_fixture();
        let rate =
            self_citation_rate(&corpus, &authors, &genders, None, SelfCitationMode::FirstAuthor)
                .unwrap();
        assert_eq!(rate, 0.0);
    }

    #[test]
    fn self_citation_is_symmetric_under_edge_reversal() {
        let records = vec![
            paper(1, "Maria Rossi"),
            paper(2, "Maria Rossi"),
            paper(3, "John Stone"),
        ];
        let edges = vec![edge(1, 2), edge(1, 3), edge(3, 2)];
        let reversed: Vec<CitationEdge> =
            edges.iter().map(|e| CitationEdge::new(e.cited, e.citing)).collect();

        let corpus = build_corpus(records.clone(), edges);
        let authors = assign_author_ids(&corpus);
        let genders = infer_genders(&corpus, &authors, &name_table(), &GenderConfig::default());
        let forward =
            self_citation_rate(&corpus, &authors, &genders, None, SelfCitationMode::FirstAuthor)
                .unwrap();

        let corpus_rev = build_corpus(records, reversed);
        let authors_rev = assign_author_ids(&corpus_rev);
        let genders_rev =
            infer_genders(&corpus_rev, &authors_rev, &name_table(), &GenderConfig::default());
        let backward = self_citation_rate(
            &corpus_rev,
            &authors_rev,
            &genders_rev,
            None,
            SelfCitationMode::FirstAuthor,
        )
        .unwrap();
        assert_eq!(forward, backward);
    }

    #[test]
    fn self_citation_gender_filter_restricts_denominator() {
        // maria self-cites once out of her two citations; john never cites
        let corpus = build_corpus(
            vec![paper(1, "Maria Rossi"), paper(2, "Maria Rossi"), paper(3, "John Stone")],
            vec![edge(1, 2), edge(1, 3)],
        );
        let authors = assign_author_ids(&corpus);
        let genders = infer_genders(&corpus, &authors, &name_table(), &GenderConfig::default());
        let female = self_citation_rate(
            &corpus,
            &authors,
            &genders,
            Some(GenderLabel::Female),
            SelfCitationMode::FirstAuthor,
        )
        .unwrap();
        assert_eq!(female, 0.5);
        let male = self_citation_rate(
            &corpus,
            &authors,
            &genders,
            Some(GenderLabel::Male),
            SelfCitationMode::FirstAuthor,
        );
        assert!(matches!(male, Err(StatsError::EmptyEdgeSet)));
    }

    #[test]
    fn any_author_mode_catches_non_first_overlap() {
        // paper 1 first-authored by maria, second john; paper 2 first john
        let corpus = build_corpus(
            vec![paper(1, "Maria Rossi and John Stone"), paper(2, "John Stone")],
            vec![edge(1, 2)],
        );
        let authors = assign_author_ids(&corpus);
        let genders = infer_genders(&corpus, &authors, &name_table(), &GenderConfig::default());
        let first =
            self_citation_rate(&corpus, &authors, &genders, None, SelfCitationMode::FirstAuthor)
                .unwrap();
        let any =
            self_citation_rate(&corpus, &authors, &genders, None, SelfCitationMode::AnyAuthor)
                .unwrap();
        assert_eq!(first, 0.0);
        assert_eq!(any, 1.0);
    }

    #[test]
    fn distributions_total_papers_counts_authored_only() {
        let (_corpus, authors, _) = chain_fixture();
        let dist = author_distributions(&authors);
        assert_eq!(dist.len(), 2);
        assert_eq!(dist.total_papers(), 2); // paper 3 has no author
    }

    #[test]
    fn distribution_totals_match_restricted_edge_count() {
        let corpus = build_corpus(
            vec![paper(1, "A One"), paper(2, "B Two"), paper(3, "")],
            vec![edge(1, 2), edge(2, 3), edge(2, 1)],
        );
        let authors = assign_author_ids(&corpus);
        let dist = author_distributions(&authors);
        let made: u64 = dist.citations_made.iter().sum();
        let received: u64 = dist.citations_received.iter().sum();
        // edges between first-authored papers: 1->2 and 2->1
        assert_eq!(made, 2);
        assert_eq!(received, 2);
        assert_eq!(made, received);
    }

    #[test]
    fn correlations_degenerate_on_constant_papers() {
        let corpus = build_corpus(
            vec![paper(1, "A One"), paper(2, "B Two")],
            vec![edge(1, 2)],
        );
        let authors = assign_author_ids(&corpus);
        let result = author_correlations(&authors);
        assert!(matches!(
            result,
            Err(StatsError::Correlation(CorrelationError::DegenerateVariance))
        ));
    }

    #[test]
    fn correlations_perfect_when_proportional() {
        // every author's citations_made equals their paper count, so
        // r(papers, made) is exactly one
        let mut records = Vec::new();
        let mut edges = Vec::new();
        let mut next = 1u32;
        let sink = 1000u32;
        for (author, n) in [("A One", 1u32), ("B Two", 2), ("C Three", 3)] {
            for _ in 0..n {
                records.push(paper(next, author));
                edges.push(edge(next, sink));
                next += 1;
            }
        }
        records.push(paper(sink, "Z Sink"));
        edges.push(edge(sink, 1)); // Z: 1 paper, 1 citation made
        let corpus = build_corpus(records, edges);
        let authors = assign_author_ids(&corpus);
        let correlations = author_correlations(&authors).unwrap();
        assert!((correlations.r_papers_made - 1.0).abs() < 1e-12);
        assert!(correlations.r_papers_received < 1.0);
    }
}
