//! Meme propagation scores over the citation graph.
//!
//! For a meme m and an edge set E', a paper "cites the meme" when at least
//! one of its outgoing edges in E' lands on a carrier of m. Four counters
//! follow: carriers citing the meme (d_mm), all papers citing the meme
//! (d_to_m), carriers not citing it (d_mn), and papers not citing it
//! (d_not_m). The propagation score is (d_mm/d_to_m) / (d_mn/d_not_m): above
//! one, citing a carrier predicts carrying.
//!
//! Gendered variants restrict E' to gendered links, optionally constraining
//! the cited side to one gender; the citing-paper universe stays the full
//! set of gendered papers so the female and male scores share a denominator
//! population.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CitationEdge, Corpus, PaperId};
use crate::gender::{GenderAssignment, GenderLabel};
use crate::math::{pearson, CorrelationError};
use crate::meme::{CarrierIndex, MemeError};

#[derive(Debug, Error)]
pub enum PropagationError {
    #[error(transparent)]
    UnknownMeme(#[from] MemeError),
}

/// Which citation edges participate in the counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CitedFilter {
    /// Every edge; the universe is every paper in the index.
    All,
    /// Both endpoints gendered; the universe is the gendered papers.
    GenderedBoth,
    /// Citing endpoint gendered and cited endpoint female.
    CitedFemale,
    /// Citing endpoint gendered and cited endpoint male.
    CitedMale,
}

impl CitedFilter {
    pub const ALL_MODES: [CitedFilter; 4] = [
        CitedFilter::All,
        CitedFilter::GenderedBoth,
        CitedFilter::CitedFemale,
        CitedFilter::CitedMale,
    ];

    /// Whether an edge participates under this filter.
    pub fn admits(self, genders: &GenderAssignment, edge: &CitationEdge) -> bool {
        match self {
            CitedFilter::All => true,
            CitedFilter::GenderedBoth => {
                genders.is_gendered_paper(edge.citing) && genders.is_gendered_paper(edge.cited)
            }
            CitedFilter::CitedFemale => {
                genders.is_gendered_paper(edge.citing)
                    && genders.paper_label(edge.cited) == GenderLabel::Female
            }
            CitedFilter::CitedMale => {
                genders.is_gendered_paper(edge.citing)
                    && genders.paper_label(edge.cited) == GenderLabel::Male
            }
        }
    }
}

/// Whether the citing-paper universe keeps papers with no admissible
/// out-edge. The shared denominator is the default; the restricted variant
/// exists for sensitivity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UniverseMode {
    #[default]
    SharedDenominator,
    /// Drop universe papers with zero admissible out-edges.
    RestrictToCiting,
}

/// The four counters behind a propagation score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropagationCounts {
    /// Carriers citing at least one carrier.
    pub d_mm: u64,
    /// Papers citing at least one carrier.
    pub d_to_m: u64,
    /// Carriers citing no carrier.
    pub d_mn: u64,
    /// Papers citing no carrier.
    pub d_not_m: u64,
}

impl PropagationCounts {
    /// The structural identities every count must satisfy, given the
    /// universe and in-universe carrier sizes.
    pub fn identities_hold(&self, universe_size: u64, carriers_in_universe: u64) -> bool {
        self.d_mm <= self.d_to_m
            && self.d_mn <= self.d_not_m
            && self.d_to_m + self.d_not_m == universe_size
            && self.d_mm + self.d_mn == carriers_in_universe
    }
}

/// A propagation score value, with explicit degenerate markers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PropagationScore {
    Finite(f64),
    /// A denominator ratio is 0/0: no paper cites the meme, every paper
    /// cites it, or the universe holds no carriers at all.
    Undefined,
    /// Every carrier cites a carrier (d_mn = 0 with d_mm > 0).
    Infinite,
}

impl PropagationScore {
    pub fn finite(self) -> Option<f64> {
        match self {
            PropagationScore::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Fixed-format rendering for report files: six decimals, or the
    /// `NA`/`INF` markers.
    pub fn render(self) -> String {
        match self {
            PropagationScore::Finite(v) => format!("{v:.6}"),
            PropagationScore::Undefined => "NA".to_string(),
            PropagationScore::Infinite => "INF".to_string(),
        }
    }
}

/// Computes the four counters for a meme under an edge filter.
pub fn propagation_counts(
    corpus: &Corpus,
    index: &CarrierIndex,
    genders: &GenderAssignment,
    meme: &str,
    filter: CitedFilter,
) -> Result<PropagationCounts, PropagationError> {
    propagation_counts_with_options(corpus, index, genders, meme, filter, UniverseMode::default())
}

/// [`propagation_counts`] with an explicit universe mode.
pub fn propagation_counts_with_options(
    corpus: &Corpus,
    index: &CarrierIndex,
    genders: &GenderAssignment,
    meme: &str,
    filter: CitedFilter,
    universe_mode: UniverseMode,
) -> Result<PropagationCounts, PropagationError> {
    let carriers = index.carriers(meme)?;
    let universe: BTreeSet<PaperId> = match filter {
        CitedFilter::All => index.universe().clone(),
        _ => index
            .universe()
            .iter()
            .filter(|&&p| genders.is_gendered_paper(p))
            .copied()
            .collect(),
    };

    let cites_meme = |p: PaperId| {
        corpus.graph.cited_by(p).iter().any(|&q| {
            carriers.contains(&q) && filter.admits(genders, &CitationEdge::new(p, q))
        })
    };
    let has_admissible_out_edge = |p: PaperId| {
        corpus
            .graph
            .cited_by(p)
            .iter()
            .any(|&q| filter.admits(genders, &CitationEdge::new(p, q)))
    };

    let mut counts = PropagationCounts::default();
    let mut universe_size = 0u64;
    let mut carriers_in_universe = 0u64;
    for &p in &universe {
        if universe_mode == UniverseMode::RestrictToCiting && !has_admissible_out_edge(p) {
            continue;
        }
        universe_size += 1;
        let is_carrier = carriers.contains(&p);
        if is_carrier {
            carriers_in_universe += 1;
        }
        if cites_meme(p) {
            counts.d_to_m += 1;
            if is_carrier {
                counts.d_mm += 1;
            }
        }
    }
    counts.d_not_m = universe_size - counts.d_to_m;
    counts.d_mn = carriers_in_universe - counts.d_mm;
    debug_assert!(counts.identities_hold(universe_size, carriers_in_universe));
    Ok(counts)
}

/// Edges admitted by a filter, in graph order. Exposed so the edge-set
/// nesting properties can be checked directly.
pub fn filtered_edges(
    corpus: &Corpus,
    genders: &GenderAssignment,
    filter: CitedFilter,
) -> Vec<CitationEdge> {
    corpus
        .graph
        .edges()
        .iter()
        .filter(|e| filter.admits(genders, e))
        .copied()
        .collect()
}

/// Evaluates the score from its four counters.
pub fn propagation_score(counts: PropagationCounts) -> PropagationScore {
    let PropagationCounts { d_mm, d_to_m, d_mn, d_not_m } = counts;
    if d_to_m == 0 || d_not_m == 0 || (d_mn == 0 && d_mm == 0) {
        return PropagationScore::Undefined;
    }
    if d_mn == 0 {
        return PropagationScore::Infinite;
    }
    let numerator = d_mm as f64 / d_to_m as f64;
    let denominator = d_mn as f64 / d_not_m as f64;
    PropagationScore::Finite(numerator / denominator)
}

/// One row of the gendered score table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRow {
    pub meme: String,
    /// Relative frequency in the gendered universe.
    pub f_g: f64,
    /// Relative frequency among female-first-authored papers.
    pub f_female: f64,
    /// Relative frequency among male-first-authored papers.
    pub f_male: f64,
    /// Counters under the gendered-links filter.
    pub counts: PropagationCounts,
    pub p_g: PropagationScore,
    pub p_female: PropagationScore,
    pub p_male: PropagationScore,
}

/// Computes frequencies and the three propagation scores for each meme.
///
/// `index` must be built over the gendered universe; frequencies within each
/// gender are carrier counts over the papers of that gender.
pub fn gendered_score_table(
    corpus: &Corpus,
    index: &CarrierIndex,
    genders: &GenderAssignment,
    memes: &[String],
    universe_mode: UniverseMode,
) -> Result<Vec<ScoreRow>, PropagationError> {
    let female: BTreeSet<PaperId> = genders.papers_with_label(GenderLabel::Female);
    let male: BTreeSet<PaperId> = genders.papers_with_label(GenderLabel::Male);

    let mut rows = Vec::with_capacity(memes.len());
    for meme in memes {
        let carriers = index.carriers(meme)?;
        let f_g = index.relative_frequency(meme).map_err(PropagationError::from)?;
        let f_of = |set: &BTreeSet<PaperId>| {
            if set.is_empty() {
                0.0
            } else {
                carriers.intersection(set).count() as f64 / set.len() as f64
            }
        };
        let count_for = |filter: CitedFilter| {
            propagation_counts_with_options(corpus, index, genders, meme, filter, universe_mode)
        };
        let counts = count_for(CitedFilter::GenderedBoth)?;
        let female_counts = count_for(CitedFilter::CitedFemale)?;
        let male_counts = count_for(CitedFilter::CitedMale)?;
        rows.push(ScoreRow {
            meme: meme.clone(),
            f_g,
            f_female: f_of(&female),
            f_male: f_of(&male),
            counts,
            p_g: propagation_score(counts),
            p_female: propagation_score(female_counts),
            p_male: propagation_score(male_counts),
        });
    }
    Ok(rows)
}

/// Which score column a correlation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreKind {
    Gendered,
    Female,
    Male,
}

/// Pearson correlation between relative frequency and propagation score
/// across the table rows. Rows with undefined or infinite scores are
/// skipped; the skip count is returned alongside the coefficient.
pub fn frequency_propagation_correlation(
    rows: &[ScoreRow],
    which: ScoreKind,
) -> Result<(f64, usize), CorrelationError> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut skipped = 0usize;
    for row in rows {
        let (f, p) = match which {
            ScoreKind::Gendered => (row.f_g, row.p_g),
            ScoreKind::Female => (row.f_female, row.p_female),
            ScoreKind::Male => (row.f_male, row.p_male),
        };
        match p.finite() {
            Some(v) => {
                xs.push(f);
                ys.push(v);
            }
            None => skipped += 1,
        }
    }
    if xs.len() < 2 {
        return Err(CorrelationError::InsufficientData(xs.len()));
    }
    pearson(&xs, &ys).map(|r| (r, skipped))
}

/// Data needed to recompute counts independently; used by the oracle check.
#[derive(Debug, Clone)]
pub struct PropagationInstance {
    pub papers: Vec<(PaperId, GenderLabel)>,
    pub edges: Vec<CitationEdge>,
    pub carriers: BTreeSet<PaperId>,
}

impl PropagationInstance {
    pub fn gender_assignment(&self) -> GenderAssignment {
        GenderAssignment {
            author_labels: Vec::new(),
            paper_labels: self.papers.iter().copied().collect::<BTreeMap<_, _>>(),
        }
    }
}
