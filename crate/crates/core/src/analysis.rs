//! End-to-end analysis: gender inference, carrier indexing, propagation
//! scoring, and descriptive statistics over an ingested corpus.

use serde::{Deserialize, Serialize};

use crate::authorship::{assign_author_ids, AuthorTable};
use crate::corpus::Corpus;
use crate::gender::{
    gender_coverage_report, gendered_link_filter, infer_genders, CoverageReport, GenderAssignment,
    GenderConfig, GenderLabel, NameGenderTable,
};
use crate::math::CorrelationError;
use crate::meme::{build_carrier_index, CarrierIndex, CarrierSource, MemeLexicon};
use crate::propagation::{
    frequency_propagation_correlation, gendered_score_table, PropagationError, ScoreKind,
    ScoreRow, UniverseMode,
};
use crate::stats::{
    author_centered_summary, author_correlations, author_distributions, paper_centered_summary,
    self_citation_rate, AuthorCenteredSummary, AuthorCorrelations, AuthorDistributions,
    PaperCenteredSummary, SelfCitationMode,
};

/// Analysis knobs; paths and thread handling live with the caller.
#[derive(Debug, Clone, Copy)]
pub struct AnalysisConfig {
    pub gender: GenderConfig,
    /// Relative-frequency cut for meme selection on the gendered universe.
    pub meme_threshold: f64,
    pub carrier_source: CarrierSource,
    pub self_citation_mode: SelfCitationMode,
    pub universe_mode: UniverseMode,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            gender: GenderConfig::default(),
            meme_threshold: 0.08,
            carrier_source: CarrierSource::default(),
            self_citation_mode: SelfCitationMode::default(),
            universe_mode: UniverseMode::default(),
        }
    }
}

/// A correlation slot: the coefficient with its skip count, or the reason it
/// could not be computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CorrelationSlot {
    Value { r: f64, skipped: u64 },
    InsufficientData,
    DegenerateVariance,
}

impl CorrelationSlot {
    fn from_result(result: Result<(f64, usize), CorrelationError>) -> Self {
        match result {
            Ok((r, skipped)) => CorrelationSlot::Value { r, skipped: skipped as u64 },
            Err(CorrelationError::InsufficientData(_)) => CorrelationSlot::InsufficientData,
            Err(CorrelationError::DegenerateVariance) => CorrelationSlot::DegenerateVariance,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            CorrelationSlot::Value { r, .. } => Some(*r),
            _ => None,
        }
    }

    pub fn is_insufficient(&self) -> bool {
        matches!(self, CorrelationSlot::InsufficientData)
    }

    /// Fixed-format rendering for report files.
    pub fn render(&self) -> String {
        match self {
            CorrelationSlot::Value { r, .. } => format!("{r:.6}"),
            CorrelationSlot::InsufficientData => "NA".to_string(),
            CorrelationSlot::DegenerateVariance => "NA".to_string(),
        }
    }
}

/// Everything the report bundle and the summary screen need.
#[derive(Debug, Clone)]
pub struct AnalysisOutputs {
    pub table1: PaperCenteredSummary,
    pub table2: AuthorCenteredSummary,
    pub coverage: CoverageReport,
    /// Self-citation rates overall and by citing author gender; a slot is
    /// `None` when its edge set is empty.
    pub self_citation_overall: Option<f64>,
    pub self_citation_female: Option<f64>,
    pub self_citation_male: Option<f64>,
    pub distributions: AuthorDistributions,
    pub author_correlations: Option<AuthorCorrelations>,
    pub gendered_papers: u64,
    pub gendered_links: u64,
    /// Memes whose gendered relative frequency exceeds the threshold,
    /// descending by frequency.
    pub selected_memes: Vec<String>,
    pub score_rows: Vec<ScoreRow>,
    pub corr_gendered: CorrelationSlot,
    pub corr_female: CorrelationSlot,
    pub corr_male: CorrelationSlot,
}

impl AnalysisOutputs {
    /// True when any frequency/score correlation lacked enough data, the
    /// condition the CLI reports with a dedicated exit code.
    pub fn correlations_insufficient(&self) -> bool {
        self.corr_gendered.is_insufficient()
            || self.corr_female.is_insufficient()
            || self.corr_male.is_insufficient()
            || self.author_correlations.is_none()
    }
}

/// Intermediate products kept around for callers that need more than the
/// bundle (acceptance checks, the FFI layer).
#[derive(Debug, Clone)]
pub struct AnalysisArtifacts {
    pub authors: AuthorTable,
    pub genders: GenderAssignment,
    pub gendered_index: CarrierIndex,
}

/// Runs the full pipeline over an ingested corpus.
pub fn run(
    corpus: &Corpus,
    name_table: &NameGenderTable,
    lexicon: &MemeLexicon,
    cfg: &AnalysisConfig,
) -> Result<(AnalysisOutputs, AnalysisArtifacts), PropagationError> {
    let authors = assign_author_ids(corpus);
    let genders = infer_genders(corpus, &authors, name_table, &cfg.gender);
    let coverage = gender_coverage_report(corpus, &authors, &genders);
    let table1 = paper_centered_summary(corpus, &genders);
    let table2 = author_centered_summary(corpus, &authors, &genders, name_table, &cfg.gender);

    let self_rate = |filter: Option<GenderLabel>| {
        self_citation_rate(corpus, &authors, &genders, filter, cfg.self_citation_mode).ok()
    };
    let self_citation_overall = self_rate(None);
    let self_citation_female = self_rate(Some(GenderLabel::Female));
    let self_citation_male = self_rate(Some(GenderLabel::Male));

    let distributions = author_distributions(&authors);
    let author_corrs = author_correlations(&authors).ok();

    let gendered_universe = genders.gendered_papers();
    let gendered_links = gendered_link_filter(corpus, &genders).len() as u64;
    let gendered_index =
        build_carrier_index(corpus, &gendered_universe, lexicon, cfg.carrier_source);
    let selected_memes = gendered_index.select_memes_above(cfg.meme_threshold);
    let score_rows =
        gendered_score_table(corpus, &gendered_index, &genders, &selected_memes, cfg.universe_mode)?;

    let corr = |kind| CorrelationSlot::from_result(frequency_propagation_correlation(&score_rows, kind));
    let corr_gendered = corr(ScoreKind::Gendered);
    let corr_female = corr(ScoreKind::Female);
    let corr_male = corr(ScoreKind::Male);
    let outputs = AnalysisOutputs {
        table1,
        table2,
        coverage,
        self_citation_overall,
        self_citation_female,
        self_citation_male,
        distributions,
        author_correlations: author_corrs,
        gendered_papers: gendered_universe.len() as u64,
        gendered_links,
        selected_memes,
        score_rows,
        corr_gendered,
        corr_female,
        corr_male,
    };
    let artifacts = AnalysisArtifacts { authors, genders, gendered_index };
    Ok((outputs, artifacts))
}
