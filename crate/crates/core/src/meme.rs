//! Abstract tokenization, word-frequency rankings, and meme carrier indexes.
//!
//! The tokenizer deletes TeX control sequences, case-folds, and treats every
//! character outside `[a-z0-9]` as a separator, so hyphenated compounds
//! split ("non-abelian" yields "non" and "abelian") and meme matching is
//! whole-token ("space" never matches inside "superspace").

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{Corpus, PaperId};

#[derive(Debug, Error)]
pub enum MemeError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid lexicon: {0}")]
    InvalidLexicon(String),
    #[error("empty universe")]
    EmptyUniverse,
    #[error("unknown meme: {0:?}")]
    UnknownMeme(String),
}

/// Tokenizes abstract text: deletes TeX control sequences (backslash
/// followed by letters), lowercases, and splits on every character outside
/// ASCII lowercase letters and digits.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut cleaned = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '\\' {
            while chars.peek().is_some_and(|n| n.is_ascii_alphabetic()) {
                chars.next();
            }
            cleaned.push(' ');
        } else {
            cleaned.push(c);
        }
    }
    let lowered = cleaned.to_lowercase();
    lowered
        .split(|c: char| !c.is_ascii_lowercase() && !c.is_ascii_digit())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Set of tokens excluded from frequency counting.
#[derive(Debug, Clone, Default)]
pub struct StopwordList {
    words: HashSet<String>,
}

impl StopwordList {
    /// Parses one token per line; `#` starts a comment. Lines are run
    /// through the tokenizer so every stored entry is itself a valid token.
    pub fn parse(text: &str) -> Self {
        let mut words = HashSet::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            words.extend(tokenize(line));
        }
        StopwordList { words }
    }

    pub fn load(path: &Path) -> Result<Self, MemeError> {
        let text = fs::read_to_string(path)
            .map_err(|e| MemeError::Io { path: path.display().to_string(), source: e })?;
        Ok(Self::parse(&text))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Ordered list of single-token meme terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MemeLexicon {
    memes: Vec<String>,
}

impl MemeLexicon {
    /// Parses one meme per line. Every entry must survive its own
    /// tokenization unchanged and appear only once.
    pub fn parse(text: &str) -> Result<Self, MemeError> {
        let mut memes = Vec::new();
        let mut seen = HashSet::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens = tokenize(line);
            if tokens.len() != 1 || tokens[0] != line {
                return Err(MemeError::InvalidLexicon(format!(
                    "{line:?} is not a single stable token"
                )));
            }
            if !seen.insert(line.to_string()) {
                return Err(MemeError::InvalidLexicon(format!("duplicate meme {line:?}")));
            }
            memes.push(line.to_string());
        }
        Ok(MemeLexicon { memes })
    }

    pub fn load(path: &Path) -> Result<Self, MemeError> {
        let text = fs::read_to_string(path)
            .map_err(|e| MemeError::Io { path: path.display().to_string(), source: e })?;
        Self::parse(&text)
    }

    pub fn memes(&self) -> &[String] {
        &self.memes
    }

    pub fn len(&self) -> usize {
        self.memes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memes.is_empty()
    }

    pub fn contains(&self, meme: &str) -> bool {
        self.memes.iter().any(|m| m == meme)
    }
}

/// How [`word_frequency_ranking`] counts a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrequencyMode {
    /// Total occurrences across abstracts.
    Occurrences,
    /// Distinct papers whose abstract contains the token.
    #[default]
    Papers,
}

/// Stopword-filtered token counts over the universe, sorted by descending
/// count with alphabetical tie-breaks.
pub fn word_frequency_ranking(
    corpus: &Corpus,
    universe: &BTreeSet<PaperId>,
    stopwords: &StopwordList,
    mode: FrequencyMode,
) -> Vec<(String, u64)> {
    let counts: HashMap<String, u64> = universe
        .par_iter()
        .filter_map(|id| corpus.papers.get(id))
        .map(|record| {
            let tokens = tokenize(&record.abstract_text);
            let mut local: HashMap<String, u64> = HashMap::new();
            match mode {
                FrequencyMode::Occurrences => {
                    for t in tokens {
                        if !stopwords.contains(&t) {
                            *local.entry(t).or_insert(0) += 1;
                        }
                    }
                }
                FrequencyMode::Papers => {
                    let distinct: HashSet<String> = tokens.into_iter().collect();
                    for t in distinct {
                        if !stopwords.contains(&t) {
                            local.insert(t, 1);
                        }
                    }
                }
            }
            local
        })
        .reduce(HashMap::new, |mut acc, local| {
            for (token, n) in local {
                *acc.entry(token).or_insert(0) += n;
            }
            acc
        });

    let mut ranking: Vec<(String, u64)> = counts.into_iter().collect();
    ranking.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranking
}

/// Meme-to-carrier-set index over a paper universe. A paper carries a meme
/// when its tokenized abstract contains the meme token at least once.
#[derive(Debug, Clone, Default)]
pub struct CarrierIndex {
    universe: BTreeSet<PaperId>,
    carriers: BTreeMap<String, BTreeSet<PaperId>>,
}

impl CarrierIndex {
    pub fn universe(&self) -> &BTreeSet<PaperId> {
        &self.universe
    }

    pub fn universe_size(&self) -> usize {
        self.universe.len()
    }

    pub fn memes(&self) -> impl Iterator<Item = &str> {
        self.carriers.keys().map(String::as_str)
    }

    pub fn carriers(&self, meme: &str) -> Result<&BTreeSet<PaperId>, MemeError> {
        self.carriers.get(meme).ok_or_else(|| MemeError::UnknownMeme(meme.to_string()))
    }

    /// Fraction of universe papers carrying the meme.
    pub fn relative_frequency(&self, meme: &str) -> Result<f64, MemeError> {
        if self.universe.is_empty() {
            return Err(MemeError::EmptyUniverse);
        }
        let carriers = self.carriers(meme)?;
        Ok(carriers.len() as f64 / self.universe.len() as f64)
    }

    /// Memes whose relative frequency strictly exceeds the threshold,
    /// ordered by descending frequency with alphabetical tie-breaks.
    pub fn select_memes_above(&self, threshold: f64) -> Vec<String> {
        if self.universe.is_empty() {
            return Vec::new();
        }
        let n = self.universe.len() as f64;
        let mut selected: Vec<(String, f64)> = self
            .carriers
            .iter()
            .map(|(m, c)| (m.clone(), c.len() as f64 / n))
            .filter(|(_, f)| *f > threshold)
            .collect();
        selected.sort_by(|a, b| {
            b.1.partial_cmp(&a.1).expect("frequencies are finite").then_with(|| a.0.cmp(&b.0))
        });
        selected.into_iter().map(|(m, _)| m).collect()
    }
}

/// Where carrier detection looks for meme tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CarrierSource {
    /// Abstract text only.
    #[default]
    Abstract,
    /// Abstract plus title, for sensitivity analysis.
    AbstractAndTitle,
}

/// Builds the carrier index for a lexicon over a universe.
pub fn build_carrier_index(
    corpus: &Corpus,
    universe: &BTreeSet<PaperId>,
    lexicon: &MemeLexicon,
    source: CarrierSource,
) -> CarrierIndex {
    let meme_set: HashSet<&str> = lexicon.memes().iter().map(String::as_str).collect();
    let hits: Vec<(PaperId, Vec<String>)> = universe
        .par_iter()
        .filter_map(|id| corpus.papers.get(id))
        .map(|record| {
            let mut tokens = tokenize(&record.abstract_text);
            if source == CarrierSource::AbstractAndTitle {
                tokens.extend(tokenize(&record.title));
            }
            let carried: Vec<String> = tokens
                .into_iter()
                .collect::<HashSet<_>>()
                .into_iter()
                .filter(|t| meme_set.contains(t.as_str()))
                .collect();
            (record.id, carried)
        })
        .collect();

    let mut carriers: BTreeMap<String, BTreeSet<PaperId>> =
        lexicon.memes().iter().map(|m| (m.clone(), BTreeSet::new())).collect();
    for (id, carried) in hits {
        for meme in carried {
            carriers.get_mut(&meme).expect("meme from lexicon").insert(id);
        }
    }
    CarrierIndex { universe: universe.clone(), carriers }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_corpus, PaperRecord};

    fn paper(id: u32, abstract_text: &str) -> PaperRecord {
        PaperRecord {
            id: PaperId::new(id).unwrap(),
            title: String::new(),
            authors_raw: String::new(),
            abstract_text: abstract_text.to_string(),
            date_raw: None,
        }
    }

    fn corpus_of(abstracts: &[&str]) -> Corpus {
        let records = abstracts
            .iter()
            .enumerate()
            .map(|(i, text)| paper(i as u32 + 1, text))
            .collect();
        build_corpus(records, vec![])
    }

    #[test]
    fn tokenize_splits_hyphens_and_case_folds() {
        assert_eq!(tokenize("non-Abelian gauge fields"), vec!["non", "abelian", "gauge", "fields"]);
    }

    #[test]
    fn tokenize_empty_is_empty() {
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn tokenize_deletes_tex_control_sequences() {
        assert_eq!(tokenize("the \\alpha' corrections"), vec!["the", "corrections"]);
        assert_eq!(tokenize("N=2 \\it super\\bf symmetric"), vec!["n", "2", "super", "symmetric"]);
    }

    #[test]
    fn tokenize_keeps_digits() {
        assert_eq!(tokenize("d=11 supergravity"), vec!["d", "11", "supergravity"]);
    }

    #[test]
    fn tokenize_is_idempotent_on_joined_output() {
        let tokens = tokenize("Chern-Simons theory\\footnote with $k=3$ level");
        let rejoined = tokens.join(" ");
        assert_eq!(tokenize(&rejoined), tokens);
    }

    #[test]
    fn stopwords_parse_skips_comments() {
        let list = StopwordList::parse("# comment\nthe\nof\n\nand\n");
        assert_eq!(list.len(), 3);
        assert!(list.contains("the"));
        assert!(!list.contains("comment"));
    }

    #[test]
    fn lexicon_rejects_unstable_tokens() {
        assert!(MemeLexicon::parse("space\ngauge\n").is_ok());
        assert!(matches!(
            MemeLexicon::parse("Chern-Simons\n"),
            Err(MemeError::InvalidLexicon(_))
        ));
        assert!(matches!(MemeLexicon::parse("space\nspace\n"), Err(MemeError::InvalidLexicon(_))));
    }

    #[test]
    fn default_lexicon_and_stopwords_load() {
        let lexicon = MemeLexicon::parse(crate::DEFAULT_LEXICON).unwrap();
        assert_eq!(lexicon.len(), 40);
        assert_eq!(lexicon.memes()[0], "space");
        let stopwords = StopwordList::parse(crate::DEFAULT_STOPWORDS);
        assert!(stopwords.contains("the"));
        // no meme may be swallowed by the default stopword filter
        for meme in lexicon.memes() {
            assert!(!stopwords.contains(meme), "{meme} is in the stopword list");
        }
    }

    #[test]
    fn frequency_modes_differ_on_repeats() {
        let corpus = corpus_of(&["gauge gauge"]);
        let universe = corpus.all_ids();
        let stopwords = StopwordList::default();
        let occ = word_frequency_ranking(&corpus, &universe, &stopwords, FrequencyMode::Occurrences);
        let pap = word_frequency_ranking(&corpus, &universe, &stopwords, FrequencyMode::Papers);
        assert_eq!(occ, vec![("gauge".to_string(), 2)]);
        assert_eq!(pap, vec![("gauge".to_string(), 1)]);
    }

    #[test]
    fn ranking_excludes_stopwords_and_breaks_ties_alphabetically() {
        let corpus = corpus_of(&["the brane", "the gauge brane", "gauge field"]);
        let universe = corpus.all_ids();
        let stopwords = StopwordList::parse("the\n");
        let ranking =
            word_frequency_ranking(&corpus, &universe, &stopwords, FrequencyMode::Papers);
        assert_eq!(
            ranking,
            vec![
                ("brane".to_string(), 2),
                ("gauge".to_string(), 2),
                ("field".to_string(), 1),
            ]
        );
    }

    #[test]
    fn all_stopwords_yields_empty_ranking() {
        let corpus = corpus_of(&["the of and"]);
        let stopwords = StopwordList::parse("the\nof\nand\n");
        let ranking =
            word_frequency_ranking(&corpus, &corpus.all_ids(), &stopwords, FrequencyMode::Papers);
        assert!(ranking.is_empty());
    }

    #[test]
    fn carrier_matching_is_whole_token() {
        let corpus = corpus_of(&["superspace methods", "space and time"]);
        let lexicon = MemeLexicon::parse("space\n").unwrap();
        let index =
            build_carrier_index(&corpus, &corpus.all_ids(), &lexicon, CarrierSource::Abstract);
        let carriers = index.carriers("space").unwrap();
        assert_eq!(carriers.len(), 1);
        assert!(carriers.contains(&PaperId::new(2).unwrap()));
    }

    #[test]
    fn absent_meme_has_empty_carrier_set() {
        let corpus = corpus_of(&["gauge theory"]);
        let lexicon = MemeLexicon::parse("brane\n").unwrap();
        let index =
            build_carrier_index(&corpus, &corpus.all_ids(), &lexicon, CarrierSource::Abstract);
        assert!(index.carriers("brane").unwrap().is_empty());
        assert_eq!(index.relative_frequency("brane").unwrap(), 0.0);
    }

    #[test]
    fn title_source_flag_widens_carriers() {
        let mut record = paper(1, "nothing here");
        record.title = "Space oddity".into();
        let corpus = build_corpus(vec![record], vec![]);
        let lexicon = MemeLexicon::parse("space\n").unwrap();
        let abs_only =
            build_carrier_index(&corpus, &corpus.all_ids(), &lexicon, CarrierSource::Abstract);
        let with_title = build_carrier_index(
            &corpus,
            &corpus.all_ids(),
            &lexicon,
            CarrierSource::AbstractAndTitle,
        );
        assert!(abs_only.carriers("space").unwrap().is_empty());
        assert_eq!(with_title.carriers("space").unwrap().len(), 1);
    }

    #[test]
    fn relative_frequency_errors_on_empty_universe() {
        let corpus = corpus_of(&[]);
        let lexicon = MemeLexicon::parse("space\n").unwrap();
        let index =
            build_carrier_index(&corpus, &BTreeSet::new(), &lexicon, CarrierSource::Abstract);
        assert!(matches!(index.relative_frequency("space"), Err(MemeError::EmptyUniverse)));
    }

    #[test]
    fn unknown_meme_is_an_error() {
        let corpus = corpus_of(&["space"]);
        let lexicon = MemeLexicon::parse("space\n").unwrap();
        let index =
            build_carrier_index(&corpus, &corpus.all_ids(), &lexicon, CarrierSource::Abstract);
        assert!(matches!(index.relative_frequency("gauge"), Err(MemeError::UnknownMeme(_))));
    }

    #[test]
    fn selection_threshold_is_strict_and_sorted() {
        let corpus = corpus_of(&["space gauge", "space", "space brane", "gauge"]);
        let lexicon = MemeLexicon::parse("space\ngauge\nbrane\nhole\n").unwrap();
        let index =
            build_carrier_index(&corpus, &corpus.all_ids(), &lexicon, CarrierSource::Abstract);
        // frequencies: space 0.75, gauge 0.5, brane 0.25, hole 0
        assert_eq!(index.select_memes_above(0.4), vec!["space", "gauge"]);
        assert_eq!(index.select_memes_above(0.5), vec!["space"]);
        assert_eq!(index.select_memes_above(1.0), Vec::<String>::new());
        assert_eq!(index.select_memes_above(0.0), vec!["space", "gauge", "brane"]);
    }

    #[test]
    fn papers_mode_counts_match_carrier_sets() {
        // two independent code paths must agree for every lexicon token
        let corpus = corpus_of(&["space gauge space", "gauge", "brane space"]);
        let lexicon = MemeLexicon::parse("space\ngauge\nbrane\n").unwrap();
        let universe = corpus.all_ids();
        let index = build_carrier_index(&corpus, &universe, &lexicon, CarrierSource::Abstract);
        let ranking = word_frequency_ranking(
            &corpus,
            &universe,
            &StopwordList::default(),
            FrequencyMode::Papers,
        );
        for meme in lexicon.memes() {
            let from_ranking =
                ranking.iter().find(|(t, _)| t == meme).map(|(_, n)| *n).unwrap_or(0);
            let from_index = index.carriers(meme).unwrap().len() as u64;
            assert_eq!(from_ranking, from_index, "disagreement on {meme}");
        }
    }
}
