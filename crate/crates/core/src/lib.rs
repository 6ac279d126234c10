//! Citation-network meme analysis over the arXiv hep-th corpus.
//!
//! The library ingests the SNAP `cit-HepTh` dataset (per-paper abstract
//! records plus a directed citation edge list), resolves author gender from a
//! historical given-name table, tokenizes abstracts into meme carrier sets,
//! and computes meme propagation scores over the citation graph, overall and
//! restricted by the gender of the cited authors.
//!
//! The pipeline stages map onto the top-level modules:
//!
//! - [`corpus`] — dataset parsing, graph construction, snapshots
//! - [`authorship`] — author-name normalization and per-author aggregation
//! - [`gender`] — given-name gender classification and gendered link filters
//! - [`meme`] — tokenization, word frequencies, carrier indexes
//! - [`propagation`] — propagation counts and scores, score tables
//! - [`oracle`] — brute-force reference implementation of the counts
//! - [`stats`] — descriptive statistics (summary tables, correlations)
//! - [`analysis`] — end-to-end orchestration producing a report bundle
//!
//! Everything is deterministic: identical inputs yield byte-identical
//! outputs regardless of thread count.

pub mod analysis;
pub mod authorship;
pub mod config;
pub mod corpus;
pub mod gender;
pub mod math;
pub mod meme;
pub mod oracle;
pub mod propagation;
pub mod report;
pub mod stats;

pub use corpus::{Corpus, PaperId, PaperRecord};
pub use gender::GenderLabel;

/// Default stopword list shipped with the crate (one token per line).
pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");

/// Default meme lexicon shipped with the crate (one meme per line).
pub const DEFAULT_LEXICON: &str = include_str!("../data/memes_hepth.txt");
