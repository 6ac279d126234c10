//! Shared helpers for integration tests: a deterministic synthetic corpus
//! with authored papers, gendered names, meme-bearing abstracts, and a
//! citation graph, plus `.abs`-format rendering for parser-level tests.
//!
//! Each test binary uses its own subset of these helpers.
#![allow(dead_code)]

use memetrace::corpus::{build_corpus, CitationEdge, Corpus, PaperId, PaperRecord};
use memetrace::gender::NameGenderTable;
use memetrace::meme::MemeLexicon;

/// Tiny deterministic generator (xorshift64*), so fixtures never depend on
/// external RNG crates or platform differences.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound.max(1) as u64) as usize
    }

    pub fn chance(&mut self, percent: u64) -> bool {
        self.next_u64() % 100 < percent
    }
}

pub const FEMALE_GIVENS: [&str; 6] = ["maria", "anna", "elena", "sofia", "laura", "carla"];
pub const MALE_GIVENS: [&str; 8] =
    ["john", "david", "michael", "andrei", "pierre", "kenji", "luis", "marco"];
pub const FAMILY_NAMES: [&str; 10] = [
    "Rossi", "Smith", "Tanaka", "Novak", "Garcia", "Meyer", "Silva", "Dupont", "Khan", "Larsen",
];

const MEME_WORDS: [&str; 8] =
    ["space", "gauge", "string", "brane", "spin", "vacuum", "lattice", "hierarchy"];
const FILLER_WORDS: [&str; 12] = [
    "the", "we", "study", "model", "action", "solution", "limit", "result", "equation", "effect",
    "approach", "structure",
];

/// A synthetic analysis-ready dataset.
pub struct Fixture {
    pub corpus: Corpus,
    pub name_table: NameGenderTable,
    pub lexicon: MemeLexicon,
}

/// Name table matching the given-name pools: female names resolve female,
/// male names male, plus one ambiguous and one under-observed name.
pub fn fixture_name_table() -> NameGenderTable {
    let mut table = NameGenderTable::default();
    for name in FEMALE_GIVENS {
        table.insert(name, 0.99, 1000);
    }
    for name in MALE_GIVENS {
        table.insert(name, 0.01, 1000);
    }
    table.insert("robin", 0.60, 1000); // ambiguous, stays unknown
    table.insert("rarity", 1.0, 2); // under min_count, stays unknown
    table
}

fn author_pool(rng: &mut Lcg, size: usize) -> Vec<String> {
    let mut pool = Vec::with_capacity(size);
    for i in 0..size {
        let family = FAMILY_NAMES[i % FAMILY_NAMES.len()];
        let name = match i % 5 {
            0 | 1 => {
                let given = FEMALE_GIVENS[rng.below(FEMALE_GIVENS.len())];
                format!("{} {}", capitalize(given), family)
            }
            2 | 3 => {
                let given = MALE_GIVENS[rng.below(MALE_GIVENS.len())];
                format!("{} {}", capitalize(given), family)
            }
            _ => format!("{}. {}", capitalize(&family[..1]), family),
        };
        pool.push(format!("{name}{}", i / FAMILY_NAMES.len()));
    }
    pool
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().collect::<String>() + chars.as_str(),
        None => String::new(),
    }
}

fn abstract_text(rng: &mut Lcg) -> String {
    let mut words = Vec::new();
    let n = 12 + rng.below(30);
    for _ in 0..n {
        if rng.chance(35) {
            words.push(MEME_WORDS[rng.below(MEME_WORDS.len())]);
        } else {
            words.push(FILLER_WORDS[rng.below(FILLER_WORDS.len())]);
        }
    }
    words.join(" ")
}

/// Builds a deterministic corpus of `n_papers` papers with a citation graph
/// pointing from newer to older papers.
pub fn synthetic_fixture(n_papers: usize, seed: u64) -> Fixture {
    let mut rng = Lcg::new(seed);
    let authors = author_pool(&mut rng, 24);

    let mut records = Vec::with_capacity(n_papers);
    for i in 0..n_papers {
        let id = PaperId::new(9_100_000 + i as u32).expect("id in range");
        let authors_raw = if rng.chance(3) {
            String::new() // the occasional authorless record
        } else {
            let first = &authors[rng.below(authors.len())];
            if rng.chance(40) {
                let second = &authors[rng.below(authors.len())];
                format!("{first} and {second}")
            } else {
                first.clone()
            }
        };
        records.push(PaperRecord {
            id,
            title: format!("Paper number {i}"),
            authors_raw,
            abstract_text: abstract_text(&mut rng),
            date_raw: None,
        });
    }

    let mut edges = Vec::new();
    for i in 1..n_papers {
        let citing = records[i].id;
        let n_refs = rng.below(6);
        for _ in 0..n_refs {
            let cited = records[rng.below(i)].id;
            edges.push(CitationEdge::new(citing, cited));
        }
    }

    let lexicon =
        MemeLexicon::parse(&MEME_WORDS.join("\n")).expect("meme words are stable tokens");
    Fixture { corpus: build_corpus(records, edges), name_table: fixture_name_table(), lexicon }
}

/// Renders a record in the `.abs` layout, for parser and CLI fixtures.
pub fn render_abs(id: u32, title: &str, authors: &str, abstract_text: &str) -> String {
    let authors_line = if authors.is_empty() {
        String::new()
    } else {
        format!("Authors: {authors}\n")
    };
    format!(
        "------------------------------------------------------------------------------\n\
\\\\\n\
Paper: hep-th/{id:07}\n\
From: fixture <fixture@example.org>\n\
Date: Mon, 4 Jan 93 11:53:44 GMT   (4kb)\n\
\n\
Title: {title}\n\
{authors_line}\
Comments: fixture record\n\
\\\\\n\
  {abstract_text}\n\
\\\\\n"
    )
}
