//! Brute-force reference implementation of the propagation counters, plus
//! the randomized self-check harness behind the `oracle-check` command.
//!
//! The reference path deliberately shares nothing with the indexed
//! implementation: it walks plain slices of papers and edges with no
//! adjacency structures and recomputes every counter by definition. The
//! harness generates random graphs, carrier sets, and gender labels, runs
//! both implementations under every filter, and reports the first mismatch
//! as a reproducible fixture.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{build_corpus, CitationEdge, Corpus, PaperId, PaperRecord};
use crate::gender::GenderLabel;
use crate::meme::{build_carrier_index, CarrierSource, MemeLexicon};
use crate::propagation::{
    propagation_counts_with_options, CitedFilter, PropagationCounts, PropagationInstance,
    UniverseMode,
};

/// Recomputes the four counters by definition, iterating papers and edges
/// with no indexing.
pub fn brute_force_counts(
    instance: &PropagationInstance,
    filter: CitedFilter,
    universe_mode: UniverseMode,
) -> PropagationCounts {
    let label_of = |p: PaperId| {
        instance
            .papers
            .iter()
            .find(|(id, _)| *id == p)
            .map(|(_, label)| *label)
            .unwrap_or(GenderLabel::Unknown)
    };
    let gendered = |p: PaperId| label_of(p) != GenderLabel::Unknown;
    let edge_admitted = |citing: PaperId, cited: PaperId| match filter {
        CitedFilter::All => true,
        CitedFilter::GenderedBoth => gendered(citing) && gendered(cited),
        CitedFilter::CitedFemale => gendered(citing) && label_of(cited) == GenderLabel::Female,
        CitedFilter::CitedMale => gendered(citing) && label_of(cited) == GenderLabel::Male,
    };
    // carriers only count when they lie in the universe the index was built
    // over, which for the oracle is the full paper list
    let in_universe = |p: PaperId| match filter {
        CitedFilter::All => true,
        _ => gendered(p),
    };

    let mut counts = PropagationCounts::default();
    for &(p, _) in &instance.papers {
        if !in_universe(p) {
            continue;
        }
        let mut cites_meme = false;
        let mut cites_anything_admissible = false;
        for e in &instance.edges {
            if e.citing != p || !edge_admitted(e.citing, e.cited) {
                continue;
            }
            cites_anything_admissible = true;
            if instance.carriers.contains(&e.cited) && in_universe(e.cited) {
                cites_meme = true;
            }
        }
        if universe_mode == UniverseMode::RestrictToCiting && !cites_anything_admissible {
            continue;
        }
        let is_carrier = instance.carriers.contains(&p);
        if cites_meme {
            counts.d_to_m += 1;
            if is_carrier {
                counts.d_mm += 1;
            }
        } else {
            counts.d_not_m += 1;
            if is_carrier {
                counts.d_mn += 1;
            }
        }
    }
    counts
}

/// Outcome of one randomized comparison run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    /// All trials agreed.
    Pass { trials: u64, comparisons: u64 },
    /// Vacuous pass: zero trials requested.
    Vacuous,
    /// A mismatch, with a reproducible dump of the failing instance.
    Mismatch { trial: u64, fixture: String },
}

impl OracleOutcome {
    pub fn passed(&self) -> bool {
        !matches!(self, OracleOutcome::Mismatch { .. })
    }
}

/// Builds a random propagation instance: up to `max_papers` papers with
/// random gender labels, up to `max_edges` distinct non-loop edges, and a
/// random carrier subset.
pub fn random_instance(rng: &mut ChaCha8Rng, max_papers: usize, max_edges: usize) -> PropagationInstance {
    let n = rng.gen_range(1..=max_papers.max(1));
    let mut ids: Vec<PaperId> = Vec::with_capacity(n);
    let mut seen = BTreeSet::new();
    while ids.len() < n {
        let value = rng.gen_range(1..=9_999_999u32);
        if seen.insert(value) {
            ids.push(PaperId::new(value).expect("in range"));
        }
    }
    let papers: Vec<(PaperId, GenderLabel)> = ids
        .iter()
        .map(|&id| {
            let label = match rng.gen_range(0..4u8) {
                0 => GenderLabel::Female,
                1 | 2 => GenderLabel::Male,
                _ => GenderLabel::Unknown,
            };
            (id, label)
        })
        .collect();

    let mut edges = BTreeSet::new();
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=max_edges) {
            let a = ids[rng.gen_range(0..n)];
            let b = ids[rng.gen_range(0..n)];
            if a != b {
                edges.insert(CitationEdge::new(a, b));
            }
        }
    }

    let mut carrier_pool = ids.clone();
    carrier_pool.shuffle(rng);
    let carriers: BTreeSet<PaperId> =
        carrier_pool.into_iter().take(rng.gen_range(0..=n)).collect();

    PropagationInstance { papers, edges: edges.into_iter().collect(), carriers }
}

/// Materializes an instance as a corpus whose single meme "meme" marks the
/// carrier papers.
pub fn instance_corpus(instance: &PropagationInstance) -> Corpus {
    let records: Vec<PaperRecord> = instance
        .papers
        .iter()
        .map(|&(id, _)| PaperRecord {
            id,
            title: String::new(),
            authors_raw: String::new(),
            abstract_text: if instance.carriers.contains(&id) { "meme".into() } else { "plain".into() },
            date_raw: None,
        })
        .collect();
    build_corpus(records, instance.edges.clone())
}

fn dump_fixture(
    instance: &PropagationInstance,
    filter: CitedFilter,
    universe_mode: UniverseMode,
    got: PropagationCounts,
    expected: PropagationCounts,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "filter: {filter:?}, universe_mode: {universe_mode:?}");
    let _ = writeln!(out, "expected (brute force): {expected:?}");
    let _ = writeln!(out, "got (indexed):          {got:?}");
    let _ = writeln!(out, "papers (id gender carrier):");
    for (id, label) in &instance.papers {
        let carrier = if instance.carriers.contains(id) { "carrier" } else { "-" };
        let _ = writeln!(out, "  {id} {} {carrier}", label.as_str());
    }
    let _ = writeln!(out, "edges:");
    for e in &instance.edges {
        let _ = writeln!(out, "  {} -> {}", e.citing, e.cited);
    }
    out
}

/// Test hook: when set, the indexed counts are perturbed before comparison
/// so the harness itself can be shown to catch mismatches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleOptions {
    pub corrupt_counts: bool,
}

/// Runs `trials` randomized comparisons of the indexed implementation
/// against the brute-force one, across all four filters and both universe
/// modes. Stops at the first mismatch.
pub fn run_oracle_check(seed: u64, trials: u64, options: OracleOptions) -> OracleOutcome {
    if trials == 0 {
        return OracleOutcome::Vacuous;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comparisons = 0u64;
    for trial in 0..trials {
        let instance = random_instance(&mut rng, 50, 200);
        let corpus = instance_corpus(&instance);
        let genders = instance.gender_assignment();
        let lexicon = MemeLexicon::parse("meme\n").expect("static lexicon");
        let index =
            build_carrier_index(&corpus, &corpus.all_ids(), &lexicon, CarrierSource::Abstract);
        for filter in CitedFilter::ALL_MODES {
            for universe_mode in [UniverseMode::SharedDenominator, UniverseMode::RestrictToCiting]
            {
                let mut got = propagation_counts_with_options(
                    &corpus,
                    &index,
                    &genders,
                    "meme",
                    filter,
                    universe_mode,
                )
                .expect("meme is in the lexicon");
                if options.corrupt_counts {
                    got.d_to_m += 1;
                }
                let expected = brute_force_counts(&instance, filter, universe_mode);
                comparisons += 1;
                if got != expected {
                    return OracleOutcome::Mismatch {
                        trial,
                        fixture: dump_fixture(&instance, filter, universe_mode, got, expected),
                    };
                }
            }
        }
    }
    OracleOutcome::Pass { trials, comparisons }
}
