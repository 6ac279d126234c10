//! Report-bundle rendering: tab-separated tables plus a one-screen text
//! summary. All output is deterministic; floats print with six decimals and
//! degenerate values print as `NA`/`INF`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::analysis::AnalysisOutputs;
use crate::corpus::IngestReport;
use crate::meme::FrequencyMode;

pub const TABLE1_FILE: &str = "table1.tsv";
pub const TABLE2_FILE: &str = "table2.tsv";
pub const SELF_CITATION_FILE: &str = "self_citation.tsv";
pub const DISTRIBUTIONS_FILE: &str = "distributions.tsv";
pub const CORRELATIONS_FILE: &str = "correlations.tsv";
pub const SCORE_TABLE_FILE: &str = "score_table.tsv";
pub const SUMMARY_FILE: &str = "summary.txt";

fn opt_rate(value: Option<f64>) -> String {
    value.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"))
}

pub fn render_table1(outputs: &AnalysisOutputs) -> String {
    let mut out = String::from("metric\tall\twith_gender\n");
    let rows = [
        ("papers", outputs.table1.all.papers, outputs.table1.gendered.papers),
        ("citations", outputs.table1.all.citations, outputs.table1.gendered.citations),
        ("citing", outputs.table1.all.citing, outputs.table1.gendered.citing),
        ("cited", outputs.table1.all.cited, outputs.table1.gendered.cited),
        ("citing_cited_union", outputs.table1.all.union_size, outputs.table1.gendered.union_size),
        (
            "citing_cited_intersection",
            outputs.table1.all.intersection_size,
            outputs.table1.gendered.intersection_size,
        ),
    ];
    for (name, all, gendered) in rows {
        let _ = writeln!(out, "{name}\t{all}\t{gendered}");
    }
    out
}

pub fn render_table2(outputs: &AnalysisOutputs) -> String {
    let mut out = String::from("metric\tall\tfemale\tmale\tmissing\n");
    let first = outputs.table2.first_authors;
    let second = outputs.table2.second_authors;
    let _ = writeln!(
        out,
        "first_authors\t{}\t{}\t{}\t{}",
        first.all, first.female, first.male, first.missing
    );
    let _ = writeln!(
        out,
        "second_authors\t{}\t{}\t{}\t{}",
        second.all, second.female, second.male, second.missing
    );
    let _ = writeln!(
        out,
        "pct_first_authors_citing\t100.000000\t{:.6}\t{:.6}\tNA",
        outputs.table2.pct_citing_female, outputs.table2.pct_citing_male
    );
    let _ = writeln!(
        out,
        "pct_first_authors_cited\t100.000000\t{:.6}\t{:.6}\tNA",
        outputs.table2.pct_cited_female, outputs.table2.pct_cited_male
    );
    out
}

pub fn render_self_citation(outputs: &AnalysisOutputs) -> String {
    let mut out = String::from("filter\trate\n");
    let _ = writeln!(out, "all\t{}", opt_rate(outputs.self_citation_overall));
    let _ = writeln!(out, "female\t{}", opt_rate(outputs.self_citation_female));
    let _ = writeln!(out, "male\t{}", opt_rate(outputs.self_citation_male));
    out
}

pub fn render_distributions(outputs: &AnalysisOutputs) -> String {
    let mut out = String::from("author_id\tn_papers\tcitations_made\tcitations_received\n");
    let d = &outputs.distributions;
    for i in 0..d.len() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            d.author_ids[i], d.n_papers[i], d.citations_made[i], d.citations_received[i]
        );
    }
    out
}

pub fn render_correlations(outputs: &AnalysisOutputs) -> String {
    let mut out = String::from("pair\tr\tskipped\n");
    match &outputs.author_correlations {
        Some(c) => {
            let _ = writeln!(out, "papers_citations_made\t{:.6}\t0", c.r_papers_made);
            let _ = writeln!(out, "papers_citations_received\t{:.6}\t0", c.r_papers_received);
            let _ = writeln!(out, "citations_made_received\t{:.6}\t0", c.r_made_received);
        }
        None => {
            for pair in
                ["papers_citations_made", "papers_citations_received", "citations_made_received"]
            {
                let _ = writeln!(out, "{pair}\tNA\t0");
            }
        }
    }
    for (name, slot) in [
        ("meme_freq_score_gendered", &outputs.corr_gendered),
        ("meme_freq_score_female", &outputs.corr_female),
        ("meme_freq_score_male", &outputs.corr_male),
    ] {
        let skipped = match slot {
            crate::analysis::CorrelationSlot::Value { skipped, .. } => *skipped,
            _ => 0,
        };
        let _ = writeln!(out, "{name}\t{}\t{}", slot.render(), skipped);
    }
    out
}

pub fn render_score_table(outputs: &AnalysisOutputs) -> String {
    let mut out =
        String::from("meme\tf_g\tf_F\tf_M\td_mm\td_to_m\td_mn\td_not_m\tP_g\tP_F\tP_M\n");
    for row in &outputs.score_rows {
        let _ = writeln!(
            out,
            "{}\t{:.6}\t{:.6}\t{:.6}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            row.meme,
            row.f_g,
            row.f_female,
            row.f_male,
            row.counts.d_mm,
            row.counts.d_to_m,
            row.counts.d_mn,
            row.counts.d_not_m,
            row.p_g.render(),
            row.p_female.render(),
            row.p_male.render(),
        );
    }
    out
}

/// Author-table export: one row per first author with identity, output,
/// citation counts, and resolved gender.
pub fn render_author_table(
    authors: &crate::authorship::AuthorTable,
    genders: &crate::gender::GenderAssignment,
) -> String {
    let mut out = String::from(
        "author_id\tnormalized_full\tgiven\tn_papers\tcitations_made\tcitations_received\tgender\n",
    );
    for (record, label) in authors.records().iter().zip(&genders.author_labels) {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            record.author_id,
            record.name.normalized_full,
            record.name.given,
            record.papers_first_authored.len(),
            record.citations_made,
            record.citations_received,
            label.as_str(),
        );
    }
    out
}

/// Rank/count/frequency table for the `memes` command.
pub fn render_frequency_ranking(
    ranking: &[(String, u64)],
    universe_size: u64,
    mode: FrequencyMode,
    top: usize,
) -> String {
    let total_occurrences: u64 = ranking.iter().map(|(_, n)| n).sum();
    let denominator = match mode {
        FrequencyMode::Papers => universe_size,
        FrequencyMode::Occurrences => total_occurrences,
    };
    let mut out = String::from("rank\tmeme\tcount\trelative_frequency\n");
    for (i, (token, count)) in ranking.iter().take(top).enumerate() {
        let freq = if denominator == 0 { 0.0 } else { *count as f64 / denominator as f64 };
        let _ = writeln!(out, "{}\t{token}\t{count}\t{freq:.6}", i + 1);
    }
    out
}

pub fn render_summary(outputs: &AnalysisOutputs, ingest: &IngestReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "== corpus ==");
    let _ = writeln!(
        out,
        "papers: {}  citations: {}  (read {}, dropped {} unknown / {} self-loop / {} duplicate)",
        outputs.table1.all.papers,
        outputs.table1.all.citations,
        ingest.edges_parsed,
        ingest.edges_dropped_unknown_endpoint,
        ingest.edges_dropped_self_loop,
        ingest.edges_duplicate,
    );
    let _ = writeln!(out, "\n== gender coverage ==");
    let cov = &outputs.coverage;
    let _ = writeln!(
        out,
        "gendered papers: {} ({:.1}%)  gendered links: {} ({:.1}%)",
        outputs.gendered_papers,
        cov.pct_gendered_papers,
        outputs.gendered_links,
        cov.pct_gendered_links,
    );
    let _ = writeln!(
        out,
        "first authors: {} total / {} female / {} male / {} unresolved",
        outputs.table2.first_authors.all,
        outputs.table2.first_authors.female,
        outputs.table2.first_authors.male,
        outputs.table2.first_authors.missing,
    );
    let _ = writeln!(
        out,
        "papers per gendered author: {:.2}",
        cov.avg_papers_per_gendered_author
    );
    let _ = writeln!(
        out,
        "citing authors: {:.1}% female / {:.1}% male   cited authors: {:.1}% female / {:.1}% male",
        cov.pct_female_citing, cov.pct_male_citing, cov.pct_female_cited, cov.pct_male_cited,
    );
    let _ = writeln!(
        out,
        "mean links per author: {:.2} in / {:.2} out",
        outputs.distributions.mean_in_links(),
        outputs.distributions.mean_out_links(),
    );
    let pct = |v: Option<f64>| {
        v.map_or_else(|| "NA".to_string(), |rate| format!("{:.1}%", rate * 100.0))
    };
    let _ = writeln!(
        out,
        "self-citations: {} all / {} female / {} male",
        pct(outputs.self_citation_overall),
        pct(outputs.self_citation_female),
        pct(outputs.self_citation_male),
    );
    let _ = writeln!(out, "\n== correlations ==");
    match &outputs.author_correlations {
        Some(c) => {
            let _ = writeln!(
                out,
                "authors: papers/made {:.2}  papers/received {:.2}  made/received {:.2}",
                c.r_papers_made, c.r_papers_received, c.r_made_received,
            );
        }
        None => {
            let _ = writeln!(out, "authors: insufficient data");
        }
    }
    let _ = writeln!(
        out,
        "meme frequency vs propagation: gendered {}  female {}  male {}",
        outputs.corr_gendered.render(),
        outputs.corr_female.render(),
        outputs.corr_male.render(),
    );
    let _ = writeln!(
        out,
        "\n== {} memes above threshold ==",
        outputs.selected_memes.len()
    );
    let _ = writeln!(out, "meme             f_g      P_g        P_F        P_M");
    for row in &outputs.score_rows {
        let _ = writeln!(
            out,
            "{:<16} {:.4}   {:<10} {:<10} {:<10}",
            row.meme,
            row.f_g,
            row.p_g.render(),
            row.p_female.render(),
            row.p_male.render(),
        );
    }
    out
}

/// Writes the six-table bundle plus the summary into `dir`.
pub fn write_bundle(dir: &Path, outputs: &AnalysisOutputs, ingest: &IngestReport) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(TABLE1_FILE), render_table1(outputs))?;
    fs::write(dir.join(TABLE2_FILE), render_table2(outputs))?;
    fs::write(dir.join(SELF_CITATION_FILE), render_self_citation(outputs))?;
    fs::write(dir.join(DISTRIBUTIONS_FILE), render_distributions(outputs))?;
    fs::write(dir.join(CORRELATIONS_FILE), render_correlations(outputs))?;
    fs::write(dir.join(SCORE_TABLE_FILE), render_score_table(outputs))?;
    fs::write(dir.join(SUMMARY_FILE), render_summary(outputs, ingest))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{run, AnalysisConfig};
    use crate::corpus::{build_corpus, CitationEdge, PaperId, PaperRecord};
    use crate::gender::NameGenderTable;
    use crate::meme::MemeLexicon;

    fn fixture_outputs() -> (AnalysisOutputs, IngestReport) {
        let paper = |id: u32, authors: &str, text: &str| PaperRecord {
            id: PaperId::new(id).unwrap(),
            title: String::new(),
            authors_raw: authors.to_string(),
            abstract_text: text.to_string(),
            date_raw: None,
        };
        let edge = |a: u32, b: u32| {
            CitationEdge::new(PaperId::new(a).unwrap(), PaperId::new(b).unwrap())
        };
        let corpus = build_corpus(
            vec![
                paper(1, "Maria Rossi", "space gauge"),
                paper(2, "John Stone", "space"),
                paper(3, "Anna Bell", "gauge"),
            ],
            vec![edge(1, 2), edge(3, 1), edge(2, 3)],
        );
        let mut table = NameGenderTable::default();
        table.insert("maria", 1.0, 100);
        table.insert("john", 0.0, 100);
        table.insert("anna", 1.0, 100);
        let lexicon = MemeLexicon::parse("space\ngauge\n").unwrap();
        let (outputs, _) = run(&corpus, &table, &lexicon, &AnalysisConfig::default()).unwrap();
        (outputs, corpus.ingest_report.clone())
    }

    #[test]
    fn tables_have_fixed_headers_and_shapes() {
        let (outputs, ingest) = fixture_outputs();
        assert!(render_table1(&outputs).starts_with("metric\tall\twith_gender\n"));
        assert!(render_table2(&outputs).starts_with("metric\tall\tfemale\tmale\tmissing\n"));
        let scores = render_score_table(&outputs);
        assert!(scores.starts_with("meme\tf_g\tf_F\tf_M\t"));
        assert_eq!(scores.lines().count(), 1 + outputs.score_rows.len());
        let summary = render_summary(&outputs, &ingest);
        assert!(summary.contains("gendered papers"));
    }

    #[test]
    fn bundle_is_byte_deterministic() {
        let (outputs, ingest) = fixture_outputs();
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        write_bundle(a.path(), &outputs, &ingest).unwrap();
        write_bundle(b.path(), &outputs, &ingest).unwrap();
        for name in [
            TABLE1_FILE,
            TABLE2_FILE,
            SELF_CITATION_FILE,
            DISTRIBUTIONS_FILE,
            CORRELATIONS_FILE,
            SCORE_TABLE_FILE,
            SUMMARY_FILE,
        ] {
            let left = fs::read(a.path().join(name)).unwrap();
            let right = fs::read(b.path().join(name)).unwrap();
            assert_eq!(left, right, "{name} differs");
            assert!(!left.is_empty());
        }
    }

    #[test]
    fn frequency_ranking_renders_both_modes() {
        let ranking = vec![("space".to_string(), 4u64), ("gauge".to_string(), 1u64)];
        let papers = render_frequency_ranking(&ranking, 8, FrequencyMode::Papers, 10);
        assert!(papers.contains("1\tspace\t4\t0.500000"));
        let occ = render_frequency_ranking(&ranking, 8, FrequencyMode::Occurrences, 10);
        assert!(occ.contains("1\tspace\t4\t0.800000"));
        let top1 = render_frequency_ranking(&ranking, 8, FrequencyMode::Papers, 1);
        assert_eq!(top1.lines().count(), 2);
    }
}
