//! Parser for the arXiv `.abs` record layout used by `cit-HepTh-abstracts`.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::{IngestError, PaperId, PaperRecord};

/// Parse accounting for [`parse_abstract_archive`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AbstractsReport {
    pub files_read: u64,
    pub skipped_malformed: u64,
    pub skipped_invalid_id: u64,
}

/// Parses one `.abs` record.
///
/// The layout is: optional preamble, a line consisting solely of `\\`, header
/// fields (`Field: value` with indented continuation lines), a second `\\`
/// line, the abstract body, and an optional closing `\\`. Fewer than two
/// delimiters or a missing `Paper:` field is a malformed record; a `Paper:`
/// value outside `hep-th/NNNNNNN` is an invalid id.
pub fn parse_abstract_record(text: &str) -> Result<PaperRecord, IngestError> {
    let lines: Vec<&str> = text.lines().collect();
    let delims: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, l)| l.trim_end() == "\\\\")
        .map(|(i, _)| i)
        .collect();
    if delims.len() < 2 {
        return Err(IngestError::MalformedRecord(format!(
            "expected at least 2 section delimiters, found {}",
            delims.len()
        )));
    }

    let header = &lines[delims[0] + 1..delims[1]];
    let body_end = delims.get(2).copied().unwrap_or(lines.len());
    let body = &lines[delims[1] + 1..body_end];

    let fields = parse_header_fields(header);
    let paper = fields
        .iter()
        .find(|(name, _)| name == "Paper")
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| IngestError::MalformedRecord("no Paper: field".into()))?;
    let id = PaperId::from_arxiv(paper.trim())?;

    let field = |name: &str| {
        fields
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.clone())
            .unwrap_or_default()
    };
    let date = fields.iter().find(|(n, _)| n == "Date").map(|(_, v)| v.clone());

    let abstract_text = body
        .iter()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ");

    Ok(PaperRecord {
        id,
        title: field("Title"),
        authors_raw: field("Authors"),
        abstract_text,
        date_raw: date,
    })
}

/// Splits header lines into (field, value) pairs. A field line is
/// `Name: value` where the name starts at column zero; indented lines
/// continue the preceding field and are joined with a single space.
fn parse_header_fields(lines: &[&str]) -> Vec<(String, String)> {
    let mut fields: Vec<(String, String)> = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        if let Some((name, value)) = split_field_line(line) {
            fields.push((name.to_string(), value.trim().to_string()));
        } else if let Some((_, value)) = fields.last_mut() {
            // continuation line (indented, or anything that is not a field)
            let cont = line.trim();
            if !cont.is_empty() {
                if !value.is_empty() {
                    value.push(' ');
                }
                value.push_str(cont);
            }
        }
    }
    fields
}

fn split_field_line(line: &str) -> Option<(&str, &str)> {
    if line.starts_with(|c: char| c.is_whitespace()) {
        return None;
    }
    let colon = line.find(':')?;
    let name = &line[..colon];
    if name.is_empty()
        || !name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
        || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-')
    {
        return None;
    }
    Some((name, &line[colon + 1..]))
}

/// Parses an extracted `cit-HepTh-abstracts` tree, a `.tar.gz` of it, or a
/// single `.abs` file. Records come back sorted by ascending id; files that
/// fail to parse are counted in the report rather than aborting the run.
pub fn parse_abstract_archive(
    path: &Path,
) -> Result<(Vec<PaperRecord>, AbstractsReport), IngestError> {
    let contents = read_abs_contents(path)?;
    let mut report = AbstractsReport { files_read: contents.len() as u64, ..Default::default() };

    let parsed: Vec<Result<PaperRecord, IngestError>> =
        contents.par_iter().map(|(_, text)| parse_abstract_record(text)).collect();

    let mut records = Vec::with_capacity(parsed.len());
    for result in parsed {
        match result {
            Ok(record) => records.push(record),
            Err(IngestError::InvalidPaperId(_)) => report.skipped_invalid_id += 1,
            Err(_) => report.skipped_malformed += 1,
        }
    }
    records.sort_by_key(|r| r.id);
    Ok((records, report))
}

fn read_abs_contents(path: &Path) -> Result<Vec<(PathBuf, String)>, IngestError> {
    let display = path.display().to_string();
    let meta = fs::metadata(path).map_err(|e| IngestError::io(&display, e))?;
    if meta.is_dir() {
        let mut files = Vec::new();
        collect_abs_files(path, &mut files)?;
        files.sort();
        return files
            .into_par_iter()
            .map(|p| {
                let text = fs::read_to_string(&p)
                    .map_err(|e| IngestError::io(p.display().to_string(), e))?;
                Ok((p, text))
            })
            .collect();
    }

    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
    if name.ends_with(".tar.gz") || name.ends_with(".tgz") {
        let file = fs::File::open(path).map_err(|e| IngestError::io(&display, e))?;
        let mut archive = tar::Archive::new(flate2::read::GzDecoder::new(file));
        let mut contents = Vec::new();
        for entry in archive.entries().map_err(|e| IngestError::io(&display, e))? {
            let mut entry = entry.map_err(|e| IngestError::io(&display, e))?;
            let entry_path = entry.path().map_err(|e| IngestError::io(&display, e))?.into_owned();
            if entry_path.extension().and_then(|e| e.to_str()) != Some("abs") {
                continue;
            }
            let mut buf = Vec::new();
            entry.read_to_end(&mut buf).map_err(|e| IngestError::io(&display, e))?;
            contents.push((entry_path, String::from_utf8_lossy(&buf).into_owned()));
        }
        contents.sort_by(|a, b| a.0.cmp(&b.0));
        return Ok(contents);
    }
    if name.ends_with(".abs") {
        let text = fs::read_to_string(path).map_err(|e| IngestError::io(&display, e))?;
        return Ok(vec![(path.to_path_buf(), text)]);
    }
    Err(IngestError::io(
        &display,
        std::io::Error::new(
            std::io::ErrorKind::InvalidInput,
            "expected a directory, a .tar.gz archive, or a .abs file",
        ),
    ))
}

fn collect_abs_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), IngestError> {
    let display = dir.display().to_string();
    for entry in fs::read_dir(dir).map_err(|e| IngestError::io(&display, e))? {
        let entry = entry.map_err(|e| IngestError::io(&display, e))?;
        let path = entry.path();
        if path.is_dir() {
            collect_abs_files(&path, out)?;
        } else if path.extension().and_then(|e| e.to_str()) == Some("abs") {
            out.push(path);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const NORMAL: &str = "------------------------------------------------------------------------------\n\
\\\\\n\
Paper: hep-th/9301001\n\
From: someone <someone@example.edu>\n\
Date: Mon, 4 Jan 93 11:53:44 GMT   (10kb)\n\
\n\
Title: A Long Title That\n\
  Wraps Onto The Next Line\n\
Authors: John Smith and Maria Rossi (CERN)\n\
Comments: 12 pages\n\
Journal-ref: Phys. Rev. D47 (1993) 1234\n\
\\\\\n\
  We study a thing and\n\
find another thing.\n\
\\\\\n";

    #[test]
    fn parses_normal_record() {
        let rec = parse_abstract_record(NORMAL).unwrap();
        assert_eq!(rec.id.value(), 9_301_001);
        assert_eq!(rec.title, "A Long Title That Wraps Onto The Next Line");
        assert_eq!(rec.authors_raw, "John Smith and Maria Rossi (CERN)");
        assert_eq!(rec.abstract_text, "We study a thing and find another thing.");
        assert_eq!(rec.date_raw.as_deref(), Some("Mon, 4 Jan 93 11:53:44 GMT   (10kb)"));
    }

    #[test]
    fn missing_authors_field_yields_empty() {
        let text = "\\\\\nPaper: hep-th/9301002\nTitle: T\n\\\\\nBody.\n\\\\\n";
        let rec = parse_abstract_record(text).unwrap();
        assert_eq!(rec.authors_raw, "");
        assert_eq!(rec.abstract_text, "Body.");
    }

    #[test]
    fn blank_abstract_section_yields_empty_abstract() {
        let text = "\\\\\nPaper: hep-th/9301003\nTitle: T\nAuthors: A B\n\\\\\n\n\\\\\n";
        let rec = parse_abstract_record(text).unwrap();
        assert_eq!(rec.abstract_text, "");
    }

    #[test]
    fn missing_paper_field_is_malformed() {
        let text = "\\\\\nTitle: T\n\\\\\nBody.\n\\\\\n";
        assert!(matches!(parse_abstract_record(text), Err(IngestError::MalformedRecord(_))));
    }

    #[test]
    fn one_delimiter_is_malformed() {
        let text = "\\\\\nPaper: hep-th/9301001\nTitle: T\n";
        assert!(matches!(parse_abstract_record(text), Err(IngestError::MalformedRecord(_))));
    }

    #[test]
    fn foreign_archive_prefix_is_invalid_id() {
        let text = "\\\\\nPaper: gr-qc/9301001\nTitle: T\n\\\\\nBody.\n\\\\\n";
        assert!(matches!(parse_abstract_record(text), Err(IngestError::InvalidPaperId(_))));
    }

    #[test]
    fn abstract_without_closing_delimiter_is_accepted() {
        let text = "\\\\\nPaper: hep-th/9301004\n\\\\\nTrailing body";
        let rec = parse_abstract_record(text).unwrap();
        assert_eq!(rec.abstract_text, "Trailing body");
    }

    #[test]
    fn header_continuation_requires_prior_field() {
        // stray indented line before any field is ignored
        let text = "\\\\\n  stray\nPaper: hep-th/9301005\n\\\\\nX\n\\\\\n";
        assert_eq!(parse_abstract_record(text).unwrap().id.value(), 9_301_005);
    }

    #[test]
    fn archive_dir_parses_and_counts_skips() {
        let dir = tempfile::tempdir().unwrap();
        let year = dir.path().join("1993");
        fs::create_dir(&year).unwrap();
        fs::write(year.join("9301001.abs"), NORMAL).unwrap();
        fs::write(year.join("bad.abs"), "no delimiters here").unwrap();
        fs::write(year.join("ignored.txt"), "not an abs file").unwrap();

        let (records, report) = parse_abstract_archive(dir.path()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(report.files_read, 2);
        assert_eq!(report.skipped_malformed, 1);
        assert_eq!(report.skipped_invalid_id, 0);
    }

    #[test]
    fn archive_empty_dir_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        let (records, report) = parse_abstract_archive(dir.path()).unwrap();
        assert!(records.is_empty());
        assert_eq!(report, AbstractsReport::default());
    }

    #[test]
    fn archive_records_sorted_by_id() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("b.abs"),
            "\\\\\nPaper: hep-th/9302001\n\\\\\nB\n\\\\\n",
        )
        .unwrap();
        fs::write(
            dir.path().join("a.abs"),
            "\\\\\nPaper: hep-th/9301001\n\\\\\nA\n\\\\\n",
        )
        .unwrap();
        let (records, _) = parse_abstract_archive(dir.path()).unwrap();
        let ids: Vec<u32> = records.iter().map(|r| r.id.value()).collect();
        assert_eq!(ids, vec![9_301_001, 9_302_001]);
    }

    #[test]
    fn archive_tarball_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let tar_path = dir.path().join("abs.tar.gz");
        {
            let file = fs::File::create(&tar_path).unwrap();
            let enc = flate2::write::GzEncoder::new(file, flate2::Compression::default());
            let mut builder = tar::Builder::new(enc);
            let data = NORMAL.as_bytes();
            let mut header = tar::Header::new_gnu();
            header.set_size(data.len() as u64);
            header.set_mode(0o644);
            header.set_cksum();
            builder.append_data(&mut header, "1993/9301001.abs", data).unwrap();
            builder.into_inner().unwrap().finish().unwrap();
        }
        let (records, report) = parse_abstract_archive(&tar_path).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].id.value(), 9_301_001);
        assert_eq!(report.files_read, 1);
    }
}
