//! C ABI for the memetrace analysis library.
//!
//! Callers hold opaque handles to corpora and analysis results; every
//! fallible call returns a status code and leaves a thread-local error
//! message readable through [`mt_last_error_message`]. Strings returned by
//! the library are heap-allocated and must be released with
//! [`mt_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use memetrace::analysis::{self, AnalysisConfig, AnalysisOutputs, CorrelationSlot};
use memetrace::config::RunConfig;
use memetrace::corpus::{self, Corpus, IngestReport};
use memetrace::gender::{load_name_table, GenderConfig};
use memetrace::meme::MemeLexicon;
use memetrace::report;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtStatus {
    MtOk = 0,
    MtErrIo = 1,
    MtErrParse = 2,
    MtErrInvalidArgument = 3,
    MtErrInsufficientData = 4,
    MtErrNullPointer = 5,
    MtErrUtf8 = 6,
    MtErrPanic = 7,
}

/// Which frequency/score correlation to fetch.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtScoreKind {
    MtScoreGendered = 0,
    MtScoreFemale = 1,
    MtScoreMale = 2,
}

/// Opaque handle to an ingested corpus.
pub struct MtCorpus {
    corpus: Corpus,
}

/// Opaque handle to a finished analysis.
pub struct MtAnalysis {
    outputs: AnalysisOutputs,
    ingest: IngestReport,
}

/// Analysis knobs; obtain defaults from [`mt_analysis_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MtAnalysisConfig {
    /// Gender classification threshold in (0.5, 1].
    pub gender_threshold: f64,
    /// Minimum observations for a name to classify.
    pub gender_min_count: u64,
    /// Relative-frequency cut for meme selection.
    pub meme_threshold: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn guard<F: FnOnce() -> MtStatus>(body: F) -> MtStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in memetrace".to_string());
            set_last_error(&message);
            MtStatus::MtErrPanic
        }
    }
}

/// # Safety
/// `ptr` must be null or a NUL-terminated string valid for reads.
unsafe fn path_arg(ptr: *const c_char) -> Result<PathBuf, MtStatus> {
    if ptr.is_null() {
        set_last_error("null path argument");
        return Err(MtStatus::MtErrNullPointer);
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(PathBuf::from(s)),
        Err(_) => {
            set_last_error("path is not valid UTF-8");
            Err(MtStatus::MtErrUtf8)
        }
    }
}

fn ingest_status(error: &corpus::IngestError) -> MtStatus {
    match error {
        corpus::IngestError::Io { .. } => MtStatus::MtErrIo,
        _ => MtStatus::MtErrParse,
    }
}

fn leak_string(text: String) -> *mut c_char {
    CString::new(text.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

/// Parses the raw dataset (abstracts tree or archive plus edge list) into a
/// corpus handle.
///
/// # Safety
/// `abstracts_path` and `edges_path` must be NUL-terminated strings; `out`
/// must be a valid pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn mt_corpus_load(
    abstracts_path: *const c_char,
    edges_path: *const c_char,
    out: *mut *mut MtCorpus,
) -> MtStatus {
    guard(|| {
        if out.is_null() {
            set_last_error("null output pointer");
            return MtStatus::MtErrNullPointer;
        }
        let (abstracts, edges) = match (path_arg(abstracts_path), path_arg(edges_path)) {
            (Ok(a), Ok(e)) => (a, e),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match corpus::ingest(&abstracts, &edges) {
            Ok(corpus) => {
                *out = Box::into_raw(Box::new(MtCorpus { corpus }));
                MtStatus::MtOk
            }
            Err(error) => {
                set_last_error(&error.to_string());
                ingest_status(&error)
            }
        }
    })
}

/// Loads a corpus snapshot directory written by `memetrace ingest` or
/// [`mt_corpus_write_snapshot`].
///
/// # Safety
/// `dir` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mt_corpus_load_snapshot(
    dir: *const c_char,
    out: *mut *mut MtCorpus,
) -> MtStatus {
    guard(|| {
        if out.is_null() {
            set_last_error("null output pointer");
            return MtStatus::MtErrNullPointer;
        }
        let dir = match path_arg(dir) {
            Ok(d) => d,
            Err(s) => return s,
        };
        match corpus::load_snapshot(&dir) {
            Ok(corpus) => {
                *out = Box::into_raw(Box::new(MtCorpus { corpus }));
                MtStatus::MtOk
            }
            Err(error) => {
                set_last_error(&error.to_string());
                ingest_status(&error)
            }
        }
    })
}

/// Writes the corpus snapshot into `dir`.
///
/// # Safety
/// `handle` must be a live corpus handle; `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mt_corpus_write_snapshot(
    handle: *const MtCorpus,
    dir: *const c_char,
) -> MtStatus {
    guard(|| {
        let Some(corpus) = handle.as_ref() else {
            set_last_error("null corpus handle");
            return MtStatus::MtErrNullPointer;
        };
        let dir = match path_arg(dir) {
            Ok(d) => d,
            Err(s) => return s,
        };
        match corpus::write_snapshot(&corpus.corpus, &dir) {
            Ok(()) => MtStatus::MtOk,
            Err(error) => {
                set_last_error(&error.to_string());
                ingest_status(&error)
            }
        }
    })
}

/// Releases a corpus handle. Null is a no-op.
///
/// # Safety
/// `handle` must be null or a pointer returned by a corpus constructor, and
/// must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mt_corpus_free(handle: *mut MtCorpus) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of parsed papers, or zero for a null handle.
///
/// # Safety
/// `handle` must be null or a live corpus handle.
#[no_mangle]
pub unsafe extern "C" fn mt_corpus_paper_count(handle: *const MtCorpus) -> u64 {
    handle.as_ref().map_or(0, |h| h.corpus.paper_count() as u64)
}

/// Number of retained citation edges, or zero for a null handle.
///
/// # Safety
/// `handle` must be null or a live corpus handle.
#[no_mangle]
pub unsafe extern "C" fn mt_corpus_edge_count(handle: *const MtCorpus) -> u64 {
    handle.as_ref().map_or(0, |h| h.corpus.graph.edge_count() as u64)
}

/// Default analysis configuration.
#[no_mangle]
pub extern "C" fn mt_analysis_config_default() -> MtAnalysisConfig {
    let gender = GenderConfig::default();
    MtAnalysisConfig {
        gender_threshold: gender.threshold,
        gender_min_count: gender.min_count,
        meme_threshold: 0.08,
    }
}

/// Runs the full analysis over a corpus. `lexicon_path` may be null to use
/// the built-in forty-meme lexicon; `config` may be null for defaults.
///
/// # Safety
/// `handle` must be a live corpus handle, `name_table_path` a NUL-terminated
/// string, `lexicon_path` null or a NUL-terminated string, `config` null or
/// valid for reads, and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mt_analysis_run(
    handle: *const MtCorpus,
    name_table_path: *const c_char,
    lexicon_path: *const c_char,
    config: *const MtAnalysisConfig,
    out: *mut *mut MtAnalysis,
) -> MtStatus {
    guard(|| {
        let Some(corpus) = handle.as_ref() else {
            set_last_error("null corpus handle");
            return MtStatus::MtErrNullPointer;
        };
        if out.is_null() {
            set_last_error("null output pointer");
            return MtStatus::MtErrNullPointer;
        }
        let name_table_path = match path_arg(name_table_path) {
            Ok(p) => p,
            Err(s) => return s,
        };

        let defaults = mt_analysis_config_default();
        let c = config.as_ref().copied().unwrap_or(defaults);
        let run_config = RunConfig {
            gender_threshold: c.gender_threshold,
            gender_min_count: c.gender_min_count,
            meme_threshold: c.meme_threshold,
            ..RunConfig::default()
        };
        if let Err(error) = run_config.validate() {
            set_last_error(&error.to_string());
            return MtStatus::MtErrInvalidArgument;
        }
        let analysis_config: AnalysisConfig = run_config.analysis_config();

        let table = match load_name_table(&name_table_path) {
            Ok((table, _skipped)) => table,
            Err(error) => {
                set_last_error(&error.to_string());
                return MtStatus::MtErrIo;
            }
        };
        let lexicon = if lexicon_path.is_null() {
            MemeLexicon::parse(memetrace::DEFAULT_LEXICON).expect("built-in lexicon")
        } else {
            let path = match path_arg(lexicon_path) {
                Ok(p) => p,
                Err(s) => return s,
            };
            match MemeLexicon::load(&path) {
                Ok(lexicon) => lexicon,
                Err(error) => {
                    set_last_error(&error.to_string());
                    return MtStatus::MtErrParse;
                }
            }
        };

        match analysis::run(&corpus.corpus, &table, &lexicon, &analysis_config) {
            Ok((outputs, _artifacts)) => {
                let analysis = MtAnalysis { outputs, ingest: corpus.corpus.ingest_report.clone() };
                *out = Box::into_raw(Box::new(analysis));
                MtStatus::MtOk
            }
            Err(error) => {
                set_last_error(&error.to_string());
                MtStatus::MtErrInvalidArgument
            }
        }
    })
}

/// Releases an analysis handle. Null is a no-op.
///
/// # Safety
/// `handle` must be null or a pointer returned by [`mt_analysis_run`], and
/// must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mt_analysis_free(handle: *mut MtAnalysis) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of gendered papers, or zero for a null handle.
///
/// # Safety
/// `handle` must be null or a live analysis handle.
#[no_mangle]
pub unsafe extern "C" fn mt_analysis_gendered_paper_count(handle: *const MtAnalysis) -> u64 {
    handle.as_ref().map_or(0, |h| h.outputs.gendered_papers)
}

/// Number of gendered links, or zero for a null handle.
///
/// # Safety
/// `handle` must be null or a live analysis handle.
#[no_mangle]
pub unsafe extern "C" fn mt_analysis_gendered_link_count(handle: *const MtAnalysis) -> u64 {
    handle.as_ref().map_or(0, |h| h.outputs.gendered_links)
}

/// Number of memes selected above the frequency threshold.
///
/// # Safety
/// `handle` must be null or a live analysis handle.
#[no_mangle]
pub unsafe extern "C" fn mt_analysis_selected_meme_count(handle: *const MtAnalysis) -> u64 {
    handle.as_ref().map_or(0, |h| h.outputs.selected_memes.len() as u64)
}

/// Fetches one frequency/score correlation coefficient.
///
/// # Safety
/// `handle` must be a live analysis handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mt_analysis_correlation(
    handle: *const MtAnalysis,
    which: MtScoreKind,
    out: *mut f64,
) -> MtStatus {
    guard(|| {
        let Some(analysis) = handle.as_ref() else {
            set_last_error("null analysis handle");
            return MtStatus::MtErrNullPointer;
        };
        if out.is_null() {
            set_last_error("null output pointer");
            return MtStatus::MtErrNullPointer;
        }
        let slot = match which {
            MtScoreKind::MtScoreGendered => &analysis.outputs.corr_gendered,
            MtScoreKind::MtScoreFemale => &analysis.outputs.corr_female,
            MtScoreKind::MtScoreMale => &analysis.outputs.corr_male,
        };
        match slot {
            CorrelationSlot::Value { r, .. } => {
                *out = *r;
                MtStatus::MtOk
            }
            CorrelationSlot::InsufficientData | CorrelationSlot::DegenerateVariance => {
                set_last_error("correlation not computable for this input");
                MtStatus::MtErrInsufficientData
            }
        }
    })
}

/// The score table as TSV text; free with [`mt_string_free`]. Returns null
/// for a null handle.
///
/// # Safety
/// `handle` must be null or a live analysis handle.
#[no_mangle]
pub unsafe extern "C" fn mt_analysis_score_table_tsv(handle: *const MtAnalysis) -> *mut c_char {
    match handle.as_ref() {
        Some(analysis) => leak_string(report::render_score_table(&analysis.outputs)),
        None => ptr::null_mut(),
    }
}

/// The one-screen text summary; free with [`mt_string_free`]. Returns null
/// for a null handle.
///
/// # Safety
/// `handle` must be null or a live analysis handle.
#[no_mangle]
pub unsafe extern "C" fn mt_analysis_summary_text(handle: *const MtAnalysis) -> *mut c_char {
    match handle.as_ref() {
        Some(analysis) => {
            leak_string(report::render_summary(&analysis.outputs, &analysis.ingest))
        }
        None => ptr::null_mut(),
    }
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `text` must be null or a pointer returned by a memetrace string call,
/// and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mt_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
