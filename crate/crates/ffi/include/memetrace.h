#ifndef MEMETRACE_H
#define MEMETRACE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum {
  MtOk = 0,
  MtErrIo = 1,
  MtErrParse = 2,
  MtErrInvalidArgument = 3,
  MtErrInsufficientData = 4,
  MtErrNullPointer = 5,
  MtErrUtf8 = 6,
  MtErrPanic = 7,
} MtStatus;

/**
 * Which frequency/score correlation to fetch.
 */
typedef enum {
  MtScoreGendered = 0,
  MtScoreFemale = 1,
  MtScoreMale = 2,
} MtScoreKind;

/**
 * Opaque handle to a finished analysis.
 */
typedef struct MtAnalysis MtAnalysis;

/**
 * Opaque handle to an ingested corpus.
 */
typedef struct MtCorpus MtCorpus;

/**
 * Analysis knobs; obtain defaults from [`mt_analysis_config_default`].
 */
typedef struct {
  /**
   * Gender classification threshold in (0.5, 1].
   */
  double gender_threshold;
  /**
   * Minimum observations for a name to classify.
   */
  uint64_t gender_min_count;
  /**
   * Relative-frequency cut for meme selection.
   */
  double meme_threshold;
} MtAnalysisConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *mt_last_error_message(void);

/**
 * Parses the raw dataset (abstracts tree or archive plus edge list) into a
 * corpus handle.
 *
 * # Safety
 * `abstracts_path` and `edges_path` must be NUL-terminated strings; `out`
 * must be a valid pointer to receive the handle.
 */
MtStatus mt_corpus_load(const char *abstracts_path, const char *edges_path, MtCorpus **out);

/**
 * Loads a corpus snapshot directory written by `memetrace ingest` or
 * [`mt_corpus_write_snapshot`].
 *
 * # Safety
 * `dir` must be a NUL-terminated string; `out` must be valid for writes.
 */
MtStatus mt_corpus_load_snapshot(const char *dir, MtCorpus **out);

/**
 * Writes the corpus snapshot into `dir`.
 *
 * # Safety
 * `handle` must be a live corpus handle; `dir` a NUL-terminated string.
 */
MtStatus mt_corpus_write_snapshot(const MtCorpus *handle, const char *dir);

/**
 * Releases a corpus handle. Null is a no-op.
 *
 * # Safety
 * `handle` must be null or a pointer returned by a corpus constructor, and
 * must not be used afterwards.
 */
void mt_corpus_free(MtCorpus *handle);

/**
 * Number of parsed papers, or zero for a null handle.
 *
 * # Safety
 * `handle` must be null or a live corpus handle.
 */
uint64_t mt_corpus_paper_count(const MtCorpus *handle);

/**
 * Number of retained citation edges, or zero for a null handle.
 *
 * # Safety
 * `handle` must be null or a live corpus handle.
 */
uint64_t mt_corpus_edge_count(const MtCorpus *handle);

/**
 * Default analysis configuration.
 */
MtAnalysisConfig mt_analysis_config_default(void);

/**
 * Runs the full analysis over a corpus. `lexicon_path` may be null to use
 * the built-in forty-meme lexicon; `config` may be null for defaults.
 *
 * # Safety
 * `handle` must be a live corpus handle, `name_table_path` a NUL-terminated
 * string, `lexicon_path` null or a NUL-terminated string, `config` null or
 * valid for reads, and `out` valid for writes.
 */
MtStatus mt_analysis_run(const MtCorpus *handle,
                         const char *name_table_path,
                         const char *lexicon_path,
                         const MtAnalysisConfig *config,
                         MtAnalysis **out);

/**
 * Releases an analysis handle. Null is a no-op.
 *
 * # Safety
 * `handle` must be null or a pointer returned by [`mt_analysis_run`], and
 * must not be used afterwards.
 */
void mt_analysis_free(MtAnalysis *handle);

/**
 * Number of gendered papers, or zero for a null handle.
 *
 * # Safety
 * `handle` must be null or a live analysis handle.
 */
uint64_t mt_analysis_gendered_paper_count(const MtAnalysis *handle);

/**
 * Number of gendered links, or zero for a null handle.
 *
 * # Safety
 * `handle` must be null or a live analysis handle.
 */
uint64_t mt_analysis_gendered_link_count(const MtAnalysis *handle);

/**
 * Number of memes selected above the frequency threshold.
 *
 * # Safety
 * `handle` must be null or a live analysis handle.
 */
uint64_t mt_analysis_selected_meme_count(const MtAnalysis *handle);

/**
 * Fetches one frequency/score correlation coefficient.
 *
 * # Safety
 * `handle` must be a live analysis handle and `out` valid for writes.
 */
MtStatus mt_analysis_correlation(const MtAnalysis *handle, MtScoreKind which, double *out);

/**
 * The score table as TSV text; free with [`mt_string_free`]. Returns null
 * for a null handle.
 *
 * # Safety
 * `handle` must be null or a live analysis handle.
 */
char *mt_analysis_score_table_tsv(const MtAnalysis *handle);

/**
 * The one-screen text summary; free with [`mt_string_free`]. Returns null
 * for a null handle.
 *
 * # Safety
 * `handle` must be null or a live analysis handle.
 */
char *mt_analysis_summary_text(const MtAnalysis *handle);

/**
 * Releases a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `text` must be null or a pointer returned by a memetrace string call,
 * and must not be used afterwards.
 */
void mt_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEMETRACE_H */
