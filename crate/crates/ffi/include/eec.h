#ifndef EEC_H
#define EEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum EecStatus {
  EEC_STATUS_OK = 0,
  EEC_STATUS_NULL_POINTER = 1,
  EEC_STATUS_INVALID_ARGUMENT = 2,
  EEC_STATUS_IO = 3,
  EEC_STATUS_VALIDATION = 4,
  EEC_STATUS_PANIC = 5,
} EecStatus;

typedef enum EecTask {
  EEC_TASK_ANGER = 0,
  EEC_TASK_FEAR = 1,
  EEC_TASK_JOY = 2,
  EEC_TASK_SADNESS = 3,
  EEC_TASK_VALENCE = 4,
} EecTask;

typedef enum EecDimension {
  EEC_DIMENSION_GENDER = 0,
  EEC_DIMENSION_RACE = 1,
} EecDimension;

typedef enum EecGroup {
  EEC_GROUP_NOT_SIGNIFICANT = 0,
  // Female (or African American) scored significantly higher.
  EEC_GROUP_LEFT_HIGHER = 1,
  EEC_GROUP_RIGHT_HIGHER = 2,
} EecGroup;

// Opaque analysis result handle.
typedef struct EecAnalysis EecAnalysis;

// Opaque corpus handle.
typedef struct EecCorpus EecCorpus;

typedef struct EecBoxStats {
  double q1;
  double median;
  double q3;
  double whisker_low;
  double whisker_high;
} EecBoxStats;

typedef struct EecTestResult {
  size_t n;
  double mean_delta;
  double sd_delta;
  // +/-infinity when every delta is the same non-zero value.
  double t_statistic;
  size_t degrees_of_freedom;
  double p_value;
  double alpha;
  bool significant;
} EecTestResult;

// One system along one dimension. `avg_delta_pos` is NaN when
// `has_avg_delta_pos` is false; likewise for the negative side.
typedef struct EecSummary {
  enum EecTask task;
  enum EecDimension dimension;
  enum EecGroup group;
  struct EecTestResult test;
  bool has_avg_delta_pos;
  double avg_delta_pos;
  bool has_avg_delta_neg;
  double avg_delta_neg;
  double delta_min;
  double delta_max;
  double delta_spread;
  struct EecBoxStats box_stats;
} EecSummary;

// Message of the last failed call on this thread, or NULL after a success.
// The pointer stays valid until the next call on this thread.
const char *eec_last_error(void);

// Library version as a static NUL-terminated string.
const char *eec_version(void);

// Two-tailed Student t p-value.
//
// # Safety
// `out` must be valid for writing one double.
enum EecStatus eec_student_t_p(double t, double df, double *out);

// alpha / n.
//
// # Safety
// `out` must be valid for writing one double.
enum EecStatus eec_bonferroni(double alpha, size_t n, double *out);

// Quartiles and 1.5 IQR whiskers.
//
// # Safety
// `values` points to `len` doubles; `out` is valid for writing.
enum EecStatus eec_box_stats(const double *values, size_t len, struct EecBoxStats *out);

// Paired t-test on the differences, compared against `alpha` as given.
//
// # Safety
// `deltas` points to `len` doubles; `out` is valid for writing.
enum EecStatus eec_paired_t_test(const double *deltas,
                                 size_t len,
                                 double alpha,
                                 struct EecTestResult *out);

// Corpus from the built-in lexicons.
//
// # Safety
// `out` must be valid for writing one pointer.
enum EecStatus eec_corpus_new(struct EecCorpus **out);

// Corpus from a directory with persons.tsv, emotions.tsv and/or
// templates.tsv; missing files fall back to the built-in lists.
//
// # Safety
// `lexicon_dir` is a NUL-terminated path; `out` is valid for writing.
enum EecStatus eec_corpus_load(const char *lexicon_dir, struct EecCorpus **out);

// # Safety
// `corpus` is null or a handle from `eec_corpus_new`/`eec_corpus_load` not
// yet freed.
void eec_corpus_free(struct EecCorpus *corpus);

// # Safety
// `corpus` is a live handle; `out` is valid for writing.
enum EecStatus eec_corpus_len(const struct EecCorpus *corpus, size_t *out);

// Writes the corpus CSV to `path`.
//
// # Safety
// `corpus` is a live handle; `path` is a NUL-terminated string.
enum EecStatus eec_corpus_write_csv(const struct EecCorpus *corpus, const char *path);

// Writes a synthetic prediction file `{dir}/{system_id}.{task}.csv`.
//
// # Safety
// `corpus` is a live handle; `dir` and `system_id` are NUL-terminated.
enum EecStatus eec_synth_write(const struct EecCorpus *corpus,
                               const char *dir,
                               const char *system_id,
                               enum EecTask task,
                               double gender_shift,
                               double race_shift,
                               double noise_sd,
                               uint64_t seed);

// Analyzes prediction files named `{system_id}.{task}.csv` along both
// dimensions over the full corpus. `corrections` = 0 uses the default
// Bonferroni denominator (files x 2).
//
// # Safety
// `corpus` is a live handle; `paths` points to `n_paths` NUL-terminated
// strings; `out` is valid for writing.
enum EecStatus eec_analyze_files(const struct EecCorpus *corpus,
                                 const char *const *paths,
                                 size_t n_paths,
                                 double alpha,
                                 size_t corrections,
                                 struct EecAnalysis **out);

// # Safety
// `analysis` is null or a live handle from `eec_analyze_files`.
void eec_analysis_free(struct EecAnalysis *analysis);

// Number of summaries (files x dimensions), sorted by task, dimension and
// system id.
//
// # Safety
// `analysis` is a live handle; `out` is valid for writing.
enum EecStatus eec_analysis_len(const struct EecAnalysis *analysis, size_t *out);

// The Bonferroni-corrected threshold that was applied.
//
// # Safety
// `analysis` is a live handle; `out` is valid for writing.
enum EecStatus eec_analysis_threshold(const struct EecAnalysis *analysis, double *out);

// Summary `index`; `system_id` (optional) receives a string owned by the
// handle.
//
// # Safety
// `analysis` is a live handle; `out` is valid for writing; `system_id` is
// null or valid for writing one pointer.
enum EecStatus eec_analysis_summary(const struct EecAnalysis *analysis,
                                    size_t index,
                                    struct EecSummary *out,
                                    const char **system_id);

#endif  /* EEC_H */
