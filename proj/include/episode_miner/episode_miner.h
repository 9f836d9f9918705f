#ifndef EPISODE_MINER_H
#define EPISODE_MINER_H

#include <stddef.h>
#include <stdint.h>

#if defined(EPM_BUILDING_LIBRARY)
#define EPM_API __attribute__((visibility("default")))
#else
#define EPM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum epm_status {
  EPM_OK = 0,
  EPM_INVALID_ARGUMENT = 1,
  EPM_UNSORTED_STREAM = 2,
  EPM_UNKNOWN_SYMBOL = 3,
  EPM_INVALID_TIMESTAMP = 4,
  EPM_MALFORMED_LINE = 5,
  EPM_PARSE_ERROR = 6,
  EPM_EMPTY_STREAM = 7,
  EPM_RELAXATION_REQUIRED = 8,
  EPM_DEGENERATE_FIT = 9,
  EPM_NO_JOIN = 10,
  EPM_INSTANCE_TOO_LARGE = 11,
  EPM_IO = 12,
  EPM_INTERNAL = 13,
  EPM_OUT_OF_MEMORY = 14
} epm_status;

/* Opaque handles. Every handle is immutable once created and may be shared
   between threads; free each one exactly once. */
typedef struct epm_stream epm_stream;
typedef struct epm_result epm_result;

/* Message of the last failure on the calling thread, "" if none. Valid until
   the next call on the same thread. */
EPM_API const char* epm_last_error(void);
/* Position attached to the last failure (line, event index or character
   offset), or -1. */
EPM_API int64_t epm_last_error_position(void);
EPM_API const char* epm_status_name(epm_status status);
EPM_API const char* epm_version(void);

/* Owned strings returned by the library. */
EPM_API void epm_string_free(char* s);

/* ---- event streams ---- */

EPM_API epm_status epm_stream_parse(const char* text, size_t length, int sort, epm_stream** out);
EPM_API epm_status epm_stream_load(const char* path, int sort, epm_stream** out);
EPM_API epm_status epm_stream_save(const epm_stream* stream, const char* path);
EPM_API epm_status epm_stream_write(const epm_stream* stream, char** out_text);
EPM_API size_t epm_stream_size(const epm_stream* stream);
EPM_API size_t epm_stream_alphabet_size(const epm_stream* stream);
/* Injection ledger of a generated stream as JSON, "[]" for parsed streams. */
EPM_API epm_status epm_stream_ledger_json(const epm_stream* stream, char** out_json);
EPM_API void epm_stream_free(epm_stream* stream);

/* ---- synthetic spike trains ---- */

typedef struct epm_gen_options {
  size_t neurons;      /* default 26 */
  double basal_rate;   /* spikes per second per neuron, default 20 */
  double duration;     /* seconds, default 60 */
  uint64_t seed;       /* default 1 */
  const char* const* chains; /* chain texts such as "A>B>C@(0.001,0.005]p0.9" */
  size_t chain_count;
} epm_gen_options;

EPM_API void epm_gen_options_init(epm_gen_options* options);
EPM_API epm_status epm_generate(const epm_gen_options* options, epm_stream** out);

/* ---- counting one episode ---- */

typedef enum epm_count_mode {
  EPM_COUNT_SERIAL = 0,    /* exact counter */
  EPM_COUNT_RELAXED = 1,   /* single-slot counter, episode must have zero lower bounds */
  EPM_COUNT_SEGMENTED = 2  /* exact count through segment summaries */
} epm_count_mode;

/* `episode` uses the text form "A -(5,10]-> B". `segments` is a power of two
   (EPM_COUNT_SEGMENTED only; 0 picks a default). */
EPM_API epm_status epm_count(const epm_stream* stream, const char* episode, epm_count_mode mode, size_t segments,
                             size_t workers, uint64_t* out_count);
/* Episode text with every lower bound set to zero. */
EPM_API epm_status epm_relax_episode(const epm_stream* stream, const char* episode, char** out_episode);

/* ---- level-wise mining ---- */

typedef enum epm_strategy {
  EPM_STRATEGY_AUTO = 0,
  EPM_STRATEGY_EPISODE_PARALLEL = 1,
  EPM_STRATEGY_SEGMENT_PARALLEL = 2
} epm_strategy;

typedef struct epm_mine_options {
  const char* constraints; /* "(5,10];(10,15]" */
  uint64_t threshold;      /* default 1 */
  size_t max_level;        /* 0 = no limit */
  size_t segments;         /* power of two, 0 = derive from workers */
  size_t workers;          /* 0 = hardware concurrency */
  int one_pass;            /* nonzero disables relaxed elimination */
  epm_strategy strategy;   /* default EPM_STRATEGY_AUTO */
} epm_mine_options;

EPM_API void epm_mine_options_init(epm_mine_options* options);
EPM_API epm_status epm_mine(const epm_stream* stream, const epm_mine_options* options, epm_result** out);

EPM_API size_t epm_result_level_count(const epm_result* result);
EPM_API size_t epm_result_size(const epm_result* result);
/* Row i of the flattened level-ordered table. Strings stay valid for the
   lifetime of the result. */
EPM_API epm_status epm_result_row(const epm_result* result, size_t i, size_t* out_level, const char** out_episode,
                                  uint64_t* out_count);
/* "level\tepisode\tcount" header plus one line per frequent episode. */
EPM_API epm_status epm_result_tsv(const epm_result* result, char** out_tsv);
/* Per-level counting report as JSON. */
EPM_API epm_status epm_result_report_json(const epm_result* result, char** out_json);
EPM_API void epm_result_free(epm_result* result);

/* ---- strategy selection ---- */

typedef struct epm_dispatch_params {
  size_t multiprocessors;
  size_t blocks_per_multiprocessor;
  size_t threads_per_block;
  double f_a;
  double f_b;
  int use_reference_table; /* nonzero: the measured crossover points override f(N) for N = 3..8 */
} epm_dispatch_params;

/* The reference GPU configuration with its measured crossover points. */
EPM_API void epm_dispatch_params_reference(epm_dispatch_params* params);
EPM_API epm_status epm_choose_strategy(size_t candidates, size_t episode_size, const epm_dispatch_params* params,
                                       epm_strategy* out);

typedef enum epm_fit_form { EPM_FIT_RECIPROCAL = 0, EPM_FIT_LINEAR = 1 } epm_fit_form;

/* Least-squares fit of the reference crossover points. */
EPM_API epm_status epm_fit_crossover(size_t multiprocessors, size_t blocks_per_multiprocessor,
                                     size_t threads_per_block, epm_fit_form form, double* out_a, double* out_b,
                                     double* out_residual);

#ifdef __cplusplus
}
#endif

#endif
