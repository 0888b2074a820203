#ifndef BOOLBIAS_BOOLBIAS_H
#define BOOLBIAS_BOOLBIAS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef BOOLBIAS_BUILDING_LIBRARY
#    define BB_API __declspec(dllexport)
#  else
#    define BB_API __declspec(dllimport)
#  endif
#else
#  define BB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bb_status {
  BB_OK = 0,
  BB_INVALID_ARGUMENT = 1,
  BB_BUDGET_EXCEEDED = 2,
  BB_IO_ERROR = 3,
  BB_INTERNAL_ERROR = 4,
  /* A sweep completed but some of its runs failed. */
  BB_RUN_FAILED = 5
} bb_status;

typedef struct bb_function bb_function;
typedef struct bb_dnf bb_dnf;
typedef struct bb_prior bb_prior;

typedef struct bb_complexity {
  int n;
  int k_dnf;
  int k_theta;
  int k_clause;
  double k_lz;
} bb_complexity;

typedef enum bb_objective {
  BB_OBJECTIVE_LITERALS = 0,
  BB_OBJECTIVE_CLAUSES = 1,
  BB_OBJECTIVE_LITERALS_PLUS_CLAUSES = 2
} bb_objective;

BB_API const char* bb_version(void);

/* Message for the last failed call on this thread; "" if none. */
BB_API const char* bb_last_error(void);

/* Frees strings returned through char** out-parameters. */
BB_API void bb_string_free(char* s);

/* Truth tables. Bit strings are 2^n characters of '0'/'1', index 0 first. */
BB_API bb_status bb_function_from_string(const char* bits, bb_function** out);
BB_API bb_status bb_function_from_hex(const char* hex, int n, bb_function** out);
BB_API void bb_function_free(bb_function* f);
BB_API int bb_function_n(const bb_function* f);
BB_API bb_status bb_function_to_string(const bb_function* f, char** out);
BB_API bb_status bb_function_to_hex(const bb_function* f, char** out);
/* inputs holds n bytes, each 0 or 1, x1 first. */
BB_API bb_status bb_function_eval(const bb_function* f, const uint8_t* inputs, size_t n,
                                  int* value);

BB_API bb_status bb_complexity_report(const bb_function* f, bb_complexity* out);
BB_API bb_status bb_k_lz(const char* bits, double* out);

BB_API bb_status bb_dnf_min(const bb_function* f, bb_objective objective, int allow_negation,
                            bb_dnf** out);
BB_API bb_status bb_dnf_parse(const char* text, int n, bb_dnf** out);
BB_API bb_status bb_dnf_to_text(const bb_dnf* d, char** out);
BB_API bb_status bb_dnf_truth_table(const bb_dnf* d, bb_function** out);
BB_API int bb_dnf_length(const bb_dnf* d);
BB_API void bb_dnf_free(bb_dnf* d);

/* Prior over functions. Sampling is reproducible for a given seed and does
 * not depend on the thread count. */
BB_API bb_status bb_prior_sample(int n, int alpha_w, uint64_t draws, uint64_t seed,
                                 unsigned threads, bb_prior** out);
BB_API bb_status bb_prior_exact(int n, int alpha_w, bb_prior** out);
BB_API uint64_t bb_prior_total(const bb_prior* p);
BB_API size_t bb_prior_distinct(const bb_prior* p);
BB_API bb_status bb_prior_count(const bb_prior* p, const bb_function* f, uint64_t* out);
BB_API void bb_prior_free(bb_prior* p);

/* Bounds. log_lower is the natural log of the lower bound (-inf when the
 * bound is vacuous). */
BB_API bb_status bb_pac_bayes(double p_f, uint64_t m, double delta, double* out);
BB_API bb_status bb_bound_parity(int n, double alpha_w, int k, double* log_lower,
                                 double* log_upper);
BB_API bb_status bb_optimal_width(int n, double* out);

/* Runs an experiment command from a JSON config and returns its JSON
 * summary in *result_json (free with bb_string_free). On error *result_json
 * is NULL and bb_last_error() describes the failure. */
BB_API bb_status bb_run_command(const char* command, const char* config_json,
                                char** result_json);

#ifdef __cplusplus
}
#endif

#endif
