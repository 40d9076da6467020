#ifndef ERGOLAB_H
#define ERGOLAB_H

/* C interface to the ergolab library. Every function that can fail returns an
 * ergo_status; on failure ergo_last_error() describes the cause for the
 * calling thread. Objects are opaque and released with their _free function. */

#include <stddef.h>
#include <stdint.h>

#if defined(ERGOLAB_BUILDING_LIBRARY)
#define ERGO_API __attribute__((visibility("default")))
#else
#define ERGO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ergo_status {
  ERGO_OK = 0,
  ERGO_INVALID_ARGUMENT = 1,
  ERGO_PARSE_ERROR = 2,
  ERGO_DOMAIN_ERROR = 3,
  ERGO_PRECISION_EXHAUSTED = 4,
  ERGO_UNSUPPORTED = 5,
  ERGO_GUARD_EXCEEDED = 6,
  ERGO_IO_ERROR = 7,
  ERGO_PROPERTY_FAILED = 8,
  ERGO_INTERNAL_ERROR = 99
} ergo_status;

ERGO_API const char* ergo_version(void);
ERGO_API const char* ergo_status_name(ergo_status status);
ERGO_API const char* ergo_last_error(void);

/* Run settings shared by the drivers below. */
typedef struct ergo_settings ergo_settings;
ERGO_API ergo_status ergo_settings_new(ergo_settings** out);
ERGO_API void ergo_settings_free(ergo_settings* s);
/* N <= 0 restores each driver's default horizon. */
ERGO_API ergo_status ergo_settings_set_n(ergo_settings* s, int64_t N);
ERGO_API ergo_status ergo_settings_set_precision_digits(ergo_settings* s, int digits);
ERGO_API ergo_status ergo_settings_set_tolerance(ergo_settings* s, double converge, double diverge);
ERGO_API ergo_status ergo_settings_set_jobs(ergo_settings* s, int jobs);
ERGO_API ergo_status ergo_settings_set_seed(ergo_settings* s, uint64_t seed);

/* A JSON report plus named output files. */
typedef struct ergo_report ergo_report;
ERGO_API const char* ergo_report_json(const ergo_report* r);
/* Nonzero when an expectation or a build-failing property tripped. */
ERGO_API int ergo_report_failed(const ergo_report* r);
ERGO_API size_t ergo_report_file_count(const ergo_report* r);
ERGO_API const char* ergo_report_file_name(const ergo_report* r, size_t i);
ERGO_API const char* ergo_report_file_data(const ergo_report* r, size_t i, size_t* size);
ERGO_API void ergo_report_free(ergo_report* r);

ERGO_API ergo_status ergo_classify(const ergo_settings* s, const char* expr, ergo_report** out);
ERGO_API ergo_status ergo_seq(const ergo_settings* s, const char* f, const char* perturbation, int dedup, int binary,
                              ergo_report** out);
ERGO_API ergo_status ergo_bk(const ergo_settings* s, const char* f, int64_t K, ergo_report** out);
/* regularity_K < 0 skips word statistics; format is "none", "elements" or
 * "rle1"; akm_k, akm_m > 0 restrict to A_{k,m}. */
ERGO_API ergo_status ergo_set(const ergo_settings* s, const char* spec, int regularity_K, const char* format,
                              int64_t akm_k, int64_t akm_m, ergo_report** out);
ERGO_API ergo_status ergo_weyl(const ergo_settings* s, const char* weight, int m_max, ergo_report** out);
ERGO_API ergo_status ergo_bosh(const ergo_settings* s, const char* expr, ergo_report** out);
ERGO_API ergo_status ergo_qtest(const ergo_settings* s, const char* weight, int k_max, int m_bound, ergo_report** out);
/* config_json: one experiment object; battery_json: {"experiments": [...]}. */
ERGO_API ergo_status ergo_average(const ergo_settings* s, const char* config_json, ergo_report** out);
ERGO_API ergo_status ergo_battery(const ergo_settings* s, const char* battery_json, ergo_report** out);

/* Expressions in t. */
typedef struct ergo_expr ergo_expr;
ERGO_API ergo_status ergo_expr_parse(const char* text, ergo_expr** out);
/* Writes the canonical form; *needed receives the length without the NUL. */
ERGO_API ergo_status ergo_expr_print(const ergo_expr* e, char* buf, size_t cap, size_t* needed);
ERGO_API void ergo_expr_free(ergo_expr* e);

/* a_n = [f(n)] + h_n for n = 1..N. */
typedef struct ergo_sequence ergo_sequence;
ERGO_API ergo_status ergo_sequence_generate(const ergo_expr* f, const char* perturbation, int64_t N, int jobs,
                                            ergo_sequence** out);
ERGO_API int64_t ergo_sequence_length(const ergo_sequence* q);
ERGO_API const int64_t* ergo_sequence_data(const ergo_sequence* q);
ERGO_API int64_t ergo_sequence_flagged(const ergo_sequence* q);
ERGO_API void ergo_sequence_free(ergo_sequence* q);

/* Operator models and vectors. */
typedef struct ergo_model ergo_model;
typedef struct ergo_vector ergo_vector;
ERGO_API ergo_status ergo_model_parse(const char* spec, ergo_model** out);
ERGO_API void ergo_model_free(ergo_model* m);
ERGO_API ergo_status ergo_vector_parse(const char* spec, ergo_vector** out);
ERGO_API void ergo_vector_free(ergo_vector* v);
/* <T^a x, T^b x>. */
ERGO_API ergo_status ergo_model_gram(const ergo_model* m, const ergo_vector* x, int64_t a, int64_t b, double* re,
                                     double* im);
ERGO_API ergo_status ergo_model_power_bound(const ergo_model* m, int64_t n_max, double* M, int64_t* argmax);

#ifdef __cplusplus
}
#endif

#endif
