#ifndef DIAGARCS_H
#define DIAGARCS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define DIAG_API __attribute__((visibility("default")))
#else
#define DIAG_API
#endif

typedef enum diag_status {
    DIAG_OK = 0,
    DIAG_ERR_INPUT = 1,
    DIAG_ERR_BUDGET = 2,
    DIAG_ERR_OVERFLOW = 3,
    DIAG_ERR_PRECONDITION = 4,
    DIAG_ERR_CONVERGENCE = 5,
    DIAG_ERR_NUMERIC = 6,
    DIAG_ERR_INTERNAL = 7
} diag_status;

typedef enum diag_format { DIAG_FORMAT_CSV = 0, DIAG_FORMAT_JSON = 1 } diag_format;

typedef struct diag_system diag_system;
typedef struct diag_report diag_report;

typedef struct diag_budget {
    uint64_t max_tuples;
    uint64_t max_bytes;
} diag_budget;

/* Message for the last failed call on this thread; never NULL. */
DIAG_API const char* diag_last_error(void);
DIAG_API const char* diag_status_name(diag_status status);

/* 0 restores the hardware default. */
DIAG_API void diag_set_threads(unsigned n);
DIAG_API unsigned diag_threads(void);

/* Library defaults with DIAG_ARCS_BUDGET_TUPLES / DIAG_ARCS_BUDGET_BYTES applied. */
DIAG_API diag_status diag_budget_from_env(diag_budget* out);

/* Strings handed out by the library are released with diag_string_free. */
DIAG_API void diag_string_free(char* s);

DIAG_API diag_status diag_system_load(const char* path, diag_system** out);
DIAG_API diag_status diag_system_parse(const char* json, diag_system** out);
DIAG_API void diag_system_free(diag_system* sys);
DIAG_API size_t diag_system_n(const diag_system* sys);
DIAG_API size_t diag_system_s(const diag_system* sys);
DIAG_API diag_status diag_system_json(const diag_system* sys, char** out);

/* Zeros in [-X, X]^s as a decimal string; method 0 auto, 1 brute, 2 meet in the middle. */
DIAG_API diag_status diag_count(const diag_system* sys, int64_t X, int method, const diag_budget* budget,
                                char** count);
DIAG_API diag_status diag_T_q(const diag_system* sys, int64_t q, double* out);
DIAG_API diag_status diag_weyl_sum(const int* k, size_t n, const double* alpha, int64_t X, double* re, double* im);
/* a receives n entries when the point is major. */
DIAG_API diag_status diag_classify(const int* k, size_t n, const double* alpha, int64_t X, int64_t tau_num,
                                   int64_t tau_den, int* major, int64_t* q, int64_t* a);

/* command: count, predict, compare, vmvt, arcs, weyl, series, sint; config is a JSON object. */
DIAG_API diag_status diag_run(const char* command, const char* config_json, diag_report** out);
DIAG_API diag_status diag_report_render(const diag_report* report, diag_format format, char** out);
DIAG_API size_t diag_report_warning_count(const diag_report* report);
DIAG_API const char* diag_report_warning(const diag_report* report, size_t i);
DIAG_API void diag_report_free(diag_report* report);

#ifdef __cplusplus
}
#endif

#endif
