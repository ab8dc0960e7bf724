#ifndef SANLR_H
#define SANLR_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(SANLR_BUILDING)
#    define SANLR_API __declspec(dllexport)
#  else
#    define SANLR_API __declspec(dllimport)
#  endif
#else
#  define SANLR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/*
 * Marginal distributions of Stochastic Automata Networks in hierarchical
 * Tucker format.
 *
 * All functions return a sanlr_status. On failure a message for the calling
 * thread is available from sanlr_last_error() until the next call.
 * Handles are opaque and must be released with the matching free function.
 */

typedef enum sanlr_status {
    SANLR_OK = 0,
    SANLR_ERR_INVALID_ARGUMENT = 1,
    SANLR_ERR_INVALID_MODEL = 2,
    SANLR_ERR_INVALID_PARAMS = 3,
    SANLR_ERR_INVALID_CONFIG = 4,
    SANLR_ERR_PARSE = 5,
    SANLR_ERR_IO = 6,
    SANLR_ERR_CAP_EXCEEDED = 7,
    SANLR_ERR_SINGULAR = 8,
    SANLR_ERR_INVALID_GAMMA = 9,
    SANLR_ERR_DIM_MISMATCH = 10,
    SANLR_ERR_TREE = 11,
    SANLR_ERR_INDEX = 12,
    SANLR_ERR_NOT_CONVERGED = 13,
    SANLR_ERR_BUFFER_TOO_SMALL = 14,
    SANLR_ERR_INTERNAL = 99
} sanlr_status;

typedef struct sanlr_model sanlr_model;
typedef struct sanlr_solution sanlr_solution;

SANLR_API const char* sanlr_status_string(sanlr_status s);
SANLR_API const char* sanlr_last_error(void);
SANLR_API const char* sanlr_version(void);

/* ---- models ------------------------------------------------------------ */

/* JSON model file, or a ".csv" file holding d x d MHN parameters */
SANLR_API sanlr_status sanlr_model_load(const char* path, sanlr_model** out);
SANLR_API sanlr_status sanlr_model_parse_json(const char* text, sanlr_model** out);
/* row-major d x d MHN parameter matrix, all entries > 0 */
SANLR_API sanlr_status sanlr_model_from_mhn(size_t d, const double* theta, sanlr_model** out);
SANLR_API void sanlr_model_free(sanlr_model* m);

SANLR_API sanlr_status sanlr_model_dimension(const sanlr_model* m, size_t* d);
/* number of states of automaton mu */
SANLR_API sanlr_status sanlr_model_size(const sanlr_model* m, size_t mu, size_t* n);
SANLR_API sanlr_status sanlr_model_gamma_bound(const sanlr_model* m, double* gamma);

/*
 * Structural checks. *n_violations receives the number of problems found;
 * the messages, separated by '\n', are copied into buf (truncated to
 * buf_size - 1 characters, always terminated) when buf is not NULL.
 */
SANLR_API sanlr_status sanlr_model_validate(const sanlr_model* m, size_t* n_violations, char* buf,
                                            size_t buf_size);

/* ---- solver ------------------------------------------------------------ */

typedef struct sanlr_solver_options {
    double gamma;              /* <= 0: use the model's bound */
    double tol;                /* relative residual target */
    double eps;                /* relative truncation accuracy */
    size_t max_iter;
    size_t rank_cap;           /* 0: no cap */
    size_t stagnation_window;  /* 0: disabled */
    const char* tree;          /* "canonical" or "perm:i1,i2,..." (1-based); NULL = canonical */
} sanlr_solver_options;

SANLR_API void sanlr_solver_options_init(sanlr_solver_options* opt);

/*
 * Runs the iteration. Returns SANLR_ERR_NOT_CONVERGED when tol was not
 * reached; *out is still set to the best iterate in that case.
 */
SANLR_API sanlr_status sanlr_solve(const sanlr_model* m, const sanlr_solver_options* opt, sanlr_solution** out);
SANLR_API void sanlr_solution_free(sanlr_solution* s);

SANLR_API sanlr_status sanlr_solution_iterations(const sanlr_solution* s, size_t* k);
SANLR_API sanlr_status sanlr_solution_residual(const sanlr_solution* s, double* r);
SANLR_API sanlr_status sanlr_solution_converged(const sanlr_solution* s, int* converged);
SANLR_API sanlr_status sanlr_solution_stagnated(const sanlr_solution* s, int* stagnated);
SANLR_API sanlr_status sanlr_solution_gamma(const sanlr_solution* s, double* gamma);
SANLR_API sanlr_status sanlr_solution_ranks(const sanlr_solution* s, size_t* r_max, size_t* r_eff);
SANLR_API sanlr_status sanlr_solution_storage(const sanlr_solution* s, size_t* entries);
/* <e, p>, 1 up to rounding */
SANLR_API sanlr_status sanlr_solution_mass(const sanlr_solution* s, double* mass);
/* index holds d state indices (0-based) */
SANLR_API sanlr_status sanlr_solution_entry(const sanlr_solution* s, const size_t* index, double* value);
/* copies min(len, iterations) residuals, entry k-1 for iteration k */
SANLR_API sanlr_status sanlr_solution_residual_history(const sanlr_solution* s, double* out, size_t len);
/*
 * Full tensor, first mode fastest. *len receives the number of entries;
 * out may be NULL to query it. Fails with SANLR_ERR_CAP_EXCEEDED beyond
 * 2^20 entries.
 */
SANLR_API sanlr_status sanlr_solution_to_dense(const sanlr_solution* s, double* out, size_t* len);

/* ---- studies ----------------------------------------------------------- */

typedef enum sanlr_study_kind {
    SANLR_STUDY_SV = 0,
    SANLR_STUDY_RANK = 1,
    SANLR_STUDY_TRUNC = 2,
    SANLR_STUDY_CONV = 3
} sanlr_study_kind;

typedef enum sanlr_format { SANLR_FORMAT_CSV = 0, SANLR_FORMAT_JSON = 1 } sanlr_format;

typedef struct sanlr_study_options {
    const size_t* ds;          /* list of d; sv-study uses ds[0] */
    size_t n_ds;
    const size_t* block_sizes; /* 0 = d/2; conv/sv use block_sizes[0] */
    size_t n_block_sizes;
    const double* tols;        /* trunc-study uses all, others tols[0] */
    size_t n_tols;
    const double* epss;        /* trunc-study uses all, others epss[0] */
    size_t n_epss;
    unsigned long long seed;
    size_t samples;
    size_t max_iter;
    size_t stagnation_window;
    const char* tree;          /* NULL = canonical */
    int timing;                /* nonzero: record wall clock times */
    size_t threads;            /* 0 or 1: sequential */
} sanlr_study_options;

SANLR_API void sanlr_study_options_init(sanlr_study_options* opt);

/* *out receives a newly allocated, NUL-terminated report; free with sanlr_string_free */
SANLR_API sanlr_status sanlr_run_study(sanlr_study_kind kind, const sanlr_study_options* opt, sanlr_format format,
                                       char** out);
SANLR_API void sanlr_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
