/* bandtest: empirical likelihood ratio tests with CDF-band constraints.
 *
 * C interface to the bandtest shared library. All objects are opaque handles
 * created and destroyed here; every fallible call returns a bandtest_status
 * and reports detail through bandtest_last_error(). Handles are immutable
 * after creation and safe to share across threads.
 */
#ifndef BANDTEST_H
#define BANDTEST_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BANDTEST_API __declspec(dllexport)
#else
#define BANDTEST_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bandtest_status {
    BANDTEST_OK = 0,
    BANDTEST_ERR_INVALID_ARGUMENT = 1,
    BANDTEST_ERR_EMPTY_INPUT = 2,
    BANDTEST_ERR_DUPLICATE_SAMPLE = 3,
    BANDTEST_ERR_INFEASIBLE_BAND = 4,
    BANDTEST_ERR_INFEASIBLE_MOMENT = 5,
    BANDTEST_ERR_NONMONOTONE_CDF = 6,
    BANDTEST_ERR_ZERO_VARIANCE = 7,
    BANDTEST_ERR_TOO_FEW_SAMPLES = 8,
    BANDTEST_ERR_MAX_ITERATIONS = 9,
    BANDTEST_ERR_PARSE = 10,
    BANDTEST_ERR_UNKNOWN_KEY = 11,
    BANDTEST_ERR_RANGE = 12,
    BANDTEST_ERR_IO = 13,
    BANDTEST_ERR_INTERNAL = 14
} bandtest_status;

typedef enum bandtest_tie_policy {
    BANDTEST_TIE_ERROR = 0,  /* reject exact duplicates */
    BANDTEST_TIE_JITTER = 1  /* separate duplicates by one ulp */
} bandtest_tie_policy;

/* Static description of a status code. */
BANDTEST_API const char* bandtest_strerror(bandtest_status status);
/* Detail message of the calling thread's most recent failure ("" if none). */
BANDTEST_API const char* bandtest_last_error(void);

/* ---- samples ---------------------------------------------------------- */

typedef struct bandtest_sample bandtest_sample;

BANDTEST_API bandtest_status bandtest_sample_create(const double* values, size_t count,
                                                    bandtest_tie_policy ties,
                                                    bandtest_sample** out);
/* File format: one decimal float per line, '#' comments ignored. */
BANDTEST_API bandtest_status bandtest_sample_load(const char* path, bandtest_tie_policy ties,
                                                  bandtest_sample** out);
BANDTEST_API size_t bandtest_sample_size(const bandtest_sample* sample);
/* Borrowed pointer to the sorted values; valid while the handle lives. */
BANDTEST_API const double* bandtest_sample_values(const bandtest_sample* sample);
BANDTEST_API void bandtest_sample_destroy(bandtest_sample* sample);

/* ---- CDF bands -------------------------------------------------------- */

typedef struct bandtest_band bandtest_band;

/* Shared knot grid; lower/upper nondecreasing in [0,1], lower <= upper. */
BANDTEST_API bandtest_status bandtest_band_create(const double* knots, const double* lower,
                                                  const double* upper, size_t count,
                                                  bandtest_band** out);
/* CSV with header "knot,lower,upper". */
BANDTEST_API bandtest_status bandtest_band_load(const char* path, bandtest_band** out);
BANDTEST_API bandtest_status bandtest_band_save(const bandtest_band* band, const char* path);
/* Envelope of per-group ECDFs over consecutive groups of group_size samples.
 * discarded (optional) receives the count of unused trailing samples. */
BANDTEST_API bandtest_status bandtest_band_build(const double* values, size_t count,
                                                 size_t group_size, bandtest_band** out,
                                                 size_t* discarded);
BANDTEST_API size_t bandtest_band_knot_count(const bandtest_band* band);
/* Fills caller arrays of length bandtest_band_knot_count(); any may be NULL. */
BANDTEST_API bandtest_status bandtest_band_profile(const bandtest_band* band, double* knots,
                                                   double* lower, double* upper);
BANDTEST_API void bandtest_band_destroy(bandtest_band* band);

/* ---- ELRDF detector --------------------------------------------------- */

typedef struct bandtest_elrdf_result {
    double statistic;    /* -(1/n) log of the maximized likelihood ratio; may be +inf */
    double kkt_residual; /* stationarity violation at the reported maximizer */
    int32_t iterations;  /* Newton iterations spent */
} bandtest_elrdf_result;

/* Maximizes the empirical likelihood under the band constraint. weights
 * (optional) receives the n maximizing weights. Returns
 * BANDTEST_ERR_INFEASIBLE_BAND when no CDF in the band fits the sample;
 * BANDTEST_ERR_MAX_ITERATIONS still fills result with the best iterate. */
BANDTEST_API bandtest_status bandtest_elrdf_solve(const bandtest_sample* sample,
                                                  const bandtest_band* band, double tol,
                                                  bandtest_elrdf_result* result,
                                                  double* weights);
/* 1 for H1 (statistic > eta), 0 for H0. */
BANDTEST_API int bandtest_decide(double statistic, double eta);
/* Exhaustive lattice search over the weight simplex (n <= 4, step <= 0.1). */
BANDTEST_API bandtest_status bandtest_grid_oracle(const bandtest_sample* sample,
                                                  const bandtest_band* band, double step,
                                                  double* statistic);

/* ---- competitor tests -------------------------------------------------- */

BANDTEST_API bandtest_status bandtest_robust_ks(const bandtest_sample* sample,
                                                const bandtest_band* band, double* statistic);
/* decision: 1 iff sqrt(n) * d_n > gamma. */
BANDTEST_API bandtest_status bandtest_ks_decide(double d_n, size_t n, double gamma,
                                                int* decision);
BANDTEST_API bandtest_status bandtest_robust_cvm(const bandtest_sample* sample,
                                                 const bandtest_band* band, double* statistic);

typedef double (*bandtest_moment_fn)(double x, void* ctx);

/* Empirical likelihood under l <= sum w_i g(X_i) <= u; g defaults to the
 * identity when NULL. */
BANDTEST_API bandtest_status bandtest_elrm(const bandtest_sample* sample, bandtest_moment_fn g,
                                           void* ctx, double lower, double upper,
                                           double* statistic);
/* KS distance between the ECDF and the ML-fitted Gaussian; needs n >= 2. */
BANDTEST_API bandtest_status bandtest_ks_normality(const double* values, size_t count,
                                                   double* statistic);

/* ---- degenerate (fully known null) ------------------------------------ */

typedef struct bandtest_null_cdf bandtest_null_cdf;

/* Accepts "normal:<mean>:<sd>", "uniform:<a>:<b>", "ecdf:<file>". */
BANDTEST_API bandtest_status bandtest_null_cdf_parse(const char* spec, bandtest_null_cdf** out);
BANDTEST_API bandtest_status bandtest_null_cdf_eval(const bandtest_null_cdf* null_cdf, double x,
                                                    double* out);
BANDTEST_API void bandtest_null_cdf_destroy(bandtest_null_cdf* null_cdf);

/* Null-CDF spacings at the ordered sample; weights has length n and
 * sum_target (optional) receives F(X_n). */
BANDTEST_API bandtest_status bandtest_degenerate_weights(const bandtest_sample* sample,
                                                         const bandtest_null_cdf* null_cdf,
                                                         double* weights, double* sum_target);
/* Randomly partitions count = groups * group_size values, averages per-group
 * spacings, and scores them; converges to log(1 + 1/group_size) under the
 * null. two_sided folds the statistic around that limit. */
BANDTEST_API bandtest_status bandtest_grouped_statistic(const double* values, size_t count,
                                                        const bandtest_null_cdf* null_cdf,
                                                        size_t groups, size_t group_size,
                                                        uint64_t seed, int two_sided,
                                                        double* statistic);
/* CDF of a single spacing under the null: 1 - (1-w)^n. */
BANDTEST_API bandtest_status bandtest_spacing_cdf(size_t n, double w, double* out);

/* ---- Monte-Carlo ROC harness ------------------------------------------ */

typedef struct bandtest_roc_config bandtest_roc_config;
typedef struct bandtest_roc bandtest_roc;
typedef struct bandtest_study bandtest_study;

/* Flat key=value text (see README for the key list); '#' comments allowed.
 * Every key has a default, so "" is a valid config. */
BANDTEST_API bandtest_status bandtest_roc_config_parse(const char* text,
                                                       bandtest_roc_config** out);
BANDTEST_API bandtest_status bandtest_roc_config_load(const char* path,
                                                      bandtest_roc_config** out);
BANDTEST_API void bandtest_roc_config_destroy(bandtest_roc_config* config);

/* Full seeded experiment; threads = 0 defers to BANDTEST_THREADS / hardware.
 * The outcome is a pure function of the config, never of the thread count. */
BANDTEST_API bandtest_status bandtest_roc_run(const bandtest_roc_config* config,
                                              unsigned threads, bandtest_roc** out);
BANDTEST_API size_t bandtest_roc_point_count(const bandtest_roc* roc);
/* Fills caller arrays of length bandtest_roc_point_count(); any may be NULL. */
BANDTEST_API bandtest_status bandtest_roc_points(const bandtest_roc* roc, double* thresholds,
                                                 double* pf, double* pd);
BANDTEST_API double bandtest_roc_auc(const bandtest_roc* roc);
BANDTEST_API int bandtest_roc_flipped(const bandtest_roc* roc);
/* "threshold,pf,pd" rows. */
BANDTEST_API bandtest_status bandtest_roc_write_csv(const bandtest_roc* roc, const char* path);
/* One-line "test,auc,flipped,seed". */
BANDTEST_API bandtest_status bandtest_roc_write_summary(const bandtest_roc* roc,
                                                        const char* path);
BANDTEST_API void bandtest_roc_destroy(bandtest_roc* roc);

/* Distribution of the KS normality statistic at each sample size, under
 * stationary Gaussian noise and under the config's noise model. */
BANDTEST_API bandtest_status bandtest_normality_study_run(const bandtest_roc_config* config,
                                                          const size_t* sizes, size_t size_count,
                                                          size_t replications, unsigned threads,
                                                          bandtest_study** out);
BANDTEST_API size_t bandtest_study_size_count(const bandtest_study* study);
/* Borrowed sorted statistics for one size; nonstationary selects the column. */
BANDTEST_API bandtest_status bandtest_study_column(const bandtest_study* study, size_t size_index,
                                                   int nonstationary, const double** values,
                                                   size_t* count);
/* Writes "<prefix>_<size>.csv" per size with columns gaussian,nonstationary. */
BANDTEST_API bandtest_status bandtest_normality_study_write(const bandtest_study* study,
                                                            const char* prefix);
BANDTEST_API void bandtest_study_destroy(bandtest_study* study);

#ifdef __cplusplus
}
#endif

#endif /* BANDTEST_H */
