#include "bandtest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "band_builder.hpp"
#include "baselines.hpp"
#include "degenerate.hpp"
#include "elrdf.hpp"
#include "experiment.hpp"
#include "io.hpp"
#include "step_cdf.hpp"

struct bandtest_sample {
    bandtest::SortedSample value;
};
struct bandtest_band {
    bandtest::CdfBand value;
};
struct bandtest_null_cdf {
    bandtest::NullCdf value;
};
struct bandtest_roc_config {
    bandtest::RocExperimentConfig value;
};
struct bandtest_roc {
    bandtest::RocExperimentResult value;
};
struct bandtest_study {
    bandtest::NormalityStudyResult value;
};

namespace {

thread_local std::string t_last_error;

bandtest_status fail(bandtest_status status, const char* what) {
    t_last_error = what;
    return status;
}

// Runs the body and maps core exceptions onto status codes.
template <typename Fn>
bandtest_status guarded(Fn&& fn) {
    try {
        fn();
        t_last_error.clear();
        return BANDTEST_OK;
    } catch (const bandtest::EmptyInput& e) {
        return fail(BANDTEST_ERR_EMPTY_INPUT, e.what());
    } catch (const bandtest::DuplicateSample& e) {
        return fail(BANDTEST_ERR_DUPLICATE_SAMPLE, e.what());
    } catch (const bandtest::InfeasibleBand& e) {
        return fail(BANDTEST_ERR_INFEASIBLE_BAND, e.what());
    } catch (const bandtest::InfeasibleMoment& e) {
        return fail(BANDTEST_ERR_INFEASIBLE_MOMENT, e.what());
    } catch (const bandtest::NonMonotoneCdf& e) {
        return fail(BANDTEST_ERR_NONMONOTONE_CDF, e.what());
    } catch (const bandtest::ZeroVariance& e) {
        return fail(BANDTEST_ERR_ZERO_VARIANCE, e.what());
    } catch (const bandtest::TooFewSamples& e) {
        return fail(BANDTEST_ERR_TOO_FEW_SAMPLES, e.what());
    } catch (const bandtest::UnknownKey& e) {
        return fail(BANDTEST_ERR_UNKNOWN_KEY, e.what());
    } catch (const bandtest::ParseError& e) {
        return fail(BANDTEST_ERR_PARSE, e.what());
    } catch (const bandtest::RangeError& e) {
        return fail(BANDTEST_ERR_RANGE, e.what());
    } catch (const bandtest::IoError& e) {
        return fail(BANDTEST_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(BANDTEST_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(BANDTEST_ERR_INTERNAL, "unknown error");
    }
}

bandtest_status require(bool ok, const char* what) {
    return ok ? BANDTEST_OK : fail(BANDTEST_ERR_INVALID_ARGUMENT, what);
}

bandtest::TiePolicy to_policy(bandtest_tie_policy ties) {
    return ties == BANDTEST_TIE_JITTER ? bandtest::TiePolicy::Jitter : bandtest::TiePolicy::Error;
}

}  // namespace

extern "C" {

const char* bandtest_strerror(bandtest_status status) {
    switch (status) {
        case BANDTEST_OK: return "ok";
        case BANDTEST_ERR_INVALID_ARGUMENT: return "invalid argument";
        case BANDTEST_ERR_EMPTY_INPUT: return "empty input";
        case BANDTEST_ERR_DUPLICATE_SAMPLE: return "duplicate sample value";
        case BANDTEST_ERR_INFEASIBLE_BAND: return "infeasible band";
        case BANDTEST_ERR_INFEASIBLE_MOMENT: return "infeasible moment constraint";
        case BANDTEST_ERR_NONMONOTONE_CDF: return "non-monotone CDF";
        case BANDTEST_ERR_ZERO_VARIANCE: return "zero variance";
        case BANDTEST_ERR_TOO_FEW_SAMPLES: return "too few samples";
        case BANDTEST_ERR_MAX_ITERATIONS: return "iteration limit exceeded";
        case BANDTEST_ERR_PARSE: return "parse error";
        case BANDTEST_ERR_UNKNOWN_KEY: return "unknown configuration key";
        case BANDTEST_ERR_RANGE: return "value out of range";
        case BANDTEST_ERR_IO: return "I/O error";
        case BANDTEST_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* bandtest_last_error(void) { return t_last_error.c_str(); }

/* ---- samples ---------------------------------------------------------- */

bandtest_status bandtest_sample_create(const double* values, size_t count,
                                       bandtest_tie_policy ties, bandtest_sample** out) {
    if (auto st = require(values && out, "values and out must be non-null")) return st;
    return guarded([&] {
        *out = new bandtest_sample{
            bandtest::canonicalize_sample(std::span(values, count), to_policy(ties))};
    });
}

bandtest_status bandtest_sample_load(const char* path, bandtest_tie_policy ties,
                                     bandtest_sample** out) {
    if (auto st = require(path && out, "path and out must be non-null")) return st;
    return guarded([&] {
        const std::vector<double> raw = bandtest::load_sample_file(path);
        *out = new bandtest_sample{bandtest::canonicalize_sample(raw, to_policy(ties))};
    });
}

size_t bandtest_sample_size(const bandtest_sample* sample) {
    return sample ? sample->value.size() : 0;
}

const double* bandtest_sample_values(const bandtest_sample* sample) {
    return sample ? sample->value.values().data() : nullptr;
}

void bandtest_sample_destroy(bandtest_sample* sample) { delete sample; }

/* ---- CDF bands -------------------------------------------------------- */

bandtest_status bandtest_band_create(const double* knots, const double* lower,
                                     const double* upper, size_t count, bandtest_band** out) {
    if (auto st = require(knots && lower && upper && out, "arrays and out must be non-null")) {
        return st;
    }
    return guarded([&] {
        std::vector<double> k(knots, knots + count);
        *out = new bandtest_band{bandtest::CdfBand(
            bandtest::StepCdf(k, std::vector<double>(lower, lower + count)),
            bandtest::StepCdf(k, std::vector<double>(upper, upper + count)))};
    });
}

bandtest_status bandtest_band_load(const char* path, bandtest_band** out) {
    if (auto st = require(path && out, "path and out must be non-null")) return st;
    return guarded([&] { *out = new bandtest_band{bandtest::load_band_csv(path)}; });
}

bandtest_status bandtest_band_save(const bandtest_band* band, const char* path) {
    if (auto st = require(band && path, "band and path must be non-null")) return st;
    return guarded([&] { bandtest::save_band_csv(band->value, path); });
}

bandtest_status bandtest_band_build(const double* values, size_t count, size_t group_size,
                                    bandtest_band** out, size_t* discarded) {
    if (auto st = require(values && out, "values and out must be non-null")) return st;
    return guarded([&] {
        auto built = bandtest::build_band(std::span(values, count), group_size);
        if (discarded) *discarded = built.discarded;
        *out = new bandtest_band{std::move(built.band)};
    });
}

size_t bandtest_band_knot_count(const bandtest_band* band) {
    if (!band) return 0;
    return bandtest::merged_knots(band->value.lower(), band->value.upper(), bandtest::StepCdf())
        .size();
}

bandtest_status bandtest_band_profile(const bandtest_band* band, double* knots, double* lower,
                                      double* upper) {
    if (auto st = require(band != nullptr, "band must be non-null")) return st;
    return guarded([&] {
        const auto merged = bandtest::merged_knots(band->value.lower(), band->value.upper(),
                                                   bandtest::StepCdf());
        for (size_t i = 0; i < merged.size(); ++i) {
            if (knots) knots[i] = merged[i];
            if (lower) lower[i] = bandtest::eval_right(band->value.lower(), merged[i]);
            if (upper) upper[i] = bandtest::eval_right(band->value.upper(), merged[i]);
        }
    });
}

void bandtest_band_destroy(bandtest_band* band) { delete band; }

/* ---- ELRDF detector --------------------------------------------------- */

bandtest_status bandtest_elrdf_solve(const bandtest_sample* sample, const bandtest_band* band,
                                     double tol, bandtest_elrdf_result* result, double* weights) {
    if (auto st = require(sample && band && result, "sample, band, result must be non-null")) {
        return st;
    }
    auto fill = [&](const bandtest::ElrdfResult& r) {
        result->statistic = r.statistic;
        result->kkt_residual = r.kkt_residual;
        result->iterations = static_cast<int32_t>(r.iterations);
        if (weights) {
            for (size_t i = 0; i < r.weights.w.size(); ++i) weights[i] = r.weights.w[i];
        }
    };
    try {
        fill(bandtest::solve_elrdf(sample->value, band->value, tol));
        t_last_error.clear();
        return BANDTEST_OK;
    } catch (const bandtest::MaxIterationsExceeded& e) {
        fill(e.best);
        return fail(BANDTEST_ERR_MAX_ITERATIONS, e.what());
    } catch (...) {
        return guarded([] { throw; });
    }
}

int bandtest_decide(double statistic, double eta) {
    return bandtest::elrdf_decide(statistic, eta) == bandtest::Decision::H1 ? 1 : 0;
}

bandtest_status bandtest_grid_oracle(const bandtest_sample* sample, const bandtest_band* band,
                                     double step, double* statistic) {
    if (auto st = require(sample && band && statistic, "sample, band, out must be non-null")) {
        return st;
    }
    return guarded(
        [&] { *statistic = bandtest::grid_oracle_solve(sample->value, band->value, step); });
}

/* ---- competitor tests -------------------------------------------------- */

bandtest_status bandtest_robust_ks(const bandtest_sample* sample, const bandtest_band* band,
                                   double* statistic) {
    if (auto st = require(sample && band && statistic, "sample, band, out must be non-null")) {
        return st;
    }
    return guarded([&] { *statistic = bandtest::robust_ks_statistic(sample->value, band->value); });
}

bandtest_status bandtest_ks_decide(double d_n, size_t n, double gamma, int* decision) {
    if (auto st = require(decision != nullptr, "decision must be non-null")) return st;
    return guarded([&] {
        *decision = bandtest::ks_decide(d_n, n, gamma) == bandtest::Decision::H1 ? 1 : 0;
    });
}

bandtest_status bandtest_robust_cvm(const bandtest_sample* sample, const bandtest_band* band,
                                    double* statistic) {
    if (auto st = require(sample && band && statistic, "sample, band, out must be non-null")) {
        return st;
    }
    return guarded(
        [&] { *statistic = bandtest::robust_cvm_statistic(sample->value, band->value); });
}

bandtest_status bandtest_elrm(const bandtest_sample* sample, bandtest_moment_fn g, void* ctx,
                              double lower, double upper, double* statistic) {
    if (auto st = require(sample && statistic, "sample and out must be non-null")) return st;
    return guarded([&] {
        bandtest::MomentConstraint constraint;
        if (g) {
            constraint.g = [g, ctx](double x) { return g(x, ctx); };
        } else {
            constraint.g = [](double x) { return x; };
        }
        constraint.lower = lower;
        constraint.upper = upper;
        *statistic = bandtest::elrm_statistic(sample->value, constraint);
    });
}

bandtest_status bandtest_ks_normality(const double* values, size_t count, double* statistic) {
    if (auto st = require(values && statistic, "values and out must be non-null")) return st;
    return guarded(
        [&] { *statistic = bandtest::ks_normality_statistic(std::span(values, count)); });
}

/* ---- degenerate -------------------------------------------------------- */

bandtest_status bandtest_null_cdf_parse(const char* spec, bandtest_null_cdf** out) {
    if (auto st = require(spec && out, "spec and out must be non-null")) return st;
    return guarded([&] { *out = new bandtest_null_cdf{bandtest::NullCdf::parse(spec)}; });
}

bandtest_status bandtest_null_cdf_eval(const bandtest_null_cdf* null_cdf, double x, double* out) {
    if (auto st = require(null_cdf && out, "null_cdf and out must be non-null")) return st;
    return guarded([&] { *out = null_cdf->value(x); });
}

void bandtest_null_cdf_destroy(bandtest_null_cdf* null_cdf) { delete null_cdf; }

bandtest_status bandtest_degenerate_weights(const bandtest_sample* sample,
                                            const bandtest_null_cdf* null_cdf, double* weights,
                                            double* sum_target) {
    if (auto st = require(sample && null_cdf && weights, "sample, null, weights must be non-null")) {
        return st;
    }
    return guarded([&] {
        const bandtest::WeightVector wv =
            bandtest::degenerate_weights(sample->value, null_cdf->value);
        for (size_t i = 0; i < wv.w.size(); ++i) weights[i] = wv.w[i];
        if (sum_target) *sum_target = wv.sum_target;
    });
}

bandtest_status bandtest_grouped_statistic(const double* values, size_t count,
                                           const bandtest_null_cdf* null_cdf, size_t groups,
                                           size_t group_size, uint64_t seed, int two_sided,
                                           double* statistic) {
    if (auto st = require(values && null_cdf && statistic, "values, null, out must be non-null")) {
        return st;
    }
    return guarded([&] {
        bandtest::Rng rng(seed, 0x9E3779B97F4A7C15ULL);
        const auto plan = bandtest::GroupingPlan::random(groups, group_size, rng);
        double stat = bandtest::grouped_statistic(std::span(values, count), null_cdf->value, plan);
        if (two_sided) {
            stat = std::abs(stat - std::log1p(1.0 / static_cast<double>(group_size)));
        }
        *statistic = stat;
    });
}

bandtest_status bandtest_spacing_cdf(size_t n, double w, double* out) {
    if (auto st = require(out != nullptr, "out must be non-null")) return st;
    return guarded([&] { *out = bandtest::spacing_cdf(n, w); });
}

/* ---- Monte-Carlo ROC harness ------------------------------------------ */

bandtest_status bandtest_roc_config_parse(const char* text, bandtest_roc_config** out) {
    if (auto st = require(text && out, "text and out must be non-null")) return st;
    return guarded([&] { *out = new bandtest_roc_config{bandtest::parse_roc_config(text)}; });
}

bandtest_status bandtest_roc_config_load(const char* path, bandtest_roc_config** out) {
    if (auto st = require(path && out, "path and out must be non-null")) return st;
    return guarded([&] { *out = new bandtest_roc_config{bandtest::load_roc_config(path)}; });
}

void bandtest_roc_config_destroy(bandtest_roc_config* config) { delete config; }

bandtest_status bandtest_roc_run(const bandtest_roc_config* config, unsigned threads,
                                 bandtest_roc** out) {
    if (auto st = require(config && out, "config and out must be non-null")) return st;
    return guarded(
        [&] { *out = new bandtest_roc{bandtest::run_roc_experiment(config->value, threads)}; });
}

size_t bandtest_roc_point_count(const bandtest_roc* roc) {
    return roc ? roc->value.curve.points.size() : 0;
}

bandtest_status bandtest_roc_points(const bandtest_roc* roc, double* thresholds, double* pf,
                                    double* pd) {
    if (auto st = require(roc != nullptr, "roc must be non-null")) return st;
    const auto& pts = roc->value.curve.points;
    for (size_t i = 0; i < pts.size(); ++i) {
        if (thresholds) thresholds[i] = pts[i].threshold;
        if (pf) pf[i] = pts[i].pf;
        if (pd) pd[i] = pts[i].pd;
    }
    t_last_error.clear();
    return BANDTEST_OK;
}

double bandtest_roc_auc(const bandtest_roc* roc) { return roc ? roc->value.curve.auc : 0.0; }

int bandtest_roc_flipped(const bandtest_roc* roc) {
    return roc && roc->value.curve.flipped ? 1 : 0;
}

bandtest_status bandtest_roc_write_csv(const bandtest_roc* roc, const char* path) {
    if (auto st = require(roc && path, "roc and path must be non-null")) return st;
    return guarded([&] { bandtest::write_roc_csv(roc->value.curve, path); });
}

bandtest_status bandtest_roc_write_summary(const bandtest_roc* roc, const char* path) {
    if (auto st = require(roc && path, "roc and path must be non-null")) return st;
    return guarded([&] { bandtest::write_summary_csv(roc->value, path); });
}

void bandtest_roc_destroy(bandtest_roc* roc) { delete roc; }

bandtest_status bandtest_normality_study_run(const bandtest_roc_config* config,
                                             const size_t* sizes, size_t size_count,
                                             size_t replications, unsigned threads,
                                             bandtest_study** out) {
    if (auto st = require(config && sizes && out, "config, sizes, out must be non-null")) return st;
    return guarded([&] {
        *out = new bandtest_study{bandtest::normality_study(config->value.noise,
                                                            std::span(sizes, size_count),
                                                            replications, config->value.seed,
                                                            threads)};
    });
}

size_t bandtest_study_size_count(const bandtest_study* study) {
    return study ? study->value.sizes.size() : 0;
}

bandtest_status bandtest_study_column(const bandtest_study* study, size_t size_index,
                                      int nonstationary, const double** values, size_t* count) {
    if (auto st = require(study && values && count, "study, values, count must be non-null")) {
        return st;
    }
    if (size_index >= study->value.sizes.size()) {
        return fail(BANDTEST_ERR_INVALID_ARGUMENT, "size_index out of range");
    }
    const auto& col = nonstationary ? study->value.nonstationary[size_index]
                                    : study->value.gaussian[size_index];
    *values = col.data();
    *count = col.size();
    t_last_error.clear();
    return BANDTEST_OK;
}

bandtest_status bandtest_normality_study_write(const bandtest_study* study, const char* prefix) {
    if (auto st = require(study && prefix, "study and prefix must be non-null")) return st;
    return guarded([&] { bandtest::write_normality_study_csv(study->value, prefix); });
}

void bandtest_study_destroy(bandtest_study* study) { delete study; }

}  // extern "C"
