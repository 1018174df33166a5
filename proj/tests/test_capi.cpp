// Exercises the shared-library surface exactly as an external C consumer would.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "bandtest.h"

namespace {

bandtest_band* make_band(const std::vector<double>& knots, const std::vector<double>& lower,
                         const std::vector<double>& upper) {
    bandtest_band* band = nullptr;
    REQUIRE(bandtest_band_create(knots.data(), lower.data(), upper.data(), knots.size(), &band) ==
            BANDTEST_OK);
    return band;
}

}  // namespace

TEST_CASE("sample creation, ordering, and tie policies") {
    const double raw[] = {3.0, 1.0, 2.0};
    bandtest_sample* s = nullptr;
    REQUIRE(bandtest_sample_create(raw, 3, BANDTEST_TIE_ERROR, &s) == BANDTEST_OK);
    REQUIRE(bandtest_sample_size(s) == 3);
    CHECK(bandtest_sample_values(s)[0] == 1.0);
    CHECK(bandtest_sample_values(s)[2] == 3.0);
    bandtest_sample_destroy(s);

    const double dup[] = {1.0, 1.0};
    bandtest_sample* d = nullptr;
    CHECK(bandtest_sample_create(dup, 2, BANDTEST_TIE_ERROR, &d) ==
          BANDTEST_ERR_DUPLICATE_SAMPLE);
    CHECK(std::strlen(bandtest_last_error()) > 0);
    REQUIRE(bandtest_sample_create(dup, 2, BANDTEST_TIE_JITTER, &d) == BANDTEST_OK);
    CHECK(bandtest_sample_values(d)[0] < bandtest_sample_values(d)[1]);
    bandtest_sample_destroy(d);

    CHECK(bandtest_sample_create(nullptr, 0, BANDTEST_TIE_ERROR, &d) ==
          BANDTEST_ERR_INVALID_ARGUMENT);
    CHECK(bandtest_sample_create(raw, 0, BANDTEST_TIE_ERROR, &d) == BANDTEST_ERR_EMPTY_INPUT);
}

TEST_CASE("elrdf solve through the C surface") {
    const double raw[] = {0.0, 1.0};
    bandtest_sample* s = nullptr;
    REQUIRE(bandtest_sample_create(raw, 2, BANDTEST_TIE_ERROR, &s) == BANDTEST_OK);
    bandtest_band* band = make_band({0.0, 1.0}, {0.8, 0.8}, {0.9, 1.0});

    bandtest_elrdf_result result{};
    double weights[2] = {0, 0};
    REQUIRE(bandtest_elrdf_solve(s, band, 1e-8, &result, weights) == BANDTEST_OK);
    CHECK(result.statistic == doctest::Approx(0.223144).epsilon(1e-6));
    CHECK(weights[0] == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(result.kkt_residual <= 1e-8);
    CHECK(bandtest_decide(result.statistic, 0.1) == 1);
    CHECK(bandtest_decide(result.statistic, 0.5) == 0);

    double oracle = 0.0;
    REQUIRE(bandtest_grid_oracle(s, band, 1e-3, &oracle) == BANDTEST_OK);
    CHECK(std::abs(oracle - result.statistic) <= 5e-3);

    bandtest_band_destroy(band);
    bandtest_sample_destroy(s);
}

TEST_CASE("infeasible bands surface as a dedicated status") {
    const double raw[] = {0.0, 1.0, 2.0};
    bandtest_sample* s = nullptr;
    REQUIRE(bandtest_sample_create(raw, 3, BANDTEST_TIE_ERROR, &s) == BANDTEST_OK);
    bandtest_band* crossed = make_band({0.0, 1.0}, {0.0, 0.9}, {0.8, 0.8});
    bandtest_elrdf_result result{};
    CHECK(bandtest_elrdf_solve(s, crossed, 1e-8, &result, nullptr) ==
          BANDTEST_ERR_INFEASIBLE_BAND);
    double stat = 0.0;
    CHECK(bandtest_robust_cvm(s, crossed, &stat) == BANDTEST_ERR_INFEASIBLE_BAND);
    bandtest_band_destroy(crossed);
    bandtest_sample_destroy(s);
}

TEST_CASE("band build, profile, save, and load") {
    std::vector<double> raw;
    for (int i = 0; i < 250; ++i) raw.push_back(std::sin(i * 12.9898) * 43758.5453 - std::floor(std::sin(i * 12.9898) * 43758.5453));
    bandtest_band* band = nullptr;
    size_t discarded = 99;
    REQUIRE(bandtest_band_build(raw.data(), raw.size(), 100, &band, &discarded) == BANDTEST_OK);
    CHECK(discarded == 50);

    const size_t count = bandtest_band_knot_count(band);
    REQUIRE(count > 0);
    std::vector<double> knots(count), lower(count), upper(count);
    REQUIRE(bandtest_band_profile(band, knots.data(), lower.data(), upper.data()) == BANDTEST_OK);
    for (size_t i = 0; i < count; ++i) CHECK(lower[i] <= upper[i]);

    REQUIRE(bandtest_band_save(band, "capi_band_test.csv") == BANDTEST_OK);
    bandtest_band* loaded = nullptr;
    REQUIRE(bandtest_band_load("capi_band_test.csv", &loaded) == BANDTEST_OK);
    CHECK(bandtest_band_knot_count(loaded) == count);
    bandtest_band_destroy(loaded);
    bandtest_band_destroy(band);
    std::remove("capi_band_test.csv");

    CHECK(bandtest_band_load("missing_band.csv", &loaded) == BANDTEST_ERR_IO);
    double tiny[] = {1.0, 2.0, 3.0};
    CHECK(bandtest_band_build(tiny, 3, 2, &band, nullptr) == BANDTEST_ERR_TOO_FEW_SAMPLES);
}

TEST_CASE("competitor statistics through the C surface") {
    const double raw[] = {0.3};
    bandtest_sample* s = nullptr;
    REQUIRE(bandtest_sample_create(raw, 1, BANDTEST_TIE_ERROR, &s) == BANDTEST_OK);
    bandtest_band* pinned = make_band({0.0, 0.3, 1.0}, {0.0, 0.3, 1.0}, {0.0, 0.3, 1.0});
    double stat = 0.0;
    REQUIRE(bandtest_robust_ks(s, pinned, &stat) == BANDTEST_OK);
    CHECK(stat == doctest::Approx(0.7).epsilon(1e-12));
    int decision = -1;
    REQUIRE(bandtest_ks_decide(stat, 1, 0.5, &decision) == BANDTEST_OK);
    CHECK(decision == 1);
    CHECK(bandtest_ks_decide(stat, 0, 0.5, &decision) == BANDTEST_ERR_RANGE);
    bandtest_band_destroy(pinned);
    bandtest_sample_destroy(s);

    const double two[] = {0.0, 1.0};
    bandtest_sample* s2 = nullptr;
    REQUIRE(bandtest_sample_create(two, 2, BANDTEST_TIE_ERROR, &s2) == BANDTEST_OK);
    REQUIRE(bandtest_elrm(s2, nullptr, nullptr, 0.7, 0.7, &stat) == BANDTEST_OK);
    CHECK(stat == doctest::Approx(0.087177).epsilon(1e-6));
    CHECK(bandtest_elrm(s2, nullptr, nullptr, 5.0, 6.0, &stat) ==
          BANDTEST_ERR_INFEASIBLE_MOMENT);

    auto square = [](double x, void*) { return x * x; };
    REQUIRE(bandtest_elrm(s2, square, nullptr, 0.0, 1.0, &stat) == BANDTEST_OK);
    CHECK(stat == 0.0);  // mean of squares is 0.5, inside [0, 1]
    bandtest_sample_destroy(s2);

    const double pair[] = {-1.0, 1.0};
    REQUIRE(bandtest_ks_normality(pair, 2, &stat) == BANDTEST_OK);
    CHECK(stat == doctest::Approx(0.341345).epsilon(1e-6));
    const double flat[] = {2.0, 2.0};
    CHECK(bandtest_ks_normality(flat, 2, &stat) == BANDTEST_ERR_ZERO_VARIANCE);
}

TEST_CASE("degenerate helpers through the C surface") {
    bandtest_null_cdf* null = nullptr;
    REQUIRE(bandtest_null_cdf_parse("uniform:0:1", &null) == BANDTEST_OK);
    double p = 0.0;
    REQUIRE(bandtest_null_cdf_eval(null, 0.25, &p) == BANDTEST_OK);
    CHECK(p == 0.25);

    const double raw[] = {0.2, 0.5, 0.9};
    bandtest_sample* s = nullptr;
    REQUIRE(bandtest_sample_create(raw, 3, BANDTEST_TIE_ERROR, &s) == BANDTEST_OK);
    double weights[3];
    double sum = 0.0;
    REQUIRE(bandtest_degenerate_weights(s, null, weights, &sum) == BANDTEST_OK);
    CHECK(weights[1] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(sum == doctest::Approx(0.9).epsilon(1e-12));
    bandtest_sample_destroy(s);

    const double flat[] = {0.1, 0.2, 0.3, 0.6, 0.7, 0.8};
    double stat = 0.0;
    REQUIRE(bandtest_grouped_statistic(flat, 6, null, 2, 3, 7, 0, &stat) == BANDTEST_OK);
    CHECK(stat >= 0.0);
    double folded = 0.0;
    REQUIRE(bandtest_grouped_statistic(flat, 6, null, 2, 3, 7, 1, &folded) == BANDTEST_OK);
    CHECK(folded == doctest::Approx(std::abs(stat - std::log1p(1.0 / 3.0))).epsilon(1e-12));
    CHECK(bandtest_grouped_statistic(flat, 6, null, 4, 2, 7, 0, &stat) == BANDTEST_ERR_RANGE);
    bandtest_null_cdf_destroy(null);

    CHECK(bandtest_null_cdf_parse("weibull:1:1", &null) == BANDTEST_ERR_PARSE);

    double cdf = 0.0;
    REQUIRE(bandtest_spacing_cdf(4, 0.5, &cdf) == BANDTEST_OK);
    CHECK(cdf == doctest::Approx(0.9375).epsilon(1e-15));
    CHECK(bandtest_spacing_cdf(0, 0.5, &cdf) == BANDTEST_ERR_RANGE);
}

TEST_CASE("roc config and experiment through the C surface") {
    bandtest_roc_config* cfg = nullptr;
    CHECK(bandtest_roc_config_parse("nope=1\n", &cfg) == BANDTEST_ERR_UNKNOWN_KEY);
    CHECK(std::string(bandtest_last_error()).find("line 1") != std::string::npos);
    CHECK(bandtest_roc_config_parse("trials=-5\n", &cfg) == BANDTEST_ERR_RANGE);

    REQUIRE(bandtest_roc_config_parse(
                "n=10\ntrials=40\nseed=3\nthresholds.count=11\nband.samples=2000\n",
                &cfg) == BANDTEST_OK);
    bandtest_roc* roc = nullptr;
    REQUIRE(bandtest_roc_run(cfg, 2, &roc) == BANDTEST_OK);
    const size_t count = bandtest_roc_point_count(roc);
    REQUIRE(count >= 2);
    std::vector<double> ts(count), pf(count), pd(count);
    REQUIRE(bandtest_roc_points(roc, ts.data(), pf.data(), pd.data()) == BANDTEST_OK);
    CHECK(bandtest_roc_auc(roc) >= 0.5);
    REQUIRE(bandtest_roc_write_csv(roc, "capi_roc_test.csv") == BANDTEST_OK);
    REQUIRE(bandtest_roc_write_summary(roc, "capi_summary_test.csv") == BANDTEST_OK);
    std::ifstream check("capi_roc_test.csv");
    std::string header;
    std::getline(check, header);
    CHECK(header == "threshold,pf,pd");
    std::remove("capi_roc_test.csv");
    std::remove("capi_summary_test.csv");
    bandtest_roc_destroy(roc);

    const size_t sizes[] = {10, 20};
    bandtest_study* study = nullptr;
    REQUIRE(bandtest_normality_study_run(cfg, sizes, 2, 50, 2, &study) == BANDTEST_OK);
    CHECK(bandtest_study_size_count(study) == 2);
    const double* col = nullptr;
    size_t n = 0;
    REQUIRE(bandtest_study_column(study, 1, 1, &col, &n) == BANDTEST_OK);
    CHECK(n == 50);
    CHECK(bandtest_study_column(study, 5, 0, &col, &n) == BANDTEST_ERR_INVALID_ARGUMENT);
    bandtest_study_destroy(study);
    bandtest_roc_config_destroy(cfg);
}

TEST_CASE("status strings") {
    CHECK(std::string(bandtest_strerror(BANDTEST_OK)) == "ok");
    CHECK(std::string(bandtest_strerror(BANDTEST_ERR_INFEASIBLE_BAND)) == "infeasible band");
    CHECK(bandtest_strerror(static_cast<bandtest_status>(999)) != nullptr);
}
