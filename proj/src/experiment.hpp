#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simulation.hpp"
#include "step_cdf.hpp"

namespace bandtest {

enum class TestKind { Elrdf, RobustKs, RobustCvm, Elrm, Degenerate };

std::string test_kind_name(TestKind kind);

// Flat key=value experiment description. Every key has a default, so an empty
// config is valid; unknown keys are rejected.
struct RocExperimentConfig {
    TestKind test = TestKind::Elrdf;
    std::size_t n = 10;
    std::size_t trials = 2000;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    std::size_t threshold_count = 101;
    NoiseModel noise;
    ChannelModel channel;
    std::string band_file;               // empty: build the band from noise
    std::size_t band_group_size = 100;
    std::size_t band_samples = 100000;
    std::size_t degen_groups = 1;
    std::size_t degen_group_size = 10;
    bool degen_two_sided = false;
    std::size_t degen_null_samples = 100000;
    double elrm_lower = 0.0;
    double elrm_upper = 0.0;
};

RocExperimentConfig parse_roc_config(const std::string& text);
RocExperimentConfig load_roc_config(const std::string& path);

struct RocExperimentResult {
    RocCurve curve;
    TestKind test = TestKind::Elrdf;
    std::uint64_t seed = 0;
};

// Full Monte-Carlo ROC run: band/null construction on reserved streams, one
// statistic per (hypothesis, trial) stream, auto-derived thresholds. A pure
// function of (config, seed); the thread budget only changes scheduling.
RocExperimentResult run_roc_experiment(const RocExperimentConfig& cfg, unsigned threads = 0);

void write_roc_csv(const RocCurve& curve, const std::string& path);
void write_summary_csv(const RocExperimentResult& result, const std::string& path);

struct NormalityStudyResult {
    std::vector<std::size_t> sizes;
    // Sorted normality statistics per size, under stationary Gaussian noise
    // and under the configured nonstationary model.
    std::vector<std::vector<double>> gaussian;
    std::vector<std::vector<double>> nonstationary;
};

NormalityStudyResult normality_study(const NoiseModel& nonstationary,
                                     std::span<const std::size_t> sizes, std::size_t replications,
                                     std::uint64_t seed, unsigned threads = 0);

// One file per size: "<prefix>_<size>.csv" with columns gaussian,nonstationary.
void write_normality_study_csv(const NormalityStudyResult& result, const std::string& prefix);

}  // namespace bandtest
