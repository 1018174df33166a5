#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rng.hpp"

namespace bandtest {

enum class Hypothesis { H0 = 0, H1 = 1 };

struct MixtureComponent {
    double weight = 1.0;
    double mean = 0.0;
    double sd = 1.0;
};

// Synthetic noise source. BlockNonstationary draws a fresh standard deviation
// per block, the stand-in for hardware noise whose Gaussian regime drifts.
struct NoiseModel {
    enum class Kind { Gaussian, Mixture, BlockNonstationary };
    Kind kind = Kind::BlockNonstationary;
    double mean = 0.0;  // Gaussian only
    double sd = 1.0;    // Gaussian only
    std::vector<MixtureComponent> mixture;
    std::size_t block_len = 100;
    double sd_min = 0.5;
    double sd_max = 2.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Unit-amplitude signal through constant (slow) or i.i.d. uniform (fast) gain.
struct ChannelModel {
    enum class Fading { Slow, Fast };
    Fading fading = Fading::Slow;
    double gain = 3.0;  // slow
    double low = -10.0;  // fast
    double high = 10.0;

    void validate() const;
};

std::vector<double> gen_noise(const NoiseModel& model, std::size_t n, std::uint64_t stream);

std::vector<double> gen_observation(const ChannelModel& channel, const NoiseModel& noise,
                                    std::size_t n, Hypothesis hypothesis, std::uint64_t stream);

struct RocPoint {
    double threshold = 0.0;
    double pf = 0.0;
    double pd = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
    bool flipped = false;  // raw AUC fell below 0.5 and the roles were swapped
};

// Quantile-spaced thresholds over the pooled finite statistics, plus sentinels
// below the minimum and above the maximum; +inf statistics always stay above
// the top sentinel.
std::vector<double> auto_thresholds(std::span<const double> h0_stats,
                                    std::span<const double> h1_stats, std::size_t count);

// Exceedance fractions per threshold plus trapezoidal AUC; swaps roles when
// the raw AUC lands below the chance line.
RocCurve make_roc_curve(std::span<const double> h0_stats, std::span<const double> h1_stats,
                        std::span<const double> thresholds);

using SampleGenerator = std::function<std::vector<double>(std::uint64_t trial)>;
// Receives the trial's RNG stream id so randomized statistics (e.g. grouped
// spacings) stay reproducible per trial.
using StatisticFn = std::function<double(const std::vector<double>&, std::uint64_t stream)>;

// Runs `trials` independent statistics per hypothesis (trial t under
// hypothesis h uses RNG stream h*2^32 + t) and sweeps the thresholds.
// Pass an empty threshold span to derive them from the pooled statistics.
RocCurve sweep_roc(const StatisticFn& statistic, const SampleGenerator& h0_gen,
                   const SampleGenerator& h1_gen, std::size_t trials,
                   std::span<const double> thresholds, std::size_t auto_count = 101,
                   unsigned threads = 0);

}  // namespace bandtest
