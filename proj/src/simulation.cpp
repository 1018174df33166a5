#include "simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "parallel.hpp"

namespace bandtest {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void NoiseModel::validate() const {
    switch (kind) {
        case Kind::Gaussian:
            if (!(sd > 0.0)) throw RangeError("noise sd must be positive");
            break;
        case Kind::Mixture: {
            if (mixture.empty()) throw RangeError("mixture needs at least one component");
            double total = 0.0;
            for (const auto& c : mixture) {
                if (!(c.weight > 0.0)) throw RangeError("mixture weights must be positive");
                if (!(c.sd > 0.0)) throw RangeError("mixture sds must be positive");
                total += c.weight;
            }
            if (std::abs(total - 1.0) > 1e-9) throw RangeError("mixture weights must sum to 1");
            break;
        }
        case Kind::BlockNonstationary:
            if (block_len < 1) throw RangeError("block length must be >= 1");
            if (!(sd_min > 0.0) || sd_min > sd_max) {
                throw RangeError("block sd law needs 0 < sd_min <= sd_max");
            }
            break;
    }
}

void ChannelModel::validate() const {
    if (fading == Fading::Fast && !(low < high)) {
        throw RangeError("fast fading needs low < high");
    }
}

std::vector<double> gen_noise(const NoiseModel& model, std::size_t n, std::uint64_t stream) {
    if (n < 1) throw RangeError("noise length must be >= 1");
    model.validate();
    Rng rng(model.seed, stream);
    std::vector<double> out(n);
    switch (model.kind) {
        case NoiseModel::Kind::Gaussian:
            for (auto& x : out) x = rng.gaussian(model.mean, model.sd);
            break;
        case NoiseModel::Kind::Mixture:
            for (auto& x : out) {
                double u = rng.uniform01();
                const MixtureComponent* pick = &model.mixture.back();
                for (const auto& c : model.mixture) {
                    if (u < c.weight) {
                        pick = &c;
                        break;
                    }
                    u -= c.weight;
                }
                x = rng.gaussian(pick->mean, pick->sd);
            }
            break;
        case NoiseModel::Kind::BlockNonstationary:
            for (std::size_t i = 0; i < n; i += model.block_len) {
                const double sd = rng.uniform(model.sd_min, model.sd_max);
                const std::size_t end = std::min(n, i + model.block_len);
                for (std::size_t j = i; j < end; ++j) out[j] = rng.gaussian(0.0, sd);
            }
            break;
    }
    return out;
}

std::vector<double> gen_observation(const ChannelModel& channel, const NoiseModel& noise,
                                    std::size_t n, Hypothesis hypothesis, std::uint64_t stream) {
    channel.validate();
    std::vector<double> out = gen_noise(noise, n, stream);
    if (hypothesis == Hypothesis::H0) return out;
    if (channel.fading == ChannelModel::Fading::Slow) {
        for (auto& y : out) y += channel.gain;
    } else {
        // Channel gains draw from their own stream so the noise sequence is
        // identical across hypotheses for a given trial.
        Rng gains(noise.seed, stream ^ 0x5851F42D4C957F2DULL);
        for (auto& y : out) y += gains.uniform(channel.low, channel.high);
    }
    return out;
}

std::vector<double> auto_thresholds(std::span<const double> h0_stats,
                                    std::span<const double> h1_stats, std::size_t count) {
    if (h0_stats.empty() || h1_stats.empty()) throw EmptyInput("empty statistic pool");
    if (count < 2) throw RangeError("threshold count must be >= 2");

    std::vector<double> pooled;
    pooled.reserve(h0_stats.size() + h1_stats.size());
    for (double v : h0_stats) {
        if (std::isfinite(v)) pooled.push_back(v);
    }
    for (double v : h1_stats) {
        if (std::isfinite(v)) pooled.push_back(v);
    }

    std::vector<double> thresholds;
    if (pooled.empty()) {
        // Everything is +inf; a single finite threshold separates nothing.
        thresholds = {0.0, 1.0};
    } else {
        std::sort(pooled.begin(), pooled.end());
        thresholds.reserve(count + 4);
        for (std::size_t j = 0; j < count; ++j) {
            const double q = static_cast<double>(j) / static_cast<double>(count - 1);
            const std::size_t at = std::min(
                pooled.size() - 1,
                static_cast<std::size_t>(q * static_cast<double>(pooled.size() - 1) + 0.5));
            thresholds.push_back(pooled[at]);
        }
        // Each hypothesis's largest finite statistic pins the corner where its
        // own exceedance rate first hits zero (perfect separation lands on it).
        for (auto stats : {h0_stats, h1_stats}) {
            double largest = -std::numeric_limits<double>::infinity();
            for (double v : stats) {
                if (std::isfinite(v)) largest = std::max(largest, v);
            }
            if (std::isfinite(largest)) thresholds.push_back(largest);
        }
        const double lo = pooled.front();
        const double hi = pooled.back();
        const double pad = std::max(1.0, (hi - lo)) * 1e-3;
        thresholds.push_back(lo - pad);  // everything (finite or not) exceeds this
        thresholds.push_back(hi + pad);  // only +inf statistics exceed this
        std::sort(thresholds.begin(), thresholds.end());
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    }
    return thresholds;
}

RocCurve make_roc_curve(std::span<const double> h0_stats, std::span<const double> h1_stats,
                        std::span<const double> thresholds) {
    if (thresholds.empty()) throw EmptyInput("no thresholds");
    RocCurve curve;
    curve.points.reserve(thresholds.size());
    const double n0 = static_cast<double>(h0_stats.size());
    const double n1 = static_cast<double>(h1_stats.size());
    for (double t : thresholds) {
        std::size_t f = 0, d = 0;
        for (double v : h0_stats) f += v > t;
        for (double v : h1_stats) d += v > t;
        curve.points.push_back({t, static_cast<double>(f) / n0, static_cast<double>(d) / n1});
    }

    auto trapezoid = [](std::vector<RocPoint> pts) {
        std::sort(pts.begin(), pts.end(), [](const RocPoint& a, const RocPoint& b) {
            return a.pf < b.pf || (a.pf == b.pf && a.pd < b.pd);
        });
        double area = 0.0, px = 0.0, py = 0.0;
        for (const auto& p : pts) {
            area += (p.pf - px) * 0.5 * (p.pd + py);
            px = p.pf;
            py = p.pd;
        }
        area += (1.0 - px) * 0.5 * (1.0 + py);
        return area;
    };

    curve.auc = trapezoid(curve.points);
    if (curve.auc < 0.5) {
        for (auto& p : curve.points) std::swap(p.pf, p.pd);
        curve.flipped = true;
        curve.auc = trapezoid(curve.points);
    }
    return curve;
}

RocCurve sweep_roc(const StatisticFn& statistic, const SampleGenerator& h0_gen,
                   const SampleGenerator& h1_gen, std::size_t trials,
                   std::span<const double> thresholds, std::size_t auto_count, unsigned threads) {
    if (trials < 1) throw RangeError("trials must be >= 1");
    std::vector<double> h0(trials), h1(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
        const auto trial = static_cast<std::uint64_t>(t);
        h0[t] = statistic(h0_gen(trial), trial_stream(0, trial));
        h1[t] = statistic(h1_gen(trial), trial_stream(1, trial));
    });
    if (!thresholds.empty()) return make_roc_curve(h0, h1, thresholds);
    const std::vector<double> derived = auto_thresholds(h0, h1, auto_count);
    return make_roc_curve(h0, h1, derived);
}

}  // namespace bandtest
