#include "band_builder.hpp"

#include <algorithm>
#include <cmath>

namespace bandtest {

BandBuildResult build_band(std::span<const double> raw, std::size_t group_size) {
    if (group_size < 1) throw RangeError("group size must be positive");
    const std::size_t groups = raw.size() / group_size;
    if (groups < 2) {
        throw TooFewSamples("band construction needs at least two whole groups (" +
                            std::to_string(raw.size()) + " samples, group size " +
                            std::to_string(group_size) + ")");
    }
    const std::size_t discarded = raw.size() - groups * group_size;

    // Column j of the sorted groups holds the j-th order statistic of each
    // group. The min-envelope of the group ECDFs jumps to level (j+1)/m at the
    // largest j-th order statistic, the max-envelope at the smallest one.
    std::vector<std::vector<double>> sorted_groups(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        auto& dst = sorted_groups[g];
        dst.assign(raw.begin() + static_cast<std::ptrdiff_t>(g * group_size),
                   raw.begin() + static_cast<std::ptrdiff_t>((g + 1) * group_size));
        std::sort(dst.begin(), dst.end());
    }

    std::vector<double> lower_knots(group_size), upper_knots(group_size), levels(group_size);
    for (std::size_t j = 0; j < group_size; ++j) {
        double col_min = sorted_groups[0][j];
        double col_max = col_min;
        for (std::size_t g = 1; g < groups; ++g) {
            col_min = std::min(col_min, sorted_groups[g][j]);
            col_max = std::max(col_max, sorted_groups[g][j]);
        }
        upper_knots[j] = col_min;
        lower_knots[j] = col_max;
        levels[j] = static_cast<double>(j + 1) / static_cast<double>(group_size);
    }

    // Ties across columns collapse into taller jumps.
    auto dedupe = [](std::vector<double> knots, std::vector<double> lv) {
        std::vector<double> k, l;
        for (std::size_t j = 0; j < knots.size(); ++j) {
            if (!k.empty() && knots[j] == k.back()) {
                l.back() = lv[j];
            } else {
                k.push_back(knots[j]);
                l.push_back(lv[j]);
            }
        }
        return StepCdf(std::move(k), std::move(l));
    };

    BandBuildResult result{CdfBand(dedupe(std::move(lower_knots), levels),
                                   dedupe(std::move(upper_knots), levels)),
                           discarded};
    if (!band_is_valid(result.band, 0.0)) {
        throw Error("band builder produced crossed edges");  // unreachable by construction
    }
    return result;
}

std::vector<std::pair<double, double>> band_width_profile(const CdfBand& band) {
    std::vector<std::pair<double, double>> out;
    for (double x : merged_knots(band.lower(), band.upper(), StepCdf())) {
        out.emplace_back(x, eval_right(band.upper(), x) - eval_right(band.lower(), x));
    }
    return out;
}

}  // namespace bandtest
