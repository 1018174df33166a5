#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "step_cdf.hpp"

namespace bandtest {

struct BandBuildResult {
    CdfBand band;
    std::size_t discarded = 0;  // trailing samples not filling a whole group
};

// Chop the stream into consecutive groups of `group_size`, compute each
// group's ECDF, and take the pointwise min/max envelope as the band edges.
// Requires at least two whole groups.
BandBuildResult build_band(std::span<const double> raw, std::size_t group_size);

// (knot, upper - lower) on the merged knot grid.
std::vector<std::pair<double, double>> band_width_profile(const CdfBand& band);

}  // namespace bandtest
