#pragma once

#include <string>
#include <vector>

#include "step_cdf.hpp"

namespace bandtest {

// Shortest round-trip decimal form; infinities print as "inf"/"-inf".
std::string format_double(double v);

// One decimal float per line; '#' starts a comment; blank lines ignored.
std::vector<double> load_sample_file(const std::string& path);

// CSV with header "knot,lower,upper"; knots strictly increasing, both value
// columns nondecreasing in [0, 1].
CdfBand load_band_csv(const std::string& path);
void save_band_csv(const CdfBand& band, const std::string& path);

}  // namespace bandtest
