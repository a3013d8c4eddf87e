#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drlcox/data.hpp"

namespace drlcox {

// Replaces `intensity` randomly chosen covariate columns with fresh
// standard-normal draws, simulating a covariate distribution shift. The
// dataset must be standardized so the replacement distribution matches the
// clean columns' scale. Which split gets shifted is the caller's decision
// (the benchmark reads it from ShiftSpec::target).
enum class ShiftTarget { train, test, both };

ShiftTarget parse_shift_target(const std::string& s);
std::string shift_target_name(ShiftTarget t);

struct ShiftSpec {
    int intensity = 1;  // number of columns replaced, in [1, d]
    std::uint64_t seed = 0;
    ShiftTarget target = ShiftTarget::train;
};

SurvivalDataset apply_shift(const SurvivalDataset& ds, const ShiftSpec& spec);

// Adds Gaussian noise of standard deviation `severity` (the data is
// standardized, so severity is in column-std units) to a random
// ceil(feature_fraction * d) columns of each of ceil(ratio * N) randomly
// chosen rows. Severity scales shared base draws, so severity 5 perturbs
// exactly 5x as hard as severity 1 under the same seed.
struct OutlierSpec {
    double ratio = 0.1;           // fraction of rows corrupted, in (0, 1)
    int severity = 1;             // noise std multiplier, in {1..5}
    double feature_fraction = 0.3;  // fraction of columns per row, in (0, 1]
    std::uint64_t seed = 0;
};

struct OutlierResult {
    SurvivalDataset data;
    std::vector<int> mask;  // canonical row flags, 1 = corrupted
};

OutlierResult inject_outliers(const SurvivalDataset& ds, const OutlierSpec& spec);

}  // namespace drlcox
