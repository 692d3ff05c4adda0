#pragma once

#include <string>
#include <vector>

#include "hesitator/errors.hpp"

namespace hesitator {

struct WilcoxonResult {
    double w_plus = 0.0;      // sum of positive ranks (average ranks for ties)
    int n_nonzero = 0;        // pairs remaining after dropping zero differences
    double p_two_sided = 1.0;
    std::string method;       // "exact" or "normal"
};

// Paired signed-rank test on differences x_i - y_i. Zero differences are
// discarded; tied magnitudes receive average ranks. The null distribution is
// exact (dynamic program over sign assignments) for up to 25 nonzero pairs,
// and a tie-corrected normal approximation with continuity correction above
// that. Throws ConfigError when every difference is zero.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y);
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& differences);

double normal_cdf(double z);

} // namespace hesitator
