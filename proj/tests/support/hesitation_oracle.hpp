#pragma once

// Independent scalar paths for the overload calibration and the probability
// map, used to cross-check the implementation.

#include <cmath>

#include "hesitator/hesitation.hpp"

namespace oracle {

inline double interp(double level, double lo, double hi) {
    return lo * (1.0 - (level - 1.0) / 2.0) + hi * ((level - 1.0) / 2.0);
}

inline double total(const hesitator::OverloadVector& v) {
    const double beta[4] = {0.41, 0.55, 0.37, 0.32};
    const double lo[4] = {-0.18, -1.65, -0.59, -1.34};
    const double hi[4] = {1.22, 0.48, 0.81, 1.21};
    const double level[4] = {v.assortment, v.complexity, v.difficulty, v.uncertainty};
    double d = 0.0;
    for (int k = 0; k < 4; ++k) d += beta[k] * interp(level[k], lo[k], hi[k]);
    return d;
}

// sin^2(x) = (1 - cos(2x)) / 2
inline double probability(double d, double p_base) {
    return (1.0 - std::cos(2.0 * std::asin(std::sqrt(p_base)) - d)) / 2.0;
}

} // namespace oracle
