#include "hesitator/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hesitator {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw ConfigError("wilcoxon: paired samples must have equal length");
    std::vector<double> d(x.size());
    for (size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
    return wilcoxon_signed_rank(d);
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& differences) {
    std::vector<double> d;
    for (double v : differences)
        if (v != 0.0) d.push_back(v);
    if (d.empty()) throw ConfigError("wilcoxon: every difference is zero (degenerate sample)");

    const size_t n = d.size();

    // rank |d| with average ranks for ties
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return std::abs(d[a]) < std::abs(d[b]); });
    std::vector<double> rank(n, 0.0);
    std::vector<size_t> tie_sizes;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // mean of ranks i+1..j+1
        for (size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        tie_sizes.push_back(j - i + 1);
        i = j + 1;
    }

    double w_plus = 0.0;
    for (size_t k = 0; k < n; ++k)
        if (d[k] > 0.0) w_plus += rank[k];

    WilcoxonResult result;
    result.w_plus = w_plus;
    result.n_nonzero = static_cast<int>(n);

    if (n <= 25) {
        // exact: distribution of W+ over all 2^n sign assignments, tracked on
        // a doubled-rank grid so average ranks stay integral
        std::vector<long long> r2(n);
        long long total2 = 0;
        for (size_t k = 0; k < n; ++k) {
            r2[k] = static_cast<long long>(std::llround(rank[k] * 2.0));
            total2 += r2[k];
        }
        std::vector<double> count(static_cast<size_t>(total2) + 1, 0.0);
        count[0] = 1.0;
        long long reach = 0;
        for (size_t k = 0; k < n; ++k) {
            reach += r2[k];
            for (long long s = reach; s >= r2[k]; --s)
                count[static_cast<size_t>(s)] += count[static_cast<size_t>(s - r2[k])];
        }
        const double denom = std::pow(2.0, static_cast<double>(n));
        const long long w2 = static_cast<long long>(std::llround(w_plus * 2.0));
        double at_or_below = 0.0, at_or_above = 0.0;
        for (long long s = 0; s <= total2; ++s) {
            const double c = count[static_cast<size_t>(s)];
            if (s <= w2) at_or_below += c;
            if (s >= w2) at_or_above += c;
        }
        result.p_two_sided = std::min(1.0, 2.0 * std::min(at_or_below, at_or_above) / denom);
        result.method = "exact";
        return result;
    }

    // tie-corrected normal approximation with continuity correction
    const double nn = static_cast<double>(n);
    const double mu = nn * (nn + 1.0) / 4.0;
    double sigma2 = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
    for (size_t t : tie_sizes) {
        const double tt = static_cast<double>(t);
        sigma2 -= (tt * tt * tt - tt) / 48.0;
    }
    if (sigma2 <= 0.0) throw ConfigError("wilcoxon: zero variance after tie correction");
    double z = w_plus - mu;
    z += (z > 0.0) ? -0.5 : (z < 0.0 ? 0.5 : 0.0);
    z /= std::sqrt(sigma2);
    result.p_two_sided = std::min(1.0, 2.0 * normal_cdf(-std::abs(z)));
    result.method = "normal";
    return result;
}

} // namespace hesitator
