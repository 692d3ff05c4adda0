#include "hesitator/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hesitator {

void WeightVector::validate() const {
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw ConfigError("weight vector: negative component");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("weight vector: components must sum to 1");
}

namespace {

// type-7 quantile (linear interpolation between order statistics)
double quantile_type7(const std::vector<double>& sorted, double p) {
    const size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = (static_cast<double>(n) - 1.0) * p;
    const size_t lo = static_cast<size_t>(std::floor(h));
    const size_t hi = std::min(lo + 1, n - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

double sample_budget(const Catalog& catalog, const std::string& category, Rng& rng) {
    std::vector<double> prices;
    for (const auto& item : catalog.items)
        if (category.empty() || item.category == category) prices.push_back(item.price);
    if (prices.size() < 4)
        throw ConfigError("sample_budget: category '" + category +
                          "' has fewer than 4 priced items");
    std::sort(prices.begin(), prices.end());
    const double q1 = quantile_type7(prices, 0.25);
    const double q3 = quantile_type7(prices, 0.75);
    return rng.uniform(q1, q3);
}

WeightVector build_weight_vector(int uncertainty, const AttributeSchema& schema,
                                 const std::map<std::string, double>* emphasis, Rng& rng) {
    if (!valid_level(uncertainty))
        throw ConfigError("build_weight_vector: uncertainty level out of range");
    const size_t n = schema.size();
    if (n == 0) throw ConfigError("build_weight_vector: empty schema");

    WeightVector wv;
    wv.weights.assign(n, 0.0);

    if (uncertainty >= 2) {
        std::fill(wv.weights.begin(), wv.weights.end(), 1.0 / static_cast<double>(n));
        return wv;
    }

    if (emphasis && !emphasis->empty()) {
        double total = 0.0;
        for (const auto& [name, w] : *emphasis) {
            if (w < 0.0)
                throw ConfigError("build_weight_vector: negative emphasis for '" + name + "'");
            const int idx = schema.index_of(name);
            if (idx < 0)
                throw ConfigError("build_weight_vector: emphasis names unknown attribute '" +
                                  name + "'");
            wv.weights[static_cast<size_t>(idx)] = w;
            total += w;
        }
        if (total <= 0.0) throw ConfigError("build_weight_vector: emphasis sums to zero");
        for (auto& w : wv.weights) w /= total;
        return wv;
    }

    // simplex point sorted descending, assigned to a random priority order
    std::vector<double> raw = rng.simplex_point(n);
    std::sort(raw.begin(), raw.end(), std::greater<>());
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (size_t i = n; i > 1; --i) {
        const size_t j = rng.uniform_index(i);
        std::swap(order[i - 1], order[j]);
    }
    for (size_t i = 0; i < n; ++i) wv.weights[order[i]] = raw[i];
    return wv;
}

Profile generate_profile(const ProfileConfig& config, const Catalog& catalog) {
    if (!config.valid()) throw ConfigError("generate_profile: ordinal field out of range");
    catalog.schema.validate();

    Rng budget_rng(split_seed(config.seed, 1));
    Rng weight_rng(split_seed(config.seed, 2));
    Rng needs_rng(split_seed(config.seed, 3));

    Profile profile;
    profile.state.persona.openness = config.openness;
    profile.state.persona.pickiness = config.pickiness;
    profile.state.persona.uncertainty = config.uncertainty;

    Scenario& scenario = profile.state.scenario;
    scenario.time_pressure = config.time_pressure;
    scenario.budget = sample_budget(catalog, config.category, budget_rng);

    profile.weights = build_weight_vector(config.uncertainty, catalog.schema,
                                          config.emphasis.empty() ? nullptr : &config.emphasis,
                                          weight_rng);

    const std::string category =
        config.category.empty()
            ? (catalog.items.empty() ? "items" : catalog.items.front().category)
            : config.category;

    profile.constraints.constraints.push_back(
        {"price", Comparator::LessEqual, scenario.budget});

    if (config.uncertainty >= 2) {
        // vague preferences: category-level phrasing only
        scenario.needs_text = "I'm looking for a good " + category +
                              " that fits my budget.";
    } else {
        // expert: name priority attributes and pin at least one as a hard requirement
        std::vector<size_t> by_weight(profile.weights.size());
        std::iota(by_weight.begin(), by_weight.end(), 0);
        std::stable_sort(by_weight.begin(), by_weight.end(), [&](size_t a, size_t b) {
            return profile.weights.weights[a] > profile.weights.weights[b];
        });
        const auto& top = catalog.schema.attributes[by_weight[0]];
        const auto& second = catalog.schema.attributes[by_weight[std::min<size_t>(1, by_weight.size() - 1)]];
        scenario.needs_text = "I'm looking for a " + category + " with strong " + top.name +
                              " and decent " + second.name + ".";

        double lo = top.observed_min, hi = top.observed_max;
        if (top.kind == AttrKind::Binary) { lo = 0.0; hi = 1.0; }
        const double floor_frac = needs_rng.uniform(0.4, 0.6);
        profile.constraints.constraints.push_back(
            {top.name, Comparator::GreaterEqual, lo + floor_frac * (hi - lo)});
    }

    scenario.hard_constraints = profile.constraints;
    return profile;
}

} // namespace hesitator
