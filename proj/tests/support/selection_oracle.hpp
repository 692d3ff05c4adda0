#pragma once

// Brute-force reference for the selection pipeline, coded independently of
// the library path (plain loops, counting median, pointer sets). Shared by
// the unit tests and the acceptance suite.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hesitator/rng.hpp"
#include "hesitator/selection.hpp"

namespace oracle {

inline bool holds(const hesitator::ItemView& item, const hesitator::Constraint& c) {
    using hesitator::Comparator;
    double value = 0.0;
    bool have = false;
    if (c.attribute == "price") {
        value = item.price;
        have = true;
    } else {
        for (const auto& [name, raw] : item.raw_attributes) {
            if (name == c.attribute) {
                value = raw;
                have = true;
                break;
            }
        }
    }
    if (!have) return false;
    if (c.cmp == Comparator::LessEqual) return value <= c.bound;
    if (c.cmp == Comparator::GreaterEqual) return value >= c.bound;
    return std::fabs(value - c.bound) <= 1e-9;
}

inline double median(std::vector<double> values) {
    const size_t n = values.size();
    auto kth = [&](size_t k) {
        for (double candidate : values) {
            size_t below = 0, equal = 0;
            for (double v : values) {
                if (v < candidate) ++below;
                else if (v == candidate) ++equal;
            }
            if (below <= k && k < below + equal) return candidate;
        }
        return values.front();
    };
    if (n % 2 == 1) return kth(n / 2);
    return 0.5 * (kth(n / 2 - 1) + kth(n / 2));
}

struct Result {
    bool proceed = false;
    std::string best_item;
    double best_utility = 0.0;
    std::string reject_reason;  // "", "no_candidates", "below_threshold"
};

inline Result select(const std::vector<hesitator::ItemView>& items,
                     const hesitator::ConstraintSet& constraints,
                     const hesitator::WeightVector& weights, int pickiness,
                     const hesitator::SelectionParams& params) {
    Result result;
    const size_t theta = static_cast<size_t>(params.theta);

    std::vector<const hesitator::ItemView*> cand;
    if (items.size() > theta) {
        for (const auto& item : items) {
            bool ok = true;
            for (const auto& c : constraints.constraints)
                if (!holds(item, c)) { ok = false; break; }
            if (ok) cand.push_back(&item);
        }
    } else {
        for (const auto& item : items) cand.push_back(&item);
    }

    if (cand.size() > theta) {
        std::vector<size_t> by_weight;
        std::vector<bool> used(weights.size(), false);
        for (size_t pass = 0; pass < weights.size(); ++pass) {
            size_t best = SIZE_MAX;
            for (size_t j = 0; j < weights.size(); ++j) {
                if (used[j]) continue;
                if (best == SIZE_MAX || weights.weights[j] > weights.weights[best]) best = j;
            }
            used[best] = true;
            by_weight.push_back(best);
        }
        for (size_t j : by_weight) {
            if (cand.size() <= theta) break;
            std::vector<double> vals;
            for (const auto* item : cand) vals.push_back(item->attributes[j]);
            const double med = median(vals);
            std::vector<const hesitator::ItemView*> kept;
            for (const auto* item : cand)
                if (item->attributes[j] >= med) kept.push_back(item);
            cand = kept;
        }
        if (cand.size() > theta) {
            const size_t heavy = by_weight.front();
            std::vector<const hesitator::ItemView*> top;
            std::vector<bool> taken(cand.size(), false);
            while (top.size() < theta) {
                size_t pick = SIZE_MAX;
                for (size_t i = 0; i < cand.size(); ++i) {
                    if (taken[i]) continue;
                    if (pick == SIZE_MAX) { pick = i; continue; }
                    const double vi = cand[i]->attributes[heavy];
                    const double vp = cand[pick]->attributes[heavy];
                    if (vi > vp || (vi == vp && cand[i]->id < cand[pick]->id)) pick = i;
                }
                taken[pick] = true;
                top.push_back(cand[pick]);
            }
            cand = top;
        }
    }

    if (cand.empty()) {
        result.reject_reason = "no_candidates";
        return result;
    }

    const hesitator::ItemView* best = nullptr;
    double best_u = 0.0;
    for (const auto* item : cand) {
        double u = 0.0;
        for (size_t j = 0; j < weights.size(); ++j) u += weights.weights[j] * item->attributes[j];
        if (!best || u > best_u || (u == best_u && item->id < best->id)) {
            best = item;
            best_u = u;
        }
    }
    result.best_item = best->id;
    result.best_utility = best_u;
    const double tau = params.gamma + params.alpha * pickiness;
    if (best_u < tau) {
        result.reject_reason = "below_threshold";
    } else {
        result.proceed = true;
    }
    return result;
}

struct RandomInstance {
    std::vector<hesitator::ItemView> items;
    hesitator::ConstraintSet constraints;
    hesitator::WeightVector weights;
    int pickiness = 2;
};

inline RandomInstance random_instance(hesitator::Rng& rng) {
    using hesitator::Comparator;
    RandomInstance inst;
    const size_t n_items = 1 + rng.uniform_index(10);
    const size_t n_attrs = 1 + rng.uniform_index(6);
    inst.weights.weights = rng.simplex_point(n_attrs);
    for (size_t i = 0; i < n_items; ++i) {
        hesitator::ItemView v;
        v.id = "it-" + std::to_string(i);
        v.price = rng.uniform(0.0, 100.0);
        for (size_t j = 0; j < n_attrs; ++j) {
            const double a = rng.uniform();
            v.attributes.push_back(a);
            v.raw_attributes["attr" + std::to_string(j)] = a;
        }
        if (rng.uniform() < 0.15 && n_attrs > 1) v.raw_attributes.erase("attr0");
        inst.items.push_back(std::move(v));
    }
    const size_t n_constraints = rng.uniform_index(4);
    for (size_t k = 0; k < n_constraints; ++k) {
        hesitator::Constraint c;
        if (rng.uniform() < 0.3) {
            c.attribute = "price";
            c.cmp = Comparator::LessEqual;
            c.bound = rng.uniform(0.0, 100.0);
        } else {
            c.attribute = "attr" + std::to_string(rng.uniform_index(n_attrs));
            c.cmp = rng.uniform() < 0.5 ? Comparator::LessEqual : Comparator::GreaterEqual;
            c.bound = rng.uniform();
        }
        inst.constraints.constraints.push_back(std::move(c));
    }
    inst.pickiness = 1 + static_cast<int>(rng.uniform_index(3));
    return inst;
}

inline bool matches(const hesitator::SelectionOutcome& got, const Result& want) {
    if (got.proceed != want.proceed) return false;
    if (!want.reject_reason.empty()) {
        if (!got.reject_reason) return false;
        if (hesitator::reject_reason_name(*got.reject_reason) != want.reject_reason) return false;
    }
    if (!want.best_item.empty()) {
        if (!got.best_item || *got.best_item != want.best_item) return false;
        if (std::fabs(*got.best_utility - want.best_utility) > 1e-12) return false;
    }
    return true;
}

} // namespace oracle
