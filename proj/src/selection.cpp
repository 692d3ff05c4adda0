#include "hesitator/selection.hpp"

#include <algorithm>
#include <cmath>

namespace hesitator {

namespace {

constexpr double kNumericEqTol = 1e-9;

bool constraint_holds(const ItemView& item, const Constraint& c) {
    double value;
    if (c.attribute == "price") {
        value = item.price;
    } else {
        auto it = item.raw_attributes.find(c.attribute);
        if (it == item.raw_attributes.end()) return false;  // unverifiable -> violated
        value = it->second;
    }
    switch (c.cmp) {
        case Comparator::LessEqual: return value <= c.bound;
        case Comparator::GreaterEqual: return value >= c.bound;
        case Comparator::Equal: return std::abs(value - c.bound) <= kNumericEqTol;
    }
    return false;
}

bool constraint_evaluable(const ItemView& item, const Constraint& c) {
    return c.attribute == "price" || item.raw_attributes.count(c.attribute) > 0;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace

std::vector<size_t> eba_filter(const std::vector<ItemView>& items,
                               const ConstraintSet& constraints, CandidateTrace* trace) {
    std::vector<size_t> kept;
    for (size_t i = 0; i < items.size(); ++i) {
        const Constraint* violated = nullptr;
        bool missing = false;
        for (const auto& c : constraints.constraints) {
            if (!constraint_holds(items[i], c)) {
                violated = &c;
                missing = !constraint_evaluable(items[i], c);
                break;
            }
        }
        if (violated) {
            if (trace) {
                std::string why = violated->describe();
                if (missing) why = "missing attribute '" + violated->attribute + "' (" + why + ")";
                trace->eliminated.push_back({items[i].id, why});
            }
        } else {
            kept.push_back(i);
        }
    }
    return kept;
}

double wadd_utility(const std::vector<double>& attributes, const WeightVector& weights) {
    if (attributes.size() != weights.size())
        throw ConfigError("wadd_utility: attribute/weight dimension mismatch");
    double u = 0.0;
    for (size_t j = 0; j < attributes.size(); ++j) u += weights.weights[j] * attributes[j];
    return u;
}

double acceptance_threshold(int pickiness, const SelectionParams& params) {
    if (!valid_level(pickiness))
        throw ConfigError("acceptance_threshold: pickiness out of range");
    return params.gamma + params.alpha * static_cast<double>(pickiness);
}

SelectionOutcome select(const std::vector<ItemView>& items, const ConstraintSet& constraints,
                        const WeightVector& weights, int pickiness,
                        const SelectionParams& params) {
    params.validate();
    const double tau = acceptance_threshold(pickiness, params);

    SelectionOutcome outcome;
    const size_t theta = static_cast<size_t>(params.theta);

    // Stage 1 only engages past the cognitive threshold.
    std::vector<size_t> candidates;
    if (items.size() > theta) {
        candidates = eba_filter(items, constraints, &outcome.trace);
    } else {
        candidates.resize(items.size());
        for (size_t i = 0; i < items.size(); ++i) candidates[i] = i;
    }

    // Oversized candidate set: tighten with soft at-least-median cuts in
    // descending weight order, then a hard top-theta cut on the heaviest
    // attribute if every attribute is exhausted.
    if (candidates.size() > theta && !items.empty()) {
        std::vector<size_t> attr_order(weights.size());
        for (size_t j = 0; j < attr_order.size(); ++j) attr_order[j] = j;
        std::stable_sort(attr_order.begin(), attr_order.end(), [&](size_t a, size_t b) {
            return weights.weights[a] > weights.weights[b];
        });

        for (size_t j : attr_order) {
            if (candidates.size() <= theta) break;
            std::vector<double> values;
            values.reserve(candidates.size());
            for (size_t i : candidates) values.push_back(items[i].attributes[j]);
            const double med = median_of(values);
            std::vector<size_t> kept;
            for (size_t i : candidates) {
                if (items[i].attributes[j] >= med) {
                    kept.push_back(i);
                } else {
                    outcome.trace.eliminated.push_back(
                        {items[i].id, "tightening: attribute " + std::to_string(j) +
                                          " below candidate median"});
                }
            }
            candidates = std::move(kept);
        }

        if (candidates.size() > theta) {
            const size_t heaviest = attr_order.front();
            std::stable_sort(candidates.begin(), candidates.end(), [&](size_t a, size_t b) {
                const double va = items[a].attributes[heaviest];
                const double vb = items[b].attributes[heaviest];
                if (va != vb) return va > vb;
                return items[a].id < items[b].id;
            });
            for (size_t k = theta; k < candidates.size(); ++k)
                outcome.trace.eliminated.push_back(
                    {items[candidates[k]].id, "tightening: outside top-theta on heaviest attribute"});
            candidates.resize(theta);
        }
    }

    for (size_t i : candidates) outcome.trace.retained.push_back(items[i].id);

    if (candidates.empty()) {
        outcome.proceed = false;
        outcome.reject_reason = RejectReason::NoCandidates;
        return outcome;
    }

    // Compensatory stage: argmax utility, ties to the smallest id.
    size_t best = candidates.front();
    double best_u = wadd_utility(items[best].attributes, weights);
    for (size_t k = 1; k < candidates.size(); ++k) {
        const size_t i = candidates[k];
        const double u = wadd_utility(items[i].attributes, weights);
        if (u > best_u || (u == best_u && items[i].id < items[best].id)) {
            best = i;
            best_u = u;
        }
    }

    outcome.best_item = items[best].id;
    outcome.best_utility = best_u;
    if (best_u < tau) {
        outcome.proceed = false;
        outcome.reject_reason = RejectReason::BelowThreshold;
    } else {
        outcome.proceed = true;
    }
    return outcome;
}

SelectionOutcome flat_rating_select(const std::vector<ItemView>& items, int pickiness,
                                    const SelectionParams& params) {
    params.validate();
    const double tau = acceptance_threshold(pickiness, params);
    SelectionOutcome outcome;
    for (const auto& item : items) outcome.trace.retained.push_back(item.id);
    if (items.empty()) {
        outcome.reject_reason = RejectReason::NoCandidates;
        return outcome;
    }
    size_t best = 0;
    double best_u = -1.0;
    for (size_t i = 0; i < items.size(); ++i) {
        double u = 0.0;
        for (double a : items[i].attributes) u += a;
        if (!items[i].attributes.empty()) u /= static_cast<double>(items[i].attributes.size());
        if (u > best_u || (u == best_u && items[i].id < items[best].id)) {
            best = i;
            best_u = u;
        }
    }
    outcome.best_item = items[best].id;
    outcome.best_utility = best_u;
    if (best_u < tau) {
        outcome.reject_reason = RejectReason::BelowThreshold;
    } else {
        outcome.proceed = true;
    }
    return outcome;
}

} // namespace hesitator
