#include "hesitator/hesitation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>

#include <json.hpp>

namespace hesitator {

using nlohmann::json;

void LeafScores::validate() const {
    for (int v : {assortment, dominance, alignability, attribute_count, format_complexity,
                  time_pressure, uncertainty}) {
        if (!valid_level(v)) throw ConfigError("leaf scores: level out of {1,2,3}");
    }
}

void CalibrationTable::validate() const {
    const FactorCalibration* factors[] = {&assortment, &complexity, &difficulty, &uncertainty};
    const char* names[] = {"assortment", "complexity", "difficulty", "uncertainty"};
    for (int k = 0; k < 4; ++k) {
        if (factors[k]->delta_min > factors[k]->delta_max)
            throw ConfigError(std::string("calibration: factor '") + names[k] +
                              "' has delta_min > delta_max");
    }
}

double CalibrationTable::min_total() const {
    return assortment.beta * assortment.delta_min + complexity.beta * complexity.delta_min +
           difficulty.beta * difficulty.delta_min + uncertainty.beta * uncertainty.delta_min;
}

double CalibrationTable::max_total() const {
    return assortment.beta * assortment.delta_max + complexity.beta * complexity.delta_max +
           difficulty.beta * difficulty.delta_max + uncertainty.beta * uncertainty.delta_max;
}

namespace {

FactorCalibration factor_from_json(const json& j, const std::string& name) {
    if (!j.contains(name)) throw ParseError("calibration: missing factor '" + name + "'");
    const auto& f = j.at(name);
    return {f.at("beta").get<double>(), f.at("delta_min").get<double>(),
            f.at("delta_max").get<double>()};
}

} // namespace

CalibrationTable CalibrationTable::load(std::istream& in) {
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ParseError(std::string("calibration: invalid JSON: ") + e.what());
    }
    CalibrationTable t;
    t.assortment = factor_from_json(doc, "assortment");
    t.complexity = factor_from_json(doc, "complexity");
    t.difficulty = factor_from_json(doc, "difficulty");
    t.uncertainty = factor_from_json(doc, "uncertainty");
    if (doc.contains("zero_effect_factors"))
        t.zero_effect_factors = doc["zero_effect_factors"].get<std::vector<std::string>>();
    t.validate();
    return t;
}

std::string CalibrationTable::to_json() const {
    auto factor = [](const FactorCalibration& f) {
        return json{{"beta", f.beta}, {"delta_min", f.delta_min}, {"delta_max", f.delta_max}};
    };
    json doc{{"assortment", factor(assortment)},
             {"complexity", factor(complexity)},
             {"difficulty", factor(difficulty)},
             {"uncertainty", factor(uncertainty)},
             {"zero_effect_factors", zero_effect_factors}};
    return doc.dump(2);
}

int RuleBasedPerception::score_assortment(size_t n_items) {
    if (n_items <= 3) return 1;
    if (n_items <= 8) return 2;
    return 3;
}

int RuleBasedPerception::score_attribute_count(int shown_attributes) {
    if (shown_attributes <= 4) return 1;
    if (shown_attributes <= 9) return 2;
    return 3;
}

int RuleBasedPerception::score_dominance(const std::vector<ItemView>& items) {
    const size_t n = items.size();
    if (n <= 1) return 1;

    // Pareto dominance on the normalized attribute vectors
    for (size_t i = 0; i < n; ++i) {
        bool dominates_all = true;
        for (size_t k = 0; k < n && dominates_all; ++k) {
            if (k == i) continue;
            bool ge_everywhere = true, gt_somewhere = false;
            const size_t dims = std::min(items[i].attributes.size(), items[k].attributes.size());
            for (size_t j = 0; j < dims; ++j) {
                if (items[i].attributes[j] < items[k].attributes[j]) ge_everywhere = false;
                if (items[i].attributes[j] > items[k].attributes[j]) gt_somewhere = true;
            }
            if (!(ge_everywhere && gt_somewhere)) dominates_all = false;
        }
        if (dominates_all) return 1;
    }

    // trade-off rate: fraction of (item pair, attribute pair) combinations
    // whose orderings oppose, among those where both attributes differ
    size_t opposing = 0, considered = 0;
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = a + 1; b < n; ++b) {
            const size_t dims = std::min(items[a].attributes.size(), items[b].attributes.size());
            for (size_t j = 0; j < dims; ++j) {
                for (size_t k = j + 1; k < dims; ++k) {
                    const double dj = items[a].attributes[j] - items[b].attributes[j];
                    const double dk = items[a].attributes[k] - items[b].attributes[k];
                    if (dj == 0.0 || dk == 0.0) continue;
                    ++considered;
                    if ((dj > 0.0) != (dk > 0.0)) ++opposing;
                }
            }
        }
    }
    const double rate = considered == 0 ? 0.0
                                        : static_cast<double>(opposing) /
                                              static_cast<double>(considered);
    return rate < 0.5 ? 2 : 3;
}

int RuleBasedPerception::score_alignability(const std::vector<ItemView>& items) {
    if (items.empty()) return 1;
    std::set<std::string> all, shared;
    for (const auto& [name, _] : items.front().raw_attributes) shared.insert(name);
    for (const auto& item : items) {
        std::set<std::string> names;
        for (const auto& [name, _] : item.raw_attributes) {
            names.insert(name);
            all.insert(name);
        }
        std::set<std::string> kept;
        std::set_intersection(shared.begin(), shared.end(), names.begin(), names.end(),
                              std::inserter(kept, kept.begin()));
        shared = std::move(kept);
    }
    const double frac = all.empty() ? 1.0
                                    : static_cast<double>(shared.size()) /
                                          static_cast<double>(all.size());
    if (frac >= 0.8) return 1;
    if (frac >= 0.4) return 2;
    return 3;
}

int RuleBasedPerception::score_format_complexity(Presentation presentation) {
    switch (presentation) {
        case Presentation::Tabular: return 1;
        case Presentation::Mixed: return 2;
        case Presentation::FreeText: return 3;
    }
    return 3;
}

LeafScores RuleBasedPerception::perceive(const SalesTurn& sales,
                                         const std::vector<ItemView>& items) const {
    LeafScores leaves;
    leaves.assortment = score_assortment(items.size());
    leaves.attribute_count = score_attribute_count(sales.shown_attribute_count());
    leaves.dominance = score_dominance(items);
    leaves.alignability = score_alignability(items);
    leaves.format_complexity = score_format_complexity(sales.presentation);
    return leaves;
}

LeafScores perceive_overload(const SalesTurn& sales, const std::vector<ItemView>& items,
                             const GlobalState& state, const PerceptionProvider& provider) {
    LeafScores leaves = provider.perceive(sales, items);
    leaves.time_pressure = state.scenario.time_pressure;
    leaves.uncertainty = state.persona.uncertainty;
    leaves.validate();
    return leaves;
}

OverloadVector compose_factors(const LeafScores& leaves) {
    leaves.validate();
    OverloadVector v;
    v.assortment = static_cast<double>(leaves.assortment);
    v.complexity = 0.5 * (leaves.dominance + leaves.alignability);
    v.difficulty =
        (leaves.time_pressure + leaves.attribute_count + leaves.format_complexity) / 3.0;
    v.uncertainty = static_cast<double>(leaves.uncertainty);
    return v;
}

double interp_effect(double level, double delta_min, double delta_max) {
    if (level < 1.0 - 1e-12 || level > 3.0 + 1e-12)
        throw ConfigError("interp_effect: level outside [1,3]");
    return delta_min + (level - 1.0) / 2.0 * (delta_max - delta_min);
}

double total_effect(const OverloadVector& v, const CalibrationTable& table) {
    table.validate();
    double d = table.assortment.beta *
                   interp_effect(v.assortment, table.assortment.delta_min, table.assortment.delta_max) +
               table.complexity.beta *
                   interp_effect(v.complexity, table.complexity.delta_min, table.complexity.delta_max) +
               table.difficulty.beta *
                   interp_effect(v.difficulty, table.difficulty.delta_min, table.difficulty.delta_max) +
               table.uncertainty.beta *
                   interp_effect(v.uncertainty, table.uncertainty.delta_min, table.uncertainty.delta_max);
    // omitted moderators enter with zero effect
    d += 0.0 * static_cast<double>(table.zero_effect_factors.size());
    return d;
}

double clamp_effect(double d, double p_base) {
    HesitationParams{p_base}.validate();
    const double upper = 2.0 * std::asin(std::sqrt(p_base));
    const double lower = upper - M_PI;
    return std::clamp(d, lower, upper);
}

double accept_probability(double d, double p_base) {
    HesitationParams{p_base}.validate();
    if (d == 0.0) return p_base;  // identity case, exact
    const double s = std::sin(std::asin(std::sqrt(p_base)) - d / 2.0);
    return s * s;
}

double inverse_effect(double p_accept, double p_base) {
    HesitationParams{p_base}.validate();
    if (p_accept < 0.0 || p_accept > 1.0)
        throw ConfigError("inverse_effect: probability outside [0,1]");
    return 2.0 * (std::asin(std::sqrt(p_base)) - std::asin(std::sqrt(p_accept)));
}

CommitDraw decide_commit(double p_accept, Rng& rng) {
    if (p_accept < 0.0 || p_accept > 1.0)
        throw ConfigError("decide_commit: probability outside [0,1]");
    CommitDraw draw;
    draw.epsilon = rng.uniform();
    draw.purchase = draw.epsilon <= p_accept;
    return draw;
}

HesitationOutcome evaluate_hesitation(const SalesTurn& sales, const std::vector<ItemView>& items,
                                      const GlobalState& state, const PerceptionProvider& provider,
                                      const CalibrationTable& table, const HesitationParams& params,
                                      Rng& rng) {
    params.validate();
    HesitationOutcome out;
    out.leaves = perceive_overload(sales, items, state, provider);
    out.v = compose_factors(out.leaves);
    out.effect_assortment =
        interp_effect(out.v.assortment, table.assortment.delta_min, table.assortment.delta_max);
    out.effect_complexity =
        interp_effect(out.v.complexity, table.complexity.delta_min, table.complexity.delta_max);
    out.effect_difficulty =
        interp_effect(out.v.difficulty, table.difficulty.delta_min, table.difficulty.delta_max);
    out.effect_uncertainty =
        interp_effect(out.v.uncertainty, table.uncertainty.delta_min, table.uncertainty.delta_max);
    out.d_total_raw = total_effect(out.v, table);
    out.d_total = clamp_effect(out.d_total_raw, params.p_base);
    out.p_accept = accept_probability(out.d_total, params.p_base);
    const CommitDraw draw = decide_commit(out.p_accept, rng);
    out.epsilon = draw.epsilon;
    out.purchase = draw.purchase;
    return out;
}

} // namespace hesitator
