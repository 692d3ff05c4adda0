#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hesitator/catalog.hpp"
#include "hesitator/domain.hpp"
#include "hesitator/rng.hpp"

// User profile construction: budgets sampled from the category price IQR,
// uncertainty-gated weight vectors, and needs whose granularity follows the
// uncertainty level.

namespace hesitator {

// Attribute weights aligned to schema order; components are nonnegative and
// sum to 1 (within 1e-9).
struct WeightVector {
    std::vector<double> weights;

    size_t size() const { return weights.size(); }
    void validate() const;
};

struct ProfileConfig {
    uint64_t seed = 0;
    int uncertainty = 2;    // phi_U
    int pickiness = 2;      // phi_K
    int openness = 2;       // phi_O
    int time_pressure = 2;  // sigma_T
    std::string category;   // empty = whole catalog
    // optional non-uniform emphasis for low uncertainty, attribute name -> raw weight
    std::map<std::string, double> emphasis;

    bool valid() const {
        return valid_level(uncertainty) && valid_level(pickiness) &&
               valid_level(openness) && valid_level(time_pressure);
    }
};

struct Profile {
    GlobalState state;
    WeightVector weights;
    ConstraintSet constraints;
};

// Budget drawn uniformly from [Q1, Q3] of the category's prices
// (linear-interpolation quartiles). Requires at least 4 priced items.
double sample_budget(const Catalog& catalog, const std::string& category, Rng& rng);

// phi_U in {2,3}: uniform 1/n. phi_U == 1: the emphasis map if given,
// otherwise a unit-simplex point sorted descending and assigned to a random
// priority order over the attributes. Always normalized.
WeightVector build_weight_vector(int uncertainty, const AttributeSchema& schema,
                                 const std::map<std::string, double>* emphasis, Rng& rng);

// Full profile: coarse needs for phi_U in {2,3}, attribute-specific needs and
// at least one non-price constraint for phi_U == 1; the constraint set always
// contains price <= budget. Deterministic in config.seed.
Profile generate_profile(const ProfileConfig& config, const Catalog& catalog);

} // namespace hesitator
