#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hesitator/domain.hpp"
#include "hesitator/profiles.hpp"

// Two-stage selection: non-compensatory constraint filtering (elimination by
// aspects) followed by compensatory weighted-additive scoring against a
// pickiness-dependent acceptance threshold.

namespace hesitator {

// The slice of an item a user actually evaluates in one turn: the shown
// attributes (normalized into [0,1] in a fixed order) plus the raw values
// needed for constraint checks. "price" is always evaluable.
struct ItemView {
    std::string id;
    std::vector<double> attributes;               // normalized, view order
    std::map<std::string, double> raw_attributes; // shown subset, raw values
    double price = 0.0;
};

struct SelectionParams {
    int theta = 3;        // cognitive filtering threshold
    double gamma = 0.6;   // threshold base
    double alpha = 0.1;   // threshold slope

    void validate() const {
        if (theta < 1) throw ConfigError("selection: theta must be >= 1");
        if (gamma + alpha * 3.0 > 1.0 + 1e-12)
            throw ConfigError("selection: gamma + 3*alpha must stay <= 1");
    }
};

enum class RejectReason { NoCandidates, BelowThreshold };

inline std::string reject_reason_name(RejectReason r) {
    return r == RejectReason::NoCandidates ? "no_candidates" : "below_threshold";
}

struct Elimination {
    std::string item_id;
    std::string reason;  // violated constraint, or the tightening step
};

struct CandidateTrace {
    std::vector<std::string> retained;
    std::vector<Elimination> eliminated;
};

struct SelectionOutcome {
    bool proceed = false;
    std::optional<std::string> best_item;     // s_i
    std::optional<double> best_utility;       // s_u
    std::optional<RejectReason> reject_reason;
    CandidateTrace trace;
};

// Stage 1: keep items satisfying every constraint. A constraint whose
// attribute is missing from an item's view counts as violated (recorded as a
// missing-attribute elimination). Returns indices into `items`.
std::vector<size_t> eba_filter(const std::vector<ItemView>& items,
                               const ConstraintSet& constraints, CandidateTrace* trace);

// Stage 2 scoring: sum_j w_j * a_ij. Dimensions must match.
double wadd_utility(const std::vector<double>& attributes, const WeightVector& weights);

// tau(phi_K) = gamma + alpha * phi_K
double acceptance_threshold(int pickiness, const SelectionParams& params);

// Full pipeline. Constraint filtering runs only when |I| > theta; an
// oversized candidate set is tightened by requiring at-least-median values on
// attributes in descending weight order, with a final top-theta cut on the
// heaviest attribute. Utility ties break toward the lexicographically
// smallest item id.
SelectionOutcome select(const std::vector<ItemView>& items, const ConstraintSet& constraints,
                        const WeightVector& weights, int pickiness,
                        const SelectionParams& params);

// The module is a replacement slot: the flat-rating variant drops filtering
// and weights entirely, scoring each item by the unweighted mean of its shown
// normalized attributes against the same threshold.
enum class SelectionVariant { Structured, FlatRating };

SelectionOutcome flat_rating_select(const std::vector<ItemView>& items, int pickiness,
                                    const SelectionParams& params);

} // namespace hesitator
