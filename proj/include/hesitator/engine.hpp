#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hesitator/catalog.hpp"
#include "hesitator/domain.hpp"
#include "hesitator/hesitation.hpp"
#include "hesitator/profiles.hpp"
#include "hesitator/selection.hpp"

// Turn-based session loop: a scripted catalog-backed sales agent produces an
// offer, the user runs selection then (on a viable option) hesitation, and a
// response is rendered from templates. One session is one logical thread;
// shared inputs are read-only.

namespace hesitator {

enum class SalesMode { Basic, PersuasiveLite };

struct SalesAgentConfig {
    int assortment_size = 3;  // |I| per turn
    int attrs_shown = 8;      // N_attr per item
    Presentation presentation = Presentation::Tabular;
    SalesMode mode = SalesMode::Basic;
    bool relevance = false;  // rank by needs-text token overlap instead of catalog order

    void validate(const AttributeSchema& schema) const;
};

// What the sales side is allowed to see of the user.
struct VisibleProfile {
    int openness = 2;
    int pickiness = 2;
};

struct Decision {
    Outcome outcome = Outcome::Reject;
    SelectionOutcome selection;
    std::optional<HesitationOutcome> hesitation;  // present iff selection proceeded
    std::string best_item_title;                  // display name of selection.best_item
};

// Deterministic sales policy. Basic mode walks down a fixed ranking with
// fresh items every turn and never re-offers items from rejected turns;
// persuasive-lite re-offers the deferred item with its nearest neighbors.
// Ranking is needs-overlap when relevance is on, otherwise catalog quality
// order (mean normalized attributes). Ties break toward the smaller id.
SalesTurn scripted_sales_agent(const SalesAgentConfig& config, const VisibleProfile& visible,
                               const DialogueHistory& history, const Catalog& catalog, Rng& rng);

// Builds the per-turn evaluation views: shown attributes only, normalized,
// weights renormalized over the shown subset (uniform fallback when no
// weight mass is visible).
std::vector<ItemView> build_item_views(const SalesTurn& sales, const Catalog& catalog);
WeightVector restrict_weights(const WeightVector& weights, const AttributeSchema& schema,
                              const std::vector<std::string>& shown_attributes);

// Action selection and synthesis may be served by an external text provider;
// the template implementation is the deterministic default.
class ResponseProvider {
public:
    virtual ~ResponseProvider() = default;
    virtual Intent choose_action(const GlobalState& state, const DialogueHistory& history,
                                 const Decision& decision) const = 0;
    virtual std::string synthesize(const GlobalState& state, const DialogueHistory& history,
                                   const Decision& decision, Intent intent) const = 0;
};

class TemplateResponder final : public ResponseProvider {
public:
    Intent choose_action(const GlobalState& state, const DialogueHistory& history,
                         const Decision& decision) const override;
    std::string synthesize(const GlobalState& state, const DialogueHistory& history,
                           const Decision& decision, Intent intent) const override;
};

struct Providers {
    const PerceptionProvider* perception = nullptr;  // default: rule-based
    const ResponseProvider* response = nullptr;      // default: templates
};

// Selection -> hesitation pipeline for one offer.
Decision user_decide(const SalesTurn& sales, const GlobalState& state, const WeightVector& weights,
                     const ConstraintSet& constraints, const Catalog& catalog,
                     const SelectionParams& sel_params, const CalibrationTable& calibration,
                     const HesitationParams& hes_params, const PerceptionProvider& perception,
                     Rng& rng, SelectionVariant variant = SelectionVariant::Structured);

// Intent per the decision outcome; asking for clarification is reserved for
// high-openness users after a below-threshold rejection. A provider returning
// an intent inconsistent with the decision is a protocol error.
Intent select_action(const GlobalState& state, const DialogueHistory& history,
                     const Decision& decision, const ResponseProvider& provider);

std::string synthesize_response(const GlobalState& state, const DialogueHistory& history,
                                const Decision& decision, Intent intent,
                                const ResponseProvider& provider);

struct SessionConfig {
    SalesAgentConfig sales;
    SelectionParams selection;
    SelectionVariant variant = SelectionVariant::Structured;
    HesitationParams hesitation;
    CalibrationTable calibration;
    int turn_limit = kDefaultTurnLimit;
};

struct SessionResult {
    bool purchased = false;
    int terminal_turn = 0;
    TerminalReason reason = TerminalReason::None;
    std::string purchased_item;
    DialogueHistory history;
    std::vector<Decision> decisions;  // parallel to history.turns
};

// Runs one full session; a pure function of its inputs and seed when the
// default providers are used. Sub-streams: 1 = agent, 2 = epsilon.
SessionResult run_session(const GlobalState& state, const WeightVector& weights,
                          const ConstraintSet& constraints, const Catalog& catalog,
                          const SessionConfig& config, const Providers& providers, uint64_t seed);

// Line-delimited transcript: one JSON record per turn with fields
// {turn, sales_items, sales_text, user_action, user_text, outcome, p_accept,
//  d_total} plus a selection trace; the opening record (turn 0) carries u_0.
void write_transcript(std::ostream& out, const SessionResult& result);

} // namespace hesitator
