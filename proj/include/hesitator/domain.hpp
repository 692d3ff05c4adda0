#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hesitator/errors.hpp"

// Session-level state: persona, scenario, dialogue history and the turn
// bookkeeping contract. All values are plain data; histories grow by
// replacement (append_turn returns a new value), so they are safe to share
// read-only across parallel sessions.

namespace hesitator {

inline constexpr int kDefaultTurnLimit = 20;

// Ordinal trait levels are always in {1,2,3}.
inline bool valid_level(int v) { return v >= 1 && v <= 3; }

struct Persona {
    int openness = 2;     // phi_O
    int pickiness = 2;    // phi_K
    int uncertainty = 2;  // phi_U

    bool valid() const {
        return valid_level(openness) && valid_level(pickiness) && valid_level(uncertainty);
    }
};

enum class Comparator { LessEqual, GreaterEqual, Equal };

inline std::string comparator_symbol(Comparator c) {
    switch (c) {
        case Comparator::LessEqual: return "<=";
        case Comparator::GreaterEqual: return ">=";
        case Comparator::Equal: return "==";
    }
    return "?";
}

// One hard constraint on an attribute ("price" addresses the price field).
struct Constraint {
    std::string attribute;
    Comparator cmp = Comparator::LessEqual;
    double bound = 0.0;

    std::string describe() const {
        return attribute + " " + comparator_symbol(cmp) + " " + std::to_string(bound);
    }
};

struct ConstraintSet {
    std::vector<Constraint> constraints;

    bool empty() const { return constraints.empty(); }
    size_t size() const { return constraints.size(); }
};

struct Scenario {
    std::string needs_text;          // sigma_N, free text
    ConstraintSet hard_constraints;  // sigma_N, machine-readable part
    double budget = 0.0;             // sigma_B, > 0
    int time_pressure = 2;           // sigma_T

    bool valid() const { return budget > 0.0 && valid_level(time_pressure); }
};

// G = (P, S); nothing else is session-level state.
struct GlobalState {
    Persona persona;
    Scenario scenario;

    bool valid() const { return persona.valid() && scenario.valid(); }
};

enum class Presentation { Tabular, Mixed, FreeText };

inline std::string presentation_name(Presentation p) {
    switch (p) {
        case Presentation::Tabular: return "tabular";
        case Presentation::Mixed: return "mixed";
        case Presentation::FreeText: return "free-text";
    }
    return "?";
}

// One sales-agent message: the offered items plus how they are presented.
// shown_attributes is uniform across the items of a turn. item_titles is the
// display name per item, parallel to item_ids.
struct SalesTurn {
    std::vector<std::string> item_ids;
    std::vector<std::string> item_titles;
    std::vector<std::string> shown_attributes;
    Presentation presentation = Presentation::Tabular;
    std::string rendered_text;

    int shown_attribute_count() const { return static_cast<int>(shown_attributes.size()); }
};

enum class Outcome { Accept, Reject, Defer };

inline std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Accept: return "accept";
        case Outcome::Reject: return "reject";
        case Outcome::Defer: return "defer";
    }
    return "?";
}

enum class Intent { AcceptOffer, RejectWithReason, DeferWithRationale, AskClarification };

inline std::string intent_name(Intent a) {
    switch (a) {
        case Intent::AcceptOffer: return "accept_offer";
        case Intent::RejectWithReason: return "reject_with_reason";
        case Intent::DeferWithRationale: return "defer_with_rationale";
        case Intent::AskClarification: return "ask_clarification";
    }
    return "?";
}

struct UserTurn {
    Intent intent = Intent::RejectWithReason;
    std::string text;
    Outcome outcome = Outcome::Reject;
};

struct Turn {
    int index = 0;  // 1-based
    SalesTurn sales;
    UserTurn user;
};

enum class TerminalReason { None, Purchase, TurnLimit };

inline std::string terminal_reason_name(TerminalReason r) {
    switch (r) {
        case TerminalReason::None: return "none";
        case TerminalReason::Purchase: return "purchase";
        case TerminalReason::TurnLimit: return "turn_limit";
    }
    return "?";
}

struct DialogueHistory {
    std::string initial_user_message;  // u_0, does not count toward the turn limit
    std::vector<Turn> turns;
    int turn_limit = kDefaultTurnLimit;
    bool terminal = false;
    TerminalReason reason = TerminalReason::None;
};

// u_0 is rendered from the scenario needs by a fixed template.
DialogueHistory init_history(const GlobalState& state, int turn_limit = kDefaultTurnLimit);

// Appends (r_t, u_t); sets terminal on an accept outcome or on reaching the
// turn limit. Appending to a terminal history is a contract violation.
DialogueHistory append_turn(const DialogueHistory& history, const SalesTurn& sales,
                            const UserTurn& user);

} // namespace hesitator
