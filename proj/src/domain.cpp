#include "hesitator/domain.hpp"

namespace hesitator {

DialogueHistory init_history(const GlobalState& state, int turn_limit) {
    if (!state.valid()) throw ContractViolation("init_history: invalid global state");
    if (turn_limit < 1) throw ConfigError("init_history: turn limit must be >= 1");
    DialogueHistory h;
    h.initial_user_message = "Hi, I'm shopping today. " + state.scenario.needs_text;
    h.turn_limit = turn_limit;
    h.terminal = false;
    h.reason = TerminalReason::None;
    return h;
}

DialogueHistory append_turn(const DialogueHistory& history, const SalesTurn& sales,
                            const UserTurn& user) {
    if (history.terminal) throw ContractViolation("append_turn: history already terminal");
    if (static_cast<int>(history.turns.size()) >= history.turn_limit)
        throw ContractViolation("append_turn: turn limit already reached");

    DialogueHistory next = history;
    Turn turn;
    turn.index = static_cast<int>(history.turns.size()) + 1;
    turn.sales = sales;
    turn.user = user;
    next.turns.push_back(std::move(turn));

    if (user.outcome == Outcome::Accept) {
        next.terminal = true;
        next.reason = TerminalReason::Purchase;
    } else if (static_cast<int>(next.turns.size()) >= next.turn_limit) {
        next.terminal = true;
        next.reason = TerminalReason::TurnLimit;
    }
    return next;
}

} // namespace hesitator
