#include "hesitator/engine.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace hesitator {

using nlohmann::json;

void SalesAgentConfig::validate(const AttributeSchema& schema) const {
    if (assortment_size < 1) throw ConfigError("sales agent: assortment_size must be >= 1");
    if (attrs_shown < 1) throw ConfigError("sales agent: attrs_shown must be >= 1");
    if (static_cast<size_t>(attrs_shown) > schema.size())
        throw ConfigError("sales agent: attrs_shown exceeds the schema");
}

namespace {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        if (std::isalnum(static_cast<unsigned char>(ch))) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

int token_overlap(const std::set<std::string>& needs, const std::string& text) {
    int overlap = 0;
    std::set<std::string> seen;
    for (const auto& tok : tokenize(text))
        if (needs.count(tok) && seen.insert(tok).second) ++overlap;
    return overlap;
}

double mean_normalized(const Item& item, const AttributeSchema& schema) {
    const auto a = normalize(item, schema);
    return a.empty() ? 0.0 : std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
}

std::string format_price(double price) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "$%.2f", price);
    return buf;
}

std::string render_sales_text(const Catalog& catalog, const std::vector<std::string>& ids,
                              const std::vector<std::string>& shown, Presentation presentation) {
    std::ostringstream out;
    switch (presentation) {
        case Presentation::Tabular: {
            out << "Here are " << ids.size() << " options. ";
            for (size_t i = 0; i < ids.size(); ++i) {
                const Item* item = catalog.find(ids[i]);
                if (i) out << " | ";
                out << item->title << " (" << format_price(item->price);
                for (const auto& name : shown) {
                    auto it = item->attributes.find(name);
                    if (it != item->attributes.end()) {
                        char buf[64];
                        std::snprintf(buf, sizeof(buf), ", %s=%.2f", name.c_str(), it->second);
                        out << buf;
                    }
                }
                out << ")";
            }
            break;
        }
        case Presentation::Mixed: {
            out << "I have a few ideas for you. ";
            for (size_t i = 0; i < ids.size(); ++i) {
                const Item* item = catalog.find(ids[i]);
                out << item->title << " at " << format_price(item->price);
                if (!shown.empty()) {
                    auto it = item->attributes.find(shown.front());
                    if (it != item->attributes.end())
                        out << " (notable " << shown.front() << ": " << it->second << ")";
                }
                out << (i + 1 < ids.size() ? "; " : ".");
            }
            break;
        }
        case Presentation::FreeText: {
            out << "So, where do I start. ";
            for (size_t i = 0; i < ids.size(); ++i) {
                const Item* item = catalog.find(ids[i]);
                out << "There's the " << item->title << ", costs about " << item->price
                    << " give or take";
                for (size_t k = 0; k < shown.size() && k < 3; ++k) {
                    auto it = item->attributes.find(shown[k]);
                    if (it != item->attributes.end())
                        out << ", " << shown[k] << " rated " << it->second * 100.0 << " percent";
                }
                out << ". ";
            }
            break;
        }
    }
    return out.str();
}

} // namespace

SalesTurn scripted_sales_agent(const SalesAgentConfig& config, const VisibleProfile& visible,
                               const DialogueHistory& history, const Catalog& catalog, Rng& rng) {
    (void)visible;  // observable traits; current policies do not condition on them
    (void)rng;      // policies below are rank-deterministic
    config.validate(catalog.schema);
    const size_t want = static_cast<size_t>(config.assortment_size);
    if (catalog.items.size() < want)
        throw ConfigError("sales agent: catalog smaller than the assortment size");

    std::unordered_set<std::string> shown_before, barred;
    for (const auto& turn : history.turns) {
        for (const auto& id : turn.sales.item_ids) {
            shown_before.insert(id);
            if (turn.user.outcome == Outcome::Reject) barred.insert(id);
        }
    }

    // ranking: needs-overlap (relevance) or catalog quality order
    std::vector<size_t> rank(catalog.items.size());
    std::iota(rank.begin(), rank.end(), 0);
    if (config.relevance) {
        std::set<std::string> needs;
        for (const auto& tok : tokenize(history.initial_user_message)) needs.insert(tok);
        std::vector<int> overlap(catalog.items.size());
        for (size_t i = 0; i < catalog.items.size(); ++i)
            overlap[i] = token_overlap(
                needs, catalog.items[i].title + " " + catalog.items[i].category);
        std::stable_sort(rank.begin(), rank.end(), [&](size_t a, size_t b) {
            if (overlap[a] != overlap[b]) return overlap[a] > overlap[b];
            return catalog.items[a].id < catalog.items[b].id;
        });
    } else {
        std::vector<double> quality(catalog.items.size());
        for (size_t i = 0; i < catalog.items.size(); ++i)
            quality[i] = mean_normalized(catalog.items[i], catalog.schema);
        std::stable_sort(rank.begin(), rank.end(), [&](size_t a, size_t b) {
            if (quality[a] != quality[b]) return quality[a] > quality[b];
            return catalog.items[a].id < catalog.items[b].id;
        });
    }

    std::vector<std::string> picked;

    // persuasive-lite: after a deferral, anchor on the item the user named
    if (config.mode == SalesMode::PersuasiveLite && !history.turns.empty()) {
        const Turn& last = history.turns.back();
        if (last.user.outcome == Outcome::Defer) {
            std::string anchor_id;
            for (const auto& id : last.sales.item_ids) {
                const Item* item = catalog.find(id);
                if (item && last.user.text.find(item->title) != std::string::npos) {
                    anchor_id = id;
                    break;
                }
            }
            if (anchor_id.empty()) anchor_id = last.sales.item_ids.front();
            const Item* anchor = catalog.find(anchor_id);
            if (anchor) {
                picked.push_back(anchor_id);
                const auto anchor_vec = normalize(*anchor, catalog.schema);
                std::vector<size_t> near(catalog.items.size());
                std::iota(near.begin(), near.end(), 0);
                std::vector<double> dist(catalog.items.size());
                for (size_t i = 0; i < catalog.items.size(); ++i) {
                    const auto v = normalize(catalog.items[i], catalog.schema);
                    double d2 = 0.0;
                    for (size_t j = 0; j < v.size(); ++j) {
                        const double d = v[j] - anchor_vec[j];
                        d2 += d * d;
                    }
                    dist[i] = d2;
                }
                std::stable_sort(near.begin(), near.end(), [&](size_t a, size_t b) {
                    if (dist[a] != dist[b]) return dist[a] < dist[b];
                    return catalog.items[a].id < catalog.items[b].id;
                });
                for (size_t i : near) {
                    if (picked.size() >= want) break;
                    const std::string& id = catalog.items[i].id;
                    if (id == anchor_id) continue;
                    picked.push_back(id);
                }
            }
        }
    }

    if (picked.size() < want) {
        // fresh, never-barred items in rank order
        for (size_t i : rank) {
            if (picked.size() >= want) break;
            const std::string& id = catalog.items[i].id;
            if (shown_before.count(id) || barred.count(id)) continue;
            if (std::find(picked.begin(), picked.end(), id) != picked.end()) continue;
            picked.push_back(id);
        }
        // pool exhausted: fall back to previously shown non-barred, then anything
        for (int pass = 0; pass < 2 && picked.size() < want; ++pass) {
            for (size_t i : rank) {
                if (picked.size() >= want) break;
                const std::string& id = catalog.items[i].id;
                if (pass == 0 && barred.count(id)) continue;
                if (std::find(picked.begin(), picked.end(), id) != picked.end()) continue;
                picked.push_back(id);
            }
        }
    }

    SalesTurn turn;
    turn.item_ids = std::move(picked);
    for (const auto& id : turn.item_ids) turn.item_titles.push_back(catalog.find(id)->title);
    turn.presentation = config.presentation;
    for (int j = 0; j < config.attrs_shown; ++j)
        turn.shown_attributes.push_back(catalog.schema.attributes[static_cast<size_t>(j)].name);
    turn.rendered_text =
        render_sales_text(catalog, turn.item_ids, turn.shown_attributes, turn.presentation);
    return turn;
}

std::vector<ItemView> build_item_views(const SalesTurn& sales, const Catalog& catalog) {
    std::vector<ItemView> views;
    views.reserve(sales.item_ids.size());
    for (const auto& id : sales.item_ids) {
        const Item* item = catalog.find(id);
        if (!item) throw ContractViolation("build_item_views: unknown item '" + id + "'");
        const auto full = normalize(*item, catalog.schema);
        ItemView view;
        view.id = id;
        view.price = item->price;
        for (const auto& name : sales.shown_attributes) {
            const int j = catalog.schema.index_of(name);
            if (j < 0) throw ContractViolation("build_item_views: unknown attribute '" + name + "'");
            view.attributes.push_back(full[static_cast<size_t>(j)]);
            auto it = item->attributes.find(name);
            if (it != item->attributes.end()) view.raw_attributes[name] = it->second;
        }
        views.push_back(std::move(view));
    }
    return views;
}

WeightVector restrict_weights(const WeightVector& weights, const AttributeSchema& schema,
                              const std::vector<std::string>& shown_attributes) {
    if (weights.size() != schema.size())
        throw ConfigError("restrict_weights: weights not aligned to the schema");
    WeightVector out;
    out.weights.reserve(shown_attributes.size());
    double mass = 0.0;
    for (const auto& name : shown_attributes) {
        const int j = schema.index_of(name);
        if (j < 0) throw ConfigError("restrict_weights: unknown attribute '" + name + "'");
        const double w = weights.weights[static_cast<size_t>(j)];
        out.weights.push_back(w);
        mass += w;
    }
    if (mass > 1e-12) {
        for (auto& w : out.weights) w /= mass;
    } else if (!out.weights.empty()) {
        // nothing the user cares about is visible; weigh evenly
        std::fill(out.weights.begin(), out.weights.end(),
                  1.0 / static_cast<double>(out.weights.size()));
    }
    return out;
}

Decision user_decide(const SalesTurn& sales, const GlobalState& state, const WeightVector& weights,
                     const ConstraintSet& constraints, const Catalog& catalog,
                     const SelectionParams& sel_params, const CalibrationTable& calibration,
                     const HesitationParams& hes_params, const PerceptionProvider& perception,
                     Rng& rng, SelectionVariant variant) {
    const auto views = build_item_views(sales, catalog);
    const WeightVector shown_weights =
        restrict_weights(weights, catalog.schema, sales.shown_attributes);

    Decision decision;
    decision.selection =
        variant == SelectionVariant::Structured
            ? select(views, constraints, shown_weights, state.persona.pickiness, sel_params)
            : flat_rating_select(views, state.persona.pickiness, sel_params);
    if (decision.selection.best_item) {
        if (const Item* best = catalog.find(*decision.selection.best_item))
            decision.best_item_title = best->title;
    }
    if (!decision.selection.proceed) {
        decision.outcome = Outcome::Reject;
        return decision;
    }
    decision.hesitation = evaluate_hesitation(sales, views, state, perception, calibration,
                                              hes_params, rng);
    decision.outcome = decision.hesitation->purchase ? Outcome::Accept : Outcome::Defer;
    return decision;
}

namespace {

Intent template_intent(const Decision& decision, int openness) {
    switch (decision.outcome) {
        case Outcome::Accept:
            return Intent::AcceptOffer;
        case Outcome::Defer:
            return Intent::DeferWithRationale;
        case Outcome::Reject:
            if (decision.selection.reject_reason == RejectReason::BelowThreshold && openness == 3)
                return Intent::AskClarification;
            return Intent::RejectWithReason;
    }
    return Intent::RejectWithReason;
}

bool intent_consistent(Outcome outcome, Intent intent) {
    switch (outcome) {
        case Outcome::Accept: return intent == Intent::AcceptOffer;
        case Outcome::Defer: return intent == Intent::DeferWithRationale;
        case Outcome::Reject:
            return intent == Intent::RejectWithReason || intent == Intent::AskClarification;
    }
    return false;
}

std::string item_label(const Decision& decision, const std::string& id) {
    return decision.best_item_title.empty() ? id : decision.best_item_title;
}

std::string overload_phrase(const HesitationOutcome& h) {
    if (h.leaves.assortment >= 3) return "there are too many similar options to weigh right now";
    if (h.leaves.attribute_count >= 3) return "that is a lot of detail to compare in one go";
    if (h.leaves.format_complexity >= 3) return "the way this is laid out makes it hard to compare";
    if (h.leaves.time_pressure >= 3) return "I am short on time and do not want to rush this";
    if (h.leaves.dominance >= 3 || h.leaves.alignability >= 3)
        return "the trade-offs between these are hard to settle";
    return "I want to sit with it a little longer";
}

} // namespace

Intent select_action(const GlobalState& state, const DialogueHistory& history,
                     const Decision& decision, const ResponseProvider& provider) {
    const Intent intent = provider.choose_action(state, history, decision);
    if (!intent_consistent(decision.outcome, intent))
        throw ProtocolError("select_action: intent '" + intent_name(intent) +
                            "' inconsistent with outcome '" + outcome_name(decision.outcome) + "'");
    return intent;
}

std::string synthesize_response(const GlobalState& state, const DialogueHistory& history,
                                const Decision& decision, Intent intent,
                                const ResponseProvider& provider) {
    return provider.synthesize(state, history, decision, intent);
}

Intent TemplateResponder::choose_action(const GlobalState& state, const DialogueHistory&,
                                        const Decision& decision) const {
    return template_intent(decision, state.persona.openness);
}

std::string TemplateResponder::synthesize(const GlobalState& state, const DialogueHistory&,
                                          const Decision& decision, Intent intent) const {
    const int openness = state.persona.openness;
    std::ostringstream out;
    switch (intent) {
        case Intent::AcceptOffer: {
            const std::string id = decision.selection.best_item.value_or("that one");
            out << "I'll take " << item_label(decision, id) << ".";
            if (openness >= 2) out << " It covers what I was after.";
            break;
        }
        case Intent::RejectWithReason: {
            if (decision.selection.reject_reason == RejectReason::NoCandidates) {
                std::string why = "none of these meet my requirements";
                for (const auto& e : decision.selection.trace.eliminated) {
                    if (e.reason.rfind("price", 0) == 0) {
                        char buf[64];
                        std::snprintf(buf, sizeof(buf), "%.2f", state.scenario.budget);
                        why = "these run past my budget of $" + std::string(buf);
                        break;
                    }
                }
                if (why == "none of these meet my requirements" &&
                    !decision.selection.trace.eliminated.empty())
                    why = "they fail what I need (" +
                          decision.selection.trace.eliminated.front().reason + ")";
                out << "No, " << why << ".";
            } else {
                out << "I'm not sold on these; nothing stands out enough for me.";
                if (openness >= 2) out << " Maybe something different?";
            }
            break;
        }
        case Intent::AskClarification: {
            out << "Hmm, nothing quite stands out. Can you tell me more about how these differ?";
            break;
        }
        case Intent::DeferWithRationale: {
            const std::string id = decision.selection.best_item.value_or("");
            if (!id.empty()) out << item_label(decision, id) << " looks promising, but ";
            else out << "I can't commit yet; ";
            out << overload_phrase(*decision.hesitation) << ". Let me think on it.";
            break;
        }
    }
    return out.str();
}

SessionResult run_session(const GlobalState& state, const WeightVector& weights,
                          const ConstraintSet& constraints, const Catalog& catalog,
                          const SessionConfig& config, const Providers& providers, uint64_t seed) {
    if (config.turn_limit < 1) throw ConfigError("run_session: turn limit must be >= 1");
    config.sales.validate(catalog.schema);
    config.selection.validate();
    config.hesitation.validate();
    config.calibration.validate();

    static const RuleBasedPerception default_perception;
    static const TemplateResponder default_responder;
    const PerceptionProvider& perception =
        providers.perception ? *providers.perception : default_perception;
    const ResponseProvider& responder =
        providers.response ? *providers.response : default_responder;

    Rng agent_rng(split_seed(seed, 1));
    Rng epsilon_rng(split_seed(seed, 2));

    const VisibleProfile visible{state.persona.openness, state.persona.pickiness};

    SessionResult result;
    result.history = init_history(state, config.turn_limit);

    while (!result.history.terminal) {
        const SalesTurn sales =
            scripted_sales_agent(config.sales, visible, result.history, catalog, agent_rng);
        const Decision decision =
            user_decide(sales, state, weights, constraints, catalog, config.selection,
                        config.calibration, config.hesitation, perception, epsilon_rng,
                        config.variant);
        const Intent intent = select_action(state, result.history, decision, responder);
        UserTurn user;
        user.intent = intent;
        user.outcome = decision.outcome;
        user.text = synthesize_response(state, result.history, decision, intent, responder);
        result.history = append_turn(result.history, sales, user);
        result.decisions.push_back(decision);
        if (decision.outcome == Outcome::Accept)
            result.purchased_item = decision.selection.best_item.value_or("");
    }

    result.purchased = result.history.reason == TerminalReason::Purchase;
    result.terminal_turn = static_cast<int>(result.history.turns.size());
    result.reason = result.history.reason;
    return result;
}

void write_transcript(std::ostream& out, const SessionResult& result) {
    json opening{{"turn", 0},
                 {"sales_items", json::array()},
                 {"sales_text", ""},
                 {"user_action", "initiate"},
                 {"user_text", result.history.initial_user_message},
                 {"outcome", nullptr},
                 {"p_accept", nullptr},
                 {"d_total", nullptr}};
    out << opening.dump() << "\n";

    for (size_t t = 0; t < result.history.turns.size(); ++t) {
        const Turn& turn = result.history.turns[t];
        const Decision& decision = result.decisions[t];
        json rec{{"turn", turn.index},
                 {"sales_items", turn.sales.item_ids},
                 {"sales_text", turn.sales.rendered_text},
                 {"user_action", intent_name(turn.user.intent)},
                 {"user_text", turn.user.text},
                 {"outcome", outcome_name(turn.user.outcome)}};
        if (decision.hesitation) {
            rec["p_accept"] = decision.hesitation->p_accept;
            rec["d_total"] = decision.hesitation->d_total;
            rec["epsilon"] = decision.hesitation->epsilon;
            rec["leaves"] = {{"assortment", decision.hesitation->leaves.assortment},
                             {"dominance", decision.hesitation->leaves.dominance},
                             {"alignability", decision.hesitation->leaves.alignability},
                             {"attribute_count", decision.hesitation->leaves.attribute_count},
                             {"format_complexity", decision.hesitation->leaves.format_complexity},
                             {"time_pressure", decision.hesitation->leaves.time_pressure},
                             {"uncertainty", decision.hesitation->leaves.uncertainty}};
        } else {
            rec["p_accept"] = nullptr;
            rec["d_total"] = nullptr;
        }
        json selection{{"retained", decision.selection.trace.retained}};
        if (decision.selection.best_item) selection["best_item"] = *decision.selection.best_item;
        if (decision.selection.best_utility)
            selection["best_utility"] = *decision.selection.best_utility;
        if (decision.selection.reject_reason)
            selection["reject_reason"] = reject_reason_name(*decision.selection.reject_reason);
        json eliminated = json::array();
        for (const auto& e : decision.selection.trace.eliminated)
            eliminated.push_back({{"item", e.item_id}, {"reason", e.reason}});
        selection["eliminated"] = eliminated;
        rec["selection"] = selection;
        out << rec.dump() << "\n";
    }
}

} // namespace hesitator
