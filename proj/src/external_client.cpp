#include "hesitator/external_client.hpp"

#include <cstdlib>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace hesitator {

using nlohmann::json;

ExternalClientConfig ExternalClientConfig::from_environment() {
    ExternalClientConfig config;
    const char* endpoint = std::getenv("HESITATOR_LLM_ENDPOINT");
    if (!endpoint || !*endpoint)
        throw ConfigError(
            "external provider selected but HESITATOR_LLM_ENDPOINT is not set; "
            "export HESITATOR_LLM_ENDPOINT=http://host:port/path or use --provider rule");
    config.endpoint = endpoint;
    if (const char* key = std::getenv("HESITATOR_LLM_KEY")) config.api_key = key;
    return config;
}

ExternalTextClient::ExternalTextClient(ExternalClientConfig config) : config_(std::move(config)) {
    std::string url = config_.endpoint;
    const std::string http = "http://";
    const std::string https = "https://";
    if (url.rfind(https, 0) == 0)
        throw ConfigError("external provider: https endpoints are not supported, use http");
    if (url.rfind(http, 0) != 0)
        throw ConfigError("external provider: endpoint must start with http://");
    url = url.substr(http.size());
    const auto slash = url.find('/');
    std::string hostport = slash == std::string::npos ? url : url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : url.substr(slash);
    const auto colon = hostport.find(':');
    if (colon == std::string::npos) {
        host_ = hostport;
        port_ = 80;
    } else {
        host_ = hostport.substr(0, colon);
        port_ = std::stoi(hostport.substr(colon + 1));
    }
    if (host_.empty()) throw ConfigError("external provider: endpoint host missing");
}

std::string ExternalTextClient::complete(const std::string& prompt) const {
    json body{{"prompt", prompt}};
    std::string last_error;
    for (int attempt = 0; attempt <= config_.retries; ++attempt) {
        httplib::Client client(host_, port_);
        client.set_connection_timeout(config_.timeout_ms / 1000,
                                      (config_.timeout_ms % 1000) * 1000);
        client.set_read_timeout(config_.timeout_ms / 1000, (config_.timeout_ms % 1000) * 1000);
        httplib::Headers headers;
        if (!config_.api_key.empty())
            headers.emplace("Authorization", "Bearer " + config_.api_key);
        auto res = client.Post(path_.c_str(), headers, body.dump(), "application/json");
        if (!res) {
            last_error = "no response from " + host_ + ":" + std::to_string(port_);
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        try {
            json doc = json::parse(res->body);
            return doc.at("text").get<std::string>();
        } catch (const std::exception& e) {
            throw ProtocolError(std::string("external provider: malformed reply: ") + e.what());
        }
    }
    throw PerceptionError("external provider unreachable: " + last_error);
}

namespace {

std::string describe_offer(const SalesTurn& sales, const std::vector<ItemView>& items) {
    std::ostringstream out;
    out << sales.item_ids.size() << " items, " << sales.shown_attribute_count()
        << " attributes each, presented as " << presentation_name(sales.presentation) << ".\n";
    for (const auto& item : items) {
        out << item.id << ":";
        for (const auto& [name, value] : item.raw_attributes) out << " " << name << "=" << value;
        out << " price=" << item.price << "\n";
    }
    return out.str();
}

} // namespace

LeafScores ExternalTextClient::perceive(const SalesTurn& sales,
                                        const std::vector<ItemView>& items) const {
    std::ostringstream prompt;
    prompt << "Rate the following recommendation message on five dimensions, each an integer "
              "from 1 (low) to 3 (high): assortment size, dominance structure, alignability, "
              "attribute volume, format complexity. Reply with exactly five integers separated "
              "by spaces.\n\n"
           << describe_offer(sales, items);
    const std::string reply = complete(prompt.str());

    std::vector<int> levels;
    std::istringstream in(reply);
    std::string token;
    while (in >> token && levels.size() < 5) {
        try {
            levels.push_back(std::stoi(token));
        } catch (...) {
            // skip non-numeric tokens
        }
    }
    if (levels.size() != 5)
        throw ProtocolError("external provider: expected five integer levels, got '" + reply + "'");
    LeafScores leaves;
    leaves.assortment = levels[0];
    leaves.dominance = levels[1];
    leaves.alignability = levels[2];
    leaves.attribute_count = levels[3];
    leaves.format_complexity = levels[4];
    for (int v : {leaves.assortment, leaves.dominance, leaves.alignability, leaves.attribute_count,
                  leaves.format_complexity}) {
        if (!valid_level(v))
            throw ProtocolError("external provider: level outside {1,2,3} in '" + reply + "'");
    }
    return leaves;
}

Intent ExternalTextClient::choose_action(const GlobalState&, const DialogueHistory&,
                                         const Decision& decision) const {
    std::ostringstream prompt;
    prompt << "A shopper just decided to " << outcome_name(decision.outcome)
           << " a recommendation. Choose one communicative intent from: accept_offer, "
              "reject_with_reason, defer_with_rationale, ask_clarification. Reply with the "
              "intent name only.";
    const std::string reply = complete(prompt.str());
    for (Intent intent : {Intent::AcceptOffer, Intent::RejectWithReason,
                          Intent::DeferWithRationale, Intent::AskClarification}) {
        if (reply.find(intent_name(intent)) != std::string::npos) return intent;
    }
    throw ProtocolError("external provider: unknown intent '" + reply + "'");
}

std::string ExternalTextClient::synthesize(const GlobalState&, const DialogueHistory&,
                                           const Decision& decision, Intent intent) const {
    std::ostringstream prompt;
    prompt << "Write one short shopper message with intent " << intent_name(intent)
           << " after deciding to " << outcome_name(decision.outcome);
    if (decision.selection.best_item) prompt << " about item " << *decision.selection.best_item;
    prompt << ". Mention no other products.";
    return complete(prompt.str());
}

} // namespace hesitator
