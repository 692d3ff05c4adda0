#pragma once

#include <string>

#include "hesitator/engine.hpp"

// Optional text-generation backend for perception and response synthesis.
// Disabled by default; the engine runs fully offline on the rule-based and
// template providers.
//
// Protocol: POST <endpoint path> with JSON {"prompt": "..."} and an optional
// bearer key; the service replies {"text": "..."}. Perception prompts ask for
// five intensity levels, returned as integers in a fixed order.
//
// Environment: HESITATOR_LLM_ENDPOINT (http://host:port/path),
// HESITATOR_LLM_KEY (optional).

namespace hesitator {

struct ExternalClientConfig {
    std::string endpoint;  // http://host:port/path
    std::string api_key;
    int timeout_ms = 10000;
    int retries = 1;

    // Reads HESITATOR_LLM_ENDPOINT / HESITATOR_LLM_KEY; throws ConfigError
    // when the endpoint is unset.
    static ExternalClientConfig from_environment();
};

class ExternalTextClient final : public PerceptionProvider, public ResponseProvider {
public:
    explicit ExternalTextClient(ExternalClientConfig config);

    // single prompt -> single completion; PerceptionError on transport
    // failure after retries
    std::string complete(const std::string& prompt) const;

    LeafScores perceive(const SalesTurn& sales,
                        const std::vector<ItemView>& items) const override;

    Intent choose_action(const GlobalState& state, const DialogueHistory& history,
                         const Decision& decision) const override;
    std::string synthesize(const GlobalState& state, const DialogueHistory& history,
                           const Decision& decision, Intent intent) const override;

private:
    ExternalClientConfig config_;
    std::string host_;
    int port_ = 80;
    std::string path_ = "/";
};

} // namespace hesitator
