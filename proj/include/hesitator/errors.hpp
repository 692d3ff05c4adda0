#pragma once

#include <stdexcept>
#include <string>

namespace hesitator {

// Configuration / argument problems: CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input files that fail to parse or validate.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// External provider returned something outside the protocol.
struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

// External provider unreachable / timed out.
struct PerceptionError : std::runtime_error {
    explicit PerceptionError(const std::string& msg) : std::runtime_error(msg) {}
};

// API misuse (e.g. appending to a terminal history).
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace hesitator
