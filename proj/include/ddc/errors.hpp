#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ddc {

/// Base of every error raised by the toolkit. `kind()` is a short stable tag
/// used as the machine-parsable prefix on the command line.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error("invalid-input", what) {}
};

class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& what) : Error("invalid-parameter", what) {}
};

/// Malformed document or file. `location` names where: "line 12" for CSV,
/// "byte 40" or a JSON pointer such as "/clusters/0" for documents.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::string location)
        : Error("parse-error", what + " (at " + location + ")"), location_(std::move(location)) {}

    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

/// A structurally valid document that breaks a model invariant.
class ValidationError : public Error {
public:
    ValidationError(std::string invariant, const std::string& what)
        : Error("validation-error", invariant + ": " + what), invariant_(std::move(invariant)) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

class UnsupportedVersion : public Error {
public:
    explicit UnsupportedVersion(long long version)
        : Error("unsupported-version", "unsupported format_version " + std::to_string(version)),
          version_(version) {}

    long long version() const noexcept { return version_; }

private:
    long long version_;
};

/// Random throw gave up before reaching the target cardinality.
class RegenerationStalled : public Error {
public:
    RegenerationStalled(std::size_t accepted, std::size_t attempts, std::size_t target)
        : Error("regeneration-stalled",
                "accepted " + std::to_string(accepted) + " of " + std::to_string(target) +
                    " points in " + std::to_string(attempts) + " attempts (acceptance rate " +
                    std::to_string(attempts ? double(accepted) / double(attempts) : 0.0) + ")"),
          accepted_(accepted), attempts_(attempts) {}

    std::size_t accepted() const noexcept { return accepted_; }
    std::size_t attempts() const noexcept { return attempts_; }
    double acceptance_rate() const noexcept {
        return attempts_ ? double(accepted_) / double(attempts_) : 0.0;
    }

private:
    std::size_t accepted_;
    std::size_t attempts_;
};

/// Failure inside one simulated node, attributed to that node.
class NodeError : public Error {
public:
    NodeError(int node_id, const std::string& what)
        : Error("node-error", "node " + std::to_string(node_id) + ": " + what), node_id_(node_id) {}

    int node_id() const noexcept { return node_id_; }

private:
    int node_id_;
};

}  // namespace ddc
