#pragma once
#include <stdexcept>
#include <string>

namespace tabweave {

// Bad inputs: out-of-range parameters, malformed documents, schema violations.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Domain failures inside an otherwise valid request: cells that do not close,
// degenerate geometry, metric preconditions.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tabweave
