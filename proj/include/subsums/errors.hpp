#pragma once

#include <stdexcept>
#include <string>

namespace subsums {

// Model or input rejected (structural violations, malformed files,
// unmet operation preconditions that stem from the input).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Operation not available for this model (e.g. integer-offset atom
// tables requested for non-integer digits).
class unsupported_error : public std::runtime_error {
public:
    explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

// Projected work exceeds the configured entry cap.
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// A proven internal invariant failed at runtime. Always a bug.
class invariant_error : public std::logic_error {
public:
    explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace subsums
