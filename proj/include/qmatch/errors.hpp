#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qmatch {

// File could not be opened or read.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

// Malformed or semantically invalid input: bad JSON, dangling references,
// constraint grammar violations, unknown identifiers. Messages name the
// offending identifier.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& message) : std::runtime_error(message) {}
};

// Failure while evaluating a metric function: missing operand, division by zero.
class EvalError : public InputError {
public:
    explicit EvalError(const std::string& message) : InputError(message) {}
};

// Non-fatal findings collected while loading (clamped intervals, out-of-range
// derived values). Callers pass nullptr to discard them.
using Warnings = std::vector<std::string>;

}  // namespace qmatch
