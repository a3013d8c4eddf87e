#pragma once

#include <stdexcept>
#include <string>

namespace drlcox {

// Raised when user-supplied input (CSV contents, CLI arguments, config
// values) violates a documented precondition. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a computation cannot proceed on otherwise valid input
// (e.g. an undefined metric). Maps to CLI exit code 1.
class ComputeError : public std::runtime_error {
public:
    explicit ComputeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace drlcox
