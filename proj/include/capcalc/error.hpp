#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace capcalc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (bad JSON, wrong types, unknown keys).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input parsed but broke a model invariant. Carries every violation found.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// A referenced agent, state, capability, procedure, strategy or option does not exist.
class NameError : public Error {
public:
    using Error::Error;
};

/// Inputs are well-formed and resolve, but the operation is undefined for them.
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace capcalc
