#pragma once

#include <stdexcept>
#include <string>

namespace decompleak {

/// Broad failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
    InvalidConfig,
    InvalidInput,
    InsufficientData,
    IllConditioned,
    NumericOverflow,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

struct InvalidConfigError : Error {
    explicit InvalidConfigError(const std::string& w) : Error(ErrorCategory::InvalidConfig, w) {}
};
struct InvalidInputError : Error {
    explicit InvalidInputError(const std::string& w) : Error(ErrorCategory::InvalidInput, w) {}
};
struct InsufficientDataError : Error {
    explicit InsufficientDataError(const std::string& w) : Error(ErrorCategory::InsufficientData, w) {}
};
struct IllConditionedError : Error {
    explicit IllConditionedError(const std::string& w) : Error(ErrorCategory::IllConditioned, w) {}
};
struct NumericOverflowError : Error {
    explicit NumericOverflowError(const std::string& w) : Error(ErrorCategory::NumericOverflow, w) {}
};
struct IoError : Error {
    explicit IoError(const std::string& w) : Error(ErrorCategory::Io, w) {}
};

const char* to_string(ErrorCategory category) noexcept;

} // namespace decompleak
