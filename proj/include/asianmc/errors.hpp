#pragma once

#include <stdexcept>
#include <string>

namespace asianmc {

/// Raised when an argument lies outside the domain of an operation
/// (a <= 0, negative time, zero step count, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a Monte Carlo functional produces a non-finite value.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, long long path_index = -1)
        : std::runtime_error(what), path_index_(path_index) {}

    long long path_index() const noexcept { return path_index_; }

private:
    long long path_index_;
};

}  // namespace asianmc
