#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cryptoherm {

/// Numerical failure of a solver or a consistency check (degenerate spectrum,
/// complex eigenvalue pair, indefinite metric, failed residual gate, ...).
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A recurrence divisor vanished, so the forward sweep cannot continue.
/// Carries the 0-based array index of the offending element; the message
/// names the array it belongs to.
class breakdown_error : public numeric_error {
public:
    breakdown_error(const std::string& what, std::size_t index)
        : numeric_error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

} // namespace cryptoherm
