#pragma once

#include <stdexcept>
#include <string>

namespace pfk {

// Bad user input: wrong dimensions, too-short series, malformed files.
// The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Gram-Schmidt breakdown: the Krylov columns are numerically dependent.
// Carries the failing column so callers can report it (and reduce S).
// The CLI maps this to exit code 2.
class QrBreakdownError : public std::runtime_error {
public:
    QrBreakdownError(int column, const std::string& what)
        : std::runtime_error(what), column_(column) {}
    int column() const { return column_; }

private:
    int column_;
};

// Ltilde is singular to working precision for the chosen shift.
// The CLI maps this to exit code 2.
class IllConditionedError : public std::runtime_error {
public:
    IllConditionedError(double cond, const std::string& what)
        : std::runtime_error(what), cond_(cond) {}
    double condition_number() const { return cond_; }

private:
    double cond_;
};

}  // namespace pfk
