#pragma once

#include <stdexcept>
#include <string>

namespace bivcomp {

/// Argument or parameter outside the admissible domain (y <= 0, u outside (0,1), phi < 1, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input that is valid in type but carries no information (constant data, zero variance,
/// a splice weight whose two terms both underflow).
class degenerate_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or missing external input (files, columns, rows, parameter documents).
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure inside a named estimation stage ("marginal 1", "marginal 2", "copula").
class stage_error : public std::runtime_error {
public:
    stage_error(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace bivcomp
