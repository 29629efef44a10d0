#pragma once

#include <stdexcept>
#include <string>

namespace hyperspec {

/// Input violated an operation's precondition (non-finite entry, index out of
/// range, malformed file, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A request exceeds a documented capability limit (dimension caps,
/// derivative orders, quadrature orders). `limit()` names the cap.
class CapabilityError : public std::runtime_error {
public:
    CapabilityError(std::string limit, const std::string& what)
        : std::runtime_error(what), limit_(std::move(limit)) {}

    const std::string& limit() const noexcept { return limit_; }

private:
    std::string limit_;
};

}  // namespace hyperspec
