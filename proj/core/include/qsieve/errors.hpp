#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qsieve {

// Domain-level failure with a stable machine-readable name ("CapExceeded",
// "NotIndefinite", ...).  The CLI prints the name on stderr and exits 1;
// tests match on name() rather than on the human message.
class DomainError : public std::runtime_error {
public:
    DomainError(std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

} // namespace qsieve
