#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qri {

// Domain error with a stable machine-readable name ("ZeroDenominator", ...)
// alongside the human-readable message. The CLI prints the name on stderr and
// maps these to exit code 1.
class Error : public std::runtime_error {
public:
    Error(std::string_view name, const std::string& message)
        : std::runtime_error(std::string(name) + ": " + message), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

}  // namespace qri
