#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nkbif {

enum class ErrorKind {
    InvalidArgument,
    ConvergenceFailure,
    NoUniqueSolution,
    SingularSystem,
    Uncontrollable,
    PoleError,
    NoAnchor,
    AnchorUnavailable,
    OutOfScope,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::ConvergenceFailure: return "convergence-failure";
        case ErrorKind::NoUniqueSolution: return "no-unique-solution";
        case ErrorKind::SingularSystem: return "singular-system";
        case ErrorKind::Uncontrollable: return "uncontrollable";
        case ErrorKind::PoleError: return "pole-error";
        case ErrorKind::NoAnchor: return "no-anchor";
        case ErrorKind::AnchorUnavailable: return "anchor-unavailable";
        case ErrorKind::OutOfScope: return "out-of-scope";
    }
    return "unknown";
}

/// Every failure raised by the library. `kind()` says which contract was broken;
/// `residual()` is only meaningful for ConvergenceFailure.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, double residual = 0.0)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what),
          kind_(kind),
          residual_(residual) {}

    ErrorKind kind() const noexcept { return kind_; }
    double residual() const noexcept { return residual_; }

    /// Invalid input vs. a numerical breakdown; the CLI maps these to exit codes 2 and 3.
    bool is_input_error() const noexcept {
        return kind_ == ErrorKind::InvalidArgument || kind_ == ErrorKind::Uncontrollable ||
               kind_ == ErrorKind::OutOfScope;
    }

private:
    ErrorKind kind_;
    double residual_;
};

}  // namespace nkbif
