#pragma once

#include <stdexcept>
#include <string>

namespace fhk {

// Failure classes surfaced by the library. Each maps to a CLI exit code in
// tools/fhk.cpp; library code throws, it never exits.
enum class ErrorCode {
    POLE_AT_NONPOSITIVE_INTEGER,  // gamma/digamma evaluated at 0, -1, -2, ...
    OUT_OF_DOMAIN,                // argument outside the function's domain
    NO_CONVERGENCE,               // series or iteration hit its cap
    OPTIMIZER_STALL,              // dual-norm ascent failed to agree across restarts
    GRADIENT_TOO_SMALL,           // norm gradient requested where |xi| ~ 0
    ORIGIN_SINGULARITY,           // extremal solution evaluated at the origin
    PARAM_OUT_OF_RANGE,           // (N, beta, alpha) outside the admissible set
    DEGENERATE_CONE,              // cone coefficient A vanished: profile undefined
    QUADRATURE_NOT_CONVERGED,     // refinement failed to stabilize the integral
    ZERO_BOUNDARY_TRACE,          // Rayleigh quotient with vanishing denominator
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::POLE_AT_NONPOSITIVE_INTEGER: return "POLE_AT_NONPOSITIVE_INTEGER";
        case ErrorCode::OUT_OF_DOMAIN:               return "OUT_OF_DOMAIN";
        case ErrorCode::NO_CONVERGENCE:              return "NO_CONVERGENCE";
        case ErrorCode::OPTIMIZER_STALL:             return "OPTIMIZER_STALL";
        case ErrorCode::GRADIENT_TOO_SMALL:          return "GRADIENT_TOO_SMALL";
        case ErrorCode::ORIGIN_SINGULARITY:          return "ORIGIN_SINGULARITY";
        case ErrorCode::PARAM_OUT_OF_RANGE:          return "PARAM_OUT_OF_RANGE";
        case ErrorCode::DEGENERATE_CONE:             return "DEGENERATE_CONE";
        case ErrorCode::QUADRATURE_NOT_CONVERGED:    return "QUADRATURE_NOT_CONVERGED";
        case ErrorCode::ZERO_BOUNDARY_TRACE:         return "ZERO_BOUNDARY_TRACE";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace fhk
