#pragma once

#include <stdexcept>
#include <string>

namespace isoresolve {

enum class ErrorKind {
    InvalidArgument,
    Properness,      // a focal submanifold has codimension < 2
    Integrability,   // a singular integral diverges
    Asymptotics,     // profile fails the endpoint mean-curvature laws
    GateRefused,     // exponent q outside the admissible window
    NotCoercive,     // Δ + K is not coercive on invariant functions
    NonConvergence,  // iteration limit or line-search stagnation
    NodalCollapse,   // sign-changing iteration lost its nodal structure
    NoBracket,       // shooting defect does not change sign on the bracket
    Io,
    Parse,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace isoresolve
