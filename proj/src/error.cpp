#include "isoresolve/error.hpp"

namespace isoresolve {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::Properness: return "properness";
        case ErrorKind::Integrability: return "integrability";
        case ErrorKind::Asymptotics: return "asymptotics";
        case ErrorKind::GateRefused: return "exponent-gate";
        case ErrorKind::NotCoercive: return "coercivity";
        case ErrorKind::NonConvergence: return "non-convergence";
        case ErrorKind::NodalCollapse: return "nodal-collapse";
        case ErrorKind::NoBracket: return "no-bracket";
        case ErrorKind::Io: return "io";
        case ErrorKind::Parse: return "parse";
    }
    return "unknown";
}

}  // namespace isoresolve
