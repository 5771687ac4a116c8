#include "fracstep/error.hpp"

namespace fracstep {

const char* to_string(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_parameter: return "invalid parameter";
    case Errc::singular_order: return "singular order";
    case Errc::invalid_weight: return "invalid weight";
    case Errc::insufficient_weights: return "insufficient weights";
    case Errc::numerical_breakdown: return "numerical breakdown";
    case Errc::not_dominant: return "not diagonally dominant";
    case Errc::positivity_violation: return "positivity violation";
    case Errc::reflection_pole: return "reflection pole";
    case Errc::invalid_spec: return "invalid problem";
    case Errc::singular_matrix: return "singular matrix";
    }
    return "unknown error";
}

} // namespace fracstep
