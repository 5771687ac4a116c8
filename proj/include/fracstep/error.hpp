#pragma once

#include <stdexcept>
#include <string>

namespace fracstep {

enum class Errc {
    invalid_parameter,
    singular_order,
    invalid_weight,
    insufficient_weights,
    numerical_breakdown,
    not_dominant,
    positivity_violation,
    reflection_pole,
    invalid_spec,
    singular_matrix,
};

const char* to_string(Errc code) noexcept;

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace fracstep
