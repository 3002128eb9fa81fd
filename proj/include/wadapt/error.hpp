#pragma once

#include <stdexcept>
#include <string>

namespace wadapt {

enum class Errc {
    invalid_parameter,
    dimension_mismatch,
    integration_failure,
    non_convergence,
    infeasible_budget,
    off_grid,
    empty_sample,
    config,
    io,
};

const char* to_string(Errc code) noexcept;

/// Single exception type for the library; `code()` tells callers (the CLI in
/// particular) which family of failure occurred.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace wadapt
