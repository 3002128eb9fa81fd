#include "wadapt/error.hpp"

namespace wadapt {

const char* to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::invalid_parameter: return "invalid parameter";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::integration_failure: return "integration failure";
    case Errc::non_convergence: return "non-convergence";
    case Errc::infeasible_budget: return "infeasible budget";
    case Errc::off_grid: return "off-grid instant";
    case Errc::empty_sample: return "empty sample";
    case Errc::config: return "configuration error";
    case Errc::io: return "i/o error";
    }
    return "unknown error";
}

} // namespace wadapt
