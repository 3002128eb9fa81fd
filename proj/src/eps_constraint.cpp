#include "wadapt/eps_constraint.hpp"

#include <algorithm>
#include <cmath>

#include "wadapt/error.hpp"

namespace wadapt {

double violation_degree(double g) noexcept
{
    return std::max(0.0, g);
}

EpsilonSchedule::EpsilonSchedule(double eps0, double gc, double gmax, double lambda)
    : eps0_(eps0), gc_(gc), gmax_(gmax), lambda_(lambda)
{
    if (!(eps0 >= 0.0) || !std::isfinite(eps0))
        throw Error(Errc::invalid_parameter, "eps0 must be finite and nonnegative");
    if (!(gc > 0.0 && gc < gmax))
        throw Error(Errc::invalid_parameter, "epsilon schedule needs 0 < Gc < Gmax");
    if (eps0 > 0.0)
        cp_ = std::max(0.0, -(std::log(eps0) + lambda) / std::log(1.0 - gc / gmax));
}

double EpsilonSchedule::at(double generation) const
{
    if (generation < 0.0 || generation > gmax_)
        throw Error(Errc::invalid_parameter, "generation outside [0, Gmax]");
    if (eps0_ == 0.0 || generation > gc_)
        return 0.0;
    return eps0_ * std::pow(1.0 - generation / gmax_, cp_);
}

bool better_than(const Fitness& a, const Fitness& b, double eps) noexcept
{
    if (a.violation <= eps && b.violation <= eps)
        return a.f < b.f;
    if (a.violation == b.violation)
        return a.f < b.f;
    return a.violation < b.violation;
}

} // namespace wadapt
