#include "wadapt/baselines.hpp"

#include <cmath>

#include "wadapt/error.hpp"

namespace wadapt {

WeightSchedule no_adaptation_schedule(const Network& net, int horizon)
{
    WeightSchedule sched(net.n(), horizon);
    for (std::size_t b = 0; b < sched.block_count(); ++b)
        sched.block(b) = net.w0();
    return sched;
}

double constant_adaptation_ratio(const Network& net, int horizon, double budget)
{
    if (horizon < 2)
        throw Error(Errc::invalid_parameter, "horizon must be >= 2");
    double s = 0.0;
    for (double w : net.w0().data())
        s += w * w;
    if (s <= 0.0)
        throw Error(Errc::infeasible_budget, "network has no weight to adapt");
    const double full = (horizon - 1) * s;
    if (budget < 0.0 || budget > full)
        throw Error(Errc::infeasible_budget, "budget outside [0, (T-1) S]");
    return 1.0 - std::sqrt(budget / full);
}

WeightSchedule constant_adaptation_schedule(const Network& net, int horizon, double budget)
{
    const double c = constant_adaptation_ratio(net, horizon, budget);
    WeightSchedule sched(net.n(), horizon);
    const int n = net.n();
    for (std::size_t b = 0; b < sched.block_count(); ++b)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                sched.block(b)(i, j) = c * net.w0()(i, j);
    return sched;
}

} // namespace wadapt
