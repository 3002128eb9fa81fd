#pragma once

#include "wadapt/dynamics.hpp"
#include "wadapt/graph.hpp"

namespace wadapt {

/// Every block equals the initial weights.
WeightSchedule no_adaptation_schedule(const Network& net, int horizon);

/// Ratio c such that scaling every weight by c on [1, T) spends the budget
/// exactly: c = 1 - sqrt(C / ((T - 1) S)), S = sum of squared initial weights.
/// Throws infeasible_budget when C > (T - 1) S or C < 0.
double constant_adaptation_ratio(const Network& net, int horizon, double budget);

/// Every block equals c * w0 with c from constant_adaptation_ratio.
WeightSchedule constant_adaptation_schedule(const Network& net, int horizon, double budget);

} // namespace wadapt
