#pragma once

namespace wadapt {

/// What the ε comparator looks at: objective and violation degree.
struct Fitness {
    double f = 0.0;
    double violation = 0.0;
};

/// max(0, g).
double violation_degree(double g) noexcept;

/// ε(G) = eps0 (1 - G/Gmax)^cp for G <= Gc, 0 afterwards, with
/// cp = -(ln eps0 + lambda) / ln(1 - Gc/Gmax). The exponent makes
/// ε(Gc) = exp(-lambda) whatever eps0 is.
class EpsilonSchedule {
public:
    EpsilonSchedule() = default;

    /// Requires eps0 >= 0 and 0 < gc < gmax. When eps0 < exp(-lambda) the
    /// exponent would turn negative; it is clamped to 0 so the schedule never
    /// increases.
    EpsilonSchedule(double eps0, double gc, double gmax, double lambda = 10.0);

    double eps0() const noexcept { return eps0_; }
    double gc() const noexcept { return gc_; }
    double gmax() const noexcept { return gmax_; }
    double lambda() const noexcept { return lambda_; }
    double cp() const noexcept { return cp_; }

    double at(double generation) const;

private:
    double eps0_ = 0.0;
    double gc_ = 0.0;
    double gmax_ = 1.0;
    double lambda_ = 10.0;
    double cp_ = 0.0;
};

inline double epsilon_at(const EpsilonSchedule& sched, double generation) { return sched.at(generation); }

/// ε comparison: both within ε -> lower f; equal violation -> lower f;
/// otherwise lower violation. Strict, so better_than(a, a, eps) is false.
bool better_than(const Fitness& a, const Fitness& b, double eps) noexcept;

} // namespace wadapt
