#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "wadapt/evaluation.hpp"
#include "wadapt/graph.hpp"
#include "wadapt/matrix.hpp"

namespace wadapt {

inline constexpr int kDefaultSubsteps = 20;

/// Per-node SIS rates and initial state for the NIMFA model.
struct EpidemicParams {
    std::vector<double> beta;  ///< infection rate of each node
    std::vector<double> gamma; ///< curing rate of each node
    std::vector<double> p0;    ///< initial infection probability of each node
    int horizon = 10;          ///< T; the model runs on [0, T]
    int substeps = kDefaultSubsteps; ///< RK4 steps per unit time

    /// Homogeneous parameters: every node gets the same beta, gamma and p0.
    static EpidemicParams uniform(int n, double beta, double gamma, double p0, int horizon,
                                  int substeps = kDefaultSubsteps);

    int n() const noexcept { return static_cast<int>(p0.size()); }

    /// Throws invalid_parameter when a rate is negative/non-finite, p0 leaves
    /// [0,1], vector sizes disagree, horizon < 2 or substeps < 1.
    void validate() const;
};

/// Piecewise-constant weights: block t-1 is active on [t, t+1) for
/// t = 1..T-1. On [0, 1) the network's initial weights apply.
class WeightSchedule {
public:
    WeightSchedule(int n, int horizon);
    explicit WeightSchedule(std::vector<SquareMatrix> blocks);

    int n() const noexcept { return n_; }
    int horizon() const noexcept { return static_cast<int>(blocks_.size()) + 1; }
    std::size_t block_count() const noexcept { return blocks_.size(); }

    const SquareMatrix& block(std::size_t k) const { return blocks_.at(k); }
    SquareMatrix& block(std::size_t k) { return blocks_.at(k); }
    const std::vector<SquareMatrix>& blocks() const noexcept { return blocks_; }

    /// Entries in [0,1] with a zero diagonal in every block.
    void validate() const;

private:
    int n_ = 0;
    std::vector<SquareMatrix> blocks_;
};

/// Infection probabilities sampled on the substep grid.
struct Trajectory {
    int n = 0;
    std::vector<double> times;
    std::vector<double> p; ///< row-major, times.size() rows of n values

    std::size_t samples() const noexcept { return times.size(); }
    std::span<const double> row(std::size_t k) const { return {p.data() + k * n, static_cast<std::size_t>(n)}; }
};

/// N (N - 1) (T - 1).
std::size_t decision_dimension(int n, int horizon);

/// Time-major, then row-major over off-diagonal entries.
WeightSchedule decode_candidate(std::span<const double> x, int n, int horizon);
std::vector<double> encode_schedule(const WeightSchedule& sched);

/// Classical RK4 with step 1/substeps; state clamped to [0,1] after each step.
Trajectory integrate(const Network& net, const EpidemicParams& params, const WeightSchedule& sched);

/// Trapezoid rule for the integral of sum_i sqrt(p_i) over the trajectory.
double objective_value(const Trajectory& traj);

/// sum_t sum_ij (w_ij(t) - w0_ij)^2 - budget.
double constraint_value(const WeightSchedule& sched, const Network& net, double budget);

/// decode -> integrate -> objective/constraint, without materialising the
/// trajectory. Thread-safe; the result depends only on the arguments.
Evaluation evaluate_candidate(std::span<const double> x, const Network& net, const EpidemicParams& params,
                              double budget);

/// Objective of the trajectory produced by `sched` (same arithmetic as
/// evaluate_candidate).
double schedule_objective(const Network& net, const EpidemicParams& params, const WeightSchedule& sched);

/// Mean infection probability I(t) at a grid instant.
double infected_level(const Trajectory& traj, double t);

/// W(t): sum of off-diagonal weights active at t, 0 <= t < T.
double total_weights(const WeightSchedule& sched, const Network& net, double t);

// `t,p_0,...,p_{N-1}`
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
// `t,I,W` on the trajectory grid. W at t = T is the weight of the last block.
void write_trace_csv(const Trajectory& traj, const WeightSchedule& sched, const Network& net, std::ostream& out);

// Schedule file: header `t,i,j,w`, one row per off-diagonal entry of every
// block, t = 1..T-1.
void write_schedule_csv(const WeightSchedule& sched, std::ostream& out);
WeightSchedule read_schedule_csv(std::istream& in, int n, int horizon);
WeightSchedule load_schedule(const std::filesystem::path& path, int n, int horizon);

} // namespace wadapt
