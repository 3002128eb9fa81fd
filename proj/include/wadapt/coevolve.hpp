#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "wadapt/de_core.hpp"
#include "wadapt/eps_constraint.hpp"
#include "wadapt/kernels.hpp"
#include "wadapt/rng.hpp"

namespace wadapt {

/// Random partition of [0, D) into subcomponents.
///
/// Group j (0-based) owns perm[j*ds, (j+1)*ds); the last group also takes
/// any remainder when ds does not divide D. `group(j)` lists the members in
/// ascending index order.
class GroupingPlan {
public:
    GroupingPlan(std::vector<std::size_t> perm, std::size_t ds);

    std::size_t dimension() const noexcept { return perm_.size(); }
    std::size_t ns() const noexcept { return groups_.size(); }
    std::size_t ds() const noexcept { return ds_; }
    const std::vector<std::size_t>& perm() const noexcept { return perm_; }
    std::span<const std::size_t> group(std::size_t j) const { return groups_.at(j); }

private:
    std::vector<std::size_t> perm_;
    std::size_t ds_;
    std::vector<std::vector<std::size_t>> groups_;
};

/// Uniform permutation split into `ns` equal groups; ns must divide D.
GroupingPlan random_grouping(std::size_t D, std::size_t ns, Rng& rng);

/// Uniform permutation split into groups of `ds`; the last group absorbs the
/// remainder.
GroupingPlan random_grouping_by_size(std::size_t D, std::size_t ds, Rng& rng);

/// Probability that two given variables share a subcomponent in at least k of
/// K cycles: sum_{l=k}^{K} C(K,l) (1/ns)^l (1 - 1/ns)^(K-l), summed in the
/// log domain.
double grouping_probability(int k, int K, int ns);

struct HistoryRow {
    std::uint64_t generation = 0; ///< global generation counter after the step
    int cycle = 0;                ///< 1-based; 0 for plain NSDE
    int group = 0;                ///< 1-based; 0 for plain NSDE
    double best_f = 0.0;
    double best_violation = 0.0;
    double epsilon = 0.0;

    bool operator==(const HistoryRow&) const = default;
};

// `generation,cycle,group,best_f,best_violation,epsilon`
void write_history_csv(std::span<const HistoryRow> history, std::ostream& out);

/// Budget and ε settings shared by both optimizers.
struct RunBudget {
    std::size_t total_budget = 6'300'000; ///< evaluation cap
    double gc_fraction = 0.2;             ///< Gc = floor(gc_fraction * Gmax)
    double lambda = 10.0;
};

struct C3Config {
    std::size_t ds = 0;      ///< subcomponent dimension
    int cycles = 0;          ///< 0: as many as the budget allows
    std::size_t sub_fes = 0; ///< generation evaluations per visit; 0: 10 * np
    /// When true every dynamics evaluation counts toward the budget (context
    /// evaluations at the start of a visit and the full-population
    /// re-evaluation after write-back included). When false only the initial
    /// population and the sub-optimizer's generations count.
    bool count_all_evaluations = true;
    RunBudget budget{};
};

/// Mutable state of one optimization run.
struct RunState {
    Population pop;
    std::size_t best = 0;
    EpsilonSchedule eps;
    std::uint64_t generation = 0;
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;
    int cycle = 0;
    std::vector<HistoryRow> history;

    double epsilon() const;
};

/// Random population, evaluated, with the ε schedule anchored on its largest
/// violation. Gmax = total_budget / np.
RunState start_run(const EvalFn& eval, std::size_t D, const DEConfig& de, const RunBudget& budget,
                   std::uint64_t seed);

struct SubcomponentOptions {
    std::size_t sub_fes = 0;
    bool count_all_evaluations = true;
};

/// Optimizes group j of `plan` with NSDE while the other genes stay at the
/// current best. Subpopulation members are evaluated by splicing them into a
/// copy of the best vector. After the evolved columns are written back, the
/// whole population is re-evaluated and the best refreshed. Returns the
/// evaluations consumed by the NSDE generations (= sub_fes).
std::size_t optimize_subcomponent(RunState& state, const GroupingPlan& plan, std::size_t j, const EvalFn& eval,
                                  const DEConfig& de, const SubcomponentOptions& opts);

struct OptimizationResult {
    Candidate best;       ///< ε = 0 best of the final population
    Population final_population;
    std::vector<HistoryRow> history;
    std::size_t evaluations = 0;
    std::uint64_t generations = 0;
    int cycles = 0;
};

/// Resolved per-visit cost and cycle count for a C3 configuration.
struct C3Plan {
    std::size_t ds = 0;
    std::size_t ns = 0;
    std::size_t sub_fes = 0;
    std::size_t visit_cost = 0;
    int cycles = 0;
};

/// Validates the configuration against the budget. Throws
/// Errc::invalid_parameter when it cannot run a single visit or when explicit
/// cycles would exceed the budget.
C3Plan plan_c3(std::size_t D, const C3Config& cfg, const DEConfig& de);

/// Cooperative coevolution: fresh random grouping every cycle, then each
/// group optimized in turn.
OptimizationResult run_c3(const EvalFn& eval, std::size_t D, const C3Config& cfg, const DEConfig& de,
                          std::uint64_t seed);

/// NSDE on the full decision vector until the budget is spent.
OptimizationResult run_nsde(const EvalFn& eval, std::size_t D, const RunBudget& budget, const DEConfig& de,
                            std::uint64_t seed);

} // namespace wadapt
