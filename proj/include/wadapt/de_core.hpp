#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "wadapt/eps_constraint.hpp"
#include "wadapt/evaluation.hpp"
#include "wadapt/kernels.hpp"
#include "wadapt/rng.hpp"

namespace wadapt {

struct Bounds {
    double lo = 0.0;
    double hi = 1.0;
};

/// A population member: genes plus the cached evaluation of those genes.
struct Candidate {
    std::vector<double> genes;
    double f = std::numeric_limits<double>::quiet_NaN();
    double violation = std::numeric_limits<double>::quiet_NaN();

    Fitness fitness() const noexcept { return {f, violation}; }
    void assign(const Evaluation& e) noexcept
    {
        f = e.f;
        violation = e.violation;
    }
};

using Population = std::vector<Candidate>;

struct DEConfig {
    int np = 350;
    double cr = 0.9;
    double fp = 0.5; ///< probability of the Gaussian scale-factor branch
    Bounds bounds{};

    void validate() const;
};

/// Genes uniform in [lo, hi]; caches left as NaN until evaluated.
Population init_population(const DEConfig& cfg, std::size_t dim, Rng& rng);

/// Evaluates every member through the batch kernel and fills the caches.
void evaluate_population(Population& pop, const EvalFn& eval);

struct ScaleFactorDraw {
    double value = 0.0;
    bool gaussian = false;
};

/// NSDE scale factor: N(0.5, 0.5) with probability fp, standard Cauchy otherwise.
ScaleFactorDraw draw_scale_factor(double fp, Rng& rng);
double sample_scale_factor(double fp, Rng& rng);

/// Two distinct indices in [0, np), both different from i.
std::pair<int, int> pick_donors(int i, int np, Rng& rng);

/// DE/current-to-best/1: v = x + F (best - x) + F (r1 - r2).
std::vector<double> mutate_current_to_best_1(std::span<const double> target, std::span<const double> best,
                                             std::span<const double> r1, std::span<const double> r2, double F);

/// u_j = v_j if rand_j <= cr or j == j_rand, else x_j.
std::vector<double> binomial_crossover(std::span<const double> target, std::span<const double> mutant, double cr,
                                       Rng& rng);

void repair_bounds(std::span<double> v, Bounds bounds) noexcept;
std::vector<double> repaired(std::vector<double> v, Bounds bounds);

/// Index of the best member under the ε comparator (first one on ties).
std::size_t best_index(const Population& pop, double eps);

/// One synchronous NSDE generation under the ε comparator.
///
/// All trial vectors are built from the population as it stands on entry,
/// each with its own RNG derived from (seed, generation, i), and evaluated
/// through the batch kernel. Replacement then runs in index order, so the
/// result is identical for any thread count. Returns the evaluations used.
std::size_t nsde_generation(Population& pop, const EvalFn& eval, double eps, const DEConfig& cfg,
                            std::uint64_t seed, std::uint64_t generation);

} // namespace wadapt
