#include "wadapt/de_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wadapt/error.hpp"

namespace wadapt {

void DEConfig::validate() const
{
    if (np < 4)
        throw Error(Errc::invalid_parameter, "population size must be >= 4");
    if (!(cr >= 0.0 && cr <= 1.0))
        throw Error(Errc::invalid_parameter, "crossover rate must lie in [0,1]");
    if (!(fp >= 0.0 && fp <= 1.0))
        throw Error(Errc::invalid_parameter, "fp must lie in [0,1]");
    if (!(bounds.lo <= bounds.hi))
        throw Error(Errc::invalid_parameter, "lower bound exceeds upper bound");
}

Population init_population(const DEConfig& cfg, std::size_t dim, Rng& rng)
{
    cfg.validate();
    if (dim < 1)
        throw Error(Errc::invalid_parameter, "dimension must be >= 1");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double span = cfg.bounds.hi - cfg.bounds.lo;
    Population pop(static_cast<std::size_t>(cfg.np));
    for (auto& c : pop) {
        c.genes.resize(dim);
        for (auto& g : c.genes)
            g = cfg.bounds.lo + unit(rng) * span;
    }
    return pop;
}

void evaluate_population(Population& pop, const EvalFn& eval)
{
    std::vector<std::vector<double>> xs;
    xs.reserve(pop.size());
    for (const auto& c : pop)
        xs.push_back(c.genes);
    auto evals = evaluate_batch(eval, xs);
    for (std::size_t i = 0; i < pop.size(); ++i)
        pop[i].assign(evals[i]);
}

ScaleFactorDraw draw_scale_factor(double fp, Rng& rng)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < fp)
        return {std::normal_distribution<double>(0.5, 0.5)(rng), true};
    return {std::cauchy_distribution<double>(0.0, 1.0)(rng), false};
}

double sample_scale_factor(double fp, Rng& rng)
{
    return draw_scale_factor(fp, rng).value;
}

std::pair<int, int> pick_donors(int i, int np, Rng& rng)
{
    if (np < 4)
        throw Error(Errc::invalid_parameter, "population too small for current-to-best/1 (need >= 4)");
    std::uniform_int_distribution<int> pick(0, np - 1);
    int r1 = pick(rng);
    while (r1 == i)
        r1 = pick(rng);
    int r2 = pick(rng);
    while (r2 == i || r2 == r1)
        r2 = pick(rng);
    return {r1, r2};
}

std::vector<double> mutate_current_to_best_1(std::span<const double> target, std::span<const double> best,
                                             std::span<const double> r1, std::span<const double> r2, double F)
{
    const std::size_t d = target.size();
    if (best.size() != d || r1.size() != d || r2.size() != d)
        throw Error(Errc::dimension_mismatch, "mutation operands differ in length");
    std::vector<double> v(d);
    for (std::size_t j = 0; j < d; ++j)
        v[j] = target[j] + F * (best[j] - target[j]) + F * (r1[j] - r2[j]);
    return v;
}

std::vector<double> binomial_crossover(std::span<const double> target, std::span<const double> mutant, double cr,
                                       Rng& rng)
{
    const std::size_t d = target.size();
    if (mutant.size() != d)
        throw Error(Errc::dimension_mismatch, "crossover operands differ in length");
    if (d == 0)
        return {};
    const std::size_t forced = std::uniform_int_distribution<std::size_t>(0, d - 1)(rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> u(target.begin(), target.end());
    for (std::size_t j = 0; j < d; ++j) {
        const bool take = unit(rng) <= cr;
        if (take || j == forced)
            u[j] = mutant[j];
    }
    return u;
}

void repair_bounds(std::span<double> v, Bounds bounds) noexcept
{
    for (auto& x : v)
        x = std::clamp(x, bounds.lo, bounds.hi);
}

std::vector<double> repaired(std::vector<double> v, Bounds bounds)
{
    repair_bounds(v, bounds);
    return v;
}

std::size_t best_index(const Population& pop, double eps)
{
    if (pop.empty())
        throw Error(Errc::invalid_parameter, "empty population");
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
        if (better_than(pop[i].fitness(), pop[best].fitness(), eps))
            best = i;
    return best;
}

std::size_t nsde_generation(Population& pop, const EvalFn& eval, double eps, const DEConfig& cfg,
                            std::uint64_t seed, std::uint64_t generation)
{
    cfg.validate();
    const int np = static_cast<int>(pop.size());
    if (np != cfg.np)
        throw Error(Errc::invalid_parameter, "population size " + std::to_string(np) + " != configured np");
    const std::size_t b = best_index(pop, eps);
    const auto& best = pop[b].genes;

    std::vector<std::vector<double>> trials(pop.size());
    for (int i = 0; i < np; ++i) {
        Rng rng(derive_seed(seed, generation, static_cast<std::uint64_t>(i)));
        const double F = sample_scale_factor(cfg.fp, rng);
        const auto [r1, r2] = pick_donors(i, np, rng);
        auto mutant = mutate_current_to_best_1(pop[i].genes, best, pop[r1].genes, pop[r2].genes, F);
        trials[i] = binomial_crossover(pop[i].genes, mutant, cfg.cr, rng);
        repair_bounds(trials[i], cfg.bounds);
    }

    const auto evals = evaluate_batch(eval, trials);
    for (int i = 0; i < np; ++i) {
        const Fitness trial{evals[i].f, evals[i].violation};
        if (better_than(trial, pop[i].fitness(), eps)) {
            pop[i].genes = std::move(trials[i]);
            pop[i].assign(evals[i]);
        }
    }
    return static_cast<std::size_t>(np);
}

} // namespace wadapt
