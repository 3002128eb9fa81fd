#include "wadapt/coevolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "wadapt/csv.hpp"
#include "wadapt/error.hpp"

namespace wadapt {

GroupingPlan::GroupingPlan(std::vector<std::size_t> perm, std::size_t ds)
    : perm_(std::move(perm)), ds_(ds)
{
    const std::size_t D = perm_.size();
    if (ds == 0 || ds > D)
        throw Error(Errc::invalid_parameter, "subcomponent dimension must lie in [1, D]");
    std::vector<char> seen(D, 0);
    for (auto v : perm_) {
        if (v >= D || seen[v])
            throw Error(Errc::invalid_parameter, "grouping permutation is not a bijection on [0, D)");
        seen[v] = 1;
    }
    const std::size_t ns = D / ds;
    groups_.resize(ns);
    for (std::size_t j = 0; j < ns; ++j) {
        const auto first = perm_.begin() + static_cast<std::ptrdiff_t>(j * ds);
        const auto last = j + 1 == ns ? perm_.end() : first + static_cast<std::ptrdiff_t>(ds);
        groups_[j].assign(first, last);
        std::sort(groups_[j].begin(), groups_[j].end());
    }
}

namespace {

std::vector<std::size_t> random_permutation(std::size_t D, Rng& rng)
{
    std::vector<std::size_t> perm(D);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    // Fisher-Yates with explicit draws; std::shuffle's draw pattern is
    // implementation-defined.
    for (std::size_t i = D; i > 1; --i) {
        const std::size_t k = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        std::swap(perm[i - 1], perm[k]);
    }
    return perm;
}

} // namespace

GroupingPlan random_grouping(std::size_t D, std::size_t ns, Rng& rng)
{
    if (ns == 0 || D == 0 || D % ns != 0)
        throw Error(Errc::invalid_parameter,
                    "subcomponent count " + std::to_string(ns) + " does not divide D = " + std::to_string(D));
    return GroupingPlan(random_permutation(D, rng), D / ns);
}

GroupingPlan random_grouping_by_size(std::size_t D, std::size_t ds, Rng& rng)
{
    if (ds == 0 || ds > D)
        throw Error(Errc::invalid_parameter, "subcomponent dimension must lie in [1, D]");
    return GroupingPlan(random_permutation(D, rng), ds);
}

double grouping_probability(int k, int K, int ns)
{
    if (K < 1 || k < 1 || k > K || ns < 1)
        throw Error(Errc::invalid_parameter, "grouping probability needs 1 <= k <= K and ns >= 1");
    if (ns == 1)
        return 1.0;
    const double log_p = -std::log(static_cast<double>(ns));
    const double log_q = std::log1p(-1.0 / ns);
    const double log_k_fact = std::lgamma(K + 1.0);
    double sum = 0.0;
    for (int l = k; l <= K; ++l) {
        const double log_binom = log_k_fact - std::lgamma(l + 1.0) - std::lgamma(K - l + 1.0);
        sum += std::exp(log_binom + l * log_p + (K - l) * log_q);
    }
    return std::min(sum, 1.0);
}

void write_history_csv(std::span<const HistoryRow> history, std::ostream& out)
{
    out << "generation,cycle,group,best_f,best_violation,epsilon\n";
    for (const auto& r : history)
        out << r.generation << ',' << r.cycle << ',' << r.group << ',' << csv::fmt(r.best_f) << ','
            << csv::fmt(r.best_violation) << ',' << csv::fmt(r.epsilon) << '\n';
}

double RunState::epsilon() const
{
    return eps.at(std::min(static_cast<double>(generation), eps.gmax()));
}

RunState start_run(const EvalFn& eval, std::size_t D, const DEConfig& de, const RunBudget& budget,
                   std::uint64_t seed)
{
    de.validate();
    const auto np = static_cast<std::size_t>(de.np);
    if (budget.total_budget < 2 * np)
        throw Error(Errc::invalid_parameter, "budget must cover the initial population and one generation");
    const double gmax = static_cast<double>(budget.total_budget / np);
    const double gc = std::floor(budget.gc_fraction * gmax);
    if (!(gc >= 1.0 && gc < gmax))
        throw Error(Errc::invalid_parameter, "Gc fraction yields Gc outside [1, Gmax)");

    RunState s;
    s.seed = seed;
    Rng rng(derive_seed(seed, stream::init));
    s.pop = init_population(de, D, rng);
    evaluate_population(s.pop, eval);
    s.evaluations = np;

    double eps0 = 0.0;
    for (const auto& c : s.pop)
        eps0 = std::max(eps0, c.violation);
    s.eps = EpsilonSchedule(eps0, gc, gmax, budget.lambda);
    s.best = best_index(s.pop, s.epsilon());
    return s;
}

namespace {

HistoryRow snapshot(const Population& pop, const RunState& s, int cycle, int group, double eps)
{
    const auto& c = pop[best_index(pop, 0.0)];
    return {s.generation, cycle, group, c.f, c.violation, eps};
}

} // namespace

std::size_t optimize_subcomponent(RunState& state, const GroupingPlan& plan, std::size_t j, const EvalFn& eval,
                                  const DEConfig& de, const SubcomponentOptions& opts)
{
    const auto np = static_cast<std::size_t>(de.np);
    if (j >= plan.ns())
        throw Error(Errc::invalid_parameter, "group index out of range");
    if (opts.sub_fes < np || opts.sub_fes % np != 0)
        throw Error(Errc::invalid_parameter, "sub_fes must be a positive multiple of np");
    if (state.pop.size() != np)
        throw Error(Errc::invalid_parameter, "population size differs from np");

    const auto idx = plan.group(j);
    const std::vector<double> context = state.pop[state.best].genes;

    Population sub(np);
    for (std::size_t i = 0; i < np; ++i) {
        sub[i].genes.resize(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k)
            sub[i].genes[k] = state.pop[i].genes[idx[k]];
    }

    const EvalFn in_context = [&](std::span<const double> y) {
        std::vector<double> full = context;
        for (std::size_t k = 0; k < idx.size(); ++k)
            full[idx[k]] = y[k];
        return eval(full);
    };

    evaluate_population(sub, in_context);
    if (opts.count_all_evaluations)
        state.evaluations += np;

    const std::uint64_t gen_seed = derive_seed(state.seed, stream::generation);
    std::size_t used = 0;
    while (used + np <= opts.sub_fes) {
        const double eps = state.epsilon();
        used += nsde_generation(sub, in_context, eps, de, gen_seed, state.generation);
        ++state.generation;
        state.history.push_back(snapshot(sub, state, state.cycle, static_cast<int>(j) + 1, eps));
    }
    state.evaluations += used;

    for (std::size_t i = 0; i < np; ++i)
        for (std::size_t k = 0; k < idx.size(); ++k)
            state.pop[i].genes[idx[k]] = sub[i].genes[k];

    evaluate_population(state.pop, eval);
    if (opts.count_all_evaluations)
        state.evaluations += np;
    state.best = best_index(state.pop, state.epsilon());
    return used;
}

C3Plan plan_c3(std::size_t D, const C3Config& cfg, const DEConfig& de)
{
    de.validate();
    const auto np = static_cast<std::size_t>(de.np);
    if (cfg.ds == 0 || cfg.ds > D)
        throw Error(Errc::invalid_parameter, "subcomponent dimension must lie in [1, D]");

    C3Plan p;
    p.ds = cfg.ds;
    p.ns = D / cfg.ds;
    p.sub_fes = cfg.sub_fes == 0 ? 10 * np : cfg.sub_fes;
    if (p.sub_fes < np || p.sub_fes % np != 0)
        throw Error(Errc::invalid_parameter, "sub_fes must be a positive multiple of np");
    p.visit_cost = p.sub_fes + (cfg.count_all_evaluations ? 2 * np : 0);

    if (cfg.budget.total_budget < np)
        throw Error(Errc::invalid_parameter, "budget smaller than the initial population");
    const std::size_t per_cycle = p.ns * p.visit_cost;
    const auto affordable = static_cast<int>((cfg.budget.total_budget - np) / per_cycle);
    if (cfg.cycles < 0)
        throw Error(Errc::invalid_parameter, "cycles must be nonnegative");
    p.cycles = cfg.cycles == 0 ? affordable : cfg.cycles;
    if (p.cycles < 1)
        throw Error(Errc::invalid_parameter, "budget does not cover a single cycle");
    if (p.cycles > affordable)
        throw Error(Errc::invalid_parameter, std::to_string(p.cycles) + " cycles need " +
                                                 std::to_string(np + p.cycles * per_cycle) +
                                                 " evaluations, budget is " +
                                                 std::to_string(cfg.budget.total_budget));
    return p;
}

namespace {

OptimizationResult finish(RunState&& s)
{
    OptimizationResult r;
    r.best = s.pop[best_index(s.pop, 0.0)];
    r.final_population = std::move(s.pop);
    r.history = std::move(s.history);
    r.evaluations = s.evaluations;
    r.generations = s.generation;
    r.cycles = s.cycle;
    return r;
}

} // namespace

OptimizationResult run_c3(const EvalFn& eval, std::size_t D, const C3Config& cfg, const DEConfig& de,
                          std::uint64_t seed)
{
    const C3Plan p = plan_c3(D, cfg, de);
    RunState s = start_run(eval, D, de, cfg.budget, seed);
    const SubcomponentOptions opts{p.sub_fes, cfg.count_all_evaluations};

    for (int c = 1; c <= p.cycles; ++c) {
        if (s.evaluations + p.ns * p.visit_cost > cfg.budget.total_budget)
            break;
        s.cycle = c;
        Rng rng(derive_seed(seed, stream::grouping, static_cast<std::uint64_t>(c)));
        const GroupingPlan plan = random_grouping_by_size(D, p.ds, rng);
        for (std::size_t j = 0; j < plan.ns(); ++j)
            optimize_subcomponent(s, plan, j, eval, de, opts);
    }
    return finish(std::move(s));
}

OptimizationResult run_nsde(const EvalFn& eval, std::size_t D, const RunBudget& budget, const DEConfig& de,
                            std::uint64_t seed)
{
    RunState s = start_run(eval, D, de, budget, seed);
    const auto np = static_cast<std::size_t>(de.np);
    const std::uint64_t gen_seed = derive_seed(seed, stream::generation);
    while (s.evaluations + np <= budget.total_budget) {
        const double eps = s.epsilon();
        s.evaluations += nsde_generation(s.pop, eval, eps, de, gen_seed, s.generation);
        ++s.generation;
        s.history.push_back(snapshot(s.pop, s, 0, 0, eps));
    }
    return finish(std::move(s));
}

} // namespace wadapt
