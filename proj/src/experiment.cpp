#include "wadapt/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "wadapt/baselines.hpp"
#include "wadapt/csv.hpp"
#include "wadapt/error.hpp"

namespace wadapt {

std::string_view to_string(Algorithm a) noexcept
{
    switch (a) {
    case Algorithm::nsde: return "nsde";
    case Algorithm::nsde_c3: return "nsde-c3";
    case Algorithm::none: return "none";
    case Algorithm::constant: return "constant";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name)
{
    if (name == "nsde")
        return Algorithm::nsde;
    if (name == "nsde-c3" || name == "nsde_c3")
        return Algorithm::nsde_c3;
    if (name == "none")
        return Algorithm::none;
    if (name == "constant")
        return Algorithm::constant;
    throw Error(Errc::config, "unknown algorithm '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(Errc::config, msg); };
    if (m < 1 || m0 < m || n < m0)
        fail("network needs 1 <= m <= m0 <= n");
    if (n < 2)
        fail("n must be >= 2");
    if (!(beta >= 0.0) || !(gamma >= 0.0) || !std::isfinite(beta) || !std::isfinite(gamma))
        fail("beta and gamma must be finite and nonnegative");
    if (!(p0 >= 0.0 && p0 <= 1.0))
        fail("p0 must lie in [0,1]");
    if (horizon < 2)
        fail("horizon must be >= 2");
    if (substeps < 1)
        fail("substeps must be >= 1");
    if (!(budget >= 0.0) || !std::isfinite(budget))
        fail("budget must be finite and nonnegative");
    if (np < 4)
        fail("np must be >= 4");
    if (!(cr >= 0.0 && cr <= 1.0))
        fail("cr must lie in [0,1]");
    if (!(fp >= 0.0 && fp <= 1.0))
        fail("fp must lie in [0,1]");
    if (!(gc_fraction > 0.0 && gc_fraction < 1.0))
        fail("gc_fraction must lie in (0,1)");
    if (runs < 1)
        fail("runs must be >= 1");
    if (cycles < 0)
        fail("cycles must be >= 0");
    const std::size_t D = dimension();
    if (ds > D)
        fail("ds exceeds the decision dimension");
    if (sub_fes != 0 && sub_fes % static_cast<std::size_t>(np) != 0)
        fail("sub_fes must be a multiple of np");
    if (algorithm == Algorithm::nsde || algorithm == Algorithm::nsde_c3) {
        try {
            const double gmax = static_cast<double>(total_fes / static_cast<std::size_t>(np));
            const double gc = std::floor(gc_fraction * gmax);
            if (total_fes < 2 * static_cast<std::size_t>(np) || !(gc >= 1.0 && gc < gmax))
                fail("total_fes too small for np and gc_fraction");
            if (algorithm == Algorithm::nsde_c3)
                plan_c3(D, c3(), de());
        } catch (const Error& e) {
            if (e.code() == Errc::config)
                throw;
            fail(e.what());
        }
    }
}

EpidemicParams ExperimentConfig::epidemic() const
{
    return EpidemicParams::uniform(n, beta, gamma, p0, horizon, substeps);
}

DEConfig ExperimentConfig::de() const
{
    return DEConfig{np, cr, fp, Bounds{0.0, 1.0}};
}

RunBudget ExperimentConfig::run_budget() const
{
    return RunBudget{total_fes, gc_fraction, lambda};
}

C3Config ExperimentConfig::c3() const
{
    C3Config c;
    c.ds = ds == 0 ? static_cast<std::size_t>(n) * (n - 1) : ds;
    c.cycles = cycles;
    c.sub_fes = sub_fes;
    c.count_all_evaluations = count_all_evaluations;
    c.budget = run_budget();
    return c;
}

std::size_t ExperimentConfig::dimension() const
{
    return decision_dimension(n, horizon);
}

namespace {

using nlohmann::json;

[[noreturn]] void type_error(const std::string& key, const char* expected)
{
    throw Error(Errc::config, "key '" + key + "' must be " + expected);
}

int as_int(const std::string& key, const json& v)
{
    if (!v.is_number_integer())
        type_error(key, "an integer");
    return v.get<int>();
}

std::uint64_t as_u64(const std::string& key, const json& v)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        type_error(key, "a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::size_t as_size(const std::string& key, const json& v)
{
    // 6.3e6 style literals are accepted when they are whole numbers.
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d < 0.0 || d != std::floor(d))
            type_error(key, "a nonnegative integer");
        return static_cast<std::size_t>(d);
    }
    return static_cast<std::size_t>(as_u64(key, v));
}

double as_double(const std::string& key, const json& v)
{
    if (!v.is_number())
        type_error(key, "a number");
    return v.get<double>();
}

bool as_bool(const std::string& key, const json& v)
{
    if (!v.is_boolean())
        type_error(key, "a boolean");
    return v.get<bool>();
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j)
{
    if (!j.is_object())
        throw Error(Errc::config, "configuration must be a JSON object");
    ExperimentConfig c;
    using Setter = std::function<void(const std::string&, const json&)>;
    const std::map<std::string, Setter> setters = {
        {"n", [&](auto& k, auto& v) { c.n = as_int(k, v); }},
        {"m0", [&](auto& k, auto& v) { c.m0 = as_int(k, v); }},
        {"m", [&](auto& k, auto& v) { c.m = as_int(k, v); }},
        {"net_seed", [&](auto& k, auto& v) { c.net_seed = as_u64(k, v); }},
        {"beta", [&](auto& k, auto& v) { c.beta = as_double(k, v); }},
        {"gamma", [&](auto& k, auto& v) { c.gamma = as_double(k, v); }},
        {"p0", [&](auto& k, auto& v) { c.p0 = as_double(k, v); }},
        {"horizon", [&](auto& k, auto& v) { c.horizon = as_int(k, v); }},
        {"substeps", [&](auto& k, auto& v) { c.substeps = as_int(k, v); }},
        {"budget", [&](auto& k, auto& v) { c.budget = as_double(k, v); }},
        {"algorithm",
         [&](auto& k, auto& v) {
             if (!v.is_string())
                 type_error(k, "a string");
             c.algorithm = parse_algorithm(v.template get<std::string>());
         }},
        {"np", [&](auto& k, auto& v) { c.np = as_int(k, v); }},
        {"cr", [&](auto& k, auto& v) { c.cr = as_double(k, v); }},
        {"fp", [&](auto& k, auto& v) { c.fp = as_double(k, v); }},
        {"ds", [&](auto& k, auto& v) { c.ds = as_size(k, v); }},
        {"sub_fes", [&](auto& k, auto& v) { c.sub_fes = as_size(k, v); }},
        {"cycles", [&](auto& k, auto& v) { c.cycles = as_int(k, v); }},
        {"total_fes", [&](auto& k, auto& v) { c.total_fes = as_size(k, v); }},
        {"gc_fraction", [&](auto& k, auto& v) { c.gc_fraction = as_double(k, v); }},
        {"lambda", [&](auto& k, auto& v) { c.lambda = as_double(k, v); }},
        {"count_all_evaluations", [&](auto& k, auto& v) { c.count_all_evaluations = as_bool(k, v); }},
        {"runs", [&](auto& k, auto& v) { c.runs = as_int(k, v); }},
        {"master_seed", [&](auto& k, auto& v) { c.master_seed = as_u64(k, v); }},
    };
    for (const auto& [key, value] : j.items()) {
        auto it = setters.find(key);
        if (it == setters.end())
            throw Error(Errc::config, "unknown configuration key '" + key + "'");
        it->second(key, value);
    }
    c.validate();
    return c;
}

nlohmann::json ExperimentConfig::to_json() const
{
    return json{
        {"n", n},
        {"m0", m0},
        {"m", m},
        {"net_seed", net_seed},
        {"beta", beta},
        {"gamma", gamma},
        {"p0", p0},
        {"horizon", horizon},
        {"substeps", substeps},
        {"budget", budget},
        {"algorithm", std::string(to_string(algorithm))},
        {"np", np},
        {"cr", cr},
        {"fp", fp},
        {"ds", ds},
        {"sub_fes", sub_fes},
        {"cycles", cycles},
        {"total_fes", total_fes},
        {"gc_fraction", gc_fraction},
        {"lambda", lambda},
        {"count_all_evaluations", count_all_evaluations},
        {"runs", runs},
        {"master_seed", master_seed},
    };
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::config, "cannot open config " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::config, std::string("malformed JSON: ") + e.what());
    }
    return ExperimentConfig::from_json(j);
}

std::uint64_t run_seed(std::uint64_t master_seed, int run) noexcept
{
    return derive_seed(master_seed, static_cast<std::uint64_t>(run));
}

namespace {

void fill_traces(RunRecord& rec, const Network& net, const EpidemicParams& params, const WeightSchedule& sched)
{
    const Trajectory traj = integrate(net, params, sched);
    const double last = static_cast<double>(sched.horizon());
    rec.times = traj.times;
    rec.infected.clear();
    rec.total_weight.clear();
    for (double t : traj.times) {
        rec.infected.push_back(infected_level(traj, t));
        rec.total_weight.push_back(total_weights(sched, net, t < last ? t : last - 1.0));
    }
}

RunRecord baseline_record(const ExperimentConfig& cfg, const Network& net, const EpidemicParams& params)
{
    const WeightSchedule sched = cfg.algorithm == Algorithm::none
                                     ? no_adaptation_schedule(net, cfg.horizon)
                                     : constant_adaptation_schedule(net, cfg.horizon, cfg.budget);
    RunRecord rec;
    rec.best = encode_schedule(sched);
    const Evaluation e = evaluate_candidate(rec.best, net, params, cfg.budget);
    rec.ofv = e.f;
    rec.violation = e.violation;
    rec.feasible = e.violation <= kFeasibilityTol;
    fill_traces(rec, net, params, sched);
    return rec;
}

} // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const Network& net)
{
    cfg.validate();
    if (net.n() != cfg.n)
        throw Error(Errc::config, "network has " + std::to_string(net.n()) + " nodes, config says " +
                                      std::to_string(cfg.n));
    const EpidemicParams params = cfg.epidemic();

    if (cfg.algorithm == Algorithm::none || cfg.algorithm == Algorithm::constant) {
        try {
            return {baseline_record(cfg, net, params)};
        } catch (const Error& e) {
            if (e.code() == Errc::infeasible_budget)
                throw Error(Errc::config, e.what());
            throw;
        }
    }

    const std::size_t D = cfg.dimension();
    const EvalFn eval = [&](std::span<const double> x) { return evaluate_candidate(x, net, params, cfg.budget); };

    std::vector<RunRecord> records;
    for (int r = 0; r < cfg.runs; ++r) {
        RunRecord rec;
        rec.run = r;
        rec.seed = run_seed(cfg.master_seed, r);
        const auto start = std::chrono::steady_clock::now();
        try {
            OptimizationResult res = cfg.algorithm == Algorithm::nsde_c3
                                         ? run_c3(eval, D, cfg.c3(), cfg.de(), rec.seed)
                                         : run_nsde(eval, D, cfg.run_budget(), cfg.de(), rec.seed);
            rec.ofv = res.best.f;
            rec.violation = res.best.violation;
            rec.feasible = rec.violation <= kFeasibilityTol;
            rec.history = std::move(res.history);
            rec.best = std::move(res.best.genes);
            fill_traces(rec, net, params, decode_candidate(rec.best, cfg.n, cfg.horizon));
        } catch (const Error& e) {
            if (e.code() != Errc::integration_failure)
                throw;
            rec.error = e.what();
        }
        rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    return run_experiment(cfg, generate_ba(cfg.n, cfg.m0, cfg.m, cfg.net_seed));
}

void write_experiment(const ExperimentConfig& cfg, std::span<const RunRecord> records,
                      const std::filesystem::path& outdir)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec)
        throw Error(Errc::io, "cannot create " + outdir.string() + ": " + ec.message());

    {
        auto out = csv::open_out(outdir / "results.csv");
        out << "algorithm,run,seed,ofv,violation,feasible,status\n";
        for (const auto& r : records) {
            out << to_string(cfg.algorithm) << ',' << r.run << ',' << r.seed << ',' << csv::fmt(r.ofv) << ','
                << csv::fmt(r.violation) << ',' << (r.feasible ? 1 : 0) << ',' << (r.ok() ? "ok" : "failed")
                << '\n';
        }
    }

    for (const auto& r : records) {
        std::ostringstream name;
        name << "run_" << std::setw(3) << std::setfill('0') << r.run;
        const fs::path dir = outdir / name.str();
        fs::create_directories(dir, ec);
        if (ec)
            throw Error(Errc::io, "cannot create " + dir.string() + ": " + ec.message());
        if (!r.ok()) {
            auto out = csv::open_out(dir / "error.txt");
            out << r.error << '\n';
            continue;
        }
        if (!r.history.empty()) {
            auto out = csv::open_out(dir / "history.csv");
            write_history_csv(r.history, out);
        }
        {
            auto out = csv::open_out(dir / "trace_I.csv");
            out << "t,I\n";
            for (std::size_t k = 0; k < r.times.size(); ++k)
                out << csv::fmt(r.times[k]) << ',' << csv::fmt(r.infected[k]) << '\n';
        }
        {
            auto out = csv::open_out(dir / "trace_W.csv");
            out << "t,W\n";
            for (std::size_t k = 0; k < r.times.size(); ++k)
                out << csv::fmt(r.times[k]) << ',' << csv::fmt(r.total_weight[k]) << '\n';
        }
        {
            auto out = csv::open_out(dir / "schedule.csv");
            write_schedule_csv(decode_candidate(r.best, cfg.n, cfg.horizon), out);
        }
    }
}

AlgorithmSamples read_results(const std::filesystem::path& dir)
{
    auto in = csv::open_in(dir / "results.csv");
    std::string line;
    const std::vector<std::string> header{"algorithm", "run", "seed", "ofv", "violation", "feasible", "status"};
    if (!std::getline(in, line) || csv::split(line) != header)
        throw Error(Errc::io, (dir / "results.csv").string() + ": unexpected header");
    AlgorithmSamples s;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r")
            continue;
        auto f = csv::split(line);
        if (f.size() != header.size())
            throw Error(Errc::io, "malformed results row: " + line);
        if (s.algorithm.empty())
            s.algorithm = f[0];
        else if (s.algorithm != f[0])
            throw Error(Errc::io, "results.csv mixes algorithms");
        if (f[6] != "ok")
            continue;
        s.ofv.push_back(csv::parse_double(f[3]));
        s.violation.push_back(csv::parse_double(f[4]));
    }
    if (s.ofv.empty())
        throw Error(Errc::io, (dir / "results.csv").string() + ": no successful runs");
    return s;
}

} // namespace wadapt
