// Command-line front end: network generation, simulation, optimization
// campaigns, baselines, statistics and the grouping-probability calculator.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wadapt/baselines.hpp"
#include "wadapt/coevolve.hpp"
#include "wadapt/csv.hpp"
#include "wadapt/dynamics.hpp"
#include "wadapt/error.hpp"
#include "wadapt/experiment.hpp"
#include "wadapt/graph.hpp"
#include "wadapt/kernels.hpp"
#include "wadapt/stats.hpp"

namespace fs = std::filesystem;
using namespace wadapt;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

ExperimentConfig config_or_default(const std::string& path)
{
    return path.empty() ? ExperimentConfig{} : load_config(path);
}

Network network_for(const ExperimentConfig& cfg, const std::string& path)
{
    if (path.empty())
        return generate_ba(cfg.n, cfg.m0, cfg.m, cfg.net_seed);
    return load_network(path, cfg.n);
}

void report(const ExperimentConfig& cfg, const std::vector<RunRecord>& records)
{
    for (const auto& r : records) {
        if (!r.ok()) {
            std::cerr << to_string(cfg.algorithm) << " run " << r.run << " failed: " << r.error << '\n';
            continue;
        }
        std::cerr << to_string(cfg.algorithm) << " run " << r.run << ": ofv " << csv::fmt(r.ofv) << ", violation "
                  << csv::fmt(r.violation) << (r.feasible ? "" : " (infeasible)") << ", " << r.wall_seconds
                  << " s\n";
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Weight-adaptation optimizer for SIS epidemic networks"};
    app.require_subcommand(1);

    // gen-net
    auto* gen = app.add_subcommand("gen-net", "Generate a Barabasi-Albert network");
    int gen_n = 20, gen_m0 = 5, gen_m = 5;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    gen->add_option("--n", gen_n, "Node count")->capture_default_str();
    gen->add_option("--m0", gen_m0, "Seed clique size")->capture_default_str();
    gen->add_option("--m", gen_m, "Links per new node")->capture_default_str();
    gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", gen_out, "Output CSV")->required();

    // simulate
    auto* sim = app.add_subcommand("simulate", "Integrate the epidemic model under a weight schedule");
    std::string sim_net, sim_cfg, sim_sched, sim_out, sim_trace;
    sim->add_option("--net", sim_net, "Network CSV (default: generated from config)");
    sim->add_option("--config", sim_cfg, "Experiment JSON");
    sim->add_option("--schedule", sim_sched, "Schedule CSV (default: no adaptation)");
    sim->add_option("--out", sim_out, "Trajectory CSV")->required();
    sim->add_option("--trace", sim_trace, "Optional t,I,W trace CSV");

    // optimize
    auto* opt = app.add_subcommand("optimize", "Run an optimization campaign");
    std::string opt_net, opt_cfg, opt_algo, opt_outdir;
    std::optional<int> opt_runs;
    std::optional<std::uint64_t> opt_seed;
    int opt_threads = 0;
    opt->add_option("--net", opt_net, "Network CSV (default: generated from config)");
    opt->add_option("--config", opt_cfg, "Experiment JSON");
    opt->add_option("--algo", opt_algo, "nsde | nsde-c3")->check(CLI::IsMember({"nsde", "nsde-c3", "nsde_c3"}));
    opt->add_option("--runs", opt_runs, "Independent runs");
    opt->add_option("--seed", opt_seed, "Master seed");
    opt->add_option("--threads", opt_threads, "OpenMP worker threads (0: runtime default)");
    opt->add_option("--outdir", opt_outdir, "Output directory")->required();

    // baseline
    auto* base = app.add_subcommand("baseline", "Evaluate a reference strategy");
    std::string base_net, base_cfg, base_mode, base_outdir;
    base->add_option("--net", base_net, "Network CSV (default: generated from config)");
    base->add_option("--config", base_cfg, "Experiment JSON");
    base->add_option("--mode", base_mode, "none | constant")->required()->check(CLI::IsMember({"none", "constant"}));
    base->add_option("--outdir", base_outdir, "Output directory")->required();

    // stats
    auto* st = app.add_subcommand("stats", "Summarize campaigns with rank-sum tests");
    std::vector<std::string> st_in;
    std::string st_ref = "nsde-c3", st_out;
    st->add_option("--indir", st_in, "Campaign directories")->required()->expected(1, -1);
    st->add_option("--ref", st_ref, "Reference algorithm")->capture_default_str();
    st->add_option("--out", st_out, "Summary CSV")->required();

    // group-prob
    auto* gp = app.add_subcommand("group-prob", "Probability two variables share a group in >= k cycles");
    int gp_k = 1, gp_cycles = 50, gp_ns = 9;
    gp->add_option("--k", gp_k, "Minimum co-grouped cycles")->capture_default_str();
    gp->add_option("--cycles", gp_cycles, "Total cycles")->capture_default_str();
    gp->add_option("--ns", gp_ns, "Subcomponent count")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*gen) {
            save_network(generate_ba(gen_n, gen_m0, gen_m, gen_seed), gen_out);
        } else if (*sim) {
            const ExperimentConfig cfg = config_or_default(sim_cfg);
            const Network net = network_for(cfg, sim_net);
            const EpidemicParams params = cfg.epidemic();
            const WeightSchedule sched = sim_sched.empty() ? no_adaptation_schedule(net, cfg.horizon)
                                                           : load_schedule(sim_sched, net.n(), cfg.horizon);
            const Trajectory traj = integrate(net, params, sched);
            {
                auto out = csv::open_out(sim_out);
                write_trajectory_csv(traj, out);
            }
            if (!sim_trace.empty()) {
                auto out = csv::open_out(sim_trace);
                write_trace_csv(traj, sched, net, out);
            }
            std::cout << "ofv " << csv::fmt(objective_value(traj)) << "\ng "
                      << csv::fmt(constraint_value(sched, net, cfg.budget)) << '\n';
        } else if (*opt) {
            ExperimentConfig cfg = config_or_default(opt_cfg);
            if (!opt_algo.empty())
                cfg.algorithm = parse_algorithm(opt_algo);
            if (cfg.algorithm != Algorithm::nsde && cfg.algorithm != Algorithm::nsde_c3)
                throw Error(Errc::config, "optimize runs nsde or nsde-c3; use `baseline` for reference strategies");
            if (opt_runs)
                cfg.runs = *opt_runs;
            if (opt_seed)
                cfg.master_seed = *opt_seed;
            cfg.validate();
            set_worker_threads(opt_threads);
            const Network net = network_for(cfg, opt_net);
            const auto records = run_experiment(cfg, net);
            write_experiment(cfg, records, opt_outdir);
            report(cfg, records);
        } else if (*base) {
            ExperimentConfig cfg = config_or_default(base_cfg);
            cfg.algorithm = parse_algorithm(base_mode);
            const Network net = network_for(cfg, base_net);
            const auto records = run_experiment(cfg, net);
            write_experiment(cfg, records, base_outdir);
            report(cfg, records);
        } else if (*st) {
            std::vector<AlgorithmSamples> samples;
            for (const auto& dir : st_in)
                samples.push_back(read_results(dir));
            const auto rows = summarize(samples, st_ref);
            auto out = csv::open_out(st_out);
            write_summary_csv(rows, out);
            write_summary_csv(rows, std::cout);
        } else if (*gp) {
            std::printf("%.4f\n", grouping_probability(gp_k, gp_cycles, gp_ns));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        const bool config = e.code() == Errc::config || e.code() == Errc::invalid_parameter;
        return config ? kExitConfig : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
