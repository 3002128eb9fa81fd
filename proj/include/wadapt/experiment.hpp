#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wadapt/coevolve.hpp"
#include "wadapt/de_core.hpp"
#include "wadapt/dynamics.hpp"
#include "wadapt/graph.hpp"
#include "wadapt/stats.hpp"

namespace wadapt {

enum class Algorithm { nsde, nsde_c3, none, constant };

/// Canonical names: "nsde", "nsde-c3", "none", "constant".
std::string_view to_string(Algorithm a) noexcept;
/// Accepts the canonical names plus "nsde_c3".
Algorithm parse_algorithm(std::string_view name);

/// Everything one campaign needs. Defaults are the full-scale reference setup
/// (20-node BA network, beta 0.4, gamma 0.3, p0 0.153, T 10, NP 350,
/// Cr 0.9, 6.3e6 evaluations, 25 runs).
struct ExperimentConfig {
    // network
    int n = 20;
    int m0 = 5;
    int m = 5;
    std::uint64_t net_seed = 1;
    // epidemic
    double beta = 0.4;
    double gamma = 0.3;
    double p0 = 0.153;
    int horizon = 10;
    int substeps = kDefaultSubsteps;
    double budget = 700.0;
    // algorithm
    Algorithm algorithm = Algorithm::nsde_c3;
    int np = 350;
    double cr = 0.9;
    double fp = 0.5;
    std::size_t ds = 0; ///< 0: N (N - 1)
    std::size_t sub_fes = 0; ///< 0: 10 * np
    int cycles = 0;          ///< 0: as many as the budget allows
    std::size_t total_fes = 6'300'000;
    double gc_fraction = 0.2;
    double lambda = 10.0;
    bool count_all_evaluations = true;
    // campaign
    int runs = 25;
    std::uint64_t master_seed = 2024;

    /// Throws Errc::config describing the first invalid field.
    void validate() const;

    EpidemicParams epidemic() const;
    DEConfig de() const;
    RunBudget run_budget() const;
    C3Config c3() const;
    std::size_t dimension() const;

    /// Keys mirror the field names; unknown keys and wrong types are rejected
    /// with Errc::config. Missing keys keep their defaults.
    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);

/// Seed of run r: derive_seed(master_seed, r).
std::uint64_t run_seed(std::uint64_t master_seed, int run) noexcept;

struct RunRecord {
    int run = 0;
    std::uint64_t seed = 0;
    double ofv = 0.0;
    double violation = 0.0;
    bool feasible = false;
    std::string error; ///< non-empty when the run aborted
    std::vector<HistoryRow> history;
    std::vector<double> times;
    std::vector<double> infected;      ///< I(t) on `times`
    std::vector<double> total_weight;  ///< W(t) on `times`
    std::vector<double> best;          ///< reported decision vector
    double wall_seconds = 0.0;

    bool ok() const noexcept { return error.empty(); }
};

/// Runs the configured algorithm on `net`. Baselines give one deterministic
/// record; optimizers give `runs` records with seeds from run_seed. A run
/// whose dynamics fail is recorded with its error and the campaign goes on.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const Network& net);

/// Same, on the BA network described by the config.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

/// Writes `results.csv` plus, per run, `run_XXX/{history,trace_I,trace_W,schedule}.csv`.
/// Output bytes depend only on the records (no timestamps, no timings).
void write_experiment(const ExperimentConfig& cfg, std::span<const RunRecord> records,
                      const std::filesystem::path& outdir);

/// Reads `results.csv` from a campaign directory. Aborted runs are skipped.
AlgorithmSamples read_results(const std::filesystem::path& dir);

} // namespace wadapt
