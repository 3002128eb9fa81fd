#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wadapt {

struct RankSumResult {
    double statistic = 0.0; ///< sum of the (mid)ranks of the first sample
    double p_value = 1.0;   ///< two-sided
    bool exact = false;
};

/// Pooled sizes up to this use the exact permutation distribution.
inline constexpr std::size_t kExactRankSumMax = 12;

/// Two-sided Wilcoxon rank-sum test with midranks for ties. Exact
/// enumeration when |a| + |b| <= kExactRankSumMax, otherwise the normal
/// approximation with tie and continuity corrections.
RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

/// Enumerates every split of the pooled midranks. Cost grows as 2^(|a|+|b|);
/// refuses pooled sizes above 24.
RankSumResult wilcoxon_rank_sum_exact(std::span<const double> a, std::span<const double> b);

RankSumResult wilcoxon_rank_sum_normal(std::span<const double> a, std::span<const double> b);

/// Midranks (1-based) of `values`, ties sharing their average rank.
std::vector<double> midranks(std::span<const double> values);

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator); 0 for a single value.
double stddev(std::span<const double> v);

/// Final results of one algorithm across its runs.
struct AlgorithmSamples {
    std::string algorithm;
    std::vector<double> ofv;
    std::vector<double> violation;
};

inline constexpr double kFeasibilityTol = 1e-6;

struct SummaryRow {
    std::string algorithm;
    double mean_ofv = 0.0;
    double std = 0.0;
    std::optional<double> p_value; ///< empty for the reference algorithm
    std::size_t runs = 0;
    std::size_t feasible_runs = 0; ///< violation <= kFeasibilityTol
    bool best = false;             ///< lowest mean OFV
};

/// Mean ± std per algorithm and the rank-sum p-value of each against
/// `reference`. If the reference is absent every p-value stays empty.
std::vector<SummaryRow> summarize(std::span<const AlgorithmSamples> samples, std::string_view reference);

// `algorithm,mean_ofv,std,p_value,runs,feasible_runs,best`; "-" marks the
// reference p-value.
void write_summary_csv(std::span<const SummaryRow> rows, std::ostream& out);

} // namespace wadapt
