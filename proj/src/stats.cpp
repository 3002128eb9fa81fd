#include "wadapt/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>

#include "wadapt/csv.hpp"
#include "wadapt/error.hpp"

namespace wadapt {

std::vector<double> midranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t k = i;
        while (k + 1 < n && values[order[k + 1]] == values[order[i]])
            ++k;
        const double r = 0.5 * static_cast<double>(i + k) + 1.0;
        for (std::size_t m = i; m <= k; ++m)
            ranks[order[m]] = r;
        i = k + 1;
    }
    return ranks;
}

namespace {

struct Pooled {
    std::vector<double> ranks; ///< first |a| entries belong to a
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double w = 0.0;
};

Pooled pool(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty())
        throw Error(Errc::empty_sample, "rank-sum test needs two nonempty samples");
    std::vector<double> all(a.begin(), a.end());
    all.insert(all.end(), b.begin(), b.end());
    Pooled p;
    p.ranks = midranks(all);
    p.n1 = a.size();
    p.n2 = b.size();
    p.w = std::accumulate(p.ranks.begin(), p.ranks.begin() + static_cast<std::ptrdiff_t>(p.n1), 0.0);
    return p;
}

} // namespace

RankSumResult wilcoxon_rank_sum_exact(std::span<const double> a, std::span<const double> b)
{
    const Pooled p = pool(a, b);
    const std::size_t n = p.n1 + p.n2;
    if (n > 24)
        throw Error(Errc::invalid_parameter, "exact rank-sum enumeration limited to 24 pooled values");
    const double expected = 0.5 * static_cast<double>(p.n1) * static_cast<double>(n + 1);
    const double observed = std::abs(p.w - expected);
    // Rank sums are multiples of 0.5, so this slack only absorbs rounding.
    constexpr double slack = 1e-9;

    std::uint64_t total = 0;
    std::uint64_t extreme = 0;
    const std::uint32_t limit = std::uint32_t{1} << n;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != p.n1)
            continue;
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::uint32_t{1} << i))
                w += p.ranks[i];
        ++total;
        if (std::abs(w - expected) >= observed - slack)
            ++extreme;
    }
    return {p.w, static_cast<double>(extreme) / static_cast<double>(total), true};
}

RankSumResult wilcoxon_rank_sum_normal(std::span<const double> a, std::span<const double> b)
{
    const Pooled p = pool(a, b);
    const double n1 = static_cast<double>(p.n1);
    const double n2 = static_cast<double>(p.n2);
    const double n = n1 + n2;

    std::vector<double> sorted = p.ranks;
    std::sort(sorted.begin(), sorted.end());
    double ties = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t k = i;
        while (k < sorted.size() && sorted[k] == sorted[i])
            ++k;
        const double t = static_cast<double>(k - i);
        ties += t * t * t - t;
        i = k;
    }

    const double expected = 0.5 * n1 * (n + 1.0);
    double variance = n1 * n2 / 12.0 * (n + 1.0);
    if (n > 1.0)
        variance -= n1 * n2 / 12.0 * ties / (n * (n - 1.0));
    if (variance <= 0.0)
        return {p.w, 1.0, false};
    const double z = std::max(0.0, std::abs(p.w - expected) - 0.5) / std::sqrt(variance);
    return {p.w, std::min(1.0, std::erfc(z / std::sqrt(2.0))), false};
}

RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b)
{
    if (a.size() + b.size() <= kExactRankSumMax)
        return wilcoxon_rank_sum_exact(a, b);
    return wilcoxon_rank_sum_normal(a, b);
}

double mean(std::span<const double> v)
{
    if (v.empty())
        throw Error(Errc::empty_sample, "mean of empty sample");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v)
{
    if (v.size() < 2)
        return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v)
        ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<SummaryRow> summarize(std::span<const AlgorithmSamples> samples, std::string_view reference)
{
    const AlgorithmSamples* ref = nullptr;
    for (const auto& s : samples)
        if (s.algorithm == reference)
            ref = &s;

    std::vector<SummaryRow> rows;
    for (const auto& s : samples) {
        SummaryRow r;
        r.algorithm = s.algorithm;
        r.mean_ofv = mean(s.ofv);
        r.std = stddev(s.ofv);
        r.runs = s.ofv.size();
        r.feasible_runs = static_cast<std::size_t>(
            std::count_if(s.violation.begin(), s.violation.end(), [](double v) { return v <= kFeasibilityTol; }));
        if (ref && &s != ref)
            r.p_value = wilcoxon_rank_sum(s.ofv, ref->ofv).p_value;
        rows.push_back(std::move(r));
    }
    if (!rows.empty()) {
        auto it = std::min_element(rows.begin(), rows.end(),
                                   [](const SummaryRow& a, const SummaryRow& b) { return a.mean_ofv < b.mean_ofv; });
        it->best = true;
    }
    return rows;
}

void write_summary_csv(std::span<const SummaryRow> rows, std::ostream& out)
{
    out << "algorithm,mean_ofv,std,p_value,runs,feasible_runs,best\n";
    for (const auto& r : rows) {
        out << r.algorithm << ',' << csv::fmt(r.mean_ofv) << ',' << csv::fmt(r.std) << ','
            << (r.p_value ? csv::fmt(*r.p_value) : std::string("-")) << ',' << r.runs << ',' << r.feasible_runs
            << ',' << (r.best ? 1 : 0) << '\n';
    }
}

} // namespace wadapt
