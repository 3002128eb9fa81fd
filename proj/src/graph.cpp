#include "wadapt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "wadapt/csv.hpp"
#include "wadapt/error.hpp"
#include "wadapt/rng.hpp"

namespace wadapt {

namespace {

std::vector<Edge> normalize_edges(int n, std::vector<Edge> edges)
{
    for (auto& [i, j] : edges) {
        if (i < 0 || j < 0 || i >= n || j >= n)
            throw Error(Errc::invalid_parameter, "edge endpoint out of range");
        if (i == j)
            throw Error(Errc::invalid_parameter, "self-loop on node " + std::to_string(i));
        if (i > j)
            std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw Error(Errc::invalid_parameter, "duplicate edge");
    return edges;
}

} // namespace

Network::Network(int n, std::vector<Edge> edges)
    : n_(n)
{
    if (n < 1)
        throw Error(Errc::invalid_parameter, "network needs at least one node");
    edges_ = normalize_edges(n, std::move(edges));
    w0_ = SquareMatrix(static_cast<std::size_t>(n));
    for (auto [i, j] : edges_) {
        w0_(i, j) = 1.0;
        w0_(j, i) = 1.0;
    }
}

Network::Network(SquareMatrix w0)
    : n_(static_cast<int>(w0.size())), w0_(std::move(w0))
{
    if (n_ < 1)
        throw Error(Errc::invalid_parameter, "network needs at least one node");
    for (int i = 0; i < n_; ++i) {
        if (w0_(i, i) != 0.0)
            throw Error(Errc::invalid_parameter, "nonzero diagonal weight at node " + std::to_string(i));
        for (int j = 0; j < n_; ++j) {
            double w = w0_(i, j);
            if (!(w >= 0.0 && w <= 1.0))
                throw Error(Errc::invalid_parameter, "weight outside [0,1]");
            if (w != w0_(j, i))
                throw Error(Errc::invalid_parameter, "weight matrix is not symmetric");
            if (i < j && w > 0.0)
                edges_.emplace_back(i, j);
        }
    }
}

int Network::degree(int node) const
{
    int k = 0;
    for (int j = 0; j < n_; ++j)
        k += w0_(node, j) > 0.0 ? 1 : 0;
    return k;
}

bool Network::has_edge(int i, int j) const
{
    return i != j && w0_(i, j) > 0.0;
}

Network generate_ba(int n, int m0, int m, std::uint64_t seed)
{
    if (m < 1 || m0 < 1 || m > m0 || m0 > n)
        throw Error(Errc::invalid_parameter, "BA generator requires 1 <= m <= m0 <= n");

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m0 * (m0 - 1) / 2 + (n - m0) * m));

    // Every endpoint appears once per incident edge, so a uniform draw from
    // this list is a degree-proportional draw.
    std::vector<int> endpoints;
    for (int i = 0; i < m0; ++i) {
        for (int j = i + 1; j < m0; ++j) {
            edges.emplace_back(i, j);
            endpoints.push_back(i);
            endpoints.push_back(j);
        }
    }

    Rng rng(seed);
    std::vector<int> chosen;
    for (int v = m0; v < n; ++v) {
        chosen.clear();
        while (static_cast<int>(chosen.size()) < m) {
            int target;
            if (endpoints.empty()) {
                // single seed node: no degree mass yet
                target = std::uniform_int_distribution<int>(0, v - 1)(rng);
            } else {
                std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
                target = endpoints[pick(rng)];
            }
            if (std::find(chosen.begin(), chosen.end(), target) == chosen.end())
                chosen.push_back(target);
        }
        for (int u : chosen) {
            edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }
    return Network(n, std::move(edges));
}

TopologyStats topology_stats(const Network& net)
{
    const int n = net.n();
    if (n < 2)
        throw Error(Errc::invalid_parameter, "topology stats need n >= 2");

    const double e = static_cast<double>(net.edges().size());
    TopologyStats s;
    s.avg_degree = 2.0 * e / n;
    s.density = 2.0 * e / (static_cast<double>(n) * (n - 1));

    double sum_c = 0.0;
    std::vector<int> nbrs;
    for (int i = 0; i < n; ++i) {
        nbrs.clear();
        for (int j = 0; j < n; ++j)
            if (net.has_edge(i, j))
                nbrs.push_back(j);
        const std::size_t k = nbrs.size();
        if (k < 2)
            continue;
        int links = 0;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
                links += net.has_edge(nbrs[a], nbrs[b]) ? 1 : 0;
        sum_c += 2.0 * links / (static_cast<double>(k) * (k - 1));
    }
    s.avg_clustering = sum_c / n;
    return s;
}

double spectral_radius(const SquareMatrix& a, double tol)
{
    const std::size_t n = a.size();
    if (n == 0)
        throw Error(Errc::invalid_parameter, "empty matrix");
    for (double v : a.data())
        if (!(v >= 0.0) || !std::isfinite(v))
            throw Error(Errc::invalid_parameter, "spectral_radius expects a finite nonnegative matrix");

    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(n);
    double estimate = 0.0;
    double last_delta = 0.0;
    for (int iter = 0; iter < kSpectralMaxIter; ++iter) {
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double acc = x[i];
            auto r = a.row(i);
            for (std::size_t j = 0; j < n; ++j)
                acc += r[j] * x[j];
            y[i] = acc;
            norm += acc * acc;
        }
        norm = std::sqrt(norm);
        // x has unit norm, so ||(A+I)x|| estimates the shifted Perron root.
        const double next = norm - 1.0;
        for (std::size_t i = 0; i < n; ++i)
            x[i] = y[i] / norm;
        // Stop on the remaining error, not the last change: with contraction
        // ratio r the tail is about delta * r / (1 - r).
        const double delta = std::abs(next - estimate);
        if (iter > 1) {
            const double r = last_delta > 0.0 ? delta / last_delta : 0.0;
            const double tail = r < 1.0 ? delta * r / (1.0 - r) : delta;
            if (std::max(delta, tail) <= tol * std::max(1.0, std::abs(next)))
                return std::max(next, 0.0);
        }
        last_delta = delta;
        estimate = next;
    }
    throw Error(Errc::non_convergence, "power iteration did not converge");
}

double epidemic_threshold(const Network& net)
{
    const double lambda = spectral_radius(net.w0());
    if (lambda <= 0.0)
        throw Error(Errc::invalid_parameter, "spectral radius is zero; threshold undefined");
    return 1.0 / lambda;
}

void write_network_csv(const Network& net, std::ostream& out)
{
    out << "i,j,w\n";
    const int n = net.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (net.w0()(i, j) > 0.0)
                out << i << ',' << j << ',' << csv::fmt(net.w0()(i, j)) << '\n';
}

void save_network(const Network& net, const std::filesystem::path& path)
{
    auto out = csv::open_out(path);
    write_network_csv(net, out);
}

Network read_network_csv(std::istream& in, int min_nodes)
{
    std::string line;
    if (!std::getline(in, line) || csv::split(line) != std::vector<std::string>{"i", "j", "w"})
        throw Error(Errc::io, "network CSV must start with header 'i,j,w'");

    struct Row {
        long long i, j;
        double w;
    };
    std::vector<Row> rows;
    long long max_id = -1;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r")
            continue;
        auto f = csv::split(line);
        if (f.size() != 3)
            throw Error(Errc::io, "network CSV row needs 3 fields: " + line);
        Row r{csv::parse_int(f[0]), csv::parse_int(f[1]), csv::parse_double(f[2])};
        if (r.i < 0 || r.j < 0)
            throw Error(Errc::io, "negative node id");
        max_id = std::max({max_id, r.i, r.j});
        rows.push_back(r);
    }
    const long long n = std::max<long long>(max_id + 1, min_nodes);
    if (n < 1)
        throw Error(Errc::io, "network CSV has no nodes");

    SquareMatrix w(static_cast<std::size_t>(n));
    std::set<std::pair<long long, long long>> seen;
    for (const auto& r : rows) {
        if (!seen.emplace(r.i, r.j).second)
            throw Error(Errc::io, "duplicate row for pair " + std::to_string(r.i) + "," + std::to_string(r.j));
        if (!(r.w > 0.0))
            throw Error(Errc::io, "network CSV rows must carry positive weights");
        w(r.i, r.j) = r.w;
    }
    try {
        return Network(std::move(w));
    } catch (const Error& e) {
        throw Error(Errc::io, std::string("invalid network file: ") + e.what());
    }
}

Network load_network(const std::filesystem::path& path, int min_nodes)
{
    auto in = csv::open_in(path);
    return read_network_csv(in, min_nodes);
}

} // namespace wadapt
