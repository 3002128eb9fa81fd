#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

#include "wadapt/matrix.hpp"

namespace wadapt {

using Edge = std::pair<int, int>;

/// Undirected contact network with its initial weight matrix.
///
/// Edges are stored as (i, j) with i < j, sorted and unique. The weight
/// matrix is symmetric, has a zero diagonal, entries in [0, 1], and is
/// positive exactly on the edge set. Immutable once constructed.
class Network {
public:
    /// Builds a network with unit weights on every edge.
    Network(int n, std::vector<Edge> edges);

    /// Builds a network from an explicit weight matrix; the edge set is
    /// derived from the positive entries.
    explicit Network(SquareMatrix w0);

    int n() const noexcept { return n_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const SquareMatrix& w0() const noexcept { return w0_; }

    int degree(int node) const;
    bool has_edge(int i, int j) const;

    bool operator==(const Network& other) const { return n_ == other.n_ && w0_ == other.w0_; }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    SquareMatrix w0_;
};

struct TopologyStats {
    double avg_degree = 0.0;
    double avg_clustering = 0.0;
    double density = 0.0;
};

/// Barabási–Albert preferential attachment. Starts from `m0` fully connected
/// nodes; every later node links to `m` distinct earlier nodes drawn with
/// probability proportional to their current degree.
Network generate_ba(int n, int m0, int m, std::uint64_t seed);

TopologyStats topology_stats(const Network& net);

inline constexpr double kSpectralTol = 1e-10;
inline constexpr int kSpectralMaxIter = 10000;

/// Largest eigenvalue of a nonnegative square matrix by power iteration on
/// (A + I), started from the all-ones vector. The identity shift keeps the
/// Perron root strictly dominant for bipartite graphs.
double spectral_radius(const SquareMatrix& a, double tol = kSpectralTol);

/// 1 / spectral_radius(w0).
double epidemic_threshold(const Network& net);

// CSV with header `i,j,w`, one row per directed nonzero weight.
void write_network_csv(const Network& net, std::ostream& out);
void save_network(const Network& net, const std::filesystem::path& path);
// The node count is max(id) + 1, or `min_nodes` if larger (isolated trailing
// nodes do not appear in the edge list).
Network read_network_csv(std::istream& in, int min_nodes = 0);
Network load_network(const std::filesystem::path& path, int min_nodes = 0);

} // namespace wadapt
