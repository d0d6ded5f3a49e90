#pragma once

// Network structures for the oscillator reservoir: complete graphs (regular
// synchronization) and Erdos-Renyi G(n, p) graphs (explosive synchronization).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace krc {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Immutable symmetric 0/1 adjacency stored as compressed neighbour lists.
///
/// A self-loop (i, i) contributes 1 to k_i, matching A_ii = 1 in the degree
/// sum k_i = sum_j A_ij.
class NetworkSpec {
public:
    /// Builds from an undirected edge list. Duplicate edges are merged.
    /// Throws ConfigError for out-of-range endpoints or isolated nodes.
    static NetworkSpec from_edges(std::size_t n, std::span<const Edge> edges);

    std::size_t size() const { return n_; }
    std::span<const std::uint32_t> neighbors(std::size_t i) const
    {
        return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
    }
    std::span<const double> degrees() const { return degrees_; }
    double degree(std::size_t i) const { return degrees_[i]; }
    double mean_degree() const { return mean_degree_; }
    bool has_edge(std::size_t i, std::size_t j) const;

    /// True when A_ij = 1 for every i, j (diagonal included).
    bool is_complete() const { return complete_; }

    /// Isolated nodes that were attached by one random edge during generation.
    std::size_t repaired_isolates() const { return repaired_isolates_; }

    /// Undirected edge list with i <= j, sorted.
    std::vector<Edge> edges() const;

    bool operator==(const NetworkSpec& other) const
    {
        return n_ == other.n_ && offsets_ == other.offsets_ && adj_ == other.adj_;
    }

private:
    friend NetworkSpec erdos_renyi(std::size_t, double, std::uint64_t);

    std::size_t n_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> adj_;
    std::vector<double> degrees_;
    double mean_degree_ = 0.0;
    bool complete_ = false;
    std::size_t repaired_isolates_ = 0;
};

/// All-to-all graph including self-loops, so k_i = n. Requires n >= 2.
NetworkSpec complete_graph(std::size_t n);

/// G(n, p) with p = mean_degree / (n - 1), no self-loops. Every isolated node
/// is attached to one uniformly random partner so that k_i >= 1.
/// Requires 1 <= mean_degree < n.
NetworkSpec erdos_renyi(std::size_t n, double mean_degree, std::uint64_t seed);

/// Sizes of connected components, largest first.
std::vector<std::size_t> connected_components(const NetworkSpec& net);

/// Edge-list text format: header "n=<N>" then one "i j" pair per line.
void write_edge_list(std::ostream& os, const NetworkSpec& net);
NetworkSpec read_edge_list(std::istream& is);

} // namespace krc
