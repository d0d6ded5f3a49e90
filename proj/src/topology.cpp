#include "krc/topology.hpp"

#include "krc/error.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>

namespace krc {

NetworkSpec NetworkSpec::from_edges(std::size_t n, std::span<const Edge> edges)
{
    if (n == 0) {
        throw ConfigError("network must have at least one node");
    }
    std::vector<std::vector<std::uint32_t>> lists(n);
    for (const auto& [a, b] : edges) {
        if (a >= n || b >= n) {
            std::ostringstream msg;
            msg << "edge (" << a << ", " << b << ") out of range for n=" << n;
            throw ConfigError(msg.str());
        }
        lists[a].push_back(b);
        if (a != b) {
            lists[b].push_back(a);
        }
    }

    NetworkSpec net;
    net.n_ = n;
    net.offsets_.assign(n + 1, 0);
    net.degrees_.resize(n);
    double total = 0.0;
    bool complete = true;
    for (std::size_t i = 0; i < n; ++i) {
        auto& l = lists[i];
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
        if (l.empty()) {
            throw ConfigError("node " + std::to_string(i) + " is isolated (k_i = 0)");
        }
        complete = complete && l.size() == n;
        net.offsets_[i + 1] = net.offsets_[i] + l.size();
        net.degrees_[i] = static_cast<double>(l.size());
        total += net.degrees_[i];
    }
    net.adj_.reserve(net.offsets_[n]);
    for (const auto& l : lists) {
        net.adj_.insert(net.adj_.end(), l.begin(), l.end());
    }
    net.mean_degree_ = total / static_cast<double>(n);
    net.complete_ = complete;
    return net;
}

bool NetworkSpec::has_edge(std::size_t i, std::size_t j) const
{
    const auto nb = neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(j));
}

std::vector<Edge> NetworkSpec::edges() const
{
    std::vector<Edge> out;
    for (std::size_t i = 0; i < n_; ++i) {
        for (auto j : neighbors(i)) {
            if (j >= i) {
                out.emplace_back(static_cast<std::uint32_t>(i), j);
            }
        }
    }
    return out;
}

NetworkSpec complete_graph(std::size_t n)
{
    if (n < 2) {
        throw ConfigError("complete graph needs n >= 2");
    }
    std::vector<Edge> edges;
    edges.reserve(n * (n + 1) / 2);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i; j < n; ++j) {
            edges.emplace_back(i, j);
        }
    }
    return NetworkSpec::from_edges(n, edges);
}

NetworkSpec erdos_renyi(std::size_t n, double mean_degree, std::uint64_t seed)
{
    if (n < 2) {
        throw ConfigError("Erdos-Renyi graph needs n >= 2");
    }
    if (!(mean_degree >= 1.0) || !(mean_degree < static_cast<double>(n))) {
        std::ostringstream msg;
        msg << "mean degree " << mean_degree << " outside [1, " << n << ")";
        throw ConfigError(msg.str());
    }
    const double p = mean_degree / static_cast<double>(n - 1);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<Edge> edges;
    std::vector<std::uint32_t> deg(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            if (unit(rng) < p) {
                edges.emplace_back(i, j);
                ++deg[i];
                ++deg[j];
            }
        }
    }

    // Attach every isolated node to one random partner; k_i appears as a divisor.
    std::size_t repaired = 0;
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 2));
    for (std::uint32_t i = 0; i < n; ++i) {
        if (deg[i] != 0) {
            continue;
        }
        std::uint32_t j = pick(rng);
        if (j >= i) {
            ++j;
        }
        edges.emplace_back(std::min(i, j), std::max(i, j));
        ++deg[i];
        ++deg[j];
        ++repaired;
    }

    NetworkSpec net = NetworkSpec::from_edges(n, edges);
    net.repaired_isolates_ = repaired;
    return net;
}

std::vector<std::size_t> connected_components(const NetworkSpec& net)
{
    const std::size_t n = net.size();
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> sizes;
    std::queue<std::size_t> frontier;
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) {
            continue;
        }
        std::size_t count = 0;
        seen[start] = true;
        frontier.push(start);
        while (!frontier.empty()) {
            const std::size_t u = frontier.front();
            frontier.pop();
            ++count;
            for (auto v : net.neighbors(u)) {
                if (!seen[v]) {
                    seen[v] = true;
                    frontier.push(v);
                }
            }
        }
        sizes.push_back(count);
    }
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

void write_edge_list(std::ostream& os, const NetworkSpec& net)
{
    os << "n=" << net.size() << '\n';
    for (const auto& [i, j] : net.edges()) {
        os << i << ' ' << j << '\n';
    }
}

NetworkSpec read_edge_list(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line.rfind("n=", 0) != 0) {
        throw ConfigError("edge list must start with a header line \"n=<N>\"");
    }
    std::size_t n = 0;
    try {
        n = std::stoul(line.substr(2));
    } catch (const std::exception&) {
        throw ConfigError("malformed edge list header: " + line);
    }
    std::vector<Edge> edges;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        long long a = -1;
        long long b = -1;
        if (!(row >> a >> b) || a < 0 || b < 0) {
            throw ConfigError("malformed edge list line: " + line);
        }
        edges.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
    }
    return NetworkSpec::from_edges(n, edges);
}

} // namespace krc
