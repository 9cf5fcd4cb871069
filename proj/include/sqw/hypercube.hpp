#pragma once

// Graph ingredients of the stochastic quantum walk on the N-dimensional
// hypercube of firing patterns: the sink-isolated Hamiltonian (adjacency plus
// self-loops) and the directed jump operators that drain towards the sinks.
//
// Vertex indices read a pattern as a binary number with neuron 1 as the most
// significant bit, so "101" is vertex 5.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sqw/errors.hpp"
#include "sqw/hopfield.hpp"
#include "sqw/numerics.hpp"

namespace sqw {

using Vertex = std::uint32_t;

inline constexpr std::size_t max_hypercube_dimension = 12;

/// Which equidistant edges carry a jump operator. `strict` (default) gives
/// them none; `lte` gives them one in each direction.
enum class EquidistantRule { strict, lte };

inline Vertex vertex_index(const Pattern& p) {
    if (p.size() > max_hypercube_dimension) throw ContractViolation("vertex_index: pattern too long");
    Vertex v = 0;
    for (std::size_t i = 0; i < p.size(); ++i) v = (v << 1) | p[i];
    return v;
}

inline Pattern pattern_of(Vertex v, std::size_t n) {
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[n - 1 - i] = static_cast<std::uint8_t>((v >> i) & 1u);
    return Pattern(std::move(bits));
}

inline int hamming(Vertex a, Vertex b) { return std::popcount(a ^ b); }

struct HypercubeSpec {
    std::size_t n = 0;
    std::vector<Pattern> sinks;
    /// Overrides a_ij for vertex pairs at Hamming distance <= 1; key is (min, max).
    std::map<std::pair<Vertex, Vertex>, double> edge_weights;
    EquidistantRule equidistant = EquidistantRule::strict;

    std::size_t dimension() const { return std::size_t{1} << n; }

    std::vector<Vertex> sink_vertices() const {
        std::vector<Vertex> v;
        v.reserve(sinks.size());
        for (const auto& s : sinks) v.push_back(vertex_index(s));
        return v;
    }

    bool is_sink(Vertex v) const {
        for (const auto& s : sinks)
            if (vertex_index(s) == v) return true;
        return false;
    }

    /// a_ij, default 1.
    double weight(Vertex i, Vertex j) const {
        const auto it = edge_weights.find(std::minmax(i, j));
        return it == edge_weights.end() ? 1.0 : it->second;
    }

    void set_weight(const Pattern& a, const Pattern& b, double value) {
        if (a.size() != n || b.size() != n) throw ConfigError("edge weight pattern length differs from N");
        if (sqw::hamming(a, b) > 1) throw ConfigError("edge weight given for non-adjacent patterns " + a.str() + ", " + b.str());
        if (!(value > 0.0)) throw ConfigError("edge weights must be positive");
        edge_weights[std::minmax(vertex_index(a), vertex_index(b))] = value;
    }

    void validate() const {
        if (n == 0 || n > max_hypercube_dimension) throw ConfigError("hypercube dimension out of range");
        if (sinks.empty()) throw ConfigError("at least one sink is required");
        if (sinks.size() >= dimension()) throw ConfigError("every vertex is a sink");
        std::set<Pattern> seen;
        for (const auto& s : sinks) {
            if (s.size() != n) throw ConfigError("sink '" + s.str() + "' has length != N");
            if (!seen.insert(s).second) throw ConfigError("duplicate sink '" + s.str() + "'");
        }
        for (const auto& [key, w] : edge_weights) {
            if (key.first >= dimension() || key.second >= dimension() || hamming(key.first, key.second) > 1) {
                throw ConfigError("edge weight key is not a hypercube edge");
            }
            if (!(w > 0.0)) throw ConfigError("edge weights must be positive");
        }
    }
};

inline int min_sink_distance(Vertex v, const HypercubeSpec& spec) {
    int best = static_cast<int>(spec.n) + 1;
    for (const auto& s : spec.sinks) best = std::min(best, hamming(v, vertex_index(s)));
    return best;
}

inline std::vector<int> sink_distances(const HypercubeSpec& spec) {
    std::vector<int> d(spec.dimension());
    for (Vertex v = 0; v < d.size(); ++v) d[v] = min_sink_distance(v, spec);
    return d;
}

/// H_ij = a_ij for d_H(i, j) <= 1 when neither endpoint is a sink.
inline ComplexMatrix build_hamiltonian(const HypercubeSpec& spec) {
    spec.validate();
    const std::size_t dim = spec.dimension();
    ComplexMatrix h(dim, dim);
    for (Vertex i = 0; i < dim; ++i) {
        if (spec.is_sink(i)) continue;
        h(i, i) = spec.weight(i, i);
        for (std::size_t b = 0; b < spec.n; ++b) {
            const Vertex j = i ^ (Vertex{1} << b);
            if (!spec.is_sink(j)) h(i, j) = spec.weight(i, j);
        }
    }
    return h;
}

/// L = |to><from|
struct JumpOperator {
    Vertex from = 0;
    Vertex to = 0;

    friend bool operator==(const JumpOperator&, const JumpOperator&) = default;
    friend auto operator<=>(const JumpOperator&, const JumpOperator&) = default;
};

/// One operator per hypercube edge, pointing to the endpoint strictly closer
/// to the sink set. Sinks never emit.
inline std::vector<JumpOperator> build_jump_operators(const HypercubeSpec& spec) {
    spec.validate();
    const auto dist = sink_distances(spec);
    std::vector<JumpOperator> ops;
    for (Vertex i = 0; i < spec.dimension(); ++i) {
        for (std::size_t b = 0; b < spec.n; ++b) {
            const Vertex j = i ^ (Vertex{1} << b);
            if (j < i) continue;
            if (dist[j] < dist[i]) {
                ops.push_back({i, j});
            } else if (dist[i] < dist[j]) {
                ops.push_back({j, i});
            } else if (spec.equidistant == EquidistantRule::lte && dist[i] > 0) {
                ops.push_back({i, j});
                ops.push_back({j, i});
            }
        }
    }
    return ops;
}

/// True when every non-sink vertex has a directed jump path into a sink.
inline bool reachability_check(const HypercubeSpec& spec) {
    const auto ops = build_jump_operators(spec);
    const std::size_t dim = spec.dimension();
    std::vector<std::vector<Vertex>> reverse(dim);
    for (const auto& op : ops) reverse[op.to].push_back(op.from);

    std::vector<bool> reaches(dim, false);
    std::queue<Vertex> frontier;
    for (Vertex s : spec.sink_vertices()) {
        reaches[s] = true;
        frontier.push(s);
    }
    while (!frontier.empty()) {
        const Vertex v = frontier.front();
        frontier.pop();
        for (Vertex u : reverse[v]) {
            if (!reaches[u]) {
                reaches[u] = true;
                frontier.push(u);
            }
        }
    }
    return std::all_of(reaches.begin(), reaches.end(), [](bool r) { return r; });
}

} // namespace sqw
