#pragma once

// Binary (McCulloch-Pitts) Hopfield network: patterns, weights, the
// asynchronous update rule, the Ising-type energy and Hebbian storage.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sqw/errors.hpp"

namespace sqw {

/// Firing pattern of N binary neurons. Neuron 1 is written first in the
/// string form, e.g. "101".
class Pattern {
public:
    Pattern() = default;

    explicit Pattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
        if (bits_.empty()) throw ConfigError("pattern must have at least one bit");
        for (auto b : bits_) {
            if (b > 1) throw ConfigError("pattern bits must be 0 or 1");
        }
    }

    static Pattern parse(std::string_view text) {
        if (text.empty()) throw ConfigError("empty pattern string");
        std::vector<std::uint8_t> bits;
        bits.reserve(text.size());
        for (char c : text) {
            if (c != '0' && c != '1') {
                throw ConfigError("pattern '" + std::string(text) + "' contains a character other than 0/1");
            }
            bits.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return Pattern(std::move(bits));
    }

    static Pattern zeros(std::size_t n) { return Pattern(std::vector<std::uint8_t>(n, 0)); }

    std::size_t size() const noexcept { return bits_.size(); }
    std::uint8_t operator[](std::size_t i) const { return bits_.at(i); }

    void set(std::size_t i, std::uint8_t bit) {
        if (bit > 1) throw ContractViolation("pattern bits must be 0 or 1");
        bits_.at(i) = bit;
    }

    Pattern flipped(std::size_t i) const {
        Pattern p = *this;
        p.bits_.at(i) ^= 1u;
        return p;
    }

    std::string str() const {
        std::string s(bits_.size(), '0');
        for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
        return s;
    }

    friend bool operator==(const Pattern&, const Pattern&) = default;
    friend auto operator<=>(const Pattern&, const Pattern&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Symmetric, zero-diagonal neuron coupling matrix with entries in [-1, 1].
class WeightMatrix {
public:
    WeightMatrix() = default;

    explicit WeightMatrix(std::size_t n) : n_(n), w_(n * n, 0.0) {
        if (n == 0) throw ConfigError("weight matrix needs at least one neuron");
    }

    WeightMatrix(std::size_t n, std::vector<double> entries) : n_(n), w_(std::move(entries)) {
        if (n == 0) throw ConfigError("weight matrix needs at least one neuron");
        if (w_.size() != n * n) throw ConfigError("weight matrix entry count is not N*N");
        validate();
    }

    static WeightMatrix from_rows(const std::vector<std::vector<double>>& rows) {
        const std::size_t n = rows.size();
        std::vector<double> flat;
        flat.reserve(n * n);
        for (const auto& r : rows) {
            if (r.size() != n) throw ConfigError("weight matrix must be square");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return WeightMatrix(n, std::move(flat));
    }

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }

    /// Sets w_ij and w_ji together.
    void set(std::size_t i, std::size_t j, double value) {
        if (i >= n_ || j >= n_) throw ContractViolation("weight index out of range");
        if (i == j && value != 0.0) throw ConfigError("self-coupling w_ii must be zero");
        if (!(std::abs(value) <= 1.0)) throw ConfigError("weights must lie in [-1, 1]");
        w_[i * n_ + j] = value;
        w_[j * n_ + i] = value;
    }

private:
    void validate() const {
        for (std::size_t i = 0; i < n_; ++i) {
            if ((*this)(i, i) != 0.0) throw ConfigError("self-coupling w_ii must be zero");
            for (std::size_t j = 0; j < n_; ++j) {
                const double v = (*this)(i, j);
                if (!(std::abs(v) <= 1.0)) throw ConfigError("weights must lie in [-1, 1]");
                if (v != (*this)(j, i)) throw ConfigError("weight matrix must be symmetric");
            }
        }
    }

    std::size_t n_ = 0;
    std::vector<double> w_;
};

class Thresholds {
public:
    Thresholds() = default;
    explicit Thresholds(std::vector<double> theta) : theta_(std::move(theta)) {
        for (double t : theta_) {
            if (!std::isfinite(t)) throw ConfigError("thresholds must be finite");
        }
    }
    static Thresholds zeros(std::size_t n) { return Thresholds(std::vector<double>(n, 0.0)); }

    std::size_t size() const noexcept { return theta_.size(); }
    double operator[](std::size_t i) const { return theta_.at(i); }

private:
    std::vector<double> theta_;
};

/// `standard` fires when the weighted input reaches the threshold (ties
/// fire). `as_printed` fires when the input is at most the threshold.
enum class ThresholdSense { standard, as_printed };

enum class UpdateOrder { cyclic, random };

inline std::size_t hamming(const Pattern& a, const Pattern& b) {
    if (a.size() != b.size()) throw ContractViolation("hamming: patterns differ in length");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

namespace detail {

inline void require_network_shape(const Pattern& s, const WeightMatrix& w, const Thresholds& theta) {
    if (w.size() != s.size() || theta.size() != s.size()) {
        throw ContractViolation("pattern, weights and thresholds must share N");
    }
}

inline double local_field(const Pattern& s, const WeightMatrix& w, std::size_t i) {
    double h = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (j != i) h += w(j, i) * s[j];
    }
    return h;
}

} // namespace detail

inline std::uint8_t update_neuron(const Pattern& state, const WeightMatrix& w, const Thresholds& theta,
                                  std::size_t i, ThresholdSense sense = ThresholdSense::standard) {
    detail::require_network_shape(state, w, theta);
    if (i >= state.size()) throw ContractViolation("update_neuron: neuron index out of range");
    const double h = detail::local_field(state, w, i);
    if (sense == ThresholdSense::standard) return h >= theta[i] ? 1 : 0;
    return h <= theta[i] ? 1 : 0;
}

/// E = -1/2 sum_ij w_ij x_i x_j + sum_i theta_i x_i
inline double energy(const Pattern& state, const WeightMatrix& w, const Thresholds& theta) {
    detail::require_network_shape(state, w, theta);
    double e = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (!state[i]) continue;
        for (std::size_t j = 0; j < state.size(); ++j) e -= 0.5 * w(i, j) * state[j];
        e += theta[i];
    }
    return e;
}

struct AsyncRun {
    std::vector<Pattern> trajectory; // initial state, then every state after a neuron flip
    std::vector<double> energies;    // energy of each trajectory entry
    bool converged = false;          // last sweep changed nothing
    std::size_t sweeps = 0;
    std::size_t flips = 0;

    const Pattern& final_state() const { return trajectory.back(); }
};

struct AsyncOptions {
    UpdateOrder order = UpdateOrder::cyclic;
    std::size_t max_sweeps = 100;
    std::uint64_t seed = 0;
    ThresholdSense sense = ThresholdSense::standard;
};

/// Asynchronous single-neuron updates until a sweep leaves the state
/// unchanged or max_sweeps is used up.
inline AsyncRun run_async(const Pattern& initial, const WeightMatrix& w, const Thresholds& theta,
                          const AsyncOptions& opts = {}) {
    detail::require_network_shape(initial, w, theta);
    const std::size_t n = initial.size();
    std::mt19937_64 rng(opts.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    AsyncRun run;
    Pattern state = initial;
    run.trajectory.push_back(state);
    run.energies.push_back(energy(state, w, theta));

    while (run.sweeps < opts.max_sweeps) {
        if (opts.order == UpdateOrder::random) std::shuffle(order.begin(), order.end(), rng);
        ++run.sweeps;
        bool changed = false;
        for (std::size_t i : order) {
            const std::uint8_t next = update_neuron(state, w, theta, i, opts.sense);
            if (next == state[i]) continue;
            state.set(i, next);
            changed = true;
            ++run.flips;
            run.trajectory.push_back(state);
            run.energies.push_back(energy(state, w, theta));
        }
        if (!changed) {
            run.converged = true;
            break;
        }
    }
    return run;
}

/// Hebb rule on +/-1 spins: w_ij = (1/P) sum_mu s_i s_j with s = 2x - 1,
/// zero diagonal, clamped to [-1, 1].
inline WeightMatrix hebbian_store(const std::vector<Pattern>& patterns) {
    if (patterns.empty()) throw ConfigError("hebbian_store: no patterns to store");
    const std::size_t n = patterns.front().size();
    for (const auto& p : patterns) {
        if (p.size() != n) throw ConfigError("hebbian_store: patterns differ in length");
    }
    WeightMatrix w(n);
    const double inv_p = 1.0 / static_cast<double>(patterns.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (const auto& p : patterns) s += (2.0 * p[i] - 1.0) * (2.0 * p[j] - 1.0);
            w.set(i, j, std::clamp(s * inv_p, -1.0, 1.0));
        }
    }
    return w;
}

} // namespace sqw
