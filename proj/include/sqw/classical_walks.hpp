#pragma once

// Classical Markov chains: the discrete row-stochastic walk, its stationary
// distribution, and the continuous-time chain used as the kappa = 0 oracle of
// the stochastic quantum walk.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqw/errors.hpp"
#include "sqw/numerics.hpp"
#include "sqw/tolerances.hpp"

namespace sqw {

class ProbabilityVector {
public:
    ProbabilityVector() = default;
    explicit ProbabilityVector(std::vector<double> p) : p_(std::move(p)) {
        if (p_.empty()) throw ConfigError("probability vector is empty");
        double sum = 0.0;
        for (double x : p_) {
            if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("probability entries must lie in [0, 1]");
            sum += x;
        }
        if (std::abs(sum - 1.0) > tol::stochastic) {
            throw ConfigError("probability vector sums to " + std::to_string(sum));
        }
    }

    static ProbabilityVector delta(std::size_t n, std::size_t at) {
        std::vector<double> p(n, 0.0);
        p.at(at) = 1.0;
        return ProbabilityVector(std::move(p));
    }

    static ProbabilityVector uniform(std::size_t n) {
        return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const { return p_.at(i); }
    std::span<const double> values() const noexcept { return p_; }

private:
    std::vector<double> p_;
};

/// Row-stochastic matrix: m(i, j) is the weight of the edge i -> j.
class StochasticMatrix {
public:
    StochasticMatrix() = default;
    explicit StochasticMatrix(const std::vector<std::vector<double>>& rows) : n_(rows.size()) {
        if (n_ == 0) throw ConfigError("stochastic matrix is empty");
        m_.reserve(n_ * n_);
        for (const auto& r : rows) {
            if (r.size() != n_) throw ConfigError("stochastic matrix must be square");
            double sum = 0.0;
            for (double x : r) {
                if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("stochastic matrix entries must lie in [0, 1]");
                sum += x;
            }
            if (std::abs(sum - 1.0) > tol::stochastic) {
                throw ConfigError("stochastic matrix row sums to " + std::to_string(sum));
            }
            m_.insert(m_.end(), r.begin(), r.end());
        }
    }

    static StochasticMatrix identity(std::size_t n) {
        std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
        return StochasticMatrix(rows);
    }

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<double> m_;
};

/// Generator of a continuous-time chain acting on column vectors:
/// off-diagonal q(j, i) >= 0 is the rate i -> j, every column sums to zero.
class RateMatrix {
public:
    RateMatrix() = default;
    RateMatrix(std::size_t n, std::vector<double> entries) : n_(n), q_(std::move(entries)) {
        if (n_ == 0 || q_.size() != n_ * n_) throw ConfigError("rate matrix must be N*N with N >= 1");
        for (std::size_t j = 0; j < n_; ++j) {
            double col = 0.0;
            double scale = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                const double v = (*this)(i, j);
                if (i != j && v < 0.0) throw ConfigError("rate matrix off-diagonal entries must be >= 0");
                col += v;
                scale = std::max(scale, std::abs(v));
            }
            if (std::abs(col) > tol::stochastic * std::max(1.0, scale)) {
                throw ConfigError("rate matrix column sums to " + std::to_string(col));
            }
        }
    }

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return q_[i * n_ + j]; }

private:
    std::size_t n_ = 0;
    std::vector<double> q_;
};

/// pi'_j = sum_i m_ij pi_i
inline ProbabilityVector step(const StochasticMatrix& m, const ProbabilityVector& pi) {
    if (m.size() != pi.size()) throw ContractViolation("step: dimension mismatch");
    const std::size_t n = m.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double pi_i = pi[i];
        if (pi_i == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) out[j] += m(i, j) * pi_i;
    }
    double sum = 0.0;
    for (double& x : out) {
        x = std::clamp(x, 0.0, 1.0);
        sum += x;
    }
    for (double& x : out) x /= sum;
    return ProbabilityVector(std::move(out));
}

struct StationaryResult {
    ProbabilityVector distribution;
    bool converged = false;
    bool unique = true; // false when the chain has more than one closed class
    std::size_t iterations = 0;
    double residual = 0.0; // max |step(pi) - pi|
};

namespace detail {

/// Number of closed communicating classes of the support graph of m.
inline std::size_t closed_class_count(const StochasticMatrix& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        reach[i][i] = true;
        for (std::size_t j = 0; j < n; ++j)
            if (m(i, j) > 0.0) reach[i][j] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;

    std::vector<bool> seen(n, false);
    std::size_t closed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        bool is_closed = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (reach[i][j] && reach[j][i]) seen[j] = true;
            if (reach[i][j] && !reach[j][i]) is_closed = false;
        }
        if (is_closed) ++closed;
    }
    return closed;
}

} // namespace detail

inline constexpr std::size_t stationary_iteration_cap = 1'000'000;

/// Power iteration from `start` (uniform when omitted).
inline StationaryResult stationary(const StochasticMatrix& m, double tolerance = 1e-10,
                                   const ProbabilityVector* start = nullptr) {
    const std::size_t n = m.size();
    ProbabilityVector pi = start ? *start : ProbabilityVector::uniform(n);
    if (pi.size() != n) throw ContractViolation("stationary: start vector has wrong length");

    StationaryResult result{pi};
    result.unique = detail::closed_class_count(m) == 1;
    for (std::size_t it = 0; it < stationary_iteration_cap; ++it) {
        ProbabilityVector next = step(m, pi);
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(next[i] - pi[i]));
        result.iterations = it + 1;
        result.residual = r;
        if (r < tolerance) {
            result.converged = true;
            result.distribution = pi;
            return result;
        }
        pi = std::move(next);
    }
    result.distribution = pi;
    return result;
}

/// Q = M^T - I, the conserving generator associated with a row-stochastic M.
inline RateMatrix generator_from_stochastic(const StochasticMatrix& m) {
    const std::size_t n = m.size();
    std::vector<double> q(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q[i * n + j] = m(j, i) - (i == j ? 1.0 : 0.0);
    return RateMatrix(n, std::move(q));
}

/// Generator with one rate-`rate` transition per (from, to) pair.
inline RateMatrix generator_from_transitions(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> moves,
                                             double rate = 1.0) {
    std::vector<double> q(n * n, 0.0);
    for (const auto& [from, to] : moves) {
        if (from >= n || to >= n || from == to) throw ContractViolation("invalid transition");
        q[to * n + from] += rate;
        q[from * n + from] -= rate;
    }
    return RateMatrix(n, std::move(q));
}

/// exp(Q t) as a dense matrix.
inline ComplexMatrix ctmc_propagator(const RateMatrix& q, double t) {
    const std::size_t n = q.size();
    ComplexMatrix qt(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) qt(i, j) = q(i, j) * t;
    return expm(qt);
}

/// Applies a propagator to a distribution, clamping round-off and
/// renormalising.
inline ProbabilityVector propagate(const ComplexMatrix& propagator, const ProbabilityVector& pi) {
    const std::size_t n = pi.size();
    if (propagator.rows() != n || propagator.cols() != n) throw ContractViolation("propagate: dimension mismatch");
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i] += propagator(i, j).real() * pi[j];
    double sum = 0.0;
    for (double& x : out) {
        x = std::clamp(x, 0.0, 1.0);
        sum += x;
    }
    for (double& x : out) x /= sum;
    return ProbabilityVector(std::move(out));
}

/// exp(Q t) pi0
inline ProbabilityVector ctmc_evolve(const RateMatrix& q, const ProbabilityVector& pi0, double t) {
    if (q.size() != pi0.size()) throw ContractViolation("ctmc_evolve: dimension mismatch");
    if (!(t >= 0.0)) throw ContractViolation("ctmc_evolve: negative time");
    if (t == 0.0) return pi0;
    return propagate(ctmc_propagator(q, t), pi0);
}

} // namespace sqw
