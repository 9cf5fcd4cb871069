#pragma once

// Discrete coined walks. Coins are plain 2x2 matrices; unitarity is checked,
// never assumed, because the neuron coin is not unitary away from p = 1/2.
// The reference walk lives on the integer line.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sqw/errors.hpp"
#include "sqw/hopfield.hpp"
#include "sqw/numerics.hpp"
#include "sqw/tolerances.hpp"

namespace sqw {

/// 2x2 coin. Column k holds the image of basis state |k>.
class CoinOperator {
public:
    CoinOperator(complex c00, complex c01, complex c10, complex c11) : m_{c00, c01, c10, c11} {}

    complex operator()(std::size_t r, std::size_t c) const { return m_[2 * r + c]; }

    std::array<complex, 2> apply(complex a0, complex a1) const {
        return {m_[0] * a0 + m_[1] * a1, m_[2] * a0 + m_[3] * a1};
    }

    ComplexMatrix matrix() const { return {{m_[0], m_[1]}, {m_[2], m_[3]}}; }

private:
    std::array<complex, 4> m_;
};

/// Normalised quron state alpha|0> + beta|1>.
class QuronAmplitudes {
public:
    QuronAmplitudes(complex alpha, complex beta) : alpha_(alpha), beta_(beta) {
        const double n = std::norm(alpha) + std::norm(beta);
        if (std::abs(n - 1.0) > tol::amplitude_norm) {
            throw ConfigError("quron amplitudes are not normalised: |a|^2 + |b|^2 = " + std::to_string(n));
        }
    }

    complex alpha() const noexcept { return alpha_; }
    complex beta() const noexcept { return beta_; }
    double firing_probability() const noexcept { return std::norm(beta_); }

private:
    complex alpha_;
    complex beta_;
};

inline CoinOperator hadamard_coin() {
    const double h = 1.0 / std::sqrt(2.0);
    return {h, h, h, -h};
}

namespace detail {
inline void require_probability(double p, const char* who) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(who) + ": p must lie in [0, 1]");
}
} // namespace detail

/// |0> -> sqrt(p)|0> + sqrt(1-p)|1>,  |1> -> sqrt(1-p)|0> - sqrt(p)|1>
inline CoinOperator biased_coin(double p) {
    detail::require_probability(p, "biased_coin");
    const double a = std::sqrt(p);
    const double b = std::sqrt(1.0 - p);
    return {a, b, b, -a};
}

/// |0> -> sqrt(1-p)|0> + sqrt(p)|1>,  |1> -> sqrt(1-p)|0> - sqrt(p)|1>
inline CoinOperator neuron_coin(double p) {
    detail::require_probability(p, "neuron_coin");
    const double a = std::sqrt(1.0 - p);
    const double b = std::sqrt(p);
    return {a, a, b, -b};
}

/// p_i = (sum_j w_ij x_j + (N - 1)) / (2 (N - 1))
inline double firing_probability(const WeightMatrix& w, const Pattern& state, std::size_t i) {
    const std::size_t n = state.size();
    if (w.size() != n) throw ContractViolation("firing_probability: weights and pattern differ in N");
    if (i >= n) throw ContractViolation("firing_probability: neuron index out of range");
    if (n < 2) throw ConfigError("firing_probability needs N >= 2");
    double h = 0.0;
    for (std::size_t j = 0; j < n; ++j) h += w(i, j) * state[j];
    const double norm = static_cast<double>(n - 1);
    return (h + norm) / (2.0 * norm);
}

struct UnitarityReport {
    bool unitary = false;
    double deviation = 0.0; // max-entry norm of C^dag C - I
};

inline UnitarityReport is_unitary(const CoinOperator& c, double tolerance = tol::unitarity) {
    const ComplexMatrix m = c.matrix();
    const ComplexMatrix gram = matmul(adjoint(m), m);
    const double dev = max_abs_diff(gram, ComplexMatrix::identity(2));
    return {dev < tolerance, dev};
}

/// Walker on positions -T..T with a two-state coin at every site.
class LineWalkerState {
public:
    LineWalkerState(std::size_t half_width, long position, complex coin0, complex coin1)
        : half_width_(half_width), amps_(2 * half_width + 1, {complex{}, complex{}}) {
        if (static_cast<std::size_t>(std::abs(position)) > half_width) {
            throw ConfigError("initial position outside the walker range");
        }
        const double n = std::norm(coin0) + std::norm(coin1);
        if (std::abs(n - 1.0) > tol::amplitude_norm) throw ConfigError("initial coin state is not normalised");
        at(position) = {coin0, coin1};
    }

    std::size_t half_width() const noexcept { return half_width_; }
    long min_position() const noexcept { return -static_cast<long>(half_width_); }
    long max_position() const noexcept { return static_cast<long>(half_width_); }

    std::array<complex, 2>& at(long x) { return amps_.at(static_cast<std::size_t>(x + static_cast<long>(half_width_))); }
    const std::array<complex, 2>& at(long x) const {
        return amps_.at(static_cast<std::size_t>(x + static_cast<long>(half_width_)));
    }

    double total_probability() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a[0]) + std::norm(a[1]);
        return s;
    }

    /// P(x) for x = -T..T
    std::vector<double> position_distribution() const {
        std::vector<double> p(amps_.size());
        for (std::size_t k = 0; k < amps_.size(); ++k) p[k] = std::norm(amps_[k][0]) + std::norm(amps_[k][1]);
        return p;
    }

private:
    std::size_t half_width_;
    std::vector<std::array<complex, 2>> amps_;
};

/// Coin on every site, then coin |0> moves left and coin |1> moves right.
inline LineWalkerState line_walk_step(const LineWalkerState& s, const CoinOperator& c) {
    const auto report = is_unitary(c);
    if (!report.unitary) throw NonUnitaryCoin(report.deviation);

    LineWalkerState next = s;
    for (long x = s.min_position(); x <= s.max_position(); ++x) next.at(x) = {complex{}, complex{}};
    for (long x = s.min_position(); x <= s.max_position(); ++x) {
        const auto& a = s.at(x);
        if (a[0] == complex{} && a[1] == complex{}) continue;
        const auto out = c.apply(a[0], a[1]);
        if ((x == s.min_position() && out[0] != complex{}) || (x == s.max_position() && out[1] != complex{})) {
            throw ContractViolation("line_walk_step: walker left the position range; enlarge it");
        }
        if (out[0] != complex{}) next.at(x - 1)[0] += out[0];
        if (out[1] != complex{}) next.at(x + 1)[1] += out[1];
    }
    return next;
}

/// Mean of the first T distributions in `history`.
inline std::vector<double> time_averaged_distribution(std::span<const std::vector<double>> history, std::size_t T) {
    if (T == 0) throw ConfigError("time_averaged_distribution: T must be positive");
    if (history.size() < T) throw ContractViolation("time_averaged_distribution: history shorter than T");
    std::vector<double> avg(history.front().size(), 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        if (history[t].size() != avg.size()) throw ContractViolation("time_averaged_distribution: ragged history");
        for (std::size_t x = 0; x < avg.size(); ++x) avg[x] += history[t][x];
    }
    for (double& v : avg) v /= static_cast<double>(T);
    return avg;
}

} // namespace sqw
