#pragma once

// Stochastic quantum walk: density-matrix evolution under
//
//   d rho / dt = -i kappa [H, rho]
//                - gamma sum_k ( 1/2 L_k^dag L_k rho + 1/2 rho L_k^dag L_k - L_k rho L_k^dag )
//
// with H from build_hamiltonian and L_k = |to><from| from build_jump_operators.
//
// Times are measured in units of 1/gamma: the integrator runs on tau = gamma t
// with coherent strength kappa / gamma and unit dissipation. With gamma = 0
// there is no such unit and tau = t.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sqw/errors.hpp"
#include "sqw/hypercube.hpp"
#include "sqw/numerics.hpp"
#include "sqw/tolerances.hpp"

namespace sqw {

class DensityMatrix {
public:
    /// Validates Hermiticity, unit trace and positivity.
    explicit DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
        if (!rho_.is_square()) throw ConfigError("density matrix must be square");
        const double herm = anti_hermitian_residual(rho_);
        if (herm > tol::hermiticity) throw ConfigError("density matrix is not Hermitian (residual " + std::to_string(herm) + ")");
        const double drift = std::abs(rho_.trace() - 1.0);
        if (drift > tol::trace_drift) throw ConfigError("density matrix trace differs from 1 by " + std::to_string(drift));
        const double lmin = hermitian_eigenvalues(rho_).front();
        if (lmin < tol::positivity) throw ConfigError("density matrix has eigenvalue " + std::to_string(lmin));
    }

    static DensityMatrix basis_state(std::size_t dim, std::size_t index) {
        if (index >= dim) throw ConfigError("basis state index out of range");
        ComplexMatrix m(dim, dim);
        m(index, index) = 1.0;
        return DensityMatrix(std::move(m));
    }

    /// |psi><psi| for a normalised amplitude vector.
    static DensityMatrix pure(std::span<const complex> psi) {
        ComplexMatrix m(psi.size(), psi.size());
        for (std::size_t i = 0; i < psi.size(); ++i)
            for (std::size_t j = 0; j < psi.size(); ++j) m(i, j) = psi[i] * std::conj(psi[j]);
        return DensityMatrix(std::move(m));
    }

    static DensityMatrix diagonal(std::span<const double> p) {
        ComplexMatrix m(p.size(), p.size());
        for (std::size_t i = 0; i < p.size(); ++i) m(i, i) = p[i];
        return DensityMatrix(std::move(m));
    }

    static DensityMatrix maximally_mixed(std::size_t dim) {
        ComplexMatrix m = ComplexMatrix::identity(dim);
        m *= 1.0 / static_cast<double>(dim);
        return DensityMatrix(std::move(m));
    }

    std::size_t dim() const noexcept { return rho_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return rho_; }

private:
    ComplexMatrix rho_;
};

struct WalkParams {
    double kappa = 1.0;
    double gamma = 1.0;
    double t_max = 50.0;         // in units of 1/gamma
    double dt = tol::default_dt; // in units of 1/gamma
    double sample_every = 0.05;  // in units of 1/gamma

    void validate() const {
        if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("kappa must be >= 0");
        if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be >= 0");
        if (kappa == 0.0 && gamma == 0.0) throw ConfigError("kappa and gamma cannot both be zero");
        if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be positive");
        if (!(dt > 0.0 && dt <= 0.01)) throw ConfigError("dt must lie in (0, 0.01]");
        if (!(sample_every >= dt)) throw ConfigError("sample_every must be >= dt");
        const double ratio = sample_every / dt;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
            throw ConfigError("sample_every must be an integer multiple of dt");
        }
        const double samples = t_max / sample_every;
        if (std::abs(samples - std::round(samples)) > 1e-9 * samples) {
            throw ConfigError("t_max must be an integer multiple of sample_every");
        }
    }

    std::size_t steps_per_sample() const { return static_cast<std::size_t>(std::llround(sample_every / dt)); }
    std::size_t sample_count() const { return static_cast<std::size_t>(std::llround(t_max / sample_every)) + 1; }
};

struct Trajectory {
    std::size_t n = 0;                    // qurons; populations have 2^n entries
    std::vector<Vertex> sinks;
    std::vector<double> times;            // units of 1/gamma
    std::vector<std::vector<double>> populations;
    std::vector<double> trace_drift;
    std::vector<double> anti_hermitian;
    std::vector<double> min_eigenvalue;
    std::vector<double> purity;

    std::size_t size() const noexcept { return times.size(); }

    double sink_population(std::size_t sample) const {
        double s = 0.0;
        for (Vertex v : sinks) s += populations.at(sample)[v];
        return s;
    }
};

/// Right-hand side of the master equation, with H stored as a sparse
/// triplet list. Jump operators are rank-one, so each dissipator term touches
/// one row, one column and one diagonal entry.
class GklsGenerator {
public:
    GklsGenerator(const ComplexMatrix& h, std::vector<JumpOperator> jumps, double kappa, double gamma)
        : dim_(h.rows()), jumps_(std::move(jumps)), kappa_(kappa), gamma_(gamma) {
        if (!h.is_square()) throw ContractViolation("Hamiltonian is not square");
        if (anti_hermitian_residual(h) > tol::hermiticity) throw ContractViolation("Hamiltonian is not Hermitian");
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                if (h(i, j) != complex{}) entries_.push_back({i, j, h(i, j)});
        for (const auto& op : jumps_) {
            if (op.from >= dim_ || op.to >= dim_) throw ContractViolation("jump operator outside the state space");
        }
    }

    std::size_t dim() const noexcept { return dim_; }

    ComplexMatrix operator()(const ComplexMatrix& rho) const {
        if (rho.rows() != dim_ || rho.cols() != dim_) throw ContractViolation("lindblad_rhs: dimension mismatch");
        ComplexMatrix out(dim_, dim_);
        if (kappa_ != 0.0) {
            const complex minus_i_kappa{0.0, -kappa_};
            for (const auto& e : entries_) {
                const complex hv = minus_i_kappa * e.value;
                // -i kappa (H rho)_{r,:} and +i kappa (rho H)_{:,c}
                for (std::size_t k = 0; k < dim_; ++k) {
                    out(e.row, k) += hv * rho(e.col, k);
                    out(k, e.col) -= hv * rho(k, e.row);
                }
            }
        }
        if (gamma_ != 0.0) {
            const double half = 0.5 * gamma_;
            for (const auto& op : jumps_) {
                const std::size_t i = op.from;
                for (std::size_t k = 0; k < dim_; ++k) {
                    out(i, k) -= half * rho(i, k);
                    out(k, i) -= half * rho(k, i);
                }
                out(op.to, op.to) += gamma_ * rho(i, i);
            }
        }
        return out;
    }

private:
    struct Entry {
        std::size_t row;
        std::size_t col;
        complex value;
    };

    std::size_t dim_;
    std::vector<Entry> entries_;
    std::vector<JumpOperator> jumps_;
    double kappa_;
    double gamma_;
};

inline ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const ComplexMatrix& h, std::span<const JumpOperator> jumps,
                                  double kappa, double gamma) {
    if (rho.rows() != h.rows() || rho.cols() != h.cols()) throw ContractViolation("lindblad_rhs: dimension mismatch");
    return GklsGenerator(h, {jumps.begin(), jumps.end()}, kappa, gamma)(rho);
}

/// Diagonal of rho with sub-1e-12 dust zeroed, renormalised to sum 1.
inline std::vector<double> populations(const ComplexMatrix& rho) {
    std::vector<double> p(rho.rows());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double v = rho(i, i).real();
        p[i] = v < tol::population_dust ? 0.0 : v;
        sum += p[i];
    }
    if (sum > 0.0)
        for (double& v : p) v /= sum;
    return p;
}

inline std::vector<double> populations(const DensityMatrix& rho) { return populations(rho.matrix()); }

/// tr(rho^2)
inline double purity(const ComplexMatrix& rho) {
    double s = 0.0;
    for (const auto& x : rho.data()) s += std::norm(x);
    return s;
}

inline double purity(const DensityMatrix& rho) { return purity(rho.matrix()); }

namespace detail {

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    ComplexMatrix h = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return h;
}

inline void record_sample(Trajectory& traj, double t, const ComplexMatrix& rho, double dt) {
    const double drift = std::abs(rho.trace() - 1.0);
    const bool finite = std::all_of(rho.data().begin(), rho.data().end(),
                                    [](const complex& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
    if (!finite) throw DiagnosticsError("density matrix is not finite at t = " + std::to_string(t) + "; retry with dt < " + std::to_string(dt));
    const double lmin = hermitian_eigenvalues(hermitian_part(rho)).front();
    traj.times.push_back(t);
    traj.populations.push_back(populations(rho));
    traj.trace_drift.push_back(drift);
    traj.anti_hermitian.push_back(anti_hermitian_residual(rho));
    traj.min_eigenvalue.push_back(lmin);
    traj.purity.push_back(purity(rho));
    if (!(drift <= tol::integrator_trace_limit) || !(lmin >= tol::integrator_eigen_limit)) {
        throw DiagnosticsError("density matrix left the physical region at t = " + std::to_string(t) +
                               " (trace drift " + std::to_string(drift) + ", min eigenvalue " + std::to_string(lmin) +
                               "); retry with dt < " + std::to_string(dt));
    }
}

} // namespace detail

/// RK4 integration from rho0 up to params.t_max, sampling every
/// params.sample_every.
inline Trajectory evolve(const DensityMatrix& rho0, const HypercubeSpec& spec, const WalkParams& params) {
    spec.validate();
    params.validate();
    if (rho0.dim() != spec.dimension()) throw ConfigError("initial state dimension does not match 2^N");

    const double unit = params.gamma > 0.0 ? params.gamma : 1.0;
    const GklsGenerator rhs(build_hamiltonian(spec), build_jump_operators(spec), params.kappa / unit,
                            params.gamma / unit);

    Trajectory traj;
    traj.n = spec.n;
    traj.sinks = spec.sink_vertices();
    const std::size_t samples = params.sample_count();
    const std::size_t stride = params.steps_per_sample();
    traj.times.reserve(samples);

    ComplexMatrix rho = rho0.matrix();
    const auto f = [&rhs](double, const ComplexMatrix& r) { return rhs(r); };
    detail::record_sample(traj, 0.0, rho, params.dt);
    for (std::size_t s = 1; s < samples; ++s) {
        for (std::size_t k = 0; k < stride; ++k) {
            const double t = static_cast<double>((s - 1) * stride + k) * params.dt;
            rho = rk4_step(f, rho, t, params.dt);
        }
        detail::record_sample(traj, static_cast<double>(s) * params.sample_every, rho, params.dt);
    }
    return traj;
}

inline constexpr double default_mixing_epsilon = 1e-3;
inline constexpr double default_sink_threshold = 0.99;

/// Earliest sample time after which the populations stay within epsilon
/// (max norm) of the final populations. Returns 0 when the final sink
/// population is below sink_threshold, i.e. the walk did not retrieve a
/// memory.
inline double mixing_time(const Trajectory& traj, double epsilon = default_mixing_epsilon,
                          double sink_threshold = default_sink_threshold) {
    if (traj.size() == 0) throw ContractViolation("mixing_time: empty trajectory");
    const std::size_t last = traj.size() - 1;
    if (traj.sink_population(last) < sink_threshold) return 0.0;
    const auto& final = traj.populations[last];
    std::size_t first = traj.size();
    while (first > 0) {
        const auto& p = traj.populations[first - 1];
        double dev = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) dev = std::max(dev, std::abs(p[i] - final[i]));
        if (dev >= epsilon) break;
        --first;
    }
    return traj.times[first];
}

} // namespace sqw
