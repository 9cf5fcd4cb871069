#pragma once

// Dense complex linear algebra used by the walk simulators: a small
// row-major matrix type, products, adjoints, a cyclic Jacobi eigensolver for
// Hermitian matrices, a generic RK4 step and a scaling-and-squaring matrix
// exponential. Dimensions stay below 64x64 (256x256 for superoperators in
// tests), so everything is written for clarity over cache tricks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqw/errors.hpp"
#include "sqw/tolerances.hpp"

namespace sqw {

using complex = std::complex<double>;
using RealVector = std::vector<double>;

class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {
        if (rows == 0 || cols == 0) {
            throw ContractViolation("ComplexMatrix: dimensions must be positive");
        }
    }

    ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        if (rows_ == 0 || cols_ == 0) {
            throw ContractViolation("ComplexMatrix: dimensions must be positive");
        }
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) {
                throw ContractViolation("ComplexMatrix: ragged initializer");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const complex> d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const complex& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<complex> data() noexcept { return data_; }
    std::span<const complex> data() const noexcept { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o, "+=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o, "-=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    ComplexMatrix& operator*=(complex s) noexcept {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, complex s) { return a *= s; }
    friend ComplexMatrix operator*(complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= s; }
    friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }

    complex trace() const {
        if (!is_square()) throw ContractViolation("trace: matrix is not square");
        complex t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

private:
    void require_same_shape(const ComplexMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw ContractViolation(std::string("ComplexMatrix ") + op + ": shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<complex> data_;
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ContractViolation("matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                                std::to_string(b.rows()) + ")");
    }
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const complex aik = a(i, k);
            if (aik == complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix r(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = std::conj(a(i, j));
    return r;
}

/// Largest entry modulus.
inline double max_abs(const ComplexMatrix& a) {
    double m = 0.0;
    for (const auto& x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ContractViolation("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

/// max_ij |a_ij - conj(a_ji)|
inline double anti_hermitian_residual(const ComplexMatrix& a) {
    if (!a.is_square()) throw ContractViolation("anti_hermitian_residual: matrix is not square");
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
    return m;
}

/// Maximum absolute row sum.
inline double norm_inf(const ComplexMatrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
        m = std::max(m, s);
    }
    return m;
}

inline std::vector<complex> apply(const ComplexMatrix& a, std::span<const complex> v) {
    if (a.cols() != v.size()) throw ContractViolation("apply: dimension mismatch");
    std::vector<complex> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        complex s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

struct HermitianEigen {
    RealVector values;     // non-decreasing
    ComplexMatrix vectors; // column k belongs to values[k]
};

namespace detail {

inline double off_diagonal_norm2(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return s;
}

inline HermitianEigen jacobi(ComplexMatrix a, bool want_vectors) {
    const std::size_t n = a.rows();
    ComplexMatrix v = want_vectors ? ComplexMatrix::identity(n) : ComplexMatrix{};

    double scale = 0.0;
    for (const auto& x : a.data()) scale += std::norm(x);
    const double stop = 1e-30 * std::max(scale, 1e-300);

    for (int sweep = 0; sweep < 100 && off_diagonal_norm2(a) > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const complex apq = a(p, q);
                const double g = std::abs(apq);
                if (g == 0.0) continue;
                const complex phase = apq / g;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * g);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
                const complex upp = c;
                const complex upq = s;
                const complex uqp = -s * std::conj(phase);
                const complex uqq = c * std::conj(phase);

                for (std::size_t k = 0; k < n; ++k) {
                    const complex akp = a(k, p);
                    const complex akq = a(k, q);
                    a(k, p) = akp * upp + akq * uqp;
                    a(k, q) = akp * upq + akq * uqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const complex apk = a(p, k);
                    const complex aqk = a(q, k);
                    a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
                    a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                if (want_vectors) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const complex vkp = v(k, p);
                        const complex vkq = v(k, q);
                        v(k, p) = vkp * upp + vkq * uqp;
                        v(k, q) = vkp * upq + vkq * uqq;
                    }
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEigen out;
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.values[k] = a(order[k], order[k]).real();
    if (want_vectors) {
        out.vectors = ComplexMatrix(n, n);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

inline void require_hermitian(const ComplexMatrix& a, const char* who) {
    if (!a.is_square()) throw ContractViolation(std::string(who) + ": matrix is not square");
    const double r = anti_hermitian_residual(a);
    if (r > tol::hermiticity) {
        throw ContractViolation(std::string(who) + ": matrix is not Hermitian (residual " + std::to_string(r) + ")");
    }
}

} // namespace detail

/// Eigenvalues of a Hermitian matrix in non-decreasing order (cyclic Jacobi).
inline RealVector hermitian_eigenvalues(const ComplexMatrix& a) {
    detail::require_hermitian(a, "hermitian_eigenvalues");
    return detail::jacobi(a, false).values;
}

inline HermitianEigen hermitian_eigensystem(const ComplexMatrix& a) {
    detail::require_hermitian(a, "hermitian_eigensystem");
    return detail::jacobi(a, true);
}

/// One classical fourth-order Runge-Kutta step for y' = f(t, y).
/// State needs +, and multiplication by double.
template <class State, class Rhs>
State rk4_step(Rhs&& f, const State& y, double t, double dt) {
    if (!(dt > 0.0)) throw ContractViolation("rk4_step: dt must be positive");
    const State k1 = f(t, y);
    const State k2 = f(t + 0.5 * dt, y + (0.5 * dt) * k1);
    const State k3 = f(t + 0.5 * dt, y + (0.5 * dt) * k2);
    const State k4 = f(t + dt, y + dt * k3);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Matrix exponential by scaling and squaring of a degree-18 Taylor
/// polynomial. The argument is scaled to infinity norm <= 1/4, where the
/// truncation error is below 1e-16 relative.
inline ComplexMatrix expm(const ComplexMatrix& a) {
    if (!a.is_square()) throw ContractViolation("expm: matrix is not square");
    const std::size_t n = a.rows();
    const double norm = norm_inf(a);
    int squarings = 0;
    if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
    const ComplexMatrix scaled = a * std::ldexp(1.0, -squarings);

    ComplexMatrix result = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (int k = 1; k <= 18; ++k) {
        term = matmul(term, scaled) * (1.0 / k);
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

} // namespace sqw
