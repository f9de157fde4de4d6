#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace cryptoherm {

// Families of orthogonal-polynomial recurrences.  Each one fixes the three
// diagonals of the tridiagonal Hamiltonian below in closed form.

struct Gegenbauer { double a = 1.0; };
struct Laguerre { double a = 1.0; };
struct Tschebyshev {};
struct Hermite {};
struct Legendre {};
struct Jacobi { double mu = 0.0; double nu = 0.0; };
/// Explicit diagonals, passed through unchanged.
struct Custom {
    std::vector<double> diag;   // length n
    std::vector<double> super;  // length n-1
    std::vector<double> sub;    // length n-1
};

using PolynomialFamily =
    std::variant<Gegenbauer, Laguerre, Tschebyshev, Hermite, Legendre, Jacobi, Custom>;

/// Real tridiagonal n x n Hamiltonian stored as three diagonals.
///
/// Index map against the 1-based closed forms: diag[i] = a_{i+1} = H(i,i),
/// super[i] = c_{i+1} = H(i,i+1), sub[i] = b_{i+2} = H(i+1,i).  The
/// b-sequence starts at b_2, which therefore lives at sub[0].
struct TridiagonalHamiltonian {
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> sub;

    std::size_t size() const { return diag.size(); }

    /// True iff every coupling H(i,i+1), H(i+1,i) is nonzero.
    bool nonzero_couplings() const {
        for (double c : super)
            if (c == 0.0) return false;
        for (double b : sub)
            if (b == 0.0) return false;
        return true;
    }

    Eigen::MatrixXd to_dense() const {
        const std::size_t n = size();
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            m(i, i + 1) = super[i];
            m(i + 1, i) = sub[i];
        }
        return m;
    }
};

namespace detail {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
} // namespace detail

inline TridiagonalHamiltonian build_hamiltonian(const PolynomialFamily& family, std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("build_hamiltonian: size must be positive");

    TridiagonalHamiltonian h;
    h.diag.assign(n, 0.0);
    h.super.assign(n > 0 ? n - 1 : 0, 0.0);
    h.sub.assign(n > 0 ? n - 1 : 0, 0.0);

    auto checked_div = [](double num, double den, const char* what, std::size_t k) {
        if (den == 0.0)
            throw std::invalid_argument(std::string("build_hamiltonian: vanishing denominator in ") +
                                        what + " at k=" + std::to_string(k));
        return num / den;
    };

    std::visit(
        detail::overloaded{
            [&](const Gegenbauer& g) {
                for (std::size_t k = 1; k < n; ++k) {
                    h.super[k - 1] = checked_div(double(k), 2.0 * k + 2.0 * g.a - 2.0,
                                                 "the Gegenbauer superdiagonal", k);
                    h.sub[k - 1] = checked_div(k + 2.0 * g.a - 1.0, 2.0 * k + 2.0 * g.a,
                                               "the Gegenbauer subdiagonal", k);
                }
            },
            [&](const Laguerre& l) {
                for (std::size_t k = 1; k <= n; ++k) h.diag[k - 1] = 2.0 * k + l.a - 1.0;
                for (std::size_t k = 1; k < n; ++k) {
                    h.super[k - 1] = -double(k);
                    h.sub[k - 1] = -(double(k) + l.a);
                }
            },
            [&](const Tschebyshev&) {
                for (std::size_t k = 1; k < n; ++k) {
                    h.super[k - 1] = k == 1 ? 2.0 : 1.0;
                    h.sub[k - 1] = 1.0;
                }
            },
            [&](const Hermite&) {
                for (std::size_t k = 1; k < n; ++k) {
                    h.super[k - 1] = 1.0;
                    h.sub[k - 1] = 2.0 * k;
                }
            },
            [&](const Legendre&) {
                for (std::size_t k = 1; k < n; ++k) {
                    h.super[k - 1] = double(k) / (2.0 * k - 1.0);
                    h.sub[k - 1] = double(k) / (2.0 * k + 1.0);
                }
            },
            [&](const Jacobi& j) {
                if (!(j.mu > -1.0) || !(j.nu > -1.0))
                    throw std::invalid_argument(
                        "build_hamiltonian: Jacobi requires mu > -1 and nu > -1");
                auto sigma = [&](std::size_t i) { return j.mu + j.nu + double(i); };
                // The k = 1 entries use forms with sigma_0 (in the diagonal)
                // and sigma_1 (in the superdiagonal) cancelled against the
                // numerator; for mu, nu > -1 every remaining sigma_i with
                // i >= 2 is strictly positive, so no denominator can vanish.
                h.diag[0] = (j.mu - j.nu) / sigma(2);
                for (std::size_t k = 2; k <= n; ++k)
                    h.diag[k - 1] =
                        (j.mu - j.nu) * (j.mu + j.nu) / (sigma(2 * k - 2) * sigma(2 * k));
                if (n >= 2) h.super[0] = -2.0 / sigma(2);
                for (std::size_t k = 2; k < n; ++k)
                    h.super[k - 1] = -2.0 * k * sigma(k) / (sigma(2 * k - 1) * sigma(2 * k));
                for (std::size_t k = 1; k < n; ++k)
                    h.sub[k - 1] =
                        -2.0 * (j.mu + k) * (j.nu + k) / (sigma(2 * k) * sigma(2 * k + 1));
            },
            [&](const Custom& c) {
                if (c.diag.size() != n || c.super.size() != n - 1 || c.sub.size() != n - 1)
                    throw std::invalid_argument(
                        "build_hamiltonian: Custom sequence lengths do not match size");
                h.diag = c.diag;
                h.super = c.super;
                h.sub = c.sub;
            }},
        family);

    auto check_finite = [](const std::vector<double>& v, const char* name) {
        for (double x : v)
            if (!std::isfinite(x))
                throw std::invalid_argument(std::string("build_hamiltonian: non-finite entry in ") +
                                            name);
    };
    check_finite(h.diag, "diag");
    check_finite(h.super, "super");
    check_finite(h.sub, "sub");
    return h;
}

/// Evaluates the polynomial column vector (Y_0(x), ..., Y_{n-1}(x)) defined
/// by the three-term recurrence of H: Y_0 = 1 and
/// c_k Y_k = (x - a_k) Y_{k-1} - b_k Y_{k-2}.  For an eigenvalue x this is
/// the (unnormalized) right eigenvector of H, up to the truncated last row.
inline std::vector<double> eval_polynomial_vector(const TridiagonalHamiltonian& h, double x) {
    const std::size_t n = h.size();
    if (n == 0)
        throw std::invalid_argument("eval_polynomial_vector: empty Hamiltonian");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (h.super[i] == 0.0)
            throw std::invalid_argument("eval_polynomial_vector: zero superdiagonal at super[" +
                                        std::to_string(i) + "]");
    std::vector<double> y(n);
    y[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        double v = (x - h.diag[k - 1]) * y[k - 1];
        if (k >= 2) v -= h.sub[k - 2] * y[k - 2];
        y[k] = v / h.super[k - 1];
    }
    return y;
}

struct Spectrum {
    std::vector<double> energies;  // ascending
    double min_gap = std::numeric_limits<double>::infinity();
};

enum class SpectrumMethod { automatic, symmetrize, general };

/// Eigenvalues of the tridiagonal Hamiltonian, sorted ascending.
///
/// When every product super[i]*sub[i] is positive, H is similar to a real
/// symmetric tridiagonal matrix via a diagonal rescaling, and a dedicated
/// symmetric solver runs on the diagonals directly.  Otherwise a general
/// real eigensolver runs and any genuinely complex pair is rejected.
/// Spectra with a gap at or below 1e-9 times the spectral radius are
/// rejected as degenerate; everything downstream assumes simple eigenvalues.
inline Spectrum spectrum(const TridiagonalHamiltonian& h,
                         SpectrumMethod method = SpectrumMethod::automatic) {
    const std::size_t n = h.size();
    if (n == 0)
        throw std::invalid_argument("spectrum: empty Hamiltonian");

    bool positive_products = true;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(h.super[i] * h.sub[i] > 0.0)) {
            positive_products = false;
            break;
        }
    if (method == SpectrumMethod::symmetrize && !positive_products)
        throw std::invalid_argument("spectrum: symmetrize requires positive coupling products");
    const bool use_symmetric = method != SpectrumMethod::general && positive_products;

    Spectrum s;
    s.energies.resize(n);
    if (use_symmetric) {
        Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(h.diag.data(), n);
        Eigen::VectorXd e(n >= 2 ? n - 1 : 0);
        for (std::size_t i = 0; i + 1 < n; ++i) e(i) = std::sqrt(h.super[i] * h.sub[i]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
        for (std::size_t i = 0; i < n; ++i) s.energies[i] = es.eigenvalues()(i);
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> es(h.to_dense());
        if (es.info() != Eigen::Success)
            throw numeric_error("spectrum: eigensolver failed to converge");
        const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
        const double imag_tol = 1e-10 * std::max(radius, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(es.eigenvalues()(i).imag()) > imag_tol)
                throw numeric_error("spectrum: complex eigenvalue pair detected");
            s.energies[i] = es.eigenvalues()(i).real();
        }
        std::sort(s.energies.begin(), s.energies.end());
    }

    if (n >= 2) {
        s.min_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < n; ++i)
            s.min_gap = std::min(s.min_gap, s.energies[i + 1] - s.energies[i]);
        const double radius = std::max(std::abs(s.energies.front()), std::abs(s.energies.back()));
        if (s.min_gap <= 1e-9 * radius)
            throw numeric_error("spectrum: degenerate spectrum (minimal gap " +
                                std::to_string(s.min_gap) + ")");
    }
    return s;
}

/// Polynomial eigenvector of H at the eigenvalue `energy`.  The recurrence
/// satisfies all rows of H y = E y except possibly the last (truncated) one,
/// so the residual gate below is exactly the secular condition on E.
inline std::vector<double> ket(const TridiagonalHamiltonian& h, double energy) {
    const std::vector<double> y = eval_polynomial_vector(h, energy);
    const std::size_t n = h.size();

    double hmax = 0.0;
    for (double v : h.diag) hmax = std::max(hmax, std::abs(v));
    for (double v : h.super) hmax = std::max(hmax, std::abs(v));
    for (double v : h.sub) hmax = std::max(hmax, std::abs(v));
    double ymax = 0.0;
    for (double v : y) ymax = std::max(ymax, std::abs(v));

    double rmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (h.diag[i] - energy) * y[i];
        if (i > 0) r += h.sub[i - 1] * y[i - 1];
        if (i + 1 < n) r += h.super[i] * y[i + 1];
        rmax = std::max(rmax, std::abs(r));
    }
    const double scale = (hmax + std::abs(energy)) * ymax;
    if (rmax > 1e-9 * (scale > 0.0 ? scale : 1.0))
        throw numeric_error("ket: value is not an eigenvalue (relative residual " +
                            std::to_string(scale > 0.0 ? rmax / scale : rmax) + ")");
    return y;
}

} // namespace cryptoherm
