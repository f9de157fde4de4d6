#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "band_metric.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "polyfam.hpp"

namespace cryptoherm {

namespace detail {

/// Watches the values produced by a forward recurrence.  When one leaves
/// [1e-300, 1e300] in magnitude, every tracked array is multiplied by an
/// exact power of two that brings the value back near 1.  All recurrences
/// here are linear and homogeneous in the metric entries, so this only
/// changes the overall seed scale; the accumulated factor (output over
/// requested seed) is reported through factor().
class scale_guard {
public:
    explicit scale_guard(std::vector<std::vector<double>*> arrays)
        : arrays_(std::move(arrays)) {}

    double admit(double v) {
        if (v != 0.0 && std::isfinite(v) &&
            (std::abs(v) > 1e300 || std::abs(v) < 1e-300)) {
            const double f = std::ldexp(1.0, -std::ilogb(v));
            for (auto* a : arrays_)
                for (double& x : *a) x *= f;
            factor_ *= f;
            return v * f;
        }
        return v;
    }

    double factor() const { return factor_; }

private:
    std::vector<std::vector<double>*> arrays_;
    double factor_ = 1.0;
};

} // namespace detail

/// Diagonal solution of H^T Theta = Theta H: theta_{i+1} = theta_i c_i / b_i
/// along the couplings.  theta1 seeds the chain (the solution is unique up
/// to this overall scale).  If rescale is given it receives the overflow
/// guard factor, 1.0 when nothing was rescaled.
inline SymmetricBandMetric diagonal_metric(const TridiagonalHamiltonian& h, double theta1 = 1.0,
                                           double* rescale = nullptr) {
    const std::size_t n = h.size();
    if (n == 0)
        throw std::invalid_argument("diagonal_metric: empty Hamiltonian");
    if (theta1 == 0.0)
        throw std::invalid_argument("diagonal_metric: theta1 must be nonzero");

    SymmetricBandMetric m(n, 0);
    auto& theta = m.diagonal(0);
    detail::scale_guard guard({&theta});
    theta[0] = theta1;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (h.sub[i] == 0.0) {
            if (h.super[i] != 0.0)
                throw breakdown_error("diagonal_metric: sub[" + std::to_string(i) +
                                          "] vanishes while super[" + std::to_string(i) +
                                          "] does not; no diagonal solution exists",
                                      i);
            throw breakdown_error("diagonal_metric: sub[" + std::to_string(i) +
                                      "] vanishes; the chain cannot continue",
                                  i);
        }
        theta[i + 1] = guard.admit(theta[i] * h.super[i] / h.sub[i]);
    }
    if (rescale) *rescale = guard.factor();
    return m;
}

/// Closed-form diagonal metric of the Jacobi family, normalized to
/// theta_1 = 1.  Identical (up to rounding) to diagonal_metric of the Jacobi
/// Hamiltonian; kept as an independent expression of the same object.
inline SymmetricBandMetric jacobi_diagonal_metric(double mu, double nu, std::size_t n) {
    if (n == 0)
        throw std::invalid_argument("jacobi_diagonal_metric: size must be positive");
    if (!(mu > -1.0) || !(nu > -1.0))
        throw std::invalid_argument("jacobi_diagonal_metric: requires mu > -1 and nu > -1");
    auto sigma = [&](std::size_t i) { return mu + nu + double(i); };

    SymmetricBandMetric m(n, 0);
    auto& theta = m.diagonal(0);
    theta[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        // theta_{k+1}/theta_k = k sigma_k sigma_{2k+1} / (mu_k nu_k sigma_{2k-1});
        // at k = 1 the sigma_1 factors cancel, which keeps the whole
        // mu, nu > -1 range well defined.
        const double ratio =
            k == 1 ? sigma(3) / ((mu + 1.0) * (nu + 1.0))
                   : double(k) * sigma(k) * sigma(2 * k + 1) /
                         ((mu + double(k)) * (nu + double(k)) * sigma(2 * k - 1));
        theta[k] = theta[k - 1] * ratio;
    }
    return m;
}

/// Tridiagonal solution with Theta(0,0) = 0 and Theta(0,1) = b12.  Fixing the
/// corner to zero removes the diagonal-solution freedom from this component,
/// so {diagonal, this} spans the full bandwidth-1 solution space.
///
/// Off-diagonal chain:  Theta(i,i+1) = Theta(i-1,i) super[i] / sub[i-1]
/// Diagonal chain:      Theta(i,i)   = -(diag[i-1] Theta(i-1,i)
///                                       - Theta(i-1,i-1) super[i-1]
///                                       - Theta(i-1,i) diag[i]) / sub[i-1]
/// Both consume only earlier entries, so two forward sweeps suffice.
inline SymmetricBandMetric tridiagonal_metric(const TridiagonalHamiltonian& h, double b12 = 1.0,
                                              double* rescale = nullptr) {
    const std::size_t n = h.size();
    if (n < 2)
        throw std::invalid_argument("tridiagonal_metric: size must be at least 2");

    SymmetricBandMetric m(n, 1);
    auto& d0 = m.diagonal(0);
    auto& d1 = m.diagonal(1);
    detail::scale_guard guard({&d0, &d1});
    auto divisor = [&](std::size_t i) {
        if (h.sub[i] == 0.0)
            throw breakdown_error("tridiagonal_metric: sub[" + std::to_string(i) + "] vanishes",
                                  i);
        return h.sub[i];
    };

    d1[0] = b12;
    for (std::size_t i = 1; i + 1 < n; ++i)
        d1[i] = guard.admit(d1[i - 1] * h.super[i] / divisor(i - 1));
    for (std::size_t i = 1; i < n; ++i)
        d0[i] = guard.admit(
            -(h.diag[i - 1] * d1[i - 1] - d0[i - 1] * h.super[i - 1] - d1[i - 1] * h.diag[i]) /
            divisor(i - 1));
    if (rescale) *rescale = guard.factor();
    return m;
}

/// Pentadiagonal solution with Theta(0,0) = Theta(0,1) = 0 and
/// Theta(0,2) = b13; the zero corner entries again push the lower-bandwidth
/// freedom into the other two components.
///
/// Three forward sweeps, one per diagonal, each reading only entries filled
/// earlier (outer needs outer, middle needs outer+middle, main needs all):
///   outer:  Theta(i,i+2) = Theta(i-1,i+1) super[i+1] / sub[i-1]
///   middle: Theta(i,i+1) = -(Theta(i-1,i+1) diag[i-1] - Theta(i-1,i) super[i]
///                            - Theta(i-1,i+1) diag[i+1]) / sub[i-1]
///   main:   Theta(i,i)   = -(Theta(i-2,i) super[i-2] + diag[i-1] Theta(i-1,i)
///                            - Theta(i-1,i-1) super[i-1] - Theta(i-1,i) diag[i]
///                            - Theta(i-1,i+1) sub[i]) / sub[i-1]
/// Entries with an index off the matrix read as zero.  In the main-diagonal
/// sweep at i = n-1 that zeroes the pair Theta(n-2,n) sub(n-1..), the terms a
/// larger matrix would keep; the final corner Theta(n-1,n-1) is therefore the
/// one entry that depends on the truncation size.
inline SymmetricBandMetric pentadiagonal_metric(const TridiagonalHamiltonian& h, double b13 = 1.0,
                                                double* rescale = nullptr) {
    const std::size_t n = h.size();
    if (n < 3)
        throw std::invalid_argument("pentadiagonal_metric: size must be at least 3");

    SymmetricBandMetric m(n, 2);
    auto& d0 = m.diagonal(0);
    auto& d1 = m.diagonal(1);
    auto& d2 = m.diagonal(2);
    detail::scale_guard guard({&d0, &d1, &d2});
    auto divisor = [&](std::size_t i) {
        if (h.sub[i] == 0.0)
            throw breakdown_error("pentadiagonal_metric: sub[" + std::to_string(i) + "] vanishes",
                                  i);
        return h.sub[i];
    };

    d2[0] = b13;
    for (std::size_t i = 1; i + 2 < n; ++i)
        d2[i] = guard.admit(d2[i - 1] * h.super[i + 1] / divisor(i - 1));
    for (std::size_t i = 1; i + 1 < n; ++i)
        d1[i] = guard.admit(
            -(d2[i - 1] * h.diag[i - 1] - d1[i - 1] * h.super[i] - d2[i - 1] * h.diag[i + 1]) /
            divisor(i - 1));
    for (std::size_t i = 1; i < n; ++i) {
        const double outer_prev = i >= 2 ? d2[i - 2] * h.super[i - 2] : 0.0;
        const double outer_next = i + 1 < n ? d2[i - 1] * h.sub[i] : 0.0;
        d0[i] = guard.admit(-(outer_prev + h.diag[i - 1] * d1[i - 1] -
                              d0[i - 1] * h.super[i - 1] - d1[i - 1] * h.diag[i] - outer_next) /
                            divisor(i - 1));
    }
    if (rescale) *rescale = guard.factor();
    return m;
}

/// The three recurrent components of a combination ansatz
/// Theta = diagonal + alpha * tridiagonal + beta * pentadiagonal.
struct MetricComponents {
    std::optional<SymmetricBandMetric> diagonal;
    std::optional<SymmetricBandMetric> tridiagonal;
    std::optional<SymmetricBandMetric> pentadiagonal;
};

struct CombinationCoefficients {
    double alpha = 0.0;
    double beta = 0.0;
};

/// diagonal + alpha * tridiagonal + beta * pentadiagonal over the present
/// components, as a band matrix of bandwidth min(2, n-1).
inline SymmetricBandMetric combine(const MetricComponents& parts,
                                   const CombinationCoefficients& coeffs) {
    std::size_t n = 0;
    for (const auto* p : {&parts.diagonal, &parts.tridiagonal, &parts.pentadiagonal}) {
        if (!p->has_value()) continue;
        if (n == 0)
            n = (*p)->size();
        else if ((*p)->size() != n)
            throw std::invalid_argument("combine: components differ in size");
    }
    if (n == 0)
        throw std::invalid_argument("combine: no components present");
    if (!std::isfinite(coeffs.alpha) || !std::isfinite(coeffs.beta))
        throw std::invalid_argument("combine: coefficients must be finite");

    SymmetricBandMetric out(n, std::min<std::size_t>(2, n - 1));
    auto accumulate = [&](const std::optional<SymmetricBandMetric>& c, double w) {
        if (!c) return;
        if (c->bandwidth() > out.bandwidth())
            throw std::invalid_argument("combine: component bandwidth exceeds 2");
        for (std::size_t d = 0; d <= c->bandwidth(); ++d)
            for (std::size_t i = 0; i + d < n; ++i) out.entry(d, i) += w * c->entry(d, i);
    };
    accumulate(parts.diagonal, 1.0);
    accumulate(parts.tridiagonal, coeffs.alpha);
    accumulate(parts.pentadiagonal, coeffs.beta);
    return out;
}

/// Grid scan of the smallest eigenvalue of
/// diagonal + alpha * tridiagonal + beta * pentadiagonal, plus the connected
/// positive-definite region around the origin of the (alpha, beta) plane.
struct PositivityScan {
    std::vector<double> alphas;
    std::vector<double> betas;
    /// min_eigenvalues[ia * betas.size() + ib] belongs to (alphas[ia], betas[ib]).
    std::vector<double> min_eigenvalues;
    /// 1 on the 4-connected positive region containing the grid point nearest
    /// (0, 0), where the combination is the plain diagonal metric.
    std::vector<std::uint8_t> positive_region;
};

inline PositivityScan positivity_scan(const MetricComponents& parts, double alpha_lo,
                                      double alpha_hi, double beta_lo, double beta_hi,
                                      std::size_t grid) {
    if (grid == 0)
        throw std::invalid_argument("positivity_scan: grid must be positive");
    if (!parts.diagonal)
        throw std::invalid_argument("positivity_scan: diagonal component required");
    if (!(min_eigenvalue_symmetric(*parts.diagonal) > 0.0))
        throw std::invalid_argument("positivity_scan: diagonal component must be positive definite");

    auto linspace = [&](double lo, double hi) {
        std::vector<double> v(grid);
        if (grid == 1) {
            v[0] = lo;
            return v;
        }
        for (std::size_t i = 0; i < grid; ++i)
            v[i] = lo + (hi - lo) * double(i) / double(grid - 1);
        return v;
    };

    PositivityScan scan;
    scan.alphas = linspace(alpha_lo, alpha_hi);
    scan.betas = linspace(beta_lo, beta_hi);
    scan.min_eigenvalues.resize(grid * grid);
    for (std::size_t ia = 0; ia < grid; ++ia)
        for (std::size_t ib = 0; ib < grid; ++ib)
            scan.min_eigenvalues[ia * grid + ib] = min_eigenvalue_symmetric(
                combine(parts, {scan.alphas[ia], scan.betas[ib]}));

    // Flood fill from the grid point nearest the origin.
    scan.positive_region.assign(grid * grid, 0);
    std::size_t ia0 = 0, ib0 = 0;
    for (std::size_t i = 1; i < grid; ++i) {
        if (std::abs(scan.alphas[i]) < std::abs(scan.alphas[ia0])) ia0 = i;
        if (std::abs(scan.betas[i]) < std::abs(scan.betas[ib0])) ib0 = i;
    }
    if (scan.min_eigenvalues[ia0 * grid + ib0] > 0.0) {
        std::queue<std::pair<std::size_t, std::size_t>> frontier;
        scan.positive_region[ia0 * grid + ib0] = 1;
        frontier.push({ia0, ib0});
        while (!frontier.empty()) {
            auto [ia, ib] = frontier.front();
            frontier.pop();
            const std::ptrdiff_t steps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (const auto& s : steps) {
                const std::ptrdiff_t ja = std::ptrdiff_t(ia) + s[0];
                const std::ptrdiff_t jb = std::ptrdiff_t(ib) + s[1];
                if (ja < 0 || jb < 0 || ja >= std::ptrdiff_t(grid) || jb >= std::ptrdiff_t(grid))
                    continue;
                const std::size_t idx = std::size_t(ja) * grid + std::size_t(jb);
                if (scan.positive_region[idx] || !(scan.min_eigenvalues[idx] > 0.0)) continue;
                scan.positive_region[idx] = 1;
                frontier.push({std::size_t(ja), std::size_t(jb)});
            }
        }
    }
    return scan;
}

/// Similarity transform Theta^(1/2) H Theta^(-1/2) that turns a verified
/// quasi-Hermitian pair into a manifestly symmetric Hamiltonian.  Requires
/// Theta positive definite and a relative defect within tol.
inline Eigen::MatrixXd hermitize(const TridiagonalHamiltonian& h, const SymmetricBandMetric& theta,
                                 double tol = 1e-10) {
    if (theta.size() != h.size())
        throw std::invalid_argument("hermitize: dimension mismatch");
    const Eigen::MatrixXd hd = h.to_dense();
    const double rel = relative_dieudonne_residual(hd, theta);
    if (rel > tol)
        throw numeric_error("hermitize: Theta does not solve the quasi-Hermiticity condition "
                            "(relative residual " +
                            std::to_string(rel) + ")");

    const std::size_t n = h.size();
    if (theta.bandwidth() == 0) {
        // Diagonal similarity in closed form; exact up to one rounding per
        // entry even when the diagonal spans hundreds of orders of magnitude.
        const auto& t = theta.diagonal(0);
        for (double v : t)
            if (!(v > 0.0)) throw numeric_error("hermitize: metric is not positive definite");
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            out(i, i) = hd(i, i);
            if (i + 1 < n) {
                const double r = std::sqrt(t[i] / t[i + 1]);
                out(i, i + 1) = hd(i, i + 1) * r;
                out(i + 1, i) = hd(i + 1, i) / r;
            }
        }
        return out;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(theta.to_dense());
    if (!(es.eigenvalues().minCoeff() > 0.0))
        throw numeric_error("hermitize: metric is not positive definite");
    const Eigen::VectorXd sq = es.eigenvalues().cwiseSqrt();
    const Eigen::MatrixXd root = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
    const Eigen::MatrixXd root_inv =
        es.eigenvectors() * sq.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    return root * hd * root_inv;
}

} // namespace cryptoherm
