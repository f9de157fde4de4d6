#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "band_metric.hpp"
#include "errors.hpp"
#include "polyfam.hpp"

namespace cryptoherm {

/// Paired eigenvectors of H and H^T for a simple real spectrum.  Column n of
/// kets is the polynomial eigenvector at E_n; column n of ketkets is the
/// matching eigenvector of H^T, rescaled so ketket_m . ket_n = delta_mn.
/// overlaps keeps the raw (sign-fixed positive) overlaps before that rescale.
struct BiorthogonalBasis {
    Spectrum spectrum;
    Eigen::MatrixXd kets;
    Eigen::MatrixXd ketkets;
    std::vector<double> overlaps;

    std::size_t size() const { return overlaps.size(); }
};

/// Expansion coefficients of a metric over the ketket projectors,
/// Theta = sum_n kappa_n |n>> <<n|, together with gamma_n = 1/kappa_n.
struct KappaVector {
    std::vector<double> kappa;
    std::vector<double> gamma;
};

inline BiorthogonalBasis biorthogonal_basis(const TridiagonalHamiltonian& h) {
    const std::size_t n = h.size();
    BiorthogonalBasis basis;
    basis.spectrum = spectrum(h);  // rejects degenerate or complex spectra

    basis.kets.resize(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::vector<double> y = eval_polynomial_vector(h, basis.spectrum.energies[j]);
        basis.kets.col(j) = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    }

    // The conjugate vectors come from a general eigensolve of H^T; its
    // eigenvalues are re-derived and matched against the spectrum, sorted
    // ascending, with a half-gap guard on the pairing.
    Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(h.to_dense().transpose()));
    if (es.info() != Eigen::Success)
        throw numeric_error("biorthogonal_basis: eigensolver failed to converge");

    const double radius =
        std::max(std::abs(basis.spectrum.energies.front()), std::abs(basis.spectrum.energies.back()));
    const double imag_tol = 1e-10 * std::max(radius, 1.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return es.eigenvalues()(a).real() < es.eigenvalues()(b).real();
    });

    basis.ketkets.resize(n, n);
    basis.overlaps.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto lambda = es.eigenvalues()(order[j]);
        if (std::abs(lambda.imag()) > imag_tol)
            throw numeric_error("biorthogonal_basis: complex eigenvalue pair detected");
        const double gap_guard =
            std::max(0.5 * basis.spectrum.min_gap, 1e-8 * std::max(radius, 1.0));
        if (std::abs(lambda.real() - basis.spectrum.energies[j]) > gap_guard)
            throw numeric_error("biorthogonal_basis: eigenvalue pairing failed at index " +
                                std::to_string(j));

        Eigen::VectorXd v = es.eigenvectors().col(order[j]).real();
        const double imag_norm = es.eigenvectors().col(order[j]).imag().norm();
        if (imag_norm > 1e-10 * v.norm())
            throw numeric_error("biorthogonal_basis: complex eigenvector at index " +
                                std::to_string(j));

        double omega = v.dot(basis.kets.col(j));
        if (std::abs(omega) <= 1e-12 * v.norm() * basis.kets.col(j).norm())
            throw numeric_error("biorthogonal_basis: vanishing overlap at index " +
                                std::to_string(j));
        if (omega < 0.0) {
            v = -v;
            omega = -omega;
        }
        basis.overlaps[j] = omega;
        basis.ketkets.col(j) = v / omega;
    }

    const double completeness =
        (basis.kets * basis.ketkets.transpose() - Eigen::MatrixXd::Identity(n, n)).norm();
    if (completeness > 1e-8)
        throw numeric_error("biorthogonal_basis: completeness defect " +
                            std::to_string(completeness));
    return basis;
}

/// Metric assembled from the spectral representation
/// Theta = sum_n kappa_n |n>> <<n|, symmetrized against rounding.
inline Eigen::MatrixXd spectral_metric(const BiorthogonalBasis& basis, const KappaVector& kappa) {
    const std::size_t n = basis.size();
    if (kappa.kappa.size() != n)
        throw std::invalid_argument("spectral_metric: kappa length mismatch");
    for (double k : kappa.kappa)
        if (!std::isfinite(k))
            throw std::invalid_argument("spectral_metric: kappa must be finite");
    const Eigen::VectorXd k = Eigen::Map<const Eigen::VectorXd>(kappa.kappa.data(), n);
    const Eigen::MatrixXd theta = basis.ketkets * k.asDiagonal() * basis.ketkets.transpose();
    return 0.5 * (theta + theta.transpose());
}

/// Reads the kappa coordinates off a band solution Theta: for each n,
/// Theta |n> must be proportional to |n>>, and gamma_n is the least-squares
/// proportionality factor.  A fit residual above 1e-8 means Theta is not a
/// solution for this Hamiltonian (or has a vanishing kappa coordinate, which
/// the kappa_n != 0 convention excludes).
inline KappaVector kappa_from_band_metric(const BiorthogonalBasis& basis,
                                          const SymmetricBandMetric& theta) {
    const std::size_t n = basis.size();
    if (theta.size() != n)
        throw std::invalid_argument("kappa_from_band_metric: dimension mismatch");
    const Eigen::MatrixXd td = theta.to_dense();

    KappaVector out;
    out.kappa.resize(n);
    out.gamma.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Eigen::VectorXd v = td * basis.kets.col(j);
        const Eigen::VectorXd kk = basis.ketkets.col(j);
        const double vv = v.squaredNorm();
        if (vv == 0.0)
            throw numeric_error("kappa_from_band_metric: Theta annihilates ket " +
                                std::to_string(j));
        const double gamma = v.dot(kk) / vv;
        const double rel = (kk - gamma * v).norm() / kk.norm();
        if (rel > 1e-8)
            throw numeric_error("kappa_from_band_metric: proportionality fit failed at index " +
                                std::to_string(j) + " (relative residual " + std::to_string(rel) +
                                ")");
        if (gamma == 0.0)
            throw numeric_error("kappa_from_band_metric: vanishing gamma at index " +
                                std::to_string(j));
        out.gamma[j] = gamma;
        out.kappa[j] = 1.0 / gamma;
    }
    return out;
}

} // namespace cryptoherm
