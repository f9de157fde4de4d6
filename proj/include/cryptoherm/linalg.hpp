#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "band_metric.hpp"
#include "errors.hpp"

namespace cryptoherm {

/// Frobenius norm of the defect H^T Theta - Theta H.  Everything here is
/// real, so the adjoint in the quasi-Hermiticity condition is a plain
/// transpose; complex input is rejected at the type level by using real
/// matrices throughout.
inline double dieudonne_residual(const Eigen::MatrixXd& h, const Eigen::MatrixXd& theta) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("dieudonne_residual: H must be square");
    if (theta.rows() != h.rows() || theta.cols() != h.cols())
        throw std::invalid_argument("dieudonne_residual: dimension mismatch");
    return (h.transpose() * theta - theta * h).norm();
}

inline double dieudonne_residual(const Eigen::MatrixXd& h, const SymmetricBandMetric& theta) {
    return dieudonne_residual(h, theta.to_dense());
}

/// dieudonne_residual scaled by |H|_F |Theta|_F; zero matrices give 0.
inline double relative_dieudonne_residual(const Eigen::MatrixXd& h, const Eigen::MatrixXd& theta) {
    const double r = dieudonne_residual(h, theta);
    const double denom = h.norm() * theta.norm();
    return denom == 0.0 ? 0.0 : r / denom;
}

inline double relative_dieudonne_residual(const Eigen::MatrixXd& h, const SymmetricBandMetric& theta) {
    return relative_dieudonne_residual(h, theta.to_dense());
}

/// Solution space of H^T Theta = Theta H over symmetric band matrices of a
/// fixed bandwidth, computed by brute force.
struct NullSpaceResult {
    std::size_t dimension = 0;
    /// Frobenius-orthonormal basis of the solution space.
    std::vector<SymmetricBandMetric> basis;
    /// All singular values of the constraint map, descending.
    std::vector<double> singular_values;
};

/// Brute-force oracle: vectorizes Theta over the free band entries, forms the
/// linear map Theta -> H^T Theta - Theta H column by column, and reads the
/// solution space off an SVD.  Entirely independent of the recurrence
/// solvers, which is the point.
///
/// Off-diagonal unknowns carry a sqrt(2) weight so that the parameter 2-norm
/// equals the Frobenius norm of the matrix; orthonormal right-singular
/// vectors then come out Frobenius-orthonormal.
inline NullSpaceResult null_space_band(const Eigen::MatrixXd& h, std::size_t k,
                                       double tol = 1e-10) {
    if (h.rows() != h.cols())
        throw std::invalid_argument("null_space_band: H must be square");
    const std::size_t n = static_cast<std::size_t>(h.rows());
    if (n == 0)
        throw std::invalid_argument("null_space_band: H must be nonempty");
    if (k >= n)
        throw std::invalid_argument("null_space_band: bandwidth must be at most n-1");
    if (!(tol >= 0.0))
        throw std::invalid_argument("null_space_band: tolerance must be nonnegative");

    std::size_t unknowns = 0;
    for (std::size_t d = 0; d <= k; ++d) unknowns += n - d;

    Eigen::MatrixXd map(n * n, unknowns);
    const Eigen::MatrixXd ht = h.transpose();
    std::size_t col = 0;
    for (std::size_t d = 0; d <= k; ++d) {
        const double w = d == 0 ? 1.0 : std::numbers::sqrt2;
        for (std::size_t i = 0; i + d < n; ++i, ++col) {
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
            e(i, i + d) = 1.0 / w;
            e(i + d, i) = 1.0 / w;
            const Eigen::MatrixXd q = ht * e - e * h;
            map.col(col) = Eigen::Map<const Eigen::VectorXd>(q.data(), q.size());
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(map, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double cutoff = tol * smax;

    NullSpaceResult out;
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    for (Eigen::Index j = 0; j < sv.size(); ++j) {
        if (sv(j) > cutoff) continue;
        SymmetricBandMetric b(n, k);
        std::size_t row = 0;
        for (std::size_t d = 0; d <= k; ++d) {
            const double w = d == 0 ? 1.0 : std::numbers::sqrt2;
            for (std::size_t i = 0; i + d < n; ++i, ++row)
                b.entry(d, i) = svd.matrixV()(row, j) / w;
        }
        out.basis.push_back(std::move(b));
    }
    out.dimension = out.basis.size();
    return out;
}

/// Relative Frobenius distance from theta to the span of the null-space
/// basis; 0 means theta lies in the solution space, 1 means orthogonal to it.
/// Computed as an explicit remainder, not a difference of squared norms, so
/// values far below sqrt(machine epsilon) are meaningful.
inline double projection_residual(const SymmetricBandMetric& theta, const NullSpaceResult& ns) {
    const double norm = theta.frobenius_norm();
    if (norm == 0.0) return 0.0;
    SymmetricBandMetric r = theta;
    for (const auto& b : ns.basis)
        r = add_scaled(r, -frobenius_inner(theta, b), b);
    return r.frobenius_norm() / norm;
}

/// Smallest eigenvalue of a symmetric band matrix.
inline double min_eigenvalue_symmetric(const SymmetricBandMetric& theta) {
    if (!theta.all_finite())
        throw std::invalid_argument("min_eigenvalue_symmetric: non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(theta.to_dense(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// Unique symmetric positive square root of a positive definite band matrix.
/// Throws numeric_error when the matrix is not positive definite.  Diagonal
/// input takes an entrywise fast path, which stays exact for the extreme
/// dynamic ranges diagonal metrics can reach.
inline Eigen::MatrixXd symmetric_sqrt(const SymmetricBandMetric& theta) {
    const std::size_t n = theta.size();
    if (theta.bandwidth() == 0) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const double v = theta.entry(0, i);
            if (!(v > 0.0))
                throw numeric_error("symmetric_sqrt: matrix is not positive definite");
            s(i, i) = std::sqrt(v);
        }
        return s;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(theta.to_dense());
    if (!(es.eigenvalues().minCoeff() > 0.0))
        throw numeric_error("symmetric_sqrt: matrix is not positive definite");
    return es.operatorSqrt();
}

} // namespace cryptoherm
