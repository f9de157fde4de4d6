#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cryptoherm {

/// Real symmetric band matrix: a metric candidate Theta with 2k+1 nonzero
/// diagonals.  Only the main diagonal and the k upper diagonals are stored,
/// so symmetry holds by construction.  Diagonal d keeps the entries
/// Theta(i, i+d) for i = 0..n-d-1.
class SymmetricBandMetric {
public:
    SymmetricBandMetric(std::size_t n, std::size_t bandwidth) : n_(n) {
        if (n == 0)
            throw std::invalid_argument("SymmetricBandMetric: size must be positive");
        if (bandwidth >= n)
            throw std::invalid_argument("SymmetricBandMetric: bandwidth must be at most n-1");
        diagonals_.resize(bandwidth + 1);
        for (std::size_t d = 0; d <= bandwidth; ++d)
            diagonals_[d].assign(n - d, 0.0);
    }

    /// Builds from explicit diagonals; diagonals[d] must have length n-d,
    /// where n is the length of the main diagonal diagonals[0].
    static SymmetricBandMetric from_diagonals(std::vector<std::vector<double>> diagonals) {
        if (diagonals.empty() || diagonals[0].empty())
            throw std::invalid_argument("SymmetricBandMetric: main diagonal is required");
        SymmetricBandMetric m(diagonals[0].size(), diagonals.size() - 1);
        for (std::size_t d = 0; d < diagonals.size(); ++d) {
            if (diagonals[d].size() != m.n_ - d)
                throw std::invalid_argument("SymmetricBandMetric: diagonal " + std::to_string(d) +
                                            " has wrong length");
            m.diagonals_[d] = std::move(diagonals[d]);
        }
        return m;
    }

    std::size_t size() const { return n_; }
    std::size_t bandwidth() const { return diagonals_.size() - 1; }

    /// Element by matrix position; zero outside the band.
    double operator()(std::size_t i, std::size_t j) const {
        if (i >= n_ || j >= n_)
            throw std::invalid_argument("SymmetricBandMetric: index out of range");
        const std::size_t d = i < j ? j - i : i - j;
        if (d > bandwidth()) return 0.0;
        return diagonals_[d][std::min(i, j)];
    }

    /// Entry i of diagonal d, i.e. the matrix element (i, i+d).
    double& entry(std::size_t d, std::size_t i) { return diagonals_.at(d).at(i); }
    double entry(std::size_t d, std::size_t i) const { return diagonals_.at(d).at(i); }

    const std::vector<double>& diagonal(std::size_t d) const { return diagonals_.at(d); }
    std::vector<double>& diagonal(std::size_t d) { return diagonals_.at(d); }

    Eigen::MatrixXd to_dense() const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
        for (std::size_t d = 0; d < diagonals_.size(); ++d)
            for (std::size_t i = 0; i + d < n_; ++i) {
                m(i, i + d) = diagonals_[d][i];
                m(i + d, i) = diagonals_[d][i];
            }
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (std::size_t d = 0; d < diagonals_.size(); ++d) {
            const double w = d == 0 ? 1.0 : 2.0;
            for (double x : diagonals_[d]) s += w * x * x;
        }
        return std::sqrt(s);
    }

    void scale(double c) {
        for (auto& diag : diagonals_)
            for (double& x : diag) x *= c;
    }

    bool all_finite() const {
        for (const auto& diag : diagonals_)
            for (double x : diag)
                if (!std::isfinite(x)) return false;
        return true;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::vector<double>> diagonals_;
};

/// Frobenius inner product sum_ij A_ij B_ij of two band matrices of equal
/// size; the bandwidths may differ.
inline double frobenius_inner(const SymmetricBandMetric& a, const SymmetricBandMetric& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("frobenius_inner: size mismatch");
    const std::size_t kmin = std::min(a.bandwidth(), b.bandwidth());
    double s = 0.0;
    for (std::size_t d = 0; d <= kmin; ++d) {
        const double w = d == 0 ? 1.0 : 2.0;
        for (std::size_t i = 0; i + d < a.size(); ++i)
            s += w * a.entry(d, i) * b.entry(d, i);
    }
    return s;
}

/// a + c*b, promoted to the larger of the two bandwidths.
inline SymmetricBandMetric add_scaled(const SymmetricBandMetric& a, double c,
                                      const SymmetricBandMetric& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("add_scaled: size mismatch");
    SymmetricBandMetric out(a.size(), std::max(a.bandwidth(), b.bandwidth()));
    for (std::size_t d = 0; d <= out.bandwidth(); ++d)
        for (std::size_t i = 0; i + d < out.size(); ++i) {
            double v = 0.0;
            if (d <= a.bandwidth()) v += a.entry(d, i);
            if (d <= b.bandwidth()) v += c * b.entry(d, i);
            out.entry(d, i) = v;
        }
    return out;
}

} // namespace cryptoherm
