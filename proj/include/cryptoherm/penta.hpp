#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "band_metric.hpp"
#include "errors.hpp"
#include "linalg.hpp"

namespace cryptoherm {

/// Real pentadiagonal Hamiltonian stored as five diagonals.  diag may be left
/// empty while only the couplings are known; build_penta_pair fills it.
struct PentaHamiltonian {
    std::vector<double> diag;    // H(i,i), length n or empty
    std::vector<double> super1;  // H(i,i+1), length n-1
    std::vector<double> sub1;    // H(i+1,i), length n-1
    std::vector<double> super2;  // H(i,i+2), length n-2
    std::vector<double> sub2;    // H(i+2,i), length n-2

    std::size_t size() const { return super1.size() + 1; }

    /// Checks the off-diagonal lengths against each other; with
    /// require_diag the main diagonal must be present too.
    void validate(bool require_diag) const {
        const std::size_t n = size();
        if (n < 3)
            throw std::invalid_argument("PentaHamiltonian: size must be at least 3");
        if (sub1.size() != n - 1 || super2.size() != n - 2 || sub2.size() != n - 2)
            throw std::invalid_argument("PentaHamiltonian: inconsistent diagonal lengths");
        if (!diag.empty() && diag.size() != n)
            throw std::invalid_argument("PentaHamiltonian: main diagonal has wrong length");
        if (require_diag && diag.empty())
            throw std::invalid_argument("PentaHamiltonian: main diagonal is required here");
        auto check_finite = [](const std::vector<double>& v, const char* name) {
            for (double x : v)
                if (!std::isfinite(x))
                    throw std::invalid_argument(std::string("PentaHamiltonian: non-finite entry in ") +
                                                name);
        };
        check_finite(diag, "diag");
        check_finite(super1, "super1");
        check_finite(sub1, "sub1");
        check_finite(super2, "super2");
        check_finite(sub2, "sub2");
    }

    Eigen::MatrixXd to_dense() const {
        validate(true);
        const std::size_t n = size();
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            m(i, i + 1) = super1[i];
            m(i + 1, i) = sub1[i];
        }
        for (std::size_t i = 0; i + 2 < n; ++i) {
            m(i, i + 2) = super2[i];
            m(i + 2, i) = sub2[i];
        }
        return m;
    }
};

/// Free entries of the paired construction: the four metric corner seeds and
/// the Hamiltonian diagonal anchor.  b12 divides the diagonal reconstruction
/// and must stay nonzero.
struct PentaSeeds {
    double b11 = 0.0;
    double b12 = 1.0;
    double b22 = 0.0;
    double b23 = 1.0;
    double a11 = 0.0;
};

struct PentaPair {
    PentaHamiltonian hamiltonian;
    SymmetricBandMetric metric;  // tridiagonal
};

/// Given the four off-diagonals of a pentadiagonal H, constructs a
/// tridiagonal metric Theta and the main diagonal of H such that
/// H^T Theta = Theta H holds exactly, seeded by `seeds`.
///
/// Dependency order of the three sweeps (off = Theta(i,i+1),
/// md = Theta(i,i), hd = H(i,i)):
///   1. off[t] = off[t-2] super2[t-1] / sub2[t-2]                 t = 2..n-2
///      two parity chains seeded by off[0] = b12, off[1] = b23;
///      uses no metric diagonal and no Hamiltonian diagonal.
///   2. md[t] = (-off[t-1] sub1[t-2] + md[t-2] super2[t-2]
///               + off[t-2] super1[t-1]) / sub2[t-2]              t = 2..n-1
///      two parity chains seeded by md[0] = b11, md[1] = b22;
///      reads off[] from sweep 1, still no Hamiltonian diagonal.
///   3. hd[t] = hd[t-1] + (md[t] sub1[t-1] + off[t] sub2[t-1]
///               - off[t-2] super2[t-2] - md[t-1] super1[t-1])
///               / off[t-1]                                       t = 1..n-1
///      seeded by hd[0] = a11; reads md[] and off[] from the first
///      two sweeps.  Entries with an index off the matrix read as zero
///      (off[-1], super2[-1] at t = 1; off[n-1], sub2[n-2] at t = n-1).
/// Every divisor is checked against 1e-12 times the coupling scale; the
/// sweep-3 divisors are the generated off[] entries themselves, which is why
/// b12 = off[0] must be nonzero and why a vanishing generated coupling stops
/// the construction.
inline PentaPair build_penta_pair(const PentaHamiltonian& couplings, const PentaSeeds& seeds) {
    couplings.validate(false);
    const std::size_t n = couplings.size();
    if (seeds.b12 == 0.0)
        throw std::invalid_argument("build_penta_pair: seed b12 must be nonzero");

    double coupling_scale = 0.0;
    for (const auto* v : {&couplings.super1, &couplings.sub1, &couplings.super2, &couplings.sub2})
        for (double x : *v) coupling_scale = std::max(coupling_scale, std::abs(x));
    const double h_floor = 1e-12 * std::max(coupling_scale, 1.0);

    auto sub2_div = [&](std::size_t i) {
        if (std::abs(couplings.sub2[i]) < h_floor)
            throw breakdown_error("build_penta_pair: sub2[" + std::to_string(i) +
                                      "] is below the breakdown floor",
                                  i);
        return couplings.sub2[i];
    };

    std::vector<double> off(n - 1, 0.0), md(n, 0.0), hd(n, 0.0);
    off[0] = seeds.b12;
    off[1] = seeds.b23;
    md[0] = seeds.b11;
    md[1] = seeds.b22;
    hd[0] = seeds.a11;

    for (std::size_t t = 2; t + 1 < n; ++t)
        off[t] = off[t - 2] * couplings.super2[t - 1] / sub2_div(t - 2);

    for (std::size_t t = 2; t < n; ++t)
        md[t] = (-off[t - 1] * couplings.sub1[t - 2] + md[t - 2] * couplings.super2[t - 2] +
                 off[t - 2] * couplings.super1[t - 1]) /
                sub2_div(t - 2);

    double off_scale = 0.0;
    for (double x : off) off_scale = std::max(off_scale, std::abs(x));
    const double off_floor = 1e-12 * std::max(off_scale, 1.0);
    for (std::size_t t = 1; t < n; ++t) {
        if (std::abs(off[t - 1]) < off_floor)
            throw breakdown_error("build_penta_pair: metric coupling Theta(" +
                                      std::to_string(t - 1) + "," + std::to_string(t) +
                                      ") is below the breakdown floor",
                                  t - 1);
        const double upper = t + 1 < n ? off[t] * couplings.sub2[t - 1] : 0.0;
        const double lower = t >= 2 ? off[t - 2] * couplings.super2[t - 2] : 0.0;
        hd[t] = hd[t - 1] + (md[t] * couplings.sub1[t - 1] + upper - lower -
                             md[t - 1] * couplings.super1[t - 1]) /
                                off[t - 1];
    }

    PentaPair pair{couplings, SymmetricBandMetric(n, 1)};
    pair.hamiltonian.diag = std::move(hd);
    pair.metric.diagonal(0) = std::move(md);
    pair.metric.diagonal(1) = std::move(off);
    if (!pair.metric.all_finite())
        throw numeric_error("build_penta_pair: metric overflowed; rescale the couplings or seeds");
    for (double x : pair.hamiltonian.diag)
        if (!std::isfinite(x))
            throw numeric_error("build_penta_pair: diagonal overflowed; rescale the couplings or seeds");
    return pair;
}

/// Brute-force check of a pentadiagonal Hamiltonian: the tridiagonal-metric
/// solution space, straight from the SVD oracle.
inline NullSpaceResult verify_penta(const PentaHamiltonian& h, double tol = 1e-10) {
    h.validate(true);
    return null_space_band(h.to_dense(), 1, tol);
}

} // namespace cryptoherm
