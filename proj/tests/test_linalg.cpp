#include <catch2/catch_amalgamated.hpp>

#include <cryptoherm/band_metric.hpp>
#include <cryptoherm/linalg.hpp>

#include <cmath>

using namespace cryptoherm;
using Catch::Matchers::WithinAbs;

namespace {

// Legendre-type 3x3: diag 0, super (1, 2/3), sub (1/3, 2/5).
Eigen::MatrixXd legendre3() {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
    h(0, 1) = 1.0;
    h(1, 2) = 2.0 / 3.0;
    h(1, 0) = 1.0 / 3.0;
    h(2, 1) = 2.0 / 5.0;
    return h;
}

// Hermite-type n x n: diag 0, super 1, sub 2k.
Eigen::MatrixXd hermite(int n) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        h(k - 1, k) = 1.0;
        h(k, k - 1) = 2.0 * k;
    }
    return h;
}

} // namespace

TEST_CASE("dieudonne residual") {
    const Eigen::MatrixXd h = legendre3();

    SECTION("diagonal solution has vanishing defect") {
        SymmetricBandMetric theta(3, 0);
        theta.diagonal(0) = {1.0, 3.0, 5.0};
        REQUIRE(dieudonne_residual(h, theta) <= 1e-14);
    }

    SECTION("identity is not a solution for an asymmetric H") {
        REQUIRE(dieudonne_residual(h, Eigen::MatrixXd::Identity(3, 3)) > 0.1);
    }

    SECTION("zero only for a vanishing defect") {
        const Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
        REQUIRE(dieudonne_residual(sym, Eigen::MatrixXd::Identity(3, 3)) == 0.0);
    }

    SECTION("dimension mismatch throws") {
        REQUIRE_THROWS_AS(dieudonne_residual(h, Eigen::MatrixXd::Identity(4, 4)),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(dieudonne_residual(Eigen::MatrixXd::Zero(2, 3),
                                             Eigen::MatrixXd::Identity(3, 3)),
                          std::invalid_argument);
    }

    SECTION("relative residual is scale invariant") {
        SymmetricBandMetric theta(3, 0);
        theta.diagonal(0) = {1.0, 1.0, 1.0};
        const double r1 = relative_dieudonne_residual(h, theta);
        theta.scale(100.0);
        const double r2 = relative_dieudonne_residual(100.0 * h, theta);
        REQUIRE_THAT(r1, WithinAbs(r2, 1e-15));
    }
}

TEST_CASE("null space oracle on closed-form cases") {
    SECTION("asymmetric 2x2 has the expected diagonal ray") {
        Eigen::MatrixXd h(2, 2);
        h << 0.0, 2.0, 1.0, 0.0;
        const NullSpaceResult ns = null_space_band(h, 0);
        REQUIRE(ns.dimension == 1);
        // theta_2 / theta_1 = super / sub = 2
        const auto& b = ns.basis[0];
        REQUIRE_THAT(b.entry(0, 1) / b.entry(0, 0), WithinAbs(2.0, 1e-12));
        REQUIRE_THAT(b.frobenius_norm(), WithinAbs(1.0, 1e-12));
    }

    SECTION("full band of a symmetric 2x2 is the symmetric commutant") {
        Eigen::MatrixXd h(2, 2);
        h << 0.0, 1.0, 1.0, 0.0;
        REQUIRE(null_space_band(h, 0).dimension == 1);
        REQUIRE(null_space_band(h, 1).dimension == 2);
    }

    SECTION("diagonal solution of the Legendre-type 3x3 is recovered") {
        const NullSpaceResult ns = null_space_band(legendre3(), 0);
        REQUIRE(ns.dimension == 1);
        SymmetricBandMetric expected(3, 0);
        expected.diagonal(0) = {1.0, 3.0, 5.0};
        // compare after normalizing theta_1 = 1
        const auto& b = ns.basis[0];
        for (std::size_t i = 0; i < 3; ++i)
            REQUIRE_THAT(b.entry(0, i) / b.entry(0, 0), WithinAbs(expected.entry(0, i), 1e-12));
    }

    SECTION("Hermite-type 6x6 dimensions at the band extremes") {
        const Eigen::MatrixXd h = hermite(6);
        REQUIRE(null_space_band(h, 0).dimension == 1);
        REQUIRE(null_space_band(h, 5).dimension == 6);
    }
}

TEST_CASE("null space oracle invariants") {
    const Eigen::MatrixXd h = hermite(5);

    SECTION("basis is Frobenius-orthonormal") {
        const NullSpaceResult ns = null_space_band(h, 4);
        REQUIRE(ns.dimension == 5);
        for (std::size_t a = 0; a < ns.dimension; ++a)
            for (std::size_t b = 0; b < ns.dimension; ++b)
                REQUIRE_THAT(frobenius_inner(ns.basis[a], ns.basis[b]),
                             WithinAbs(a == b ? 1.0 : 0.0, 1e-12));
    }

    SECTION("basis elements satisfy the equation they came from") {
        const double tol = 1e-10;
        const NullSpaceResult ns = null_space_band(h, 4, tol);
        for (const auto& b : ns.basis)
            REQUIRE(dieudonne_residual(h, b) <= 10.0 * tol * h.norm() * b.frobenius_norm());
    }

    SECTION("singular values are descending") {
        const NullSpaceResult ns = null_space_band(h, 2);
        for (std::size_t i = 0; i + 1 < ns.singular_values.size(); ++i)
            REQUIRE(ns.singular_values[i] >= ns.singular_values[i + 1]);
    }

    SECTION("dimension is monotone in the bandwidth") {
        std::size_t prev = 0;
        for (std::size_t k = 0; k < 5; ++k) {
            const std::size_t dim = null_space_band(h, k).dimension;
            REQUIRE(dim >= prev);
            prev = dim;
        }
    }

    SECTION("argument checks") {
        REQUIRE_THROWS_AS(null_space_band(h, 5), std::invalid_argument);
        REQUIRE_THROWS_AS(null_space_band(h, 0, -1.0), std::invalid_argument);
        REQUIRE_THROWS_AS(null_space_band(Eigen::MatrixXd::Zero(2, 3), 0), std::invalid_argument);
    }
}

TEST_CASE("projection residual") {
    const Eigen::MatrixXd h = legendre3();
    const NullSpaceResult ns = null_space_band(h, 0);

    SymmetricBandMetric solution(3, 0);
    solution.diagonal(0) = {2.0, 6.0, 10.0};  // scaled member of the span
    REQUIRE(projection_residual(solution, ns) <= 1e-12);

    SymmetricBandMetric outsider(3, 0);
    outsider.diagonal(0) = {1.0, 1.0, 1.0};
    REQUIRE(projection_residual(outsider, ns) > 0.1);

    SymmetricBandMetric zero(3, 0);
    REQUIRE(projection_residual(zero, ns) == 0.0);
}

TEST_CASE("minimal eigenvalue") {
    SECTION("2x2 with known eigenvalues") {
        SymmetricBandMetric theta(2, 1);
        theta.diagonal(0) = {1.0, 2.0};
        theta.diagonal(1) = {10.0};
        // eigenvalues (3 -+ sqrt(401)) / 2
        REQUIRE_THAT(min_eigenvalue_symmetric(theta),
                     WithinAbs(0.5 * (3.0 - std::sqrt(401.0)), 1e-12));
    }

    SECTION("diagonal matrix") {
        SymmetricBandMetric theta(3, 0);
        theta.diagonal(0) = {5.0, 1.0, 3.0};
        REQUIRE_THAT(min_eigenvalue_symmetric(theta), WithinAbs(1.0, 1e-14));
    }

    SECTION("non-finite entries throw") {
        SymmetricBandMetric theta(2, 0);
        theta.diagonal(0) = {1.0, std::numeric_limits<double>::quiet_NaN()};
        REQUIRE_THROWS_AS(min_eigenvalue_symmetric(theta), std::invalid_argument);
    }
}

TEST_CASE("symmetric square root") {
    SECTION("diagonal fast path is entrywise") {
        SymmetricBandMetric theta(3, 0);
        theta.diagonal(0) = {1.0, 4.0, 9.0};
        const Eigen::MatrixXd s = symmetric_sqrt(theta);
        REQUIRE(s(0, 0) == 1.0);
        REQUIRE(s(1, 1) == 2.0);
        REQUIRE(s(2, 2) == 3.0);
        REQUIRE(s(0, 1) == 0.0);
    }

    SECTION("dense square root squares back") {
        SymmetricBandMetric theta(2, 1);
        theta.diagonal(0) = {2.0, 2.0};
        theta.diagonal(1) = {1.0};
        const Eigen::MatrixXd s = symmetric_sqrt(theta);
        REQUIRE(((s * s) - theta.to_dense()).norm() <= 1e-14);
        REQUIRE((s - s.transpose()).norm() <= 1e-14);
    }

    SECTION("indefinite input throws") {
        SymmetricBandMetric diag_ind(2, 0);
        diag_ind.diagonal(0) = {1.0, -1.0};
        REQUIRE_THROWS_AS(symmetric_sqrt(diag_ind), numeric_error);

        SymmetricBandMetric band_ind(2, 1);
        band_ind.diagonal(0) = {1.0, 1.0};
        band_ind.diagonal(1) = {2.0};
        REQUIRE_THROWS_AS(symmetric_sqrt(band_ind), numeric_error);
    }
}

TEST_CASE("band matrix storage") {
    SymmetricBandMetric m(4, 1);
    m.diagonal(0) = {1.0, 2.0, 3.0, 4.0};
    m.diagonal(1) = {5.0, 6.0, 7.0};

    SECTION("element access is symmetric and zero outside the band") {
        REQUIRE(m(0, 1) == 5.0);
        REQUIRE(m(1, 0) == 5.0);
        REQUIRE(m(0, 2) == 0.0);
        REQUIRE_THROWS_AS(m(0, 4), std::invalid_argument);
    }

    SECTION("dense conversion and Frobenius norm agree") {
        REQUIRE_THAT(m.frobenius_norm(), WithinAbs(m.to_dense().norm(), 1e-14));
    }

    SECTION("construction guards") {
        REQUIRE_THROWS_AS(SymmetricBandMetric(0, 0), std::invalid_argument);
        REQUIRE_THROWS_AS(SymmetricBandMetric(3, 3), std::invalid_argument);
        REQUIRE_THROWS_AS(SymmetricBandMetric::from_diagonals({{1.0, 2.0}, {3.0, 4.0}}),
                          std::invalid_argument);
    }

    SECTION("add_scaled promotes bandwidth") {
        SymmetricBandMetric d(4, 0);
        d.diagonal(0) = {1.0, 1.0, 1.0, 1.0};
        const SymmetricBandMetric sum = add_scaled(d, 2.0, m);
        REQUIRE(sum.bandwidth() == 1);
        REQUIRE(sum(0, 0) == 3.0);
        REQUIRE(sum(0, 1) == 10.0);
    }
}
