#include <catch2/catch_amalgamated.hpp>

#include <cryptoherm/polyfam.hpp>

#include <cmath>
#include <vector>

using namespace cryptoherm;
using Catch::Matchers::WithinAbs;

TEST_CASE("family Hamiltonians match their closed forms") {
    SECTION("Legendre") {
        const TridiagonalHamiltonian h = build_hamiltonian(Legendre{}, 3);
        REQUIRE(h.diag == std::vector<double>{0.0, 0.0, 0.0});
        REQUIRE(h.super == std::vector<double>{1.0, 2.0 / 3.0});
        REQUIRE(h.sub == std::vector<double>{1.0 / 3.0, 2.0 / 5.0});
    }

    SECTION("Tschebyshev has the doubled first coupling") {
        const TridiagonalHamiltonian h = build_hamiltonian(Tschebyshev{}, 4);
        REQUIRE(h.super == std::vector<double>{2.0, 1.0, 1.0});
        REQUIRE(h.sub == std::vector<double>{1.0, 1.0, 1.0});
    }

    SECTION("Hermite") {
        const TridiagonalHamiltonian h = build_hamiltonian(Hermite{}, 4);
        REQUIRE(h.super == std::vector<double>{1.0, 1.0, 1.0});
        REQUIRE(h.sub == std::vector<double>{2.0, 4.0, 6.0});
    }

    SECTION("Laguerre") {
        const TridiagonalHamiltonian h = build_hamiltonian(Laguerre{1.0}, 3);
        REQUIRE(h.diag == std::vector<double>{2.0, 4.0, 6.0});
        REQUIRE(h.super == std::vector<double>{-1.0, -2.0});
        REQUIRE(h.sub == std::vector<double>{-2.0, -3.0});
        // the diagonal climbs by 2 regardless of a
        const TridiagonalHamiltonian h2 = build_hamiltonian(Laguerre{0.5}, 5);
        for (std::size_t k = 0; k + 1 < 5; ++k)
            REQUIRE_THAT(h2.diag[k + 1] - h2.diag[k], WithinAbs(2.0, 1e-15));
    }

    SECTION("Gegenbauer at a = 1 is symmetric with constant couplings") {
        const TridiagonalHamiltonian h = build_hamiltonian(Gegenbauer{1.0}, 3);
        REQUIRE(h.super == std::vector<double>{0.5, 0.5});
        REQUIRE(h.sub == std::vector<double>{0.5, 0.5});
    }

    SECTION("Gegenbauer at a = 0 hits a vanishing denominator") {
        REQUIRE_THROWS_AS(build_hamiltonian(Gegenbauer{0.0}, 3), std::invalid_argument);
    }

    SECTION("Jacobi spot values at mu = 2, nu = 3") {
        const TridiagonalHamiltonian h = build_hamiltonian(Jacobi{2.0, 3.0}, 3);
        REQUIRE_THAT(h.diag[0], WithinAbs(-1.0 / 7.0, 1e-15));
        REQUIRE_THAT(h.diag[1], WithinAbs(-5.0 / 63.0, 1e-15));
        REQUIRE_THAT(h.super[0], WithinAbs(-2.0 / 7.0, 1e-15));
        REQUIRE_THAT(h.super[1], WithinAbs(-7.0 / 18.0, 1e-15));
        REQUIRE_THAT(h.sub[0], WithinAbs(-3.0 / 7.0, 1e-15));
    }

    SECTION("Jacobi at mu = nu = 0 is Legendre with flipped coupling signs") {
        const TridiagonalHamiltonian j = build_hamiltonian(Jacobi{0.0, 0.0}, 6);
        const TridiagonalHamiltonian l = build_hamiltonian(Legendre{}, 6);
        for (std::size_t i = 0; i < 6; ++i) REQUIRE_THAT(j.diag[i], WithinAbs(0.0, 1e-15));
        for (std::size_t i = 0; i + 1 < 6; ++i) {
            REQUIRE_THAT(j.super[i], WithinAbs(-l.super[i], 1e-15));
            REQUIRE_THAT(j.sub[i], WithinAbs(-l.sub[i], 1e-15));
        }
    }

    SECTION("Jacobi parameter range") {
        REQUIRE_THROWS_AS(build_hamiltonian(Jacobi{-1.0, 0.0}, 3), std::invalid_argument);
        REQUIRE_THROWS_AS(build_hamiltonian(Jacobi{0.0, -1.5}, 3), std::invalid_argument);
        REQUIRE_NOTHROW(build_hamiltonian(Jacobi{-0.5, -0.5}, 8));
    }

    SECTION("Custom passthrough and validation") {
        const Custom c{{1.0, 2.0}, {3.0}, {4.0}};
        const TridiagonalHamiltonian h = build_hamiltonian(c, 2);
        REQUIRE(h.diag == c.diag);
        REQUIRE(h.super == c.super);
        REQUIRE(h.sub == c.sub);
        REQUIRE_THROWS_AS(build_hamiltonian(Custom{{1.0}, {2.0}, {3.0}}, 2),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(build_hamiltonian(Legendre{}, 0), std::invalid_argument);
    }

    SECTION("nonzero coupling flag") {
        REQUIRE(build_hamiltonian(Legendre{}, 4).nonzero_couplings());
        // b_2 = -(1 + a) vanishes at a = -1 + ... use a = -1: outside no range
        // restriction for Laguerre, the coupling just dies
        REQUIRE_FALSE(build_hamiltonian(Laguerre{-1.0}, 3).nonzero_couplings());
    }
}

TEST_CASE("polynomial vector evaluation") {
    SECTION("Tschebyshev at the origin alternates 1, 0, -1, 0, 1") {
        const TridiagonalHamiltonian h = build_hamiltonian(Tschebyshev{}, 5);
        const std::vector<double> y = eval_polynomial_vector(h, 0.0);
        REQUIRE(y == std::vector<double>{1.0, 0.0, -1.0, 0.0, 1.0});
    }

    SECTION("Legendre at 1 is identically one") {
        const TridiagonalHamiltonian h = build_hamiltonian(Legendre{}, 8);
        for (double v : eval_polynomial_vector(h, 1.0)) REQUIRE_THAT(v, WithinAbs(1.0, 1e-14));
    }

    SECTION("zero superdiagonal is rejected") {
        const TridiagonalHamiltonian h = build_hamiltonian(Custom{{0.0, 0.0}, {0.0}, {1.0}}, 2);
        REQUIRE_THROWS_AS(eval_polynomial_vector(h, 0.5), std::invalid_argument);
    }
}

TEST_CASE("spectrum") {
    SECTION("Tschebyshev n = 2") {
        const Spectrum s = spectrum(build_hamiltonian(Tschebyshev{}, 2));
        REQUIRE_THAT(s.energies[0], WithinAbs(-std::sqrt(2.0), 1e-14));
        REQUIRE_THAT(s.energies[1], WithinAbs(std::sqrt(2.0), 1e-14));
        REQUIRE_THAT(s.min_gap, WithinAbs(2.0 * std::sqrt(2.0), 1e-14));
    }

    SECTION("Tschebyshev n = 4 against the cosine closed form") {
        const Spectrum s = spectrum(build_hamiltonian(Tschebyshev{}, 4));
        const double pi = std::acos(-1.0);
        const std::vector<double> expected{-2.0 * std::cos(pi / 8.0), -2.0 * std::cos(3.0 * pi / 8.0),
                                           2.0 * std::cos(3.0 * pi / 8.0), 2.0 * std::cos(pi / 8.0)};
        for (std::size_t i = 0; i < 4; ++i)
            REQUIRE_THAT(s.energies[i], WithinAbs(expected[i], 1e-13));
    }

    SECTION("Hermite n = 3 is {-sqrt6, 0, sqrt6}") {
        const Spectrum s = spectrum(build_hamiltonian(Hermite{}, 3));
        REQUIRE_THAT(s.energies[0], WithinAbs(-std::sqrt(6.0), 1e-13));
        REQUIRE_THAT(s.energies[1], WithinAbs(0.0, 1e-13));
        REQUIRE_THAT(s.energies[2], WithinAbs(std::sqrt(6.0), 1e-13));
    }

    SECTION("methods agree on a symmetrizable Hamiltonian") {
        const TridiagonalHamiltonian h = build_hamiltonian(Laguerre{0.5}, 10);
        const Spectrum sym = spectrum(h, SpectrumMethod::symmetrize);
        const Spectrum gen = spectrum(h, SpectrumMethod::general);
        const double scale = std::max(std::abs(sym.energies.front()), std::abs(sym.energies.back()));
        for (std::size_t i = 0; i < 10; ++i)
            REQUIRE_THAT(gen.energies[i], WithinAbs(sym.energies[i], 1e-10 * scale));
    }

    SECTION("general path handles triangular input") {
        const Spectrum s = spectrum(build_hamiltonian(Custom{{1.0, 3.0}, {2.0}, {0.0}}, 2));
        REQUIRE_THAT(s.energies[0], WithinAbs(1.0, 1e-13));
        REQUIRE_THAT(s.energies[1], WithinAbs(3.0, 1e-13));
    }

    SECTION("complex pair is rejected") {
        REQUIRE_THROWS_AS(spectrum(build_hamiltonian(Custom{{0.0, 0.0}, {1.0}, {-1.0}}, 2)),
                          numeric_error);
    }

    SECTION("degenerate spectrum is rejected") {
        REQUIRE_THROWS_AS(spectrum(build_hamiltonian(Custom{{1.0, 1.0}, {0.0}, {0.0}}, 2)),
                          numeric_error);
    }

    SECTION("symmetrize refuses sign-mixed couplings") {
        REQUIRE_THROWS_AS(
            spectrum(build_hamiltonian(Custom{{0.0, 0.0}, {1.0}, {-1.0}}, 2),
                     SpectrumMethod::symmetrize),
            std::invalid_argument);
    }
}

TEST_CASE("eigenvector kets") {
    SECTION("Tschebyshev n = 2 at sqrt2") {
        const TridiagonalHamiltonian h = build_hamiltonian(Tschebyshev{}, 2);
        const std::vector<double> y = ket(h, std::sqrt(2.0));
        REQUIRE(y[0] == 1.0);
        REQUIRE_THAT(y[1], WithinAbs(std::sqrt(2.0) / 2.0, 1e-15));
    }

    SECTION("non-eigenvalue is rejected") {
        const TridiagonalHamiltonian h = build_hamiltonian(Tschebyshev{}, 2);
        REQUIRE_THROWS_AS(ket(h, 1.5), numeric_error);
    }

    SECTION("every spectrum point yields a residual-checked ket") {
        const TridiagonalHamiltonian h = build_hamiltonian(Legendre{}, 7);
        const Eigen::MatrixXd hd = h.to_dense();
        for (double e : spectrum(h).energies) {
            const std::vector<double> y = ket(h, e);
            const Eigen::Map<const Eigen::VectorXd> yv(y.data(), 7);
            REQUIRE((hd * yv - e * yv).norm() <= 1e-9 * (hd.norm() + std::abs(e)) * yv.norm());
        }
    }

    SECTION("one-dimensional edge case") {
        const TridiagonalHamiltonian h = build_hamiltonian(Custom{{4.0}, {}, {}}, 1);
        REQUIRE(ket(h, 4.0) == std::vector<double>{1.0});
        const Spectrum s = spectrum(h);
        REQUIRE(s.energies == std::vector<double>{4.0});
        REQUIRE(std::isinf(s.min_gap));
    }
}
