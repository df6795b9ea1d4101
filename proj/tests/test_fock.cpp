#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qgrow/errors.hpp"
#include "qgrow/fock.hpp"
#include "support.hpp"

using namespace qgrow;

TEST_CASE("coherent_state basics") {
    auto vac = coherent_state(0.0, 8);
    CHECK(std::abs(vac.c[0]) == doctest::Approx(1.0).epsilon(1e-12));
    for (int n = 1; n < 8; ++n) CHECK(std::abs(vac.c[n]) == 0.0);

    // <0|alpha> = e^{-|alpha|^2/2} before renormalization
    auto raw = coherent_coefficients(Complex(1.0, 0.0), 20);
    CHECK(raw[0].real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

    auto st = coherent_state(Complex(1.1, 0.0), 25);
    CHECK(st.squared_norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_FALSE(st.truncation_warning);

    // Truncation leak: |alpha|^2 = 9 in dim 6 leaves most weight outside.
    CHECK(coherent_state(Complex(3.0, 0.0), 6).truncation_warning);
}

TEST_CASE("squeezed_vacuum") {
    auto vac = squeezed_vacuum(0.0, 10);
    CHECK(std::abs(vac.c[0]) == doctest::Approx(1.0));

    auto sq = squeezed_vacuum(0.5, 30);
    for (int n = 1; n < 30; n += 2) CHECK(std::abs(sq.c[n]) == 0.0);
    // <n> = sinh^2(r), via the Fock-sum oracle
    double expected = std::sinh(0.5) * std::sinh(0.5);
    CHECK(testsupport::mean_n_of(sq.c) == doctest::Approx(expected).epsilon(1e-6));

    // Squeezing convention: Var(y) reduced below vacuum's 1/4.
    auto rho = density_from_pure(sq);
    double a2 = 0.0;
    for (int n = 0; n + 2 < 30; ++n)
        a2 += std::sqrt((n + 1.0) * (n + 2.0)) * rho.m(n + 2, n).real();
    double var_y = (1.0 + 2.0 * mean_photon_number(rho) - 2.0 * a2) / 4.0;
    CHECK(var_y < 0.25);
}

TEST_CASE("odd_cat") {
    double alpha = 1.1;
    auto cat = odd_cat(alpha, 25);
    for (int n = 0; n < 25; n += 2) CHECK(std::abs(cat.c[n]) == 0.0);

    double norm_const = 1.0 / std::sqrt(2.0 * (1.0 - std::exp(-2.0 * alpha * alpha)));
    CHECK(norm_const == doctest::Approx(0.7408).epsilon(1e-3));
    // c_1 = 2 N e^{-a^2/2} a
    CHECK(cat.c[1].real() ==
          doctest::Approx(2.0 * norm_const * std::exp(-0.5 * alpha * alpha) * alpha)
              .epsilon(1e-6));

    // <n> = alpha^2 coth(alpha^2), cross-checked by the Fock-sum oracle
    double a2 = alpha * alpha;
    double expected = a2 * std::cosh(a2) / std::sinh(a2);
    CHECK(expected == doctest::Approx(1.446).epsilon(1e-3));
    CHECK(testsupport::mean_n_of(cat.c) == doctest::Approx(expected).epsilon(1e-8));

    CHECK_THROWS_AS(odd_cat(0.0, 10), degenerate_input_error);
}

TEST_CASE("subtract_photon") {
    FockVector one;
    one.c = Eigen::VectorXcd::Zero(5);
    one.c[1] = 1.0;
    auto sub = subtract_photon(one);
    CHECK(std::abs(sub.c[0]) == doctest::Approx(1.0));

    // Parity flip on squeezed vacuum.
    auto odd = subtract_photon(squeezed_vacuum(0.4, 30));
    for (int n = 0; n < 30; n += 2) CHECK(std::abs(odd.c[n]) == 0.0);

    // a (|a> - |-a>) proportional to the even cat |a> + |-a>.
    auto evened = subtract_photon(odd_cat(1.1, 30));
    auto plus = coherent_coefficients(Complex(1.1, 0.0), 30);
    auto minus = coherent_coefficients(Complex(-1.1, 0.0), 30);
    Eigen::VectorXcd even_cat = plus + minus;
    even_cat /= even_cat.norm();
    double overlap = std::norm(even_cat.dot(evened.c));
    CHECK(overlap == doctest::Approx(1.0).epsilon(1e-9));

    FockVector vac;
    vac.c = Eigen::VectorXcd::Zero(5);
    vac.c[0] = 1.0;
    CHECK_THROWS_AS(subtract_photon(vac), degenerate_input_error);
}

TEST_CASE("density_from_pure") {
    auto cat = odd_cat(1.1, 20);
    auto rho = density_from_pure(cat);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_NOTHROW(validate(rho));
}

TEST_CASE("apply_loss") {
    auto cat = density_from_pure(odd_cat(1.1, 20));
    auto same = apply_loss(cat, 1.0);
    CHECK((same.m - cat.m).cwiseAbs().maxCoeff() == 0.0);

    // Single photon: eta |1><1| + (1-eta)|0><0| by direct Kraus evaluation.
    DensityMatrix one;
    one.m = Eigen::MatrixXcd::Zero(5, 5);
    one.m(1, 1) = 1.0;
    double eta = 0.73;
    auto lossy = apply_loss(one, eta);
    CHECK(lossy.m(1, 1).real() == doctest::Approx(eta).epsilon(1e-12));
    CHECK(lossy.m(0, 0).real() == doctest::Approx(1.0 - eta).epsilon(1e-12));

    auto lossy_cat = apply_loss(cat, 0.8);
    CHECK(lossy_cat.trace() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_NOTHROW(validate(lossy_cat));

    CHECK_THROWS_AS(apply_loss(cat, 0.0), std::domain_error);
    CHECK_THROWS_AS(apply_loss(cat, 1.5), std::domain_error);

    SUBCASE("channel composition") {
        auto twice = apply_loss(apply_loss(cat, 0.9), 0.8);
        auto once = apply_loss(cat, 0.72);
        CHECK((twice.m - once.m).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("fidelity") {
    auto cat = odd_cat(1.1, 20);
    CHECK(fidelity(density_from_pure(cat), cat) == doctest::Approx(1.0).epsilon(1e-10));

    FockVector vac, one;
    vac.c = Eigen::VectorXcd::Zero(20);
    vac.c[0] = 1.0;
    one.c = Eigen::VectorXcd::Zero(20);
    one.c[1] = 1.0;
    CHECK(fidelity(density_from_pure(vac), one) == 0.0);

    DensityMatrix half;
    half.m = 0.5 * (density_from_pure(vac).m + density_from_pure(one).m);
    CHECK(fidelity(half, vac) == doctest::Approx(0.5).epsilon(1e-12));

    FockVector small;
    small.c = Eigen::VectorXcd::Zero(5);
    small.c[0] = 1.0;
    CHECK_THROWS_AS(fidelity(density_from_pure(cat), small), std::invalid_argument);
}

TEST_CASE("scalar metrics") {
    FockVector vac;
    vac.c = Eigen::VectorXcd::Zero(6);
    vac.c[0] = 1.0;
    CHECK(mean_photon_number(density_from_pure(vac)) == 0.0);
    CHECK(parity(density_from_pure(vac)) == 1.0);

    DensityMatrix three;
    three.m = Eigen::MatrixXcd::Zero(6, 6);
    three.m(3, 3) = 1.0;
    CHECK(mean_photon_number(three) == 3.0);

    CHECK(parity(density_from_pure(odd_cat(1.7, 30))) == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(parity(density_from_pure(squeezed_vacuum(0.7, 40))) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("n_qc_from_squeeze") {
    CHECK(n_qc_from_squeeze({1.0}) == 0.0);
    double beta = std::pow(10.0, 1.5);  // 15 dB
    CHECK(n_qc_from_squeeze({beta}) == doctest::Approx(7.41).epsilon(0.002));
    // Reciprocal symmetry holds to rounding (1/(1/beta) is not exact in IEEE).
    CHECK(n_qc_from_squeeze({beta}) ==
          doctest::Approx(n_qc_from_squeeze({1.0 / beta})).epsilon(1e-15));
    CHECK_THROWS_AS(n_qc_from_squeeze({0.0}), std::domain_error);
}

TEST_CASE("photon-subtracted squeezed vacuum approximates a small cat") {
    for (double r : {0.1, 0.2, 0.3}) {
        auto sub = subtract_photon(squeezed_vacuum(r, 40));
        auto rho = density_from_pure(sub);
        // Scan the cat amplitude for the best match (independent of
        // fit_cat_amplitude).
        double best = 0.0;
        for (double a = 0.1; a < 3.0; a += 0.01)
            best = std::max(best, fidelity(rho, odd_cat(a, 40)));
        CHECK(best >= 0.99);
    }
}

TEST_CASE("subtract_photon parity invariant over r") {
    for (double r : {0.1, 0.25, 0.5, 0.75, 1.0}) {
        CHECK(parity(density_from_pure(squeezed_vacuum(r, 48))) ==
              doctest::Approx(1.0).epsilon(1e-8));
        CHECK(parity(density_from_pure(subtract_photon(squeezed_vacuum(r, 48)))) ==
              doctest::Approx(-1.0).epsilon(1e-8));
    }
}
