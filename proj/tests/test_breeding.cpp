#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qgrow/breeding.hpp"
#include "qgrow/errors.hpp"
#include "support.hpp"

using namespace qgrow;

namespace {

DensityMatrix vacuum_density(int dim) {
    DensityMatrix rho;
    rho.m = Eigen::MatrixXcd::Zero(dim, dim);
    rho.m(0, 0) = 1.0;
    return rho;
}

}  // namespace

TEST_CASE("virtual_bs") {
    auto [p1, m1] = virtual_bs({1, 0}, {1, 0});
    CHECK(p1.x == doctest::Approx(std::sqrt(2.0)));
    CHECK(m1.x == doctest::Approx(0.0));

    auto [p2, m2] = virtual_bs({1, 0}, {-1, 0});
    CHECK(p2.x == doctest::Approx(0.0));
    CHECK(m2.x == doctest::Approx(std::sqrt(2.0)));

    auto [p3, m3] = virtual_bs({0.3, -0.7}, {1.2, 0.4});
    double in = 0.3 * 0.3 + 0.7 * 0.7 + 1.2 * 1.2 + 0.4 * 0.4;
    double out = p3.x * p3.x + p3.y * p3.y + m3.x * m3.x + m3.y * m3.y;
    CHECK(out == doctest::Approx(in).epsilon(1e-12));

    // Energy conservation on random inputs.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 200; ++k) {
        QuadratureSample a{u(rng), u(rng)}, b{u(rng), u(rng)};
        auto [p, m] = virtual_bs(a, b);
        double lhs = p.x * p.x + p.y * p.y + m.x * m.x + m.y * m.y;
        double rhs = a.x * a.x + a.y * a.y + b.x * b.x + b.y * b.y;
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, rhs));
    }
}

TEST_CASE("breed_step hand-evaluated pairs") {
    SampleSet set;
    set.samples = {{1, 0}, {1, 0}, {1, 0}, {-1, 0}};
    auto [out, stats] = breed_step(set, 0.5);
    REQUIRE(out.count() == 1);
    CHECK(out.samples[0].x == doctest::Approx(std::sqrt(2.0)));
    CHECK(stats.pair_count == 2);
    CHECK(stats.acceptance_fraction == doctest::Approx(0.5));
    CHECK(out.meta.generation == 1);

    auto [none, s0] = breed_step(set, 0.0);
    CHECK(none.count() == 0);
    CHECK(s0.empty_output_warning);

    auto [all, sinf] = breed_step(set, 1e18);
    CHECK(sinf.accepted_count == sinf.pair_count);

    SampleSet tiny;
    tiny.samples = {{0, 0}};
    CHECK_THROWS_AS(breed_step(tiny, 1.0), std::domain_error);
}

TEST_CASE("breed_iterate bookkeeping") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    SampleSet set;
    for (int i = 0; i < 4000; ++i) set.samples.push_back({g(rng), g(rng)});

    BreedingConfig cfg;
    cfg.nbar = 1.3;
    cfg.steps = 3;
    auto gens = breed_iterate(set, cfg);
    REQUIRE(gens.size() >= 1);
    CHECK(gens[0].second.input_count == 4000);
    for (std::size_t s = 1; s < gens.size(); ++s)
        CHECK(gens[s].second.input_count == gens[s - 1].second.accepted_count);
    for (std::size_t s = 0; s < gens.size(); ++s)
        CHECK(gens[s].first.meta.generation == s + 1);

    // steps = 1 is one breed_step.
    cfg.steps = 1;
    auto single = breed_iterate(set, cfg);
    auto [direct, dstats] = breed_step(set, 1.3);
    REQUIRE(single.size() == 1);
    CHECK(single[0].first.count() == direct.count());
    CHECK(single[0].second.accepted_count == dstats.accepted_count);
}

TEST_CASE("herald_povm_weights") {
    auto g = herald_povm_weights(1.3, 10);
    CHECK(g[0] == doctest::Approx(1.0 - std::exp(-1.3)).epsilon(1e-12));
    CHECK(g[0] == doctest::Approx(0.7275).epsilon(1e-3));
    CHECK(g[1] == doctest::Approx(1.0 - std::exp(-1.3) * 2.3).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(0.3732).epsilon(1e-3));
    for (int n = 1; n < 10; ++n) CHECK(g[n] < g[n - 1]);

    auto big = herald_povm_weights(1e9, 6);
    for (double v : big) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

    // gamma_n equals the disc integral of |<n|alpha>|^2 / pi (quadrature oracle).
    for (int n : {0, 1, 2, 3}) {
        double nbar = 1.3;
        double integral = 0.0;
        int grid = 400;
        double r_max = std::sqrt(nbar);
        for (int i = 0; i < grid; ++i) {
            double r = (i + 0.5) * r_max / grid;
            double p = std::exp(-r * r) * std::pow(r * r, n) / std::tgamma(n + 1.0);
            integral += 2.0 * r * p * (r_max / grid);
        }
        CHECK(g[n] == doctest::Approx(integral).epsilon(1e-4));
    }
}

TEST_CASE("bs_two_mode") {
    int d = 12;
    auto vac = vacuum_density(d);
    auto out = bs_two_mode(vac, vac);
    CHECK(out.m(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.m.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-10));

    // Equal coherent states interfere classically: |b,b> -> |sqrt(2) b, 0>.
    double b = 0.8;
    auto coh = density_from_pure(coherent_state(Complex(b, 0.0), d));
    auto joint = bs_two_mode(coh, coh);
    auto target1 = coherent_coefficients(Complex(std::sqrt(2.0) * b, 0.0), d);
    Eigen::VectorXcd target(d * d);
    target.setZero();
    for (int m = 0; m < d; ++m) target[m * d] = target1[m];  // mode 2 in vacuum
    double fid = (target.adjoint() * joint.m * target)(0, 0).real();
    CHECK(fid >= 1.0 - 1e-6);

    // Photon-number conservation: |2,0> input populates only the N = 2 block.
    DensityMatrix fock_in;
    fock_in.m = Eigen::MatrixXcd::Zero(6, 6);
    fock_in.m(2, 2) = 1.0;
    auto mixed = bs_two_mode(fock_in, vacuum_density(6));
    for (int m = 0; m < 6; ++m)
        for (int n = 0; n < 6; ++n)
            if (m + n != 2)
                CHECK(std::abs(mixed.m(m * 6 + n, m * 6 + n)) < 1e-14);

    CHECK_THROWS_AS(bs_two_mode(vac, vacuum_density(8)), std::invalid_argument);
}

TEST_CASE("breed_oracle closed forms") {
    auto vac = vacuum_density(10);
    auto [rho_v, p_v] = breed_oracle(vac, 1.3);
    CHECK(p_v == doctest::Approx(1.0 - std::exp(-1.3)).epsilon(1e-10));
    CHECK(rho_v.m(0, 0).real() == doctest::Approx(1.0).epsilon(1e-10));

    double b = 0.7, nbar = 0.9;
    auto coh = density_from_pure(coherent_state(Complex(b, 0.0), 14));
    auto [rho_c, p_c] = breed_oracle(coh, nbar);
    CHECK(p_c == doctest::Approx(1.0 - std::exp(-nbar)).epsilon(1e-8));
    auto grown = coherent_state(Complex(std::sqrt(2.0) * b, 0.0), 14);
    CHECK(fidelity(rho_c, grown) == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(breed_oracle(vac, 0.0), degenerate_input_error);
}

TEST_CASE("breed_oracle grows the cat amplitude by roughly sqrt(2)") {
    auto cat = density_from_pure(odd_cat(1.1, 20));
    auto [grown, p] = breed_oracle(cat, 1.3);
    CHECK_NOTHROW(validate(grown));
    // Interfering two odd cats flips the parity, so the grown state lives in
    // the even-cat family. Amplitude fit via direct scan (independent of
    // fit_cat_amplitude).
    CHECK(parity(grown) == doctest::Approx(1.0).epsilon(1e-9));
    double best_a = 0.0, best_f = 0.0;
    for (double a = 0.5; a < 3.0; a += 0.005) {
        double f = fidelity(grown, even_cat(a, 20));
        if (f > best_f) {
            best_f = f;
            best_a = a;
        }
    }
    CHECK(best_a >= 1.4);
    CHECK(best_a <= 1.8);
    CHECK(best_f > 0.5);
    CHECK(p > 0.0);
    CHECK(p < 1.0);
}

TEST_CASE("acceptance fraction monotone in nbar") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g(0.0, 1.0);
    SampleSet set;
    for (int i = 0; i < 20000; ++i) set.samples.push_back({g(rng) + 1.0, g(rng)});
    double prev = -1.0;
    for (double nbar : {0.5, 1.0, 1.3, 2.0}) {
        auto [out, stats] = breed_step(set, nbar);
        CHECK(stats.acceptance_fraction >= prev);
        prev = stats.acceptance_fraction;
    }
}
