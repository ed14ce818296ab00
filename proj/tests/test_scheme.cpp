#include <random>

#include "doctest.h"
#include "eclbm/constraints.hpp"
#include "eclbm/equilibrium.hpp"
#include "eclbm/scheme.hpp"

using namespace eclbm;

namespace {
const SchemeName kAll[] = {SchemeName::D2Q9, SchemeName::D2Q13, SchemeName::D2Q17};

ParameterSet sample_params(SchemeName s) {
    FreeParameters fp;
    fp.scheme = s;
    fp.sigma5 = 0.1;
    if (s == SchemeName::D2Q9) { fp.alpha2 = -0.15; fp.beta2 = -1; fp.rates[8] = 1.8; }
    if (s == SchemeName::D2Q13) { fp.alpha2 = -116; fp.beta2 = -9.136334; fp.rates[10] = 1.4; fp.rates[11] = 1.3; }
    if (s == SchemeName::D2Q17) { fp.alpha2 = -619; fp.beta2 = -20.55; fp.rates[14] = 0.5; fp.rates[16] = 1.111; }
    return derive_parameters(fp);
}
}  // namespace

TEST_CASE("moment matrix entries") {
    auto q9 = build_scheme(SchemeName::D2Q9);
    CHECK(q9.M(3, 0) == -4.0);
    CHECK(q9.M(3, 5) == 2.0);
    auto q17 = build_scheme(SchemeName::D2Q17);
    CHECK(q17.xi[13] == std::array<int, 2>{2, 2});
    CHECK(q17.M(3, 13) == 76.0);
    CHECK(build_scheme(SchemeName::D2Q13).q == 13);
}

TEST_CASE("moment round trip") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto s : kAll) {
        auto sc = build_scheme(s, 1.3);
        for (int t = 0; t < 50; ++t) {
            Vec f(sc.q);
            for (int j = 0; j < sc.q; ++j) f(j) = u(rng);
            CHECK((sc.Minv * (sc.M * f) - f).lpNorm<Eigen::Infinity>() <= 1e-12 * f.lpNorm<Eigen::Infinity>());
        }
    }
}

TEST_CASE("energy maps") {
    auto q9 = build_scheme(SchemeName::D2Q9);
    CHECK(energy_numeric_from_physical(q9, 1.0, 2.0 / 3.0) == doctest::Approx(0.0).epsilon(1e-15));
    // uniform populations carry E = 0
    Vec f = Vec::Constant(9, 1.0 / 9.0);
    CHECK((q9.M * f)(3) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(energy_numeric_from_physical(build_scheme(SchemeName::D2Q13), 0.0, 1.0) == 26.0);
    CHECK(energy_numeric_from_physical(build_scheme(SchemeName::D2Q17), 1.0, 0.0) == -60.0);
    for (auto s : kAll) {
        auto sc = build_scheme(s, 0.7);
        const double E = energy_numeric_from_physical(sc, 1.2, 0.9);
        CHECK(energy_physical_from_numeric(sc, 1.2, E) == doctest::Approx(0.9).epsilon(1e-14));
    }
}

TEST_CASE("equilibrium examples") {
    auto sc = build_scheme(SchemeName::D2Q9);
    auto p = sample_params(SchemeName::D2Q9);
    const auto& ix = sc.idx;
    Vec rest = equilibrium_moments(sc, p, 1.0, 0.0, 0.0, -1.3);
    CHECK(rest(ix.XX) == 0.0);
    CHECK(rest(ix.XY) == 0.0);
    CHECK(rest(ix.qx) == 0.0);
    CHECK(rest(ix.qy) == 0.0);
    Vec m = equilibrium_moments(sc, p, 1.0, 0.3, -0.1, 0.0);
    CHECK(m(ix.XX) == doctest::Approx(0.08).epsilon(1e-14));
    CHECK(m(ix.XY) == doctest::Approx(-0.03).epsilon(1e-14));

    auto s13 = build_scheme(SchemeName::D2Q13);
    auto p13 = sample_params(SchemeName::D2Q13);
    CHECK(p13.c0 * p13.c0 == doctest::Approx(0.8));
    Vec m13 = equilibrium_moments(s13, p13, 1.0, 0.1, 0.0, 0.0);
    CHECK(m13(s13.idx.qx) == doctest::Approx(17.0 / 13.0 * 0.1).epsilon(1e-12));
    CHECK(m13(s13.idx.qx) == doctest::Approx(0.13077).epsilon(1e-5));
}

TEST_CASE("equilibrium jacobian") {
    auto sc = build_scheme(SchemeName::D2Q9);
    auto p = sample_params(SchemeName::D2Q9);
    auto W = ReferenceState::from_sound_speed(1.0, 0.1, 0.0, p.c0);
    // the 0.4 slope includes the |j|^2 term of the heat flux
    auto pq = p;
    pq.include_velocity_square_in_heat_flux = true;
    CHECK(equilibrium_jacobian(sc, pq, W)(sc.idx.qx, 0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(equilibrium_jacobian(sc, p, W)(sc.idx.qx, 0) == doctest::Approx(0.4 - 0.006).epsilon(1e-12));

    auto W_rest = ReferenceState::from_sound_speed(1.0, 0.0, 0.0, p.c0);
    Mat Jr = equilibrium_jacobian(sc, p, W_rest);
    for (int c = 0; c < 4; ++c) CHECK(Jr(sc.idx.XX, c) == 0.0);
    CHECK(Jr(sc.idx.qx, 1) == doctest::Approx(6 * p.c0 * p.c0 - 5));

    for (auto s : kAll) {
        auto S = build_scheme(s);
        auto P = sample_params(s);
        auto W0 = ReferenceState::from_sound_speed(1.0, 0.07, -0.04, P.c0);
        Mat A = equilibrium_jacobian(S, P, W0);
        const double E0 = energy_numeric_from_physical(S, W0.rho0, W0.eps0());
        const double base[4] = {W0.rho0, W0.rho0 * W0.u0, W0.rho0 * W0.v0, E0};
        for (int c = 0; c < 4; ++c) {
            const double h = 1e-6 * (c == 3 ? std::max(1.0, std::abs(E0)) : 1.0);
            double a[4], b[4];
            std::copy(base, base + 4, a);
            std::copy(base, base + 4, b);
            a[c] += h;
            b[c] -= h;
            Vec fd = (equilibrium_moments(S, P, a[0], a[1], a[2], a[3]) - equilibrium_moments(S, P, b[0], b[1], b[2], b[3])) / (2 * h);
            Vec col = A.col(c);
            INFO(to_string(s), " column ", c);
            CHECK((col - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
        }
    }
}

TEST_CASE("relaxation arithmetic") {
    Vec m(5), meq(5);
    m << 1, 1, 1, 1, 1;
    meq << 0, 0, 0, 0, 0;
    std::vector<double> s{0, 0, 0, 0, 1.9};
    CHECK(relax_moments(m, meq, s)(4) == doctest::Approx(-0.9).epsilon(1e-15));
    s[4] = 1.0;
    CHECK(relax_moments(m, meq, s)(4) == 0.0);
    s[4] = 0.0;
    CHECK(relax_moments(m, meq, s)(4) == 1.0);
    // rates on conserved slots are ignored
    std::vector<double> bad{1, 1, 1, 1, 0};
    CHECK(relax_moments(m, meq, bad).head(4) == m.head(4));
}

TEST_CASE("collision") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    for (auto s : kAll) {
        auto sc = build_scheme(s);
        auto p = sample_params(s);
        const double eps = 0.5 * p.c0 * p.c0;
        Vec feq = equilibrium_populations(sc, p, {1.0, 0.0, 0.0, eps});
        CHECK((collide(sc, p, feq) - feq).lpNorm<Eigen::Infinity>() <= 1e-14);

        auto p0 = p;
        std::fill(p0.s.begin(), p0.s.end(), 0.0);
        Vec f(sc.q);
        for (int j = 0; j < sc.q; ++j) f(j) = u(rng) / sc.q;
        CHECK(collide(sc, p0, f) == f);

        for (int t = 0; t < 1000; ++t) {
            for (int j = 0; j < sc.q; ++j) f(j) = u(rng);
            f /= f.sum();
            const ConservedState a = conserved_of(sc, f), b = conserved_of(sc, collide(sc, p, f));
            CHECK(std::abs(a.rho - b.rho) <= 1e-14);
            CHECK(std::abs(a.jx - b.jx) <= 1e-14);
            CHECK(std::abs(a.jy - b.jy) <= 1e-14);
            CHECK(std::abs(a.eps - b.eps) <= 1e-13);
        }
    }
}

TEST_CASE("nonpositive density is rejected") {
    auto sc = build_scheme(SchemeName::D2Q9);
    auto p = sample_params(SchemeName::D2Q9);
    CHECK_THROWS_AS(equilibrium_nonlinear(sc, p, {0.0, 0.0, 0.0, 1.0}), NonPositiveDensity);
}
