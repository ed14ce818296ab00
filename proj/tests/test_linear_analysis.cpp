#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "eclbm/constraints.hpp"
#include "eclbm/linear_analysis.hpp"

using namespace eclbm;

namespace {
constexpr double kPi = 3.14159265358979323846;

double deg(double d) { return d * kPi / 180.0; }

std::vector<double> grid(double hi, int n) {
    std::vector<double> g;
    for (int i = 1; i <= n; ++i) g.push_back(hi * i / n);
    return g;
}

FreeParameters d2q9_constrained() {
    FreeParameters fp;
    fp.scheme = SchemeName::D2Q9;
    fp.sigma5 = sigma_from_rate(1.8181);
    fp.alpha2 = -0.15;
    fp.beta2 = -1;
    fp.rates[8] = 1.8;
    return fp;
}

FreeParameters d2q13_fig5() {
    FreeParameters fp;
    fp.scheme = SchemeName::D2Q13;
    fp.sigma5 = 0.015;
    fp.alpha2 = -116;
    fp.beta2 = -9.136334;
    fp.rates[10] = 1.4;
    fp.rates[11] = 1.3;
    return fp;
}
}  // namespace

TEST_CASE("k = 0 spectrum") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> r(0.1, 1.95);
    for (auto s : {SchemeName::D2Q9, SchemeName::D2Q13, SchemeName::D2Q17}) {
        FreeParameters fp;
        fp.scheme = s;
        fp.isotropy = IsotropyLevel::none;
        fp.sigma5 = sigma_from_rate(r(rng));
        auto sc = build_scheme(s);
        for (int k = 6; k < sc.q; ++k) fp.rates[k] = r(rng);
        // keep the declared pairs equal
        fp.rates[7] = fp.rates[6];
        if (sc.q > 9) fp.rates[9] = fp.rates[8];
        if (s == SchemeName::D2Q17) { fp.rates[11] = fp.rates[10]; fp.rates[13] = fp.rates[12]; }
        auto p = derive_parameters(fp);
        auto W0 = ReferenceState::from_sound_speed(1.0, 0.0, 0.0, p.c0);
        auto sp = spectrum(amplification_matrix(sc, p, W0, {0.0, 0.3}), false);
        std::vector<double> want(4, 1.0), got;
        for (int k = 4; k < sc.q; ++k) want.push_back(1.0 - p.s[k]);
        for (int i = 0; i < sp.values.size(); ++i) {
            CHECK(std::abs(sp.values(i).imag()) <= 1e-10);
            got.push_back(sp.values(i).real());
        }
        std::sort(want.begin(), want.end());
        std::sort(got.begin(), got.end());
        for (size_t i = 0; i < want.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
    }
}

TEST_CASE("k = 0 double eigenvalue of the stress pair") {
    FreeParameters fp = d2q9_constrained();
    fp.sigma5 = sigma_from_rate(1.88);
    auto p = derive_parameters(fp);
    auto sc = build_scheme(fp.scheme);
    auto sp = spectrum(amplification_matrix(sc, p, ReferenceState::from_sound_speed(1, 0, 0, p.c0), {0.0, 0.0}), false);
    int n = 0;
    for (int i = 0; i < sp.values.size(); ++i)
        if (std::abs(sp.values(i) - cplx(-0.88, 0)) < 1e-10) ++n;
    CHECK(n == 2);
}

TEST_CASE("pure streaming is unitary") {
    for (auto s : {SchemeName::D2Q9, SchemeName::D2Q13, SchemeName::D2Q17}) {
        FreeParameters fp;
        fp.scheme = s;
        auto p = derive_parameters(fp);
        std::fill(p.s.begin(), p.s.end(), 0.0);
        auto sc = build_scheme(s);
        auto W0 = ReferenceState::from_sound_speed(1, 0, 0, p.c0);
        for (double k : {0.1, 1.3, 3.0}) {
            auto sp = spectrum(amplification_matrix(sc, p, W0, {k, 0.4}), false);
            for (int i = 0; i < sp.values.size(); ++i) CHECK(std::abs(sp.values(i)) == doctest::Approx(1.0).epsilon(1e-12));
        }
        auto tr = track_modes(sc, p, W0, 0.4, grid(0.2, 40));
        auto eff = effective_coefficients(sc, p, W0, tr);
        for (const auto& e : eff) {
            CHECK(std::abs(e.damping[0]) <= 1e-9);
            CHECK(std::abs(e.damping[1]) <= 1e-9);
        }
        auto fit = fit_dispersion(sc, p, W0, tr, 4, 0.01, 0.2);
        for (int m = 0; m < 4; ++m)
            for (const auto& c : fit.coeff[m]) CHECK(std::abs(c.real()) <= 1e-8);
    }
}

TEST_CASE("characteristic basis") {
    auto W0 = ReferenceState::from_sound_speed(1, 0, 0, 0.8);
    WaveVector k{0.5, 0.3};
    CMat R = characteristic_basis(W0, 0.8, k);
    CHECK(std::abs(R(0, 0)) == 0.0);
    CHECK(std::abs(R(1, 0) - cplx(0, -k.ky())) <= 1e-15);
    CHECK(std::abs(R(2, 0) - cplx(0, k.kx())) <= 1e-15);
    CHECK(std::abs(R(3, 0)) == 0.0);
    CHECK(std::abs(R(3, 2) - cplx(0, 0.64 * 0.5)) <= 1e-15);
    CHECK(std::abs(R(3, 3) - cplx(0, 0.64 * 0.5)) <= 1e-15);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-0.3, 0.3), kk(0.01, 3.0), th(0, 2 * kPi);
    for (int t = 0; t < 50; ++t) {
        auto W = ReferenceState::from_sound_speed(1, u(rng), u(rng), 0.9);
        CMat Rt = characteristic_basis(W, 0.9, {kk(rng), th(rng)});
        CHECK(Rt.fullPivLu().rank() == 4);
    }
}

TEST_CASE("small-k transport") {
    auto fp = d2q13_fig5();
    auto p = derive_parameters(fp);
    auto sc = build_scheme(fp.scheme);
    auto W0 = ReferenceState::from_sound_speed(1, 0, 0, p.c0);
    auto d = small_k_damping(sc, p, W0, deg(26.565));
    auto t = predicted_transport(p, sc);
    CHECK(d[0] == doctest::Approx(0.5 * p.c0 * p.c0 * fp.sigma5).epsilon(1e-6));
    CHECK(d[1] == doctest::Approx(t.kappa).epsilon(1e-5));
}

TEST_CASE("D2Q9 shear/thermal merge") {
    auto fp = d2q9_constrained();
    auto p = derive_parameters(fp);
    auto sc = build_scheme(fp.scheme);
    auto W0 = ReferenceState::from_sound_speed(1, 0, 0, p.c0);
    auto tr = track_modes(sc, p, W0, deg(26.565), grid(kPi, 400));
    CHECK_FALSE(tr.merge.has_value());
    CHECK(tr.max_modulus <= 1.0 + 1e-12);

    FreeParameters fr = fp;
    fr.isotropy = IsotropyLevel::none;
    fr.alpha2 = -1;
    fr.beta2 = 0.1;
    fr.rates[6] = fr.rates[7] = 1.8305;
    fr.rates[8] = 1.1765;
    auto pf = derive_parameters(fr);
    auto trf = track_modes(sc, pf, W0, deg(26.565), grid(0.3, 300));
    REQUIRE(trf.merge.has_value());
    CHECK(trf.merge->k == doctest::Approx(0.115).epsilon(0.05));
    CHECK(std::abs(trf.merge->shear.imag()) > 1e-10);
}

TEST_CASE("D2Q13 crossing stays real") {
    auto fp = d2q13_fig5();
    auto p = derive_parameters(fp);
    auto sc = build_scheme(fp.scheme);
    auto W0 = ReferenceState::from_sound_speed(1, 0, 0, p.c0);
    auto tr = track_modes(sc, p, W0, 0.0, grid(1.5, 300));
    CHECK_FALSE(tr.merge.has_value());
    double cross = -1;
    for (size_t i = 1; i < tr.points.size(); ++i) {
        const auto& a = tr.points[i - 1].lambda;
        const auto& b = tr.points[i].lambda;
        if ((std::abs(a[0]) - std::abs(a[1])) * (std::abs(b[0]) - std::abs(b[1])) < 0 && cross < 0) cross = tr.points[i].k;
        CHECK(std::abs(b[0].imag()) <= 1e-10);
        CHECK(std::abs(b[1].imag()) <= 1e-10);
    }
    CHECK(cross == doctest::Approx(0.78).epsilon(0.2));
}

TEST_CASE("labels at k = 0 by projection") {
    auto fp = d2q13_fig5();
    auto p = derive_parameters(fp);
    auto sc = build_scheme(fp.scheme);
    auto W0 = ReferenceState::from_sound_speed(1, 0, 0, p.c0);
    auto sp = spectrum(amplification_matrix(sc, p, W0, {1e-3, 0.0}));
    auto idx = label_by_projection(sc, p, W0, 0.0, sp);
    std::set<int> distinct(idx.begin(), idx.end());
    CHECK(distinct.size() == 4);
    // acoustic pair: arg of the "+" column is positive at rest
    CHECK(std::arg(sp.values(idx[2])) > 0);
    CHECK(std::arg(sp.values(idx[3])) < 0);
}

TEST_CASE("fit window errors") {
    auto fp = d2q13_fig5();
    auto p = derive_parameters(fp);
    auto sc = build_scheme(fp.scheme);
    auto W0 = ReferenceState::from_sound_speed(1, 0, 0, p.c0);
    auto tr = track_modes(sc, p, W0, 0.0, grid(0.2, 5));
    CHECK_THROWS_AS(fit_dispersion(sc, p, W0, tr, 4), FitError);
}
