#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "eclbm/eigensolver.hpp"

using namespace eclbm;
using cd = std::complex<double>;

namespace {
CMat random_matrix(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMat A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = cd(g(rng), g(rng));
    return A;
}

// greedy multiset distance
double set_distance(CVec a, CVec b) {
    double worst = 0.0;
    std::vector<bool> used(b.size(), false);
    for (int i = 0; i < a.size(); ++i) {
        int best = -1;
        double d = 1e300;
        for (int j = 0; j < b.size(); ++j)
            if (!used[j] && std::abs(a(i) - b(j)) < d) {
                d = std::abs(a(i) - b(j));
                best = j;
            }
        used[best] = true;
        worst = std::max(worst, d);
    }
    return worst;
}
}  // namespace

TEST_CASE("diagonal matrix") {
    CVec d(4);
    d << cd(1, 2), cd(-3, 0), cd(0.5, -0.5), cd(0, 0);
    auto r = eigen_decompose(d.asDiagonal().toDenseMatrix());
    CHECK(set_distance(r.values, d) <= 1e-14);
}

TEST_CASE("rotation") {
    const double phi = 0.7;
    CMat R(2, 2);
    R << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
    auto r = eigen_decompose(R);
    CVec want(2);
    want << std::polar(1.0, phi), std::polar(1.0, -phi);
    CHECK(set_distance(r.values, want) <= 1e-14);
}

TEST_CASE("random matrices") {
    std::mt19937_64 rng(5);
    for (int n : {1, 3, 9, 13, 17}) {
        for (int t = 0; t < 20; ++t) {
            CMat A = random_matrix(n, rng);
            auto r = eigen_decompose(A);
            CHECK(std::abs(r.values.sum() - A.trace()) <= 1e-10 * std::max(1.0, A.norm()));
            for (int i = 0; i < n; ++i) {
                const CVec v = r.vectors.col(i);
                CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
                CHECK((A * v - r.values(i) * v).norm() <= 1e-10 * A.norm());
            }
            Eigen::ComplexEigenSolver<CMat> ref(A, false);
            CHECK(set_distance(r.values, ref.eigenvalues()) <= 1e-9 * A.norm());

            // permutation invariance
            std::vector<int> perm(n);
            for (int i = 0; i < n; ++i) perm[i] = i;
            std::shuffle(perm.begin(), perm.end(), rng);
            Eigen::PermutationMatrix<Eigen::Dynamic> P(n);
            for (int i = 0; i < n; ++i) P.indices()(i) = perm[i];
            CMat B = P * A * P.transpose();
            CHECK(set_distance(eigen_decompose(B, {false}).values, r.values) <= 1e-9 * A.norm());
        }
    }
}

TEST_CASE("values only") {
    std::mt19937_64 rng(9);
    CMat A = random_matrix(6, rng);
    auto r = eigen_decompose(A, {false});
    CHECK(r.vectors.size() == 0);
    CHECK(r.values.size() == 6);
}

TEST_CASE("non-finite input") {
    CMat A = CMat::Identity(3, 3);
    A(1, 2) = cd(std::nan(""), 0);
    CHECK_THROWS(eigen_decompose(A));
}
