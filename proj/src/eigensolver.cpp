#include "eclbm/eigensolver.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>

namespace eclbm {

using cd = std::complex<double>;

namespace {

void hessenberg(CMat& H, CMat* Q) {
    const Eigen::Index n = H.rows();
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        const Eigen::Index m = n - k - 1;
        CVec x = H.block(k + 1, k, m, 1);
        const double xn = x.norm();
        if (xn == 0.0) continue;
        const cd x0 = x(0);
        const cd phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cd(1.0, 0.0);
        CVec v = x;
        v(0) += phase * xn;
        const double vn = v.norm();
        if (vn == 0.0) continue;
        v /= vn;
        // H <- (I - 2vv*) H (I - 2vv*)
        auto rows = H.block(k + 1, 0, m, n);
        CMat t = v.adjoint() * rows;
        rows.noalias() -= 2.0 * v * t;
        auto cols = H.block(0, k + 1, n, m);
        CMat u = cols * v;
        cols.noalias() -= 2.0 * u * v.adjoint();
        for (Eigen::Index i = k + 2; i < n; ++i) H(i, k) = 0.0;
        if (Q) {
            auto qc = Q->block(0, k + 1, n, m);
            CMat w = qc * v;
            qc.noalias() -= 2.0 * w * v.adjoint();
        }
    }
}

struct Givens {
    double c;
    cd s;
};

Givens make_givens(cd a, cd b) {
    const double ab = std::abs(b);
    if (ab == 0.0) return {1.0, cd(0.0)};
    const double aa = std::abs(a);
    if (aa == 0.0) return {0.0, cd(1.0)};
    const double r = std::hypot(aa, ab);
    return {aa / r, (a / aa) * std::conj(b) / r};
}

}  // namespace

EigenResult eigen_decompose(const CMat& A, const EigenOptions& opt) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("eigen_decompose: matrix not square");
    EigenResult res;
    if (n == 0) return res;
    if (!A.allFinite()) throw std::invalid_argument("eigen_decompose: non-finite entries");

    CMat H = A;
    CMat Z;
    CMat* Zp = nullptr;
    if (opt.want_vectors) {
        Z = CMat::Identity(n, n);
        Zp = &Z;
    }
    hessenberg(H, Zp);

    const double norm = A.norm();
    const double tol = std::max(opt.deflation * norm, std::numeric_limits<double>::min());
    const int cap = opt.iteration_factor * static_cast<int>(n);
    int total = 0;
    int since_deflation = 0;
    Eigen::Index hi = n - 1;
    const Eigen::Index col_end = opt.want_vectors ? n : 0;

    while (hi > 0) {
        Eigen::Index l = hi;
        while (l > 0 && std::abs(H(l, l - 1)) > tol) --l;
        if (l > 0) H(l, l - 1) = 0.0;
        if (l == hi) {
            --hi;
            since_deflation = 0;
            continue;
        }
        if (++total > cap)
            throw EigenNoConvergence("QR iteration cap " + std::to_string(cap) +
                                     " reached (n = " + std::to_string(n) +
                                     ", norm = " + std::to_string(norm) + ")");
        ++since_deflation;

        cd mu;
        if (since_deflation % 11 == 0) {
            mu = H(hi, hi) + 0.75 * std::abs(H(hi, hi - 1));
        } else {
            // Wilkinson shift from the trailing 2x2 block
            const cd a = H(hi - 1, hi - 1), b = H(hi - 1, hi), c = H(hi, hi - 1), d = H(hi, hi);
            const cd tr_half = 0.5 * (a + d);
            const cd disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
            const cd e1 = tr_half + disc, e2 = tr_half - disc;
            mu = std::abs(e1 - d) < std::abs(e2 - d) ? e1 : e2;
        }

        const Eigen::Index row_lo = opt.want_vectors ? 0 : l;
        const Eigen::Index cend = opt.want_vectors ? col_end : hi + 1;
        for (Eigen::Index k = l; k <= hi; ++k) H(k, k) -= mu;
        std::vector<Givens> rot(static_cast<size_t>(hi - l));
        for (Eigen::Index k = l; k < hi; ++k) {
            const Givens g = make_givens(H(k, k), H(k + 1, k));
            rot[static_cast<size_t>(k - l)] = g;
            for (Eigen::Index j = k; j < cend; ++j) {
                const cd x = H(k, j), y = H(k + 1, j);
                H(k, j) = g.c * x + g.s * y;
                H(k + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
            H(k + 1, k) = 0.0;
        }
        for (Eigen::Index k = l; k < hi; ++k) {
            const Givens g = rot[static_cast<size_t>(k - l)];
            const Eigen::Index rend = std::min(k + 2, hi);
            for (Eigen::Index i = row_lo; i <= rend; ++i) {
                const cd x = H(i, k), y = H(i, k + 1);
                H(i, k) = x * g.c + y * std::conj(g.s);
                H(i, k + 1) = -x * g.s + y * g.c;
            }
            if (Zp) {
                for (Eigen::Index i = 0; i < n; ++i) {
                    const cd x = Z(i, k), y = Z(i, k + 1);
                    Z(i, k) = x * g.c + y * std::conj(g.s);
                    Z(i, k + 1) = -x * g.s + y * g.c;
                }
            }
        }
        for (Eigen::Index k = l; k <= hi; ++k) H(k, k) += mu;
    }
    res.iterations = total;
    res.values = H.diagonal();

    if (opt.want_vectors) {
        const double small = std::max(norm, 1.0) * std::numeric_limits<double>::epsilon();
        CMat X = CMat::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const cd lam = H(k, k);
            X(k, k) = 1.0;
            for (Eigen::Index j = k - 1; j >= 0; --j) {
                cd acc = 0.0;
                for (Eigen::Index m = j + 1; m <= k; ++m) acc += H(j, m) * X(m, k);
                cd den = H(j, j) - lam;
                if (std::abs(den) < small) den = small;
                X(j, k) = -acc / den;
            }
        }
        res.vectors = Z * X;
        for (Eigen::Index k = 0; k < n; ++k) res.vectors.col(k).normalize();
    }
    return res;
}

}  // namespace eclbm
