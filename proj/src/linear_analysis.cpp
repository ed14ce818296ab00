#include "eclbm/linear_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "eclbm/eigensolver.hpp"

namespace eclbm {

namespace {
constexpr cplx I1(0.0, 1.0);

double c0_phys(const SchemeDescriptor& sc, const ParameterSet& p) { return p.c0 * sc.lambda; }

cplx remove_advection(cplx lam, const ReferenceState& W0, double k, double theta, double dt) {
    const double ku = k * (std::cos(theta) * W0.u0 + std::sin(theta) * W0.v0);
    return lam * std::exp(I1 * ku * dt);
}
}  // namespace

double WaveVector::kx() const { return k * std::cos(theta); }
double WaveVector::ky() const { return k * std::sin(theta); }

std::string to_string(ModeLabel l) {
    switch (l) {
        case ModeLabel::shear: return "shear";
        case ModeLabel::thermal: return "thermal";
        case ModeLabel::acoustic_plus: return "acoustic+";
        case ModeLabel::acoustic_minus: return "acoustic-";
        case ModeLabel::kinetic: return "kinetic";
    }
    return "?";
}

ModeLabel parse_mode_label(const std::string& s) {
    if (s == "shear") return ModeLabel::shear;
    if (s == "thermal") return ModeLabel::thermal;
    if (s == "acoustic" || s == "acoustic+" || s == "acoustic_plus") return ModeLabel::acoustic_plus;
    if (s == "acoustic-" || s == "acoustic_minus") return ModeLabel::acoustic_minus;
    if (s == "kinetic") return ModeLabel::kinetic;
    throw std::invalid_argument("unknown mode '" + s + "'");
}

CMat amplification_matrix(const SchemeDescriptor& sc, const ParameterSet& p,
                          const ReferenceState& W0, const WaveVector& k) {
    const int q = sc.q;
    const Mat J = equilibrium_jacobian(sc, p, W0);
    Mat C = Mat::Identity(q, q);
    for (int r = 0; r < q; ++r) {
        double s = p.s.at(r);
        if (std::find(sc.conserved_indices.begin(), sc.conserved_indices.end(), r) !=
            sc.conserved_indices.end())
            s = 0.0;
        if (s == 0.0) continue;
        C(r, r) -= s;
        for (int c = 0; c < 4; ++c) C(r, sc.conserved_indices[c]) += s * J(r, c);
    }
    const Mat B = sc.Minv * C * sc.M;
    CMat A(q, q);
    const double kx = k.kx() * sc.dx, ky = k.ky() * sc.dx;
    for (int j = 0; j < q; ++j) {
        const cplx ph = std::exp(-I1 * (kx * sc.xi[j][0] + ky * sc.xi[j][1]));
        for (int c = 0; c < q; ++c) A(j, c) = ph * B(j, c);
    }
    return A;
}

ModeSpectrum spectrum(const CMat& A, bool with_vectors) {
    EigenOptions opt;
    opt.want_vectors = with_vectors;
    EigenResult r;
    try {
        r = eigen_decompose(A, opt);
    } catch (const EigenNoConvergence& e) {
        std::ostringstream os;
        os << e.what() << "; matrix size " << A.rows() << ", trace " << A.trace();
        throw EigenNoConvergence(os.str());
    }
    ModeSpectrum s;
    s.values = r.values;
    s.vectors = r.vectors;
    s.labels.assign(static_cast<size_t>(A.rows()), ModeLabel::kinetic);
    return s;
}

Mat characteristic_directions(const ReferenceState& W0, double c0, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double u = W0.u0, v = W0.v0, k0 = W0.k0();
    Mat D(4, 4);
    D.col(0) << 0.0, -s, c, -(u * s - v * c);
    D.col(1) << 1.0, u, v, k0;
    D.col(2) << 1.0, u - c0 * c, v - c0 * s, c0 * c0 + k0 - c0 * (u * c + v * s);
    D.col(3) << 1.0, u + c0 * c, v + c0 * s, c0 * c0 + k0 + c0 * (u * c + v * s);
    for (int i = 0; i < 4; ++i) D.col(i).normalize();
    return D;
}

CMat characteristic_basis(const ReferenceState& W0, double c0, const WaveVector& k) {
    if (k.k == 0.0) return characteristic_directions(W0, c0, k.theta).cast<cplx>();
    const cplx dx = -I1 * k.kx(), dy = -I1 * k.ky(), sq = I1 * k.k;
    const double u = W0.u0, v = W0.v0, k0 = W0.k0();
    const cplx ugrad = u * dx + v * dy;
    CMat R(4, 4);
    R.col(0) << 0.0, dy, -dx, u * dy - v * dx;
    R.col(1) << 1.0, u, v, k0;
    R.col(2) << sq, c0 * dx + u * sq, c0 * dy + v * sq, (c0 * c0 + k0) * sq + c0 * ugrad;
    R.col(3) << sq, -c0 * dx + u * sq, -c0 * dy + v * sq, (c0 * c0 + k0) * sq - c0 * ugrad;
    return R;
}

CVec conserved_part(const SchemeDescriptor& sc, const CVec& f) {
    CVec w(4);
    for (int r = 0; r < 4; ++r) w(r) = sc.M.row(sc.conserved_indices[r]).cast<cplx>().dot(f);
    const EnergyMap em = energy_map(sc.name);
    // E = a eps - b l^2 rho  =>  eps = (E + b l^2 rho) / a
    w(3) = (w(3) + em.b * sc.lambda * sc.lambda * w(0)) / em.a;
    return w;
}

namespace {

// |coefficient| of each characteristic direction in the conserved part of v
std::array<double, 4> projection_weights(const SchemeDescriptor& sc, const CMat& Dinv, const CVec& v) {
    const CVec c = Dinv * conserved_part(sc, v);
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) out[static_cast<size_t>(i)] = std::abs(c(i)) / std::max(v.norm(), 1e-300);
    return out;
}

}  // namespace

std::array<int, 4> label_by_projection(const SchemeDescriptor& sc, const ParameterSet& p,
                                       const ReferenceState& W0, double theta,
                                       const ModeSpectrum& spec) {
    if (spec.vectors.size() == 0) throw std::invalid_argument("label_by_projection needs eigenvectors");
    const CMat Dinv = characteristic_directions(W0, c0_phys(sc, p), theta).inverse().cast<cplx>();
    const int q = static_cast<int>(spec.values.size());
    std::vector<std::array<double, 4>> w(static_cast<size_t>(q));
    for (int i = 0; i < q; ++i) w[static_cast<size_t>(i)] = projection_weights(sc, Dinv, spec.vectors.col(i));
    std::array<int, 4> idx{-1, -1, -1, -1};
    std::vector<bool> used(static_cast<size_t>(q), false);
    // greedy on the global best remaining (eigenvalue, label) pair
    for (int round = 0; round < 4; ++round) {
        double best = -1.0;
        int bi = -1, bm = -1;
        for (int i = 0; i < q; ++i) {
            if (used[static_cast<size_t>(i)]) continue;
            for (int m = 0; m < 4; ++m) {
                if (idx[static_cast<size_t>(m)] >= 0) continue;
                if (w[static_cast<size_t>(i)][static_cast<size_t>(m)] > best) {
                    best = w[static_cast<size_t>(i)][static_cast<size_t>(m)];
                    bi = i;
                    bm = m;
                }
            }
        }
        idx[static_cast<size_t>(bm)] = bi;
        used[static_cast<size_t>(bi)] = true;
    }
    return idx;
}

TrackResult track_modes(const SchemeDescriptor& sc, const ParameterSet& p, const ReferenceState& W0,
                        double theta, const std::vector<double>& k_grid, const TrackOptions& opt) {
    if (k_grid.empty()) throw std::invalid_argument("track_modes: empty k grid");
    if (!std::is_sorted(k_grid.begin(), k_grid.end()))
        throw std::invalid_argument("track_modes: k grid must be ascending");
    TrackResult tr;
    tr.theta = theta;
    const CMat Dinv = characteristic_directions(W0, c0_phys(sc, p), theta).inverse().cast<cplx>();

    std::array<CVec, 4> prev_vec;
    for (size_t n = 0; n < k_grid.size(); ++n) {
        const double k = k_grid[n];
        const ModeSpectrum sp = spectrum(amplification_matrix(sc, p, W0, {k, theta}), true);
        const int q = static_cast<int>(sp.values.size());
        TrackedPoint pt;
        pt.k = k;
        pt.values = sp.values;
        for (int i = 0; i < q; ++i) pt.max_modulus = std::max(pt.max_modulus, std::abs(sp.values(i)));

        if (n == 0) {
            pt.index = label_by_projection(sc, p, W0, theta, sp);
        } else {
            // Lagrange extrapolation through up to three previous points
            const size_t np = std::min<size_t>(3, n);
            std::array<cplx, 4> pred{};
            std::array<double, 4> step{};
            for (size_t a = 0; a < np; ++a) {
                const TrackedPoint& pa = tr.points[n - 1 - a];
                double w = 1.0;
                for (size_t b = 0; b < np; ++b)
                    if (b != a) {
                        const double kb = tr.points[n - 1 - b].k;
                        w *= (k - kb) / (pa.k - kb);
                    }
                for (int m = 0; m < 4; ++m) pred[m] += w * pa.lambda[m];
            }
            // expected motion: last step, or distance from 1 scaled as k^2 (all
            // physical eigenvalues start at 1)
            const TrackedPoint& last = tr.points[n - 1];
            for (int m = 0; m < 4; ++m) {
                step[m] = n >= 2 ? std::abs(last.lambda[m] - tr.points[n - 2].lambda[m]) : 0.0;
                if (last.k > 0.0) {
                    const double r = k / last.k;
                    step[m] = std::max(step[m], std::abs(last.lambda[m] - 1.0) * (r * r - 1.0));
                }
            }
            // most confident labels choose first
            std::array<double, 4> dmin{};
            for (int m = 0; m < 4; ++m) {
                dmin[m] = std::numeric_limits<double>::infinity();
                for (int i = 0; i < q; ++i) dmin[m] = std::min(dmin[m], std::abs(sp.values(i) - pred[m]));
            }
            std::array<int, 4> order{0, 1, 2, 3};
            std::sort(order.begin(), order.end(), [&](int x, int y) { return dmin[x] < dmin[y]; });
            std::vector<bool> used(static_cast<size_t>(q), false);
            for (int m : order) {
                double d1 = std::numeric_limits<double>::infinity();
                for (int i = 0; i < q; ++i)
                    if (!used[i]) d1 = std::min(d1, std::abs(sp.values(i) - pred[m]));
                const double window = std::max(opt.tie_window * d1, 2.0 * step[m]) + 1e-12;
                int best = -1;
                double best_ov = -1.0, second_ov = -1.0;
                int ncand = 0;
                for (int i = 0; i < q; ++i) {
                    if (used[i] || std::abs(sp.values(i) - pred[m]) > window) continue;
                    ++ncand;
                    const double ov = std::abs(prev_vec[m].dot(sp.vectors.col(i)));
                    if (ov > best_ov) {
                        second_ov = best_ov;
                        best_ov = ov;
                        best = i;
                    } else if (ov > second_ov) {
                        second_ov = ov;
                    }
                }
                if (ncand > 1 && best_ov - second_ov < 1e-3) {
                    // still ambiguous: fall back on the characteristic directions
                    pt.ambiguous = true;
                    double bw = -1.0;
                    for (int i = 0; i < q; ++i) {
                        if (used[i] || std::abs(sp.values(i) - pred[m]) > window) continue;
                        const double w = projection_weights(sc, Dinv, sp.vectors.col(i))[m];
                        if (w > bw) {
                            bw = w;
                            best = i;
                        }
                    }
                }
                pt.index[m] = best;
                used[best] = true;
            }
            if (pt.ambiguous) tr.ambiguous_k.push_back(k);
        }
        for (int m = 0; m < 4; ++m) {
            pt.lambda[m] = sp.values(pt.index[m]);
            prev_vec[m] = sp.vectors.col(pt.index[m]);
        }
        if (pt.max_modulus > tr.max_modulus) {
            tr.max_modulus = pt.max_modulus;
            tr.max_modulus_k = k;
        }
        if (!tr.merge && k > 0.0) {
            const cplx ls = remove_advection(pt.lambda[0], W0, k, theta, sc.dt);
            const cplx lt = remove_advection(pt.lambda[1], W0, k, theta, sc.dt);
            const double thr = opt.merge_threshold;
            if (std::abs(ls.imag()) > thr && std::abs(lt.imag()) > thr &&
                std::abs(ls - std::conj(lt)) <= 1e-6 * std::max(1.0, std::abs(ls)))
                tr.merge = MergeEvent{theta, k, pt.lambda[0], pt.lambda[1]};
        }
        tr.points.push_back(std::move(pt));
    }
    return tr;
}

std::vector<EffectivePoint> effective_coefficients(const SchemeDescriptor& sc, const ParameterSet& p,
                                                   const ReferenceState& W0, const TrackResult& tr) {
    std::vector<EffectivePoint> out;
    const double c0 = c0_phys(sc, p);
    for (const auto& pt : tr.points) {
        EffectivePoint e;
        e.k = pt.k;
        if (pt.k == 0.0) {
            out.push_back(e);
            continue;
        }
        for (int m = 0; m < 4; ++m) {
            const cplx l = remove_advection(pt.lambda[m], W0, pt.k, tr.theta, sc.dt);
            e.damping[m] = -std::log(std::abs(l)) / (pt.k * pt.k * sc.dt);
            if (m >= 2 && c0 > 0.0) e.vsound_ratio[m] = std::abs(std::arg(l)) / (pt.k * sc.dt) / c0;
        }
        out.push_back(e);
    }
    // k = 0 rows take the limit from the smallest nonzero k
    for (size_t i = 0; i < out.size(); ++i) {
        if (out[i].k != 0.0) continue;
        for (size_t j = 0; j < out.size(); ++j)
            if (out[j].k > 0.0) {
                out[i].damping = out[j].damping;
                out[i].vsound_ratio = out[j].vsound_ratio;
                break;
            }
    }
    return out;
}

std::array<double, 4> small_k_damping(const SchemeDescriptor& sc, const ParameterSet& p,
                                      const ReferenceState& W0, double theta, double k_small) {
    std::array<std::array<double, 4>, 3> g{};
    for (int n = 0; n < 3; ++n) {
        const double k = k_small * (n + 1);
        const ModeSpectrum sp = spectrum(amplification_matrix(sc, p, W0, {k, theta}), true);
        const auto idx = label_by_projection(sc, p, W0, theta, sp);
        for (int m = 0; m < 4; ++m)
            g[n][m] = -std::log(std::abs(sp.values(idx[m]))) / (k * k * sc.dt);
    }
    // g(k) = a + b k^2 + c k^4 through k, 2k, 3k
    std::array<double, 4> out{};
    Eigen::Matrix3d V;
    for (int n = 0; n < 3; ++n) {
        const double k = k_small * (n + 1);
        V(n, 0) = 1.0;
        V(n, 1) = k * k;
        V(n, 2) = k * k * k * k;
    }
    const Eigen::PartialPivLU<Eigen::Matrix3d> lu(V);
    for (int m = 0; m < 4; ++m) {
        const Eigen::Vector3d y(g[0][m], g[1][m], g[2][m]);
        out[m] = lu.solve(y)(0);
    }
    return out;
}

DispersionFit fit_dispersion(const SchemeDescriptor& sc, const ParameterSet& p,
                             const ReferenceState& W0, const TrackResult& tr, int order,
                             double k_lo, double k_hi) {
    (void)p;
    if (order < 1) throw FitError("fit order must be >= 1");
    std::vector<const TrackedPoint*> pts;
    for (const auto& pt : tr.points)
        if (pt.k >= k_lo - 1e-15 && pt.k <= k_hi + 1e-15 && pt.k > 0.0) pts.push_back(&pt);
    const int N = static_cast<int>(pts.size());
    if (N < 8 || N <= order)
        throw FitError("fit window [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) + "] has " +
                       std::to_string(N) + " points; need at least max(8, order + 1)");
    Mat V(N, order);
    for (int i = 0; i < N; ++i)
        for (int n = 0; n < order; ++n) V(i, n) = std::pow(pts[i]->k / k_hi, n + 1);
    const Eigen::JacobiSVD<Mat> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    DispersionFit fit;
    fit.condition = sv(0) / sv(sv.size() - 1);
    if (!(fit.condition <= 1e8))
        throw FitError("ill-conditioned dispersion fit (condition " + std::to_string(fit.condition) +
                       "); widen the k window or lower the order");
    const Mat cov = (V.transpose() * V).inverse();
    for (int m = 0; m < 4; ++m) {
        Vec yr(N), yi(N);
        for (int i = 0; i < N; ++i) {
            const cplx l = remove_advection(pts[i]->lambda[m], W0, pts[i]->k, tr.theta, sc.dt);
            const cplx y = std::log(l) / sc.dt;
            yr(i) = y.real();
            yi(i) = y.imag();
        }
        const Vec cr = svd.solve(yr), ci = svd.solve(yi);
        const double ss = (V * cr - yr).squaredNorm() + (V * ci - yi).squaredNorm();
        const int dof = std::max(1, N - order);
        const double s2 = ss / (2.0 * dof);
        fit.residual[m] = std::sqrt(ss / N);
        fit.coeff[m].resize(order);
        fit.stderr_[m].resize(order);
        for (int n = 0; n < order; ++n) {
            const double sc_n = std::pow(k_hi, n + 1);
            fit.coeff[m][n] = cplx(cr(n), ci(n)) / sc_n;
            fit.stderr_[m][n] = std::sqrt(2.0 * s2 * cov(n, n)) / sc_n;
        }
    }
    return fit;
}

std::array<std::vector<double>, 4> anisotropy_defect(const std::vector<DispersionFit>& fits) {
    std::array<std::vector<double>, 4> out;
    if (fits.empty()) return out;
    for (int m = 0; m < 4; ++m) {
        const size_t order = fits[0].coeff[m].size();
        out[m].assign(order, 0.0);
        for (size_t a = 0; a < fits.size(); ++a)
            for (size_t b = a + 1; b < fits.size(); ++b)
                for (size_t n = 0; n < order && n < fits[b].coeff[m].size(); ++n)
                    out[m][n] = std::max(out[m][n], std::abs(fits[a].coeff[m][n] - fits[b].coeff[m][n]));
    }
    return out;
}

StabilityScan stability_scan(const SchemeDescriptor& sc, const ParameterSet& p,
                             const ReferenceState& W0, const std::vector<double>& thetas,
                             const std::vector<double>& ks) {
    StabilityScan r;
    for (double th : thetas)
        for (double k : ks) {
            const ModeSpectrum sp = spectrum(amplification_matrix(sc, p, W0, {k, th}), false);
            for (int i = 0; i < sp.values.size(); ++i)
                if (std::abs(sp.values(i)) > r.max_modulus) {
                    r.max_modulus = std::abs(sp.values(i));
                    r.k = k;
                    r.theta = th;
                }
        }
    return r;
}

}  // namespace eclbm
