#include "eclbm/simulator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace eclbm {

namespace {

using cd = std::complex<double>;

int wrap(int a, int n) {
    a %= n;
    return a < 0 ? a + n : a;
}

std::vector<int> opposite_indices(const SchemeDescriptor& sc) {
    std::vector<int> opp(static_cast<size_t>(sc.q), -1);
    for (int j = 0; j < sc.q; ++j)
        for (int i = 0; i < sc.q; ++i)
            if (sc.xi[i][0] == -sc.xi[j][0] && sc.xi[i][1] == -sc.xi[j][1]) opp[j] = i;
    return opp;
}

Vec background_populations(const SchemeDescriptor& sc, const ParameterSet& p, const ReferenceState& W0) {
    return equilibrium_populations(sc, p, W0.conserved());
}

// unit-amplitude complex population perturbation for a plane wave
CVec plane_wave_shape(const SchemeDescriptor& sc, const ParameterSet& p, const WaveInit& w,
                      const WaveVector& k) {
    const ReferenceState& W0 = w.background;
    const Mat D = characteristic_directions(W0, p.c0 * sc.lambda, k.theta);
    const int col = static_cast<int>(w.mode);
    if (col > 3) throw std::invalid_argument("plane wave mode must be a physical mode");
    const Vec d = D.col(col);  // (rho, jx, jy, eps)
    const EnergyMap em = energy_map(sc.name);
    Vec dW(4);
    dW << d(0), d(1), d(2), em.a * d(3) - em.b * sc.lambda * sc.lambda * d(0);
    const Mat J = equilibrium_jacobian(sc, p, W0);
    return (sc.Minv * (J * dW)).cast<cd>();
}

void fill_wave(FieldState& st, const Grid& g, const Vec& f0, const CVec& shape, double amp,
               const WaveVector& k) {
    const int q = st.q;
    for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x) {
            const double ph = (k.kx() * x + k.ky() * y) * g.dx;
            const cd e(std::cos(ph), std::sin(ph));
            double* f = st.site(x, y);
            for (int j = 0; j < q; ++j) f[j] = f0(j) + amp * (e * shape(j)).real();
        }
}

}  // namespace

void Grid::check() const {
    if (nx < 4 || ny < 4) throw std::invalid_argument("grid needs nx, ny >= 4");
    if (!(dx > 0.0)) throw std::invalid_argument("grid dx must be positive");
    if (topology == Topology::disc_in_box) {
        if (!(radius > 0.0)) throw std::invalid_argument("disc radius must be positive");
        if (cx - radius < 1.0 || cy - radius < 1.0 || cx + radius > nx - 2.0 || cy + radius > ny - 2.0)
            throw std::invalid_argument("disc must lie inside the box with a one-site margin");
    }
}

bool Grid::fluid(int x, int y) const {
    if (x < 0 || y < 0 || x >= nx || y >= ny) return false;
    if (topology == Topology::periodic) return true;
    const double ddx = x - cx, ddy = y - cy;
    return ddx * ddx + ddy * ddy <= radius * radius;
}

WaveVector wave_vector(const Grid& g, const WaveInit& w) {
    const double kx = 2.0 * std::numbers::pi * w.nx_periods / (g.nx * g.dx);
    const double ky = 2.0 * std::numbers::pi * w.ny_periods / (g.ny * g.dx);
    return {std::hypot(kx, ky), std::atan2(ky, kx)};
}

FieldState uniform_state(const Grid& g, const SchemeDescriptor& sc, const ParameterSet& p,
                         const ReferenceState& W0) {
    g.check();
    FieldState st;
    st.nx = g.nx;
    st.ny = g.ny;
    st.q = sc.q;
    st.f.resize(static_cast<size_t>(g.sites()) * sc.q);
    const Vec f0 = background_populations(sc, p, W0);
    for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x) {
            double* f = st.site(x, y);
            for (int j = 0; j < sc.q; ++j) f[j] = f0(j);
        }
    return st;
}

FieldState init_plane_wave(const Grid& g, const SchemeDescriptor& sc, const ParameterSet& p,
                           const WaveInit& w) {
    FieldState st = uniform_state(g, sc, p, w.background);
    const WaveVector k = wave_vector(g, w);
    if (k.k == 0.0) {
        if (w.amplitude != 0.0) throw std::invalid_argument("zero wave vector with a nonzero wave amplitude");
        return st;
    }
    fill_wave(st, g, background_populations(sc, p, w.background), plane_wave_shape(sc, p, w, k),
              w.amplitude, k);
    return st;
}

FieldState init_eigenmode(const Grid& g, const SchemeDescriptor& sc, const ParameterSet& p,
                          const WaveInit& w) {
    FieldState st = uniform_state(g, sc, p, w.background);
    const WaveVector k = wave_vector(g, w);
    if (k.k == 0.0) {
        if (w.amplitude != 0.0) throw std::invalid_argument("zero wave vector with a nonzero wave amplitude");
        return st;
    }
    const int col = static_cast<int>(w.mode);
    if (col > 3) throw std::invalid_argument("eigenmode init needs a physical mode");
    std::vector<double> ks;
    const int nk = 60;
    for (int i = 1; i <= nk; ++i) ks.push_back(k.k * i / nk);
    const TrackResult tr = track_modes(sc, p, w.background, k.theta, ks);
    const ModeSpectrum sp = spectrum(amplification_matrix(sc, p, w.background, k), true);
    const cd target = tr.points.back().lambda[col];
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < sp.values.size(); ++i)
        if (std::abs(sp.values(i) - target) < std::abs(sp.values(best) - target)) best = i;
    CVec v = sp.vectors.col(best);
    const Mat D = characteristic_directions(w.background, p.c0 * sc.lambda, k.theta);
    const CVec c = D.inverse().cast<cd>() * conserved_part(sc, v);
    v /= c(col);
    fill_wave(st, g, background_populations(sc, p, w.background), v, w.amplitude, k);
    return st;
}

void step(FieldState& st, const SchemeDescriptor& sc, const ParameterSet& p, const Grid& g) {
    const int q = sc.q;
    const size_t n = st.f.size();
    std::vector<double> fstar(n);
    Vec m(q), dm(q);
    for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x) {
            const double* fs = st.site(x, y);
            double* out = fstar.data() + (static_cast<size_t>(y) * g.nx + x) * q;
            if (!g.fluid(x, y)) {
                for (int j = 0; j < q; ++j) out[j] = fs[j];
                continue;
            }
            const Eigen::Map<const Vec> f(fs, q);
            m.noalias() = sc.M * f;
            if (!m.allFinite() || !(m(0) > 0.0)) {
                std::ostringstream os;
                os << "density " << m(0) << " at site (" << x << ", " << y << ") after step " << st.step;
                throw Instability(os.str(), st.step, x, y);
            }
            const Vec meq = equilibrium_moments(sc, p, m(0), m(1), m(2), m(3));
            dm.setZero();
            for (int k = 4; k < q; ++k) dm(k) = p.s[k] * (meq(k) - m(k));
            Eigen::Map<Vec> o(out, q);
            o = f + sc.Minv * dm;
        }

    if (g.topology == Topology::periodic) {
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x) {
                const double* src = fstar.data() + (static_cast<size_t>(y) * g.nx + x) * q;
                for (int j = 0; j < q; ++j) {
                    const int tx = wrap(x + sc.xi[j][0], g.nx), ty = wrap(y + sc.xi[j][1], g.ny);
                    st.f[(static_cast<size_t>(ty) * g.nx + tx) * q + j] = src[j];
                }
            }
    } else {
        const std::vector<int> opp = opposite_indices(sc);
        // zero velocity and fixed e: the wall equilibrium is rho * phi
        const Vec phi = equilibrium_populations(sc, p, {1.0, 0.0, 0.0, g.wall_e});
        std::vector<int> cut;
        for (int y = 0; y < g.ny; ++y)
            for (int x = 0; x < g.nx; ++x) {
                if (!g.fluid(x, y)) continue;
                const double* src = fstar.data() + (static_cast<size_t>(y) * g.nx + x) * q;
                cut.clear();
                for (int j = 0; j < q; ++j) {
                    const int tx = x + sc.xi[j][0], ty = y + sc.xi[j][1];
                    if (g.fluid(tx, ty))
                        st.f[(static_cast<size_t>(ty) * g.nx + tx) * q + j] = src[j];
                    else
                        cut.push_back(j);
                }
                if (cut.empty()) continue;
                double rho_w;
                if (g.wall_density == WallDensity::mass_balance) {
                    // each link hands back 2 (rho_w phi_j - f*_j); pick rho_w so they sum to zero
                    double num = 0.0, den = 0.0;
                    for (int j : cut) {
                        num += src[j];
                        den += phi(j);
                    }
                    rho_w = num / den;
                } else {
                    // collision keeps rho, and st.f is already being overwritten here
                    rho_w = sc.M.row(0).dot(Eigen::Map<const Vec>(src, q));
                }
                for (int j : cut)
                    st.f[(static_cast<size_t>(y) * g.nx + x) * q + opp[j]] = -src[j] + 2.0 * rho_w * phi(j);
            }
    }
    ++st.step;
}

std::array<std::vector<double>, 4> conserved_fields(const FieldState& st, const SchemeDescriptor& sc) {
    std::array<std::vector<double>, 4> out;
    const size_t N = static_cast<size_t>(st.nx) * st.ny;
    for (auto& v : out) v.resize(N);
    for (size_t s = 0; s < N; ++s) {
        const Eigen::Map<const Vec> f(st.f.data() + s * st.q, st.q);
        const ConservedState W = conserved_of(sc, f);
        out[0][s] = W.rho;
        out[1][s] = W.jx;
        out[2][s] = W.jy;
        out[3][s] = W.eps;
    }
    return out;
}

std::array<double, 4> totals(const FieldState& st, const SchemeDescriptor& sc, const Grid& g) {
    // moments are linear, so sum populations first
    Vec fsum = Vec::Zero(st.q);
    for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x) {
            if (!g.fluid(x, y)) continue;
            const double* f = st.site(x, y);
            for (int j = 0; j < st.q; ++j) fsum(j) += f[j];
        }
    const ConservedState W = conserved_of(sc, fsum);
    return {W.rho, W.jx, W.jy, W.eps};
}

std::complex<double> measure_amplitude(const FieldState& st, const SchemeDescriptor& sc,
                                       const ParameterSet& p, const ReferenceState& W0,
                                       const Grid& g, const WaveVector& k, ModeLabel mode) {
    const int col = static_cast<int>(mode);
    if (col > 3) throw std::invalid_argument("measure_amplitude needs a physical mode");
    CVec acc = CVec::Zero(4);
    const ConservedState B = W0.conserved();
    int count = 0;
    for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x) {
            if (!g.fluid(x, y)) continue;
            const double ph = -(k.kx() * x + k.ky() * y) * g.dx;
            const cd e(std::cos(ph), std::sin(ph));
            const Eigen::Map<const Vec> f(st.site(x, y), st.q);
            const ConservedState W = conserved_of(sc, f);
            // background removed first: it projects to zero but costs digits
            acc(0) += e * (W.rho - B.rho);
            acc(1) += e * (W.jx - B.jx);
            acc(2) += e * (W.jy - B.jy);
            acc(3) += e * (W.eps - B.eps);
            ++count;
        }
    if (count == 0) return 0.0;
    acc *= 2.0 / count;
    const Mat Dinv = characteristic_directions(W0, p.c0 * sc.lambda, k.theta).inverse();
    return (Dinv.row(col).cast<cd>() * acc)(0);
}

std::vector<RelaxSample> run_relaxation(const Grid& g, const SchemeDescriptor& sc,
                                        const ParameterSet& p, const WaveInit& w, long n_steps,
                                        long sample_every, InitKind init) {
    if (g.topology != Topology::periodic) throw std::invalid_argument("relaxation runs need a periodic grid");
    if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
    FieldState st = init == InitKind::eigenmode ? init_eigenmode(g, sc, p, w) : init_plane_wave(g, sc, p, w);
    const WaveVector k = wave_vector(g, w);
    std::vector<RelaxSample> out;
    auto sample = [&]() {
        RelaxSample s;
        s.step = st.step;
        s.t = st.step * sc.dt;
        s.amp = measure_amplitude(st, sc, p, w.background, g, k, w.mode);
        s.totals = totals(st, sc, g);
        out.push_back(s);
    };
    sample();
    const double a0 = std::abs(out.front().amp);
    for (long n = 1; n <= n_steps; ++n) {
        step(st, sc, p, g);
        if (n % sample_every == 0 || n == n_steps) {
            sample();
            if (a0 > 0.0 && std::abs(out.back().amp) > 1e6 * a0)
                throw Instability("wave amplitude grew by more than 1e6 at step " + std::to_string(n), n, -1, -1);
        }
    }
    return out;
}

FieldState init_disc_pulse(const Grid& g, const SchemeDescriptor& sc, const ParameterSet& p,
                           const ReferenceState& W0, const DiscSource& src) {
    FieldState st = uniform_state(g, sc, p, W0);
    std::vector<double> shape(static_cast<size_t>(g.sites()), 0.0);
    double mean = 0.0;
    int nf = 0;
    for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x) {
            if (!g.fluid(x, y)) continue;
            const double r2 = ((x - src.x) * (x - src.x) + (y - src.y) * (y - src.y)) / (src.width * src.width);
            double s = std::exp(-0.5 * r2);
            if (src.shape == SourceShape::zero_mean) s *= (1.0 - 0.5 * r2);
            shape[static_cast<size_t>(y) * g.nx + x] = s;
            mean += s;
            ++nf;
        }
    mean /= nf;
    // acoustic direction: d(eps) = (c0^2 + k0) d(rho), so no entropy spot is left behind
    const double c0 = p.c0 * sc.lambda;
    const double deps = c0 * c0 + W0.k0();
    for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x) {
            if (!g.fluid(x, y)) continue;
            double s = shape[static_cast<size_t>(y) * g.nx + x];
            if (src.shape == SourceShape::zero_mean) s -= mean;
            const double drho = W0.rho0 * src.amplitude * s;
            const double rho = W0.rho0 + drho;
            const ConservedState W{rho, rho * W0.u0, rho * W0.v0, W0.eps0() + deps * drho};
            const Vec f = equilibrium_populations(sc, p, W);
            double* fs = st.site(x, y);
            for (int j = 0; j < sc.q; ++j) fs[j] = f(j);
        }
    return st;
}

DiscResult run_disc_acoustics(const Grid& g0, const SchemeDescriptor& sc, const ParameterSet& p,
                              const ReferenceState& W0, const DiscSource& src, long n_steps,
                              long snapshot_every) {
    if (g0.topology != Topology::disc_in_box) throw std::invalid_argument("disc run needs disc_in_box topology");
    Grid g = g0;
    g.wall_e = W0.E0 - W0.k0();
    FieldState st = init_disc_pulse(g, sc, p, W0, src);
    DiscResult res;
    const int sx = static_cast<int>(std::lround(src.x)), sy = static_cast<int>(std::lround(src.y));
    auto snapshot = [&]() {
        DiscSnapshot s;
        s.step = st.step;
        s.fields = conserved_fields(st, sc);
        res.snapshots.push_back(std::move(s));
    };
    auto record = [&]() {
        res.mass.push_back(totals(st, sc, g)[0]);
        const Eigen::Map<const Vec> f(st.site(sx, sy), st.q);
        res.centre_signal.push_back(std::abs(sc.M.row(0).dot(f) - W0.rho0));
    };
    record();
    if (snapshot_every > 0) snapshot();
    for (long n = 1; n <= n_steps; ++n) {
        step(st, sc, p, g);
        record();
        if (snapshot_every > 0 && (n % snapshot_every == 0 || n == n_steps)) snapshot();
    }
    return res;
}

double front_radius(const std::vector<double>& rho, const Grid& g, double rho0, double x0, double y0) {
    const int nb = static_cast<int>(std::ceil(std::hypot(g.nx, g.ny))) + 2;
    std::vector<double> sum(static_cast<size_t>(nb), 0.0);
    std::vector<int> cnt(static_cast<size_t>(nb), 0);
    for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x) {
            if (!g.fluid(x, y)) continue;
            const int b = static_cast<int>(std::lround(std::hypot(x - x0, y - y0)));
            sum[b] += std::abs(rho[static_cast<size_t>(y) * g.nx + x] - rho0);
            ++cnt[b];
        }
    int best = -1;
    double bv = -1.0;
    for (int b = 0; b < nb; ++b) {
        if (cnt[b] == 0) continue;
        const double v = sum[b] / cnt[b];
        if (v > bv) {
            bv = v;
            best = b;
        }
    }
    if (best <= 0 || best + 1 >= nb || cnt[best - 1] == 0 || cnt[best + 1] == 0) return best;
    // parabola through the peak bin and its neighbours
    const double a = sum[best - 1] / cnt[best - 1], b = bv, c = sum[best + 1] / cnt[best + 1];
    const double den = a - 2.0 * b + c;
    return den == 0.0 ? best : best + 0.5 * (a - c) / den;
}

}  // namespace eclbm
