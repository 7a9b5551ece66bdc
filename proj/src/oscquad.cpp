#include "kpii/oscquad.hpp"

#include <cmath>

#include "kpii/asymptotics.hpp"
#include "kpii/quadrules.hpp"

namespace kpii::osc {
namespace {

constexpr double two_pi = 2.0 * M_PI;

// Frequencies (cycles per unit) of e^{Theta}.  In xi coordinates:
//   Theta/2pi = xi1 x1 + xi2 x2 + x3 (3 xi2^2/(4 xi1) - pi^2 xi1^3)
double freq_xi1(const Position& x, double xi1, double xi2) {
    return std::abs(x[0] + x[2] * (-0.75 * xi2 * xi2 / (xi1 * xi1) -
                                   3.0 * M_PI * M_PI * xi1 * xi1));
}
double freq_xi2(const Position& x, double xi1, double xi2) {
    return std::abs(x[1] + x[2] * 1.5 * xi2 / xi1);
}
// In zeta coordinates (polynomial phase):
//   Im Theta = -2 [zI x1 + 2 zR zI x2 + (3 zR^2 zI - zI^3) x3]
double freq_zr(const Position& x, double zr, double zi) {
    return 2.0 / M_PI * std::abs(zi) * std::abs(x[1] + 3.0 * zr * x[2]);
}
double freq_zi(const Position& x, double zr, double zi) {
    return 1.0 / M_PI *
           std::abs(x[0] + 2.0 * zr * x[1] + 3.0 * (zr * zr - zi * zi) * x[2]);
}

struct Box {
    double a1, b1, a2, b2;
};

struct PanelSink {
    virtual void panel(const std::vector<Node>& nodes) = 0;
    virtual ~PanelSink() = default;
};

// Panel generator.  Bulk xi-cells (|xi1| >= one spacing) are subdivided in xi
// space until the phase advance per panel is a few cycles.  The innermost
// column is integrated in the zeta plane, where the phase is polynomial and
// the integrand decays like 1/|zeta_R|; a smooth window of radius set by a
// stationary/IBP balance truncates the fast far field at controlled error.
class Tiler {
public:
    Tiler(const ScatteringGrid& S, const Position& x, const TileOptions& opt,
          PanelSink& sink)
        : S_(S), x_(x), opt_(opt), sink_(sink) {
        xi2_max_ = 0.5 * S.xi_lattice.length_2;
        t_ = x[2] < 0.0 ? -x[2] : 0.0;
    }

    void run() {
        const Lattice2D& lat = S_.xi_lattice;
        const double h1 = lat.spacing_1(), h2 = lat.spacing_2();
        for (std::size_t i = 0; i < lat.count_1; ++i) {
            const double c1 = lat.coord_1(i);
            if (std::abs(c1) < h1) continue; // innermost columns -> zeta strip
            for (std::size_t j = 0; j < lat.count_2; ++j) {
                const double c2 = lat.coord_2(j);
                // quadrant split keeps panels inside one bilinear patch
                process_xi({c1 - 0.5 * h1, c1, c2 - 0.5 * h2, c2}, 0);
                process_xi({c1 - 0.5 * h1, c1, c2, c2 + 0.5 * h2}, 0);
                process_xi({c1, c1 + 0.5 * h1, c2 - 0.5 * h2, c2}, 0);
                process_xi({c1, c1 + 0.5 * h1, c2, c2 + 0.5 * h2}, 0);
            }
        }
        // zeta-plane strips: xi1 in (0, h1] maps to zI in [-pi h1, 0), and
        // xi1 in [-h1, 0) to zI in (0, pi h1].
        strip(+1.0, M_PI * h1);
        strip(-1.0, M_PI * h1);
    }

private:
    // ---- bulk -----------------------------------------------------------
    void process_xi(const Box& b, int depth) {
        const double w1 = b.b1 - b.a1, w2 = b.b2 - b.a2;
        if (w1 <= 0.0 || w2 <= 0.0 || depth > opt_.max_depth) return;
        double f1 = 0.0, f2 = 0.0;
        const double s1[3] = {b.a1, 0.5 * (b.a1 + b.b1), b.b1};
        const double s2[3] = {b.a2, 0.5 * (b.a2 + b.b2), b.b2};
        for (double p : s1)
            for (double q : s2) {
                f1 = std::max(f1, freq_xi1(x_, p, q));
                f2 = std::max(f2, freq_xi2(x_, p, q));
            }
        const double cyc1 = f1 * w1, cyc2 = f2 * w2;
        if (cyc1 > opt_.max_panel_cycles && cyc1 >= cyc2) {
            const double m = 0.5 * (b.a1 + b.b1);
            process_xi({b.a1, m, b.a2, b.b2}, depth + 1);
            process_xi({m, b.b1, b.a2, b.b2}, depth + 1);
            return;
        }
        if (cyc2 > opt_.max_panel_cycles) {
            const double m = 0.5 * (b.a2 + b.b2);
            process_xi({b.a1, b.b1, b.a2, m}, depth + 1);
            process_xi({b.a1, b.b1, m, b.b2}, depth + 1);
            return;
        }
        emit_xi(b, cyc1, cyc2);
    }

    void emit_xi(const Box& b, double cyc1, double cyc2) {
        const int n1 = gl_count(cyc1), n2 = gl_count(cyc2);
        const GaussRule& g1 = gauss_legendre(n1);
        const GaussRule& g2 = gauss_legendre(n2);
        const double mid1 = 0.5 * (b.a1 + b.b1), half1 = 0.5 * (b.b1 - b.a1);
        const double mid2 = 0.5 * (b.a2 + b.b2), half2 = 0.5 * (b.b2 - b.a2);
        nodes_.clear();
        for (int a = 0; a < n1; ++a) {
            const double xi1 = mid1 + half1 * g1.node[a];
            const double wa = g1.weight[a] * half1;
            for (int c = 0; c < n2; ++c) {
                const double xi2 = mid2 + half2 * g2.node[c];
                Node n;
                n.xi1 = xi1;
                n.xi2 = xi2;
                n.w = wa * g2.weight[c] * half2 * area_weight(xi1);
                n.zeta = zeta_from_xi(xi1, xi2);
                n.sc = S_.eval_xi(xi1, xi2);
                n.exp_theta = std::exp(phase_exponent(x_[0], x_[1], x_[2], n.zeta));
                nodes_.push_back(n);
            }
        }
        sink_.panel(nodes_);
    }

    // ---- zeta strip ------------------------------------------------------
    double window_radius(double zi_abs) const {
        // Smooth truncation: repeated integration by parts against the
        // quadratic zR-phase gains a factor ~ tau = pi/(12 t |zI| R^2) per
        // pass, so the error is superalgebraic in tau; tau ~ 0.02 leaves a
        // comfortably negligible tail while keeping the windowed cycle count
        // per layer ~ 1/(4 tau).
        const double tau = 0.02;
        double r = 1e18;
        const double denom = 12.0 * t_ * zi_abs * tau;
        if (denom > 0.0) r = std::sqrt(M_PI / denom);
        return std::max(4.0, r);
    }
    double image_radius(double zi_abs) const {
        return 0.5 * M_PI * xi2_max_ / zi_abs; // |zR zI| <= pi xi2max / 2
    }

    void strip(double sign, double zi_top) {
        // geometric layers in |zI| down to a negligible sliver
        const int layers = 34;
        double hi = zi_top;
        for (int l = 0; l < layers; ++l) {
            const double lo = 0.5 * hi;
            const double rwin = window_radius(lo);
            const double rmax = std::min(2.0 * rwin, image_radius(lo));
            process_zeta({-rmax, rmax, sign * hi, sign * lo}, 0, rwin);
            hi = lo;
        }
    }

    void process_zeta(Box b, int depth, double rwin) {
        if (b.a2 > b.b2) std::swap(b.a2, b.b2); // zI range, fixed sign
        const double w1 = b.b1 - b.a1, w2 = b.b2 - b.a2;
        if (w1 <= 0.0 || w2 <= 0.0 || depth > opt_.max_depth + 8) return;
        const double zi_min = std::min(std::abs(b.a2), std::abs(b.b2));
        const double zi_max = std::max(std::abs(b.a2), std::abs(b.b2));
        const double zr_min =
            (b.a1 <= 0.0 && b.b1 >= 0.0) ? 0.0 : std::min(std::abs(b.a1), std::abs(b.b1));
        // entirely outside the lattice image or the window: drop
        if (zr_min * zi_min > 0.5 * M_PI * xi2_max_) return;
        if (zr_min > 2.0 * rwin) return;

        // amplitude scale in zR: the s_c samples a cell of xi2 maps to a
        // zR-interval of width ~ pi h2 / (2 zI); panels should not be much
        // wider than that (or than a fraction of |zR| in the far field)
        const double h2 = S_.xi_lattice.spacing_2();
        const double amp_scale =
            std::max(0.5 * M_PI * h2 / zi_max, 0.35 * std::max(1.0, zr_min));
        double f1 = 0.0, f2 = 0.0;
        const double s1[3] = {b.a1, 0.5 * (b.a1 + b.b1), b.b1};
        const double s2[3] = {b.a2, 0.5 * (b.a2 + b.b2), b.b2};
        for (double p : s1)
            for (double q : s2) {
                f1 = std::max(f1, freq_zr(x_, p, q));
                f2 = std::max(f2, freq_zi(x_, p, q));
            }
        const double cyc1 = f1 * w1, cyc2 = f2 * w2;
        const bool split1 = cyc1 > opt_.max_panel_cycles || w1 > 2.0 * amp_scale;
        const bool split2 = cyc2 > opt_.max_panel_cycles;
        if (split1 || split2) {
            if (split1 && (!split2 || cyc1 >= cyc2 || w1 > 2.0 * amp_scale)) {
                const double m = 0.5 * (b.a1 + b.b1);
                process_zeta({b.a1, m, b.a2, b.b2}, depth + 1, rwin);
                process_zeta({m, b.b1, b.a2, b.b2}, depth + 1, rwin);
            } else {
                const double m = 0.5 * (b.a2 + b.b2);
                process_zeta({b.a1, b.b1, b.a2, m}, depth + 1, rwin);
                process_zeta({b.a1, b.b1, m, b.b2}, depth + 1, rwin);
            }
            return;
        }
        emit_zeta(b, cyc1, cyc2, rwin);
    }

    void emit_zeta(const Box& b, double cyc1, double cyc2, double rwin) {
        const int n1 = gl_count(cyc1), n2 = gl_count(cyc2);
        const GaussRule& g1 = gauss_legendre(n1);
        const GaussRule& g2 = gauss_legendre(n2);
        const double mid1 = 0.5 * (b.a1 + b.b1), half1 = 0.5 * (b.b1 - b.a1);
        const double mid2 = 0.5 * (b.a2 + b.b2), half2 = 0.5 * (b.b2 - b.a2);
        nodes_.clear();
        for (int a = 0; a < n1; ++a) {
            const double zr = mid1 + half1 * g1.node[a];
            const double window = bump_psi(0.5 * zr / rwin);
            if (window == 0.0) continue;
            const double wa = g1.weight[a] * half1;
            for (int c = 0; c < n2; ++c) {
                const double zi = mid2 + half2 * g2.node[c];
                Node n;
                n.zeta = cplx(zr, zi);
                n.xi1 = -zi / M_PI;
                n.xi2 = -2.0 * zr * zi / M_PI;
                n.w = wa * g2.weight[c] * half2; // plain dA(zeta)
                n.sc = S_.eval_xi(n.xi1, n.xi2) * window;
                n.exp_theta = std::exp(phase_exponent(x_[0], x_[1], x_[2], n.zeta));
                nodes_.push_back(n);
            }
        }
        if (!nodes_.empty()) sink_.panel(nodes_);
    }

    int gl_count(double cyc) const {
        return std::clamp(int(std::ceil(cyc * opt_.points_per_cycle)) + 3, opt_.gl_min,
                          opt_.gl_max);
    }

    const ScatteringGrid& S_;
    Position x_;
    TileOptions opt_;
    PanelSink& sink_;
    double xi2_max_ = 2.0;
    double t_ = 0.0;
    std::vector<Node> nodes_;
};

struct FnSink : PanelSink {
    const std::function<void(const Node&)>* fn;
    void panel(const std::vector<Node>& nodes) override {
        for (const Node& n : nodes) (*fn)(n);
    }
};

} // namespace

void visit_nodes(const ScatteringGrid& S, const Position& x, const TileOptions& opt,
                 const std::function<void(const Node&)>& sink) {
    FnSink fs;
    fs.fn = &sink;
    Tiler(S, x, opt, fs).run();
}

cplx PlaneGrid::eval(cplx z) const {
    double fx = (z.real() - x0) / dx;
    double fy = (z.imag() - y0) / dy;
    fx = std::clamp(fx, 0.0, double(nx - 1));
    fy = std::clamp(fy, 0.0, double(ny - 1));
    int i0 = std::min(int(fx), nx - 2), j0 = std::min(int(fy), ny - 2);
    if (nx == 1) i0 = 0;
    if (ny == 1) j0 = 0;
    const double wx = fx - i0, wy = fy - j0;
    const int i1 = std::min(i0 + 1, nx - 1), j1 = std::min(j0 + 1, ny - 1);
    return (1.0 - wx) * ((1.0 - wy) * at(i0, j0) + wy * at(i0, j1)) +
           wx * ((1.0 - wy) * at(i1, j0) + wy * at(i1, j1));
}

OscValue u1_tiled(const ScatteringGrid& S, const Position& x, const TileOptions& opt,
                  const std::function<double(cplx)>* weight, bool refine_check) {
    const double t2 = x[2] < 0.0 ? x[1] / (-x[2]) : 0.0;
    auto run = [&](const TileOptions& o) {
        OscValue r;
        visit_nodes(S, x, o, [&](const Node& n) {
            double wt = 1.0;
            if (weight) wt = (*weight)(n.zeta - t2 / 3.0);
            r.value += n.w * wt * n.sc * n.zeta.imag() * n.exp_theta;
            ++r.nodes;
        });
        r.value *= cplx(0.0, 4.0 / M_PI);
        return r;
    };
    OscValue v = run(opt);
    if (refine_check) {
        TileOptions coarse = opt;
        coarse.points_per_cycle *= 0.7;
        OscValue vc = run(coarse);
        v.refine_diff = std::abs(vc.value - v.value);
        v.nodes += vc.nodes;
    }
    return v;
}

cplx ct_apply_tiled(const ScatteringGrid& S, const Position& x, cplx lambda,
                    const TileOptions& opt, bool dx1_weight) {
    cplx acc = 0.0;
    visit_nodes(S, x, opt, [&](const Node& n) {
        cplx num = n.w * n.sc * n.exp_theta;
        if (dx1_weight) num *= std::conj(n.zeta) - n.zeta;
        acc += num / (n.zeta - lambda);
    });
    return -acc / M_PI;
}

namespace {

// Moment-accumulating sink for multi-target Cauchy sweeps: far targets see a
// multipole expansion of the panel, near targets a direct node sum.
class SweepSink : public PanelSink {
public:
    static constexpr int K = 6;

    SweepSink(const std::vector<cplx>& targets, int nweights)
        : targets_(targets), nw_(nweights) {
        acc_.assign(std::size_t(nw_) * targets.size(), cplx(0.0, 0.0));
    }

    std::function<cplx(const Node&, int)> rho;

    void panel(const std::vector<Node>& nodes) override {
        if (nodes.empty()) return;
        cplx c = 0.0;
        for (const Node& n : nodes) c += n.zeta;
        c /= double(nodes.size());
        double rad = 0.0;
        for (const Node& n : nodes) rad = std::max(rad, std::abs(n.zeta - c));

        cplx mom[8][K];
        for (int w = 0; w < nw_; ++w)
            for (int k = 0; k < K; ++k) mom[w][k] = 0.0;
        double mass = 0.0;
        vals_.resize(nodes.size() * std::size_t(nw_));
        for (std::size_t q = 0; q < nodes.size(); ++q) {
            const Node& n = nodes[q];
            const cplx d = n.zeta - c;
            cplx pw = 1.0;
            for (int w = 0; w < nw_; ++w) vals_[q * nw_ + w] = rho(n, w);
            mass += std::abs(vals_[q * nw_]);
            for (int k = 0; k < K; ++k) {
                for (int w = 0; w < nw_; ++w) mom[w][k] += vals_[q * nw_ + w] * pw;
                pw *= d;
            }
        }

        for (std::size_t p = 0; p < targets_.size(); ++p) {
            const cplx d = targets_[p] - c;
            const double ad = std::abs(d);
            const double ratio = rad / std::max(ad, 1e-300);
            if (ratio < 0.55 &&
                (ratio < 0.28 ||
                 mass * std::pow(ratio, K) / ((1.0 - ratio) * ad) < 1e-12)) {
                const cplx invd = 1.0 / d;
                for (int w = 0; w < nw_; ++w) {
                    cplx sum = 0.0;
                    cplx ip = invd;
                    for (int k = 0; k < K; ++k) {
                        sum += mom[w][k] * ip;
                        ip *= invd;
                    }
                    acc_[std::size_t(w) * targets_.size() + p] -= sum;
                }
            } else {
                for (std::size_t q = 0; q < nodes.size(); ++q) {
                    const cplx ker = 1.0 / (nodes[q].zeta - targets_[p]);
                    for (int w = 0; w < nw_; ++w)
                        acc_[std::size_t(w) * targets_.size() + p] +=
                            vals_[q * nw_ + w] * ker;
                }
            }
        }
    }

    cplx result(int w, std::size_t p) const {
        return -acc_[std::size_t(w) * targets_.size() + p] / M_PI;
    }

private:
    const std::vector<cplx>& targets_;
    int nw_;
    std::vector<cplx> acc_;
    std::vector<cplx> vals_;
};

PlaneGrid make_grid(double x0, double y0, double dx, double dy, int nx, int ny) {
    PlaneGrid g;
    g.x0 = x0;
    g.y0 = y0;
    g.dx = dx;
    g.dy = dy;
    g.nx = nx;
    g.ny = ny;
    g.v.assign(std::size_t(nx) * ny, cplx(0.0, 0.0));
    return g;
}

} // namespace

ConeEigen cone_eigenfunction(const ScatteringGrid& S, const Position& x, int order,
                             const TileOptions& opt) {
    const double t = x[2] < 0.0 ? -x[2] : 0.0;
    const double t2 = t > 0.0 ? x[1] / t : 0.0;
    const double a = t > 0.0 ? x[0] / t + t2 * t2 / 3.0 : 0.0;

    // sample layout: base plane plus patches around imaginary stationary
    // points (NEG regime features scale like t^{-1/2})
    const double cx = t2 / 3.0;
    PlaneGrid base = make_grid(cx - 3.2, -2.3, 0.2, 0.2, 33, 24);
    std::vector<PlaneGrid> patches;
    if (t > 0.0 && a < 0.0) {
        const double r = std::sqrt(-a / 3.0);
        const double sp = std::max(0.03, 0.35 / std::sqrt(t)) * std::max(r, 0.3);
        const int np = 25;
        for (double sgn : {1.0, -1.0})
            patches.push_back(make_grid(cx - sp * (np / 2), sgn * r - sp * (np / 2), sp,
                                        sp, np, np));
    }

    std::vector<cplx> targets;
    for (int j = 0; j < base.ny; ++j)
        for (int i = 0; i < base.nx; ++i) targets.push_back(base.point(i, j));
    for (auto& p : patches)
        for (int j = 0; j < p.ny; ++j)
            for (int i = 0; i < p.nx; ++i) targets.push_back(p.point(i, j));

    auto scatter = [&](SweepSink& sink, TwoLevelField& f0, TwoLevelField& f1) {
        std::size_t idx = 0;
        f0.base = base;
        f1.base = base;
        for (int k = 0; k < int(base.v.size()); ++k, ++idx) {
            f0.base.v[k] = sink.result(0, idx);
            f1.base.v[k] = sink.result(1, idx);
        }
        f0.patches = patches;
        f1.patches = patches;
        for (std::size_t q = 0; q < patches.size(); ++q)
            for (int k = 0; k < int(patches[q].v.size()); ++k, ++idx) {
                f0.patches[q].v[k] = sink.result(0, idx);
                f1.patches[q].v[k] = sink.result(1, idx);
            }
    };

    ConeEigen ce;
    ce.order = order;

    {
        SweepSink sink(targets, 2);
        sink.rho = [&](const Node& n, int w) -> cplx {
            cplx base_v = n.w * n.sc * n.exp_theta;
            if (w == 1) base_v *= std::conj(n.zeta) - n.zeta;
            return base_v;
        };
        Tiler(S, x, opt, sink).run();
        scatter(sink, ce.m_minus_1, ce.dx1_m);
    }

    if (order >= 2) {
        TwoLevelField m1 = ce.m_minus_1, m1x = ce.dx1_m;
        SweepSink sink(targets, 2);
        sink.rho = [&](const Node& n, int w) -> cplx {
            const cplx zb = std::conj(n.zeta);
            const cplx m1_zb = m1.eval(zb);
            cplx base_v = n.w * n.sc * n.exp_theta;
            if (w == 0) return base_v * m1_zb;
            return base_v * ((zb - n.zeta) * m1_zb + m1x.eval(zb));
        };
        Tiler(S, x, opt, sink).run();
        TwoLevelField m2, m2x;
        scatter(sink, m2, m2x);
        for (std::size_t k = 0; k < ce.m_minus_1.base.v.size(); ++k) {
            ce.m_minus_1.base.v[k] += m2.base.v[k];
            ce.dx1_m.base.v[k] += m2x.base.v[k];
        }
        for (std::size_t q = 0; q < ce.m_minus_1.patches.size(); ++q)
            for (std::size_t k = 0; k < ce.m_minus_1.patches[q].v.size(); ++k) {
                ce.m_minus_1.patches[q].v[k] += m2.patches[q].v[k];
                ce.dx1_m.patches[q].v[k] += m2x.patches[q].v[k];
            }
    }

    for (const cplx& v : ce.m_minus_1.base.v)
        ce.sup_m_minus_1 = std::max(ce.sup_m_minus_1, std::abs(v));
    return ce;
}

ReconstructionValue reconstruct_tiled(const ScatteringGrid& S, const Position& x,
                                      int order, const TileOptions& opt) {
    ConeEigen ce = cone_eigenfunction(S, x, order, opt);
    ReconstructionValue out;
    visit_nodes(S, x, opt, [&](const Node& n) {
        const cplx common = n.w * n.sc * n.exp_theta;
        out.u1 += common * n.zeta.imag();
        out.u20 += common * n.zeta.imag() * ce.m_minus_1.eval(n.zeta);
        out.u21 += common * ce.dx1_m.eval(n.zeta);
    });
    out.u1 *= cplx(0.0, 4.0 / M_PI);
    out.u20 *= cplx(0.0, 4.0 / M_PI);
    out.u21 *= -2.0 / M_PI;
    out.total = out.u1 + out.u20 + out.u21;
    out.imaginary_residue = std::abs(out.total.imag());
    return out;
}

} // namespace kpii::osc
