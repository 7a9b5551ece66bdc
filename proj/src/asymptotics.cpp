#include "kpii/asymptotics.hpp"

#include <cmath>

namespace kpii {

ConeFrame cone_frame(const Position& x, double threshold) {
    if (!(x[2] < 0.0)) throw invalid_cone();
    ConeFrame f;
    f.t = -x[2];
    f.t1 = x[0] / f.t;
    f.t2 = x[1] / f.t;
    f.a = f.t1 + f.t2 * f.t2 / 3.0;
    f.r = std::sqrt(std::abs(f.a) / 3.0);
    f.threshold = threshold;
    if (f.a < -threshold)
        f.regime = Regime::neg;
    else if (f.a > threshold)
        f.regime = Regime::pos;
    else
        f.regime = Regime::near_zero;
    return f;
}

double bump_psi(double s) {
    const double a = std::abs(s);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    const double sig = 2.0 * (a - 0.5); // in (0, 1)
    const double e1 = std::exp(-1.0 / (1.0 - sig));
    const double e2 = std::exp(-1.0 / sig);
    return e1 / (e1 + e2);
}

double cutoff_pair(double s, double r, double w0) {
    if (w0 == 0.0) return bump_psi(16.0 * s / r);
    return bump_psi(16.0 * (s - w0) / r) + bump_psi(16.0 * (s + w0) / r);
}

CutoffSpec cutoff_for(const ConeFrame& cf) {
    if (cf.regime == Regime::near_zero) throw outside_asymptotic_regime();
    return CutoffSpec{cf.r, cf.regime == Regime::neg};
}

std::vector<cplx> stationary_points(double a) {
    if (a == 0.0) throw degenerate_phase();
    const double r = std::sqrt(std::abs(a) / 3.0);
    if (a < 0.0) return {cplx(0.0, r), cplx(0.0, -r)};
    return {cplx(r, 0.0), cplx(-r, 0.0)};
}

cplx leading_order(const ScatteringGrid& S, const Position& x, double threshold) {
    ConeFrame cf = cone_frame(x, threshold);
    if (cf.regime == Regime::near_zero) throw outside_asymptotic_regime();
    if (cf.regime == Regime::pos) return cplx(0.0, 0.0);
    const double mu = -x[1] / (3.0 * x[2]);
    const double phi = 2.0 * M_PI * cf.t * phase_S0(cf.a, cplx(0.0, cf.r));
    const cplx ephi = std::polar(1.0, phi);
    const cplx pref = cplx(0.0, 2.0 / (3.0 * cf.t));
    return pref * ephi * S.eval_lambda(cplx(mu, cf.r)) -
           pref * std::conj(ephi) * S.eval_lambda(cplx(mu, -cf.r));
}

U1Value u1_direct(const ScatteringGrid& S, const Position& x, double resolution) {
    if (!(x[2] <= -1.0))
        throw numeric_error("u1_direct expects t = -x3 >= 1");
    osc::TileOptions opt;
    opt.points_per_cycle *= resolution;
    // first pass carries its own coarse comparison; small values near phase
    // zeros may need extra density, so escalate (reusing the previous run as
    // the comparison) before declaring the resolution insufficient
    osc::OscValue v = osc::u1_tiled(S, x, opt, nullptr, true);
    for (int attempt = 0;; ++attempt) {
        if (v.refine_diff <= 0.1 * std::abs(v.value) || std::abs(v.value) <= 1e-14)
            return U1Value{v.value, v.refine_diff, v.nodes};
        if (attempt >= 2)
            throw resolution_insufficient(v.refine_diff,
                                          "u1_direct: refinement difference above 10%");
        opt.points_per_cycle *= 1.6;
        osc::OscValue vf = osc::u1_tiled(S, x, opt, nullptr, false);
        vf.refine_diff = std::abs(vf.value - v.value);
        vf.nodes += v.nodes;
        v = vf;
    }
}

std::pair<cplx, cplx> u1_split(const ScatteringGrid& S, const Position& x,
                               const CutoffSpec& cutoff, double resolution) {
    osc::TileOptions opt;
    opt.points_per_cycle *= resolution;
    std::function<double(cplx)> w_in = [&](cplx zp) { return cutoff.chi(zp); };
    std::function<double(cplx)> w_out = [&](cplx zp) { return 1.0 - cutoff.chi(zp); };
    osc::OscValue a = osc::u1_tiled(S, x, opt, &w_in, false);
    osc::OscValue b = osc::u1_tiled(S, x, opt, &w_out, false);
    return {a.value, b.value};
}

DecayFit decay_fit(const std::vector<std::pair<double, double>>& samples) {
    std::vector<std::pair<double, double>> pts;
    int dropped = 0;
    for (auto [t, v] : samples) {
        if (std::abs(v) == 0.0) {
            ++dropped;
            continue;
        }
        pts.emplace_back(std::log(t), std::log(std::abs(v)));
    }
    if (pts.size() < 4) throw insufficient_data();
    double tmin = 1e300, tmax = 0.0;
    for (auto [t, v] : samples)
        if (std::abs(v) != 0.0) {
            tmin = std::min(tmin, t);
            tmax = std::max(tmax, t);
        }
    if (tmax < 4.0 * tmin)
        throw insufficient_data("decay fit needs a >= 4x spread in t");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (auto [lx, ly] : pts) {
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = double(pts.size());
    DecayFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    double rss = 0.0;
    for (auto [lx, ly] : pts) {
        const double e = ly - (f.intercept + f.slope * lx);
        rss += e * e;
    }
    f.residual = std::sqrt(rss / n);
    f.used = int(pts.size());
    f.dropped = dropped;
    return f;
}

} // namespace kpii
