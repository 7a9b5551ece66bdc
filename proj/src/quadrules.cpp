#include "kpii/quadrules.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace kpii {

cplx sector_log_cell(cplx alpha, cplx beta, double u0, double u1, double v0, double v1) {
    // Axis pieces: reflect negative parts so each piece lives in s >= 0 with
    // the sign folded into the coefficient; each piece's image is one sector
    // spanned by (+-alpha, +-beta), rotated so the log branch cut stays clear.
    struct Piece {
        double lo, hi, sign;
    };
    auto pieces = [](double a, double b) {
        std::vector<Piece> ps;
        if (a < 0.0 && b > 0.0) {
            ps.push_back({0.0, -a, -1.0});
            ps.push_back({0.0, b, 1.0});
        } else {
            ps.push_back({std::min(std::abs(a), std::abs(b)),
                          std::max(std::abs(a), std::abs(b)),
                          a + b < 0.0 ? -1.0 : 1.0});
        }
        return ps;
    };

    cplx total = 0.0;
    for (const Piece& pu : pieces(u0, u1)) {
        if (pu.hi - pu.lo <= 0.0) continue;
        for (const Piece& pv : pieces(v0, v1)) {
            if (pv.hi - pv.lo <= 0.0) continue;
            const cplx al = pu.sign * alpha;
            const cplx be = pv.sign * beta;
            double mid = 0.5 * (std::arg(al) + std::arg(be));
            if (std::abs(std::arg(al) - std::arg(be)) > M_PI) mid += M_PI;
            const cplx rot = std::polar(1.0, -mid);
            auto G = [&](double uu, double vv) -> cplx {
                cplx zr = (al * uu + be * vv) * rot;
                if (zr == cplx(0.0, 0.0)) return 0.0;
                return zr * (std::log(zr) - 1.0);
            };
            total += (G(pu.hi, pv.hi) - G(pu.lo, pv.hi) - G(pu.hi, pv.lo) +
                      G(pu.lo, pv.lo)) /
                     (al * be * rot);
        }
    }
    return total;
}

cplx cell_cauchy_integral(cplx alpha, cplx beta, cplx z0, double du, double dv) {
    // write z0 = alpha u0 + beta v0 (real 2x2 solve), then shift the box
    const double a1 = alpha.real(), a2 = alpha.imag();
    const double b1 = beta.real(), b2 = beta.imag();
    const double det = a1 * b2 - a2 * b1;
    if (det == 0.0) throw numeric_error("degenerate cell frame in cauchy cell integral");
    const double u0 = (z0.real() * b2 - z0.imag() * b1) / det;
    const double v0 = (a1 * z0.imag() - a2 * z0.real()) / det;
    return sector_log_cell(alpha, beta, u0 - 0.5 * du, u0 + 0.5 * du, v0 - 0.5 * dv,
                           v0 + 0.5 * dv);
}

const GaussRule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    GaussRule r;
    r.node.resize(n);
    r.weight.resize(n);
    // Newton on Legendre P_n from Chebyshev initial guesses.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p0, p1, dp;
        for (int it2 = 0; it2 < 100; ++it2) {
            p0 = 1.0;
            p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.node[i] = -x;
        r.node[n - 1 - i] = x;
        r.weight[i] = r.weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    auto [pos, inserted] = cache.emplace(n, std::move(r));
    (void)inserted;
    return pos->second;
}

} // namespace kpii
