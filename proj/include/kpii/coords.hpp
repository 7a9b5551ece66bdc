#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "kpii/errors.hpp"
#include "kpii/lattice.hpp"

namespace kpii {

// Spectral parameter lambda with the real axis excluded; (xi1, xi2) are the
// induced coordinates 2 pi i xi1 = conj(l) - l, 2 pi i xi2 = conj(l)^2 - l^2.
struct SpectralParam {
    cplx lambda;

    explicit SpectralParam(cplx l) : lambda(l) {
        if (l.imag() == 0.0) throw real_axis_undefined();
    }
    int half_plane() const { return lambda.imag() > 0.0 ? +1 : -1; }
    double xi1() const { return -lambda.imag() / M_PI; }
    double xi2() const { return -2.0 * lambda.real() * lambda.imag() / M_PI; }
};

// zeta' together with the recorded shift t2/3 (zeta = zeta' + t2/3).
struct PhasePoint {
    cplx zeta_prime;
    double shift;

    cplx unshift() const { return zeta_prime + shift; }
};

inline cplx zeta_from_xi(double xi1, double xi2) {
    if (xi1 == 0.0) throw singular_coordinate();
    return cplx(xi2 / (2.0 * xi1), -M_PI * xi1);
}

// Total inverse: the real axis Im(zeta)=0 collapses to xi = (0, 0).
inline std::pair<double, double> xi_from_zeta(cplx zeta) {
    const double zi = zeta.imag();
    return {-zi / M_PI, -2.0 * zeta.real() * zi / M_PI};
}

// Real density turning xi-lattice sums into d(zeta_R) d(zeta_I) quadrature;
// the symbolic 2i of d(conj zeta) ^ d(zeta) = 2i dA stays with the caller.
// Jacobian of the map above: |d(zR,zI)/d(xi1,xi2)| = pi / (2|xi1|).
inline double area_weight(double xi1) {
    if (xi1 == 0.0) throw singular_coordinate();
    return M_PI / (2.0 * std::abs(xi1));
}

// Phase S0(a; zeta') = -(1/pi)(a zI + zI^3 - 3 zI zR^2); the xi'-form
// a xi1' + pi^2 xi1'^3 - (3/4) xi2'^2 / xi1' agrees wherever xi1' != 0.
inline double phase_S0(double a, cplx zp) {
    const double zr = zp.real(), zi = zp.imag();
    return -(a * zi + zi * zi * zi - 3.0 * zi * zr * zr) / M_PI;
}

inline std::pair<double, double> grad_S0(double a, cplx zp) {
    const double zr = zp.real(), zi = zp.imag();
    return {6.0 * zr * zi / M_PI, (-a + 3.0 * (zr * zr - zi * zi)) / M_PI};
}

inline PhasePoint primed_shift(cplx zeta, double t2) {
    return PhasePoint{zeta - t2 / 3.0, t2 / 3.0};
}

// Full phase exponent Theta(x, lambda) = (lb-l)x1 + (lb^2-l^2)x2 + (lb^3-l^3)x3,
// purely imaginary for every x; equals 2 pi i t S0(a; zeta') on the cone.
inline cplx phase_exponent(double x1, double x2, double x3, cplx l) {
    const double lr = l.real(), li = l.imag();
    // lb^k - l^k = -2i Im(l^k)
    const double im1 = li;
    const double im2 = 2.0 * lr * li;
    const double im3 = li * (3.0 * lr * lr - li * li);
    return cplx(0.0, -2.0 * (im1 * x1 + im2 * x2 + im3 * x3));
}

} // namespace kpii
