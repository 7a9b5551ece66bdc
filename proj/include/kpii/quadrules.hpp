#pragma once

#include <vector>

#include "kpii/lattice.hpp"

namespace kpii {

// Integral of 1/(alpha u + beta v) over [u0,u1] x [v0,v1], complex alpha and
// beta, valid whether or not the zero line passes through the box.
cplx sector_log_cell(cplx alpha, cplx beta, double u0, double u1, double v0, double v1);

// Integral of 1/(z0 + alpha u + beta v) over |u| <= du/2, |v| <= dv/2.
cplx cell_cauchy_integral(cplx alpha, cplx beta, cplx z0, double du, double dv);

// Gauss-Legendre nodes/weights on [-1, 1], generated on demand and cached.
struct GaussRule {
    std::vector<double> node;
    std::vector<double> weight;
};
const GaussRule& gauss_legendre(int n);

} // namespace kpii
