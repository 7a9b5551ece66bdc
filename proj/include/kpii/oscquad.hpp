#pragma once

#include <functional>

#include "kpii/cauchy.hpp"
#include "kpii/forward.hpp"

namespace kpii::osc {

// Phase-resolved quadrature over the scattering grid's xi-box.  Panels are an
// adaptive refinement of the xi-cells: split until the local phase advance of
// e^{Theta(x, zeta(xi))} per panel is a few cycles and the 1/xi1 area density
// is tame, then tensor Gauss-Legendre per panel.  Everything downstream of
// the large-|x| reconstruction integrals runs through this engine.
struct TileOptions {
    double points_per_cycle = 3.6;
    double max_panel_cycles = 6.0;
    int max_depth = 26;
    int gl_min = 4, gl_max = 40;
};

struct Node {
    double xi1, xi2;
    double w; // GL weight x cell measure x area density
    cplx zeta;
    cplx sc;
    cplx exp_theta;
};

void visit_nodes(const ScatteringGrid& S, const Position& x, const TileOptions& opt,
                 const std::function<void(const Node&)>& sink);

struct OscValue {
    cplx value{0.0, 0.0};
    double refine_diff = 0.0;
    std::size_t nodes = 0;
};

// u1 = (4i/pi) int s~_c zeta'_I e^{2 pi i t S0} dA, with an optional real
// weight (cutoff chi) evaluated at zeta' = zeta - t2/3.
OscValue u1_tiled(const ScatteringGrid& S, const Position& x, const TileOptions& opt = {},
                  const std::function<double(cplx)>* weight = nullptr,
                  bool refine_check = true);

// Single-target Cauchy-transform sweeps: (C T phi)(lambda) where phi is 1 or
// an interpolated field, with an optional (zbar - zeta) derivative weight.
cplx ct_apply_tiled(const ScatteringGrid& S, const Position& x, cplx lambda,
                    const TileOptions& opt = {}, bool dx1_weight = false);

// Bilinear-interpolable sample plane (uniform grid, clamped at edges).
struct PlaneGrid {
    double x0 = 0.0, y0 = 0.0, dx = 1.0, dy = 1.0;
    int nx = 0, ny = 0;
    std::vector<cplx> v;

    bool contains(cplx z) const {
        return z.real() >= x0 && z.real() <= x0 + dx * (nx - 1) && z.imag() >= y0 &&
               z.imag() <= y0 + dy * (ny - 1);
    }
    cplx eval(cplx z) const;
    cplx at(int i, int j) const { return v[std::size_t(j) * nx + i]; }
    cplx point(int i, int j) const { return cplx(x0 + dx * i, y0 + dy * j); }
};

struct TwoLevelField {
    PlaneGrid base;
    std::vector<PlaneGrid> patches;
    cplx eval(cplx z) const {
        for (const auto& p : patches)
            if (p.contains(z)) return p.eval(z);
        return base.eval(z);
    }
};

// Truncated-Neumann eigenfunction samples along the cone: m - 1 and d(m)/dx1
// on a two-level lambda grid (base plane plus stationary-point patches).
struct ConeEigen {
    TwoLevelField m_minus_1;  // order-1 (+2) iterates combined
    TwoLevelField dx1_m;
    double sup_m_minus_1 = 0.0; // over the base grid
    int order = 1;
};

ConeEigen cone_eigenfunction(const ScatteringGrid& S, const Position& x, int order = 2,
                             const TileOptions& opt = {});

// Full tiled reconstruction u1 + u20 + u21 with the truncated-Neumann m.
ReconstructionValue reconstruct_tiled(const ScatteringGrid& S, const Position& x,
                                      int order = 2, const TileOptions& opt = {});

} // namespace kpii::osc
