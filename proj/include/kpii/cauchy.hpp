#pragma once

#include <array>

#include "kpii/forward.hpp"

namespace kpii {

using Position = std::array<double, 3>; // (x1, x2, x3)

// Eigenfunction values m(x, lambda(xi)) over the scattering grid's xi-lattice.
struct EigenfunctionBatch {
    Position position{0.0, 0.0, 0.0};
    Lattice2D lattice;
    std::vector<cplx> values; // row-major over the full lattice
    int order_reached = 0;
    double residual = 0.0;
    double norm_dev = 0.0;       // ||m - 1||_inf over the lattice
    double kappa = 0.0;          // norm_dev / sup|s_c|

    cplx& at(std::size_t i, std::size_t j) { return values[i * lattice.count_2 + j]; }
    const cplx& at(std::size_t i, std::size_t j) const {
        return values[i * lattice.count_2 + j];
    }
};

struct ReconstructionValue {
    cplx u1{0.0, 0.0}, u20{0.0, 0.0}, u21{0.0, 0.0};
    cplx total{0.0, 0.0};
    double imaginary_residue = 0.0;
};

// (T phi)(lambda) = s_c(lambda) e^{Theta(x, lambda)} phi(conj lambda); the
// conjugation is the exact lattice point reflection xi -> -xi.  conj_flip =
// false skips the reflection (diagnostic variant).
std::vector<cplx> apply_T(const ScatteringGrid& S, const std::vector<cplx>& phi,
                          const Position& x, bool conj_flip = true);

// C phi (lambda) = -(1/pi) integral phi(zeta)/(zeta - lambda) dA(zeta) by
// xi-lattice quadrature; the cell whose zeta-image contains lambda gets the
// analytic local integral of the linearized kernel.
cplx apply_C(const Lattice2D& lat, const std::vector<cplx>& phi, cplx lambda_eval);

struct NeumannOptions {
    double tol = 1e-10;
    int n_max = 60;
};

// Fixed point m = 1 + C T m swept over the whole lattice.
EigenfunctionBatch neumann_m(const ScatteringGrid& S, const Position& x,
                             const NeumannOptions& opt = {});

struct Dx1Result {
    std::vector<cplx> values;      // Richardson-combined d m / d x1 on the lattice
    double extrapolation_error = 0.0;
};

// Central difference in x1 with step h0 and a Richardson check at h0/2.
Dx1Result dx1_m(const ScatteringGrid& S, const Position& x, double tol = 1e-6,
                double h0 = 0.02);

struct ReconstructOptions {
    NeumannOptions neumann{};
    double fd_step = 0.02;
    // auto_oscillatory switches to phase-resolved tiled quadrature when the
    // lattice under-resolves e^{Theta}; see oscquad.hpp.
    bool auto_oscillatory = true;
    int neumann_order_tiled = 2;
};

// u = u1 + u20 + u21 per the linearized/perturbed split.
ReconstructionValue reconstruct_u(const ScatteringGrid& S, const Position& x,
                                  const ReconstructOptions& opt = {});

// Largest |e^{Theta}| phase advance across one lattice cell at x (radians);
// the lattice path is trustworthy only when this is below ~0.8.
double max_phase_per_cell(const Lattice2D& lat, const Position& x);

} // namespace kpii
