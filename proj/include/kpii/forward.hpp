#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "kpii/coords.hpp"
#include "kpii/fft.hpp"
#include "kpii/lattice.hpp"

namespace kpii {

// Real initial datum with its measured smallness and declared regularity.
struct InitialData {
    ComplexField2D field;      // physical space, Im == 0
    double epsilon0 = 0.0;     // max(Linf, L1) lattice norm
    int reg_p = 0, reg_q = 0;  // declared weighted-regularity class

    static InitialData from_field(ComplexField2D f, int p = 0, int q = 0);
};

// Gaussian profile amp * exp(-pi ((x1/w1)^2 + (x2/w2)^2)) sampled on lat.
InitialData gaussian_datum(const Lattice2D& lat, double amplitude, double w1 = 1.0,
                           double w2 = 1.0);

struct GreenValue {
    cplx value;      // 1/p_lambda, or the patched cell average when singular
    bool singular;   // |p| below the floor
};

// p_lambda(xi) = (2 pi i xi1 + lambda)^2 - (2 pi i xi2 + lambda^2); returns
// 1/p with a flag instead of overflowing at the two real zeros.
GreenValue green_symbol(const SpectralParam& lambda, double xi1, double xi2,
                        double singular_floor = 1e-12);

// Spectral application of -1/p_lambda to a physical-space field.  The (at
// most two) modes whose cells contain zeros of p are replaced by the cell
// average of the linearized symbol (first-order zero, log-integrable).
ComplexField2D apply_green(const SpectralParam& lambda, const ComplexField2D& phi);

struct SolveStats {
    int iterations = 0;
    double contraction_ratio = 0.0;
    double residual = 0.0;
};

// Picard iteration m <- 1 + G(u0 m); throws no_contraction / max_iter_exceeded.
ComplexField2D solve_m0(const InitialData& u0, const SpectralParam& lambda,
                        double tol = 1e-10, int max_iter = 60,
                        SolveStats* stats = nullptr);

// s_c(lambda) = sgn(lambda_I)/(2 pi i) * (u0 m0)^(xi(lambda)), the transform
// evaluated by a direct non-uniform sum over the physical samples.
cplx scattering_value(const InitialData& u0, const ComplexField2D& m0,
                      const SpectralParam& lambda);

// Sampled s_c over a cell-centered xi-lattice (which never contains xi1 = 0).
// Rows with xi1 < 0 carry lambda_I > 0 (samples_plus), xi1 > 0 the minus set.
struct ScatteringGrid {
    Lattice2D xi_lattice;
    std::vector<cplx> samples_plus;   // xi1 < 0 rows, xi1-ascending, row-major
    std::vector<cplx> samples_minus;  // xi1 > 0 rows, xi1-ascending, row-major
    double reality_violation = 0.0;
    double sup_norm = 0.0;

    ScatteringGrid() = default;
    explicit ScatteringGrid(const Lattice2D& lat);

    std::size_t rows_per_half() const { return xi_lattice.count_1 / 2; }
    // Node accessors over the full lattice index (i row, j column).
    cplx node(std::size_t i, std::size_t j) const;
    cplx& node(std::size_t i, std::size_t j);
    // Conjugation mirror: lambda -> conj(lambda) is xi -> -xi on the lattice.
    cplx node_mirror(std::size_t i, std::size_t j) const;

    // Bilinear in (xi1, xi2) within one half-plane; never across xi1 = 0;
    // zero outside the lattice box.
    cplx eval_xi(double xi1, double xi2) const;
    cplx eval_lambda(cplx lambda) const;

    double boundary_max() const;
    double measure_reality_violation() const;
    double measure_sup_norm() const;
};

ScatteringGrid build_scattering_grid(const InitialData& u0, const Lattice2D& xi_lattice,
                                     double tol = 1e-10);

// Born approximation of the grid: sgn(lambda_I)/(2 pi i) * u0hat(xi).
ScatteringGrid born_scattering_grid(const InitialData& u0, const Lattice2D& xi_lattice);

// M^{p,q} diagnostic: sum_{|l|<=q} || d^l [ (1+|x1|+|x2|)^p u0 ] ||_{Linf ^ L1}
double weighted_norm(const InitialData& u0, int p, int q);

} // namespace kpii
