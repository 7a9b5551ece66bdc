#pragma once

#include "kpii/lattice.hpp"

namespace kpii {

// Discrete transform contract.  Convention fixed project-wide:
//   fhat(xi_k) = sum_x f(x) e^{-2 pi i x.xi_k} h1 h2,   xi_k = k/L, k in [-N/2, N/2)
//   f(x)       = sum_k fhat(xi_k) e^{+2 pi i x.xi_k} / (L1 L2)
// Cell-centered sample positions are absorbed into twiddle factors around an
// FFTW core, so forward(inverse(f)) == f to machine precision.
ComplexField2D dft_forward(const ComplexField2D& f);
ComplexField2D dft_inverse(const ComplexField2D& fhat);

// In spectral space: multiply by (2 pi i xi1)^l1 (2 pi i xi2)^l2.
void spectral_derivative_inplace(ComplexField2D& fhat, int l1, int l2);

} // namespace kpii
