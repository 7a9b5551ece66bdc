#pragma once

#include <complex>

#include "kpii/errors.hpp"

namespace kpii {

enum class AiryMethod { series, asymptotic_neg, asymptotic_pos };

struct AiryEval {
    double argument = 0.0;
    double value = 0.0;
    AiryMethod method = AiryMethod::series;
    double error_estimate = 0.0; // absolute
};

// Ai(z) for real z.  Maclaurin pair below the switch |z| = 6, asymptotic
// regime beyond.  See airy.cpp for how the 6 < |z| <= 11 band is evaluated.
AiryEval airy(double z);

namespace detail {
// The two evaluation engines, exposed for cross-comparison tests.
double airy_series(double z);
double airy_asymptotic(double z);
} // namespace detail

// int_R e^{2 pi i t (4 pi^2 s^3 + c s)} ds  =  (24 pi^3 t)^{-1/3} 2 pi Ai(2 pi t c (24 pi^3 t)^{-1/3})
std::complex<double> cubic_phase_integral(double t, double c);

// Fourier transform of s -> e^{-2 i t (a s + s^3)} evaluated at -eta:
//   (2 pi / (6 t)^{1/3}) Ai( (2t)^{2/3} 3^{-1/3} (a - pi eta / t) )
std::complex<double> airy_propagator(double t, double a, double eta);

// Leading stationary-phase factor for int e^{-i pi t mu s^2} g(s) ds with g
// smooth: amplitude * (t|mu|)^{-1/2} * e^{-i pi sgn(mu)/4}.  The exact
// Gaussian integral int e^{-i pi t mu s^2 - s^2} ds pins this normalization.
std::complex<double> stationary_phase_leading(std::complex<double> amplitude_at_point,
                                              double second_deriv, double t);

} // namespace kpii
