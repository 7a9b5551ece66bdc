#pragma once

#include "kpii/cauchy.hpp"
#include "kpii/oscquad.hpp"

namespace kpii {

enum class Regime { neg, pos, near_zero };

// Moving-cone frame (t1, t2, t) = (x1/t, x2/t, -x3) with a = t1 + t2^2/3.
struct ConeFrame {
    double t1 = 0.0, t2 = 0.0, t = 0.0;
    double a = 0.0;
    double r = 0.0; // sqrt(|a|/3)
    Regime regime = Regime::near_zero;
    double threshold = 1.0;
};

ConeFrame cone_frame(const Position& x, double threshold = 1.0);

// Smooth plateau bump: 1 on |s| <= 1/2, 0 on |s| >= 1, C-infinity in between.
double bump_psi(double s);

// psi(16(s-w0)/r) + psi(16(s+w0)/r); the w0 = 0 bump is taken once, not
// doubled (the displayed sum degenerates there).
double cutoff_pair(double s, double r, double w0);

struct CutoffSpec {
    double r = 1.0;
    bool neg_regime = true; // a < 0: localize zeta'_I near +-r, zeta'_R near 0

    double chi(cplx zeta_prime) const {
        if (neg_regime)
            return cutoff_pair(zeta_prime.imag(), r, r) * cutoff_pair(zeta_prime.real(), r, 0.0);
        return cutoff_pair(zeta_prime.real(), r, r) * cutoff_pair(zeta_prime.imag(), r, 0.0);
    }
};

CutoffSpec cutoff_for(const ConeFrame& cf);

// Stationary points of S0: {+-i r} for a < 0, {+-r} for a > 0.
std::vector<cplx> stationary_points(double a);

// Theorem-form leading order: NEG regime
//   (2i e^{i Phi}/3t) s_c(mu + i r) - (2i e^{-i Phi}/3t) s_c(mu - i r),
// mu = -x2/(3 x3), Phi = 2 pi t S0(a; i r); POS regime: 0.
cplx leading_order(const ScatteringGrid& S, const Position& x, double threshold = 1.0);

struct U1Value {
    cplx value{0.0, 0.0};
    double error_estimate = 0.0;
    std::size_t nodes = 0;
};

// Direct oscillatory quadrature of the u1 integral in the primed variables.
// `resolution` scales the points-per-oscillation density (1 = default 4.5).
U1Value u1_direct(const ScatteringGrid& S, const Position& x, double resolution = 1.0);

// Cutoff split (u_{1,1}, u_{1,2}) with u_{1,1} + u_{1,2} = u1.
std::pair<cplx, cplx> u1_split(const ScatteringGrid& S, const Position& x,
                               const CutoffSpec& cutoff, double resolution = 1.0);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // rms of log-log fit residuals
    int used = 0;
    int dropped = 0;
};

// Least-squares slope of log|value| against log t; zero samples are dropped.
DecayFit decay_fit(const std::vector<std::pair<double, double>>& samples);

} // namespace kpii
