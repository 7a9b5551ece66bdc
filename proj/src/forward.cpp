#include "kpii/forward.hpp"

#include <algorithm>
#include <cmath>

#include "kpii/quadrules.hpp"

namespace kpii {
namespace {

constexpr double two_pi = 2.0 * M_PI;

cplx p_symbol(cplx lambda, double xi1, double xi2) {
    cplx a = cplx(0.0, two_pi * xi1) + lambda;
    cplx b = cplx(0.0, two_pi * xi2) + lambda * lambda;
    return a * a - b;
}

} // namespace

InitialData InitialData::from_field(ComplexField2D f, int p, int q) {
    if (f.space != Space::physical)
        throw config_error("initial data must be a physical-space field");
    if (f.max_abs_imag() > 1e-14)
        throw config_error("initial data must be real to 1e-14");
    InitialData d;
    const double cell = f.lattice.spacing_1() * f.lattice.spacing_2();
    d.epsilon0 = std::max(f.max_abs(), f.l1(cell));
    d.field = std::move(f);
    d.reg_p = p;
    d.reg_q = q;
    return d;
}

InitialData gaussian_datum(const Lattice2D& lat, double amplitude, double w1, double w2) {
    ComplexField2D f(lat, Space::physical);
    for (std::size_t i = 0; i < lat.count_1; ++i) {
        const double x1 = lat.coord_1(i);
        for (std::size_t j = 0; j < lat.count_2; ++j) {
            const double x2 = lat.coord_2(j);
            f.at(i, j) = amplitude * std::exp(-M_PI * ((x1 / w1) * (x1 / w1) +
                                                       (x2 / w2) * (x2 / w2)));
        }
    }
    return InitialData::from_field(std::move(f));
}

GreenValue green_symbol(const SpectralParam& lambda, double xi1, double xi2,
                        double singular_floor) {
    cplx p = p_symbol(lambda.lambda, xi1, xi2);
    if (std::abs(p) < singular_floor) return {cplx(0.0, 0.0), true};
    return {1.0 / p, false};
}

ComplexField2D apply_green(const SpectralParam& lambda, const ComplexField2D& phi) {
    if (phi.space != Space::physical)
        throw numeric_error("apply_green expects a physical-space field");
    const Lattice2D& lat = phi.lattice;
    ComplexField2D ph = dft_forward(phi);

    // The two real zeros of p: (0,0) and xi(lambda).
    const double z1_1 = lambda.xi1(), z1_2 = lambda.xi2();
    const double d1 = 1.0 / lat.length_1, d2 = 1.0 / lat.length_2;

    auto patched_multiplier = [&](double f1, double f2) -> cplx {
        // Is one of the zeros inside this mode cell?
        for (int which = 0; which < 2; ++which) {
            const double r1 = which == 0 ? 0.0 : z1_1;
            const double r2 = which == 0 ? 0.0 : z1_2;
            if (std::abs(f1 - r1) <= 0.5 * d1 && std::abs(f2 - r2) <= 0.5 * d2) {
                cplx alpha = -8.0 * M_PI * M_PI * r1 + cplx(0.0, 4.0 * M_PI) * lambda.lambda;
                cplx beta = cplx(0.0, -two_pi);
                cplx cell = sector_log_cell(alpha, beta, f1 - 0.5 * d1 - r1,
                                            f1 + 0.5 * d1 - r1, f2 - 0.5 * d2 - r2,
                                            f2 + 0.5 * d2 - r2);
                return cell / (d1 * d2);
            }
        }
        return 1.0 / p_symbol(lambda.lambda, f1, f2);
    };

    for (std::size_t i = 0; i < lat.count_1; ++i) {
        const double f1 = lat.freq_1(i);
        for (std::size_t j = 0; j < lat.count_2; ++j) {
            const double f2 = lat.freq_2(j);
            ph.samples[i * lat.count_2 + j] *= -patched_multiplier(f1, f2);
        }
    }
    return dft_inverse(ph);
}

ComplexField2D solve_m0(const InitialData& u0, const SpectralParam& lambda, double tol,
                        int max_iter, SolveStats* stats) {
    const Lattice2D& lat = u0.field.lattice;
    ComplexField2D m(lat, Space::physical);
    for (cplx& v : m.samples) v = 1.0;

    double prev_update = 0.0;
    int bad = 0;
    SolveStats st;
    for (int it = 0; it < max_iter; ++it) {
        ComplexField2D prod(lat, Space::physical);
        for (std::size_t k = 0; k < m.samples.size(); ++k)
            prod.samples[k] = u0.field.samples[k] * m.samples[k];
        ComplexField2D g = apply_green(lambda, prod);

        double update = 0.0;
        for (std::size_t k = 0; k < m.samples.size(); ++k) {
            cplx next = 1.0 + g.samples[k];
            update = std::max(update, std::abs(next - m.samples[k]));
            m.samples[k] = next;
        }
        st.iterations = it + 1;
        if (prev_update > 0.0) {
            st.contraction_ratio = update / prev_update;
            if (st.contraction_ratio >= 1.0) {
                if (++bad >= 2) throw no_contraction(st.contraction_ratio);
            } else {
                bad = 0;
            }
        }
        prev_update = update;
        if (update < tol) {
            st.residual = update;
            if (stats) *stats = st;
            return m;
        }
    }
    throw max_iter_exceeded(max_iter, prev_update);
}

cplx scattering_value(const InitialData& u0, const ComplexField2D& m0,
                      const SpectralParam& lambda) {
    const Lattice2D& lat = u0.field.lattice;
    const double xs1 = lambda.xi1(), xs2 = lambda.xi2();
    const double cell = lat.spacing_1() * lat.spacing_2();
    // Direct non-uniform transform sum; separable twiddles per axis.
    std::vector<cplx> w1(lat.count_1), w2(lat.count_2);
    for (std::size_t i = 0; i < lat.count_1; ++i)
        w1[i] = std::polar(1.0, -two_pi * lat.coord_1(i) * xs1);
    for (std::size_t j = 0; j < lat.count_2; ++j)
        w2[j] = std::polar(1.0, -two_pi * lat.coord_2(j) * xs2);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < lat.count_1; ++i) {
        cplx row = 0.0;
        for (std::size_t j = 0; j < lat.count_2; ++j)
            row += u0.field.samples[i * lat.count_2 + j] *
                   m0.samples[i * lat.count_2 + j] * w2[j];
        acc += row * w1[i];
    }
    const double sgn = lambda.half_plane() > 0 ? 1.0 : -1.0;
    return sgn / cplx(0.0, two_pi) * acc * cell;
}

ScatteringGrid::ScatteringGrid(const Lattice2D& lat) : xi_lattice(lat) {
    samples_plus.assign(rows_per_half() * lat.count_2, cplx(0.0, 0.0));
    samples_minus.assign(rows_per_half() * lat.count_2, cplx(0.0, 0.0));
}

cplx ScatteringGrid::node(std::size_t i, std::size_t j) const {
    const std::size_t half = rows_per_half();
    if (i < half) return samples_plus[i * xi_lattice.count_2 + j];
    return samples_minus[(i - half) * xi_lattice.count_2 + j];
}

cplx& ScatteringGrid::node(std::size_t i, std::size_t j) {
    const std::size_t half = rows_per_half();
    if (i < half) return samples_plus[i * xi_lattice.count_2 + j];
    return samples_minus[(i - half) * xi_lattice.count_2 + j];
}

cplx ScatteringGrid::node_mirror(std::size_t i, std::size_t j) const {
    return node(xi_lattice.reflect_1(i), xi_lattice.reflect_2(j));
}

cplx ScatteringGrid::eval_xi(double xi1, double xi2) const {
    if (xi1 == 0.0) return 0.0;
    const Lattice2D& lat = xi_lattice;
    const double h1 = lat.spacing_1(), h2 = lat.spacing_2();
    // Fractional row index; clamp interpolation to one half-plane.
    double fi = (xi1 + 0.5 * lat.length_1) / h1 - 0.5;
    double fj = (xi2 + 0.5 * lat.length_2) / h2 - 0.5;
    if (fi < -0.5 || fi > double(lat.count_1) - 0.5 || fj < -0.5 ||
        fj > double(lat.count_2) - 0.5)
        return 0.0; // outside the sampled box
    long i0 = long(std::floor(fi)), j0 = long(std::floor(fj));
    double wi = fi - double(i0), wj = fj - double(j0);
    const long half = long(lat.count_1) / 2;
    auto clamp_i = [&](long i) {
        // stay within the half-plane of xi1
        long lo = xi1 < 0.0 ? 0 : half;
        long hi = xi1 < 0.0 ? half - 1 : long(lat.count_1) - 1;
        return std::clamp(i, lo, hi);
    };
    auto clamp_j = [&](long j) { return std::clamp(j, 0L, long(lat.count_2) - 1); };
    long i1 = clamp_i(i0 + 1), j1 = clamp_j(j0 + 1);
    i0 = clamp_i(i0);
    j0 = clamp_j(j0);
    if (i0 == i1) wi = 0.0;
    if (j0 == j1) wj = 0.0;
    cplx v00 = node(std::size_t(i0), std::size_t(j0));
    cplx v01 = node(std::size_t(i0), std::size_t(j1));
    cplx v10 = node(std::size_t(i1), std::size_t(j0));
    cplx v11 = node(std::size_t(i1), std::size_t(j1));
    return (1.0 - wi) * ((1.0 - wj) * v00 + wj * v01) + wi * ((1.0 - wj) * v10 + wj * v11);
}

cplx ScatteringGrid::eval_lambda(cplx lambda) const {
    const double xi1 = -lambda.imag() / M_PI;
    const double xi2 = -2.0 * lambda.real() * lambda.imag() / M_PI;
    return eval_xi(xi1, xi2);
}

double ScatteringGrid::boundary_max() const {
    const Lattice2D& lat = xi_lattice;
    double m = 0.0;
    for (std::size_t j = 0; j < lat.count_2; ++j) {
        m = std::max(m, std::abs(node(0, j)));
        m = std::max(m, std::abs(node(lat.count_1 - 1, j)));
    }
    for (std::size_t i = 0; i < lat.count_1; ++i) {
        m = std::max(m, std::abs(node(i, 0)));
        m = std::max(m, std::abs(node(i, lat.count_2 - 1)));
    }
    return m;
}

double ScatteringGrid::measure_reality_violation() const {
    double m = 0.0;
    for (std::size_t i = 0; i < xi_lattice.count_1; ++i)
        for (std::size_t j = 0; j < xi_lattice.count_2; ++j)
            m = std::max(m, std::abs(node(i, j) - std::conj(node_mirror(i, j))));
    return m;
}

double ScatteringGrid::measure_sup_norm() const {
    double m = 0.0;
    for (std::size_t i = 0; i < xi_lattice.count_1; ++i)
        for (std::size_t j = 0; j < xi_lattice.count_2; ++j)
            m = std::max(m, std::abs(node(i, j)));
    return m;
}

ScatteringGrid build_scattering_grid(const InitialData& u0, const Lattice2D& xi_lattice,
                                     double tol) {
    ScatteringGrid grid(xi_lattice);
    for (std::size_t i = 0; i < xi_lattice.count_1; ++i) {
        const double xi1 = xi_lattice.coord_1(i);
        for (std::size_t j = 0; j < xi_lattice.count_2; ++j) {
            const double xi2 = xi_lattice.coord_2(j);
            SpectralParam lam(zeta_from_xi(xi1, xi2));
            ComplexField2D m0 = solve_m0(u0, lam, tol);
            grid.node(i, j) = scattering_value(u0, m0, lam);
        }
    }
    grid.reality_violation = grid.measure_reality_violation();
    grid.sup_norm = grid.measure_sup_norm();
    return grid;
}

ScatteringGrid born_scattering_grid(const InitialData& u0, const Lattice2D& xi_lattice) {
    ScatteringGrid grid(xi_lattice);
    ComplexField2D uhat = dft_forward(u0.field);
    const Lattice2D& lat = u0.field.lattice;
    for (std::size_t i = 0; i < xi_lattice.count_1; ++i) {
        const double xi1 = xi_lattice.coord_1(i);
        for (std::size_t j = 0; j < xi_lattice.count_2; ++j) {
            const double xi2 = xi_lattice.coord_2(j);
            // non-uniform evaluation of u0hat at (xi1, xi2)
            cplx acc = 0.0;
            for (std::size_t a = 0; a < lat.count_1; ++a) {
                const double x1 = lat.coord_1(a);
                cplx row = 0.0;
                for (std::size_t b = 0; b < lat.count_2; ++b)
                    row += u0.field.samples[a * lat.count_2 + b] *
                           std::polar(1.0, -two_pi * lat.coord_2(b) * xi2);
                acc += row * std::polar(1.0, -two_pi * x1 * xi1);
            }
            acc *= lat.spacing_1() * lat.spacing_2();
            const double sgn = xi1 < 0.0 ? 1.0 : -1.0; // sgn(lambda_I) = -sgn(xi1)
            grid.node(i, j) = sgn / cplx(0.0, two_pi) * acc;
        }
    }
    grid.reality_violation = grid.measure_reality_violation();
    grid.sup_norm = grid.measure_sup_norm();
    return grid;
}

double weighted_norm(const InitialData& u0, int p, int q) {
    const Lattice2D& lat = u0.field.lattice;
    ComplexField2D weighted(lat, Space::physical);
    for (std::size_t i = 0; i < lat.count_1; ++i)
        for (std::size_t j = 0; j < lat.count_2; ++j) {
            double w = std::pow(1.0 + std::abs(lat.coord_1(i)) + std::abs(lat.coord_2(j)),
                                double(p));
            weighted.at(i, j) = w * u0.field.at(i, j);
        }
    ComplexField2D what = dft_forward(weighted);
    const double cell = lat.spacing_1() * lat.spacing_2();
    double total = 0.0;
    for (int l1 = 0; l1 <= q; ++l1)
        for (int l2 = 0; l1 + l2 <= q; ++l2) {
            ComplexField2D d = what;
            spectral_derivative_inplace(d, l1, l2);
            ComplexField2D dx = dft_inverse(d);
            total += std::max(dx.max_abs(), dx.l1(cell));
        }
    return total;
}

} // namespace kpii
