#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kpii/cauchy.hpp"
#include "kpii/fft.hpp"

using namespace kpii;

namespace {
Lattice2D desk_phys() { return Lattice2D(8.0, 8.0, 64, 64); }
Lattice2D desk_spec() { return Lattice2D(4.0, 4.0, 32, 32); }

const ScatteringGrid& desk_grid() {
    static ScatteringGrid g =
        build_scattering_grid(gaussian_datum(desk_phys(), 0.01), desk_spec(), 1e-11);
    return g;
}
} // namespace

TEST_CASE("apply_T: unit amplitude at x = 0, modulus law, zero data") {
    const ScatteringGrid& S = desk_grid();
    const Lattice2D& lat = S.xi_lattice;
    std::vector<cplx> one(lat.size(), cplx(1.0, 0.0));
    Position origin{0.0, 0.0, 0.0};
    auto t0 = apply_T(S, one, origin);
    for (std::size_t i = 0; i < lat.count_1; ++i)
        for (std::size_t j = 0; j < lat.count_2; ++j)
            CHECK(std::abs(t0[i * lat.count_2 + j] - S.node(i, j)) < 1e-15);

    // |T phi| = |s_c| |phi(mirror)| at every node
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> phi(lat.size());
    for (auto& v : phi) v = cplx(u(rng), u(rng));
    Position x{1.3, -0.4, -2.0};
    auto tphi = apply_T(S, phi, x);
    for (std::size_t i = 0; i < lat.count_1; ++i)
        for (std::size_t j = 0; j < lat.count_2; ++j) {
            double expect = std::abs(S.node(i, j)) *
                            std::abs(phi[lat.reflect_1(i) * lat.count_2 + lat.reflect_2(j)]);
            CHECK(std::abs(tphi[i * lat.count_2 + j]) ==
                  doctest::Approx(expect).epsilon(1e-12));
        }

    // zero scattering data
    ScatteringGrid zero(lat);
    auto tz = apply_T(zero, phi, x);
    for (const auto& v : tz) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("apply_C: odd-symmetry zero, disk oracle, conjugation symmetry") {
    // fine lattice so the zeta-image resolves the disk
    Lattice2D lat(4.0, 4.0, 96, 96);
    const double R = 1.5;
    std::vector<cplx> disk(lat.size());
    for (std::size_t i = 0; i < lat.count_1; ++i)
        for (std::size_t j = 0; j < lat.count_2; ++j) {
            cplx z = zeta_from_xi(lat.coord_1(i), lat.coord_2(j));
            disk[i * lat.count_2 + j] = std::abs(z) < R ? 1.0 : 0.0;
        }
    // at the center: odd symmetry of the kernel
    CHECK(std::abs(apply_C(lat, disk, cplx(0.0, 0.0))) < 2e-2);
    // outside: R^2 / lambda (hard indicator: boundary cells limit accuracy)
    for (cplx lam : {cplx(2.5, 0.7), cplx(-1.9, 1.8), cplx(0.2, -2.6)}) {
        cplx got = apply_C(lat, disk, lam);
        cplx expect = R * R / lam;
        CHECK(std::abs(got - expect) < 0.10 * std::abs(expect));
    }

    // smooth off-axis Gaussian blob: C phi(lambda) = (pi/k) / (pi (lambda - c))
    // exactly for lambda outside the support (circular averages of the kernel)
    {
        const cplx c(0.4, -1.1);
        const double k = 8.0;
        std::vector<cplx> blob(lat.size());
        for (std::size_t i = 0; i < lat.count_1; ++i)
            for (std::size_t j = 0; j < lat.count_2; ++j) {
                cplx z = zeta_from_xi(lat.coord_1(i), lat.coord_2(j));
                blob[i * lat.count_2 + j] = std::exp(-k * std::norm(z - c));
            }
        for (cplx lam : {cplx(2.9, -1.1), cplx(0.4, 1.4), cplx(-2.0, -2.0)}) {
            cplx got = apply_C(lat, blob, lam);
            cplx expect = 1.0 / (k * (lam - c));
            CHECK(std::abs(got - expect) < 2e-3 * std::abs(expect));
        }
    }
    // zero field
    std::vector<cplx> zero(lat.size(), cplx(0.0, 0.0));
    CHECK(std::abs(apply_C(lat, zero, cplx(0.4, 0.2))) == 0.0);

    // conj-symmetric phi: C(phi)(conj lambda) = conj(C(phi)(lambda))
    std::vector<cplx> sym(lat.size());
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < lat.count_1; ++i)
        for (std::size_t j = 0; j < lat.count_2; ++j) {
            std::size_t im = lat.reflect_1(i), jm = lat.reflect_2(j);
            if (i * lat.count_2 + j <= im * lat.count_2 + jm) {
                cplx v(u(rng), u(rng));
                sym[i * lat.count_2 + j] = v;
                sym[im * lat.count_2 + jm] = std::conj(v);
            }
        }
    cplx lam(0.8, 0.9);
    CHECK(std::abs(apply_C(lat, sym, std::conj(lam)) -
                   std::conj(apply_C(lat, sym, lam))) < 1e-12);
}

TEST_CASE("neumann: zero data, contraction structure, first iterate") {
    const Lattice2D lat = desk_spec();
    ScatteringGrid zero(lat);
    Position x{0.4, -0.2, 0.0};
    EigenfunctionBatch mz = neumann_m(zero, x);
    CHECK(mz.order_reached == 0);
    for (const auto& v : mz.values) CHECK(v == cplx(1.0, 0.0));

    const ScatteringGrid& S = desk_grid();
    EigenfunctionBatch m = neumann_m(S, x);
    CHECK(m.residual < 1e-10);
    CHECK(m.norm_dev <= m.kappa * S.measure_sup_norm() + 1e-15);
    MESSAGE("neumann order ", m.order_reached, ", K = ", m.kappa);
    CHECK(m.kappa < 50.0);

    // first iterate: m1 - 1 = C T 1 evaluated independently
    std::vector<cplx> one(lat.size(), cplx(1.0, 0.0));
    auto t1 = apply_T(S, one, x);
    for (std::size_t p : {std::size_t(100), std::size_t(517), std::size_t(900)}) {
        cplx lam = zeta_from_xi(lat.coord_1(p / lat.count_2), lat.coord_2(p % lat.count_2));
        cplx ct1 = apply_C(lat, t1, lam);
        // m - 1 = CT1 + O(eps^2)
        CHECK(std::abs(m.values[p] - 1.0 - ct1) < 5e-4 * std::max(1.0, std::abs(ct1)));
    }
}

TEST_CASE("dx1_m: zero data, Richardson order, step control") {
    const Lattice2D lat = desk_spec();
    ScatteringGrid zero(lat);
    Position x{0.1, 0.0, 0.0};
    Dx1Result z = dx1_m(zero, x);
    for (const auto& v : z.values) CHECK(std::abs(v) == 0.0);

    // central difference of a pure exponential e^{(lb-l) x1}: O(h^2), and the
    // halved step cuts the error ~4x
    const cplx lam(0.3, -0.8);
    const cplx dd = std::conj(lam) - lam;
    auto fd = [&](double h) {
        cplx num = (std::exp(dd * (0.7 + h)) - std::exp(dd * (0.7 - h))) / (2.0 * h);
        return std::abs(num - dd * std::exp(dd * 0.7));
    };
    double r = fd(0.02) / fd(0.01);
    CHECK(r == doctest::Approx(4.0).epsilon(0.05));

    const ScatteringGrid& S = desk_grid();
    Dx1Result d = dx1_m(S, x);
    CHECK(d.extrapolation_error < 1e-6);
}

TEST_CASE("round trip at x3 = 0: relative Linf error within 5 percent") {
    InitialData u0 = gaussian_datum(desk_phys(), 0.01);
    const ScatteringGrid& S = desk_grid();
    const Lattice2D ph = desk_phys();
    const double peak = u0.field.max_abs();

    double worst = 0.0, worst_im = 0.0;
    ReconstructOptions opt;
    opt.neumann.tol = 1e-8;
    for (std::size_t i = 4; i < ph.count_1; i += 9) {
        for (std::size_t j = 2; j < ph.count_2; j += 9) {
            Position x{ph.coord_1(i), ph.coord_2(j), 0.0};
            ReconstructionValue r = reconstruct_u(S, x, opt);
            worst = std::max(worst,
                             std::abs(r.total.real() - u0.field.at(i, j).real()));
            worst_im = std::max(worst_im, r.imaginary_residue);
        }
    }
    MESSAGE("round-trip relative Linf ", worst / peak, ", imag residue ", worst_im);
    CHECK(worst / peak <= 0.05);

    // zero data reconstructs to zero
    ScatteringGrid zero(desk_spec());
    ReconstructionValue rz = reconstruct_u(zero, Position{0.3, 0.1, 0.0}, opt);
    CHECK(std::abs(rz.total) == 0.0);

    // perturbation orders: |u20| + |u21| = O(eps^2) when |u1| = O(eps)
    ReconstructionValue r0 = reconstruct_u(S, Position{0.0625, 0.0625, 0.0}, opt);
    CHECK(std::abs(r0.u1) > 20.0 * (std::abs(r0.u20) + std::abs(r0.u21)));
}

TEST_CASE("perturbation scaling of u2 terms across epsilon") {
    Lattice2D ph = desk_phys(), sp = desk_spec();
    ReconstructOptions opt;
    opt.neumann.tol = 1e-9;
    Position x{0.5625, -0.4375, 0.0};
    double u2_1 = 0.0, u2_2 = 0.0, u1_1 = 0.0, u1_2 = 0.0;
    {
        ScatteringGrid g = build_scattering_grid(gaussian_datum(ph, 1e-2), sp, 1e-11);
        ReconstructionValue r = reconstruct_u(g, x, opt);
        u1_1 = std::abs(r.u1);
        u2_1 = std::abs(r.u20) + std::abs(r.u21);
    }
    {
        ScatteringGrid g = build_scattering_grid(gaussian_datum(ph, 5e-3), sp, 1e-11);
        ReconstructionValue r = reconstruct_u(g, x, opt);
        u1_2 = std::abs(r.u1);
        u2_2 = std::abs(r.u20) + std::abs(r.u21);
    }
    // u1 scales linearly, u2 quadratically (within ~15%)
    CHECK(u1_1 / u1_2 == doctest::Approx(2.0).epsilon(0.1));
    CHECK(u2_1 / u2_2 == doctest::Approx(4.0).epsilon(0.3));
}
