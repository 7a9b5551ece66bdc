#include "kpii/cauchy.hpp"

#include <cmath>

#include "kpii/oscquad.hpp"
#include "kpii/quadrules.hpp"

namespace kpii {
namespace {

// zeta(xi) per node, cached per call site.
struct NodeGeometry {
    std::vector<cplx> zeta;
    std::vector<double> weight; // area_weight * cell area
};

NodeGeometry node_geometry(const Lattice2D& lat) {
    NodeGeometry g;
    g.zeta.resize(lat.size());
    g.weight.resize(lat.size());
    const double cell = lat.spacing_1() * lat.spacing_2();
    for (std::size_t i = 0; i < lat.count_1; ++i) {
        const double xi1 = lat.coord_1(i);
        for (std::size_t j = 0; j < lat.count_2; ++j) {
            const double xi2 = lat.coord_2(j);
            g.zeta[i * lat.count_2 + j] = zeta_from_xi(xi1, xi2);
            g.weight[i * lat.count_2 + j] = area_weight(xi1) * cell;
        }
    }
    return g;
}

} // namespace

std::vector<cplx> apply_T(const ScatteringGrid& S, const std::vector<cplx>& phi,
                          const Position& x, bool conj_flip) {
    const Lattice2D& lat = S.xi_lattice;
    if (phi.size() != lat.size())
        throw numeric_error("apply_T: phi not sampled on the grid lattice");
    std::vector<cplx> out(lat.size());
    for (std::size_t i = 0; i < lat.count_1; ++i) {
        const double xi1 = lat.coord_1(i);
        for (std::size_t j = 0; j < lat.count_2; ++j) {
            const double xi2 = lat.coord_2(j);
            const cplx lam = zeta_from_xi(xi1, xi2);
            const cplx e = std::exp(phase_exponent(x[0], x[1], x[2], lam));
            const cplx ph = conj_flip
                                ? phi[lat.reflect_1(i) * lat.count_2 + lat.reflect_2(j)]
                                : phi[i * lat.count_2 + j];
            out[i * lat.count_2 + j] = S.node(i, j) * e * ph;
        }
    }
    return out;
}

cplx apply_C(const Lattice2D& lat, const std::vector<cplx>& phi, cplx lambda_eval) {
    if (phi.size() != lat.size())
        throw numeric_error("apply_C: phi not sampled on the lattice");
    const double h1 = lat.spacing_1(), h2 = lat.spacing_2();
    const double cell = h1 * h2;

    // locate the cell whose zeta-image contains lambda_eval (if any)
    auto [lx1, lx2] = xi_from_zeta(lambda_eval);
    long si = -1, sj = -1;
    if (lx1 != 0.0) {
        double fi = (lx1 + 0.5 * lat.length_1) / h1 - 0.5;
        double fj = (lx2 + 0.5 * lat.length_2) / h2 - 0.5;
        long ii = std::lround(fi), jj = std::lround(fj);
        if (ii >= 0 && ii < long(lat.count_1) && jj >= 0 && jj < long(lat.count_2)) {
            si = ii;
            sj = jj;
        }
    }

    cplx acc = 0.0;
    for (std::size_t i = 0; i < lat.count_1; ++i) {
        const double xi1 = lat.coord_1(i);
        const double w = area_weight(xi1) * cell;
        for (std::size_t j = 0; j < lat.count_2; ++j) {
            if (long(i) == si && long(j) == sj) continue;
            const double xi2 = lat.coord_2(j);
            const cplx z = zeta_from_xi(xi1, xi2);
            acc += w * phi[i * lat.count_2 + j] / (z - lambda_eval);
        }
    }
    if (si >= 0) {
        // analytic integral of the linearized kernel over the singular cell
        const double xi1 = lat.coord_1(std::size_t(si));
        const double xi2 = lat.coord_2(std::size_t(sj));
        const cplx zc = zeta_from_xi(xi1, xi2);
        const cplx alpha = cplx(-xi2 / (2.0 * xi1 * xi1), -M_PI); // d zeta / d xi1
        const cplx beta = cplx(1.0 / (2.0 * xi1), 0.0);           // d zeta / d xi2
        // integral over the xi-cell of Jac(xi)/(zeta(xi)-lambda) with the map
        // linearized about the center; Jac = |Im(conj(alpha) beta)| equals
        // area_weight exactly, kept constant over the cell.
        cplx local = cell_cauchy_integral(alpha, beta, zc - lambda_eval, h1, h2);
        acc += area_weight(xi1) * local *
               phi[std::size_t(si) * lat.count_2 + std::size_t(sj)];
    }
    return -acc / M_PI;
}

EigenfunctionBatch neumann_m(const ScatteringGrid& S, const Position& x,
                             const NeumannOptions& opt) {
    const Lattice2D& lat = S.xi_lattice;
    NodeGeometry geo = node_geometry(lat);

    EigenfunctionBatch batch;
    batch.position = x;
    batch.lattice = lat;
    batch.values.assign(lat.size(), cplx(1.0, 0.0));

    const double sup_s = S.measure_sup_norm();
    if (sup_s == 0.0) {
        batch.order_reached = 0;
        return batch;
    }

    double prev_update = 0.0;
    int bad = 0;
    for (int it = 0; it < opt.n_max; ++it) {
        std::vector<cplx> tphi = apply_T(S, batch.values, x);
        // C applied at every lattice node: double loop with the singular-node
        // exclusion handled by index equality (node == evaluation point).
        std::vector<cplx> next(lat.size());
        for (std::size_t p = 0; p < lat.size(); ++p) {
            const cplx lam = geo.zeta[p];
            cplx acc = 0.0;
            for (std::size_t q = 0; q < lat.size(); ++q) {
                if (q == p) continue;
                acc += geo.weight[q] * tphi[q] / (geo.zeta[q] - lam);
            }
            // singular cell: analytic local integral around the node itself
            {
                const std::size_t i = p / lat.count_2, j = p % lat.count_2;
                const double xi1 = lat.coord_1(i), xi2 = lat.coord_2(j);
                const cplx alpha = cplx(-xi2 / (2.0 * xi1 * xi1), -M_PI);
                const cplx beta = cplx(1.0 / (2.0 * xi1), 0.0);
                acc += area_weight(xi1) * tphi[p] *
                       cell_cauchy_integral(alpha, beta, cplx(0.0, 0.0),
                                            lat.spacing_1(), lat.spacing_2());
            }
            next[p] = 1.0 - acc / M_PI;
        }
        double update = 0.0;
        for (std::size_t p = 0; p < lat.size(); ++p)
            update = std::max(update, std::abs(next[p] - batch.values[p]));
        batch.values.swap(next);
        batch.order_reached = it + 1;
        if (prev_update > 0.0) {
            const double ratio = update / prev_update;
            if (ratio >= 1.0) {
                if (++bad >= 2) throw no_contraction(ratio);
            } else {
                bad = 0;
            }
        }
        prev_update = update;
        if (update < opt.tol) {
            batch.residual = update;
            for (std::size_t p = 0; p < lat.size(); ++p)
                batch.norm_dev = std::max(batch.norm_dev, std::abs(batch.values[p] - 1.0));
            batch.kappa = batch.norm_dev / sup_s;
            return batch;
        }
    }
    throw max_iter_exceeded(opt.n_max, prev_update);
}

Dx1Result dx1_m(const ScatteringGrid& S, const Position& x, double tol, double h0) {
    auto diff_at = [&](double h) {
        Position xp = x, xm = x;
        xp[0] += h;
        xm[0] -= h;
        EigenfunctionBatch mp = neumann_m(S, xp);
        EigenfunctionBatch mm = neumann_m(S, xm);
        std::vector<cplx> d(mp.values.size());
        for (std::size_t k = 0; k < d.size(); ++k)
            d[k] = (mp.values[k] - mm.values[k]) / (2.0 * h);
        return d;
    };
    std::vector<cplx> dh = diff_at(h0);
    std::vector<cplx> dh2 = diff_at(0.5 * h0);
    Dx1Result r;
    r.values.resize(dh.size());
    double disc = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < dh.size(); ++k) {
        r.values[k] = (4.0 * dh2[k] - dh[k]) / 3.0;
        disc = std::max(disc, std::abs(dh2[k] - dh[k]));
        scale = std::max(scale, std::abs(r.values[k]));
    }
    r.extrapolation_error = disc / 3.0;
    if (r.extrapolation_error > 10.0 * tol * std::max(1.0, scale))
        throw step_too_large("dx1_m: Richardson disagreement " +
                             std::to_string(r.extrapolation_error) + " at step " +
                             std::to_string(h0));
    return r;
}

double max_phase_per_cell(const Lattice2D& lat, const Position& x) {
    // Only the x3 part of Theta is nonlinear in xi; the linear part acts as a
    // pure Fourier kernel whose lattice sum periodizes cleanly.  The x3 part
    // is what the fixed lattice cannot resolve at large |x3|.
    double worst = 0.0;
    for (std::size_t i = 0; i < lat.count_1; ++i) {
        const double xi1 = lat.coord_1(i);
        for (std::size_t j = 0; j < lat.count_2; ++j) {
            const double xi2 = lat.coord_2(j);
            const double d1 = 2.0 * M_PI * std::abs(x[2]) *
                              (0.75 * xi2 * xi2 / (xi1 * xi1) +
                               3.0 * M_PI * M_PI * xi1 * xi1);
            const double d2 = 2.0 * M_PI * std::abs(x[2]) * 1.5 * std::abs(xi2 / xi1);
            worst = std::max(worst, d1 * lat.spacing_1() + d2 * lat.spacing_2());
        }
    }
    return worst;
}

ReconstructionValue reconstruct_u(const ScatteringGrid& S, const Position& x,
                                  const ReconstructOptions& opt) {
    const Lattice2D& lat = S.xi_lattice;
    if (opt.auto_oscillatory && max_phase_per_cell(lat, x) > 0.8)
        return osc::reconstruct_tiled(S, x, opt.neumann_order_tiled);

    NodeGeometry geo = node_geometry(lat);
    EigenfunctionBatch m = neumann_m(S, x, opt.neumann);
    Dx1Result dm = dx1_m(S, x, opt.neumann.tol * 1e4, opt.fd_step);

    ReconstructionValue out;
    const cplx i_unit(0.0, 1.0);
    for (std::size_t p = 0; p < lat.size(); ++p) {
        const cplx z = geo.zeta[p];
        const double w = geo.weight[p];
        const std::size_t i = p / lat.count_2, j = p % lat.count_2;
        const cplx s = S.node(i, j);
        const cplx e = std::exp(phase_exponent(x[0], x[1], x[2], z));
        const cplx common = w * s * e;
        out.u1 += common * z.imag();
        out.u20 += common * z.imag() * (m.values[p] - 1.0);
        out.u21 += common * dm.values[p];
    }
    out.u1 *= 4.0 * i_unit / M_PI;
    out.u20 *= 4.0 * i_unit / M_PI;
    out.u21 *= -2.0 / M_PI;
    out.total = out.u1 + out.u20 + out.u21;
    out.imaginary_residue = std::abs(out.total.imag());
    return out;
}

} // namespace kpii
