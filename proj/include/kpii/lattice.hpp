#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "kpii/errors.hpp"

namespace kpii {

using cplx = std::complex<double>;

// Uniform periodic lattice, cell-centered on [-L/2, L/2): sample i sits at
// -L/2 + (i + 1/2) * spacing.  Counts must be even and >= 4 so the Nyquist
// mode is isolatable.
struct Lattice2D {
    double length_1 = 0.0, length_2 = 0.0;
    std::size_t count_1 = 0, count_2 = 0;

    Lattice2D() = default;
    Lattice2D(double L1, double L2, std::size_t n1, std::size_t n2)
        : length_1(L1), length_2(L2), count_1(n1), count_2(n2) {
        if (!(L1 > 0.0) || !(L2 > 0.0))
            throw config_error("lattice lengths must be positive");
        if (n1 < 4 || n2 < 4 || n1 % 2 != 0 || n2 % 2 != 0)
            throw config_error("lattice counts must be even and >= 4");
    }

    double spacing_1() const { return length_1 / double(count_1); }
    double spacing_2() const { return length_2 / double(count_2); }
    std::size_t size() const { return count_1 * count_2; }

    double coord_1(std::size_t i) const {
        return -0.5 * length_1 + (double(i) + 0.5) * spacing_1();
    }
    double coord_2(std::size_t j) const {
        return -0.5 * length_2 + (double(j) + 0.5) * spacing_2();
    }

    // Mode frequency k/L for storage index i, true k in [-N/2, N/2).
    double freq_1(std::size_t i) const {
        long k = long(i) < long(count_1 / 2) ? long(i) : long(i) - long(count_1);
        return double(k) / length_1;
    }
    double freq_2(std::size_t j) const {
        long k = long(j) < long(count_2 / 2) ? long(j) : long(j) - long(count_2);
        return double(k) / length_2;
    }

    // Index of the reflected sample point x -> -x (exact for cell-centered).
    std::size_t reflect_1(std::size_t i) const { return count_1 - 1 - i; }
    std::size_t reflect_2(std::size_t j) const { return count_2 - 1 - j; }

    bool operator==(const Lattice2D& o) const {
        return length_1 == o.length_1 && length_2 == o.length_2 &&
               count_1 == o.count_1 && count_2 == o.count_2;
    }
};

enum class Space : unsigned char { physical = 0, spectral = 1 };

// Complex samples over a Lattice2D, row-major (i1 * count_2 + i2).
struct ComplexField2D {
    Lattice2D lattice;
    Space space = Space::physical;
    std::vector<cplx> samples;

    ComplexField2D() = default;
    ComplexField2D(const Lattice2D& lat, Space sp)
        : lattice(lat), space(sp), samples(lat.size(), cplx(0.0, 0.0)) {}

    cplx& at(std::size_t i, std::size_t j) { return samples[i * lattice.count_2 + j]; }
    const cplx& at(std::size_t i, std::size_t j) const {
        return samples[i * lattice.count_2 + j];
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& v : samples) m = std::max(m, std::abs(v));
        return m;
    }
    double max_abs_imag() const {
        double m = 0.0;
        for (const cplx& v : samples) m = std::max(m, std::abs(v.imag()));
        return m;
    }
    // Lattice L1 norm (physical space: cell measure h1*h2).
    double l1(double cell) const {
        double s = 0.0;
        for (const cplx& v : samples) s += std::abs(v);
        return s * cell;
    }
    double l2(double cell) const {
        double s = 0.0;
        for (const cplx& v : samples) s += std::norm(v);
        return std::sqrt(s * cell);
    }
};

} // namespace kpii
