#include "kpii/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace kpii {
namespace {

constexpr double two_pi = 2.0 * M_PI;

// FFTW plans keyed by shape; plan creation is not thread-safe, execution via
// fftw_execute_dft on fresh buffers is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    fftw_plan get(std::size_t n1, std::size_t n2, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_tuple(n1, n2, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<fftw_complex> buf(n1 * n2);
        fftw_plan p = fftw_plan_dft_2d(int(n1), int(n2), buf.data(), buf.data(), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

private:
    PlanCache() = default;
    std::mutex mu_;
    std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

// Twiddles mapping the cell-centered x-grid and centered k-range onto the
// plain FFTW index convention.  Forward:
//   fhat(k/L) = h e^{-2 pi i x_0 k / L} sum_j f_j e^{-2 pi i j k / N}
// with x_0 = -L/2 + h/2, applied per axis.
std::vector<cplx> axis_twiddle(std::size_t n, double L, int sign) {
    std::vector<cplx> w(n);
    const double x0 = -0.5 * L + 0.5 * L / double(n);
    for (std::size_t s = 0; s < n; ++s) {
        long k = long(s) < long(n / 2) ? long(s) : long(s) - long(n);
        double ph = double(sign) * (-two_pi) * x0 * double(k) / L;
        w[s] = std::polar(1.0, ph);
    }
    return w;
}

} // namespace

ComplexField2D dft_forward(const ComplexField2D& f) {
    if (f.space != Space::physical)
        throw numeric_error("dft_forward expects a physical-space field");
    const auto& lat = f.lattice;
    const std::size_t n1 = lat.count_1, n2 = lat.count_2;

    ComplexField2D out(lat, Space::spectral);
    out.samples = f.samples;
    fftw_plan p = PlanCache::instance().get(n1, n2, FFTW_FORWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(out.samples.data()),
                     reinterpret_cast<fftw_complex*>(out.samples.data()));

    const auto w1 = axis_twiddle(n1, lat.length_1, +1);
    const auto w2 = axis_twiddle(n2, lat.length_2, +1);
    const double scale = lat.spacing_1() * lat.spacing_2();
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            out.samples[i * n2 + j] *= scale * w1[i] * w2[j];
    return out;
}

ComplexField2D dft_inverse(const ComplexField2D& fhat) {
    if (fhat.space != Space::spectral)
        throw numeric_error("dft_inverse expects a spectral-space field");
    const auto& lat = fhat.lattice;
    const std::size_t n1 = lat.count_1, n2 = lat.count_2;

    ComplexField2D out(lat, Space::physical);
    const auto w1 = axis_twiddle(n1, lat.length_1, -1);
    const auto w2 = axis_twiddle(n2, lat.length_2, -1);
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            out.samples[i * n2 + j] = fhat.samples[i * n2 + j] * w1[i] * w2[j];

    fftw_plan p = PlanCache::instance().get(n1, n2, FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(out.samples.data()),
                     reinterpret_cast<fftw_complex*>(out.samples.data()));

    const double scale = 1.0 / (lat.length_1 * lat.length_2);
    for (cplx& v : out.samples) v *= scale;
    return out;
}

void spectral_derivative_inplace(ComplexField2D& fhat, int l1, int l2) {
    if (fhat.space != Space::spectral)
        throw numeric_error("spectral derivative expects a spectral-space field");
    const auto& lat = fhat.lattice;
    for (std::size_t i = 0; i < lat.count_1; ++i) {
        cplx m1 = 1.0;
        if (l1 > 0) m1 = std::pow(cplx(0.0, two_pi * lat.freq_1(i)), l1);
        for (std::size_t j = 0; j < lat.count_2; ++j) {
            cplx m = m1;
            if (l2 > 0) m *= std::pow(cplx(0.0, two_pi * lat.freq_2(j)), l2);
            fhat.samples[i * lat.count_2 + j] *= m;
        }
    }
}

} // namespace kpii
