#pragma once

#include <stdexcept>
#include <string>

namespace kpii {

// Exit-code classes used by the CLI: 2 config, 3 numeric, 4 io.
enum class errc { config = 2, numeric = 3, io = 4 };

class error : public std::runtime_error {
public:
    error(errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

struct config_error : error {
    explicit config_error(const std::string& m) : error(errc::config, m) {}
};
struct io_error : error {
    explicit io_error(const std::string& m) : error(errc::io, m) {}
};
struct numeric_error : error {
    explicit numeric_error(const std::string& m) : error(errc::numeric, m) {}
};

struct singular_coordinate : numeric_error {
    explicit singular_coordinate(const std::string& m = "coordinate map singular at xi1 = 0")
        : numeric_error(m) {}
};
struct real_axis_undefined : numeric_error {
    explicit real_axis_undefined(const std::string& m = "scattering data undefined on the real axis")
        : numeric_error(m) {}
};
struct no_contraction : numeric_error {
    double ratio;
    explicit no_contraction(double r)
        : numeric_error("fixed-point iteration not contracting, ratio " + std::to_string(r)),
          ratio(r) {}
};
struct max_iter_exceeded : numeric_error {
    double residual;
    max_iter_exceeded(int iters, double res)
        : numeric_error("no convergence after " + std::to_string(iters) +
                        " iterations, residual " + std::to_string(res)),
          residual(res) {}
};
struct step_too_large : numeric_error {
    explicit step_too_large(const std::string& m) : numeric_error(m) {}
};
struct invalid_cone : numeric_error {
    explicit invalid_cone(const std::string& m = "cone frame requires x3 < 0") : numeric_error(m) {}
};
struct degenerate_phase : numeric_error {
    explicit degenerate_phase(const std::string& m = "a = 0: degenerate phase, no stationary points")
        : numeric_error(m) {}
};
struct outside_asymptotic_regime : numeric_error {
    explicit outside_asymptotic_regime(const std::string& m = "|a| below regime threshold")
        : numeric_error(m) {}
};
struct resolution_insufficient : numeric_error {
    double estimate;
    resolution_insufficient(double est, const std::string& m)
        : numeric_error(m), estimate(est) {}
};
struct degenerate_stationary_point : numeric_error {
    explicit degenerate_stationary_point(const std::string& m = "second derivative vanishes")
        : numeric_error(m) {}
};
struct insufficient_data : numeric_error {
    explicit insufficient_data(const std::string& m = "too few usable samples for a decay fit")
        : numeric_error(m) {}
};
struct cfl_violation : numeric_error {
    explicit cfl_violation(const std::string& m) : numeric_error(m) {}
};
struct blow_up : numeric_error {
    explicit blow_up(const std::string& m) : numeric_error(m) {}
};
struct inner_integral_nonconvergent : numeric_error {
    explicit inner_integral_nonconvergent(const std::string& m) : numeric_error(m) {}
};

} // namespace kpii
