#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace levyexp {

inline constexpr double pi_v = 3.14159265358979323846264338327950288;
inline constexpr double euler_gamma_v = 0.57721566490153286060651209008240243;
inline constexpr double ln_2pi_v = 1.83787706640934548356065947281123527;

using cplx = std::complex<double>;

// Parameter or argument outside the allowed domain. CLI maps this to exit 2.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A series or iteration failed to reach its tolerance. CLI maps this to exit 3.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File / format problems. CLI maps this to exit 4.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Value stored as sign * exp(log_mag). sign == 0 means exact zero and the
// magnitude is ignored. Keeps products of wildly scaled Gamma factors stable.
struct SignedLog {
    double log_mag = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static SignedLog from_value(double v) {
        if (v == 0.0 || !std::isfinite(v)) {
            SignedLog r;
            if (std::isinf(v)) { r.log_mag = std::numeric_limits<double>::infinity(); r.sign = v > 0 ? 1 : -1; }
            if (std::isnan(v)) { r.log_mag = std::numeric_limits<double>::quiet_NaN(); r.sign = 1; }
            return r;
        }
        return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
    }
    static SignedLog from_log(double lm, int s) { return {lm, s}; }
    static SignedLog zero() { return {}; }
    static SignedLog one() { return {0.0, 1}; }

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }
    bool is_zero() const { return sign == 0; }

    friend SignedLog operator*(SignedLog a, SignedLog b) {
        if (a.sign == 0 || b.sign == 0) return zero();
        return {a.log_mag + b.log_mag, a.sign * b.sign};
    }
    friend SignedLog operator/(SignedLog a, SignedLog b) {
        if (a.sign == 0) return zero();
        return {a.log_mag - b.log_mag, a.sign * b.sign};
    }
    SignedLog operator-() const { return {log_mag, -sign}; }
};

// Relative gap that treats tiny absolute pairs as equal.
inline double rel_err(double got, double want) {
    double scale = std::max(std::fabs(want), 1e-300);
    return std::fabs(got - want) / scale;
}

inline double sq(double x) { return x * x; }

}  // namespace levyexp
