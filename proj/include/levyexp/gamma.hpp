#pragma once

// Real and complex gamma-family helpers sized for double precision.

#include <cmath>
#include <complex>

#include "levyexp/common.hpp"

namespace levyexp {

namespace detail {

// Lanczos coefficients, g = 607/128, n = 15 (Godfrey's set).
inline constexpr double lanczos_g = 4.7421875;
inline constexpr double lanczos_c[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    3.3994649984811888699e-5,
    4.6523628927048575665e-5,
    -9.8374475304879564677e-5,
    1.5808870322491248884e-4,
    -2.1026444172410488319e-4,
    2.1743961811521264320e-4,
    -1.6431810653676389022e-4,
    8.4418223983852743293e-5,
    -2.6190838401581408670e-5,
    3.6899182659531622704e-6,
};

// B_2 .. B_14
inline constexpr double bern2j[7] = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,
};

// log(sin(pi z)) without overflow for large |Im z|.  Only called with
// Im z >= 0; the identity sin w = -e^{-iw} (1 - e^{2iw}) / (2i) keeps the
// exponentials bounded there.  Result may be off the principal branch by
// 2*pi*i*k, which is harmless to callers that exponentiate.
inline cplx log_sin_pi_upper(cplx z) {
    cplx w = cplx(pi_v) * z;
    cplx e = std::exp(cplx(0.0, 2.0) * w);  // |e| <= 1 when Im w >= 0
    return cplx(0.0, -1.0) * w + std::log(e - cplx(1.0)) - std::log(cplx(0.0, 2.0));
}

}  // namespace detail

// log Gamma(z) for complex z.  May differ from the principal branch by an
// integer multiple of 2*pi*i; every caller here exponentiates (directly or
// after forming sums and differences), so only the value of exp matters.
inline cplx clgamma(cplx z) {
    using namespace detail;
    if (z.imag() < 0.0) return std::conj(clgamma(std::conj(z)));
    if (z.real() < 0.5) {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(cplx(pi_v)) - log_sin_pi_upper(z) - clgamma(cplx(1.0) - z);
    }
    cplx a(lanczos_c[0]);
    for (int i = 1; i < 15; ++i) a += lanczos_c[i] / (z + cplx(i - 1.0));
    cplx t = z + cplx(lanczos_g - 0.5);
    return 0.5 * ln_2pi_v + (z - cplx(0.5)) * std::log(t) - t + std::log(a);
}

// Gamma(x) for real x as sign * exp(log).  Poles at 0, -1, -2, ... come back
// with sign 0 and +inf magnitude so callers can branch on them.
inline SignedLog lgamma_signed(double x) {
    if (x > 0.0) return SignedLog::from_log(std::lgamma(x), 1);
    if (x == std::floor(x)) {
        return SignedLog{std::numeric_limits<double>::infinity(), 0};
    }
    // Gamma alternates sign between consecutive negative integers:
    // positive on (-2,-1), negative on (-1,0), ...
    long long fl = static_cast<long long>(std::floor(x));
    int sign = (fl % 2 == 0) ? 1 : -1;
    return SignedLog::from_log(std::lgamma(x), sign);
}

inline double gamma_real(double x) { return lgamma_signed(x).value(); }

inline double digamma(double x) {
    using namespace detail;
    if (x <= 0.0 && x == std::floor(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x < 0.5) {
        // psi(x) = psi(1-x) - pi cot(pi x)
        return digamma(1.0 - x) - pi_v / std::tan(pi_v * x);
    }
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    double inv2 = 1.0 / (x * x);
    double p = inv2;
    double s = std::log(x) - 0.5 / x;
    for (int j = 1; j <= 7; ++j) {
        s -= bern2j[j - 1] / (2.0 * j) * p;
        p *= inv2;
    }
    return acc + s;
}

inline double trigamma(double x) {
    using namespace detail;
    if (x <= 0.0 && x == std::floor(x)) return std::numeric_limits<double>::quiet_NaN();
    if (x < 0.5) {
        // psi'(x) + psi'(1-x) = pi^2 / sin^2(pi x)
        double s = std::sin(pi_v * x);
        return pi_v * pi_v / (s * s) - trigamma(1.0 - x);
    }
    double acc = 0.0;
    while (x < 10.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    double s = inv + 0.5 * inv2;
    double p = inv * inv2;
    for (int j = 1; j <= 7; ++j) {
        s += bern2j[j - 1] * p;
        p *= inv2;
    }
    return acc + s;
}

// Ratio Gamma(a)/Gamma(b) for real a, b as a signed log.  Either argument at
// a pole short-circuits: pole upstairs gives an infinite value, pole
// downstairs gives exact zero.
inline SignedLog gamma_ratio(double a, double b) {
    SignedLog ga = lgamma_signed(a);
    SignedLog gb = lgamma_signed(b);
    if (gb.sign == 0) return SignedLog::zero();
    if (ga.sign == 0) return SignedLog{std::numeric_limits<double>::infinity(), 0};
    return ga / gb;
}

}  // namespace levyexp
