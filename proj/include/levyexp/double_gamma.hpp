#pragma once

// Barnes double gamma G(z; tau) for tau > 0 in log form.
//
// log G = u z + v z^2 + P(z) where
//   P(z) = log(z/tau) - log Gamma(1+z) - euler_gamma z + (pi^2/12) z^2
//        + sum_{m>=1} [ log Gamma(m tau) - log Gamma(m tau + z)
//                       + z psi(m tau) + (z^2/2) psi'(m tau) ]
// and u, v are fixed once per tau by requiring G(1) = 1 and the shift
// G(2) = Gamma(1/tau) G(1).  The m-sum is truncated at
// M = max(32, 32/tau, 4|z|/tau) + 2 and the remainder handled by
// Euler-Maclaurin with every piece in closed form: past M the summand is an
// explicit power series in 1/(m tau) (big log Gamma terms cancel exactly),
// so the tail integral and derivative corrections reduce to finite sums.
// Direct evaluation of the summand out there would lose all precision to
// cancellation; the series form is the load-bearing detail.

#include <cmath>
#include <complex>

#include "levyexp/common.hpp"
#include "levyexp/gamma.hpp"

namespace levyexp {

namespace detail {

inline constexpr int dg_tail_K = 28;  // |z|/(m tau) <= 1/4 makes k=28 reach ~1e-17

// Coefficients c_k of the asymptotic summand F(x;z) = sum_{k>=2} c_k x^{-k},
// where F(x;z) = logG(x) - logG(x+z) + z psi(x) + (z^2/2) psi'(x).
// Assembled from the Stirling series of each piece; the x^{-1} contribution
// cancels identically, which is a good transcription check.
template <class T>
void dg_tail_coeffs(T z, T* c) {
    constexpr int K = dg_tail_K;
    for (int k = 0; k <= K; ++k) c[k] = T(0);
    T zp[K + 3];
    zp[0] = T(1);
    for (int i = 1; i <= K + 2; ++i) zp[i] = zp[i - 1] * z;
    for (int k = 2; k <= K; ++k) {
        double sk = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^{k+1}
        T v = sk * zp[k + 1] / double(k + 1);
        v += (-sk) * (z - T(0.5)) * zp[k] / double(k);
        if (k == 2) v += zp[2] * 0.25;
        c[k] = v;
    }
    for (int j = 1; j <= 5; ++j) {
        double B = bern2j[j - 1];
        if (2 * j <= K) c[2 * j] += -z * (B / (2.0 * j));
        if (2 * j + 1 <= K) c[2 * j + 1] += zp[2] * (B * 0.5);
        double binom = 1.0;
        for (int i = 1; i <= K - 2 * j + 1; ++i) {
            binom *= double(1 - 2 * j - (i - 1)) / double(i);
            int k = 2 * j - 1 + i;
            if (k >= 2 && k <= K) {
                c[k] += (-B / (2.0 * j * (2.0 * j - 1.0)) * binom) * zp[i];
            }
        }
    }
}

// sum_{m=M+1}^inf F(m tau; z) via Euler-Maclaurin, all terms closed form.
template <class T>
T dg_tail(T z, double tau, int M) {
    constexpr int K = dg_tail_K;
    T c[K + 1];
    dg_tail_coeffs(z, c);
    double a = M + 1.0;
    double y = tau * a;
    double yp = 1.0 / y;
    T tot(0);
    double ymk = yp * yp;  // y^{-k} running from k = 2
    for (int k = 2; k <= K; ++k) {
        double kk = k;
        double integ = (1.0 / tau) * ymk * y / (kk - 1.0);
        double d1 = tau * (-kk) * ymk * yp;
        double d3 = tau * tau * tau * (-kk * (kk + 1.0) * (kk + 2.0)) * ymk * yp * yp * yp;
        double d5 = std::pow(tau, 5) * (-kk * (kk + 1.0) * (kk + 2.0) * (kk + 3.0) * (kk + 4.0))
            * ymk * std::pow(yp, 5);
        double d7 = std::pow(tau, 7)
            * (-kk * (kk + 1.0) * (kk + 2.0) * (kk + 3.0) * (kk + 4.0) * (kk + 5.0) * (kk + 6.0))
            * ymk * std::pow(yp, 7);
        tot += c[k] * (integ + ymk / 2.0 - d1 / 12.0 + d3 / 720.0 - d5 / 30240.0 + d7 / 1209600.0);
        ymk *= yp;
    }
    return tot;
}

inline int dg_terms(double abs_z, double tau) {
    double m = 32.0;
    m = std::max(m, 32.0 / tau);
    m = std::max(m, 4.0 * abs_z / tau);
    return static_cast<int>(m) + 2;
}

}  // namespace detail

class DoubleGammaEvaluator {
public:
    explicit DoubleGammaEvaluator(double tau) : tau_(tau) {
        if (!(tau > 0.0) || !std::isfinite(tau)) {
            throw validation_error("double gamma: tau must be positive and finite");
        }
        int s1 = 0, s2 = 0;
        double p1 = p_real(1.0, s1);
        double p2 = p_real(2.0, s2);
        v_ = 0.5 * (std::lgamma(1.0 / tau) - p2 + 2.0 * p1);
        u_ = -p1 - v_;
    }

    double tau() const { return tau_; }

    // log G(z; tau).  May be off the principal branch by 2 pi i k; callers
    // exponentiate sums and differences, where that cancels.
    cplx log_g(cplx z) const {
        return cplx(u_) * z + cplx(v_) * z * z + p_cplx(z);
    }

    // G(z; tau) for real z with explicit sign; zeros at z = -(m tau + n),
    // m, n >= 0, come back as exact signed-log zero.
    SignedLog g_signed(double z) const {
        if (z == 0.0) return SignedLog::zero();
        int sign = 0;
        double p = p_real(z, sign);
        if (sign == 0) return SignedLog::zero();
        return SignedLog::from_log(u_ * z + v_ * z * z + p, sign);
    }

private:
    double tau_;
    double u_ = 0.0, v_ = 0.0;

    double p_real(double z, int& sign) const {
        sign = 1;
        if (z < 0.0) sign = -1;  // z/tau factor
        SignedLog g1 = lgamma_signed(1.0 + z);
        if (g1.sign == 0) { sign = 0; return 0.0; }  // zero of G at negative integers
        sign *= g1.sign;
        double s = std::log(std::fabs(z) / tau_) - g1.log_mag - euler_gamma_v * z
            + pi_v * pi_v / 12.0 * z * z;
        int M = detail::dg_terms(std::fabs(z), tau_);
        for (int m = 1; m <= M; ++m) {
            double x = m * tau_;
            SignedLog gz = lgamma_signed(x + z);
            if (gz.sign == 0) { sign = 0; return 0.0; }
            sign *= gz.sign;
            s += std::lgamma(x) - gz.log_mag + z * digamma(x) + 0.5 * z * z * trigamma(x);
        }
        return s + detail::dg_tail(z, tau_, M);
    }

    cplx p_cplx(cplx z) const {
        cplx s = std::log(z / tau_) - clgamma(cplx(1.0) + z) - euler_gamma_v * z
            + pi_v * pi_v / 12.0 * z * z;
        int M = detail::dg_terms(std::abs(z), tau_);
        for (int m = 1; m <= M; ++m) {
            double x = m * tau_;
            s += std::lgamma(x) - clgamma(x + z) + z * digamma(x) + 0.5 * z * z * trigamma(x);
        }
        return s + detail::dg_tail(z, tau_, M);
    }
};

}  // namespace levyexp
