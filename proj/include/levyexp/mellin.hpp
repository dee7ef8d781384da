#pragma once

// Mellin transform s -> E[I^{s-1}] of the exponential functional
// I = int_0^zeta e^{-alpha xi_t} dt of a hypergeometric Levy process xi,
// expressed through Barnes double gamma functions of modulus 1/alpha.  The
// transform factors as Gamma(s) * M(s) where M is entire-of-ratio form; M is
// normalized so M(1) = 1.  I is a.s. finite iff the process drifts to
// +infinity or is killed, which under admissibility means beta_hat > 0.

#include <cmath>
#include <complex>

#include "levyexp/common.hpp"
#include "levyexp/double_gamma.hpp"
#include "levyexp/gamma.hpp"
#include "levyexp/process.hpp"

namespace levyexp {

class MellinTransform {
public:
    MellinTransform(const HypergeometricParams& p, double alpha)
        : params_(p),
          alpha_(alpha),
          delta_(1.0 / alpha),
          tilde_{p.beta / alpha, p.gamma / alpha, p.beta_hat / alpha, p.gamma_hat / alpha},
          dg_(1.0 / alpha) {
        p.validate();
        if (!(alpha > 0.0)) throw validation_error("mellin: need alpha > 0");
        if (!(p.beta_hat > 0.0)) {
            throw validation_error(
                "mellin: exponential functional diverges unless the process is killed "
                "or drifts to +infinity (beta_hat > 0)");
        }
        a1_ = (1.0 - p.beta) * delta_;
        a2_ = (1.0 - p.beta + p.gamma) * delta_;
        b1_ = (p.beta_hat + p.gamma_hat) * delta_ + 1.0;
        b2_ = p.beta_hat * delta_ + 1.0;
        // normalize M(1) = 1; all four arguments are positive there
        log_c_ = -(dg_.log_g(cplx(a1_ + 1.0)).real() - dg_.log_g(cplx(a2_ + 1.0)).real()
                   + dg_.log_g(cplx(b1_ - 1.0)).real() - dg_.log_g(cplx(b2_ - 1.0)).real());
    }

    const HypergeometricParams& params() const { return params_; }
    double alpha() const { return alpha_; }
    double delta() const { return delta_; }

    // M(s) = E[I^{s-1}] / Gamma(s) is analytic on Re s in (0, strip_upper());
    // the full transform Gamma(s) M(s) is analytic there too.
    double strip_upper() const { return 1.0 + params_.beta_hat * delta_; }

    // log M(s), up to an integer multiple of 2 pi i
    cplx log_m(cplx s) const {
        return log_c_ + dg_.log_g(a1_ + s) - dg_.log_g(a2_ + s)
            + dg_.log_g(b1_ - s) - dg_.log_g(b2_ - s);
    }
    cplx m(cplx s) const { return std::exp(log_m(s)); }

    SignedLog m_signed(double s) const {
        SignedLog n1 = dg_.g_signed(a1_ + s);
        SignedLog n2 = dg_.g_signed(b1_ - s);
        SignedLog d1 = dg_.g_signed(a2_ + s);
        SignedLog d2 = dg_.g_signed(b2_ - s);
        if (d1.is_zero() || d2.is_zero()) {
            if (n1.is_zero() || n2.is_zero()) {
                throw convergence_error("mellin: indeterminate zero/zero evaluation");
            }
            throw convergence_error("mellin: transform evaluated at a pole");
        }
        SignedLog r = (n1 * n2) / (d1 * d2);
        return SignedLog::from_log(r.log_mag + log_c_, r.sign);
    }

    // Gamma(s) M(s)
    cplx log_mellin(cplx s) const { return clgamma(s) + log_m(s); }
    cplx mellin(cplx s) const { return std::exp(log_mellin(s)); }
    SignedLog mellin_signed(double s) const { return lgamma_signed(s) * m_signed(s); }

    // pole lattices of Gamma(s) M(s): simple poles left of the strip at
    // pole_left(m, n) (and at -n from the Gamma factor), right of it at
    // pole_right(m, n), for irrational alpha
    double pole_left(int m, int n) const {
        return -(1.0 - params_.beta + params_.gamma) * delta_ - m * delta_ - n;
    }
    double pole_right(int m, int n) const {
        return 1.0 + params_.beta_hat * delta_ + m * delta_ + n;
    }

    // Laplace exponent of the 1/alpha-rescaled parameter set; appears as the
    // multiplier in the shift-by-delta functional equation
    const HypergeometricParams& tilde_params() const { return tilde_; }
    cplx tilde_psi(cplx z) const { return psi(tilde_, z); }
    SignedLog tilde_psi_signed(double z) const { return psi_signed(tilde_, z); }

    // transform of the 1/alpha-rescaled parameter set with exponent 1/alpha;
    // used by the rescaling functional equation (throws validation_error when
    // the rescaled parameters leave the admissible set, e.g. alpha < 1)
    MellinTransform rescaled() const { return MellinTransform(tilde_, delta_); }

    // residuals |lhs/rhs - 1| of the three functional equations; zero in exact
    // arithmetic on the strip
    double shift_one_residual(cplx s) const {
        // M(s + 1) = -M(s) / psi(-alpha s)
        cplx lhs = log_m(s + 1.0);
        cplx rhs = log_m(s) - std::log(-psi(params_, -alpha_ * s));
        return std::abs(std::exp(lhs - rhs) - 1.0);
    }
    double shift_delta_residual(cplx s) const {
        // M(s + delta) = -alpha^{-delta (gamma + gamma_hat)} M(s) / tilde_psi(1 - delta - s)
        double sig = params_.gamma + params_.gamma_hat;
        cplx lhs = log_m(s + delta_);
        cplx rhs = log_m(s) - delta_ * sig * std::log(alpha_)
            - std::log(-tilde_psi(1.0 - delta_ - s));
        return std::abs(std::exp(lhs - rhs) - 1.0);
    }
    double rescale_residual(cplx s, const MellinTransform& resc) const {
        // M(s) = alpha^{(1-s)(gamma + gamma_hat)} M_resc(1 - alpha + alpha s)
        double sig = params_.gamma + params_.gamma_hat;
        cplx lhs = log_m(s);
        cplx rhs = (1.0 - s) * sig * std::log(alpha_) + resc.log_m(1.0 - alpha_ + alpha_ * s);
        return std::abs(std::exp(lhs - rhs) - 1.0);
    }

    // residual of the reflection-type functional equation that relates the
    // transform across vertical lines a half-modulus left of the pole lattice:
    // with c_k = 1 - (1-beta+gamma) delta - delta/2 - k,
    //   Gamma M(c_k + iu) = (-1)^k Gamma M(c_k + k + iu)
    //       * prod_{j<k} cos(pi alpha (j - iu + gamma delta)) / cos(pi alpha (j - iu))
    //       * F(-iu) / F(-iu + k)
    double reflection_residual(int k, double u) const {
        const HypergeometricParams& p = params_;
        double ck = 1.0 - (1.0 - p.beta + p.gamma) * delta_ - delta_ / 2.0 - k;
        cplx s(ck, u);
        cplx lhs = log_mellin(s);
        cplx rhs = log_mellin(s + static_cast<double>(k)) + cplx(0.0, pi_v * k);
        for (int j = 0; j < k; ++j) {
            cplx w(static_cast<double>(j), -u);
            rhs += std::log(std::cos(pi_v * alpha_ * (w + p.gamma * delta_)))
                - std::log(std::cos(pi_v * alpha_ * w));
        }
        rhs += log_f_(cplx(0.0, -u)) - log_f_(cplx(static_cast<double>(k), -u));
        return std::abs(std::exp(lhs - rhs) - 1.0);
    }

private:
    cplx log_f_(cplx w) const {
        const HypergeometricParams& p = params_;
        double e = p.eta();
        return clgamma((1.0 - p.beta + p.gamma) * delta_ + delta_ / 2.0 + w)
            + dg_.log_g(1.5 * delta_ + w) - dg_.log_g((p.gamma + 1.5) * delta_ + w)
            + dg_.log_g((e - p.gamma_hat + 0.5) * delta_ + w)
            - dg_.log_g((e + 0.5) * delta_ + w);
    }

    HypergeometricParams params_;
    double alpha_;
    double delta_;
    HypergeometricParams tilde_;
    DoubleGammaEvaluator dg_;
    double a1_, a2_, b1_, b2_;
    double log_c_;
};

}  // namespace levyexp
