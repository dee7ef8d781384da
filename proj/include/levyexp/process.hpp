#pragma once

// The four-parameter Levy process family whose Laplace exponent is a ratio
// of four gamma factors, plus the stable-process parameter rows that embed
// into it through the Lamperti transform.

#include <cmath>
#include <complex>
#include <string>

#include "levyexp/common.hpp"
#include "levyexp/gamma.hpp"
#include "levyexp/hyp2f1.hpp"

namespace levyexp {

struct HypergeometricParams {
    double beta;       // <= 1
    double gamma;      // in (0,1)
    double beta_hat;   // >= 0
    double gamma_hat;  // in (0,1)

    void validate() const {
        if (!(beta <= 1.0)) throw validation_error("params: need beta <= 1");
        if (!(gamma > 0.0 && gamma < 1.0)) throw validation_error("params: need gamma in (0,1)");
        if (!(beta_hat >= 0.0)) throw validation_error("params: need beta_hat >= 0");
        if (!(gamma_hat > 0.0 && gamma_hat < 1.0)) {
            throw validation_error("params: need gamma_hat in (0,1)");
        }
        if (!(std::isfinite(beta) && std::isfinite(beta_hat))) {
            throw validation_error("params: nonfinite value");
        }
    }

    double eta() const { return 1.0 - beta + gamma + beta_hat + gamma_hat; }
    // Total jump regularity; bounded variation iff < 1.
    double sigma() const { return gamma + gamma_hat; }

    // Space-inverted process -X has swapped roles of the two tails.
    HypergeometricParams dual() const { return {1.0 - beta_hat, gamma_hat, 1.0 - beta, gamma}; }
};

// Laplace exponent psi(z) = -[G(1-b+g-z)/G(1-b-z)] [G(bh+gh+z)/G(bh+z)],
// analytic on the strip Re z in (-bh, 1-b+g).
inline cplx psi(const HypergeometricParams& p, cplx z) {
    cplx lg = clgamma(cplx(1.0 - p.beta + p.gamma) - z) - clgamma(cplx(1.0 - p.beta) - z)
        + clgamma(cplx(p.beta_hat + p.gamma_hat) + z) - clgamma(cplx(p.beta_hat) + z);
    return -std::exp(lg);
}

// Real-argument psi as a signed log.  Outside the analyticity strip the
// meromorphic continuation is returned; at an exact pole of the continuation
// this throws (callers that can hit poles screen their arguments first).
inline SignedLog psi_signed(const HypergeometricParams& p, double z) {
    SignedLog n1 = lgamma_signed(1.0 - p.beta + p.gamma - z);
    SignedLog n2 = lgamma_signed(p.beta_hat + p.gamma_hat + z);
    SignedLog d1 = lgamma_signed(1.0 - p.beta - z);
    SignedLog d2 = lgamma_signed(p.beta_hat + z);
    if (n1.sign == 0 || n2.sign == 0) {
        if (d1.sign == 0 || d2.sign == 0) {
            throw convergence_error("psi: indeterminate gamma ratio at pole over pole");
        }
        throw convergence_error("psi: argument at a pole");
    }
    if (d1.sign == 0 || d2.sign == 0) return SignedLog::zero();
    return -((n1 / d1) * (n2 / d2));
}

// d/dz psi at real z through the digamma logarithmic derivative.
inline double psi_prime(const HypergeometricParams& p, double z) {
    SignedLog v = psi_signed(p, z);
    if (v.is_zero()) throw convergence_error("psi_prime: psi vanishes, use a regime formula");
    double l = -digamma(1.0 - p.beta + p.gamma - z) + digamma(1.0 - p.beta - z)
        + digamma(p.beta_hat + p.gamma_hat + z) - digamma(p.beta_hat + z);
    return v.value() * l;
}

enum class PathRegime { killed, drifts_plus, drifts_minus, oscillates };

struct Classification {
    PathRegime regime;
    double kill_rate;  // positive only in the killed regime
    double mean;       // E X_1 in the drifting regimes, 0 when oscillating,
                       // psi'(0) of the killed process otherwise
    bool bounded_variation;
};

inline Classification classify(const HypergeometricParams& p) {
    p.validate();
    Classification c;
    c.bounded_variation = p.sigma() < 1.0;
    bool b1 = p.beta == 1.0;
    bool bh0 = p.beta_hat == 0.0;
    if (!b1 && !bh0) {
        c.regime = PathRegime::killed;
        SignedLog q = (lgamma_signed(1.0 - p.beta + p.gamma) / lgamma_signed(1.0 - p.beta))
            * (lgamma_signed(p.beta_hat + p.gamma_hat) / lgamma_signed(p.beta_hat));
        c.kill_rate = q.value();
        c.mean = psi_prime(p, 0.0);
    } else if (b1 && !bh0) {
        c.regime = PathRegime::drifts_plus;
        c.kill_rate = 0.0;
        c.mean = (lgamma_signed(p.gamma) * lgamma_signed(p.beta_hat + p.gamma_hat)
                  / lgamma_signed(p.beta_hat)).value();
    } else if (!b1 && bh0) {
        c.regime = PathRegime::drifts_minus;
        c.kill_rate = 0.0;
        c.mean = -(lgamma_signed(p.gamma_hat) * lgamma_signed(1.0 - p.beta + p.gamma)
                   / lgamma_signed(1.0 - p.beta)).value();
    } else {
        c.regime = PathRegime::oscillates;
        c.kill_rate = 0.0;
        c.mean = 0.0;
    }
    return c;
}

// Wiener-Hopf pieces: -psi(z) = wh_ascending(p, -z) * wh_descending(p, z).
inline SignedLog wh_ascending(const HypergeometricParams& p, double z) {
    return gamma_ratio(1.0 - p.beta + p.gamma + z, 1.0 - p.beta + z);
}
inline SignedLog wh_descending(const HypergeometricParams& p, double z) {
    return gamma_ratio(p.beta_hat + p.gamma_hat + z, p.beta_hat + z);
}

// Levy measure density.  Behaves like |x|^{-1-gamma-gamma_hat} at 0 and
// decays exponentially in both tails.
inline double levy_density(const HypergeometricParams& p, double x) {
    if (x == 0.0) throw validation_error("levy_density: x must be nonzero");
    double e = p.eta();
    // 1 - e^{-|x|} via expm1 keeps the 2F1 argument accurate (and nonzero)
    // down to denormal x, where exp(-|x|) would round to 1.
    double u = -std::expm1(-std::fabs(x));
    if (x > 0.0) {
        SignedLog pre = -(lgamma_signed(e)
            / (lgamma_signed(e - p.gamma_hat) * lgamma_signed(-p.gamma)));
        double f = u > 0.1 ? hyp2f1(1.0 + p.gamma, e, e - p.gamma_hat, std::exp(-x))
                           : hyp2f1_near_one(1.0 + p.gamma, e, e - p.gamma_hat, u);
        return pre.value() * std::exp(-(1.0 - p.beta + p.gamma) * x) * f;
    }
    SignedLog pre = -(lgamma_signed(e)
        / (lgamma_signed(e - p.gamma) * lgamma_signed(-p.gamma_hat)));
    double f = u > 0.1 ? hyp2f1(1.0 + p.gamma_hat, e, e - p.gamma, std::exp(x))
                       : hyp2f1_near_one(1.0 + p.gamma_hat, e, e - p.gamma, u);
    return pre.value() * std::exp((p.beta_hat + p.gamma_hat) * x) * f;
}

// Strictly stable process normalized by E e^{i z X_1} = e^{-|z|^alpha} up to
// the skew phase; rho = P(X_1 > 0).
struct StableParams {
    double alpha;
    double rho;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 2.0)) throw validation_error("stable: need alpha in (0,2)");
        if (!(rho > 0.0 && rho < 1.0)) throw validation_error("stable: need rho in (0,1)");
        if (alpha > 1.0) {
            double lo = 1.0 - 1.0 / alpha, hi = 1.0 / alpha;
            if (!(rho >= lo && rho <= hi)) {
                throw validation_error("stable: rho outside the admissible band for alpha > 1");
            }
        }
    }
};

// Lamperti representations of the three path transforms of a stable process
// started from a positive point: killed on first entry into the negative
// half line, conditioned to stay positive, conditioned to hit zero
// continuously.  Each is a member of the four-parameter family; the rows
// must themselves be admissible, which excludes alpha*rho = 1 boundaries.
inline HypergeometricParams lamperti_stable_killed(const StableParams& s) {
    s.validate();
    double b = 1.0 - s.alpha * (1.0 - s.rho);
    HypergeometricParams p{b, s.alpha * s.rho, b, s.alpha * (1.0 - s.rho)};
    p.validate();
    return p;
}
inline HypergeometricParams lamperti_stable_up(const StableParams& s) {
    s.validate();
    HypergeometricParams p{1.0, s.alpha * s.rho, 1.0, s.alpha * (1.0 - s.rho)};
    p.validate();
    return p;
}
inline HypergeometricParams lamperti_stable_down(const StableParams& s) {
    s.validate();
    HypergeometricParams p{0.0, s.alpha * s.rho, 0.0, s.alpha * (1.0 - s.rho)};
    p.validate();
    return p;
}

// Closed form of the Laplace exponent for the killed row:
// psi(z) = Gamma(alpha - z) Gamma(1 + z) sin(pi (z - alpha(1-rho))) / pi.
inline double lamperti_killed_psi_closed(const StableParams& s, double z) {
    SignedLog g = lgamma_signed(s.alpha - z) * lgamma_signed(1.0 + z);
    return g.value() * std::sin(pi_v * (z - s.alpha * (1.0 - s.rho))) / pi_v;
}

}  // namespace levyexp
