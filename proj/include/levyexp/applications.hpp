#pragma once

// Distributions derived from strictly stable processes through the Lamperti
// transform and the exponential functional machinery: the running supremum at
// unit time, the entrance law of the process conditioned to stay positive,
// the entrance law of the excursion measure of the process reflected at its
// infimum, the lifetime of the process conditioned to hit zero continuously,
// and the entrance law and last passage time of the radial part of an
// isotropic stable process in dimension d.  Every density here has two
// independent computation routes (a display-form series and a transport of
// the generic density or closed-form Mellin transform); tests hold the routes
// together.  alpha = 1 is excluded throughout: it is exactly the
// gamma + gamma_hat = 1 boundary where both series expansions degenerate.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "levyexp/common.hpp"
#include "levyexp/gamma.hpp"
#include "levyexp/process.hpp"
#include "levyexp/mellin.hpp"
#include "levyexp/series.hpp"

namespace levyexp {

// Parameter set plus functional exponent: I = int_0^inf exp(-alpha xi_t) dt.
struct FunctionalSpec {
    HypergeometricParams params;
    double alpha;
};

// S_1^{-alpha} is distributed as the exponential functional of this spec.
inline FunctionalSpec supremum_spec(const StableParams& s) {
    s.validate();
    if (!(s.alpha * s.rho < 1.0)) {
        throw validation_error("supremum: need alpha * rho < 1");
    }
    double g = s.alpha * s.rho;
    HypergeometricParams p{g, g, g, s.alpha * (1.0 - s.rho)};
    p.validate();
    return {p, s.alpha};
}

namespace detail {

struct LatticeResult {
    double value = 0.0;
    double noise = 0.0;
    long long terms = 0;
};

// Direct summation over one (m, n) coefficient lattice.  The callback returns
// the full term in signed-log form; rows and the row index are cut once the
// running peak says further terms sit below the double-precision noise floor.
template <class Term>
LatticeResult lattice_sum(Term term, const char* what) {
    Kahan k;
    double peak = 0.0;
    long long cnt = 0;
    int dead_rows = 0;
    for (int m = 0; m < 400; ++m) {
        double row_peak = 0.0;
        int tiny = 0;
        bool row_done = false;
        for (int n = 0; n < 5000; ++n) {
            SignedLog t = term(m, n);
            ++cnt;
            if (!t.is_zero() && t.log_mag > 700.0) {
                throw convergence_error(std::string(what)
                    + ": term overflow, cancellation beyond double range");
            }
            double v = t.value();
            double av = std::fabs(v);
            k.add(v);
            peak = std::max(peak, av);
            row_peak = std::max(row_peak, av);
            if (av <= 1e-18 * peak + 1e-320) {
                if (++tiny >= 4 && n >= 4) { row_done = true; break; }
            } else {
                tiny = 0;
            }
        }
        if (!row_done) {
            throw convergence_error(std::string(what) + ": lattice row did not converge");
        }
        if (row_peak <= 1e-18 * peak + 1e-320) {
            if (++dead_rows >= 3) {
                return {k.s, peak * 1.1e-16 * std::sqrt(static_cast<double>(cnt)), cnt};
            }
        } else {
            dead_rows = 0;
        }
    }
    throw convergence_error(std::string(what) + ": lattice sum did not converge");
}

struct SeriesVal {
    bool usable = false;
    double value = 0.0;
    double err = std::numeric_limits<double>::infinity();
    long long terms = 0;
};

// Sum of an entire-type single-index series; terms carry their own prefactor.
// Unusable on overflow (the cancellation peak exceeds double range) so the
// caller can fall back to the other expansion.
template <class Term>
SeriesVal entire_sum(Term term, long long kmax) {
    Kahan k;
    double peak = 0.0;
    double max_log = 0.0;
    int tiny = 0;
    for (long long i = 0; i < kmax; ++i) {
        SignedLog t = term(i);
        if (!t.is_zero() && t.log_mag > 700.0) return {};
        double v = t.value();
        double av = std::fabs(v);
        k.add(v);
        peak = std::max(peak, av);
        if (av > 0.0) max_log = std::max(max_log, std::fabs(t.log_mag));
        if (av <= 1e-18 * peak + 1e-320) {
            if (++tiny >= 5 && i >= 6) {
                SeriesVal r;
                r.usable = true;
                r.value = k.s;
                // each term is built from a handful of lgamma evaluations whose
                // rounding scales with the magnitude of the logs, not machine
                // epsilon alone
                r.err = peak * 1.1e-16 * std::sqrt(static_cast<double>(i + 1))
                    * (1.0 + max_log);
                r.terms = i + 1;
                return r;
            }
        } else {
            tiny = 0;
        }
    }
    return {};
}

// Optimal truncation of a divergent expansion: stop at the envelope minimum,
// charge the first omitted envelope value as the error.  env is the smooth
// log-magnitude of the terms (oscillating sine factors excluded so exact
// zeros do not fake a minimum).
template <class Term, class Env>
SeriesVal envelope_sum(Term term, Env env, long long kmax) {
    long long kstop = 0;
    double best = env(0);
    int rising = 0;
    for (long long i = 1; i < kmax; ++i) {
        double e = env(i);
        if (e < best) {
            best = e;
            kstop = i;
            rising = 0;
            // terms below the double underflow floor cannot contribute
            if (e < -760.0) break;
        } else if (++rising >= 8) {
            break;
        }
    }
    Kahan k;
    double peak = 0.0;
    for (long long i = 0; i <= kstop; ++i) {
        SignedLog t = term(i);
        if (!t.is_zero() && t.log_mag > 700.0) return {};
        double v = t.value();
        k.add(v);
        peak = std::max(peak, std::fabs(v));
    }
    SeriesVal r;
    r.usable = true;
    r.value = k.s;
    r.err = std::exp(std::min(env(kstop + 1), 700.0))
        + peak * 1.1e-16 * std::sqrt(static_cast<double>(kstop + 1));
    r.terms = kstop + 1;
    return r;
}

inline double pick_route(const SeriesVal& a, const SeriesVal& b, const char* what) {
    const SeriesVal* best = nullptr;
    if (a.usable && (!b.usable || a.err <= b.err)) best = &a;
    else if (b.usable) best = &b;
    if (!best) {
        throw convergence_error(std::string(what) + ": no usable series route");
    }
    double v = best->value;
    // Defensive only: in the narrow window where the convergent family is
    // near its cancellation ceiling and the divergent one is truncated early,
    // the better route still carries ~1e-6 relative error; reject only a
    // genuine loss of the value.
    if (best->err > 3e-5 * std::max(std::fabs(v), 1e-280)) {
        throw convergence_error(std::string(what) + ": series error estimate too large");
    }
    if (v < 0.0) {
        if (v >= -(10.0 * best->err + 1e-300)) return 0.0;
        throw convergence_error(std::string(what) + ": cancellation left a negative density");
    }
    return v;
}

}  // namespace detail

// Supremum of a stable process over the unit time interval.  density and cdf
// go through the exponential functional of supremum_spec; moment(u) reads the
// Mellin transform directly.
class StableSupremum {
public:
    explicit StableSupremum(const StableParams& s)
        : stable_(s), spec_(supremum_spec(s)), mt_(spec_.params, spec_.alpha), table_(mt_) {}

    const StableParams& stable() const { return stable_; }
    const FunctionalSpec& spec() const { return spec_; }
    MellinTransform& mellin() { return mt_; }
    CoefficientTable& table() { return table_; }

    // d/dx P(S_1 <= x) = alpha x^{-1-alpha} p(x^{-alpha})
    double density(double x) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw validation_error("supremum density: need finite x > 0");
        }
        double a = spec_.alpha;
        double y = std::pow(x, -a);
        double p = levyexp::density(table_, y);
        return a * std::pow(x, -1.0 - a) * p;
    }

    // P(S_1 <= x) = P(I >= x^{-alpha}).  The c family integrated termwise over
    // (y, inf) gives the tail directly; the ab family integrated over (0, y)
    // gives the complement.  Route selection mirrors density(): run whichever
    // sides are plausibly conditioned and keep the smaller absolute error.
    double cdf(double x) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw validation_error("supremum cdf: need finite x > 0");
        }
        double a = spec_.alpha;
        if (std::fabs(a - 1.0) < 1e-8) {
            throw validation_error("supremum cdf: series undefined on the alpha = 1 boundary");
        }
        double y = std::pow(x, -a);
        DensityOptions o;
        double sigma = spec_.params.sigma();
        double nats = detail::cancellation_nats(sigma, spec_.alpha, y);
        detail::Family conv = sigma < 1.0 ? detail::Family::ab : detail::Family::c;
        detail::Family asym = sigma < 1.0 ? detail::Family::c : detail::Family::ab;

        detail::RouteEval rc, ra;
        if (nats <= o.nats_skip_convergent) {
            rc = detail::run_convergent(table_, conv, y, o, true);
        }
        if (nats > o.nats_try_asymptotic || !rc.ok || rc.est > 1e-8) {
            ra = detail::run_asymptotic(table_, asym, y, o, true);
        }
        auto as_cdf = [](detail::Family f, double v) {
            return f == detail::Family::c ? v : 1.0 - v;
        };
        double val = 0.0, err = std::numeric_limits<double>::infinity();
        if (rc.ok) {
            val = as_cdf(conv, rc.value);
            err = rc.est * std::fabs(rc.value);
        }
        if (ra.ok) {
            double e2 = ra.est * std::fabs(ra.value);
            if (e2 < err) {
                val = as_cdf(asym, ra.value);
                err = e2;
            }
        }
        if (!std::isfinite(val) || err > 1e-6) {
            throw convergence_error("supremum cdf: no series route below tolerance");
        }
        if (val < -1e-9 || val > 1.0 + 1e-9) {
            throw convergence_error("supremum cdf: value escaped [0, 1]");
        }
        return std::min(1.0, std::max(0.0, val));
    }

    // E[S_1^u] = M(1 - u/alpha) with M the Mellin transform of I; finite for
    // u in (-alpha rho, alpha), infinite at the endpoints
    double moment(double u) {
        double s = 1.0 - u / spec_.alpha;
        if (!(s > 0.0 && s < mt_.strip_upper())) {
            throw validation_error("supremum moment: order outside (-alpha rho, alpha)");
        }
        return mt_.mellin_signed(s).value();
    }

private:
    StableParams stable_;
    FunctionalSpec spec_;
    MellinTransform mt_;
    CoefficientTable table_;
};

// Entrance law at unit time of the stable process conditioned to stay
// positive, started from 0+.  The canonical route transports the generic
// density of the exponential functional of the conditioned process;
// density_series evaluates the display-form expansion directly.
class EntranceLaw {
public:
    explicit EntranceLaw(const StableParams& s)
        : stable_(s), params_(lamperti_stable_up(s)), mt_(params_, s.alpha), table_(mt_),
          // mean of the conditioned process, the norming constant of the
          // entrance law: psi'(0) = Gamma(alpha rho) Gamma(1 + alpha (1 - rho))
          norming_(std::tgamma(s.alpha * s.rho) * std::tgamma(1.0 + s.alpha * (1.0 - s.rho))) {}

    const StableParams& stable() const { return stable_; }
    MellinTransform& mellin() { return mt_; }
    CoefficientTable& table() { return table_; }
    double norming() const { return norming_; }

    // p_1(x) = x^{-1} p(1/x) / (alpha E), E the mean of the conditioned process
    double density(double x) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw validation_error("entrance law: need finite x > 0");
        }
        double p = levyexp::density(table_, 1.0 / x);
        return p / (stable_.alpha * norming_ * x);
    }

    // same function from the display series: for alpha < 1 the b lattice in
    // descending powers of x, for alpha > 1 the c lattice in ascending powers
    double density_series(double x) { return series_eval(x, 0.0); }

    // entrance law of the excursion measure of the process reflected at its
    // infimum: q_1(x) = x^{-alpha (1 - rho)} p_1(x)
    double excursion_density(double x) {
        return std::pow(x, -stable_.alpha * (1.0 - stable_.rho)) * density(x);
    }
    double excursion_density_series(double x) {
        return series_eval(x, -stable_.alpha * (1.0 - stable_.rho));
    }

private:
    double series_eval(double x, double extra_exponent) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw validation_error("entrance law: need finite x > 0");
        }
        double a = stable_.alpha;
        if (std::fabs(a - 1.0) < 1e-8) {
            throw validation_error("entrance law: series undefined on the alpha = 1 boundary");
        }
        double rho = stable_.rho;
        double lnx = std::log(x);
        double d = table_.delta();
        double lpref = -std::log(a * norming_);
        detail::LatticeResult r;
        if (a < 1.0) {
            double lp = lpref + (-1.0 - rho + extra_exponent) * lnx;
            r = detail::lattice_sum([&](int m, int n) {
                return table_.b(m, n) * SignedLog::from_log(lp - (m * d + n) * lnx, 1);
            }, "entrance law series");
        } else {
            double lp = lpref + (1.0 / a + extra_exponent) * lnx;
            r = detail::lattice_sum([&](int m, int n) {
                return table_.c(m, n) * SignedLog::from_log(lp + (m * d + n) * lnx, 1);
            }, "entrance law series");
        }
        if (r.noise > 1e-7 * std::max(std::fabs(r.value), 1e-30)) {
            throw convergence_error("entrance law series: cancellation noise too large");
        }
        return r.value;
    }

    StableParams stable_;
    HypergeometricParams params_;
    MellinTransform mt_;
    CoefficientTable table_;
    double norming_;
};

// Lifetime of the stable process conditioned to hit zero continuously,
// started from 1.  The lifetime is the exponential functional of the
// conditioned-to-stay-positive process of the sign-flipped stable process,
// so the density is the generic density() of that spec evaluated directly.
class HitZeroLifetime {
public:
    explicit HitZeroLifetime(const StableParams& s)
        : stable_(s), params_(lamperti_stable_up(StableParams{s.alpha, 1.0 - s.rho})),
          mt_(params_, s.alpha), table_(mt_) {}

    const StableParams& stable() const { return stable_; }
    MellinTransform& mellin() { return mt_; }
    CoefficientTable& table() { return table_; }

    double density(double t) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw validation_error("lifetime: need finite t > 0");
        }
        return levyexp::density(table_, t);
    }

    // display form: t^{1-rho} times the b lattice for alpha < 1,
    // t^{-1-1/alpha} times the c lattice for alpha > 1
    double density_series(double t) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw validation_error("lifetime: need finite t > 0");
        }
        double a = stable_.alpha;
        if (std::fabs(a - 1.0) < 1e-8) {
            throw validation_error("lifetime: series undefined on the alpha = 1 boundary");
        }
        double lnt = std::log(t);
        double d = table_.delta();
        detail::LatticeResult r;
        if (a < 1.0) {
            double lp = (1.0 - stable_.rho) * lnt;
            r = detail::lattice_sum([&](int m, int n) {
                return table_.b(m, n) * SignedLog::from_log(lp + (m * d + n) * lnt, 1);
            }, "lifetime series");
        } else {
            double lp = (-1.0 - 1.0 / a) * lnt;
            r = detail::lattice_sum([&](int m, int n) {
                return table_.c(m, n) * SignedLog::from_log(lp - (m * d + n) * lnt, 1);
            }, "lifetime series");
        }
        if (r.noise > 1e-7 * std::max(std::fabs(r.value), 1e-30)) {
            throw convergence_error("lifetime series: cancellation noise too large");
        }
        return r.value;
    }

    // E[T] = Mellin at s = 2, inside the strip only when alpha < 1
    double mean() {
        if (!(stable_.alpha < 1.0)) {
            throw validation_error("lifetime: no finite mean unless alpha < 1");
        }
        return mt_.mellin_signed(2.0).value();
    }

private:
    StableParams stable_;
    HypergeometricParams params_;
    MellinTransform mt_;
    CoefficientTable table_;
};

// Radial part of an isotropic stable process in R^d, normalized by
// E exp(i <l, Y_t>) = exp(-t |l|^alpha).  Transient when alpha < d; the
// half-norm process is self-similar with the hypergeometric parameter row
// below driving its Lamperti representation.
struct RadialSpec {
    double alpha;
    int d;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 2.0)) {
            throw validation_error("radial: need alpha in (0, 2)");
        }
        if (d < 1) throw validation_error("radial: need dimension d >= 1");
        if (!(alpha < static_cast<double>(d))) {
            throw validation_error("radial: need alpha < d for transience");
        }
    }
    // parameters of twice the Lamperti process; the functional exponent is alpha/2
    HypergeometricParams induced() const {
        return {1.0, alpha / 2.0, (d - alpha) / 2.0, alpha / 2.0};
    }
    double exponent() const { return alpha / 2.0; }
};

// Closed form of E[I^{s-1}] for the radial functional:
// Gamma(alpha/2)/Gamma((d-alpha)/2) * Gamma(s) Gamma((d-alpha s)/2) / Gamma(alpha s/2).
// All the double gamma factors of the general transform cancel into plain
// gamma ratios; simple poles at {-n}_{n>=1} and {(d+2m)/alpha}_{m>=0}.
inline cplx radial_mellin(const RadialSpec& r, cplx s) {
    r.validate();
    if (std::fabs(s.imag()) < 1e-9) {
        double re = s.real();
        if (re < 0.5) {
            double n = std::round(-re);
            if (n >= 1.0 && std::fabs(re + n) < 1e-10) {
                throw validation_error("radial mellin: s on the left pole lattice");
            }
        }
        double q = (re * r.alpha - r.d) / 2.0;
        double m = std::round(q);
        if (m >= 0.0 && std::fabs(q - m) < 1e-10 * r.alpha) {
            throw validation_error("radial mellin: s on the right pole lattice");
        }
    }
    double a = r.alpha, dd = static_cast<double>(r.d);
    cplx base = std::lgamma(a / 2.0) - std::lgamma((dd - a) / 2.0)
        + clgamma(cplx(dd / 2.0) - (a / 2.0) * s);
    if (std::abs(s) < 1e-8) {
        // removable point: Gamma(s)/Gamma(alpha s/2) -> (alpha/2) Gamma(1+s)/Gamma(1+alpha s/2)
        return std::exp(base + std::log(a / 2.0)
            + clgamma(cplx(1.0) + s) - clgamma(cplx(1.0) + (a / 2.0) * s));
    }
    return std::exp(base + clgamma(s) - clgamma((a / 2.0) * s));
}

// Density of the entrance law at unit time of the half-norm process started
// from 0+.  Two single-index expansions share the work: the integer-power
// family (descending powers of x) and the radial-pole family (ascending
// powers of x^{2/alpha}); whichever is convergent for the sign of alpha - 1
// is preferred, the other is truncated at its envelope minimum.
inline double radial_entrance_law(const RadialSpec& r, double x) {
    r.validate();
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw validation_error("radial entrance law: need finite x > 0");
    }
    double a = r.alpha, dd = static_cast<double>(r.d);
    if (std::fabs(a - 1.0) < 1e-8) {
        throw validation_error("radial entrance law: alpha = 1 boundary excluded");
    }
    double lnx = std::log(x);
    double lgd2 = std::lgamma(dd / 2.0);

    // integer family: 2 x^{-1} / (pi alpha Gamma(d/2)) *
    //   sum_{n>=1} sin(pi alpha n/2) Gamma(1+alpha n/2) Gamma((d+alpha n)/2) (-1)^{n+1}/n! x^{-n}
    double lpN = std::log(2.0) - std::log(pi_v * a) - lgd2 - lnx;
    auto envN = [=](long long i) {
        double n = static_cast<double>(i + 1);
        return lpN + std::lgamma(1.0 + a * n / 2.0) + std::lgamma((dd + a * n) / 2.0)
            - std::lgamma(n + 1.0) - n * lnx;
    };
    auto termN = [=](long long i) {
        double n = static_cast<double>(i + 1);
        double sn = std::sin(pi_v * a * n / 2.0);
        if (sn == 0.0) return SignedLog::zero();
        int sign = (sn > 0.0 ? 1 : -1) * (i % 2 == 0 ? 1 : -1);
        return SignedLog::from_log(envN(i) + std::log(std::fabs(sn)), sign);
    };

    // radial family: 4 x^{-1+d/alpha} / (alpha^2 Gamma(d/2)) *
    //   sum_{m>=0} Gamma((d+2m)/alpha)/Gamma((d+2m)/2) (-1)^m/m! x^{2m/alpha}
    double lpM = std::log(4.0) - 2.0 * std::log(a) - lgd2 + (dd / a - 1.0) * lnx;
    auto envM = [=](long long i) {
        double m = static_cast<double>(i);
        return lpM + std::lgamma((dd + 2.0 * m) / a) - std::lgamma((dd + 2.0 * m) / 2.0)
            - std::lgamma(m + 1.0) + (2.0 * m / a) * lnx;
    };
    auto termM = [=](long long i) {
        return SignedLog::from_log(envM(i), i % 2 == 0 ? 1 : -1);
    };

    detail::SeriesVal conv, asym;
    if (a < 1.0) {
        conv = detail::entire_sum(termN, 2000000);
        if (!conv.usable || conv.err > 1e-11 * std::max(std::fabs(conv.value), 1e-280)) {
            asym = detail::envelope_sum(termM, envM, 2000000);
        }
    } else {
        conv = detail::entire_sum(termM, 2000000);
        if (!conv.usable || conv.err > 1e-11 * std::max(std::fabs(conv.value), 1e-280)) {
            asym = detail::envelope_sum(termN, envN, 2000000);
        }
    }
    return detail::pick_route(conv, asym, "radial entrance law");
}

// Mellin transform of the last passage time over the sphere of the given
// radius: at radius 2 the closed form
// Gamma(s)/Gamma((d-alpha)/2) * Gamma((d-alpha s)/2) / Gamma(1-alpha(1-s)/2),
// rescaled by (radius/2)^{alpha (s-1)} through b^alpha U_r = U_{b r} in law.
inline cplx last_passage_mellin(const RadialSpec& r, cplx s, double radius = 2.0) {
    r.validate();
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw validation_error("last passage: need finite radius > 0");
    }
    if (std::fabs(s.imag()) < 1e-9) {
        double re = s.real();
        double n = std::round(-re);
        if (n >= 0.0 && std::fabs(re + n) < 1e-10) {
            throw validation_error("last passage mellin: s on the left pole lattice");
        }
        double q = (re * r.alpha - r.d) / 2.0;
        double m = std::round(q);
        if (m >= 0.0 && std::fabs(q - m) < 1e-10 * r.alpha) {
            throw validation_error("last passage mellin: s on the right pole lattice");
        }
    }
    double a = r.alpha, dd = static_cast<double>(r.d);
    cplx lg = clgamma(s) - std::lgamma((dd - a) / 2.0)
        + clgamma(cplx(dd / 2.0) - (a / 2.0) * s)
        - clgamma(cplx(1.0 - a / 2.0) + (a / 2.0) * s);
    return std::exp(lg + a * std::log(radius / 2.0) * (s - cplx(1.0)));
}

// Density of the last passage time over the sphere of the given radius.
// Same dual-expansion scheme as the entrance law: ascending integer powers
// of t against descending powers of t^{2/alpha} below t^{-d/alpha}.
inline double last_passage_density(const RadialSpec& r, double t, double radius = 2.0) {
    r.validate();
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw validation_error("last passage: need finite t > 0");
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw validation_error("last passage: need finite radius > 0");
    }
    double a = r.alpha, dd = static_cast<double>(r.d);
    if (std::fabs(a - 1.0) < 1e-8) {
        throw validation_error("last passage: alpha = 1 boundary excluded");
    }
    // b^alpha U_r = U_{b r} in law: evaluate the radius-2 density at k t
    double k = std::pow(2.0 / radius, a);
    double tb = k * t;
    double lnt = std::log(tb);
    double lgda = std::lgamma((dd - a) / 2.0);

    // integer family: 1/(pi Gamma((d-alpha)/2)) *
    //   sum_{n>=0} sin(pi alpha (1+n)/2) Gamma(alpha(1+n)/2) Gamma((d+alpha n)/2) (-1)^n/n! t^n
    double lpP = -std::log(pi_v) - lgda;
    auto envP = [=](long long i) {
        double n = static_cast<double>(i);
        return lpP + std::lgamma(a * (1.0 + n) / 2.0) + std::lgamma((dd + a * n) / 2.0)
            - std::lgamma(n + 1.0) + n * lnt;
    };
    auto termP = [=](long long i) {
        double n = static_cast<double>(i);
        double sn = std::sin(pi_v * a * (1.0 + n) / 2.0);
        if (sn == 0.0) return SignedLog::zero();
        int sign = (sn > 0.0 ? 1 : -1) * (i % 2 == 0 ? 1 : -1);
        return SignedLog::from_log(envP(i) + std::log(std::fabs(sn)), sign);
    };

    // radial family: 2 t^{-d/alpha} / (alpha Gamma((d-alpha)/2)) *
    //   sum_{m>=0} Gamma((d+2m)/alpha)/Gamma((d-alpha)/2+m+1) (-1)^m/m! t^{-2m/alpha}
    double lpQ = std::log(2.0) - std::log(a) - lgda - (dd / a) * lnt;
    auto envQ = [=](long long i) {
        double m = static_cast<double>(i);
        return lpQ + std::lgamma((dd + 2.0 * m) / a) - std::lgamma((dd - a) / 2.0 + m + 1.0)
            - std::lgamma(m + 1.0) - (2.0 * m / a) * lnt;
    };
    auto termQ = [=](long long i) {
        return SignedLog::from_log(envQ(i), i % 2 == 0 ? 1 : -1);
    };

    detail::SeriesVal conv, asym;
    if (a < 1.0) {
        conv = detail::entire_sum(termP, 2000000);
        if (!conv.usable || conv.err > 1e-11 * std::max(std::fabs(conv.value), 1e-280)) {
            asym = detail::envelope_sum(termQ, envQ, 2000000);
        }
    } else {
        conv = detail::entire_sum(termQ, 2000000);
        if (!conv.usable || conv.err > 1e-11 * std::max(std::fabs(conv.value), 1e-280)) {
            asym = detail::envelope_sum(termP, envP, 2000000);
        }
    }
    return k * detail::pick_route(conv, asym, "last passage density");
}

// One-shot wrappers for single evaluations; grid callers should hold the
// class instances so the coefficient tables persist.
inline double supremum_density(const StableParams& s, double x) {
    return StableSupremum(s).density(x);
}
inline double supremum_cdf(const StableParams& s, double x) {
    return StableSupremum(s).cdf(x);
}
inline double entrance_law_up(const StableParams& s, double x) {
    return EntranceLaw(s).density(x);
}
inline double excursion_entrance_law(const StableParams& s, double x) {
    return EntranceLaw(s).excursion_density(x);
}
inline double lifetime_density_down(const StableParams& s, double t) {
    return HitZeroLifetime(s).density(t);
}

}  // namespace levyexp
