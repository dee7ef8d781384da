#pragma once

// Independent checks for the analytic machinery.  Two routes that share no
// code with the series expansions: direct numerical inversion of the Mellin
// transform along a vertical contour, and Monte Carlo simulation of the
// underlying paths with explicit small-jump truncation.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "levyexp/common.hpp"
#include "levyexp/mellin.hpp"
#include "levyexp/process.hpp"
#include "levyexp/quadrature.hpp"

namespace levyexp {

// ------------------------------------------------------------- inversion

struct InversionResult {
    double value = 0.0;
    double imag_residual = 0.0;  // |Im| of the contour integral; ~0 by conjugate symmetry
    double tail_bound = 0.0;     // estimated modulus of the discarded |u| > T tail
    long long evaluations = 0;
};

// (1/2pi) int_{-T}^{T} f(c+iu) x^{-c-iu} du by the trapezoid rule with panel
// doubling; converged when two consecutive doublings agree, and the final
// Richardson correction is folded into the result.  f is any evaluator of a
// Mellin transform on the contour Re s = c.
template <class F>
InversionResult mellin_invert(F&& f, double x, double contour_re, double truncation,
                              double rel_tol = 1e-11) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw validation_error("mellin_invert: x must be positive and finite");
    }
    if (!(truncation > 0.0) || !std::isfinite(truncation)) {
        throw validation_error("mellin_invert: truncation must be positive and finite");
    }
    const double c = contour_re;
    const double T = truncation;
    const double lx = std::log(x);
    long long evals = 0;
    auto g = [&](double u) -> cplx {
        ++evals;
        // x^{-iu} = e^{-iu ln x}; the real factor x^{-c} is applied at the end
        return f(cplx(c, u)) * cplx(std::cos(u * lx), -std::sin(u * lx));
    };

    // enough initial panels to resolve both the x^{-iu} oscillation and the
    // gamma-phase oscillation (frequency ~ ln u near the truncation point)
    double per_unit = 8.0 + 1.2 * std::fabs(lx) + 2.0 * std::log1p(T);
    long long n = 64;
    while (static_cast<double>(n) < 2.0 * T * per_unit && n < (1LL << 18)) n <<= 1;

    cplx ends = 0.5 * (g(-T) + g(T));
    cplx interior = 0.0;
    double h = 2.0 * T / static_cast<double>(n);
    for (long long j = 1; j < n; ++j) {
        interior += g(-T + h * static_cast<double>(j));
    }
    cplx cur = h * (ends + interior);
    cplx best = cur;
    int agreements = 0;
    double err = std::abs(cur);
    while (true) {
        if (evals > (1LL << 22)) {
            throw convergence_error("mellin_invert: trapezoid refinement failed to settle");
        }
        for (long long j = 0; j < n; ++j) {
            interior += g(-T + h * (static_cast<double>(j) + 0.5));
        }
        n <<= 1;
        h *= 0.5;
        cplx next = h * (ends + interior);
        err = std::abs(next - cur);
        best = next + (next - cur) / 3.0;
        if (err <= rel_tol * std::max(std::abs(next), 1e-300)) {
            if (++agreements >= 1 && n >= 256) break;
        } else {
            agreements = 0;
        }
        cur = next;
    }

    const double xc = std::exp(-c * lx);
    InversionResult r;
    r.value = xc * best.real() / (2.0 * pi_v);
    r.imag_residual = xc * std::fabs(best.imag()) / (2.0 * pi_v);
    r.evaluations = evals;
    // decay-rate fit near the truncation point gives the discarded tail
    double mT = std::abs(f(cplx(c, T)));
    double mT8 = std::abs(f(cplx(c, 0.8 * T)));
    if (mT > 0.0 && mT8 > mT) {
        double rate = std::log(mT8 / mT) / (0.2 * T);
        r.tail_bound = xc * mT / (pi_v * rate);
    } else {
        r.tail_bound = xc * mT * T;  // no measurable decay: report a crude scale
    }
    return r;
}

// Density of the exponential functional by contour inversion of its Mellin
// transform.  Negative contour_re / truncation pick automatic values: the
// contour at half the strip height (capped at 1) and the truncation from an
// empirical fit of the exponential decay along the contour.
inline InversionResult invert_density_detail(const MellinTransform& mt, double x,
                                             double contour_re = -1.0,
                                             double truncation = -1.0,
                                             double rel_tol = 1e-11) {
    double up = mt.strip_upper();
    double c = contour_re;
    if (c < 0.0) c = 0.5 * std::min(2.0, up);
    if (!(c > 0.02 && c < up - 0.02)) {
        throw validation_error("invert_density: contour too close to the strip boundary poles");
    }
    double T = truncation;
    if (T < 0.0) {
        double m10 = std::abs(mt.mellin(cplx(c, 10.0)));
        double m30 = std::abs(mt.mellin(cplx(c, 30.0)));
        double m0 = std::abs(mt.mellin(cplx(c, 0.0)));
        if (!(m30 > 0.0) || !(m10 > m30)) {
            throw convergence_error("invert_density: no decay along the contour");
        }
        double rate = std::log(m10 / m30) / 20.0;
        if (rate < 0.02) {
            throw convergence_error("invert_density: transform decays too slowly along the contour");
        }
        double amp = m10 * std::exp(10.0 * rate);
        T = (std::log(amp / (2.0 * pi_v * rate * m0)) + std::log(1e12)) / rate;
        T = std::min(std::max(T, 30.0), 800.0);
    }
    InversionResult r = mellin_invert([&](cplx s) { return mt.mellin(s); }, x, c, T, rel_tol);
    if (r.imag_residual > 1e-6 * std::max(std::fabs(r.value), 1e-30)) {
        throw convergence_error("invert_density: imaginary residual of the contour integral too large");
    }
    return r;
}

inline double mellin_invert_density(const MellinTransform& mt, double x,
                                    double contour_re = -1.0, double truncation = -1.0) {
    return invert_density_detail(mt, x, contour_re, truncation).value;
}

// ------------------------------------------------------------------- rng

namespace rng {

inline std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// xoshiro256++ with one stream per path.  The state is derived from
// (seed, path) alone, so path i draws the same numbers no matter which
// thread runs it or in which order paths are processed.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t path) {
        std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ull * (path + 0x632BE59BD9B4E019ull));
        for (auto& w : s_) w = splitmix64(s);
    }
    std::uint64_t next() {
        std::uint64_t r = rotl(s_[0] + s_[3], 23) + s_[0];
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return r;
    }
    // open (0,1): never returns 0 or 1, so logs are safe
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
    double exponential() { return -std::log(uniform()); }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace rng

// ------------------------------------------------------------ simulation

enum class HorizonPolicy {
    auto_select,            // killed process: until_killed; otherwise drift criterion
    until_killed,           // run to the kill time (killed processes only)
    until_drift_dominates,  // stop when the remaining-integral bound is negligible
};

struct SimulationConfig {
    double jump_cutoff = 1e-3;  // jumps below this size are folded into the drift
    long long n_paths = 100000;
    HorizonPolicy horizon = HorizonPolicy::auto_select;
    double drift_threshold = 1e-12;  // remaining/accumulated ratio that ends a path
    std::uint64_t rng_seed = 20120815;
    int n_threads = 1;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample sd / sqrt(n_effective)
    long long n_effective = 0;
    bool heavy_tailed = false;  // kurtosis blowup or non-finite samples seen
};

// Samples jumps of size >= cutoff from the Levy measure.  Each side keeps an
// inverse-CDF table on a log-spaced grid over [cutoff, x_tail] with linear
// (hence monotone) interpolation, and an exact exponential-envelope rejection
// sampler for the tail, where the density is e^{-rate x} times a 2F1 factor
// that decreases monotonically to 1.
class JumpSampler {
public:
    JumpSampler(const HypergeometricParams& p, double cutoff) : p_(p) {
        p.validate();
        if (!(cutoff > 0.0 && cutoff < 1.0)) {
            throw validation_error("jump sampler: cutoff must be in (0,1)");
        }
        build(pos_, cutoff, +1, 1.0 - p.beta + p.gamma);
        build(neg_, cutoff, -1, p.beta_hat + p.gamma_hat);
        rate_ = pos_.rate + neg_.rate;
        mean_ = pos_.mean - neg_.mean;
    }

    double total_rate() const { return rate_; }
    // int_{|x| >= cutoff} x pi(x) dx
    double truncated_mean() const { return mean_; }

    double sample(rng::Stream& g) const {
        double u = g.uniform() * rate_;
        if (u < pos_.rate) return draw(pos_, +1, g);
        return -draw(neg_, -1, g);
    }

private:
    struct Side {
        double rate = 0.0;       // int_{cutoff}^{inf} of this side's density
        double mean = 0.0;       // int_{cutoff}^{inf} x density
        double body_mass = 0.0;  // mass on [cutoff, x_tail]
        double x_tail = 0.0;
        double tail_rate = 0.0;  // exact exponential decay rate of the tail
        double env_log = 0.0;    // log density(x_tail) + tail_rate * x_tail
        std::vector<double> xs, cdf;
    };

    double dens(int sign, double x) const { return levy_density(p_, sign > 0 ? x : -x); }

    void build(Side& s, double cutoff, int sign, double tail_rate) {
        constexpr int cells = 512;
        s.x_tail = 8.0;
        s.tail_rate = tail_rate;
        s.xs.resize(cells + 1);
        s.cdf.resize(cells + 1);
        double lr = std::log(s.x_tail / cutoff) / cells;
        for (int i = 0; i <= cells; ++i) s.xs[i] = cutoff * std::exp(lr * i);
        s.xs[cells] = s.x_tail;
        QuadOptions opt{1e-9, 1e-300, 200};
        auto f = [&](double x) { return dens(sign, x); };
        s.cdf[0] = 0.0;
        for (int i = 1; i <= cells; ++i) {
            s.cdf[i] = s.cdf[i - 1] + integrate(f, s.xs[i - 1], s.xs[i], opt);
        }
        s.body_mass = s.cdf[cells];
        double tail_mass = integrate_to_inf(f, s.x_tail, opt);
        s.rate = s.body_mass + tail_mass;
        auto xf = [&](double x) { return x * dens(sign, x); };
        s.mean = integrate(xf, cutoff, s.x_tail, opt) + integrate_to_inf(xf, s.x_tail, opt);
        s.env_log = std::log(dens(sign, s.x_tail)) + tail_rate * s.x_tail;
    }

    double draw(const Side& s, int sign, rng::Stream& g) const {
        double v = g.uniform() * s.rate;
        if (v >= s.body_mass) {
            // envelope rejection: density <= e^{env_log - tail_rate x} beyond x_tail
            for (int tries = 0; tries < 1000; ++tries) {
                double x = s.x_tail + g.exponential() / s.tail_rate;
                double logacc = std::log(dens(sign, x)) - (s.env_log - s.tail_rate * x);
                if (std::log(g.uniform()) <= logacc) return x;
            }
            throw convergence_error("jump sampler: tail rejection failed to accept");
        }
        auto it = std::upper_bound(s.cdf.begin(), s.cdf.end(), v);
        size_t i = std::max<size_t>(1, static_cast<size_t>(it - s.cdf.begin()));
        i = std::min(i, s.cdf.size() - 1);
        double f0 = s.cdf[i - 1], f1 = s.cdf[i];
        double t = f1 > f0 ? (v - f0) / (f1 - f0) : 0.5;
        return s.xs[i - 1] + t * (s.xs[i] - s.xs[i - 1]);
    }

    HypergeometricParams p_;
    Side pos_, neg_;
    double rate_ = 0.0, mean_ = 0.0;
};

namespace detail {

// exact integral of e^{-alpha(X + D s)} over s in [0, dt]
inline double segment_integral(double alpha, double x_now, double d, double dt) {
    double front = std::exp(-alpha * x_now);
    double w = alpha * d * dt;
    if (std::fabs(w) < 1e-12) return front * dt * (1.0 - 0.5 * w);
    return front * (-std::expm1(-w)) / (alpha * d);
}

template <class Body>
inline void parallel_paths(long long n, int n_threads, const Body& body) {
    int nt = std::max(1, n_threads);
    if (nt == 1) {
        for (long long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long long> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&]() {
        constexpr long long chunk = 64;
        for (;;) {
            long long lo = next.fetch_add(chunk);
            if (lo >= n) return;
            long long hi = std::min(n, lo + chunk);
            try {
                for (long long i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nt));
    for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// Simulates int_0^zeta e^{-alpha X_t} dt with jumps >= cutoff kept exactly
// (marked Poisson arrivals) and smaller jumps folded into a linear drift
// that restores the exact mean rate of the process.  Killing runs on an
// independent exponential clock.  Paths that drift to +infinity stop once
// the bound on the remaining integral drops below drift_threshold of the
// accumulated value.
inline std::vector<double> simulate_exponential_functional(const HypergeometricParams& p,
                                                           double alpha,
                                                           const SimulationConfig& cfg = {}) {
    p.validate();
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw validation_error("simulate: alpha must be positive");
    }
    if (cfg.n_paths <= 0) throw validation_error("simulate: n_paths must be positive");
    Classification cls = classify(p);
    HorizonPolicy pol = cfg.horizon;
    if (cls.regime == PathRegime::oscillates || cls.regime == PathRegime::drifts_minus) {
        throw validation_error(
            "simulate: the exponential functional diverges unless the process is killed "
            "or drifts to +infinity");
    }
    if (pol == HorizonPolicy::auto_select) {
        pol = cls.regime == PathRegime::killed ? HorizonPolicy::until_killed
                                               : HorizonPolicy::until_drift_dominates;
    }
    if (pol == HorizonPolicy::until_killed && cls.regime != PathRegime::killed) {
        throw validation_error("simulate: until_killed horizon needs a killed process");
    }

    JumpSampler sampler(p, cfg.jump_cutoff);
    const double lam = sampler.total_rate();
    const double q = cls.kill_rate;
    // cls.mean is psi'(0) in every non-oscillating regime; subtracting the
    // kept-jump mean leaves the small-jump compensation as the drift
    const double drift = cls.mean - sampler.truncated_mean();

    // scale of the expected remaining integral after reaching level X: the
    // exact first moment when it is finite, the deterministic-drift bound
    // otherwise
    double rem_scale = 0.0;
    if (alpha < p.beta_hat) {
        SignedLog pa = psi_signed(p, -alpha);
        if (pa.sign < 0) rem_scale = 1.0 / (-pa).value();
    }
    if (rem_scale == 0.0 && cls.mean > 0.0) rem_scale = 1.0 / (alpha * cls.mean);
    if (pol == HorizonPolicy::until_drift_dominates && rem_scale == 0.0) {
        throw validation_error("simulate: no usable bound on the remaining integral");
    }

    const double thr = cfg.drift_threshold;
    std::vector<double> out(static_cast<size_t>(cfg.n_paths));
    detail::parallel_paths(cfg.n_paths, cfg.n_threads, [&](long long i) {
        rng::Stream g(cfg.rng_seed, static_cast<std::uint64_t>(i));
        double x_now = 0.0, acc = 0.0;
        for (long long steps = 0;; ++steps) {
            if (steps > 50000000LL) {
                throw convergence_error("simulate: path failed to terminate");
            }
            double tj = g.exponential() / lam;
            if (q > 0.0) {
                double tk = g.exponential() / q;
                if (tk < tj) {
                    acc += detail::segment_integral(alpha, x_now, drift, tk);
                    break;
                }
            }
            acc += detail::segment_integral(alpha, x_now, drift, tj);
            x_now += drift * tj + sampler.sample(g);
            if (rem_scale > 0.0 && acc > 0.0) {
                double bound = std::exp(-alpha * x_now) * rem_scale;
                if (bound < thr * acc) break;
            }
        }
        out[static_cast<size_t>(i)] = acc;
    });
    return out;
}

// One increment of the stable process normalized so that the characteristic
// exponent is |z|^alpha e^{i pi alpha (1/2 - rho) sgn z}; in this scale the
// classical trigonometric sampler needs no correction factor.
inline double stable_increment(double alpha, double rho, rng::Stream& g) {
    double b = pi_v * (rho - 0.5);
    double th = pi_v * (g.uniform() - 0.5);
    double e = g.exponential();
    double a1 = alpha * (th + b);
    double s = std::sin(a1) / std::pow(std::cos(th), 1.0 / alpha);
    double t = std::pow(std::cos(th - a1) / e, (1.0 - alpha) / alpha);
    return s * t;
}

// Running maximum of a random-walk skeleton of the stable process on [0,1]
// with n_steps increments of scale (1/n_steps)^{1/alpha}.  The skeleton
// misses the excursion above the walk between grid points, so the estimate
// is biased low; the bias shrinks as n_steps grows.
inline std::vector<double> simulate_stable_supremum(const StableParams& s, long long n_steps,
                                                    const SimulationConfig& cfg = {}) {
    s.validate();
    if (s.alpha == 1.0) throw validation_error("stable supremum: alpha = 1 not supported");
    if (n_steps < 1000) throw validation_error("stable supremum: need n_steps >= 1000");
    if (cfg.n_paths <= 0) throw validation_error("stable supremum: n_paths must be positive");
    const double scale = std::pow(1.0 / static_cast<double>(n_steps), 1.0 / s.alpha);
    std::vector<double> out(static_cast<size_t>(cfg.n_paths));
    detail::parallel_paths(cfg.n_paths, cfg.n_threads, [&](long long i) {
        rng::Stream g(cfg.rng_seed, static_cast<std::uint64_t>(i));
        double run = 0.0, mx = 0.0;
        for (long long k = 0; k < n_steps; ++k) {
            run += scale * stable_increment(s.alpha, s.rho, g);
            if (run > mx) mx = run;
        }
        out[static_cast<size_t>(i)] = mx;
    });
    return out;
}

// Sample estimate of E[V^{s-1}] with its standard error.  Non-finite powers
// are dropped from n_effective and flagged; so is a sample kurtosis beyond
// 100, the practical signal that s sits too close to the strip edge for the
// variance to be trustworthy.
inline McEstimate mc_moment(const std::vector<double>& samples, double s) {
    if (samples.empty()) throw validation_error("mc_moment: no samples");
    double mean = 0.0, m2 = 0.0, m4 = 0.0;
    long long n = 0;
    bool dropped = false;
    std::vector<double> pw;
    pw.reserve(samples.size());
    for (double v : samples) {
        double w = std::pow(v, s - 1.0);
        if (!std::isfinite(w)) {
            dropped = true;
            continue;
        }
        pw.push_back(w);
        mean += w;
        ++n;
    }
    if (n == 0) throw validation_error("mc_moment: no finite transformed samples");
    mean /= static_cast<double>(n);
    for (double w : pw) {
        double d = w - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    McEstimate e;
    e.mean = mean;
    e.n_effective = n;
    double var = n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
    e.std_error = std::sqrt(var / static_cast<double>(n));
    double kurt = m2 > 0.0 ? static_cast<double>(n) * m4 / (m2 * m2) : 0.0;
    e.heavy_tailed = dropped || kurt > 100.0;
    return e;
}

}  // namespace levyexp
