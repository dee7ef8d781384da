#pragma once

// Series representations of the density of the exponential functional.
// The coefficients a_n, b_{m,n}, c_{m,n} are the residues of Gamma(s) M(s)
// at s = -n, at the left pole lattice z^-_{m,n} and at the right lattice
// z^+_{m,n}.  Summing the left-lattice families gives a series in positive
// powers of x, the right lattice one in negative powers; one side converges
// for gamma + gamma_hat < 1, the other for > 1, and each is an asymptotic
// expansion of the density on its conjugate side (x -> 0 resp. x -> infinity).
// density() sums the convergent side in exponent order and falls back to
// optimal truncation of the conjugate expansion when cancellation makes the
// convergent side unusable in double precision.
//
// Everything here assumes alpha is not (too close to) rational: the residue
// recursions divide by gamma factors whose arguments approach poles exactly
// when multiples of alpha approach integers.  alpha_diagnostic() measures
// that via continued fractions before any series is summed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <string>
#include <vector>

#include "levyexp/common.hpp"
#include "levyexp/gamma.hpp"
#include "levyexp/mellin.hpp"
#include "levyexp/process.hpp"

namespace levyexp {

// ---------------------------------------------------------------------------
// rationality diagnostic

inline constexpr double liouville_suspect_threshold = 2.0;

struct AlphaDiagnostic {
    enum class Verdict { safe, suspect, rational };

    double alpha = 0.0;
    struct Convergent { long long p; long long q; };
    std::vector<Convergent> convergents;
    // max over convergent denominators q of -ln(dist(q*alpha, Z)) / q; large
    // values mean alpha is abnormally well approximated by rationals
    double liouville_score = 0.0;
    Verdict verdict = Verdict::safe;
};

// Continued-fraction probe of how close alpha is to a rational.  A double is
// always exactly rational, so the match tolerances only apply to denominators
// small enough that 1/q^2 stays above the float resolution of alpha itself;
// beyond that a "match" says nothing about the real number the double stands
// for.
inline AlphaDiagnostic alpha_diagnostic(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw validation_error("alpha_diagnostic: need finite alpha > 0");
    }
    AlphaDiagnostic d;
    d.alpha = alpha;

    const int max_quotients = 25;
    const double q_report_cap = 1e8;   // convergents beyond float resolution are noise
    const double q_match_cap = 1e6;    // largest q for which a 1e-14 match is meaningful

    double x = alpha;
    long long p_prev = 1, q_prev = 0;  // h_{-1}, k_{-1}
    long long p_cur = 0, q_cur = 1;    // dummy, replaced by first step
    bool first = true;
    bool rational = false;

    for (int k = 0; k < max_quotients; ++k) {
        double af = std::floor(x);
        if (af > 9e17) break;
        long long a = static_cast<long long>(af);
        long long p_next, q_next;
        if (first) {
            p_next = a;
            q_next = 1;
        } else {
            if (static_cast<double>(a) * static_cast<double>(q_cur) + q_prev > 9e17) break;
            p_next = a * p_cur + p_prev;
            q_next = a * q_cur + q_prev;
        }
        if (!first) { p_prev = p_cur; q_prev = q_cur; }
        p_cur = p_next; q_cur = q_next;
        first = false;

        double qd = static_cast<double>(q_cur);
        if (qd <= q_report_cap) {
            d.convergents.push_back({p_cur, q_cur});
            double dist = std::fabs(qd * alpha - static_cast<double>(p_cur));
            // q*alpha carries rounding noise ~ q alpha eps; below that the
            // computed distance says nothing about the real number
            double noise = qd * alpha * 1.1e-16;
            dist = std::max(dist, noise);
            d.liouville_score = std::max(d.liouville_score, -std::log(dist) / qd);
            double diff = std::fabs(alpha - static_cast<double>(p_cur) / qd);
            if (q_cur <= 50 && diff <= 1e-12) rational = true;
            if (qd <= q_match_cap && diff <= 1e-14) rational = true;
        }

        double frac = x - af;
        if (frac < 1e-15) {
            // remainder below float noise: alpha is this rational as far as
            // the bits can tell
            if (qd <= q_match_cap) rational = true;
            break;
        }
        x = 1.0 / frac;
    }

    if (rational) {
        d.verdict = AlphaDiagnostic::Verdict::rational;
    } else if (d.liouville_score > liouville_suspect_threshold) {
        d.verdict = AlphaDiagnostic::Verdict::suspect;
    } else {
        d.verdict = AlphaDiagnostic::Verdict::safe;
    }
    return d;
}

// ---------------------------------------------------------------------------
// coefficient table

namespace detail {

// distance from x to the nearest gamma pole (nonpositive integer), +inf if
// x is not in pole territory
inline double pole_gap(double x) {
    double r = std::round(x);
    if (r > 0.5) return std::numeric_limits<double>::infinity();
    return std::fabs(x - r);
}

[[noreturn]] inline void throw_rational() {
    throw convergence_error(
        "coefficient recursion factor at a gamma pole: alpha is rational or too "
        "close to rational for the residue lattice to stay simple; perturb alpha");
}

}  // namespace detail

// Lazily grown residue coefficients of one exponential-functional spec.
// Growth is synchronized internally, so one table can serve density
// evaluations on many x-points in parallel; accessors return copies.
class CoefficientTable {
public:
    explicit CoefficientTable(const MellinTransform& mt)
        : p_(mt.params()),
          tilde_(mt.tilde_params()),
          alpha_(mt.alpha()),
          delta_(mt.delta()),
          diag_(alpha_diagnostic(mt.alpha())) {
        double b = p_.beta, g = p_.gamma, bh = p_.beta_hat, gh = p_.gamma_hat;
        double e = p_.eta();
        // the expansion needs its power lattices distinct: a left seed pole on
        // an integer merges with the integer family and the seed formula below
        // degenerates (deeper collisions trip the growth checks instead)
        if (detail::pole_gap(-(1.0 - b + g) * delta_) < 1e-10) {
            throw validation_error(
                "coefficient table: left pole lattice collides with the integer lattice");
        }
        // seeds are the residues at the pole of each lattice closest to the strip
        b00_ = SignedLog::from_value(delta_) * lgamma_signed(e)
            * lgamma_signed(-(1.0 - b + g) * delta_)
            / (lgamma_signed(e - gh) * lgamma_signed(-g))
            * mt.m_signed(1.0 - (1.0 - b + g) * delta_);
        c00_ = SignedLog::from_value(delta_) * lgamma_signed(1.0 + bh * delta_)
            * lgamma_signed(1.0 - b + bh)
            / (lgamma_signed(e - gh) * lgamma_signed(gh))
            * mt.m_signed(bh * delta_);
    }

    const HypergeometricParams& params() const { return p_; }
    double alpha() const { return alpha_; }
    double delta() const { return delta_; }
    const AlphaDiagnostic& diagnostic() const { return diag_; }

    double pole_left(int m, int n) const {
        return -(1.0 - p_.beta + p_.gamma) * delta_ - m * delta_ - n;
    }
    double pole_right(int m, int n) const {
        return 1.0 + p_.beta_hat * delta_ + m * delta_ + n;
    }
    // x-exponent of the first term of each lattice family
    double exponent_b0() const { return -pole_left(0, 0); }
    double exponent_c0() const { return pole_right(0, 0); }

    SignedLog a_signed(int n) {
        std::lock_guard<std::mutex> lk(mu_);
        grow_a(n);
        return a_[static_cast<size_t>(n)];
    }
    double a(int n) { return a_signed(n).value(); }

    SignedLog b(int m, int n) {
        std::lock_guard<std::mutex> lk(mu_);
        grow_b(m, n);
        return b_rows_[static_cast<size_t>(m)][static_cast<size_t>(n)];
    }
    SignedLog c(int m, int n) {
        std::lock_guard<std::mutex> lk(mu_);
        grow_c(m, n);
        return c_rows_[static_cast<size_t>(m)][static_cast<size_t>(n)];
    }

private:
    // a_n = -(1/n!) prod_{j=0..n} psi(alpha j); identically zero without
    // killing (psi(0) = 0), superexponentially decaying otherwise
    void grow_a(int n) {
        if (a_.empty()) {
            a_.push_back(-psi_signed(p_, 0.0));
        }
        while (static_cast<int>(a_.size()) <= n) {
            int j = static_cast<int>(a_.size());
            if (a_.back().is_zero()) {
                a_.push_back(SignedLog::zero());
                continue;
            }
            SignedLog f = psi_factor_direct(alpha_ * j);
            a_.push_back(a_.back() * f / SignedLog::from_value(static_cast<double>(j)));
        }
    }

    // psi used as a multiplying factor: a pole (argument of a numerator gamma
    // at a nonpositive integer) blows the recursion up, so it is the rational
    // alpha failure; psi = 0 merely zeroes the rest of the family
    SignedLog psi_factor_direct(double w) {
        if (detail::pole_gap(1.0 - p_.beta + p_.gamma - w) < 1e-10
            || detail::pole_gap(p_.beta_hat + p_.gamma_hat + w) < 1e-10) {
            detail::throw_rational();
        }
        return psi_signed(p_, w);
    }

    static SignedLog gamma_ratio_checked(double num, double den) {
        if (detail::pole_gap(num) < 1e-10) detail::throw_rational();
        return gamma_ratio(num, den);
    }

    void grow_b(int m, int n) {
        if (b_rows_.empty()) {
            b_rows_.push_back({b00_});
        }
        double lsig = delta_ * p_.sigma() * std::log(alpha_);
        while (static_cast<int>(b_rows_.size()) <= m) {
            int mm = static_cast<int>(b_rows_.size());
            if (b_rows_.back()[0].is_zero()) {
                b_rows_.push_back({SignedLog::zero()});
                continue;
            }
            double z0 = pole_left(mm, 0);
            double wt = 1.0 - delta_ - z0;
            if (detail::pole_gap(1.0 - tilde_.beta + tilde_.gamma - wt) < 1e-10
                || detail::pole_gap(tilde_.beta_hat + tilde_.gamma_hat + wt) < 1e-10) {
                detail::throw_rational();
            }
            SignedLog tp = psi_signed(tilde_, wt);
            SignedLog seed = -(SignedLog::from_log(lsig, 1) * tp)
                * gamma_ratio_checked(z0, pole_left(mm - 1, 0)) * b_rows_.back()[0];
            b_rows_.push_back({seed});
        }
        auto& row = b_rows_[static_cast<size_t>(m)];
        while (static_cast<int>(row.size()) <= n) {
            int nn = static_cast<int>(row.size());
            if (row.back().is_zero()) {
                row.push_back(SignedLog::zero());
                continue;
            }
            double z = pole_left(m, nn);
            SignedLog f = psi_factor_direct(-alpha_ * z);
            row.push_back(-(f / SignedLog::from_value(z)) * row.back());
        }
    }

    void grow_c(int m, int n) {
        if (c_rows_.empty()) {
            c_rows_.push_back({c00_});
        }
        double lsig = delta_ * p_.sigma() * std::log(alpha_);
        while (static_cast<int>(c_rows_.size()) <= m) {
            int mm = static_cast<int>(c_rows_.size());
            if (c_rows_.back()[0].is_zero()) {
                c_rows_.push_back({SignedLog::zero()});
                continue;
            }
            double wt = 1.0 - delta_ - pole_right(mm - 1, 0);
            // here psi-tilde divides, so its zeros (denominator gamma poles)
            // are the divergent case and its own poles zero the row
            if (detail::pole_gap(tilde_.beta_hat + wt) < 1e-10
                || detail::pole_gap(1.0 - tilde_.beta - wt) < 1e-10) {
                detail::throw_rational();
            }
            SignedLog tp;
            bool tp_pole = false;
            try {
                tp = psi_signed(tilde_, wt);
            } catch (const convergence_error&) {
                tp_pole = true;  // psi-tilde infinite: the reciprocal factor vanishes
            }
            SignedLog seed;
            if (tp_pole) {
                seed = SignedLog::zero();
            } else {
                if (tp.is_zero()) detail::throw_rational();
                seed = -(SignedLog::from_log(-lsig, 1) / tp)
                    * gamma_ratio(pole_right(mm, 0), pole_right(mm - 1, 0))
                    * c_rows_.back()[0];
            }
            c_rows_.push_back({seed});
        }
        auto& row = c_rows_[static_cast<size_t>(m)];
        while (static_cast<int>(row.size()) <= n) {
            int nn = static_cast<int>(row.size());
            if (row.back().is_zero()) {
                row.push_back(SignedLog::zero());
                continue;
            }
            double zp = pole_right(m, nn - 1);
            double w = -alpha_ * zp;
            if (detail::pole_gap(p_.beta_hat + w) < 1e-10
                || detail::pole_gap(1.0 - p_.beta - w) < 1e-10) {
                detail::throw_rational();
            }
            SignedLog f;
            bool f_pole = false;
            try {
                f = psi_signed(p_, w);
            } catch (const convergence_error&) {
                f_pole = true;
            }
            if (f_pole) {
                row.push_back(SignedLog::zero());
            } else {
                if (f.is_zero()) detail::throw_rational();
                row.push_back(-(SignedLog::from_value(zp) / f) * row.back());
            }
        }
    }

    std::mutex mu_;
    HypergeometricParams p_, tilde_;
    double alpha_, delta_;
    AlphaDiagnostic diag_;
    SignedLog b00_, c00_;
    std::vector<SignedLog> a_;
    std::vector<std::vector<SignedLog>> b_rows_, c_rows_;
};

inline double coeff_a(CoefficientTable& t, int n) { return t.a(n); }
inline double coeff_b(CoefficientTable& t, int m, int n) { return t.b(m, n).value(); }
inline double coeff_c(CoefficientTable& t, int m, int n) { return t.c(m, n).value(); }

// ---------------------------------------------------------------------------
// series summation

enum class AsymptoticSide { zero, infinity };

struct DensityOptions {
    double rel_tol = 1e-10;       // block stopping tolerance of the convergent sum
    long long max_terms = 400000; // per-route term budget
    int max_blocks = 20000;
    // the convergent-side terms rise to ~exp(nats) times the result before
    // cancelling back down; above ~36 nats double precision retains nothing
    double nats_skip_convergent = 26.0;
    double nats_try_asymptotic = 13.0;
    int asym_patience = 40;       // blocks past the envelope minimum before truncating
};

struct DensityResult {
    double value = 0.0;
    double rel_err_est = std::numeric_limits<double>::infinity();
    bool convergent_route = true;
    bool truncated_tail = false;  // asymptotic route stopped at its envelope minimum
    bool clamped = false;         // tiny negative clamped to zero
    long long terms = 0;
    double peak_term = 0.0;
};

namespace detail {

struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double v) {
        double y = v - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

enum class Family { ab, c };

struct BlockStats {
    double sum = 0.0;
    double abs_sum = 0.0;
    double peak = 0.0;
    long long count = 0;
    bool overflow = false;
};

// Sums every term of one family whose x-exponent falls in [k, k+1).  The ab
// family carries a_n x^n and b_{m,n} x^{e0b + m delta + n}; the c family
// carries c_{m,n} x^{-(e0c + m delta + n)}.  next_n[m] walks each lattice row
// exactly once across consecutive blocks.  With integrate set, each term is
// replaced by its antiderivative piece: x^{s e} becomes x^{s e2} / e2 with
// e2 = e + s, which is the lower integral over (0, x) for the ab family and
// the upper tail integral over (x, inf) for the c family.
inline BlockStats collect_block(CoefficientTable& t, Family fam, double lnx, int k,
                                std::vector<int>& next_n, bool integrate = false) {
    BlockStats bs;
    Kahan kb;
    auto add = [&](const SignedLog& coeff, double e, double esign) {
        ++bs.count;
        if (coeff.is_zero()) return;
        double lt;
        if (integrate) {
            double e2 = e + esign;
            lt = coeff.log_mag + esign * e2 * lnx - std::log(e2);
        } else {
            lt = coeff.log_mag + esign * e * lnx;
        }
        if (lt > 700.0) { bs.overflow = true; return; }
        if (lt < -745.0) return;
        double v = coeff.sign * std::exp(lt);
        kb.add(v);
        bs.abs_sum += std::fabs(v);
        bs.peak = std::max(bs.peak, std::fabs(v));
    };

    double e0 = fam == Family::ab ? t.exponent_b0() : t.exponent_c0();
    double esign = fam == Family::ab ? 1.0 : -1.0;
    double d = t.delta();
    if (fam == Family::ab) add(t.a_signed(k), static_cast<double>(k), 1.0);
    for (int m = 0; e0 + m * d < k + 1.0; ++m) {
        if (m == static_cast<int>(next_n.size())) next_n.push_back(0);
        while (true) {
            double e = e0 + m * d + next_n[static_cast<size_t>(m)];
            if (e >= k + 1.0) break;
            SignedLog co = fam == Family::ab ? t.b(m, next_n[static_cast<size_t>(m)])
                                             : t.c(m, next_n[static_cast<size_t>(m)]);
            add(co, e, esign);
            ++next_n[static_cast<size_t>(m)];
        }
    }
    bs.sum = kb.s;
    return bs;
}

struct RouteEval {
    bool ok = false;
    double value = 0.0;
    double est = std::numeric_limits<double>::infinity();
    double peak = 0.0;
    long long terms = 0;
    bool truncated = false;
};

inline double cancel_noise(double peak, long long terms) {
    return peak * 1.1e-16 * std::sqrt(static_cast<double>(std::max<long long>(terms, 1)));
}

inline RouteEval run_convergent(CoefficientTable& t, Family fam, double x,
                                const DensityOptions& o, bool integrate = false) {
    RouteEval r;
    double lnx = std::log(x);
    Kahan tot;
    std::vector<int> next_n;
    int small = 0;
    bool seen = false;
    for (int k = 0; k <= o.max_blocks; ++k) {
        BlockStats bs = collect_block(t, fam, lnx, k, next_n, integrate);
        r.terms += bs.count;
        if (bs.overflow) return r;
        tot.add(bs.sum);
        r.peak = std::max(r.peak, bs.peak);
        if (!seen && bs.abs_sum > 0.0) seen = true;
        if (seen) {
            if (bs.abs_sum < o.rel_tol * std::max(std::fabs(tot.s), 1e-300)) {
                if (++small >= 3) {
                    r.value = tot.s;
                    r.ok = std::isfinite(r.value);
                    r.est = cancel_noise(r.peak, r.terms)
                        / std::max(std::fabs(r.value), 1e-300) + o.rel_tol;
                    return r;
                }
            } else {
                small = 0;
            }
        }
        if (r.terms > o.max_terms) return r;
    }
    return r;
}

inline RouteEval run_asymptotic(CoefficientTable& t, Family fam, double x,
                                const DensityOptions& o, bool integrate = false) {
    RouteEval r;
    double lnx = std::log(x);
    std::vector<int> next_n;
    std::vector<double> sums, envs;
    int kstar = -1;
    double envmin = std::numeric_limits<double>::infinity();
    int since_min = 0, decayed = 0;
    bool seen = false, converged = false;
    double running = 0.0;
    for (int k = 0; k <= o.max_blocks; ++k) {
        BlockStats bs = collect_block(t, fam, lnx, k, next_n, integrate);
        r.terms += bs.count;
        sums.push_back(bs.sum);
        envs.push_back(bs.abs_sum);
        r.peak = std::max(r.peak, bs.peak);
        running += bs.sum;
        if (bs.overflow) break;
        if (!seen) {
            if (bs.abs_sum > 0.0) seen = true;
            else continue;
        }
        if (bs.abs_sum < envmin) {
            envmin = bs.abs_sum;
            kstar = k;
            since_min = 0;
        } else {
            ++since_min;
        }
        // expansions whose terms just keep shrinking are effectively
        // convergent here; everything else truncates at the envelope minimum
        if (bs.abs_sum < 1e-4 * o.rel_tol * std::max(std::fabs(running), 1e-300)) {
            if (++decayed >= 3) { converged = true; kstar = k; break; }
        } else {
            decayed = 0;
        }
        if (since_min >= o.asym_patience) break;
        if (r.terms > o.max_terms) break;
    }
    if (kstar < 0) return r;
    Kahan tot;
    for (int k = 0; k <= kstar; ++k) tot.add(sums[static_cast<size_t>(k)]);
    r.value = tot.s;
    r.ok = std::isfinite(r.value);
    r.truncated = !converged;
    double tail = converged ? envs.back() : envmin;
    r.est = (tail + cancel_noise(r.peak, r.terms)) / std::max(std::fabs(r.value), 1e-300);
    return r;
}

// Height (in nats) of the hump the convergent-side terms climb before they
// start decaying: the n-term ratio is ~ alpha^sigma n^{sigma-1} x on the ab
// side and its reciprocal pattern on the c side, so the hump peaks at
// n* = (alpha^sigma x)^{1/(1-sigma)} with total height |1-sigma| n*.
inline double cancellation_nats(double sigma, double alpha, double x) {
    double lr = sigma * std::log(alpha) + std::log(x);
    if ((sigma < 1.0 && lr <= 0.0) || (sigma > 1.0 && lr >= 0.0)) return 0.0;
    double ns = std::exp(lr / (1.0 - sigma));
    return std::fabs(1.0 - sigma) * ns;
}

}  // namespace detail

inline DensityResult density_detail(CoefficientTable& t, double x,
                                    const DensityOptions& o = {}) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw validation_error("density: need finite x > 0");
    }
    const AlphaDiagnostic& diag = t.diagnostic();
    if (diag.verdict == AlphaDiagnostic::Verdict::rational) {
        throw convergence_error(
            "density: alpha is numerically rational; the series needs simple pole "
            "lattices, perturb alpha away from p/q");
    }
    if (diag.verdict == AlphaDiagnostic::Verdict::suspect) {
        throw convergence_error(
            "density: alpha is suspiciously well approximated by rationals "
            "(liouville score " + std::to_string(diag.liouville_score)
            + "); results would be unreliable, perturb alpha");
    }
    double sigma = t.params().sigma();
    if (std::fabs(sigma - 1.0) < 1e-8) {
        throw validation_error(
            "density: series representation undefined on gamma + gamma_hat = 1");
    }
    detail::Family conv = sigma < 1.0 ? detail::Family::ab : detail::Family::c;
    detail::Family asym = sigma < 1.0 ? detail::Family::c : detail::Family::ab;
    double nats = detail::cancellation_nats(sigma, t.alpha(), x);

    detail::RouteEval rc, ra;
    if (nats <= o.nats_skip_convergent) rc = detail::run_convergent(t, conv, x, o);
    if (nats > o.nats_try_asymptotic || !rc.ok || rc.est > 1e-8) {
        ra = detail::run_asymptotic(t, asym, x, o);
    }

    const detail::RouteEval* best = nullptr;
    bool best_conv = true;
    if (rc.ok && (!ra.ok || rc.est <= ra.est)) {
        best = &rc;
    } else if (ra.ok) {
        best = &ra;
        best_conv = false;
    } else {
        throw convergence_error(
            "density: series terms not decaying within the term budget; alpha may "
            "be too close to a rational");
    }

    DensityResult res;
    res.value = best->value;
    res.rel_err_est = best->est;
    res.convergent_route = best_conv;
    res.truncated_tail = best->truncated;
    res.terms = rc.terms + ra.terms;
    res.peak_term = best->peak;
    if (res.value < 0.0) {
        if (res.value > -1e-12 * best->peak) {
            res.value = 0.0;
            res.clamped = true;
        } else {
            throw convergence_error(
                "density: catastrophic cancellation left a negative value");
        }
    }
    return res;
}

inline double density(CoefficientTable& t, double x, const DensityOptions& o = {}) {
    return density_detail(t, x, o).value;
}

// Plain truncation of either expansion in exponent order; no convergence
// claim, the caller owns the asymptotic error.
inline double density_asymptotic(CoefficientTable& t, double x, int n_terms,
                                 AsymptoticSide side) {
    if (n_terms < 1) throw validation_error("density_asymptotic: need n_terms >= 1");
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw validation_error("density_asymptotic: need finite x > 0");
    }
    detail::Family fam = side == AsymptoticSide::zero ? detail::Family::ab
                                                      : detail::Family::c;
    double lnx = std::log(x);
    detail::Kahan tot;
    std::vector<int> next_n;
    long long left = n_terms;
    for (int k = 0; left > 0 && k <= 1000000; ++k) {
        // re-walk the block term by term so the budget cuts mid-block
        double e0 = fam == detail::Family::ab ? t.exponent_b0() : t.exponent_c0();
        double esign = fam == detail::Family::ab ? 1.0 : -1.0;
        double d = t.delta();
        auto add = [&](const SignedLog& co, double e) {
            if (left <= 0) return;
            --left;
            if (co.is_zero()) return;
            double lt = co.log_mag + esign * e * lnx;
            if (lt < -745.0) return;
            tot.add(co.sign * std::exp(lt));
        };
        if (fam == detail::Family::ab) add(t.a_signed(k), static_cast<double>(k));
        for (int m = 0; e0 + m * d < k + 1.0 && left > 0; ++m) {
            if (m == static_cast<int>(next_n.size())) next_n.push_back(0);
            while (left > 0) {
                double e = e0 + m * d + next_n[static_cast<size_t>(m)];
                if (e >= k + 1.0) break;
                add(fam == detail::Family::ab ? t.b(m, next_n[static_cast<size_t>(m)])
                                              : t.c(m, next_n[static_cast<size_t>(m)]),
                    e);
                ++next_n[static_cast<size_t>(m)];
            }
        }
    }
    return tot.s;
}

}  // namespace levyexp
