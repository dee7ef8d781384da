#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "levyexp/process.hpp"
#include "levyexp/quadrature.hpp"

using namespace levyexp;

// Reference values computed with mpmath at 30 digits and frozen.

namespace {

const HypergeometricParams base{0.3, 0.4, 0.5, 0.45};

struct PsiRow { double z, v; };
const PsiRow psi_rows[] = {
    {0.3, -0.40862817086636600},
    {-0.2, -0.34401566232544030},
    {0.9, 0.84051148036958881},
    {-0.45, -0.086724903910994669},
};

struct PiRow { double x, v; };
const PiRow pi_rows[] = {
    {0.001, 101563.76516827140},
    {0.5, 0.95831750285989929},
    {2.0, 0.044211942255640464},
    {-0.7, 0.56381729706174228},
    {-0.001, 105490.27863119402},
    {8.0, 4.6345150773625751e-5},
};

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(base.validate());
    CHECK_THROWS_AS((HypergeometricParams{1.2, 0.4, 0.5, 0.45}.validate()), validation_error);
    CHECK_THROWS_AS((HypergeometricParams{0.3, 1.0, 0.5, 0.45}.validate()), validation_error);
    CHECK_THROWS_AS((HypergeometricParams{0.3, 0.4, -0.1, 0.45}.validate()), validation_error);
    CHECK_THROWS_AS((HypergeometricParams{0.3, 0.4, 0.5, 0.0}.validate()), validation_error);
}

TEST_CASE("laplace exponent matches reference values") {
    for (const auto& r : psi_rows) {
        CAPTURE(r.z);
        CHECK(rel_err(psi_signed(base, r.z).value(), r.v) < 1e-13);
        cplx c = psi(base, cplx(r.z));
        CHECK(std::fabs(c.real() - r.v) < 1e-13 * std::fabs(r.v));
        CHECK(std::fabs(c.imag()) < 1e-13 * std::fabs(r.v));
    }
    cplx v1 = psi(base, cplx(0.2, 1.3));
    CHECK(std::abs(v1 - cplx(-1.2657866497920650, 0.0062064265617361347)) < 1e-13 * std::abs(v1));
    cplx v2 = psi(base, cplx(-0.3, 4.0));
    CHECK(std::abs(v2 - cplx(-3.2232853472698452, -0.50894772358294567)) < 1e-13 * std::abs(v2));
}

TEST_CASE("classification covers the four regimes") {
    auto killed = classify(base);
    CHECK(killed.regime == PathRegime::killed);
    CHECK(rel_err(killed.kill_rate, 0.42650301816870956) < 1e-13);
    CHECK(rel_err(killed.mean, -0.21522698428361913) < 1e-13);
    CHECK(killed.bounded_variation);  // sigma = 0.85

    auto up = classify({1.0, 0.4, 0.5, 0.45});
    CHECK(up.regime == PathRegime::drifts_plus);
    CHECK(up.kill_rate == 0.0);
    CHECK(rel_err(up.mean, 1.2908251564131982) < 1e-13);

    auto down = classify({0.3, 0.4, 0.0, 0.45});
    CHECK(down.regime == PathRegime::drifts_minus);
    CHECK(rel_err(down.mean, -1.4424562904395661) < 1e-13);

    auto osc = classify({1.0, 0.4, 0.0, 0.45});
    CHECK(osc.regime == PathRegime::oscillates);
    CHECK(osc.mean == 0.0);

    CHECK_FALSE(classify({0.3, 0.6, 0.5, 0.55}).bounded_variation);
}

TEST_CASE("psi at zero equals minus the kill rate") {
    auto c = classify(base);
    CHECK(rel_err(psi_signed(base, 0.0).value(), -c.kill_rate) < 1e-13);
}

TEST_CASE("drift means agree with the derivative of psi at zero") {
    // drifting regimes: psi(0) = 0 and the stated mean is psi'(0)
    for (HypergeometricParams p : {HypergeometricParams{1.0, 0.4, 0.5, 0.45},
                                   HypergeometricParams{0.3, 0.4, 0.0, 0.45}}) {
        auto c = classify(p);
        double h = 1e-6;
        double num = (psi_signed(p, h).value() - psi_signed(p, -h).value()) / (2.0 * h);
        CAPTURE(p.beta, p.beta_hat);
        CHECK(rel_err(num, c.mean) < 1e-8);
    }
    // killed regime: reported mean is psi'(0) as well
    auto c = classify(base);
    double h = 1e-6;
    double num = (psi_signed(base, h).value() - psi_signed(base, -h).value()) / (2.0 * h);
    CHECK(rel_err(num, c.mean) < 1e-8);
}

TEST_CASE("wiener hopf factorization") {
    for (const auto& r : psi_rows) {
        SignedLog lhs = -psi_signed(base, r.z);
        SignedLog rhs = wh_ascending(base, -r.z) * wh_descending(base, r.z);
        REQUIRE(lhs.sign == rhs.sign);
        CHECK(std::fabs(lhs.log_mag - rhs.log_mag) < 1e-12);
    }
    CHECK(rel_err(wh_ascending(base, 0.7).value(), 1.0497258567370967) < 1e-13);
    CHECK(rel_err(wh_descending(base, 0.7).value(), 0.98033920645637760) < 1e-13);
    CHECK(rel_err(wh_ascending(base, 2.3).value(), 1.4906032134051665) < 1e-13);
    CHECK(rel_err(wh_descending(base, 2.3).value(), 1.5205910973825909) < 1e-13);
}

TEST_CASE("jump density matches reference values and is positive") {
    for (const auto& r : pi_rows) {
        CAPTURE(r.x);
        double got = levy_density(base, r.x);
        CHECK(got > 0.0);
        CHECK(rel_err(got, r.v) < 1e-11);
    }
    CHECK_THROWS_AS(levy_density(base, 0.0), validation_error);
}

TEST_CASE("jump density small-x power") {
    // log-log slope over a decade near zero approaches -1 - gamma - gamma_hat
    double s_pos = std::log(levy_density(base, 1e-4) / levy_density(base, 1e-3)) / std::log(0.1);
    double s_neg = std::log(levy_density(base, -1e-4) / levy_density(base, -1e-3)) / std::log(0.1);
    double want = -1.0 - base.sigma();
    CHECK(std::fabs(s_pos - want) < 0.02 * std::fabs(want));
    CHECK(std::fabs(s_neg - want) < 0.02 * std::fabs(want));
}

TEST_CASE("jump density reproduces the laplace exponent") {
    // psi(z) = -q + int (e^{zx} - 1) pi(x) dx for z inside the strip.
    // The integrand behaves like x^{-sigma} at zero; x = t^8 makes the
    // transformed integrand vanish there so bisection converges.
    auto c = classify(base);
    for (double z : {0.3, -0.2}) {
        // once pi underflows the true product is negligible (z is inside the
        // strip, so e^{zx} pi(x) decays); the guard avoids inf * 0
        auto f_pos = [&](double x) {
            double pi = levy_density(base, x);
            return pi == 0.0 ? 0.0 : std::expm1(z * x) * pi;
        };
        auto f_neg = [&](double x) {
            double pi = levy_density(base, -x);
            return pi == 0.0 ? 0.0 : std::expm1(-z * x) * pi;
        };
        auto sub_pos = [&](double t) { double x = std::pow(t, 8.0); return f_pos(x) * 8.0 * std::pow(t, 7.0); };
        auto sub_neg = [&](double t) { double x = std::pow(t, 8.0); return f_neg(x) * 8.0 * std::pow(t, 7.0); };
        QuadOptions opt;
        opt.rel_tol = 1e-10;
        opt.abs_tol = 1e-12;
        opt.max_intervals = 20000;
        double integral = integrate(sub_pos, 0.0, 1.0, opt) + integrate_to_inf(f_pos, 1.0, opt)
            + integrate(sub_neg, 0.0, 1.0, opt) + integrate_to_inf(f_neg, 1.0, opt);
        double want = psi_signed(base, z).value();
        CAPTURE(z);
        CHECK(std::fabs((-c.kill_rate + integral) - want) < 1e-7 * std::fabs(want));
    }
}

TEST_CASE("jump density of the dual process is the reflection") {
    HypergeometricParams d = base.dual();
    for (double x : {0.4, 1.7, -0.9}) {
        CHECK(rel_err(levy_density(d, x), levy_density(base, -x)) < 1e-11);
    }
    // dual laplace exponent is psi(-z)
    for (double z : {0.25, -0.4}) {
        CHECK(rel_err(psi_signed(d, z).value(), psi_signed(base, -z).value()) < 1e-12);
    }
}

TEST_CASE("stable rows embed admissibly") {
    StableParams s{1.4142135623730950, 0.45};
    auto killed = lamperti_stable_killed(s);
    auto up = lamperti_stable_up(s);
    auto down = lamperti_stable_down(s);
    CHECK(killed.beta == killed.beta_hat);
    CHECK(up.beta == 1.0);
    CHECK(up.beta_hat == 1.0);
    CHECK(down.beta == 0.0);
    CHECK(down.beta_hat == 0.0);
    CHECK(rel_err(up.gamma, s.alpha * s.rho) < 1e-15);
    CHECK(rel_err(up.gamma_hat, s.alpha * (1.0 - s.rho)) < 1e-15);
    // conditioned-up process drifts to +infinity
    CHECK(classify(up).regime == PathRegime::drifts_plus);
    // killed row is killed
    CHECK(classify(killed).regime == PathRegime::killed);
    // rho at the admissibility edge for alpha > 1 is rejected
    CHECK_THROWS_AS(lamperti_stable_up({1.5, 2.0 / 3.0}), validation_error);
    CHECK_THROWS_AS((StableParams{2.0, 0.5}.validate()), validation_error);
}

TEST_CASE("killed row matches its closed form exponent") {
    for (StableParams s : {StableParams{1.4142135623730950, 0.45},
                           StableParams{0.7, 0.6},
                           StableParams{1.5, 0.55}}) {
        auto p = lamperti_stable_killed(s);
        for (double z : {0.2, 0.85, 1.3, -0.15}) {
            double general = psi_signed(p, z).value();
            double closed = lamperti_killed_psi_closed(s, z);
            CAPTURE(s.alpha, s.rho, z);
            CHECK(rel_err(general, closed) < 1e-12);
        }
    }
}
