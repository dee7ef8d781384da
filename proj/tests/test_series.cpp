#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "levyexp/series.hpp"

using namespace levyexp;

namespace {

const HypergeometricParams base{0.3, 0.4, 0.5, 0.45};   // gamma + gamma_hat < 1
const HypergeometricParams wide{0.3, 0.7, 0.5, 0.6};    // gamma + gamma_hat > 1
const double root2 = std::sqrt(2.0);

// Independent residue oracle: 64-point trapezoid around a circle of radius
// 1e-3; spectrally accurate because Gamma(s) M(s) is meromorphic with the
// next pole many radii away.
cplx contour_residue(const MellinTransform& mt, cplx s0, double r = 1e-3,
                     int npts = 64) {
    cplx acc = 0.0;
    for (int j = 0; j < npts; ++j) {
        double th = 2.0 * pi_v * j / npts;
        cplx w(r * std::cos(th), r * std::sin(th));
        acc += mt.mellin(s0 + w) * w;
    }
    return acc / static_cast<double>(npts);
}

double sl_rel_err(const SignedLog& got, double want) {
    return rel_err(got.value(), want);
}

}  // namespace

TEST_CASE("coefficients equal contour residues at the six smallest poles", "[series]") {
    for (const HypergeometricParams& p : {base, wide}) {
        MellinTransform mt(p, root2);
        CoefficientTable tab(mt);

        // residue of Gamma(s) M(s) at s = -n is a_n
        for (int n = 0; n < 6; ++n) {
            cplx res = contour_residue(mt, cplx(-static_cast<double>(n)));
            INFO("a family n=" << n);
            CHECK(rel_err(tab.a(n), res.real()) < 1e-6);
            CHECK(std::fabs(res.imag()) < 1e-9 * std::fabs(res.real()) + 1e-300);
        }
        // six smallest left-lattice poles in |z^-| order for delta ~ 0.707
        const std::pair<int, int> idx[] = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {3, 0}};
        for (auto [m, n] : idx) {
            cplx res = contour_residue(mt, cplx(tab.pole_left(m, n)));
            INFO("b family m=" << m << " n=" << n);
            CHECK(sl_rel_err(tab.b(m, n), res.real()) < 1e-6);
        }
        for (auto [m, n] : idx) {
            cplx res = contour_residue(mt, cplx(tab.pole_right(m, n)));
            INFO("c family m=" << m << " n=" << n);
            CHECK(sl_rel_err(tab.c(m, n), -res.real()) < 1e-6);
        }
    }
}

TEST_CASE("frozen coefficient values", "[series]") {
    // Reference values computed with mpmath at 30 digits and frozen.
    MellinTransform mt(base, root2);
    CoefficientTable tab(mt);

    CHECK(rel_err(tab.a(0), 0.42650301816870956) < 1e-12);
    CHECK(rel_err(tab.a(1), -0.51083622248699621) < 1e-12);
    CHECK(rel_err(tab.a(2), -0.31490322842047828) < 1e-12);
    CHECK(rel_err(tab.a(3), 0.80817444746958552) < 1e-12);
    CHECK(rel_err(tab.a(5), -1.2674226468711043) < 1e-12);

    CHECK(sl_rel_err(tab.b(0, 0), 0.58877170329168521) < 1e-11);
    CHECK(sl_rel_err(tab.b(1, 0), -0.01721820176657837) < 1e-10);
    CHECK(sl_rel_err(tab.b(0, 1), -0.40401811680307225) < 1e-11);
    CHECK(sl_rel_err(tab.b(2, 0), 0.028431480955832244) < 1e-10);
    CHECK(sl_rel_err(tab.b(1, 1), 0.011324726489970623) < 1e-10);
    CHECK(sl_rel_err(tab.b(3, 0), 0.14394811595774533) < 1e-10);
    CHECK(sl_rel_err(tab.b(2, 1), -0.018086072694611283) < 1e-10);
    CHECK(sl_rel_err(tab.b(0, 3), 0.83264585594755516) < 1e-11);

    CHECK(sl_rel_err(tab.c(0, 0), 0.18385102281984966) < 1e-11);
    CHECK(sl_rel_err(tab.c(1, 0), 0.1763941065694319) < 1e-10);
    CHECK(sl_rel_err(tab.c(0, 1), -0.016232024542134268) < 1e-11);
    CHECK(sl_rel_err(tab.c(2, 0), 0.046664400643006357) < 1e-10);
    CHECK(sl_rel_err(tab.c(1, 1), -0.016730224214540676) < 1e-10);
    CHECK(sl_rel_err(tab.c(3, 0), -0.064757175476194168) < 1e-10);
    CHECK(sl_rel_err(tab.c(2, 1), -0.0046468501637218424) < 1e-10);
    CHECK(sl_rel_err(tab.c(0, 3), 0.018945264568860638) < 1e-11);

    MellinTransform mt2(wide, root2);
    CoefficientTable tab2(mt2);
    CHECK(rel_err(tab2.a(0), 0.36688106945087584) < 1e-12);
    CHECK(rel_err(tab2.a(4), 10.806257775803278) < 1e-12);
    CHECK(sl_rel_err(tab2.b(0, 0), 8.5008216603782663) < 1e-11);
    CHECK(sl_rel_err(tab2.b(2, 1), -0.11327989929949102) < 1e-10);
    CHECK(sl_rel_err(tab2.c(0, 0), 0.21019393868163577) < 1e-11);
    CHECK(sl_rel_err(tab2.c(2, 1), 0.00068201346233640102) < 1e-10);
}

TEST_CASE("recursion steps have the stated one-step ratios", "[series]") {
    MellinTransform mt(base, root2);
    CoefficientTable tab(mt);

    double z01 = tab.pole_left(0, 1);
    double want_b = -psi_signed(base, -root2 * z01).value() / z01;
    CHECK(rel_err(tab.b(0, 1).value() / tab.b(0, 0).value(), want_b) < 1e-12);

    double zp00 = tab.pole_right(0, 0);
    double want_c = -zp00 / psi_signed(base, -root2 * zp00).value();
    CHECK(rel_err(tab.c(0, 1).value() / tab.c(0, 0).value(), want_c) < 1e-12);

    // a_0 is the kill rate
    CHECK(rel_err(tab.a(0), -psi(base, 0.0).real()) < 1e-13);
}

TEST_CASE("a family vanishes without killing", "[series]") {
    HypergeometricParams up{1.0, 0.4, 0.5, 0.45};
    MellinTransform mt(up, root2);
    CoefficientTable tab(mt);
    for (int n = 0; n < 12; ++n) {
        CHECK(tab.a(n) == 0.0);
        CHECK(tab.a_signed(n).is_zero());
    }
    // the b and c families stay nontrivial
    CHECK(!tab.b(0, 0).is_zero());
    CHECK(!tab.c(0, 0).is_zero());
}

TEST_CASE("alpha diagnostic classifies rationality", "[series]") {
    AlphaDiagnostic d = alpha_diagnostic(root2);
    CHECK(d.verdict == AlphaDiagnostic::Verdict::safe);
    CHECK(d.liouville_score < liouville_suspect_threshold);
    REQUIRE(d.convergents.size() >= 4);
    // quadratic irrational: partial quotients [1; 2, 2, 2, ...]
    CHECK(d.convergents[0].p == 1);
    CHECK(d.convergents[0].q == 1);
    CHECK(d.convergents[1].p == 3);
    CHECK(d.convergents[1].q == 2);
    CHECK(d.convergents[2].p == 7);
    CHECK(d.convergents[2].q == 5);

    CHECK(alpha_diagnostic(1.5).verdict == AlphaDiagnostic::Verdict::rational);
    CHECK(alpha_diagnostic(0.5 + 1e-13).verdict == AlphaDiagnostic::Verdict::rational);
    CHECK(alpha_diagnostic(2.0 / 3.0).verdict == AlphaDiagnostic::Verdict::rational);
    CHECK(alpha_diagnostic(0.05).verdict == AlphaDiagnostic::Verdict::rational);

    // golden ratio: the worst-approximable irrational, clearly safe
    CHECK(alpha_diagnostic(0.5 * (1.0 + std::sqrt(5.0))).verdict
          == AlphaDiagnostic::Verdict::safe);
    CHECK(alpha_diagnostic(std::sqrt(3.0)).verdict == AlphaDiagnostic::Verdict::safe);

    // abnormally close to 1 without being caught by the small-q rational rule
    AlphaDiagnostic near1 = alpha_diagnostic(1.0 + 1e-9);
    CHECK(near1.verdict == AlphaDiagnostic::Verdict::suspect);
    CHECK(near1.liouville_score > 15.0);

    CHECK_THROWS_AS(alpha_diagnostic(0.0), validation_error);
    CHECK_THROWS_AS(alpha_diagnostic(-1.0), validation_error);
}

TEST_CASE("rational alpha is rejected before summation", "[series]") {
    MellinTransform mt(base, 1.5);  // transform itself is fine at rational alpha
    CoefficientTable tab(mt);
    CHECK(tab.diagnostic().verdict == AlphaDiagnostic::Verdict::rational);
    CHECK_THROWS_AS(density(tab, 1.0), convergence_error);
    // the recursion itself hits an exact gamma pole two steps in:
    // -alpha z^-_{0,2} lands on an integer offset of 1 - beta + gamma
    CHECK_THROWS_AS(tab.b(0, 2), convergence_error);
}

TEST_CASE("density matches inversion references on both sides", "[series]") {
    // Reference values: numerical Mellin inversion in mpmath, frozen.
    MellinTransform mt(base, root2);
    CoefficientTable tab(mt);
    const std::pair<double, double> ref[] = {
        {0.5, 0.377442807576}, {1.0, 0.233165831407}, {2.0, 0.101585748527},
        {5.0, 0.026743571743}, {20.0, 0.00354751055722},
    };
    for (auto [x, want] : ref) {
        INFO("x = " << x);
        CHECK(rel_err(density(tab, x), want) < 5e-7);
    }
    // hardest point: term cancellation peaks near the route crossover
    CHECK(rel_err(density(tab, 1.5), 0.148305117442) < 3e-6);

    MellinTransform mt2(wide, root2);
    CoefficientTable tab2(mt2);
    const std::pair<double, double> ref2[] = {
        {0.05, 0.396290230796}, {0.3, 0.446857333108},
        {1.5, 0.135731523252}, {4.0, 0.0365003632374},
    };
    for (auto [x, want] : ref2) {
        INFO("x = " << x);
        CHECK(rel_err(density(tab2, x), want) < 5e-7);
    }
}

TEST_CASE("route selection favors the accurate representation", "[series]") {
    MellinTransform mt(base, root2);
    CoefficientTable tab(mt);

    DensityResult near0 = density_detail(tab, 0.2);
    CHECK(near0.convergent_route);
    CHECK(near0.rel_err_est < 1e-8);

    DensityResult far = density_detail(tab, 20.0);
    CHECK_FALSE(far.convergent_route);
    CHECK(far.rel_err_est < 1e-8);

    // gamma + gamma_hat > 1 mirrors the picture
    MellinTransform mt2(wide, root2);
    CoefficientTable tab2(mt2);
    CHECK_FALSE(density_detail(tab2, 0.05).convergent_route);
    CHECK(density_detail(tab2, 4.0).convergent_route);
}

TEST_CASE("density is nonnegative on a wide grid", "[series]") {
    MellinTransform mt(base, root2);
    CoefficientTable tab(mt);
    for (double lx = std::log(0.05); lx <= std::log(50.0); lx += 0.5) {
        double x = std::exp(lx);
        INFO("x = " << x);
        CHECK(density(tab, x) >= 0.0);
    }
}

TEST_CASE("asymptotic truncations bracket the density at their ends", "[series]") {
    MellinTransform mt(base, root2);
    CoefficientTable tab(mt);

    // one term of the x -> 0 expansion is the kill rate a_0
    CHECK(rel_err(density_asymptotic(tab, 1e-3, 1, AsymptoticSide::zero), tab.a(0))
          < 1e-12);
    // |p(x) - a_0| shrinks as x -> 0
    double d3 = std::fabs(density(tab, 1e-3) - tab.a(0));
    double d4 = std::fabs(density(tab, 1e-4) - tab.a(0));
    CHECK(d4 < d3);
    CHECK(d3 < 0.05);

    // one term of the x -> infinity expansion carries exponent -(1+beta_hat/alpha)
    double x = 1e3;
    double one = density_asymptotic(tab, x, 1, AsymptoticSide::infinity);
    CHECK(rel_err(one, tab.c(0, 0).value() * std::pow(x, -tab.exponent_c0())) < 1e-12);
    CHECK(rel_err(one, density(tab, x)) < 1e-2);

    // a truncation of the convergent side agrees with the full sum to about
    // the size of the first omitted term
    double xs = 0.01;
    double full = density(tab, xs);
    double part = density_asymptotic(tab, xs, 4, AsymptoticSide::zero);
    // four terms cover a_0, b_{0,0}, a_1, b_{0,1}; the leading omissions are
    // b_{1,0} x^{e0+delta} and a_2 x^2
    double omitted = std::fabs(tab.b(1, 0).value())
            * std::pow(xs, tab.exponent_b0() + tab.delta())
        + std::fabs(tab.a(2)) * xs * xs;
    CHECK(std::fabs(part - full) < 5.0 * omitted);

    CHECK_THROWS_AS(density_asymptotic(tab, 1.0, 0, AsymptoticSide::zero),
                    validation_error);
}

TEST_CASE("density rejects the sigma = 1 boundary", "[series]") {
    HypergeometricParams edge{0.3, 0.5, 0.5, 0.5};
    MellinTransform mt(edge, root2);
    CoefficientTable tab(mt);
    CHECK_THROWS_AS(density(tab, 1.0), validation_error);
}
