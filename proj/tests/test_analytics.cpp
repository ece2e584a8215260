#include "doctest.h"

#include <cmath>
#include <vector>

#include "stit/analytics.hpp"
#include "stit/mnw.hpp"
#include "stit/quadrature.hpp"

using namespace stit;

TEST_CASE("tail_exp: examples and stability at the series switch") {
    CHECK(tail_exp(1, 0.0) == 0.0);
    CHECK(tail_exp(2, 0.0) == 0.0);
    CHECK(tail_exp(3, 0.0) == 0.0);
    CHECK(tail_exp(1, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));

    // 50-term high-precision series oracle at u = -1
    long double sum = 0.0L, term = 1.0L;
    for (int k = 1; k <= 3; ++k) term *= -1.0L / k;
    sum = term;
    for (int k = 4; k <= 50; ++k) {
        term *= -1.0L / k;
        sum += term;
    }
    CHECK(tail_exp(3, -1.0) == doctest::Approx(static_cast<double>(sum)).epsilon(1e-14));

    for (int n = 1; n <= 3; ++n) {
        for (double u : {0.5, -0.5}) {
            double below = tail_exp(n, u * (1.0 - 1e-9));
            double above = tail_exp(n, u * (1.0 + 1e-9));
            CHECK(std::abs(below - above) < 1e-6 * std::max(1.0, std::abs(below)));
            CHECK(below * above >= 0.0);  // no sign flip across the guard
        }
    }
}

TEST_CASE("tail_ratio: continuous down to lambda = 0") {
    CHECK(tail_ratio(1, 2.0, 0.0) == doctest::Approx(-2.0));          // (-t)^1/1!
    CHECK(tail_ratio(2, 2.0, 0.0) == doctest::Approx(2.0));           // t^2/2!
    CHECK(tail_ratio(3, 2.0, 0.0) == doctest::Approx(-8.0 / 6.0));    // (-t)^3/3!
    for (double lam : {1e-12, 1e-6, 0.3, 0.51, 2.0, 50.0}) {
        double direct = tail_exp(3, -1.7 * lam) / std::pow(lam, 3);
        CHECK(tail_ratio(3, 1.7, lam) == doctest::Approx(direct).epsilon(1e-6));
    }
}

TEST_CASE("i_n: polynomial limits, quadrature oracle, large-lambda asymptotics") {
    CHECK(i_n(1, 0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(i_n(2, 0.0, 1.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK(i_n(3, 0.0, 1.0) == doctest::Approx(1.0 / 60.0).epsilon(1e-14));

    auto oracle = [](int n, double lam, double t) {
        double nf = n == 1 ? 1.0 : (n == 2 ? 1.0 : 2.0);
        return integrate(
                   [&](double s) {
                       return std::pow(t - s, n - 1) * s * s * std::exp(-lam * s);
                   },
                   0.0, t, {1e-13, 15}) /
               nf;
    };
    for (int n = 1; n <= 3; ++n)
        CHECK(i_n(n, 2.0, 1.0) == doctest::Approx(oracle(n, 2.0, 1.0)).epsilon(1e-10));

    // 100 random points in [0,10]^2 against the defining integral
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        double lam = 10.0 * rng.uniform();
        double t = 10.0 * rng.uniform();
        for (int n = 1; n <= 3; ++n) {
            double want = oracle(n, lam, t);
            double got = i_n(n, lam, t);
            CHECK(std::abs(got - want) <= 1e-8 * std::max(std::abs(want), 1e-300));
        }
    }

    // lambda -> infinity leading terms 2/l^3, 2lt/l^4, l^2t^2/l^5
    double l = 1e4, t = 1.0;
    CHECK(i_n(1, l, t) * l * l * l / 2.0 == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(i_n(2, l, t) * std::pow(l, 4) / (2.0 * l * t) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(i_n(3, l, t) * std::pow(l, 5) / (l * l * t * t) == doctest::Approx(1.0).epsilon(1e-2));

    // agreement of the two branches at the same point, just below the
    // series switch where the closed forms still have most of their digits
    auto closed = [](int n, double lam, double tt) {
        double x = lam * tt, e = std::exp(-x);
        switch (n) {
            case 1: return (2.0 - (x * x + 2.0 * x + 2.0) * e) / std::pow(lam, 3);
            case 2: return (2.0 * x - 6.0 + (x * x + 4.0 * x + 6.0) * e) / std::pow(lam, 4);
            default:
                return (x * x - 6.0 * x + 12.0 - (x * x + 6.0 * x + 12.0) * e) /
                       std::pow(lam, 5);
        }
    };
    for (int n = 1; n <= 3; ++n) {
        double lam = (1.0 - 1e-6) / 1.3;
        CHECK(i_n(n, lam, 1.3) == doctest::Approx(closed(n, lam, 1.3)).epsilon(1e-12));
    }
}

TEST_CASE("mean_edge_count") {
    auto sq = ConvexPolygon::square(1.0);
    CHECK(mean_edge_count(DrivingMeasure::isotropic(), sq, 0.0) == 0.0);
    CHECK(mean_edge_count(DrivingMeasure::isotropic(), sq, 1.0) ==
          doctest::Approx(5.0 / kPi).epsilon(1e-12));
    auto two = DrivingMeasure{1.0, DirectionalDistribution::atoms({{0.0, 0.5}, {kPi / 2, 0.5}})};
    CHECK(mean_edge_count(two, sq, 1.0) == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("variance integrands: limits and guard stability") {
    CHECK(var_count_integrand(1.0, 0.0) ==
          doctest::Approx(8.0 / (3.0 * kPi * kPi)).epsilon(1e-12));
    CHECK(var_length_integrand(1.0, 0.0) == doctest::Approx(2.0));
    // series-expansion oracle near zero
    for (double r : {1e-8, 1e-5, 1e-3}) {
        double x = 2.0 * r / kPi;
        double series = 8.0 / (3.0 * kPi * kPi) - x * x * x * x / 24.0 * 2.0 * kPi / (r * r * r);
        CHECK(var_count_integrand(1.0, r) == doctest::Approx(series).epsilon(1e-4));
    }
    // no jumps across the tail_exp switch at x = 0.5, i.e. r = pi/4
    double r0 = kPi / 4.0;
    CHECK(std::abs(var_count_integrand(1.0, r0 * (1 - 1e-9)) -
                   var_count_integrand(1.0, r0 * (1 + 1e-9))) < 1e-6);
}

TEST_CASE("isotropic variance formulas on the unit disk") {
    auto disk = WindowShape::disk(1.0);
    auto rep = var_edge_count_iso(1.0, disk);
    CHECK(rep.boundary_term == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.area_term == doctest::Approx(3.0).epsilon(1e-12));
    // value pinned against a 30-digit evaluation of the same closed form
    CHECK(rep.variance == doctest::Approx(5.659926197901139).epsilon(1e-9));
    CHECK(rep.boundary_term + rep.area_term + rep.integral_term ==
          doctest::Approx(rep.variance));

    CHECK(var_edge_length_iso(1.0, disk) == doctest::Approx(4.496361483876133).epsilon(1e-9));
    CHECK(var_edge_length_iso(0.0, disk) == 0.0);

    // truncation beyond the diameter contributes nothing
    double tail = integrate([&](double r) { return disk.gamma_bar(r) * var_count_integrand(1.0, r); },
                            2.0, 10.0);
    CHECK(std::abs(tail) < 1e-10);
}

TEST_CASE("pair correlation function") {
    // pinned high-precision values at t = 2
    CHECK(pcf_vertices(2.0, 0.2) == doctest::Approx(2.684046790027057).epsilon(1e-12));
    CHECK(pcf_vertices(2.0, 0.3) == doctest::Approx(2.07107289103116).epsilon(1e-12));
    CHECK(pcf_vertices(2.0, 0.5) == doctest::Approx(1.586895854114844).epsilon(1e-12));
    CHECK(pcf_vertices(2.0, 1.0) == doctest::Approx(1.2383181925916042).epsilon(1e-12));

    CHECK(pcf_vertices(1.0, 1e6) == doctest::Approx(1.0).epsilon(1e-9));
    for (double t : {0.5, 1.0, 2.0})
        for (double r = 0.01; r <= 20.0; r *= 1.37) CHECK(pcf_vertices(t, r) >= 1.0);

    // continuity across the series guard x = 0.5 (r = pi/(4t) at t = 1)
    double rs = kPi / 4.0;
    CHECK(pcf_vertices(1.0, rs * (1 - 1e-9)) ==
          doctest::Approx(pcf_vertices(1.0, rs * (1 + 1e-9))).epsilon(1e-9));

    CHECK_THROWS_AS(pcf_vertices(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(pcf_vertices(0.0, 1.0), std::invalid_argument);

    // leading-term agreement with the count-variance integrand:
    // 2 pi r (2t^2/pi)^2 (g-1)/4 ~ 4 t^2/(pi r) for large r
    double t = 1.0, r = 300.0;
    double lhs = 2.0 * kPi * r * std::pow(2.0 * t * t / kPi, 2) * (pcf_vertices(t, r) - 1.0) / 4.0;
    double rhs = 4.0 * t * t / (kPi * r);
    CHECK(lhs / rhs == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("K function: derivative identity, diagonal atom, integral form") {
    const double t = 1.0, R = 1.0;
    const double h = 1e-4;
    double dK = (k_function(t, R + h) - k_function(t, R - h)) / (2.0 * h);
    CHECK(dK == doctest::Approx(2.0 * kPi * R * pcf_vertices(t, R)).epsilon(1e-6));

    CHECK(k_function(1.0, 1.0) == doctest::Approx(8.86035107324917).epsilon(1e-8));
    CHECK(k_diagonal_atom(1.0) == doctest::Approx(kPi / 2.0));
    CHECK(k_diagonal_atom(2.0) == doctest::Approx(kPi / 8.0));

    // atom equals the full I^1 integral (quadrature oracle)
    double atom_quad =
        2.0 * integrate([&](double r) { return i_n(1, 2.0 * r / kPi, 1.0); }, 0.0, kInf);
    CHECK(atom_quad == doctest::Approx(k_diagonal_atom(1.0)).epsilon(1e-8));

    // factorial version matches the integral of 2 pi r g
    double ktilde_quad =
        integrate([&](double r) { return 2.0 * kPi * r * pcf_vertices(1.0, r); }, 0.0, 1.0);
    CHECK(k_function(1.0, 1.0) - k_diagonal_atom(1.0) ==
          doctest::Approx(ktilde_quad).epsilon(1e-7));
}

TEST_CASE("radial distribution and PLT comparison") {
    // rho = lambda dK/dr = 4 t^2 r g(r)
    CHECK(radial_distribution(1.0, 1.0) ==
          doctest::Approx(4.0 * pcf_vertices(1.0, 1.0)).epsilon(1e-12));
    // rho / rho_PLT -> 2
    double t = 1.5;
    CHECK(radial_distribution(t, 5e3) / plt_radial(t, 5e3) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(plt_pcf(1.0, 4.0 / kPi) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("cross-correlation and cross-K") {
    const double t = 1.0, R = 1.0, h = 1e-4;
    double dK = (cross_k(t, R + h) - cross_k(t, R - h)) / (2.0 * h);
    CHECK(dK == doctest::Approx(2.0 * kPi * R * cross_correlation(t, R)).epsilon(1e-6));
    CHECK(cross_k(1.0, 1.0) == doctest::Approx(5.767606127387162).epsilon(1e-8));
    CHECK(cross_correlation(1.0, 1e6) == doctest::Approx(1.0).epsilon(1e-9));
    // guard continuity
    double rs = kPi / 4.0;
    CHECK(cross_correlation(1.0, rs * (1 - 1e-9)) ==
          doctest::Approx(cross_correlation(1.0, rs * (1 + 1e-9))).epsilon(1e-9));
    // cross-K of CSR-like independence would be pi R^2; STIT exceeds it
    CHECK(cross_k(1.0, 1.0) > kPi);
}

TEST_CASE("comparison curves and asymptotic variances") {
    auto plt_g = comparison_curve(TessellationModel::Plt, CurveStatistic::G, 1.0, {0.5, 1.0, 2.0});
    CHECK(plt_g.statistic == "plt_g");
    for (auto [r, v] : plt_g.grid) CHECK(v == doctest::Approx(1.0 + 4.0 / (kPi * r)));
    CHECK_THROWS_AS(
        comparison_curve(TessellationModel::Pvt, CurveStatistic::G, 1.0, {1.0}),
        std::invalid_argument);
    CHECK_THROWS_AS(
        comparison_curve(TessellationModel::Plt, CurveStatistic::K, 1.0, {1.0}),
        std::invalid_argument);

    double e = std::exp(1.0);
    CHECK(asymptotic_variance_nv(TessellationModel::Stit, 1.0, {1.0, false}, e) ==
          doctest::Approx(16.0 / kPi * e * e));
    CHECK(asymptotic_variance_nv(TessellationModel::Pvt, 1.0, {kPi, true}, 1.0) ==
          doctest::Approx(2.0 * kPi));
    CHECK(asymptotic_variance_nv(TessellationModel::Plt, 1.0, {kPi, true}, 2.0) ==
          doctest::Approx(4.0 / (kPi * kPi) * 8.0 * 16.0 * kPi / 3.0));
    CHECK_THROWS_AS(asymptotic_variance_nv(TessellationModel::Plt, 1.0, {1.0, false}, 2.0),
                    std::invalid_argument);
}

TEST_CASE("general-measure second-order totals: exact zero at t = 0 and isotropic cross-check") {
    auto W = ConvexPolygon::square(1.0);
    auto iso = DrivingMeasure::isotropic();
    Rng rng(90210);
    auto zero = edge_totals_second_order(iso, W, 0.0, 100, rng);
    CHECK(zero.var_sigma_lambda.value == 0.0);
    CHECK(zero.cov_lambda_count.value == 0.0);
    CHECK(zero.var_count.value == 0.0);

    auto res = edge_totals_second_order(iso, W, 1.0, 300000, rng);
    auto square = WindowShape::polygon(W, 512);
    double want_count = var_edge_count_iso(1.0, square).variance;
    double want_sl = std::pow(2.0 / kPi, 2) * var_edge_length_iso(1.0, square);
    CHECK(std::abs(res.var_count.value - want_count) < 3.5 * res.var_count.se);
    CHECK(std::abs(res.var_sigma_lambda.value - want_sl) < 3.5 * res.var_sigma_lambda.se);

    // the covariance output against a simulated sample covariance
    const std::size_t n = 20000;
    StreamId master{777777};
    std::vector<double> sl(n), s1(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto Y = construct(iso, W, 1.0, master.child(i));
        sl[i] = 2.0 / kPi * Y.total_edge_length();
        s1[i] = static_cast<double>(Y.edges.size());
    }
    double ml = 0.0, m1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) { ml += sl[i]; m1 += s1[i]; }
    ml /= n;
    m1 /= n;
    double cov = 0.0, m22 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (sl[i] - ml) * (s1[i] - m1);
        m22 += (sl[i] - ml) * (sl[i] - ml) * (s1[i] - m1) * (s1[i] - m1);
    }
    cov /= n - 1.0;
    double se_cov = std::sqrt((m22 / n - cov * cov) / n);
    double se = std::sqrt(se_cov * se_cov + res.cov_lambda_count.se * res.cov_lambda_count.se);
    CHECK(std::abs(res.cov_lambda_count.value - cov) < 3.5 * se);
}

TEST_CASE("vertex covariance kernels: symmetry and locality") {
    auto A = ConvexPolygon::square(0.3, {0.35, 0.35});
    auto B = ConvexPolygon::square(0.2, {8.0, 8.0});  // far away at this scale
    auto iso = DrivingMeasure::isotropic();

    Rng r1(5), r2(5);
    auto ab = vertex_covariance(A, A, iso, 1.0, 50000, r1);
    auto ba = vertex_covariance(A, A, iso, 1.0, 50000, r2);
    CHECK(ab.value == doctest::Approx(ba.value));  // identical stream, symmetric kernel
    CHECK(ab.value > 0.0);                         // variance of a count

    Rng r3(9);
    auto far = vertex_covariance(A, B, iso, 1.0, 50000, r3);
    CHECK(std::abs(far.value) <= 3.0 * far.se + 1e-9);

    Rng r4(11);
    auto far3 = vertex_length_covariance(A, B, iso, 1.0, 50000, r4);
    CHECK(std::abs(far3.value) <= 3.0 * far3.se + 1e-9);
}

TEST_CASE("vertex covariance kernels against the pair-correlation route") {
    // independent evaluation of the same covariances through the reduced
    // second-order functions:
    //   Var(N_v(A))    = lam1 |A| + lam1^2 int (g - 1) 2 pi r gamma_A(r) dr
    //   Cov(N_v, E)(A) = lam1 lam2 int (g12 - 1) 2 pi r gamma_A(r) dr
    auto A = ConvexPolygon::square(0.3, {0.35, 0.35});
    auto iso = DrivingMeasure::isotropic();
    const double t = 1.0;
    const double lam1 = 2.0 * t * t / kPi, lam2 = t;
    auto gbar = [&](double r) { return isotropized_set_covariance(A, r, 256); };
    double i_g = integrate(
        [&](double r) { return (pcf_vertices(t, r) - 1.0) * 2.0 * kPi * r * gbar(r); }, 1e-9,
        0.3 * std::sqrt(2.0), {1e-10, 12});
    double want_var = lam1 * A.area() + lam1 * lam1 * i_g;
    double i_g12 = integrate(
        [&](double r) { return (cross_correlation(t, r) - 1.0) * 2.0 * kPi * r * gbar(r); },
        1e-9, 0.3 * std::sqrt(2.0), {1e-10, 12});
    double want_cov = lam1 * lam2 * i_g12;

    Rng r1(2029), r2(2030);
    auto var_k = vertex_covariance(A, A, iso, t, 400000, r1);
    auto cov_k = vertex_length_covariance(A, A, iso, t, 400000, r2);
    CHECK(std::abs(var_k.value - want_var) < 3.5 * var_k.se);
    CHECK(std::abs(cov_k.value - want_cov) < 3.5 * cov_k.se);
    CHECK(var_k.se / want_var < 0.05);
    CHECK(cov_k.se / want_cov < 0.05);
}
