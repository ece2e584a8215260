#include "stit/validation.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "stit/analytics.hpp"
#include "stit/estimators.hpp"
#include "stit/functionals.hpp"
#include "stit/io.hpp"
#include "stit/mnw.hpp"
#include "stit/quadrature.hpp"

namespace stit {

namespace {

struct Ctx {
    ValidationOptions opts;
    StreamId master;
    double zgate;  // 3 full, 4 quick

    double mut(const std::string& name, double v) const {
        return name == opts.mutate ? 1.25 * v : v;
    }
    std::size_t reps(std::size_t full, std::size_t quick) const {
        return opts.quick ? quick : full;
    }
};

std::string fmt(double v, int prec = 5) {
    std::ostringstream s;
    s << std::setprecision(prec) << v;
    return s.str();
}

double sample_cov(const std::vector<double>& x, const std::vector<double>& y, double* se) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= n;
    my /= n;
    double c = 0.0, m22 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double a = x[i] - mx, b = y[i] - my;
        c += a * b;
        m22 += a * a * b * b;
    }
    c /= n - 1.0;
    if (se) *se = std::sqrt(std::max(0.0, m22 / n - c * c) / n);
    return c;
}

// --------------------------------------------------------------------------
// Criterion 1: first-order mean of the edge count
// --------------------------------------------------------------------------
CriterionResult c1_mean_edge_count(const Ctx& ctx) {
    auto W = ConvexPolygon::square(1.0);
    auto iso = DrivingMeasure::isotropic();
    std::size_t n = ctx.reps(20000, 2000);
    std::ostringstream detail;
    bool pass = true;
    for (double t : {1.0, 2.0}) {
        auto est = mc_moments(iso, W, t, Statistic::EdgeCount, n,
                              ctx.master.child(static_cast<std::uint64_t>(t)), ctx.opts.threads);
        double target = ctx.mut("mean_edge_count", mean_edge_count(iso, W, t));
        double z = (est.mean - target) / est.se_mean;
        pass = pass && std::abs(z) <= ctx.zgate;
        detail << "t=" << t << ": mean " << fmt(est.mean) << " vs " << fmt(target) << " (z="
               << fmt(z, 3) << ") ";
    }
    return {"1", "mean edge count (boundary-corrected first-order formula)", pass, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 2: the A_1 identity and exact structure, per realization
// --------------------------------------------------------------------------
CriterionResult c2_a1_identity(const Ctx& ctx) {
    auto W = ConvexPolygon::square(1.0);
    auto iso = DrivingMeasure::isotropic();
    const std::size_t n_reals = ctx.reps(100, 20);
    const std::size_t n_lines = ctx.reps(2000, 500);
    StreamId master = ctx.master.child(2);
    std::size_t z_violations = 0, structure_violations = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < n_reals; ++i) {
        auto Y = construct(iso, W, 1.0, master.child(i));
        if (Y.cells.size() != Y.edges.size() + 1) ++structure_violations;
        if (Y.interior_vertex_count() !=
            2 * Y.edges.size() - Y.boundary_endpoint_count())
            ++structure_violations;
        double target = hit_measure_convex(iso, W) + sigma(Y, EdgeFunctional::hit_measure(iso));
        Rng rng = master.child(1000000 + i).rng();
        auto est = a_phi(Y, iso, section_ones(), n_lines, rng);
        double z = est.se > 0.0 ? (est.mean - target) / est.se : 0.0;
        worst = std::max(worst, std::abs(z));
        if (std::abs(z) > ctx.zgate) ++z_violations;
    }
    bool pass = z_violations == 0 && structure_violations == 0;
    std::ostringstream detail;
    detail << n_reals << " realizations, worst |z|=" << fmt(worst, 3) << ", structure violations "
           << structure_violations;
    return {"2", "A_1 identity and exact combinatorial structure", pass, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 3: isotropic variance closed forms on the disk
// --------------------------------------------------------------------------
CriterionResult c3_variance_disk(const Ctx& ctx) {
    auto disk_poly = ConvexPolygon::regular_ngon(256, 1.0);
    auto iso = DrivingMeasure::isotropic();
    std::size_t n = ctx.reps(100000, 5000);
    auto disk = WindowShape::disk(1.0);

    auto count = mc_moments(iso, disk_poly, 1.0, Statistic::EdgeCount, n, ctx.master.child(31),
                            ctx.opts.threads);
    double want_count = ctx.mut("var_edge_count", var_edge_count_iso(1.0, disk).variance);
    double z1 = (count.variance - want_count) / count.se_variance;

    auto len = mc_moments(iso, disk_poly, 1.0, Statistic::EdgeLength, n, ctx.master.child(32),
                          ctx.opts.threads);
    double want_len = ctx.mut("var_edge_length", var_edge_length_iso(1.0, disk));
    double z2 = (len.variance - want_len) / len.se_variance;

    bool pass = std::abs(z1) <= ctx.zgate && std::abs(z2) <= ctx.zgate;
    std::ostringstream detail;
    detail << "Var(S1) " << fmt(count.variance) << " vs " << fmt(want_count) << " (z="
           << fmt(z1, 3) << "); Var(Sl) " << fmt(len.variance) << " vs " << fmt(want_len)
           << " (z=" << fmt(z2, 3) << ")";
    return {"3", "variance closed forms, disk window", pass, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 4: general-measure second-order formulas (Monte Carlo kernels)
// --------------------------------------------------------------------------
CriterionResult c4_general_kernels(const Ctx& ctx) {
    auto W = ConvexPolygon::square(1.0);
    auto iso = DrivingMeasure::isotropic();
    std::size_t nk = ctx.reps(1000000, 100000);
    Rng rng = ctx.master.child(41).rng();
    auto res = edge_totals_second_order(iso, W, 1.0, nk, rng);
    double closed =
        ctx.mut("general_variance_closed", var_edge_count_iso(1.0, WindowShape::polygon(W, 512)).variance);
    double z_iso = (res.var_count.value - closed) / res.var_count.se;

    auto two = DrivingMeasure{1.0, DirectionalDistribution::atoms({{0.0, 0.5}, {kPi / 2, 0.5}})};
    Rng rng2 = ctx.master.child(42).rng();
    auto res2 = edge_totals_second_order(two, W, 1.0, nk, rng2);
    auto sim = mc_moments(two, W, 1.0, Statistic::EdgeCount, ctx.reps(100000, 10000),
                          ctx.master.child(43), ctx.opts.threads);
    double se_comb = std::sqrt(res2.var_count.se * res2.var_count.se +
                               sim.se_variance * sim.se_variance);
    double z_atoms = (res2.var_count.value - sim.variance) / se_comb;

    bool pass = std::abs(z_iso) <= ctx.zgate && std::abs(z_atoms) <= ctx.zgate;
    std::ostringstream detail;
    detail << "iso Var(S1) " << fmt(res.var_count.value) << " vs closed " << fmt(closed)
           << " (z=" << fmt(z_iso, 3) << "); atoms " << fmt(res2.var_count.value) << " vs sim "
           << fmt(sim.variance) << " (z=" << fmt(z_atoms, 3) << ")";
    return {"4", "general-measure variance kernel vs closed form and simulation", pass, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 5: Poisson sections and same-cell probabilities (property 4)
// --------------------------------------------------------------------------
CriterionResult c5_property4(const Ctx& ctx) {
    auto W = ConvexPolygon::square(2.0);
    auto iso = DrivingMeasure::isotropic();
    // corner chord of length pi/2: {x + y = pi/(2 sqrt 2) * sqrt 2}
    LineP line(kPi / 4.0, kPi / 4.0);
    auto chord = clip_line(W, line);
    auto rep = chord_poisson_test(iso, W, 2.0, line, ctx.reps(4000, 1000), ctx.master.child(51),
                                  ctx.opts.threads);
    double target = ctx.mut("chord_mean", rep.target_mean);
    double z_mean = (rep.mean - target) / rep.se_mean;
    double dlo = ctx.opts.quick ? 0.8 : 0.9, dhi = ctx.opts.quick ? 1.2 : 1.1;
    double pmin = ctx.opts.quick ? 0.005 : 0.01;
    bool pass = std::abs(z_mean) <= ctx.zgate && rep.dispersion >= dlo &&
                rep.dispersion <= dhi && rep.gof_p > pmin;

    auto rows = same_cell_test(iso, W, 1.0, {0.4, 0.8, kPi / 2.0}, ctx.reps(10000, 2000),
                               ctx.master.child(52), ctx.opts.threads);
    std::ostringstream detail;
    detail << "chord len " << fmt(chord->length(), 4) << ": mean " << fmt(rep.mean) << " vs "
           << fmt(target) << " (z=" << fmt(z_mean, 3) << "), dispersion "
           << fmt(rep.dispersion, 4) << ", GOF p=" << fmt(rep.gof_p, 3) << "; same-cell z:";
    for (const auto& row : rows) {
        pass = pass && std::abs(row.z) <= ctx.zgate;
        detail << " " << fmt(row.z, 3);
    }
    return {"5", "Poisson chord sections and same-cell law", pass, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 6: pair-correlation function of the vertices
// --------------------------------------------------------------------------
CriterionResult c6_pcf(const Ctx& ctx) {
    auto W = ConvexPolygon::square(1.0);
    auto iso = DrivingMeasure::isotropic();
    const double t = 2.0;
    const std::size_t n = ctx.reps(500, 200);
    const double tol = ctx.opts.quick ? 0.15 : 0.05;
    StreamId master = ctx.master.child(61);

    // pass 1: pooled intensity for the bandwidth rule
    double total = 0.0;
    std::vector<double> counts(n);
    for (std::size_t i = 0; i < n; ++i) {
        counts[i] = static_cast<double>(
            vertices(construct(iso, W, t, master.child(i))).points.size());
        total += counts[i];
    }
    double lambda_hat = total / (static_cast<double>(n) * W.area());
    double h = default_pcf_bandwidth(lambda_hat);

    std::vector<double> grid;
    for (double r = 0.2; r <= 1.0 + 1e-12; r += 0.1) grid.push_back(r);
    PcfAccumulator acc(W, h, grid, /*boundary_buffer=*/true);
    for (std::size_t i = 0; i < n; ++i)
        acc.add(vertices(construct(iso, W, t, master.child(i))));
    auto curve = acc.estimate();

    double max_err = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double target = ctx.mut("pcf", pcf_vertices(t, grid[k]));
        max_err = std::max(max_err, std::abs(curve.value[k] - target));
    }
    auto intensity = summarize(counts, master.child(999));
    double z_int =
        (intensity.mean / W.area() - ctx.mut("vertex_intensity", 2.0 * t * t / kPi)) /
        (intensity.se_mean / W.area());

    bool pass = max_err < tol && std::abs(z_int) <= ctx.zgate;
    std::ostringstream detail;
    detail << "max |g_hat - g| = " << fmt(max_err, 4) << " (tol " << tol << ", h=" << fmt(h, 3)
           << ", " << n << " reps); intensity z=" << fmt(z_int, 3);

    if (!ctx.opts.quick) {
        // the same comparison at a replication count where the estimator's
        // own noise falls below the tolerance (informational)
        const std::size_t big = 100000;
        StreamId m2 = ctx.master.child(62);
        PcfAccumulator acc2(W, h, grid, true);
        for (std::size_t i = 0; i < big; ++i)
            acc2.add(vertices(construct(iso, W, t, m2.child(i))));
        auto c2 = acc2.estimate();
        double err2 = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k)
            err2 = std::max(err2, std::abs(c2.value[k] - pcf_vertices(t, grid[k])));
        detail << "; at " << big << " reps max err = " << fmt(err2, 4);
    }
    return {"6", "vertex pair-correlation function (pooled kernel estimate)", pass,
            detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 7: cross-K between vertices and edge length
// --------------------------------------------------------------------------
CriterionResult c7_cross_k(const Ctx& ctx) {
    auto W = ConvexPolygon::square(1.0);
    auto iso = DrivingMeasure::isotropic();
    const double t = 2.0;
    const std::size_t n = ctx.reps(500, 200);
    const double tol = ctx.opts.quick ? 0.15 : 0.05;
    StreamId master = ctx.master.child(71);

    std::vector<double> grid;
    for (double r = 0.2; r <= 1.0 + 1e-12; r += 0.1) grid.push_back(r);
    CrossKAccumulator acc(W, grid, 0.01);
    for (std::size_t i = 0; i < n; ++i) acc.add(construct(iso, W, t, master.child(i)));
    auto curve = acc.estimate();

    double max_rel = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        double target = ctx.mut("cross_k", cross_k(t, grid[k]));
        max_rel = std::max(max_rel, std::abs(curve.value[k] - target) / target);
    }
    bool pass = max_rel < tol;
    std::ostringstream detail;
    detail << "max rel err = " << fmt(100.0 * max_rel, 3) << "% (tol " << 100.0 * tol << "%, "
           << n << " reps)";
    return {"7", "cross-K of vertices and edge-length measure", pass, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 8: vertex covariance kernels against simulated region covariances
// --------------------------------------------------------------------------
CriterionResult c8_kernels(const Ctx& ctx) {
    auto W = ConvexPolygon::square(1.0);
    auto A = ConvexPolygon::square(0.3, {0.35, 0.35});
    auto iso = DrivingMeasure::isotropic();
    const double t = 1.0;
    const std::size_t n_sim = ctx.reps(100000, 10000);
    const std::size_t n_kernel = ctx.reps(1000000, 200000);
    StreamId master = ctx.master.child(81);

    std::vector<double> nv(n_sim), el(n_sim);
    parallel_for(n_sim, ctx.opts.threads, [&](std::size_t i) {
        auto Y = construct(iso, W, t, master.child(i));
        double c = 0.0;
        for (const Vec2& p : vertices(Y).points)
            if (A.contains(p)) c += 1.0;
        nv[i] = c;
        el[i] = edge_length_in(Y, A);
    });
    auto nv_est = summarize(nv, master.child(1000001));
    double se_cov = 0.0;
    double cov_sim = sample_cov(nv, el, &se_cov);

    Rng rk1 = ctx.master.child(82).rng();
    auto var_kernel = vertex_covariance(A, A, iso, t, n_kernel, rk1);
    Rng rk2 = ctx.master.child(83).rng();
    auto cov_kernel = vertex_length_covariance(A, A, iso, t, n_kernel, rk2);

    double z_var = (var_kernel.value - nv_est.variance) /
                   std::sqrt(var_kernel.se * var_kernel.se +
                             nv_est.se_variance * nv_est.se_variance);
    double z_cov = (cov_kernel.value - cov_sim) /
                   std::sqrt(cov_kernel.se * cov_kernel.se + se_cov * se_cov);
    bool pass = std::abs(z_var) <= ctx.zgate && std::abs(z_cov) <= ctx.zgate;
    std::ostringstream detail;
    detail << "Var(Nv(A)): kernel " << fmt(var_kernel.value) << " vs sim "
           << fmt(nv_est.variance) << " (z=" << fmt(z_var, 3) << "); Cov(Nv,E): kernel "
           << fmt(cov_kernel.value) << " vs sim " << fmt(cov_sim) << " (z=" << fmt(z_cov, 3)
           << ")";
    return {"8", "vertex covariance kernels vs simulation", pass, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 9: internal analytic consistency
// --------------------------------------------------------------------------
CriterionResult c9_consistency(const Ctx& ctx) {
    bool pass = true;
    std::ostringstream detail;

    // dK/dr = 2 pi r g with central differences
    double worst_k = 0.0;
    for (double t : {1.0, 2.0})
        for (double r : {0.3, 0.7, 1.0, 1.5}) {
            const double h = 1e-4;
            double dk = (k_function(t, r + h) - k_function(t, r - h)) / (2.0 * h);
            double want = 2.0 * kPi * r * pcf_vertices(t, r);
            worst_k = std::max(worst_k, std::abs(dk - want) / want);
            double dk12 = (cross_k(t, r + h) - cross_k(t, r - h)) / (2.0 * h);
            double want12 = 2.0 * kPi * r * cross_correlation(t, r);
            worst_k = std::max(worst_k, std::abs(dk12 - want12) / want12);
        }
    pass = pass && worst_k < 1e-5;
    detail << "max dK/dr rel err " << fmt(worst_k, 3);

    // I^n against adaptive quadrature of the defining integral
    Rng rng = ctx.master.child(91).rng();
    double worst_i = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        double lam = 10.0 * rng.uniform(), t = 10.0 * rng.uniform();
        for (int n = 1; n <= 3; ++n) {
            double nf = n == 3 ? 2.0 : 1.0;
            double want = integrate(
                              [&](double s) {
                                  return std::pow(t - s, n - 1) * s * s * std::exp(-lam * s);
                              },
                              0.0, t, {1e-13, 15}) /
                          nf;
            if (want > 0.0)
                worst_i = std::max(worst_i, std::abs(i_n(n, lam, t) - want) / want);
        }
    }
    pass = pass && worst_i < 1e-8;
    detail << "; max I^n rel err " << fmt(worst_i, 3);

    // series-guard stability: no sign flips, no jumps above 1e-6
    double worst_jump = 0.0;
    bool sign_ok = true;
    for (int n = 1; n <= 3; ++n)
        for (double u : {0.5, -0.5}) {
            double lo = tail_exp(n, u * (1.0 - 1e-9));
            double hi = tail_exp(n, u * (1.0 + 1e-9));
            worst_jump = std::max(worst_jump, std::abs(hi - lo));
            sign_ok = sign_ok && lo * hi >= 0.0;
        }
    for (double t : {0.5, 1.0, 2.0}) {
        double r0 = kPi / (4.0 * t);  // x = 2 t r / pi crosses 1/2 here
        double lo = var_count_integrand(t, r0 * (1.0 - 1e-9));
        double hi = var_count_integrand(t, r0 * (1.0 + 1e-9));
        worst_jump = std::max(worst_jump, std::abs(hi - lo));
        sign_ok = sign_ok && lo * hi >= 0.0;
        worst_jump = std::max(
            worst_jump, std::abs(pcf_vertices(t, r0 * (1.0 + 1e-9)) -
                                 pcf_vertices(t, r0 * (1.0 - 1e-9))));
        worst_jump = std::max(
            worst_jump, std::abs(cross_correlation(t, r0 * (1.0 + 1e-9)) -
                                 cross_correlation(t, r0 * (1.0 - 1e-9))));
        double rl = kPi / (2.0 * t);  // i_n series switch at lambda t = 1
        for (int n = 1; n <= 3; ++n)
            worst_jump = std::max(worst_jump,
                                  std::abs(i_n(n, 2.0 * rl * (1.0 + 1e-9) / kPi, t) -
                                           i_n(n, 2.0 * rl * (1.0 - 1e-9) / kPi, t)));
    }
    pass = pass && worst_jump < 1e-6 && sign_ok;
    detail << "; max guard jump " << fmt(worst_jump, 3) << (sign_ok ? "" : "; SIGN FLIP");
    return {"9", "internal analytic consistency (dK/dr, I^n, series guards)", pass,
            detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 10: central limit diagnostics
// --------------------------------------------------------------------------
CriterionResult c10_clt(const Ctx& ctx) {
    auto W = ConvexPolygon::square(1.0);
    auto iso = DrivingMeasure::isotropic();
    bool pass = true;
    std::ostringstream detail;

    // (a) variance of the reduced martingale statistic
    auto hat = sigma_hat_samples(iso, W, 1.0, ctx.reps(20000, 4000), ctx.master.child(101),
                                 ctx.opts.threads);
    auto hat_est = summarize(hat, ctx.master.child(102));
    double want = ctx.mut("sigma_hat_var",
                          hit_measure_convex(iso, W) + 0.5 * point_intersection_density(iso));
    double za = (hat_est.variance - want) / hat_est.se_variance;
    pass = pass && std::abs(za) <= ctx.zgate;
    detail << "Var(Sigma_hat) " << fmt(hat_est.variance) << " vs " << fmt(want) << " (z="
           << fmt(za, 3) << ")";

    // (b) slope of C_t on t L_t at R = 32
    std::vector<double> grid{0.2, 0.4, 0.6, 0.8, 1.0};
    auto paths32 = clt_paths(W, 32.0, grid, ctx.reps(500, 150), ctx.master.child(103),
                             ctx.opts.threads);
    auto rep32 = clt_diagnostics(paths32);
    double slo = ctx.opts.quick ? 0.6 : 0.8, shi = ctx.opts.quick ? 1.4 : 1.2;
    pass = pass && rep32.slope >= slo && rep32.slope <= shi;
    detail << "; slope " << fmt(rep32.slope, 4) << " in [" << slo << "," << shi << "]"
           << ", corr(L_.2,L_1) " << fmt(rep32.cross_time_corr, 4);

    // (c) variance ratio trend over R, (d) skewness at the largest R
    auto sq = WindowShape::polygon(W, 512);
    auto exact_ratio = [&](double R) {
        // Var(Sigma_Lambda(Y(t + 1/log R, W_R))) / (R^2 log R (4/pi) Area)
        double tau = 1.0 + 1.0 / std::log(R);
        double c = 2.0 * tau * R / kPi;
        double integral = integrate(
            [&](double s) { return -sq.gamma_bar(s) * std::expm1(-c * s) / s; }, 0.0,
            std::sqrt(2.0), {1e-9, 12});
        return integral / std::log(R);
    };
    std::vector<double> ratios, exact;
    double skew64 = 0.0;
    for (double R : {8.0, 16.0, 32.0, 64.0}) {
        auto paths = clt_paths(W, R, {1.0}, ctx.reps(4000, 400),
                               ctx.master.child(1040 + static_cast<std::uint64_t>(R)),
                               ctx.opts.threads);
        auto rep = clt_diagnostics(paths);
        ratios.push_back(rep.var_L1 / rep.target_var);
        exact.push_back(exact_ratio(R));
        if (R == 64.0) skew64 = rep.skewness;
    }
    bool monotone = true;
    detail << "; ratios";
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        detail << " " << fmt(ratios[i], 4);
        if (i > 0 && ratios[i] <= ratios[i - 1]) monotone = false;
    }
    pass = pass && monotone;
    detail << (monotone ? " (increasing" : " (NOT increasing") << "; exact";
    for (double e : exact) detail << " " << fmt(e, 4);
    detail << ")";
    double skew_tol = ctx.opts.quick ? 0.6 : 0.3;
    pass = pass && std::abs(skew64) < skew_tol;
    detail << "; skew(L_1;R=64) " << fmt(skew64, 3);
    return {"10", "functional CLT diagnostics", pass, detail.str()};
}

// --------------------------------------------------------------------------
// Criterion 11: consistency and iteration semigroup z-scores
// --------------------------------------------------------------------------
CriterionResult c11_structural(const Ctx& ctx) {
    auto W = ConvexPolygon::square(1.0);
    auto iso = DrivingMeasure::isotropic();
    auto rep = consistency_and_iteration_suite(iso, W, 0.5, 0.5, ctx.reps(10000, 2000),
                                               ctx.master.child(111), ctx.opts.threads);
    bool pass = rep.max_abs_z() <= ctx.zgate;
    std::ostringstream detail;
    for (const auto& row : rep.rows)
        detail << row.name << " z_mean=" << fmt(row.z_mean, 3) << " z_var=" << fmt(row.z_var, 3)
               << "; ";
    detail << "scaling z=" << fmt(rep.scaling_density_z, 3);
    return {"11", "consistency and iteration semigroup", pass, detail.str()};
}

} // namespace

bool ValidationReport::all_pass() const {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

ValidationReport run_validation(const ValidationOptions& opts, std::ostream& log) {
    Ctx ctx{opts, StreamId{opts.seed}, opts.quick ? 4.0 : 3.0};
    using Fn = CriterionResult (*)(const Ctx&);
    const std::pair<const char*, Fn> criteria[] = {
        {"1", c1_mean_edge_count}, {"2", c2_a1_identity},  {"3", c3_variance_disk},
        {"4", c4_general_kernels},        {"5", c5_property4},    {"6", c6_pcf},
        {"7", c7_cross_k},         {"8", c8_kernels},      {"9", c9_consistency},
        {"10", c10_clt},           {"11", c11_structural},
    };
    ValidationReport report;
    log << "acceptance suite: seed=" << opts.seed << (opts.quick ? " (quick)" : "")
        << (opts.mutate.empty() ? "" : " mutate=" + opts.mutate) << "\n";
    for (const auto& [id, fn] : criteria) {
        if (!opts.only.empty() && opts.only != id) continue;
        CriterionResult r = fn(ctx);
        report.results.push_back(r);
        log << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.name
            << "\n         " << r.detail << "\n";
        log.flush();
    }
    log << (report.all_pass() ? "ALL CRITERIA PASSED\n" : "CRITERIA FAILED\n");
    return report;
}

} // namespace stit
