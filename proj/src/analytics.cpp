#include "stit/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stit {

namespace {

constexpr double kSeriesSwitch = 0.5;  // |u| below which tails use direct summation

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

} // namespace

double tail_exp(int n, double u) {
    require(n >= 0 && n <= 10, "tail_exp: n out of range");
    if (u == 0.0) return n == 0 ? 1.0 : 0.0;
    if (std::abs(u) < kSeriesSwitch) {
        double term = 1.0;
        for (int k = 1; k <= n; ++k) term *= u / k;  // u^n / n!
        double sum = term;
        for (int k = n + 1; k < n + 60; ++k) {
            term *= u / k;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    double partial = 0.0, term = 1.0;
    for (int k = 0; k < n; ++k) {
        partial += term;
        term *= u / (k + 1);
    }
    return std::exp(u) - partial;
}

double tail_ratio(int n, double t, double lambda) {
    require(n >= 1 && n <= 10, "tail_ratio: n out of range");
    require(lambda >= 0.0 && t >= 0.0, "tail_ratio: negative argument");
    const double x = t * lambda;
    if (x < kSeriesSwitch) {
        // sum_{j>=0} (-t)^{n+j} lambda^j / (n+j)!  - well defined at lambda = 0
        double term = 1.0;
        for (int k = 1; k <= n; ++k) term *= -t / k;
        double sum = term;
        for (int j = 1; j < 60; ++j) {
            term *= -t * lambda / (n + j);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return tail_exp(n, -x) / std::pow(lambda, n);
}

double i_n(int n, double lambda, double t) {
    require(n >= 1 && n <= 3, "i_n: n must be 1, 2 or 3");
    require(t >= 0.0 && lambda >= 0.0, "i_n: negative argument");
    if (t == 0.0) return 0.0;
    const double x = lambda * t;
    if (x < 1.0) {
        // I^n = t^{n+2} sum_k (-x)^k (k+1)(k+2) / (n+k+2)!, converges fast
        double fact = factorial(n + 2);
        double pw = 1.0;
        double sum = 0.0;
        for (int k = 0; k < 80; ++k) {
            double term = pw * (k + 1.0) * (k + 2.0) / fact;
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum) && k > 2) break;
            pw *= -x;
            fact *= n + k + 3;
        }
        return std::pow(t, n + 2) * sum;
    }
    const double e = std::exp(-x);
    switch (n) {
        case 1: return (2.0 - (x * x + 2.0 * x + 2.0) * e) / (lambda * lambda * lambda);
        case 2: return (2.0 * x - 6.0 + (x * x + 4.0 * x + 6.0) * e) / std::pow(lambda, 4);
        default:
            return (x * x - 6.0 * x + 12.0 - (x * x + 6.0 * x + 12.0) * e) / std::pow(lambda, 5);
    }
}

double mean_edge_count(const DrivingMeasure& lam, const ConvexPolygon& W, double t) {
    require(t >= 0.0, "mean_edge_count: negative time");
    return t * hit_measure_convex(lam, W) +
           0.5 * t * t * point_intersection_density(lam) * W.area();
}

double mean_sigma_lambda(const DrivingMeasure& lam, const ConvexPolygon& W, double t) {
    require(t >= 0.0, "mean_sigma_lambda: negative time");
    return t * point_intersection_density(lam) * W.area();
}

WindowShape WindowShape::disk(double R) {
    if (!(R > 0.0)) throw std::invalid_argument("WindowShape::disk: R <= 0");
    WindowShape w;
    w.is_disk_ = true;
    w.R_ = R;
    return w;
}

WindowShape WindowShape::polygon(ConvexPolygon poly, int n_angles) {
    WindowShape w;
    w.poly_ = std::move(poly);
    w.n_angles_ = n_angles;
    return w;
}

double WindowShape::gamma_bar(double r) const {
    if (is_disk_) return r >= 2.0 * R_ ? 0.0 : set_covariance_disk(R_, r);
    return isotropized_set_covariance(poly_, r, n_angles_);
}

double WindowShape::area() const { return is_disk_ ? kPi * R_ * R_ : poly_.area(); }
double WindowShape::perimeter() const { return is_disk_ ? 2.0 * kPi * R_ : poly_.perimeter(); }
double WindowShape::diameter() const { return is_disk_ ? 2.0 * R_ : poly_.diameter(); }

double var_count_integrand(double t, double r) {
    if (r == 0.0) return 8.0 * t * t * t / (3.0 * kPi * kPi);
    return -2.0 * kPi * tail_exp(3, -2.0 * t * r / kPi) / (r * r * r);
}

double var_length_integrand(double t, double r) {
    if (r == 0.0) return 2.0 * t;
    return -kPi * std::expm1(-2.0 * t * r / kPi) / r;
}

VarianceReport var_edge_count_iso(double t, const WindowShape& W, const QuadratureConfig& q) {
    require(t > 0.0, "var_edge_count_iso: t <= 0");
    VarianceReport rep;
    rep.mean = t * W.perimeter() / kPi + t * t * W.area() / kPi;
    rep.boundary_term = t * W.perimeter() / kPi;
    rep.area_term = 3.0 * t * t * W.area() / kPi;
    rep.integral_term = integrate(
        [&](double r) { return W.gamma_bar(r) * var_count_integrand(t, r); }, 0.0,
        W.diameter(), q, &rep.quadrature_error);
    rep.variance = rep.boundary_term + rep.area_term + rep.integral_term;
    return rep;
}

double var_edge_length_iso(double t, const WindowShape& W, const QuadratureConfig& q) {
    require(t >= 0.0, "var_edge_length_iso: t < 0");
    if (t == 0.0) return 0.0;
    return integrate([&](double r) { return W.gamma_bar(r) * var_length_integrand(t, r); },
                     0.0, W.diameter(), q);
}

EdgeTotalsSecondOrder edge_totals_second_order(const DrivingMeasure& lam, const ConvexPolygon& W, double t,
                             std::size_t n_samples, Rng& rng) {
    require(n_samples >= 2, "edge_totals_second_order: need samples");
    const double c = point_intersection_density(lam);
    if (!(hit_measure_convex(lam, W) > 0.0))
        throw std::invalid_argument("edge_totals_second_order: degenerate driving measure");

    double s1 = 0.0, s1sq = 0.0, s2 = 0.0, s2sq = 0.0, s3 = 0.0, s3sq = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        auto smp = sample_segment_intersection(lam, W, rng);
        double k1 = 0.0, k2 = 0.0, k3 = 0.0;
        if (smp.weight > 0.0) {
            double le = hit_measure_segment(lam, smp.segment);
            k1 = -smp.weight * tail_ratio(1, t, le);
            k2 = smp.weight * tail_ratio(2, t, le);
            k3 = smp.weight * tail_ratio(3, t, le);
        }
        s1 += k1; s1sq += k1 * k1;
        s2 += k2; s2sq += k2 * k2;
        s3 += k3; s3sq += k3 * k3;
    }
    const double n = static_cast<double>(n_samples);
    auto mc = [n](double s, double ssq) {
        double mean = s / n;
        double var = std::max(0.0, (ssq - s * s / n) / (n - 1.0));
        return std::pair<double, double>{mean, std::sqrt(var / n)};
    };
    EdgeTotalsSecondOrder out;
    auto [m1, e1] = mc(s1, s1sq);
    out.var_sigma_lambda = {m1, e1, n_samples};
    auto [m2, e2] = mc(s2, s2sq);
    out.cov_lambda_count = {t * c * W.area() + m2, e2, n_samples};
    auto [m3, e3] = mc(s3, s3sq);
    out.var_count = {t * hit_measure_convex(lam, W) + 1.5 * t * t * c * W.area() - 2.0 * m3,
                     2.0 * e3, n_samples};
    return out;
}

namespace {

struct KernelAccumulator {
    double sum = 0.0, sumsq = 0.0;
    std::size_t n = 0;
    void add(double v) { sum += v; sumsq += v * v; ++n; }
    McKernelValue result() const {
        double nn = static_cast<double>(n);
        double mean = sum / nn;
        double var = std::max(0.0, (sumsq - sum * sum / nn) / (nn - 1.0));
        return {mean, std::sqrt(var / nn), n};
    }
};

// Carrier lines are drawn through the hull of the test regions (every
// segment with a nonzero kernel value has its carrier there). Termini live
// on the whole carrier line, where the crossing points of the other lines
// form a homogeneous process of intensity nu_L per unit length; the pair is
// importance-sampled as (separation, placement) with a Pareto-tailed
// separation law. The I^n kernels decay only cubically in the segment hit
// measure, so a box truncation of the termini would bias the integral; this
// scheme covers the full domain with bounded weight x kernel products.
template <typename Kernel>
McKernelValue kernel_mc(const ConvexPolygon& A, const ConvexPolygon& B,
                        const DrivingMeasure& lam, double t, std::size_t n_samples, Rng& rng,
                        const Kernel& kernel) {
    std::vector<Vec2> pts = A.vertices();
    pts.insert(pts.end(), B.vertices().begin(), B.vertices().end());
    ConvexPolygon hull = convex_hull(pts);
    const double lam_hull = hit_measure_convex(lam, hull);
    require(lam_hull > 0.0, "kernel_mc: degenerate driving measure");

    KernelAccumulator acc;
    for (std::size_t i = 0; i < n_samples; ++i) {
        LineP carrier = sample_line_hitting(lam, hull, rng);
        auto chord = clip_line(hull, carrier);
        if (!chord) { acc.add(0.0); continue; }
        Vec2 dir = carrier.direction();
        const double lc = chord->length();
        // crossing intensity along the carrier
        const double nu = hit_measure_segment(lam, Segment{{0.0, 0.0}, dir});
        if (!(nu > 1e-12 * lam.tau)) { acc.add(0.0); continue; }

        // separation |s| ~ sigma/(sigma+x)^2, sign symmetric; the kernel
        // decays once nu * |s| * t exceeds 1
        const double sigma = lc + 1.0 / (nu * std::max(t, 1e-9));
        double uu = std::min(rng.uniform(), 1.0 - 1e-12);
        double mag = sigma * uu / (1.0 - uu);
        double q_s = 0.5 * sigma / ((sigma + mag) * (sigma + mag));
        double s = rng.next_u64() & 1 ? mag : -mag;
        // placement uniform over the positions where the segment meets the
        // chord of the hull (outside it every kernel term vanishes)
        double span = lc + mag;
        double u0 = (s > 0.0 ? -mag : 0.0) + span * rng.uniform();
        Vec2 x1 = chord->a + dir * u0;
        Vec2 x2 = chord->a + dir * (u0 + s);
        double w = lam_hull * nu * nu * span / q_s;
        acc.add(w * kernel(Segment{x1, x2}));
    }
    return acc.result();
}

} // namespace

McKernelValue vertex_covariance(const ConvexPolygon& A, const ConvexPolygon& B,
                           const DrivingMeasure& lam, double t, std::size_t n_samples,
                           Rng& rng) {
    return kernel_mc(A, B, lam, t, n_samples, rng, [&](const Segment& e) {
        double le = hit_measure_segment(lam, e);
        double dA = (A.contains(e.a) ? 1.0 : 0.0) + (A.contains(e.b) ? 1.0 : 0.0);
        double dB = (B.contains(e.a) ? 1.0 : 0.0) + (B.contains(e.b) ? 1.0 : 0.0);
        auto ea = clip_segment(A, e);
        auto eb = clip_segment(B, e);
        double lamA = ea ? hit_measure_segment(lam, ea->seg) : 0.0;
        double lamB = eb ? hit_measure_segment(lam, eb->seg) : 0.0;
        if (dA + dB == 0.0 && lamA == 0.0 && lamB == 0.0) return 0.0;
        return 0.5 * dA * dB * i_n(1, le, t) + (dA * lamB + lamA * dB) * i_n(2, le, t) +
               4.0 * lamA * lamB * i_n(3, le, t);
    });
}

McKernelValue vertex_length_covariance(const ConvexPolygon& A, const ConvexPolygon& B,
                                const DrivingMeasure& lam, double t, std::size_t n_samples,
                                Rng& rng) {
    return kernel_mc(A, B, lam, t, n_samples, rng, [&](const Segment& e) {
        auto eb = clip_segment(B, e);
        if (!eb) return 0.0;
        double lenB = eb->seg.length();
        double le = hit_measure_segment(lam, e);
        double dA = (A.contains(e.a) ? 1.0 : 0.0) + (A.contains(e.b) ? 1.0 : 0.0);
        auto ea = clip_segment(A, e);
        double lamA = ea ? hit_measure_segment(lam, ea->seg) : 0.0;
        return 0.5 * dA * lenB * i_n(1, le, t) + lamA * lenB * i_n(2, le, t);
    });
}

double pcf_vertices(double t, double r) {
    require(t > 0.0 && r > 0.0, "pcf_vertices: need t > 0, r > 0");
    const double x = 2.0 * t * r / kPi;
    double h;
    if (x < kSeriesSwitch) {
        // h = sum_{k>=3} (-1)^{k+1} [1/k! + 1/(k-1)! + 1/(2 (k-2)!)] x^k
        h = 0.0;
        double pw = x * x * x;
        double sign = 1.0;
        for (int k = 3; k < 40; ++k) {
            double c = 1.0 / factorial(k) + 1.0 / factorial(k - 1) + 0.5 / factorial(k - 2);
            double term = sign * c * pw;
            h += term;
            if (std::abs(term) < 1e-18 * std::abs(h)) break;
            pw *= x;
            sign = -sign;
        }
    } else {
        h = 1.0 - 2.0 * x + 2.0 * x * x - std::exp(-x) * (1.0 - x + 0.5 * x * x);
    }
    return 1.0 + 4.0 * h / (kPi * kPi * x * x * x * x);
}

double k_diagonal_atom(double t) {
    require(t > 0.0, "k_diagonal_atom: t <= 0");
    return kPi / (2.0 * t * t);
}

double k_function(double t, double R, const QuadratureConfig& q) {
    require(t > 0.0 && R > 0.0, "k_function: need t > 0, R > 0");
    auto lam = [](double r) { return 2.0 * r / kPi; };
    double inner = integrate(
        [&](double r) {
            double l = lam(r);
            return 2.0 * i_n(1, l, t) + 8.0 / kPi * r * i_n(2, l, t) +
                   16.0 / (kPi * kPi) * r * r * i_n(3, l, t);
        },
        0.0, R, q);
    double outer = integrate(
        [&](double r) {
            double l = lam(r);
            return i_n(1, l, t) + 8.0 / kPi * R * i_n(2, l, t) +
                   32.0 / (kPi * kPi) * (r * R - 0.5 * R * R) * i_n(3, l, t);
        },
        R, kInf, q);
    return kPi * R * R + 2.0 / std::pow(t, 4) * (inner + outer);
}

double radial_distribution(double t, double r) {
    require(t > 0.0 && r > 0.0, "radial_distribution: need t > 0, r > 0");
    return 4.0 * t * t * r * pcf_vertices(t, r);
}

double cross_correlation(double t, double r) {
    require(t > 0.0 && r > 0.0, "cross_correlation: need t > 0, r > 0");
    const double x = 2.0 * t * r / kPi;
    double m;
    if (x < kSeriesSwitch) {
        // m = sum_{k>=2} (-1)^k [1/k! + 1/(k-1)!] x^k
        m = 0.0;
        double pw = x * x;
        double sign = 1.0;
        for (int k = 2; k < 40; ++k) {
            double term = sign * (1.0 / factorial(k) + 1.0 / factorial(k - 1)) * pw;
            m += term;
            if (std::abs(term) < 1e-18 * std::abs(m)) break;
            pw *= x;
            sign = -sign;
        }
    } else {
        m = 2.0 * x - 1.0 + (1.0 - x) * std::exp(-x);
    }
    return 1.0 + 2.0 * m / (kPi * kPi * x * x * x);
}

double cross_k(double t, double R, const QuadratureConfig& q) {
    require(t > 0.0 && R > 0.0, "cross_k: need t > 0, R > 0");
    auto lam = [](double r) { return 2.0 * r / kPi; };
    double inner = integrate(
        [&](double r) {
            double l = lam(r);
            return r * i_n(1, l, t) + 2.0 / kPi * r * r * i_n(2, l, t);
        },
        0.0, R, q);
    double outer = integrate(
        [&](double r) {
            double l = lam(r);
            return R * i_n(1, l, t) + 4.0 / kPi * (r * R - 0.5 * R * R) * i_n(2, l, t);
        },
        R, kInf, q);
    return kPi * R * R + 4.0 / (kPi * t * t * t) * (inner + outer);
}

double plt_pcf(double t, double r) {
    require(t > 0.0 && r > 0.0, "plt_pcf: need t > 0, r > 0");
    return 1.0 + 4.0 / (kPi * t * r);
}

double plt_cross_correlation(double t, double r) {
    require(t > 0.0 && r > 0.0, "plt_cross_correlation: need t > 0, r > 0");
    return 1.0 + 2.0 / (kPi * t * r);
}

double plt_radial(double t, double r) {
    require(t > 0.0 && r > 0.0, "plt_radial: need t > 0, r > 0");
    return 2.0 * t * t * r + 8.0 * t / kPi;
}

SecondOrderCurve comparison_curve(TessellationModel model, CurveStatistic stat, double t,
                                  const std::vector<double>& r_grid) {
    SecondOrderCurve c;
    c.t = t;
    c.model = model == TessellationModel::Stit ? "STIT"
              : model == TessellationModel::Plt ? "PLT"
                                                : "PVT";
    auto eval = [&](double r) -> double {
        if (model == TessellationModel::Stit) {
            switch (stat) {
                case CurveStatistic::G: c.statistic = "g"; return pcf_vertices(t, r);
                case CurveStatistic::K: c.statistic = "K"; return k_function(t, r);
                case CurveStatistic::Rho: c.statistic = "rho"; return radial_distribution(t, r);
                case CurveStatistic::G12: c.statistic = "g12"; return cross_correlation(t, r);
                case CurveStatistic::K12: c.statistic = "K12"; return cross_k(t, r);
            }
        }
        if (model == TessellationModel::Plt) {
            switch (stat) {
                case CurveStatistic::G: c.statistic = "plt_g"; return plt_pcf(t, r);
                case CurveStatistic::Rho: c.statistic = "plt_rho"; return plt_radial(t, r);
                case CurveStatistic::G12:
                    c.statistic = "plt_g12";
                    return plt_cross_correlation(t, r);
                default: break;
            }
        }
        throw std::invalid_argument("comparison_curve: unsupported model/statistic pair");
    };
    for (double r : r_grid) c.grid.emplace_back(r, eval(r));
    return c;
}

double asymptotic_variance_nv(TessellationModel model, double t, const AsymptoticWindow& W,
                              double R) {
    require(t > 0.0 && R > 0.0, "asymptotic_variance_nv: need t > 0, R > 0");
    switch (model) {
        case TessellationModel::Stit:
            return 16.0 / kPi * W.area * t * t * R * R * std::log(R);
        case TessellationModel::Plt: {
            if (!W.unit_disk)
                throw std::invalid_argument(
                    "asymptotic_variance_nv: PLT chord-power integral known for the unit disk only");
            const double cpi2 = 16.0 * kPi / 3.0;
            return 4.0 / (kPi * kPi) * t * t * t * R * R * R * cpi2;
        }
        case TessellationModel::Pvt:
            return 2.0 * t * t * R * R * W.area;
    }
    return 0.0;
}

} // namespace stit
