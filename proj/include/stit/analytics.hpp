#pragma once

#include <string>
#include <vector>

#include "stit/geometry.hpp"
#include "stit/line_measure.hpp"
#include "stit/quadrature.hpp"
#include "stit/rng.hpp"

namespace stit {

// ---------------------------------------------------------------------------
// Stable special functions
// ---------------------------------------------------------------------------

// n-th tail of the exponential series, T_n(u) = sum_{k>=n} u^k / k!.
// Series summation for |u| < 0.5 avoids the cancellation of exp(u) against
// the partial sum.
double tail_exp(int n, double u);

// T_n(-t*lambda) / lambda^n, continuous down to lambda = 0 (limit (-t)^n/n!).
double tail_ratio(int n, double t, double lambda);

// I^n(s^2 e^{-lambda s}; t) = (1/(n-1)!) int_0^t (t-s)^{n-1} s^2 e^{-lambda s} ds
// for n in {1,2,3}; closed forms with a convergent-series guard for small
// lambda*t.
double i_n(int n, double lambda, double t);

// ---------------------------------------------------------------------------
// First-order means
// ---------------------------------------------------------------------------

// E Sigma_1(Y(t,W)) = t Lambda([W]) + (t^2/2) <<Lambda cap Lambda>>(W).
double mean_edge_count(const DrivingMeasure& lam, const ConvexPolygon& W, double t);

// E Sigma_{Lambda[.]}(Y(t,W)) = t <<Lambda cap Lambda>>(W).
double mean_sigma_lambda(const DrivingMeasure& lam, const ConvexPolygon& W, double t);

// ---------------------------------------------------------------------------
// Isotropic variance closed forms
// ---------------------------------------------------------------------------

// Window abstraction for the variance integrals: a disk uses the analytic
// isotropized set covariance, a polygon an equispaced angular average.
class WindowShape {
  public:
    static WindowShape disk(double R);
    static WindowShape polygon(ConvexPolygon poly, int n_angles = 512);

    double gamma_bar(double r) const;
    double area() const;
    double perimeter() const;
    double diameter() const;

  private:
    bool is_disk_ = false;
    double R_ = 0.0;
    ConvexPolygon poly_;
    int n_angles_ = 512;
};

struct VarianceReport {
    double mean = 0.0;           // E Sigma_1 = t P(W)/pi + t^2 Area(W)/pi
    double variance = 0.0;
    double boundary_term = 0.0;  // t P(W) / pi
    double area_term = 0.0;      // 3 t^2 Area(W) / pi
    double integral_term = 0.0;  // int_0^diam gamma_bar(r) F_t(r) dr
    double quadrature_error = 0.0;
};

// Var(Sigma_1(Y(t,W))) for the stationary isotropic tessellation, tau = 1.
VarianceReport var_edge_count_iso(double t, const WindowShape& W, const QuadratureConfig& q = {});

// Var(Sigma_l(Y(t,W))): pi int gamma_bar(r) (1 - e^{-2tr/pi}) dr / r.
double var_edge_length_iso(double t, const WindowShape& W, const QuadratureConfig& q = {});

// Integrands, exposed for the stability checks: continuous at r = 0 with
// limits 8t^3/(3 pi^2) and 2t respectively.
double var_count_integrand(double t, double r);
double var_length_integrand(double t, double r);

// ---------------------------------------------------------------------------
// General-measure second-order evaluation (Monte Carlo over the
// segment-intersection measure)
// ---------------------------------------------------------------------------

struct McKernelValue {
    double value = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

struct EdgeTotalsSecondOrder {
    McKernelValue var_sigma_lambda;   // Var(Sigma_{Lambda[.]}(Y(t,W)))
    McKernelValue cov_lambda_count;   // Cov(Sigma_{Lambda[.]}, Sigma_1)
    McKernelValue var_count;          // Var(Sigma_1(Y(t,W)))
};
EdgeTotalsSecondOrder edge_totals_second_order(const DrivingMeasure& lam, const ConvexPolygon& W, double t,
                             std::size_t n_samples, Rng& rng);

// Covariance measure of the vertex process applied to 1_A (x) 1_B, and the
// vertex/length cross-covariance measure. Carrier lines are importance-
// sampled through conv(A u B), where every segment with a nonzero kernel
// value lives; the termini pair on the carrier is drawn with a Pareto-tailed
// separation law covering the whole line, so the estimate carries no domain
// truncation.
McKernelValue vertex_covariance(const ConvexPolygon& A, const ConvexPolygon& B,
                           const DrivingMeasure& lam, double t, std::size_t n_samples,
                           Rng& rng);
McKernelValue vertex_length_covariance(const ConvexPolygon& A, const ConvexPolygon& B,
                                const DrivingMeasure& lam, double t, std::size_t n_samples,
                                Rng& rng);

// ---------------------------------------------------------------------------
// Second-order functions of the stationary isotropic tessellation
// ---------------------------------------------------------------------------

// Pair-correlation function of the vertex process; t is the edge-length
// density. Small arguments are evaluated through the series of
// h(x) = 1 - 2x + 2x^2 - e^{-x}(1 - x + x^2/2), with g = 1 + 4 h(x)/(pi x)^2 x^-2,
// x = 2tr/pi.
double pcf_vertices(double t, double r);

// Ripley K-function in the convention that keeps the diagonal atom and
// normalizes so that g = (1/2 pi r) dK/dr tends to 1; evaluated by
// quadrature of the split integral representation.
double k_function(double t, double R, const QuadratureConfig& q = {});
// Diagonal atom K - K_tilde = pi / (2 t^2).
double k_diagonal_atom(double t);

// Radial distribution rho(r) = lambda dK/dr = 4 t^2 r g(r).
double radial_distribution(double t, double r);

// Cross-correlation of vertices and edge length measure, and the cross
// K-function.
double cross_correlation(double t, double r);
double cross_k(double t, double R, const QuadratureConfig& q = {});

// Poisson line tessellation references with the same length density.
double plt_pcf(double t, double r);
double plt_cross_correlation(double t, double r);
double plt_radial(double t, double r);

// ---------------------------------------------------------------------------
// Model comparison curves and growth asymptotics
// ---------------------------------------------------------------------------

enum class TessellationModel { Stit, Plt, Pvt };
enum class CurveStatistic { G, K, Rho, G12, K12 };

struct SecondOrderCurve {
    std::string statistic;
    std::string model;
    double t = 0.0;
    std::vector<std::pair<double, double>> grid;  // (r, value)
};

SecondOrderCurve comparison_curve(TessellationModel model, CurveStatistic stat, double t,
                                  const std::vector<double>& r_grid);

// Large-R variance asymptotics for the vertex count in W_R = R*W:
//   STIT (16/pi) Area(W) t^2 R^2 log R,
//   PLT  (4/pi^2) t^3 R^3 CPI(W;2)  (unit-disk W only, CPI = 16 pi/3),
//   PVT  2 t^2 R^2 Area(W).
struct AsymptoticWindow {
    double area = 1.0;
    bool unit_disk = false;
};
double asymptotic_variance_nv(TessellationModel model, double t, const AsymptoticWindow& W,
                              double R);

} // namespace stit
