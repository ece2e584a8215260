#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stit/analytics.hpp"
#include "stit/functionals.hpp"
#include "stit/mnw.hpp"

namespace stit {

// ---------------------------------------------------------------------------
// Replication engine
// ---------------------------------------------------------------------------

// Runs fn(i, stream_i) for i in [0, n) across `threads` workers. Streams are
// derived from the master seed by replication index and results are reduced
// in index order, so parallel and serial runs are bit-identical.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

std::vector<double> replicate(std::size_t n, StreamId master, int threads,
                              const std::function<double(std::size_t, StreamId)>& fn);

// ---------------------------------------------------------------------------
// Moment estimates
// ---------------------------------------------------------------------------

struct McEstimate {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;     // unbiased sample variance
    double se_mean = 0.0;
    double se_variance = 0.0;  // bootstrap (1000 resamples)
    std::uint64_t seed = 0;    // master seed for replay
};

McEstimate summarize(const std::vector<double>& values, StreamId master,
                     int n_bootstrap = 1000);

enum class Statistic { EdgeCount, EdgeLength, SigmaLambda, VertexCount };
std::string statistic_name(Statistic s);

McEstimate mc_moments(const DrivingMeasure& lam, const ConvexPolygon& W, double t,
                      Statistic stat, std::size_t n_reps, StreamId master, int threads = 1);

// ---------------------------------------------------------------------------
// Second-order estimators (translation-corrected, pooled over replications)
// ---------------------------------------------------------------------------

// Shared tabulation of the isotropized set covariance used in pair weights.
class SetCovarianceTable {
  public:
    SetCovarianceTable() = default;
    explicit SetCovarianceTable(const ConvexPolygon& W, int n_r = 512, int n_angles = 256);
    double operator()(double r) const;  // linear interpolation
    double area() const { return area_; }

  private:
    std::vector<double> values_;
    double dr_ = 1.0, diam_ = 0.0, area_ = 0.0;
};

struct EstimatedCurve {
    std::vector<double> r;
    std::vector<double> value;
    double pooled_intensity = 0.0;
    std::size_t n_patterns = 0;
};

// Kernel pair-correlation estimator (Epanechnikov kernel, translation
// correction by the set covariance, points within one bandwidth of the
// boundary discarded). Patterns are pooled by summing pair statistics and
// normalizing with the pooled intensity.
class PcfAccumulator {
  public:
    PcfAccumulator(const ConvexPolygon& window, double bandwidth, std::vector<double> r_grid,
                   bool boundary_buffer = true);
    void add(const VertexProcess& pattern);
    EstimatedCurve estimate() const;
    double bandwidth() const { return h_; }

  private:
    ConvexPolygon observation_;
    double h_;
    std::vector<double> r_grid_;
    SetCovarianceTable cov_;
    std::vector<double> pair_sum_;
    double sum_n_ = 0.0, sum_n2_ = 0.0;
    std::size_t n_patterns_ = 0;
};

// Recommended default bandwidth 0.15 / sqrt(intensity).
double default_pcf_bandwidth(double intensity);

// Translation-corrected factorial Ripley K estimator.
class KtildeAccumulator {
  public:
    KtildeAccumulator(const ConvexPolygon& window, std::vector<double> r_grid);
    void add(const VertexProcess& pattern);
    EstimatedCurve estimate() const;

  private:
    ConvexPolygon window_;
    std::vector<double> r_grid_;
    SetCovarianceTable cov_;
    std::vector<double> pair_sum_;
    double sum_n_ = 0.0, sum_n2_ = 0.0;
    std::size_t n_patterns_ = 0;
};

// Cross K between the vertex process and the edge-length measure: clipped
// edge length within distance r of each vertex, translation-corrected and
// normalized by both pooled intensities. Edges are integrated by midpoint
// subdivision at `segment_step`.
class CrossKAccumulator {
  public:
    CrossKAccumulator(const ConvexPolygon& window, std::vector<double> r_grid,
                      double segment_step = 0.01);
    void add(const Tessellation& Y);
    EstimatedCurve estimate() const;  // value = K12, pooled_intensity = lambda_1

  private:
    ConvexPolygon window_;
    std::vector<double> r_grid_;
    double step_;
    SetCovarianceTable cov_;
    std::vector<double> pair_sum_;
    double sum_n_ = 0.0, sum_len_ = 0.0, sum_nlen_ = 0.0;
    std::size_t n_patterns_ = 0;
};

// Single-pattern conveniences over the accumulators.
EstimatedCurve pcf_estimator(const VertexProcess& pattern, double bandwidth,
                             const std::vector<double>& r_grid);
EstimatedCurve k_estimator(const VertexProcess& pattern, const std::vector<double>& r_grid);
EstimatedCurve cross_k_estimator(const Tessellation& Y, const std::vector<double>& r_grid,
                                 double segment_step = 0.01);

// ---------------------------------------------------------------------------
// Distributional tests (MNW properties)
// ---------------------------------------------------------------------------

struct ChordPoissonReport {
    std::size_t n = 0;
    double target_mean = 0.0;
    double mean = 0.0, se_mean = 0.0;
    double dispersion = 0.0;   // variance / mean, 1 under Poisson
    double gof_p = 0.0;        // chi-square goodness of fit against Poisson
};
ChordPoissonReport chord_poisson_test(const DrivingMeasure& lam, const ConvexPolygon& W,
                                      double t, const LineP& line, std::size_t n_reps,
                                      StreamId master, int threads = 1);

struct SameCellRow {
    double distance = 0.0;
    double target = 0.0;      // exp(-t Lambda([xy]))
    double empirical = 0.0;
    double se = 0.0;          // binomial
    double z = 0.0;
};
std::vector<SameCellRow> same_cell_test(const DrivingMeasure& lam, const ConvexPolygon& W,
                                        double t, const std::vector<double>& distances,
                                        std::size_t n_reps, StreamId master, int threads = 1);

// chi-square upper tail probability, exposed for reports
double chi_square_pvalue(double stat, double dof);

// ---------------------------------------------------------------------------
// CLT diagnostics (rescaled edge count / edge length processes)
// ---------------------------------------------------------------------------

struct RescaledPaths {
    double R = 0.0;
    std::vector<double> t_grid;           // within [0, 1]
    std::vector<std::vector<double>> L;   // [rep][time] rescaled centered edge length measure
    std::vector<std::vector<double>> C;   // [rep][time] rescaled centered edge count
};

// Simulates Y(t + 1/log R, R*W) with the isotropic unit measure and records
// the centered, (R sqrt(log R))-rescaled paths at the grid times; centering
// constants are the analytic means.
RescaledPaths clt_paths(const ConvexPolygon& unit_window, double R, std::vector<double> t_grid,
                        std::size_t n_reps, StreamId master, int threads = 1);

struct CltReport {
    double var_L1 = 0.0;
    double target_var = 0.0;          // (4/pi) Area(W)
    double slope = 0.0;               // regression of C_t on t * L_t, limit 1
    double cross_time_corr = 0.0;     // corr(L at first and last grid time), limit 1
    double skewness = 0.0;            // of L_1, limit 0
    double excess_kurtosis = 0.0;     // of L_1, limit 0
};
CltReport clt_diagnostics(const RescaledPaths& paths);

// Per-replication reduced martingale statistic
//   Sigma_hat_1 = centered Sigma_1 - int_0^t centered Sigma_Lambda ds,
// whose variance is exactly t Lambda([W]) + (t^2/2) <<Lambda cap Lambda>>(W).
std::vector<double> sigma_hat_samples(const DrivingMeasure& lam, const ConvexPolygon& W,
                                      double t, std::size_t n_reps, StreamId master,
                                      int threads = 1);

// ---------------------------------------------------------------------------
// Structural distributional suite (consistency and iteration semigroup)
// ---------------------------------------------------------------------------

struct TwoSampleRow {
    std::string name;
    double mean_a = 0.0, mean_b = 0.0, z_mean = 0.0;
    double var_a = 0.0, var_b = 0.0, z_var = 0.0;
};

struct ConsistencySuiteReport {
    std::vector<TwoSampleRow> rows;
    double scaling_density_z = 0.0;  // property 3: dilated double iteration vs plain run
    double max_abs_z() const;
};

ConsistencySuiteReport consistency_and_iteration_suite(const DrivingMeasure& lam,
                                                       const ConvexPolygon& W, double s,
                                                       double t, std::size_t n_reps,
                                                       StreamId master, int threads = 1);

} // namespace stit
