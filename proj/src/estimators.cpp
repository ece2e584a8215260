#include "stit/estimators.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace stit {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::vector<double> replicate(std::size_t n, StreamId master, int threads,
                              const std::function<double(std::size_t, StreamId)>& fn) {
    std::vector<double> out(n);
    parallel_for(n, threads, [&](std::size_t i) { out[i] = fn(i, master.child(i)); });
    return out;
}

namespace {

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double variance_of(const std::vector<double>& xs, double mean) {
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return xs.size() > 1 ? s / (static_cast<double>(xs.size()) - 1.0) : 0.0;
}

double skewness_of(const std::vector<double>& xs) {
    double m = mean_of(xs);
    double m2 = 0.0, m3 = 0.0;
    for (double x : xs) {
        double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= xs.size();
    m3 /= xs.size();
    return m3 / std::pow(m2, 1.5);
}

double excess_kurtosis_of(const std::vector<double>& xs) {
    double m = mean_of(xs);
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        double d = x - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= xs.size();
    m4 /= xs.size();
    return m4 / (m2 * m2) - 3.0;
}

// large-sample standard error of the sample variance via the fourth moment
double variance_se(const std::vector<double>& xs) {
    double m = mean_of(xs);
    double n = static_cast<double>(xs.size());
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        double d = x - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    return std::sqrt(std::max(0.0, m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n);
}

} // namespace

McEstimate summarize(const std::vector<double>& values, StreamId master, int n_bootstrap) {
    if (values.size() < 2) throw std::invalid_argument("summarize: need at least 2 values");
    McEstimate est;
    est.n = values.size();
    est.seed = master.v;
    est.mean = mean_of(values);
    est.variance = variance_of(values, est.mean);
    est.se_mean = std::sqrt(est.variance / static_cast<double>(est.n));

    Rng rng = master.child(0xb007).rng();
    std::vector<double> boot(static_cast<std::size_t>(n_bootstrap));
    const std::size_t n = values.size();
    for (auto& b : boot) {
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double x = values[rng.index(n)];
            s += x;
            s2 += x * x;
        }
        double m = s / static_cast<double>(n);
        b = (s2 - static_cast<double>(n) * m * m) / (static_cast<double>(n) - 1.0);
    }
    double bm = mean_of(boot);
    est.se_variance = std::sqrt(variance_of(boot, bm));
    return est;
}

std::string statistic_name(Statistic s) {
    switch (s) {
        case Statistic::EdgeCount: return "edge_count";
        case Statistic::EdgeLength: return "edge_length";
        case Statistic::SigmaLambda: return "sigma_lambda";
        case Statistic::VertexCount: return "vertex_count";
    }
    return "?";
}

McEstimate mc_moments(const DrivingMeasure& lam, const ConvexPolygon& W, double t,
                      Statistic stat, std::size_t n_reps, StreamId master, int threads) {
    if (n_reps < 2) throw std::invalid_argument("mc_moments: need at least 2 replications");
    auto values = replicate(n_reps, master, threads, [&](std::size_t, StreamId stream) {
        auto Y = construct(lam, W, t, stream);
        switch (stat) {
            case Statistic::EdgeCount: return static_cast<double>(Y.edges.size());
            case Statistic::EdgeLength: return Y.total_edge_length();
            case Statistic::SigmaLambda: return sigma(Y, EdgeFunctional::hit_measure(lam));
            case Statistic::VertexCount:
                return static_cast<double>(Y.interior_vertex_count());
        }
        return 0.0;
    });
    return summarize(values, master);
}

SetCovarianceTable::SetCovarianceTable(const ConvexPolygon& W, int n_r, int n_angles) {
    diam_ = W.diameter();
    area_ = W.area();
    dr_ = diam_ / n_r;
    values_.resize(static_cast<std::size_t>(n_r) + 1);
    for (int i = 0; i <= n_r; ++i)
        values_[static_cast<std::size_t>(i)] =
            isotropized_set_covariance(W, i * dr_, n_angles);
}

double SetCovarianceTable::operator()(double r) const {
    if (r <= 0.0) return values_.front();
    if (r >= diam_) return 0.0;
    double x = r / dr_;
    std::size_t i = static_cast<std::size_t>(x);
    if (i + 1 >= values_.size()) return values_.back();
    double f = x - static_cast<double>(i);
    return values_[i] * (1.0 - f) + values_[i + 1] * f;
}

double default_pcf_bandwidth(double intensity) { return 0.15 / std::sqrt(intensity); }

PcfAccumulator::PcfAccumulator(const ConvexPolygon& window, double bandwidth,
                               std::vector<double> r_grid, bool boundary_buffer)
    : h_(bandwidth), r_grid_(std::move(r_grid)) {
    if (!(h_ > 0.0)) throw std::invalid_argument("PcfAccumulator: bandwidth must be positive");
    observation_ = window;
    if (boundary_buffer) {
        auto eroded = erode(window, h_);
        if (!eroded) throw std::invalid_argument("PcfAccumulator: buffer swallows the window");
        observation_ = *eroded;
    }
    cov_ = SetCovarianceTable(observation_);
    pair_sum_.assign(r_grid_.size(), 0.0);
}

void PcfAccumulator::add(const VertexProcess& pattern) {
    std::vector<Vec2> pts;
    for (const Vec2& p : pattern.points)
        if (observation_.contains(p, -kGeomEps)) pts.push_back(p);
    sum_n_ += static_cast<double>(pts.size());
    sum_n2_ += static_cast<double>(pts.size()) * static_cast<double>(pts.size());
    ++n_patterns_;
    const double inv_h = 1.0 / h_;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double d = (pts[j] - pts[i]).norm();
            double w = cov_(d);
            if (w <= 0.0) continue;
            for (std::size_t k = 0; k < r_grid_.size(); ++k) {
                double u = (r_grid_[k] - d) * inv_h;
                if (u <= -1.0 || u >= 1.0) continue;
                double kern = 0.75 * (1.0 - u * u) * inv_h;  // Epanechnikov
                pair_sum_[k] += 2.0 * kern / w;               // ordered pairs
            }
        }
    }
}

namespace {

// Unbiased pooled estimate of lambda^2 (or lambda_1 lambda_2): products are
// taken across distinct, independent replications, which removes the
// within-pattern ratio bias of (sum N / nA)^2.
double unbiased_intensity_product(double sum_a, double sum_b, double sum_ab, std::size_t n,
                                  double area, bool factorial) {
    const double nn = static_cast<double>(n);
    if (n >= 2) {
        double prod = (sum_a * sum_b - sum_ab) / (nn * (nn - 1.0));
        if (prod > 0.0) return prod / (area * area);
    }
    // single pattern: factorial product N(N-1) for one point process, plain
    // product for a cross pair
    double prod = factorial ? sum_ab - sum_a : sum_ab;
    return std::max(prod, 1e-12) / (area * area);
}

} // namespace

EstimatedCurve PcfAccumulator::estimate() const {
    if (n_patterns_ == 0 || sum_n_ < 2.0)
        throw std::invalid_argument("PcfAccumulator: empty pattern");
    EstimatedCurve c;
    c.r = r_grid_;
    c.n_patterns = n_patterns_;
    c.pooled_intensity = sum_n_ / (static_cast<double>(n_patterns_) * cov_.area());
    double lambda_sq = unbiased_intensity_product(sum_n_, sum_n_, sum_n2_, n_patterns_,
                                                  cov_.area(), true);
    c.value.resize(r_grid_.size());
    for (std::size_t k = 0; k < r_grid_.size(); ++k)
        c.value[k] = pair_sum_[k] /
                     (static_cast<double>(n_patterns_) * lambda_sq * 2.0 * kPi * r_grid_[k]);
    return c;
}

KtildeAccumulator::KtildeAccumulator(const ConvexPolygon& window, std::vector<double> r_grid)
    : window_(window), r_grid_(std::move(r_grid)), cov_(window) {
    pair_sum_.assign(r_grid_.size(), 0.0);
}

void KtildeAccumulator::add(const VertexProcess& pattern) {
    const auto& pts = pattern.points;
    sum_n_ += static_cast<double>(pts.size());
    sum_n2_ += static_cast<double>(pts.size()) * static_cast<double>(pts.size());
    ++n_patterns_;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double d = (pts[j] - pts[i]).norm();
            double w = cov_(d);
            if (w <= 0.0) continue;
            for (std::size_t k = 0; k < r_grid_.size(); ++k)
                if (d <= r_grid_[k]) pair_sum_[k] += 2.0 / w;
        }
    }
}

EstimatedCurve KtildeAccumulator::estimate() const {
    if (n_patterns_ == 0 || sum_n_ < 2.0)
        throw std::invalid_argument("KtildeAccumulator: empty pattern");
    EstimatedCurve c;
    c.r = r_grid_;
    c.n_patterns = n_patterns_;
    c.pooled_intensity = sum_n_ / (static_cast<double>(n_patterns_) * cov_.area());
    double lambda_sq = unbiased_intensity_product(sum_n_, sum_n_, sum_n2_, n_patterns_,
                                                  cov_.area(), true);
    c.value.resize(r_grid_.size());
    for (std::size_t k = 0; k < r_grid_.size(); ++k)
        c.value[k] = pair_sum_[k] / (static_cast<double>(n_patterns_) * lambda_sq);
    return c;
}

CrossKAccumulator::CrossKAccumulator(const ConvexPolygon& window, std::vector<double> r_grid,
                                     double segment_step)
    : window_(window), r_grid_(std::move(r_grid)), step_(segment_step), cov_(window) {
    pair_sum_.assign(r_grid_.size(), 0.0);
}

void CrossKAccumulator::add(const Tessellation& Y) {
    auto vp = vertices(Y);
    ++n_patterns_;
    // midpoint subdivision of every edge into pieces of length <= step
    std::vector<std::pair<Vec2, double>> pieces;
    double length = 0.0;
    for (const MaxEdge& e : Y.edges) {
        double len = e.segment.length();
        length += len;
        int m = std::max(1, static_cast<int>(std::ceil(len / step_)));
        Vec2 d = (e.segment.b - e.segment.a) * (1.0 / m);
        for (int k = 0; k < m; ++k)
            pieces.push_back({e.segment.a + d * (k + 0.5), len / m});
    }
    sum_n_ += static_cast<double>(vp.points.size());
    sum_len_ += length;
    sum_nlen_ += static_cast<double>(vp.points.size()) * length;
    for (const Vec2& x : vp.points) {
        for (const auto& [y, len] : pieces) {
            double d = (y - x).norm();
            double w = cov_(d);
            if (w <= 0.0) continue;
            for (std::size_t k = 0; k < r_grid_.size(); ++k)
                if (d <= r_grid_[k]) pair_sum_[k] += len / w;
        }
    }
}

EstimatedCurve CrossKAccumulator::estimate() const {
    if (n_patterns_ == 0 || sum_n_ < 1.0)
        throw std::invalid_argument("CrossKAccumulator: empty pattern");
    EstimatedCurve c;
    c.r = r_grid_;
    c.n_patterns = n_patterns_;
    double area = cov_.area();
    c.pooled_intensity = sum_n_ / (static_cast<double>(n_patterns_) * area);
    double lambda_prod = unbiased_intensity_product(sum_n_, sum_len_, sum_nlen_, n_patterns_,
                                                    area, false);
    c.value.resize(r_grid_.size());
    for (std::size_t k = 0; k < r_grid_.size(); ++k)
        c.value[k] = pair_sum_[k] / (static_cast<double>(n_patterns_) * lambda_prod);
    return c;
}

EstimatedCurve pcf_estimator(const VertexProcess& pattern, double bandwidth,
                             const std::vector<double>& r_grid) {
    PcfAccumulator acc(pattern.window, bandwidth, r_grid);
    acc.add(pattern);
    return acc.estimate();
}

EstimatedCurve k_estimator(const VertexProcess& pattern, const std::vector<double>& r_grid) {
    KtildeAccumulator acc(pattern.window, r_grid);
    acc.add(pattern);
    return acc.estimate();
}

EstimatedCurve cross_k_estimator(const Tessellation& Y, const std::vector<double>& r_grid,
                                 double segment_step) {
    CrossKAccumulator acc(Y.window, r_grid, segment_step);
    acc.add(Y);
    return acc.estimate();
}

double chi_square_pvalue(double stat, double dof) {
    if (dof <= 0.0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

ChordPoissonReport chord_poisson_test(const DrivingMeasure& lam, const ConvexPolygon& W,
                                      double t, const LineP& line, std::size_t n_reps,
                                      StreamId master, int threads) {
    auto chord = clip_line(W, line);
    if (!chord) throw std::invalid_argument("chord_poisson_test: line misses the window");

    auto counts = replicate(n_reps, master, threads, [&](std::size_t, StreamId stream) {
        auto Y = construct(lam, W, t, stream);
        return static_cast<double>(section_with_line(Y, line).size());
    });

    ChordPoissonReport rep;
    rep.n = n_reps;
    rep.target_mean = t * hit_measure_segment(lam, *chord);
    rep.mean = mean_of(counts);
    double var = variance_of(counts, rep.mean);
    rep.se_mean = std::sqrt(var / static_cast<double>(n_reps));
    rep.dispersion = rep.mean > 0.0 ? var / rep.mean : 1.0;

    // chi-square GOF against Poisson with the fitted mean; bins with small
    // expectation are merged into the tail
    int kmax = static_cast<int>(rep.mean + 6.0 * std::sqrt(std::max(rep.mean, 1.0))) + 1;
    std::vector<double> observed(static_cast<std::size_t>(kmax) + 1, 0.0);
    for (double c : counts)
        observed[std::min<std::size_t>(static_cast<std::size_t>(c), kmax)] += 1.0;
    std::vector<double> expected(observed.size(), 0.0);
    double p = std::exp(-rep.mean);
    double cum = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        expected[static_cast<std::size_t>(k)] =
            (k == kmax ? 1.0 - cum : p) * static_cast<double>(n_reps);
        cum += p;
        p *= rep.mean / (k + 1.0);
    }
    double stat = 0.0;
    int bins = 0;
    double obs_acc = 0.0, exp_acc = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        obs_acc += observed[k];
        exp_acc += expected[k];
        if (exp_acc >= 5.0 || k + 1 == observed.size()) {
            if (exp_acc > 0.0) {
                stat += (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc;
                ++bins;
            }
            obs_acc = exp_acc = 0.0;
        }
    }
    rep.gof_p = chi_square_pvalue(stat, std::max(1, bins - 2));
    return rep;
}

std::vector<SameCellRow> same_cell_test(const DrivingMeasure& lam, const ConvexPolygon& W,
                                        double t, const std::vector<double>& distances,
                                        std::size_t n_reps, StreamId master, int threads) {
    Vec2 c = W.centroid();
    std::vector<SameCellRow> rows;
    for (std::size_t d_idx = 0; d_idx < distances.size(); ++d_idx) {
        double d = distances[d_idx];
        Vec2 x{c.x - d / 2.0, c.y}, y{c.x + d / 2.0, c.y};
        if (!W.contains(x, -1e-6) || !W.contains(y, -1e-6))
            throw std::invalid_argument("same_cell_test: pair does not fit in the window");
        SameCellRow row;
        row.distance = d;
        row.target = std::exp(-t * hit_measure_segment(lam, Segment{x, y}));
        auto vals = replicate(n_reps, master.child(d_idx), threads,
                              [&](std::size_t, StreamId stream) {
                                  for (std::uint64_t attempt = 0;; ++attempt) {
                                      auto Y = construct(lam, W, t, stream.child(attempt));
                                      try {
                                          return same_cell(Y, x, y) ? 1.0 : 0.0;
                                      } catch (const PointOnEdgeError&) {
                                          continue;  // measure-zero contact, fresh draw
                                      }
                                  }
                              });
        row.empirical = mean_of(vals);
        row.se = std::sqrt(std::max(row.target * (1.0 - row.target), 1e-12) /
                           static_cast<double>(n_reps));
        row.z = (row.empirical - row.target) / row.se;
        rows.push_back(row);
    }
    return rows;
}

RescaledPaths clt_paths(const ConvexPolygon& unit_window, double R, std::vector<double> t_grid,
                        std::size_t n_reps, StreamId master, int threads) {
    if (R < std::exp(1.0)) throw std::invalid_argument("clt_paths: need R >= e");
    for (double t : t_grid)
        if (t < 0.0 || t > 1.0) throw std::invalid_argument("clt_paths: grid not within [0,1]");
    if (!std::is_sorted(t_grid.begin(), t_grid.end()))
        throw std::invalid_argument("clt_paths: grid must ascend");

    const double logR = std::log(R);
    const double shift = 1.0 / logR;
    const double scale = 1.0 / (R * std::sqrt(logR));
    auto iso = DrivingMeasure::isotropic();
    ConvexPolygon WR = unit_window.scaled(R, unit_window.centroid());
    const double lam_wr = hit_measure_convex(iso, WR);
    const double area_wr = WR.area();
    const double horizon = t_grid.empty() ? shift : t_grid.back() + shift;

    RescaledPaths paths;
    paths.R = R;
    paths.t_grid = t_grid;
    paths.L.assign(n_reps, {});
    paths.C.assign(n_reps, {});

    parallel_for(n_reps, threads, [&](std::size_t i) {
        auto Y = construct(iso, WR, horizon, master.child(i));
        // births sorted once; prefix sums give every grid time from one run
        std::vector<std::pair<double, double>> events;  // (birth, length)
        events.reserve(Y.edges.size());
        for (const auto& e : Y.edges) events.push_back({e.birth, e.segment.length()});
        std::sort(events.begin(), events.end());
        std::vector<double>& L = paths.L[i];
        std::vector<double>& C = paths.C[i];
        L.resize(t_grid.size());
        C.resize(t_grid.size());
        std::size_t k = 0;
        double count = 0.0, length = 0.0;
        for (std::size_t g = 0; g < t_grid.size(); ++g) {
            double tau = t_grid[g] + shift;
            while (k < events.size() && events[k].first <= tau) {
                count += 1.0;
                length += events[k].second;
                ++k;
            }
            double sigma_lam = 2.0 / kPi * length;
            double mean_sl = tau * 2.0 / kPi * area_wr;
            double mean_c = tau * lam_wr + 0.5 * tau * tau * 2.0 / kPi * area_wr;
            L[g] = scale * (sigma_lam - mean_sl);
            C[g] = scale * (count - mean_c);
        }
    });
    return paths;
}

CltReport clt_diagnostics(const RescaledPaths& paths) {
    if (paths.L.empty() || paths.t_grid.empty())
        throw std::invalid_argument("clt_diagnostics: empty paths");
    CltReport rep;
    const std::size_t n = paths.L.size();
    const std::size_t last = paths.t_grid.size() - 1;

    std::vector<double> L1(n), Lfirst(n);
    for (std::size_t i = 0; i < n; ++i) {
        L1[i] = paths.L[i][last];
        Lfirst[i] = paths.L[i][0];
    }
    double m = mean_of(L1);
    rep.var_L1 = variance_of(L1, m);
    rep.target_var = 4.0 / kPi;  // times Area(W); the caller scales for non-unit windows
    rep.skewness = skewness_of(L1);
    rep.excess_kurtosis = excess_kurtosis_of(L1);

    // slope of C against t*L pooled across replications and grid times
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t g = 0; g <= last; ++g) {
            double x = paths.t_grid[g] * paths.L[i][g];
            sxx += x * x;
            sxy += x * paths.C[i][g];
        }
    rep.slope = sxx > 0.0 ? sxy / sxx : 0.0;

    double mf = mean_of(Lfirst);
    double cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) cov += (Lfirst[i] - mf) * (L1[i] - m);
    cov /= static_cast<double>(n) - 1.0;
    double vf = variance_of(Lfirst, mf);
    rep.cross_time_corr = vf > 0.0 && rep.var_L1 > 0.0 ? cov / std::sqrt(vf * rep.var_L1) : 0.0;
    return rep;
}

std::vector<double> sigma_hat_samples(const DrivingMeasure& lam, const ConvexPolygon& W,
                                      double t, std::size_t n_reps, StreamId master,
                                      int threads) {
    const double c = point_intersection_density(lam);
    const double mean_count = mean_edge_count(lam, W, t);
    const double mean_integral = c * W.area() * t * t / 2.0;  // int_0^t E Sigma_Lambda(s) ds
    return replicate(n_reps, master, threads, [&](std::size_t, StreamId stream) {
        auto Y = construct(lam, W, t, stream);
        double integral = 0.0;  // pathwise int_0^t Sigma_Lambda(Y(s)) ds
        for (const auto& e : Y.edges)
            integral += hit_measure_segment(lam, e.segment) * (t - e.birth);
        return (static_cast<double>(Y.edges.size()) - mean_count) -
               (integral - mean_integral);
    });
}

namespace {

TwoSampleRow two_sample(const std::string& name, const std::vector<double>& a,
                        const std::vector<double>& b) {
    TwoSampleRow row;
    row.name = name;
    row.mean_a = mean_of(a);
    row.mean_b = mean_of(b);
    row.var_a = variance_of(a, row.mean_a);
    row.var_b = variance_of(b, row.mean_b);
    double se_m = std::sqrt(row.var_a / static_cast<double>(a.size()) +
                            row.var_b / static_cast<double>(b.size()));
    row.z_mean = se_m > 0.0 ? (row.mean_a - row.mean_b) / se_m : 0.0;
    double se_v = std::sqrt(std::pow(variance_se(a), 2) + std::pow(variance_se(b), 2));
    row.z_var = se_v > 0.0 ? (row.var_a - row.var_b) / se_v : 0.0;
    return row;
}

} // namespace

double ConsistencySuiteReport::max_abs_z() const {
    double m = std::abs(scaling_density_z);
    for (const auto& r : rows) m = std::max({m, std::abs(r.z_mean), std::abs(r.z_var)});
    return m;
}

ConsistencySuiteReport consistency_and_iteration_suite(const DrivingMeasure& lam,
                                                       const ConvexPolygon& W, double s,
                                                       double t, std::size_t n_reps,
                                                       StreamId master, int threads) {
    const double total = s + t;
    ConvexPolygon V = W.scaled(2.0, W.centroid());

    // interior vertex count of a tessellation restricted to W
    auto nv_in = [&](const Tessellation& Y) {
        double n = 0.0;
        for (const Vec2& p : vertices(Y).points)
            if (W.contains(p, -kGeomEps)) n += 1.0;
        return n;
    };

    std::vector<double> len_v(n_reps), nv_v(n_reps), len_w(n_reps), nv_w(n_reps);
    std::vector<double> len_it(n_reps), nv_it(n_reps), len_direct(n_reps), nv_direct(n_reps);
    std::vector<double> dens_scaled(n_reps), dens_plain(n_reps);

    parallel_for(n_reps, threads, [&](std::size_t i) {
        StreamId stream = master.child(i);
        // property 1: Y(total, V) cap W against Y(total, W)
        auto YV = construct(lam, V, total, stream.child(1));
        len_v[i] = edge_length_in(YV, W);
        nv_v[i] = nv_in(YV);
        auto YW = construct(lam, W, total, stream.child(2));
        len_w[i] = YW.total_edge_length();
        nv_w[i] = nv_in(YW);
        // property 2: Y(s) [+] Y(t) against Y(s+t)
        auto frame = construct(lam, W, s, stream.child(3));
        auto it = iterate(frame, mnw_filler(lam, t), stream.child(4));
        len_it[i] = it.total_edge_length();
        nv_it[i] = nv_in(it);
        auto direct = construct(lam, W, total, stream.child(5));
        len_direct[i] = direct.total_edge_length();
        nv_direct[i] = nv_in(direct);
        // property 3 (STIT scaling, n = 2): edge length density of the
        // dilated double iteration against the plain run
        auto frame2 = construct(lam, W, t, stream.child(6));
        auto it2 = iterate(frame2, mnw_filler(lam, t), stream.child(7));
        dens_scaled[i] = 2.0 * it2.total_edge_length() / (4.0 * W.area());
        dens_plain[i] = construct(lam, W, t, stream.child(8)).total_edge_length() / W.area();
    });

    ConsistencySuiteReport rep;
    rep.rows.push_back(two_sample("consistency_edge_length", len_v, len_w));
    rep.rows.push_back(two_sample("consistency_vertex_count", nv_v, nv_w));
    rep.rows.push_back(two_sample("iteration_edge_length", len_it, len_direct));
    rep.rows.push_back(two_sample("iteration_vertex_count", nv_it, nv_direct));
    auto scaling = two_sample("scaling_density", dens_scaled, dens_plain);
    rep.scaling_density_z = scaling.z_mean;
    return rep;
}

} // namespace stit
