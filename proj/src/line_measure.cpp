#include "stit/line_measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stit {

namespace {

constexpr int kDensityGrid = 4096;   // quadrature grid for density-kind integrals
constexpr int kMaxResample = 100000;

double wrap_pi(double phi) {
    phi = std::fmod(phi, kPi);
    if (phi < 0.0) phi += kPi;
    return phi;
}

} // namespace

DirectionalDistribution DirectionalDistribution::uniform() {
    DirectionalDistribution d;
    d.kind_ = Kind::Uniform;
    return d;
}

DirectionalDistribution DirectionalDistribution::atoms(
    std::vector<std::pair<double, double>> atoms, bool normalize) {
    if (atoms.empty()) throw std::invalid_argument("DirectionalDistribution: no atoms");
    double total = 0.0;
    for (auto& [a, w] : atoms) {
        if (w < 0.0) throw std::invalid_argument("DirectionalDistribution: negative weight");
        a = wrap_pi(a);
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("DirectionalDistribution: zero total weight");
    if (normalize) {
        for (auto& [a, w] : atoms) w /= total;
    } else if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("DirectionalDistribution: atom weights must sum to 1");
    }
    DirectionalDistribution d;
    d.kind_ = Kind::Atoms;
    d.atoms_ = std::move(atoms);
    return d;
}

DirectionalDistribution DirectionalDistribution::density(std::vector<double> angles,
                                                         std::vector<double> values,
                                                         bool normalize) {
    if (angles.size() != values.size() || angles.size() < 2)
        throw std::invalid_argument("DirectionalDistribution: bad density table");
    if (std::abs(angles.front()) > 1e-12 || std::abs(angles.back() - kPi) > 1e-12)
        throw std::invalid_argument("DirectionalDistribution: density knots must cover [0, pi]");
    for (std::size_t i = 0; i + 1 < angles.size(); ++i)
        if (!(angles[i + 1] > angles[i]))
            throw std::invalid_argument("DirectionalDistribution: knots must ascend");
    for (double v : values)
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument("DirectionalDistribution: bad density value");

    DirectionalDistribution d;
    d.kind_ = Kind::Density;
    d.dens_angle_ = std::move(angles);
    d.dens_value_ = std::move(values);
    d.dens_cum_.assign(d.dens_angle_.size(), 0.0);
    for (std::size_t i = 1; i < d.dens_angle_.size(); ++i) {
        double seg = 0.5 * (d.dens_value_[i - 1] + d.dens_value_[i]) *
                     (d.dens_angle_[i] - d.dens_angle_[i - 1]);
        d.dens_cum_[i] = d.dens_cum_[i - 1] + seg;
    }
    double mass = d.dens_cum_.back();
    if (mass <= 0.0) throw std::invalid_argument("DirectionalDistribution: zero density mass");
    if (normalize) {
        for (double& v : d.dens_value_) v /= mass;
        for (double& c : d.dens_cum_) c /= mass;
    } else if (std::abs(mass - 1.0) > 1e-12) {
        throw std::invalid_argument("DirectionalDistribution: density mass must be 1");
    }
    return d;
}

double DirectionalDistribution::density_at(double phi) const {
    phi = wrap_pi(phi);
    auto it = std::upper_bound(dens_angle_.begin(), dens_angle_.end(), phi);
    std::size_t i = std::min<std::size_t>(dens_angle_.size() - 1,
                                          static_cast<std::size_t>(it - dens_angle_.begin()));
    if (i == 0) i = 1;
    double t = (phi - dens_angle_[i - 1]) / (dens_angle_[i] - dens_angle_[i - 1]);
    return dens_value_[i - 1] + t * (dens_value_[i] - dens_value_[i - 1]);
}

double DirectionalDistribution::sample_angle(Rng& rng) const {
    switch (kind_) {
        case Kind::Uniform:
            return rng.uniform() * kPi;
        case Kind::Atoms: {
            double u = rng.uniform();
            double acc = 0.0;
            for (const auto& [a, w] : atoms_) {
                acc += w;
                if (u < acc) return a;
            }
            return atoms_.back().first;
        }
        case Kind::Density: {
            // piecewise-quadratic CDF: locate the knot interval, solve within
            double target = rng.uniform() * dens_cum_.back();
            auto it = std::upper_bound(dens_cum_.begin(), dens_cum_.end(), target);
            std::size_t i = std::max<std::size_t>(1, static_cast<std::size_t>(it - dens_cum_.begin()));
            if (i >= dens_cum_.size()) i = dens_cum_.size() - 1;
            double a0 = dens_angle_[i - 1], a1 = dens_angle_[i];
            double v0 = dens_value_[i - 1], v1 = dens_value_[i];
            double rem = target - dens_cum_[i - 1];
            double h = a1 - a0;
            double slope = (v1 - v0) / h;
            // solve v0*x + slope*x^2/2 = rem for x in [0, h]
            double x;
            if (std::abs(slope) < 1e-14 * std::max(v0, 1.0)) {
                x = v0 > 0.0 ? rem / v0 : 0.5 * h;
            } else {
                double disc = v0 * v0 + 2.0 * slope * rem;
                x = (-v0 + std::sqrt(std::max(0.0, disc))) / slope;
            }
            return a0 + std::clamp(x, 0.0, h);
        }
    }
    return 0.0;
}

double DirectionalDistribution::trapezoid_mean(const std::vector<double>& f_at_knots) const {
    double acc = 0.0;
    for (std::size_t i = 1; i < dens_angle_.size(); ++i) {
        double h = dens_angle_[i] - dens_angle_[i - 1];
        acc += 0.5 * h * (f_at_knots[i - 1] * dens_value_[i - 1] + f_at_knots[i] * dens_value_[i]);
    }
    return acc;
}

double DirectionalDistribution::mean_abs_cos(double theta) const {
    switch (kind_) {
        case Kind::Uniform:
            return 2.0 / kPi;
        case Kind::Atoms: {
            double acc = 0.0;
            for (const auto& [a, w] : atoms_) acc += w * std::abs(std::cos(a - theta));
            return acc;
        }
        case Kind::Density: {
            // refined trapezoid; |cos| has kinks the knot grid may miss
            double acc = 0.0;
            double prev_a = 0.0, prev_f = density_at(0.0) * std::abs(std::cos(-theta));
            for (int i = 1; i <= kDensityGrid; ++i) {
                double a = kPi * i / kDensityGrid;
                double f = density_at(a) * std::abs(std::cos(a - theta));
                acc += 0.5 * (a - prev_a) * (f + prev_f);
                prev_a = a;
                prev_f = f;
            }
            return acc;
        }
    }
    return 0.0;
}

double DirectionalDistribution::mean_width(const ConvexPolygon& K) const {
    switch (kind_) {
        case Kind::Uniform:
            return K.perimeter() / kPi;  // Cauchy's formula
        case Kind::Atoms: {
            double acc = 0.0;
            for (const auto& [a, w] : atoms_) acc += w * K.width(a);
            return acc;
        }
        case Kind::Density: {
            double acc = 0.0;
            double prev_a = 0.0, prev_f = density_at(0.0) * K.width(0.0);
            for (int i = 1; i <= kDensityGrid; ++i) {
                double a = kPi * i / kDensityGrid;
                double f = density_at(a) * K.width(a);
                acc += 0.5 * (a - prev_a) * (f + prev_f);
                prev_a = a;
                prev_f = f;
            }
            return acc;
        }
    }
    return 0.0;
}

double DirectionalDistribution::pair_mean_abs_sin() const {
    switch (kind_) {
        case Kind::Uniform:
            return 2.0 / kPi;
        case Kind::Atoms: {
            double acc = 0.0;
            for (const auto& [a, wa] : atoms_)
                for (const auto& [b, wb] : atoms_) acc += wa * wb * std::abs(std::sin(a - b));
            return acc;
        }
        case Kind::Density: {
            // |sin(a-b)| is smooth off the diagonal; a moderate product grid
            // with the PL density is accurate to ~1e-7
            constexpr int n = 1024;
            std::vector<double> rho(n + 1);
            for (int i = 0; i <= n; ++i) rho[i] = density_at(kPi * i / n);
            double h = kPi / n;
            double acc = 0.0;
            for (int i = 0; i <= n; ++i) {
                double wi = (i == 0 || i == n) ? 0.5 : 1.0;
                double inner = 0.0;
                for (int j = 0; j <= n; ++j) {
                    double wj = (j == 0 || j == n) ? 0.5 : 1.0;
                    inner += wj * rho[j] * std::abs(std::sin((i - j) * h));
                }
                acc += wi * rho[i] * inner;
            }
            return acc * h * h;
        }
    }
    return 0.0;
}

double hit_measure_convex(const DrivingMeasure& lam, const ConvexPolygon& K) {
    return lam.tau * lam.directions.mean_width(K);
}

double hit_measure_segment(const DrivingMeasure& lam, const Segment& e) {
    double len = e.length();
    if (len <= 0.0) return 0.0;
    if (lam.directions.kind() == DirectionalDistribution::Kind::Uniform)
        return 2.0 * lam.tau * len / kPi;  // exact, no quadrature
    return lam.tau * len * lam.directions.mean_abs_cos(e.direction_angle());
}

double point_intersection_density(const DrivingMeasure& lam) {
    return lam.tau * lam.tau * lam.directions.pair_mean_abs_sin();
}

LineP sample_line_hitting(const DrivingMeasure& lam, const ConvexPolygon& K, Rng& rng) {
    if (!(hit_measure_convex(lam, K) > 0.0))
        throw std::invalid_argument("sample_line_hitting: zero hit measure");

    const auto kind = lam.directions.kind();
    if (kind == DirectionalDistribution::Kind::Atoms) {
        // exact discrete inversion on weight_i * width(K, a_i)
        const auto& atoms = lam.directions.atom_list();
        double total = 0.0;
        std::vector<double> cum(atoms.size());
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            total += atoms[i].second * K.width(atoms[i].first);
            cum[i] = total;
        }
        for (int tries = 0; tries < kMaxResample; ++tries) {
            double u = rng.uniform() * total;
            std::size_t i = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
            if (i >= atoms.size()) i = atoms.size() - 1;
            double phi = atoms[i].first;
            auto [lo, hi] = K.support_interval({std::cos(phi), std::sin(phi)});
            double p = rng.uniform(lo, hi);
            if (p > lo + kGeomEps && p < hi - kGeomEps) return LineP(phi, p);
        }
        throw std::runtime_error("sample_line_hitting: resample limit reached");
    }

    // uniform / density: draw phi ~ R, then accept proportionally to
    // width(K, phi) via a position drawn on the circumball's support
    Vec2 c = K.centroid();
    double rad = K.circumradius();
    for (int tries = 0; tries < kMaxResample; ++tries) {
        double phi = lam.directions.sample_angle(rng);
        Vec2 u{std::cos(phi), std::sin(phi)};
        double pc = c.dot(u);
        double p = rng.uniform(pc - rad, pc + rad);
        auto [lo, hi] = K.support_interval(u);
        if (p > lo + kGeomEps && p < hi - kGeomEps) return LineP(phi, p);
    }
    throw std::runtime_error("sample_line_hitting: resample limit reached");
}

// Below this relative level the hit measure of a segment is numerical noise
// (|cos| of an exactly perpendicular normal), i.e. the direction
// distribution is concentrated parallel to the segment.
static bool segment_measure_degenerate(const DrivingMeasure& lam, const Segment& e,
                                       double measure) {
    return !(measure > 1e-12 * lam.tau * e.length());
}

std::optional<LineP> sample_line_hitting(const DrivingMeasure& lam, const Segment& e, Rng& rng) {
    if (segment_measure_degenerate(lam, e, hit_measure_segment(lam, e))) return std::nullopt;
    double theta = e.direction_angle();

    double phi = 0.0;
    switch (lam.directions.kind()) {
        case DirectionalDistribution::Kind::Uniform: {
            // angle offset from the segment direction has density cos/2 on
            // (-pi/2, pi/2); exact inversion
            double psi = std::asin(2.0 * rng.uniform() - 1.0);
            phi = wrap_pi(theta + psi);
            break;
        }
        case DirectionalDistribution::Kind::Atoms: {
            const auto& atoms = lam.directions.atom_list();
            double total = 0.0;
            std::vector<double> cum(atoms.size());
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                total += atoms[i].second * std::abs(std::cos(atoms[i].first - theta));
                cum[i] = total;
            }
            double u = rng.uniform() * total;
            std::size_t i = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
            if (i >= atoms.size()) i = atoms.size() - 1;
            phi = atoms[i].first;
            break;
        }
        case DirectionalDistribution::Kind::Density: {
            bool ok = false;
            for (int tries = 0; tries < kMaxResample; ++tries) {
                phi = lam.directions.sample_angle(rng);
                if (rng.uniform() < std::abs(std::cos(phi - theta))) { ok = true; break; }
            }
            if (!ok) throw std::runtime_error("sample_line_hitting(segment): resample limit");
            break;
        }
    }
    Vec2 u{std::cos(phi), std::sin(phi)};
    double pa = e.a.dot(u), pb = e.b.dot(u);
    double p = rng.uniform(std::min(pa, pb), std::max(pa, pb));
    return LineP(phi, p);
}

std::optional<Vec2> line_intersection(const LineP& a, const LineP& b, double eps) {
    double det = std::sin(b.phi - a.phi);
    if (std::abs(det) < eps) return std::nullopt;
    double x = (a.p * std::sin(b.phi) - b.p * std::sin(a.phi)) / det;
    double y = (b.p * std::cos(a.phi) - a.p * std::cos(b.phi)) / det;
    return Vec2{x, y};
}

WeightedSegmentSample sample_segment_intersection(const DrivingMeasure& lam,
                                                  const ConvexPolygon& W, Rng& rng) {
    double lam_w = hit_measure_convex(lam, W);
    if (!(lam_w > 0.0))
        throw std::invalid_argument("sample_segment_intersection: zero hit measure");

    for (int tries = 0; tries < kMaxResample; ++tries) {
        LineP carrier = sample_line_hitting(lam, W, rng);
        auto chord = clip_line(W, carrier);
        if (!chord) continue;
        double lam_chord = hit_measure_segment(lam, *chord);
        if (segment_measure_degenerate(lam, *chord, lam_chord)) {
            // R concentrated parallel to the carrier: the triple measure
            // assigns this carrier zero mass
            return {Segment{chord->a, chord->a}, 0.0, 0.0};
        }
        auto l1 = sample_line_hitting(lam, *chord, rng);
        auto l2 = sample_line_hitting(lam, *chord, rng);
        if (!l1 || !l2) return {Segment{chord->a, chord->a}, 0.0, 0.0};
        auto x1 = line_intersection(carrier, *l1);
        auto x2 = line_intersection(carrier, *l2);
        if (!x1 || !x2) continue;  // numerically parallel leg, measure zero
        return {Segment{*x1, *x2}, lam_w * lam_chord * lam_chord, lam_chord};
    }
    throw std::runtime_error("sample_segment_intersection: resample limit reached");
}

} // namespace stit
