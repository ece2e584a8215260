#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "stit/geometry.hpp"
#include "stit/rng.hpp"

namespace stit {

// Directional distribution R on [0, pi): uniform, atomic, or a tabulated
// density with trapezoid interpolation between knots.
class DirectionalDistribution {
  public:
    enum class Kind { Uniform, Atoms, Density };

    static DirectionalDistribution uniform();
    // (angle, weight) atoms; weights are normalized by the caller or must
    // sum to 1 within 1e-12
    static DirectionalDistribution atoms(std::vector<std::pair<double, double>> atoms,
                                         bool normalize = false);
    // knots must ascend and cover [0, pi]; values >= 0; trapezoid mass must
    // be 1 within 1e-12 unless normalize is set
    static DirectionalDistribution density(std::vector<double> angles,
                                           std::vector<double> values,
                                           bool normalize = false);

    Kind kind() const { return kind_; }
    const std::vector<std::pair<double, double>>& atom_list() const { return atoms_; }

    double sample_angle(Rng& rng) const;
    double density_at(double phi) const;  // Density kind only

    // E_R |cos(theta - phi)|, the normalized hit width of a unit segment
    // with direction angle theta
    double mean_abs_cos(double theta) const;
    // E_R width(K, phi)
    double mean_width(const ConvexPolygon& K) const;
    // E_{R x R} |sin(alpha - beta)|
    double pair_mean_abs_sin() const;

  private:
    Kind kind_ = Kind::Uniform;
    std::vector<std::pair<double, double>> atoms_;
    std::vector<double> dens_angle_, dens_value_, dens_cum_;  // cum: mass up to knot i
    double trapezoid_mean(const std::vector<double>& f_at_knots) const;
};

// Translation-invariant line measure  Lambda = tau * l_+ (x) R.
struct DrivingMeasure {
    double tau = 1.0;
    DirectionalDistribution directions = DirectionalDistribution::uniform();

    static DrivingMeasure isotropic(double tau = 1.0) { return {tau, DirectionalDistribution::uniform()}; }
};

// Lambda([K]) for a convex body; equals tau * P(K) / pi in the uniform case.
double hit_measure_convex(const DrivingMeasure& lam, const ConvexPolygon& K);

// Lambda([e]) for a segment; equals 2 tau l(e) / pi in the uniform case.
double hit_measure_segment(const DrivingMeasure& lam, const Segment& e);

// Constant c with <<Lambda cap Lambda>>(dx) = c dx; zero iff R is one atom.
double point_intersection_density(const DrivingMeasure& lam);

// Line distributed as Lambda([K])^{-1} Lambda(. cap [K]); tangential draws
// are resampled. Throws std::invalid_argument when the hit measure vanishes.
LineP sample_line_hitting(const DrivingMeasure& lam, const ConvexPolygon& K, Rng& rng);

// Same restricted to lines hitting a segment. Returns nullopt when
// Lambda([e]) = 0 (single atom parallel to e).
std::optional<LineP> sample_line_hitting(const DrivingMeasure& lam, const Segment& e, Rng& rng);

// One weighted draw from the segment-intersection measure
// <<(Lambda x Lambda) cap Lambda>> restricted to segments with both termini
// determined by lines hitting W: the carrier L is drawn from the normalized
// restriction to [W], the leg lines L1, L2 from the restriction to
// [L cap W], and the weight Lambda([W]) Lambda([L cap W])^2 makes weighted
// averages unbiased integrals against the measure.
struct WeightedSegmentSample {
    Segment segment;
    double weight = 0.0;       // zero flags a degenerate draw (atomic R parallel case)
    double carrier_measure = 0.0;  // Lambda([L cap W]) of the carrier chord
};
WeightedSegmentSample sample_segment_intersection(const DrivingMeasure& lam,
                                                  const ConvexPolygon& W, Rng& rng);

// Intersection point of two non-parallel lines.
std::optional<Vec2> line_intersection(const LineP& a, const LineP& b, double eps = kGeomEps);

} // namespace stit
