#pragma once

#include <functional>
#include <vector>

#include "stit/mnw.hpp"

namespace stit {

// Interior T-vertices of a tessellation. Each vertex is collected once, as
// the terminus of the unique younger edge ending there.
struct VertexProcess {
    std::vector<Vec2> points;
    ConvexPolygon window;
};
VertexProcess vertices(const Tessellation& Y);

// Bounded edge functional over maximal edges.
struct EdgeFunctional {
    std::function<double(const Tessellation&, const MaxEdge&)> eval;

    static EdgeFunctional ones();
    static EdgeFunctional length();
    static EdgeFunctional hit_measure(DrivingMeasure lam);
    // eta^{1_A}: number of interior-vertex termini of the edge falling in A
    static EdgeFunctional vertex_count_in(ConvexPolygon A);
    // J^{1_A}: length of the edge inside A (exact clipping)
    static EdgeFunctional length_in(ConvexPolygon A);
};

// Sigma_phi(Y) = sum of phi over maximal edges.
double sigma(const Tessellation& Y, const EdgeFunctional& phi);

// Total clipped edge length in A; throws when A is not inside the window.
double edge_length_in(const Tessellation& Y, const ConvexPolygon& A);

// Functional on the segments of a 1D section Y cap L cap W.
using SegmentFunctional = std::function<double(const Segment&)>;
SegmentFunctional section_ones();
SegmentFunctional section_length();
SegmentFunctional section_hit_measure(DrivingMeasure lam);

struct McValue {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
};

// Unbiased Monte Carlo estimate of A_phi(Y): average over Lambda-distributed
// lines of Lambda([W]) * sum of phi over the section segments. Line
// positions are stratified along the chord coordinate, which shrinks the
// real error well below the (conservatively reported) iid standard error.
McValue a_phi(const Tessellation& Y, const DrivingMeasure& lam, const SegmentFunctional& phi,
              std::size_t n_lines, Rng& rng, bool stratify = true);

} // namespace stit
