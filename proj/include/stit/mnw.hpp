#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "stit/geometry.hpp"
#include "stit/line_measure.hpp"
#include "stit/rng.hpp"

namespace stit {

// Owner tags for boundary provenance.
inline constexpr int kOwnerWindow = -1;     // window boundary
inline constexpr int kOwnerComposite = -2;  // unresolved (cells of iterated tessellations)

// A cell-splitting chord. Endpoints live either on the window boundary or in
// the relative interior of an older edge; younger edges may later register
// vertices in this edge's own relative interior.
struct MaxEdge {
    int id = -1;
    Segment segment;
    double birth = 0.0;
    int end_owner[2] = {kOwnerWindow, kOwnerWindow};  // per endpoint: window or older edge id
    std::vector<std::pair<Vec2, int>> internal;       // (vertex, id of the younger edge ending there)

    int boundary_endpoints() const {
        return (end_owner[0] == kOwnerWindow) + (end_owner[1] == kOwnerWindow);
    }
};

struct CellState {
    ConvexPolygon poly;
    std::vector<int> owners;  // per boundary edge of poly
    double birth = 0.0;
};

struct Tessellation {
    ConvexPolygon window;
    double t = 0.0;
    DrivingMeasure lam;
    std::uint64_t seed = 0;
    std::vector<MaxEdge> edges;
    std::vector<CellState> cells;

    // exact by construction: every interior vertex is the endpoint of
    // exactly one younger edge
    std::size_t interior_vertex_count() const;
    std::size_t boundary_endpoint_count() const;
    double total_edge_length() const;
};

struct ConstructOptions {
    std::size_t max_cells = 10'000'000;  // guard against runaway t/window combinations
};

// MNW construction of Y(t, W): every live cell carries an Exp(Lambda([cell]))
// clock; on expiry before the horizon it splits along a line drawn from the
// normalized restriction of Lambda, and the construction recurses in both
// halves. Cell RNG streams are derived from (seed, split path), so the
// result is independent of traversal order.
Tessellation construct(const DrivingMeasure& lam, const ConvexPolygon& W, double t,
                       StreamId seed, const ConstructOptions& opts = {});

// Iteration Y0 [+] fillers: an independent tessellation is produced per
// frame cell (by `filler`, conventionally an MNW run on the cell's bounding
// box) and clipped to the cell. Edge identities of fillers survive clipping;
// clip points landing on frame edges become vertices of those edges.
using FillerSampler = std::function<Tessellation(const CellState& cell, StreamId stream)>;
Tessellation iterate(const Tessellation& frame, const FillerSampler& filler, StreamId seed);

// Standard filler: Y(t_filler, bounding box of the cell) with the frame's
// driving measure.
FillerSampler mnw_filler(const DrivingMeasure& lam, double t_filler,
                         const ConstructOptions& opts = {});

// Intersection points of a line with the maximal edges, sorted along the
// line; empty when the line misses the window. Window-boundary contacts are
// not reported.
std::vector<Vec2> section_with_line(const Tessellation& Y, const LineP& line);

struct PointOnEdgeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// True iff the segment xy crosses no maximal edge. Throws PointOnEdgeError
// when either point lies on an edge within tolerance (caller resamples), and
// std::invalid_argument when a point is outside the window interior.
bool same_cell(const Tessellation& Y, Vec2 x, Vec2 y);

} // namespace stit
