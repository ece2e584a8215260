#include "stit/mnw.hpp"

#include <algorithm>
#include <cmath>

namespace stit {

namespace {

constexpr int kMaxSplitRetries = 10000;

struct LiveCell {
    ConvexPolygon poly;
    std::vector<int> owners;
    StreamId stream;
    double birth;
};

bool same_directions(const DirectionalDistribution& a, const DirectionalDistribution& b) {
    if (a.kind() != b.kind()) return false;
    if (a.kind() == DirectionalDistribution::Kind::Atoms)
        return a.atom_list() == b.atom_list();
    return true;  // uniform always equal; density tables compared by kind only
}

} // namespace

std::size_t Tessellation::interior_vertex_count() const {
    std::size_t n = 0;
    for (const MaxEdge& e : edges) n += e.internal.size();
    return n;
}

std::size_t Tessellation::boundary_endpoint_count() const {
    std::size_t n = 0;
    for (const MaxEdge& e : edges) n += static_cast<std::size_t>(e.boundary_endpoints());
    return n;
}

double Tessellation::total_edge_length() const {
    double s = 0.0;
    for (const MaxEdge& e : edges) s += e.segment.length();
    return s;
}

Tessellation construct(const DrivingMeasure& lam, const ConvexPolygon& W, double t,
                       StreamId seed, const ConstructOptions& opts) {
    if (t < 0.0) throw std::invalid_argument("construct: negative time horizon");

    Tessellation Y;
    Y.window = W;
    Y.t = t;
    Y.lam = lam;
    Y.seed = seed.v;

    std::vector<LiveCell> stack;
    stack.push_back({W, std::vector<int>(W.size(), kOwnerWindow), seed, 0.0});
    std::size_t n_cells = 1;

    while (!stack.empty()) {
        LiveCell cell = std::move(stack.back());
        stack.pop_back();

        Rng rng = cell.stream.rng();
        double rate = hit_measure_convex(lam, cell.poly);
        double death = rate > 0.0 ? cell.birth + rng.exponential(rate) : t + 1.0;
        if (death > t) {
            Y.cells.push_back({std::move(cell.poly), std::move(cell.owners), cell.birth});
            continue;
        }

        // draw the splitting chord; tangential draws are measure-zero and
        // get resampled
        std::optional<PolygonSplit> split;
        for (int tries = 0; tries < kMaxSplitRetries && !split; ++tries) {
            LineP line = sample_line_hitting(lam, cell.poly, rng);
            split = split_polygon(cell.poly, line);
        }
        if (!split) throw std::runtime_error("construct: could not split cell");

        if (++n_cells > opts.max_cells)
            throw std::runtime_error("construct: cell cap exceeded (" +
                                     std::to_string(opts.max_cells) +
                                     "); reduce t or the window size");

        const int id = static_cast<int>(Y.edges.size());
        MaxEdge edge;
        edge.id = id;
        edge.segment = split->chord;
        edge.birth = death;
        for (int k = 0; k < 2; ++k) {
            int owner = cell.owners[static_cast<std::size_t>(split->chord_end_edge[k])];
            edge.end_owner[k] = owner;
            if (owner >= 0) {
                Vec2 pt = k == 0 ? split->chord.a : split->chord.b;
                Y.edges[static_cast<std::size_t>(owner)].internal.push_back({pt, id});
            }
        }
        Y.edges.push_back(std::move(edge));

        auto child_owners = [&](const std::vector<int>& parents) {
            std::vector<int> owners(parents.size());
            for (std::size_t i = 0; i < parents.size(); ++i)
                owners[i] = parents[i] < 0 ? id : cell.owners[static_cast<std::size_t>(parents[i])];
            return owners;
        };
        stack.push_back({std::move(split->positive), child_owners(split->positive_parents),
                         cell.stream.child(1), death});
        stack.push_back({std::move(split->negative), child_owners(split->negative_parents),
                         cell.stream.child(2), death});
    }
    return Y;
}

FillerSampler mnw_filler(const DrivingMeasure& lam, double t_filler,
                         const ConstructOptions& opts) {
    return [lam, t_filler, opts](const CellState& cell, StreamId stream) {
        return construct(lam, cell.poly.bounding_box(), t_filler, stream, opts);
    };
}

Tessellation iterate(const Tessellation& frame, const FillerSampler& filler, StreamId seed) {
    Tessellation out;
    out.window = frame.window;
    out.lam = frame.lam;
    out.seed = seed.v;
    out.edges = frame.edges;
    out.t = frame.t;

    bool t_recorded = false;
    for (std::size_t ci = 0; ci < frame.cells.size(); ++ci) {
        const CellState& cell = frame.cells[ci];
        Tessellation fill = filler(cell, seed.child(ci + 1));
        if (fill.lam.tau != frame.lam.tau ||
            !same_directions(fill.lam.directions, frame.lam.directions))
            throw std::invalid_argument("iterate: filler has a different driving measure");
        if (!t_recorded) {
            out.t = frame.t + fill.t;
            t_recorded = true;
        }

        // first pass: clip filler edges, assign fresh ids
        std::vector<int> id_map(fill.edges.size(), -1);
        const std::size_t first_new = out.edges.size();
        for (const MaxEdge& fe : fill.edges) {
            auto clip = clip_segment(cell.poly, fe.segment);
            if (!clip) continue;
            const int nid = static_cast<int>(out.edges.size());
            id_map[static_cast<std::size_t>(fe.id)] = nid;

            MaxEdge ne;
            ne.id = nid;
            ne.segment = clip->seg;
            ne.birth = frame.t + fe.birth;
            const int cut_edge[2] = {clip->entry_edge, clip->exit_edge};
            for (int k = 0; k < 2; ++k) {
                if (cut_edge[k] >= 0) {
                    // clipped at the cell boundary: the owning arc is a frame
                    // edge or the window
                    int owner = cell.owners[static_cast<std::size_t>(cut_edge[k])];
                    ne.end_owner[k] = owner;
                    if (owner >= 0) {
                        Vec2 pt = k == 0 ? ne.segment.a : ne.segment.b;
                        out.edges[static_cast<std::size_t>(owner)].internal.push_back({pt, nid});
                    }
                } else {
                    // original filler endpoint: either on an older filler
                    // edge (which then also survives the clip) or on the
                    // filler's own construction window
                    int fowner = fe.end_owner[k];
                    int mapped = fowner >= 0 ? id_map[static_cast<std::size_t>(fowner)] : kOwnerWindow;
                    ne.end_owner[k] = mapped;
                }
            }
            // internal vertices strictly inside the cell survive; child ids
            // remapped in the second pass
            for (const auto& [pt, child] : fe.internal)
                if (cell.poly.contains(pt, -kGeomEps)) ne.internal.push_back({pt, child});
            out.edges.push_back(std::move(ne));
        }
        // second pass: remap the surviving internal-vertex child ids
        for (std::size_t i = first_new; i < out.edges.size(); ++i) {
            auto& internal = out.edges[i].internal;
            internal.erase(std::remove_if(internal.begin(), internal.end(),
                                          [&](std::pair<Vec2, int>& v) {
                                              int m = id_map[static_cast<std::size_t>(v.second)];
                                              if (m < 0) return true;
                                              v.second = m;
                                              return false;
                                          }),
                           internal.end());
        }

        // cells: filler cells clipped to the frame cell
        for (const CellState& fc : fill.cells) {
            auto piece = intersect(fc.poly, cell.poly);
            if (!piece) continue;
            CellState cs;
            cs.poly = std::move(*piece);
            cs.owners.assign(cs.poly.size(), kOwnerComposite);
            cs.birth = frame.t;
            out.cells.push_back(std::move(cs));
        }
    }
    return out;
}

std::vector<Vec2> section_with_line(const Tessellation& Y, const LineP& line) {
    auto chord = clip_line(Y.window, line);
    if (!chord) return {};
    std::vector<std::pair<double, Vec2>> hits;
    Vec2 dir = line.direction();
    Vec2 origin = line.normal() * line.p;
    for (const MaxEdge& e : Y.edges) {
        double da = line.signed_distance(e.segment.a);
        double db = line.signed_distance(e.segment.b);
        if (da * db >= 0.0) continue;  // touches only, or same side
        double t = da / (da - db);
        Vec2 pt = e.segment.a + (e.segment.b - e.segment.a) * t;
        hits.push_back({(pt - origin).dot(dir), pt});
    }
    std::sort(hits.begin(), hits.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Vec2> pts;
    pts.reserve(hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
        if (!pts.empty() && std::abs(hits[i].first - hits[i - 1].first) <= kGeomEps)
            continue;  // a line through a T-vertex meets two edges at one point
        pts.push_back(hits[i].second);
    }
    return pts;
}

namespace {

double point_segment_distance(Vec2 q, const Segment& s) {
    Vec2 d = s.b - s.a;
    double len2 = d.dot(d);
    double t = len2 > 0.0 ? std::clamp((q - s.a).dot(d) / len2, 0.0, 1.0) : 0.0;
    return (q - (s.a + d * t)).norm();
}

} // namespace

bool same_cell(const Tessellation& Y, Vec2 x, Vec2 y) {
    if (!Y.window.contains(x, -kGeomEps) || !Y.window.contains(y, -kGeomEps))
        throw std::invalid_argument("same_cell: point outside window interior");
    for (const MaxEdge& e : Y.edges) {
        if (point_segment_distance(x, e.segment) <= kGeomEps ||
            point_segment_distance(y, e.segment) <= kGeomEps)
            throw PointOnEdgeError("same_cell: query point on an edge");
    }
    if ((y - x).norm() == 0.0) return true;
    for (const MaxEdge& e : Y.edges) {
        Vec2 a = e.segment.a, b = e.segment.b;
        double d1 = (b - a).cross(x - a);
        double d2 = (b - a).cross(y - a);
        double d3 = (y - x).cross(a - x);
        double d4 = (y - x).cross(b - x);
        if (d1 * d2 < 0.0 && d3 * d4 < 0.0) return false;
    }
    return true;
}

} // namespace stit
