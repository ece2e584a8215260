#pragma once

#include <json.hpp>

#include <string>

#include "stit/estimators.hpp"
#include "stit/mnw.hpp"

namespace stit {

// insertion-ordered JSON keeps exported key order stable across runs
using Json = nlohmann::ordered_json;

Json measure_to_json(const DrivingMeasure& lam);
// {"tau": x, "directions": "uniform" | {"atoms": [[angle, weight], ...]}
//                        | {"density": [[angle, value], ...]}}
DrivingMeasure measure_from_json(const Json& j);

Json window_to_json(const ConvexPolygon& poly);
// {"square": s} | {"rect": [w, h]} | {"disk": {"radius": R, "ngon": n}}
// | {"polygon": [[x, y], ...]} (counterclockwise)
ConvexPolygon window_from_json(const Json& j);

// {window, t, edges: [{id, a, b, birth, internal: [[x, y, childId], ...]}]}
// plus measure and seed so a run can be replayed
Json tessellation_to_json(const Tessellation& Y);

std::string render_svg(const Tessellation& Y, double width_px = 800.0,
                       bool vertex_markers = false);

// RFC-4180 table (CRLF records, mandatory header row)
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

// FNV-1a over the canonical dump, for replay provenance in reports
std::uint64_t config_hash(const Json& config);
std::string hex64(std::uint64_t v);

void write_file(const std::string& path, const std::string& content);

Json estimate_to_json(const McEstimate& est);

} // namespace stit
