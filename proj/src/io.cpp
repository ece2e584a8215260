#include "stit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stit/functionals.hpp"

namespace stit {

Json measure_to_json(const DrivingMeasure& lam) {
    Json j;
    j["tau"] = lam.tau;
    switch (lam.directions.kind()) {
        case DirectionalDistribution::Kind::Uniform:
            j["directions"] = "uniform";
            break;
        case DirectionalDistribution::Kind::Atoms: {
            Json atoms = Json::array();
            for (auto [a, w] : lam.directions.atom_list()) atoms.push_back({a, w});
            j["directions"] = Json{{"atoms", atoms}};
            break;
        }
        case DirectionalDistribution::Kind::Density:
            // the tabulated density is re-exported from the original config
            // by the CLI; not reachable from here
            throw std::invalid_argument("measure_to_json: density tables are exported from config");
    }
    return j;
}

DrivingMeasure measure_from_json(const Json& j) {
    DrivingMeasure lam;
    lam.tau = j.value("tau", 1.0);
    if (!(lam.tau > 0.0)) throw std::invalid_argument("measure: tau must be positive");
    if (!j.contains("directions") || j["directions"].is_string()) {
        std::string kind = j.value("directions", "uniform");
        if (kind != "uniform") throw std::invalid_argument("measure: unknown directions " + kind);
        lam.directions = DirectionalDistribution::uniform();
    } else if (j["directions"].contains("atoms")) {
        std::vector<std::pair<double, double>> atoms;
        for (const auto& a : j["directions"]["atoms"])
            atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
        lam.directions = DirectionalDistribution::atoms(std::move(atoms), /*normalize=*/true);
    } else if (j["directions"].contains("density")) {
        std::vector<double> ang, val;
        for (const auto& a : j["directions"]["density"]) {
            ang.push_back(a.at(0).get<double>());
            val.push_back(a.at(1).get<double>());
        }
        lam.directions = DirectionalDistribution::density(std::move(ang), std::move(val),
                                                          /*normalize=*/true);
    } else {
        throw std::invalid_argument("measure: malformed directions");
    }
    return lam;
}

Json window_to_json(const ConvexPolygon& poly) {
    Json pts = Json::array();
    for (const Vec2& v : poly.vertices()) pts.push_back({v.x, v.y});
    return Json{{"polygon", pts}};
}

ConvexPolygon window_from_json(const Json& j) {
    if (j.contains("square")) return ConvexPolygon::square(j["square"].get<double>());
    if (j.contains("rect")) {
        double w = j["rect"].at(0).get<double>();
        double h = j["rect"].at(1).get<double>();
        return ConvexPolygon::rectangle({0.0, 0.0}, {w, h});
    }
    if (j.contains("disk")) {
        double R = j["disk"].at("radius").get<double>();
        int n = j["disk"].value("ngon", 256);
        return ConvexPolygon::regular_ngon(n, R);
    }
    if (j.contains("polygon")) {
        std::vector<Vec2> pts;
        for (const auto& p : j["polygon"]) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        return ConvexPolygon(std::move(pts));
    }
    throw std::invalid_argument("window: expected square/rect/disk/polygon");
}

Json tessellation_to_json(const Tessellation& Y) {
    Json j;
    j["window"] = window_to_json(Y.window)["polygon"];
    j["t"] = Y.t;
    j["measure"] = measure_to_json(Y.lam);
    j["seed"] = Y.seed;
    Json edges = Json::array();
    for (const MaxEdge& e : Y.edges) {
        Json je;
        je["id"] = e.id;
        je["a"] = {e.segment.a.x, e.segment.a.y};
        je["b"] = {e.segment.b.x, e.segment.b.y};
        je["birth"] = e.birth;
        Json internal = Json::array();
        for (const auto& [pt, child] : e.internal) internal.push_back({pt.x, pt.y, child});
        je["internal"] = internal;
        edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    j["cell_count"] = Y.cells.size();
    return j;
}

std::string render_svg(const Tessellation& Y, double width_px, bool vertex_markers) {
    auto box = Y.window.bounding_box();
    auto [x0, x1] = box.support_interval({1.0, 0.0});
    auto [y0, y1] = box.support_interval({0.0, 1.0});
    double w = x1 - x0, h = y1 - y0;
    double margin = 0.02 * std::max(w, h);
    double scale = width_px / (w + 2.0 * margin);
    double height_px = (h + 2.0 * margin) * scale;
    double stroke = std::max(w, h) / 400.0;

    // SVG y runs downward; flip about the window's vertical midpoint
    auto X = [&](double x) { return x - x0 + margin; };
    auto Yc = [&](double y) { return (y1 + margin) - y; };

    std::ostringstream out;
    out.precision(8);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_px << "\" height=\""
        << height_px << "\" viewBox=\"0 0 " << w + 2 * margin << " " << h + 2 * margin
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<polygon points=\"";
    for (const Vec2& v : Y.window.vertices()) out << X(v.x) << "," << Yc(v.y) << " ";
    out << "\" fill=\"none\" stroke=\"black\" stroke-width=\"" << 1.5 * stroke << "\"/>\n";
    out << "<g stroke=\"black\" stroke-width=\"" << stroke << "\" stroke-linecap=\"round\">\n";
    for (const MaxEdge& e : Y.edges)
        out << "<line x1=\"" << X(e.segment.a.x) << "\" y1=\"" << Yc(e.segment.a.y)
            << "\" x2=\"" << X(e.segment.b.x) << "\" y2=\"" << Yc(e.segment.b.y) << "\"/>\n";
    out << "</g>\n";
    if (vertex_markers) {
        out << "<g fill=\"crimson\">\n";
        for (const Vec2& p : vertices(Y).points)
            out << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Yc(p.y) << "\" r=\""
                << 2.0 * stroke << "\"/>\n";
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "");
    out << "\r\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "");
        out << "\r\n";
    }
    return out.str();
}

std::uint64_t config_hash(const Json& config) {
    std::string s = config.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

Json estimate_to_json(const McEstimate& est) {
    Json j;
    j["n"] = est.n;
    j["mean"] = est.mean;
    j["variance"] = est.variance;
    j["se_mean"] = est.se_mean;
    j["se_variance"] = est.se_variance;
    j["seed"] = est.seed;
    return j;
}

} // namespace stit
