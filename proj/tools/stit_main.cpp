// Batch experiment runner: simulate tessellations, estimate statistics,
// compare against the closed forms, and run the acceptance suite.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "stit/analytics.hpp"
#include "stit/estimators.hpp"
#include "stit/functionals.hpp"
#include "stit/io.hpp"
#include "stit/mnw.hpp"
#include "stit/validation.hpp"

namespace fs = std::filesystem;
using namespace stit;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    bool seed_given = false;
    int threads = 1;
    double t = 1.0;
    bool t_given = false;
    double tau = 0.0;        // 0 = from config / default 1
    double square = 0.0;     // window: square side
    double disk = 0.0;       // window: disk radius (256-gon)
    std::size_t reps = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--out", o.out_dir, "output directory");
    auto* s = cmd->add_option("--seed", o.seed, "master seed");
    s->each([&o](const std::string&) { o.seed_given = true; });
    cmd->add_option("--threads", o.threads, "worker threads for replications");
    auto* t = cmd->add_option("--t", o.t, "construction time horizon");
    t->each([&o](const std::string&) { o.t_given = true; });
    cmd->add_option("--tau", o.tau, "length intensity of the driving measure");
    cmd->add_option("--square", o.square, "window: axis-aligned square side");
    cmd->add_option("--disk", o.disk, "window: disk radius (256-gon)");
    cmd->add_option("--reps", o.reps, "number of replications");
}

struct Resolved {
    DrivingMeasure lam;
    ConvexPolygon window;
    double t = 1.0;
    std::uint64_t seed = 1;
    std::size_t reps = 1000;
    int threads = 1;
    Json config;  // canonical config for hashing / embedding
};

Resolved resolve(const CommonOpts& o) {
    Json cfg = Json::object();
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw std::invalid_argument("cannot read config " + o.config_path);
        in >> cfg;
    }
    if (o.tau > 0.0) cfg["tau"] = o.tau;
    if (!cfg.contains("tau")) cfg["tau"] = 1.0;
    if (!cfg.contains("directions")) cfg["directions"] = "uniform";
    if (o.square > 0.0) cfg["window"] = Json{{"square", o.square}};
    if (o.disk > 0.0) cfg["window"] = Json{{"disk", {{"radius", o.disk}, {"ngon", 256}}}};
    if (!cfg.contains("window")) cfg["window"] = Json{{"square", 1.0}};
    if (o.t_given || !cfg.contains("t")) cfg["t"] = o.t_given ? o.t : 1.0;
    if (o.reps > 0) cfg["replications"] = o.reps;
    if (!cfg.contains("replications")) cfg["replications"] = 1000;
    if (o.seed_given || !cfg.contains("seed")) cfg["seed"] = o.seed_given ? o.seed : 1;
    cfg["threads"] = o.threads;

    Resolved r;
    r.lam = measure_from_json(cfg);
    r.window = window_from_json(cfg["window"]);
    r.t = cfg["t"].get<double>();
    r.seed = cfg["seed"].get<std::uint64_t>();
    r.reps = cfg["replications"].get<std::size_t>();
    r.threads = o.threads;
    r.config = cfg;
    return r;
}

void write_report(const Resolved& r, const std::string& path, Json body) {
    Json out;
    out["config"] = r.config;
    out["config_hash"] = hex64(config_hash(r.config));
    out["seed"] = r.seed;
    for (auto& [k, v] : body.items()) out[k] = v;
    write_file(path, out.dump(2) + "\n");
}

// CSV rows carry the seed and config hash so every file is replayable
std::string csv_with_provenance(const Resolved& r, std::vector<std::string> header,
                                std::vector<std::vector<double>> rows) {
    header.push_back("seed");
    header.push_back("config_hash");
    double seed = static_cast<double>(r.seed);
    double hash = static_cast<double>(config_hash(r.config) >> 12);  // fits a double exactly
    for (auto& row : rows) {
        row.push_back(seed);
        row.push_back(hash);
    }
    return csv_table(header, rows);
}

int cmd_simulate(const CommonOpts& o, bool no_svg, bool vertices_csv, bool markers) {
    Resolved r = resolve(o);
    fs::create_directories(o.out_dir);
    auto Y = construct(r.lam, r.window, r.t, StreamId{r.seed});
    Json j = tessellation_to_json(Y);
    j["config_hash"] = hex64(config_hash(r.config));
    write_file(o.out_dir + "/tessellation.json", j.dump(2) + "\n");
    if (!no_svg) write_file(o.out_dir + "/tessellation.svg", render_svg(Y, 800.0, markers));
    if (vertices_csv) {
        auto vp = vertices(Y);
        std::vector<std::vector<double>> rows;
        for (const auto& p : vp.points) rows.push_back({p.x, p.y});
        write_file(o.out_dir + "/vertices.csv", csv_with_provenance(r, {"x", "y"}, rows));
    }
    std::cout << "simulate: " << Y.edges.size() << " edges, " << Y.cells.size()
              << " cells -> " << o.out_dir << "\n";
    return 0;
}

int cmd_moments(const CommonOpts& o, const std::string& stat_name) {
    Resolved r = resolve(o);
    fs::create_directories(o.out_dir);
    Statistic stat;
    if (stat_name == "edges") stat = Statistic::EdgeCount;
    else if (stat_name == "length") stat = Statistic::EdgeLength;
    else if (stat_name == "sigma_lambda") stat = Statistic::SigmaLambda;
    else if (stat_name == "vertices") stat = Statistic::VertexCount;
    else throw std::invalid_argument("moments: unsupported statistic " + stat_name);

    auto est = mc_moments(r.lam, r.window, r.t, stat, r.reps, StreamId{r.seed}, r.threads);
    Json body;
    body["statistic"] = statistic_name(stat);
    body["estimate"] = estimate_to_json(est);
    const double c = point_intersection_density(r.lam);
    switch (stat) {
        case Statistic::EdgeCount:
            body["analytic_mean"] = mean_edge_count(r.lam, r.window, r.t);
            break;
        case Statistic::EdgeLength:
            if (r.lam.directions.kind() == DirectionalDistribution::Kind::Uniform)
                body["analytic_mean"] = r.lam.tau * r.t * r.window.area();
            break;
        case Statistic::SigmaLambda:
            body["analytic_mean"] = r.t * c * r.window.area();
            break;
        case Statistic::VertexCount:
            if (r.lam.directions.kind() == DirectionalDistribution::Kind::Uniform)
                body["analytic_mean"] = c * r.t * r.t * r.window.area();
            break;
    }
    write_report(r, o.out_dir + "/moments.json", body);
    std::cout << "moments " << statistic_name(stat) << ": mean " << est.mean << " (se "
              << est.se_mean << "), var " << est.variance << " (se " << est.se_variance
              << ")\n";
    return 0;
}

std::vector<double> parse_grid(double r0, double r1, double dr) {
    if (!(r0 > 0.0) || !(r1 >= r0) || !(dr > 0.0))
        throw std::invalid_argument("grid: need 0 < r0 <= r1 and dr > 0");
    std::vector<double> g;
    for (double r = r0; r <= r1 + 1e-12; r += dr) g.push_back(r);
    return g;
}

int cmd_pcf(const CommonOpts& o, double r0, double r1, double dr, double bandwidth) {
    Resolved r = resolve(o);
    fs::create_directories(o.out_dir);
    auto grid = parse_grid(r0, r1, dr);
    StreamId master{r.seed};

    double total = 0.0;
    for (std::size_t i = 0; i < r.reps; ++i)
        total += static_cast<double>(
            vertices(construct(r.lam, r.window, r.t, master.child(i))).points.size());
    double lambda_hat = total / (static_cast<double>(r.reps) * r.window.area());
    double h = bandwidth > 0.0 ? bandwidth : default_pcf_bandwidth(lambda_hat);

    PcfAccumulator acc(r.window, h, grid);
    for (std::size_t i = 0; i < r.reps; ++i)
        acc.add(vertices(construct(r.lam, r.window, r.t, master.child(i))));
    auto curve = acc.estimate();

    bool iso = r.lam.directions.kind() == DirectionalDistribution::Kind::Uniform &&
               r.lam.tau == 1.0;
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < grid.size(); ++k)
        rows.push_back({grid[k], curve.value[k],
                        iso ? pcf_vertices(r.t, grid[k]) : std::nan("")});
    write_file(o.out_dir + "/pcf.csv",
               csv_with_provenance(r, {"r", "g_hat", "g_analytic"}, rows));
    Json body;
    body["bandwidth"] = h;
    body["pooled_intensity"] = curve.pooled_intensity;
    body["replications"] = r.reps;
    if (iso) {
        // estimator-facing K statistics are factorial; the full K of the
        // vertex process adds this diagonal atom
        body["k_diagonal_atom"] = k_diagonal_atom(r.t);
    }
    write_report(r, o.out_dir + "/pcf.json", body);
    std::cout << "pcf: " << grid.size() << " radii, pooled intensity "
              << curve.pooled_intensity << " -> " << o.out_dir << "\n";
    return 0;
}

int cmd_crossk(const CommonOpts& o, double r0, double r1, double dr) {
    Resolved r = resolve(o);
    fs::create_directories(o.out_dir);
    auto grid = parse_grid(r0, r1, dr);
    StreamId master{r.seed};
    CrossKAccumulator acc(r.window, grid);
    for (std::size_t i = 0; i < r.reps; ++i)
        acc.add(construct(r.lam, r.window, r.t, master.child(i)));
    auto curve = acc.estimate();
    bool iso = r.lam.directions.kind() == DirectionalDistribution::Kind::Uniform &&
               r.lam.tau == 1.0;
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < grid.size(); ++k)
        rows.push_back({grid[k], curve.value[k], iso ? cross_k(r.t, grid[k]) : std::nan("")});
    write_file(o.out_dir + "/crossk.csv",
               csv_with_provenance(r, {"r", "k12_hat", "k12_analytic"}, rows));
    Json body;
    body["pooled_vertex_intensity"] = curve.pooled_intensity;
    body["replications"] = r.reps;
    write_report(r, o.out_dir + "/crossk.json", body);
    std::cout << "crossk: " << grid.size() << " radii -> " << o.out_dir << "\n";
    return 0;
}

int cmd_clt(const CommonOpts& o, std::vector<double> r_list) {
    Resolved res = resolve(o);
    fs::create_directories(o.out_dir);
    if (r_list.empty()) r_list = {8.0, 16.0, 32.0};
    std::vector<double> grid{0.2, 0.4, 0.6, 0.8, 1.0};
    std::vector<std::vector<double>> rows;
    Json diag = Json::array();
    for (std::size_t k = 0; k < r_list.size(); ++k) {
        auto paths = clt_paths(ConvexPolygon::square(1.0), r_list[k], grid,
                               res.reps, StreamId{res.seed}.child(k), res.threads);
        auto rep = clt_diagnostics(paths);
        rows.push_back({r_list[k], rep.var_L1, rep.var_L1 / rep.target_var, rep.slope,
                        rep.cross_time_corr, rep.skewness, rep.excess_kurtosis});
        Json d;
        d["R"] = r_list[k];
        d["var_L1"] = rep.var_L1;
        d["ratio_to_limit"] = rep.var_L1 / rep.target_var;
        d["slope"] = rep.slope;
        d["cross_time_corr"] = rep.cross_time_corr;
        d["skewness"] = rep.skewness;
        d["excess_kurtosis"] = rep.excess_kurtosis;
        diag.push_back(d);
    }
    write_file(o.out_dir + "/clt.csv",
               csv_with_provenance(res,
                                   {"R", "var_L1", "ratio_to_limit", "slope",
                                    "cross_time_corr", "skewness", "excess_kurtosis"},
                                   rows));
    write_report(res, o.out_dir + "/clt.json", Json{{"diagnostics", diag}});
    std::cout << "clt: " << r_list.size() << " window scales -> " << o.out_dir << "\n";
    return 0;
}

int cmd_compare(const CommonOpts& o, const std::string& stat, double r0, double r1, double dr) {
    Resolved r = resolve(o);
    fs::create_directories(o.out_dir);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> header;
    std::string name = stat;
    if (stat == "g" || stat == "rho" || stat == "g12") {
        auto grid = parse_grid(r0, r1, dr);
        CurveStatistic cs = stat == "g" ? CurveStatistic::G
                            : stat == "rho" ? CurveStatistic::Rho
                                            : CurveStatistic::G12;
        auto s = comparison_curve(TessellationModel::Stit, cs, r.t, grid);
        auto p = comparison_curve(TessellationModel::Plt, cs, r.t, grid);
        header = {"r", stat + "_stit", stat + "_plt"};
        for (std::size_t k = 0; k < grid.size(); ++k)
            rows.push_back({grid[k], s.grid[k].second, p.grid[k].second});
    } else if (stat == "var_nv") {
        header = {"R", "stit_asymptotic", "plt_asymptotic", "pvt_asymptotic",
                  "stit_var_edges_exact"};
        AsymptoticWindow disk{kPi, true};
        for (double R = 2.0; R <= 64.0 + 1e-9; R *= std::sqrt(2.0)) {
            double exact = var_edge_count_iso(r.t, WindowShape::disk(R)).variance;
            rows.push_back({R, asymptotic_variance_nv(TessellationModel::Stit, r.t, disk, R),
                            asymptotic_variance_nv(TessellationModel::Plt, r.t, disk, R),
                            asymptotic_variance_nv(TessellationModel::Pvt, r.t, disk, R),
                            exact});
        }
    } else {
        throw std::invalid_argument("compare: unsupported statistic " + stat);
    }
    write_file(o.out_dir + "/compare_" + name + ".csv",
               csv_with_provenance(r, header, rows));
    Json meta;
    meta["statistic"] = name;
    meta["t"] = r.t;
    meta["models"] = stat == "var_nv" ? Json::array({"STIT", "PLT", "PVT"})
                                      : Json::array({"STIT", "PLT"});
    write_report(r, o.out_dir + "/compare_" + name + ".json", meta);
    std::cout << "compare " << name << ": " << rows.size() << " rows -> " << o.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planar iteration-stable (STIT) tessellations: simulation, closed-form "
                 "second-order statistics, and Monte Carlo cross-validation"};
    app.require_subcommand(1);

    CommonOpts sim_o, mom_o, pcf_o, ck_o, clt_o, cmp_o;
    bool no_svg = false, vertices_csv = false, markers = false;
    auto* sim = app.add_subcommand("simulate", "run the cell-division construction, export "
                                               "JSON/SVG");
    add_common(sim, sim_o);
    sim->add_flag("--no-svg", no_svg, "skip the SVG rendering");
    sim->add_flag("--vertices", vertices_csv, "also export the vertex process as CSV");
    sim->add_flag("--markers", markers, "draw vertex markers in the SVG");

    std::string stat = "edges";
    auto* mom = app.add_subcommand("moments", "replicated moments of a scalar statistic");
    add_common(mom, mom_o);
    mom->add_option("--stat", stat, "edges | length | sigma_lambda | vertices");

    double r0 = 0.2, r1 = 1.0, dr = 0.1, bandwidth = 0.0;
    auto* pcf = app.add_subcommand("pcf", "pooled pair-correlation estimate vs closed form");
    add_common(pcf, pcf_o);
    pcf->add_option("--r0", r0, "first radius");
    pcf->add_option("--r1", r1, "last radius");
    pcf->add_option("--dr", dr, "radius step");
    pcf->add_option("--bandwidth", bandwidth, "kernel bandwidth (default 0.15/sqrt(intensity))");

    double cr0 = 0.2, cr1 = 1.0, cdr = 0.1;
    auto* ck = app.add_subcommand("crossk", "pooled vertex/edge-length cross-K vs closed form");
    add_common(ck, ck_o);
    ck->add_option("--r0", cr0, "first radius");
    ck->add_option("--r1", cr1, "last radius");
    ck->add_option("--dr", cdr, "radius step");

    std::vector<double> r_list;
    auto* clt = app.add_subcommand("clt", "rescaled edge count/length diagnostics across "
                                          "window scales");
    add_common(clt, clt_o);
    clt->add_option("--R", r_list, "window scale factors (each >= e)");

    std::string cmp_stat = "g";
    double gr0 = 0.2, gr1 = 3.0, gdr = 0.1;
    auto* cmp = app.add_subcommand("compare", "STIT/PLT curve tables and variance asymptotics");
    add_common(cmp, cmp_o);
    cmp->add_option("--statistic", cmp_stat, "g | rho | g12 | var_nv");
    cmp->add_option("--r0", gr0, "first radius");
    cmp->add_option("--r1", gr1, "last radius");
    cmp->add_option("--dr", gdr, "radius step");

    ValidationOptions vopts;
    auto* val = app.add_subcommand("validate", "run the acceptance suite");
    val->add_flag("--quick", vopts.quick, "reduced replication counts, looser gates");
    val->add_option("--seed", vopts.seed, "suite master seed");
    val->add_option("--threads", vopts.threads, "worker threads");
    val->add_option("--only", vopts.only, "run a single criterion id");
    val->add_option("--mutate", vopts.mutate,
                    "perturb a named closed form by 25% (validator sensitivity hook)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_o, no_svg, vertices_csv, markers);
        if (mom->parsed()) return cmd_moments(mom_o, stat);
        if (pcf->parsed()) return cmd_pcf(pcf_o, r0, r1, dr, bandwidth);
        if (ck->parsed()) return cmd_crossk(ck_o, cr0, cr1, cdr);
        if (clt->parsed()) return cmd_clt(clt_o, r_list);
        if (cmp->parsed()) return cmd_compare(cmp_o, cmp_stat, gr0, gr1, gdr);
        if (val->parsed()) {
            auto report = run_validation(vopts, std::cout);
            return report.all_pass() ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
