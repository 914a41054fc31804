#include "loopsoup/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include "loopsoup/chordal.hpp"
#include "loopsoup/cluster.hpp"
#include "loopsoup/fractal.hpp"
#include "loopsoup/parallel.hpp"
#include "loopsoup/raster.hpp"
#include "loopsoup/rw_soup.hpp"
#include "loopsoup/sle.hpp"
#include "loopsoup/soup_io.hpp"
#include "loopsoup/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace loopsoup {

ExperimentKind experiment_kind_from_name(const std::string& name) {
    if (name == "soup") return ExperimentKind::soup;
    if (name == "clusters") return ExperimentKind::clusters;
    if (name == "boundaries") return ExperimentKind::boundaries;
    if (name == "dimensions") return ExperimentKind::dimensions;
    if (name == "percolation") return ExperimentKind::percolation;
    if (name == "sle") return ExperimentKind::sle;
    if (name == "chordal") return ExperimentKind::chordal;
    throw std::invalid_argument("unknown experiment kind: " + name);
}

std::string experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::soup: return "soup";
        case ExperimentKind::clusters: return "clusters";
        case ExperimentKind::boundaries: return "boundaries";
        case ExperimentKind::dimensions: return "dimensions";
        case ExperimentKind::percolation: return "percolation";
        case ExperimentKind::sle: return "sle";
        case ExperimentKind::chordal: return "chordal";
    }
    throw std::logic_error("unreachable experiment kind");
}

RunManifest RunManifest::from_json(const json& j) {
    RunManifest m;
    m.kind = experiment_kind_from_name(j.at("kind").get<std::string>());
    m.config = j.value("config", json::object());
    m.out_dir = j.value("out_dir", std::string("runs"));
    m.seed = j.value("seed", std::uint64_t{1});
    m.samples = j.value("samples", std::size_t{1});
    m.threads = j.value("threads", 0u);
    return m;
}

RunManifest RunManifest::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("manifest: cannot open " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("manifest: parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

json RunManifest::to_json() const {
    return json{{"kind", experiment_kind_name(kind)},
                {"config", config},
                {"out_dir", out_dir},
                {"seed", seed},
                {"samples", samples}};
}

std::string RunManifest::hash() const {
    // Threads and the output directory are execution details; the hash
    // covers only what determines the artifact bytes.
    const json identity{{"kind", experiment_kind_name(kind)},
                        {"config", config},
                        {"seed", seed},
                        {"samples", samples}};
    return hash_hex(fnv1a64(identity.dump()));
}

CsvTable conversion_table(const std::vector<double>& kappas) {
    CsvTable table;
    table.header = {"kappa", "c", "alpha", "dimension"};
    for (const double k : kappas) {
        table.rows.push_back({fmt_conversion(k), fmt_conversion(c_of_kappa(k)),
                              fmt_conversion(alpha_of_kappa(k)),
                              fmt_conversion(1.0 + k / 8.0)});
    }
    return table;
}

namespace {

struct RunContext {
    const RunManifest& manifest;
    std::string hash;
    fs::path dir;

    fs::path artifact(const std::string& stem, const std::string& ext) const {
        return dir / (stem + "_" + hash + ext);
    }
    void write_summary(const json& summary) const {
        json j = summary;
        j["manifest_hash"] = hash;
        std::ofstream os(artifact("summary", ".json"), std::ios::binary);
        os << j.dump(2) << '\n';
    }
};

Domain domain_from_json(const json& cfg) {
    if (!cfg.contains("domain")) return Domain::unit_square();
    const json& d = cfg.at("domain");
    return domain_from_name(d.value("kind", std::string("unit_square")), d.value("width", 1.0),
                            d.value("height", 1.0));
}

SoupConfig soup_config_from_json(const json& cfg, std::uint64_t seed) {
    SoupConfig sc;
    sc.domain = domain_from_json(cfg);
    sc.intensity_c = cfg.value("c", 0.5);
    sc.t_min = cfg.value("t_min", 0.01);
    sc.t_max = cfg.value("t_max", 1.0);
    sc.step_scale = cfg.value("step_scale", 1.0 / 4096.0);
    sc.seed = seed;
    sc.validate();
    return sc;
}

std::vector<int> box_sizes_from_json(const json& cfg, std::vector<int> fallback) {
    if (!cfg.contains("box_sizes")) return fallback;
    return cfg.at("box_sizes").get<std::vector<int>>();
}

json dimension_json(const DimensionEstimate& est) {
    json scales = json::array();
    for (const auto& [size, count] : est.scales)
        scales.push_back({{"box_size", size}, {"count", count}});
    return json{{"slope", est.slope},       {"stderr", est.stderr_},
                {"r2", est.r2},             {"slope_full", est.slope_full},
                {"r2_full", est.r2_full},   {"trimmed", est.trimmed},
                {"scales", scales}};
}

void run_soup(const RunContext& ctx) {
    const json& cfg = ctx.manifest.config;
    const std::string format = cfg.value("format", std::string("text"));
    const bool lattice = cfg.value("lattice", false);

    json per_sample = json::array();
    for (std::size_t i = 0; i < ctx.manifest.samples; ++i) {
        const std::uint64_t seed = derive_seed(ctx.manifest.seed, i);
        LoopSoup soup;
        bool warning = false;
        if (lattice) {
            auto res = sample_rw_loop_soup(cfg.value("lattice_step", 0.05),
                                           soup_config_from_json(cfg, seed),
                                           cfg.value("max_length", 12));
            soup = std::move(res.soup);
            warning = res.no_loops_warning;
        } else {
            soup = sample_soup(soup_config_from_json(cfg, seed));
        }

        const std::string stem = "soup_" + std::to_string(i);
        if (format == "text" || format == "both")
            save_soup(ctx.artifact(stem, ".txt").string(), soup, false);
        if (format == "binary" || format == "both")
            save_soup(ctx.artifact(stem, ".bin").string(), soup, true);

        double total_duration = 0.0;
        for (const auto& loop : soup.loops) total_duration += loop.duration;
        json entry{{"sample", i},
                   {"seed", seed},
                   {"loops", soup.loops.size()},
                   {"total_duration", total_duration}};
        if (warning) entry["warning"] = "length window admits no lattice loop";
        per_sample.push_back(entry);
    }
    ctx.write_summary(json{{"kind", "soup"},
                           {"expected_candidates",
                            expected_loop_count(soup_config_from_json(cfg, ctx.manifest.seed))},
                           {"samples", per_sample}});
}

void run_clusters(const RunContext& ctx) {
    const json& cfg = ctx.manifest.config;
    const double touch = cfg.value("touch_distance", 0.0);

    CsvTable table;
    table.header = {"sample", "cluster", "size", "total_duration",
                    "bbox_lo_x", "bbox_lo_y", "bbox_hi_x", "bbox_hi_y"};
    std::string text_report;
    json per_sample = json::array();

    for (std::size_t i = 0; i < ctx.manifest.samples; ++i) {
        const LoopSoup soup =
            sample_soup(soup_config_from_json(cfg, derive_seed(ctx.manifest.seed, i)));
        const ClusterSet clusters = build_clusters(soup, touch);
        text_report += "sample " + std::to_string(i) + ": " + std::to_string(soup.loops.size()) +
                       " loops, " + std::to_string(clusters.size()) + " clusters\n";
        text_report += "cluster  size  duration  bbox\n";
        for (std::size_t cid = 0; cid < clusters.size(); ++cid) {
            BBox box;
            double duration = 0.0;
            for (const auto li : clusters.clusters[cid]) {
                box.expand(soup.loops[li].bbox);
                duration += soup.loops[li].duration;
            }
            table.rows.push_back({std::to_string(i), std::to_string(cid),
                                  std::to_string(clusters.clusters[cid].size()),
                                  fmt_stat(duration), fmt_stat(box.lo.x), fmt_stat(box.lo.y),
                                  fmt_stat(box.hi.x), fmt_stat(box.hi.y)});
            text_report += "  " + std::to_string(cid) + "  " +
                           std::to_string(clusters.clusters[cid].size()) + "  " +
                           fmt_stat(duration) + "  [" + fmt_stat(box.lo.x) + "," +
                           fmt_stat(box.lo.y) + "]x[" + fmt_stat(box.hi.x) + "," +
                           fmt_stat(box.hi.y) + "]\n";
        }
        per_sample.push_back({{"sample", i},
                              {"loops", soup.loops.size()},
                              {"clusters", clusters.size()},
                              {"edges", clusters.graph.edges.size()}});
    }
    table.save(ctx.artifact("clusters", ".csv").string());
    std::ofstream os(ctx.artifact("clusters", ".txt"), std::ios::binary);
    os << text_report;
    ctx.write_summary(json{{"kind", "clusters"}, {"samples", per_sample}});
}

void run_boundaries(const RunContext& ctx) {
    const json& cfg = ctx.manifest.config;
    const double touch = cfg.value("touch_distance", 0.0);
    const int resolution = cfg.value("resolution", 512);
    const std::size_t max_boundaries = cfg.value("max_boundaries", std::size_t{10});
    // global_top ranks clusters across all samples and keeps the overall
    // largest max_boundaries; otherwise the cap applies per sample.
    const bool global_top = cfg.value("global_top", false);
    const auto box_sizes = box_sizes_from_json(cfg, {1, 2, 4, 8, 16, 32});

    std::vector<LoopSoup> soups(ctx.manifest.samples);
    std::vector<ClusterSet> cluster_sets(ctx.manifest.samples);
    parallel_for(
        ctx.manifest.samples,
        [&](std::size_t i) {
            soups[i] = sample_soup(soup_config_from_json(cfg, derive_seed(ctx.manifest.seed, i)));
            cluster_sets[i] = build_clusters(soups[i], touch);
        },
        ctx.manifest.threads);

    struct Pick {
        std::size_t sample;
        std::uint32_t cid;
        std::size_t size;
    };
    std::vector<Pick> picks;
    for (std::size_t i = 0; i < soups.size(); ++i)
        for (std::uint32_t c = 0; c < cluster_sets[i].size(); ++c)
            picks.push_back({i, c, cluster_sets[i].clusters[c].size()});
    std::sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) {
        if (a.size != b.size) return a.size > b.size;
        if (a.sample != b.sample) return a.sample < b.sample;
        return a.cid < b.cid;
    });
    if (global_top) {
        if (picks.size() > max_boundaries) picks.resize(max_boundaries);
    } else {
        std::vector<Pick> kept;
        std::vector<std::size_t> taken(soups.size(), 0);
        for (const auto& p : picks)
            if (taken[p.sample]++ < max_boundaries) kept.push_back(p);
        picks = std::move(kept);
    }

    CsvTable table;
    table.header = {"sample", "cluster", "cluster_size", "boundary_cells", "dimension"};
    std::vector<double> slopes;
    std::vector<ClusterBoundary> svg_boundaries;
    for (const auto& pick : picks) {
        auto boundary =
            trace_outer_boundary(pick.cid, cluster_sets[pick.sample], soups[pick.sample],
                                 resolution);
        if (!boundary) continue;
        std::string dim_field;
        const auto est = box_counting_dimension(
            boundary->boundary_cells, resolution + 2, 0,
            soups[pick.sample].config.domain.bbox().width() / resolution, box_sizes);
        if (est) {
            dim_field = fmt_stat(est->slope);
            slopes.push_back(est->slope);
        }
        table.rows.push_back({std::to_string(pick.sample), std::to_string(pick.cid),
                              std::to_string(pick.size),
                              std::to_string(boundary->boundary_cells.size()), dim_field});
        if (pick.sample == 0) svg_boundaries.push_back(std::move(*boundary));
    }
    table.save(ctx.artifact("boundaries", ".csv").string());

    if (cfg.value("svg", true) && !soups.empty()) {
        const FreePointMask mask = free_point_mask(soups[0], std::min(resolution, 512));
        std::ofstream os(ctx.artifact("boundaries", ".svg"), std::ios::binary);
        os << render_soup_svg(soups[0], &cluster_sets[0], &svg_boundaries, &mask);
    }

    const Summary s = summarize(slopes);
    ctx.write_summary(json{{"kind", "boundaries"},
                           {"boundary_count", slopes.size()},
                           {"mean_dimension", s.mean},
                           {"stderr", s.stderr_mean}});
}

void run_dimensions(const RunContext& ctx) {
    const json& cfg = ctx.manifest.config;
    const std::string target = cfg.value("target", std::string("sierpinski"));
    json summary{{"kind", "dimensions"}, {"target", target}};

    if (target == "sierpinski") {
        const int depth = cfg.value("depth", 6);
        int side = 1;
        for (int i = 0; i < depth; ++i) side *= 3;
        std::vector<int> scales;
        for (int s = 1; s <= side / 9; s *= 3) scales.push_back(s);
        const auto est =
            box_counting_dimension(sierpinski_carpet_cells(depth), side, side, 1.0, scales);
        summary["estimate"] = dimension_json(*est);
        summary["expected"] = std::log(8.0) / std::log(3.0);
    } else if (target == "free_mask") {
        const int resolution = cfg.value("resolution", 1024);
        const auto box_sizes = box_sizes_from_json(cfg, {1, 2, 4, 8, 16, 32, 64});
        std::vector<double> slopes(ctx.manifest.samples);
        std::vector<double> fractions(ctx.manifest.samples);
        parallel_for(
            ctx.manifest.samples,
            [&](std::size_t i) {
                const SoupConfig sc =
                    soup_config_from_json(cfg, derive_seed(ctx.manifest.seed, i));
                const FreePointMask mask = free_point_mask(sample_soup(sc), resolution);
                std::vector<std::uint32_t> cells;
                for (std::uint32_t j = 0; j < mask.free.size(); ++j)
                    if (mask.free[j]) cells.push_back(j);
                const auto est = box_counting_dimension(cells, mask.grid.nx, mask.grid.ny,
                                                        mask.grid.cell_size, box_sizes);
                slopes[i] = est ? est->slope : 0.0;
                fractions[i] = mask.free_fraction();
            },
            ctx.manifest.threads);
        const Summary s = summarize(slopes);
        CsvTable table;
        table.header = {"sample", "dimension", "free_fraction"};
        for (std::size_t i = 0; i < slopes.size(); ++i)
            table.rows.push_back({std::to_string(i), fmt_stat(slopes[i]), fmt_stat(fractions[i])});
        table.save(ctx.artifact("dimensions", ".csv").string());
        summary["mean_dimension"] = s.mean;
        summary["stderr"] = s.stderr_mean;
        summary["expected"] = 2.0 - cfg.value("c", 0.5) / 5.0;
        summary["t_min"] = cfg.value("t_min", 0.01);
    } else if (target == "loop_boundary") {
        const int resolution = cfg.value("resolution", 2048);
        const double duration = cfg.value("duration", 1.0);
        const auto n_points = cfg.value("n_points", std::size_t{65536});
        const auto box_sizes = box_sizes_from_json(cfg, {1, 2, 4, 8, 16, 32, 64});
        std::vector<double> slopes(ctx.manifest.samples, 0.0);
        parallel_for(
            ctx.manifest.samples,
            [&](std::size_t i) {
                // One loop rooted at the center of a box comfortably larger
                // than its typical radius, treated as a one-loop soup.
                const double half = cfg.value("box_half", 3.0) * std::sqrt(duration);
                LoopSoup soup;
                soup.config.domain = Domain::rectangle(2.0 * half, 2.0 * half);
                soup.config.intensity_c = 0.0;
                soup.config.t_min = duration / 2.0;
                soup.config.t_max = duration;
                soup.config.seed = derive_seed(ctx.manifest.seed, i);
                Rng rng(soup.config.seed, streams::kLoopBase);
                soup.loops.push_back(
                    sample_brownian_bridge_loop({half, half}, duration, n_points, rng));

                ClusterSet clusters = build_clusters_bruteforce(soup, 0.0);
                const auto boundary = trace_outer_boundary(0, clusters, soup, resolution);
                if (!boundary) return;
                const auto est = box_counting_dimension(
                    boundary->boundary_cells, resolution + 2, 0,
                    soup.config.domain.bbox().width() / resolution, box_sizes);
                if (est) slopes[i] = est->slope;
            },
            ctx.manifest.threads);
        const Summary s = summarize(slopes);
        CsvTable table;
        table.header = {"sample", "dimension"};
        for (std::size_t i = 0; i < slopes.size(); ++i)
            table.rows.push_back({std::to_string(i), fmt_stat(slopes[i])});
        table.save(ctx.artifact("dimensions", ".csv").string());
        summary["mean_dimension"] = s.mean;
        summary["stderr"] = s.stderr_mean;
        summary["expected"] = 4.0 / 3.0;
    } else {
        throw std::invalid_argument("dimensions: unknown target " + target);
    }
    ctx.write_summary(summary);
}

void run_percolation(const RunContext& ctx) {
    const json& cfg = ctx.manifest.config;
    std::vector<double> c_grid;
    if (cfg.contains("c_values")) {
        c_grid = cfg.at("c_values").get<std::vector<double>>();
    } else {
        const double from = cfg.value("c_from", 0.1);
        const double to = cfg.value("c_to", 1.6);
        const double step = cfg.value("c_step", 0.1);
        for (double c = from; c <= to + 1e-12; c += step) c_grid.push_back(c);
    }
    const int resolution = cfg.value("resolution", 24);
    SoupConfig base = soup_config_from_json(cfg, ctx.manifest.seed);

    const SweepSamples sweep =
        percolation_sweep_samples(c_grid, base, resolution, ctx.manifest.samples,
                                  ctx.manifest.threads);

    CsvTable table;
    table.header = {"c", "seed", "crossed", "free_fraction"};
    std::vector<double> probs(c_grid.size(), 0.0);
    for (std::size_t k = 0; k < c_grid.size(); ++k) {
        std::size_t hits = 0;
        for (std::size_t s = 0; s < ctx.manifest.samples; ++s) {
            table.rows.push_back({fmt_stat(c_grid[k]), std::to_string(s),
                                  std::to_string(static_cast<int>(sweep.crossed[s][k])),
                                  fmt_stat(sweep.free_fraction[s][k])});
            hits += sweep.crossed[s][k];
        }
        probs[k] = static_cast<double>(hits) / static_cast<double>(ctx.manifest.samples);
    }
    table.save(ctx.artifact("percolation", ".csv").string());

    const auto midpoint = sweep_midpoint(c_grid, probs);
    json summary{{"kind", "percolation"},
                 {"c_values", c_grid},
                 {"crossing_probability", probs},
                 {"resolution", resolution},
                 {"t_min", base.t_min},
                 {"t_max", base.t_max},
                 {"n_samples", ctx.manifest.samples},
                 {"conjectured_critical_c", 1.0}};
    if (midpoint) summary["midpoint"] = *midpoint;
    ctx.write_summary(summary);
}

void run_sle(const RunContext& ctx) {
    const json& cfg = ctx.manifest.config;
    const double kappa = cfg.value("kappa", 3.0);
    std::optional<double> rho;
    if (cfg.contains("rho") && !cfg.at("rho").is_null()) rho = cfg.at("rho").get<double>();
    const double horizon = cfg.value("horizon", 1.0);
    const double dt = cfg.value("dt", 1e-4);
    const bool want_traces = cfg.value("trace_csv", true);
    const bool want_dimension = cfg.value("dimension", false);
    const auto box_sizes = box_sizes_from_json(cfg, {1, 2, 4, 8, 16, 32, 64});
    const int resolution = cfg.value("resolution", 1024);

    struct TraceResult {
        SleTrace trace;
        double dim = 0.0;
        bool has_dim = false;
    };
    const auto results = parallel_map<TraceResult>(
        ctx.manifest.samples,
        [&](std::size_t i) {
            TraceResult r;
            const DrivingPath driving =
                sample_driving(kappa, rho, horizon, dt, derive_seed(ctx.manifest.seed, i));
            r.trace = loewner_trace(driving, 0.0, 1);
            if (want_dimension && r.trace.points.size() >= 10000) {
                const auto est = trace_dimension(r.trace, box_sizes, resolution);
                if (est) {
                    r.dim = est->slope;
                    r.has_dim = true;
                }
            }
            return r;
        },
        ctx.manifest.threads);

    std::vector<double> endpoints;
    std::vector<double> dims;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        endpoints.push_back(r.trace.points.back().x);
        if (r.has_dim) dims.push_back(r.dim);
        if (want_traces && i == 0) {
            CsvTable table;
            table.header = {"t", "re", "im", "w"};
            for (std::size_t k = 0; k < r.trace.points.size(); ++k) {
                table.rows.push_back({fmt_stat(r.trace.driving.times[k]),
                                      fmt_stat(r.trace.points[k].x), fmt_stat(r.trace.points[k].y),
                                      fmt_stat(r.trace.driving.values[k])});
            }
            table.save(ctx.artifact("trace_0", ".csv").string());
        }
    }
    if (cfg.value("svg", false) && !results.empty()) {
        SvgScene scene(bbox_of(results[0].trace.points).inflated(0.1));
        scene.add_polyline(results[0].trace.points, "#1f77b4", 0.002 * scene.view.width());
        scene.save(ctx.artifact("trace_0", ".svg").string());
    }

    const Summary es = summarize(endpoints);
    json summary{{"kind", "sle"},          {"kappa", kappa},
                 {"horizon", horizon},     {"dt", dt},
                 {"n_samples", ctx.manifest.samples},
                 {"endpoint_re_mean", es.mean},
                 {"endpoint_re_variance", es.variance}};
    if (rho) summary["rho"] = *rho;
    if (!dims.empty()) {
        const Summary ds = summarize(dims);
        summary["mean_dimension"] = ds.mean;
        summary["dimension_stderr"] = ds.stderr_mean;
        summary["expected_dimension"] = 1.0 + kappa / 8.0;
    }
    ctx.write_summary(summary);
}

void run_chordal(const RunContext& ctx) {
    const json& cfg = ctx.manifest.config;
    ChordalSetup base;
    if (cfg.contains("c") && cfg.contains("alpha")) {
        base.c = cfg.at("c").get<double>();
        base.kappa = kappa_of_c(base.c);
        base.alpha = cfg.at("alpha").get<double>();
    } else {
        base = ChordalSetup::for_kappa(cfg.value("kappa", 3.0), ctx.manifest.seed);
    }
    base.box = Domain::half_plane_box(cfg.value("box_width", 6.0), cfg.value("box_height", 2.0));
    base.t_min = cfg.value("t_min", 0.01);
    base.t_max = cfg.value("t_max", 1.0);
    base.step_scale = cfg.value("step_scale", 1.0 / 4096.0);
    base.driving_dt = cfg.value("driving_dt", 2e-4);
    base.resolution = cfg.value("resolution", 512);
    base.touch_distance = cfg.value("touch_distance", 0.0);
    base.validate();
    const auto box_sizes = box_sizes_from_json(cfg, {1, 2, 4, 8, 16, 32});

    const bool want_svg = cfg.value("svg", false);
    struct ChordalResult {
        bool valid = false;
        double eta_dim = 0.0;
        bool has_dim = false;
        std::size_t eta_cells = 0;
        std::size_t attached = 0;
        std::vector<Vec2> eta;
        std::vector<Vec2> gamma;  // kept for the overlay sample only
    };
    const auto results = parallel_map<ChordalResult>(
        ctx.manifest.samples,
        [&](std::size_t i) {
            ChordalResult r;
            ChordalSetup setup = base;
            setup.seed = derive_seed(ctx.manifest.seed, i);
            const auto hull = run_chordal_sample(setup);
            if (!hull) return r;
            r.valid = true;
            r.eta = hull->eta;
            if (want_svg && i == 0) r.gamma = hull->gamma;
            r.eta_cells = hull->eta_cells.size();
            r.attached = hull->attached_cluster_ids.size();
            const auto est = box_counting_dimension(hull->eta_cells, hull->grid_nx, hull->grid_ny,
                                                    hull->grid_cell, box_sizes);
            if (est) {
                r.eta_dim = est->slope;
                r.has_dim = true;
            }
            return r;
        },
        ctx.manifest.threads);

    if (want_svg && !results.empty() && results[0].valid) {
        // Overlay of run 0: soup loops tinted per cluster, gamma, eta.
        ChordalSetup setup = base;
        setup.seed = derive_seed(ctx.manifest.seed, 0);
        const LoopSoup soup = sample_soup(setup.soup_config());
        const ClusterSet clusters = build_clusters(soup, setup.touch_distance);
        SvgScene scene(setup.box.bbox().inflated(0.02 * setup.box.width));
        for (std::size_t li = 0; li < soup.loops.size(); ++li)
            scene.add_polyline(soup.loops[li].points, cluster_color(clusters.labels[li]),
                               0.0012 * scene.view.width(), "none", 0.8);
        scene.add_polyline(results[0].gamma, "#d62728", 0.002 * scene.view.width());
        scene.add_polyline(results[0].eta, "#000000", 0.003 * scene.view.width());
        scene.save(ctx.artifact("chordal_overlay", ".svg").string());
    }

    CsvTable table;
    table.header = {"sample", "valid", "attached_clusters", "eta_cells", "eta_dimension",
                    "crossing_x", "inverted_crossing_x"};
    std::vector<std::vector<Vec2>> etas;
    std::vector<double> dims;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        std::string cx_field, tx_field, dim_field;
        if (r.valid) {
            etas.push_back(r.eta);
            if (r.has_dim) {
                dims.push_back(r.eta_dim);
                dim_field = fmt_stat(r.eta_dim);
            }
            if (const auto cx = crossing_abscissa(r.eta, 1.0)) cx_field = fmt_stat(*cx);
            if (const auto tx = crossing_abscissa(inverted_curve(r.eta), 1.0))
                tx_field = fmt_stat(*tx);
        }
        table.rows.push_back({std::to_string(i), r.valid ? "1" : "0", std::to_string(r.attached),
                              std::to_string(r.eta_cells), dim_field, cx_field, tx_field});
    }
    table.save(ctx.artifact("chordal", ".csv").string());

    const ReversibilityReport rev = reversibility_statistic(etas, 1.0);
    const Summary ds = summarize(dims);
    json summary{{"kind", "chordal"},
                 {"kappa", base.kappa},
                 {"alpha", base.alpha},
                 {"c", base.c},
                 {"n_samples", ctx.manifest.samples},
                 {"n_valid", etas.size()},
                 {"mean_eta_dimension", ds.mean},
                 {"eta_dimension_stderr", ds.stderr_mean},
                 {"expected_dimension", 1.0 + base.kappa / 8.0},
                 {"reversibility",
                  json{{"ks_statistic", rev.ks.statistic},
                       {"p_value", rev.ks.p_value},
                       {"n_used", rev.n_used},
                       {"n_dropped", rev.n_dropped}}}};
    ctx.write_summary(summary);
}

}  // namespace

int run(const RunManifest& manifest, std::ostream& out, std::ostream& err) {
    RunContext ctx{manifest, manifest.hash(), fs::path(manifest.out_dir)};
    try {
        fs::create_directories(ctx.dir);
        {
            std::ofstream os(ctx.dir / ("manifest_" + ctx.hash + ".json"), std::ios::binary);
            os << manifest.to_json().dump(2) << '\n';
        }
        switch (manifest.kind) {
            case ExperimentKind::soup: run_soup(ctx); break;
            case ExperimentKind::clusters: run_clusters(ctx); break;
            case ExperimentKind::boundaries: run_boundaries(ctx); break;
            case ExperimentKind::dimensions: run_dimensions(ctx); break;
            case ExperimentKind::percolation: run_percolation(ctx); break;
            case ExperimentKind::sle: run_sle(ctx); break;
            case ExperimentKind::chordal: run_chordal(ctx); break;
        }
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
    out << experiment_kind_name(manifest.kind) << " run " << ctx.hash << " -> "
        << ctx.dir.string() << '\n';
    return kExitOk;
}

}  // namespace loopsoup
