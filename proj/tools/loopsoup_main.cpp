// loopsoup: command-line front end.
//
//   loopsoup <subcommand> [--config file.json] [--seed N] [--samples N]
//            [--out DIR] [--threads N] [--resolution N] [--set key=value]
//
// Subcommands are the experiment kinds (soup, clusters, boundaries,
// dimensions, percolation, sle, chordal) plus `convert` for the kappa/c
// table and `rerun` for an archived manifest.  Flags override config-file
// values.  Exit codes: 0 success, 1 usage, 2 runtime.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "loopsoup/runner.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    unsigned threads = 0;
    int resolution = 0;
    std::vector<std::string> overrides;
    bool have_seed = false, have_samples = false, have_out = false, have_threads = false,
         have_resolution = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--seed", o.seed, "base seed")->each([&](const std::string&) {
        o.have_seed = true;
    });
    cmd->add_option("--samples", o.samples, "number of samples")->each([&](const std::string&) {
        o.have_samples = true;
    });
    cmd->add_option("--out", o.out_dir, "output directory")->each([&](const std::string&) {
        o.have_out = true;
    });
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)")
        ->each([&](const std::string&) { o.have_threads = true; });
    cmd->add_option("--resolution", o.resolution, "raster resolution")
        ->each([&](const std::string&) { o.have_resolution = true; });
    cmd->add_option("--set", o.overrides, "config override key=value (repeatable)");
}

int build_and_run(const std::string& kind, const CommonOpts& o) {
    json j;
    if (!o.config_path.empty()) {
        std::ifstream is(o.config_path);
        if (!is) {
            std::cerr << "usage error: cannot open config " << o.config_path << '\n';
            return loopsoup::kExitUsage;
        }
        try {
            is >> j;
        } catch (const json::exception& e) {
            std::cerr << "usage error: " << o.config_path << ": " << e.what() << '\n';
            return loopsoup::kExitUsage;
        }
    }
    if (!j.contains("kind")) j["kind"] = kind;
    if (j.at("kind") != kind) {
        std::cerr << "usage error: config kind " << j.at("kind") << " does not match subcommand "
                  << kind << '\n';
        return loopsoup::kExitUsage;
    }
    if (!j.contains("config")) j["config"] = json::object();

    // Flags win over config-file values.
    if (o.have_seed) j["seed"] = o.seed;
    if (o.have_samples) j["samples"] = o.samples;
    if (o.have_out) j["out_dir"] = o.out_dir;
    if (o.have_threads) j["threads"] = o.threads;
    if (o.have_resolution) j["config"]["resolution"] = o.resolution;
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "usage error: --set expects key=value, got " << kv << '\n';
            return loopsoup::kExitUsage;
        }
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        try {
            j["config"][key] = json::parse(value);
        } catch (const json::exception&) {
            j["config"][key] = value;  // plain string value
        }
    }

    try {
        return loopsoup::run(loopsoup::RunManifest::from_json(j), std::cout, std::cerr);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return loopsoup::kExitUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Brownian loop soup laboratory"};
    app.require_subcommand(1);

    const std::vector<std::string> kinds = {"soup",        "clusters", "boundaries", "dimensions",
                                            "percolation", "sle",      "chordal"};
    std::vector<CommonOpts> opts(kinds.size());
    for (std::size_t i = 0; i < kinds.size(); ++i)
        add_common(app.add_subcommand(kinds[i], kinds[i] + " experiment"), opts[i]);

    std::string manifest_path;
    auto* rerun = app.add_subcommand("rerun", "re-run an archived manifest");
    rerun->add_option("manifest", manifest_path, "manifest JSON file")->required();
    unsigned rerun_threads = 0;
    rerun->add_option("--threads", rerun_threads, "worker threads");

    std::vector<double> kappas = {2.7, 3.0, 3.5, 4.0};
    std::string convert_out;
    auto* convert = app.add_subcommand("convert", "kappa/c/alpha conversion table");
    convert->add_option("--kappa", kappas, "kappa values");
    convert->add_option("--out", convert_out, "write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : loopsoup::kExitUsage;
    }

    try {
        if (rerun->parsed()) {
            loopsoup::RunManifest m = loopsoup::RunManifest::load(manifest_path);
            m.threads = rerun_threads;
            return loopsoup::run(m, std::cout, std::cerr);
        }
        if (convert->parsed()) {
            const loopsoup::CsvTable table = loopsoup::conversion_table(kappas);
            if (convert_out.empty()) {
                std::cout << table.str();
            } else {
                table.save(convert_out);
            }
            return loopsoup::kExitOk;
        }
        for (std::size_t i = 0; i < kinds.size(); ++i)
            if (app.get_subcommand(kinds[i])->parsed()) return build_and_run(kinds[i], opts[i]);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return loopsoup::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return loopsoup::kExitRuntime;
    }
    return loopsoup::kExitUsage;
}
