// Experiment orchestration: manifests in, deterministic artifacts out.
//
// A manifest fixes the experiment kind, its config payload, the output
// directory and the seed policy.  Every run writes a manifest copy next to
// its artifacts; artifact filenames carry the manifest hash, and re-running
// a manifest reproduces every artifact byte for byte at any thread count.
// Timestamps live only in the separate run log.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "loopsoup/report.hpp"

namespace loopsoup {

enum class ExperimentKind { soup, clusters, boundaries, dimensions, percolation, sle, chordal };

ExperimentKind experiment_kind_from_name(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

struct RunManifest {
    ExperimentKind kind = ExperimentKind::soup;
    nlohmann::json config;  // experiment payload
    std::string out_dir = "runs";
    std::uint64_t seed = 1;
    std::size_t samples = 1;
    unsigned threads = 0;  // 0 = all cores

    static RunManifest from_json(const nlohmann::json& j);
    static RunManifest load(const std::string& path);
    nlohmann::json to_json() const;

    // FNV-1a of the canonical JSON dump; names every artifact of the run.
    std::string hash() const;
};

// Exit codes: 0 success, 1 usage/config error, 2 runtime failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

// Dispatches to the experiment pipeline; writes artifacts and a summary
// JSON under manifest.out_dir.  Errors are reported on err and mapped to
// the exit codes above.
int run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

// The kappa -> (c, alpha) conversion table artifact.
CsvTable conversion_table(const std::vector<double>& kappas);

}  // namespace loopsoup
