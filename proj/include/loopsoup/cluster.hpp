// Loop-loop intersection and chain-connected cluster construction.
//
// Two loops are in the same cluster when a finite chain of pairwise
// intersecting loops joins them.  build_clusters accelerates the pair search
// with a uniform grid over loop bounding boxes and must produce exactly the
// same partition (and edge list) as the all-pairs reference
// build_clusters_bruteforce.

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "loopsoup/soup.hpp"

namespace loopsoup {

struct IntersectionGraph {
    std::size_t n_loops = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // i < j, sorted, unique
};

struct ClusterSet {
    std::vector<std::uint32_t> labels;               // loop index -> cluster id
    std::vector<std::vector<std::uint32_t>> clusters;  // cluster id -> loop indices (sorted)
    IntersectionGraph graph;

    std::size_t size() const { return clusters.size(); }
};

// True iff some segment of a meets some segment of b, or comes within
// touch_distance of it when touch_distance > 0.  The bounding-box pre-check
// never changes the answer.
bool loops_intersect(const Loop& a, const Loop& b, double touch_distance = 0.0);

ClusterSet build_clusters(const LoopSoup& soup, double touch_distance = 0.0);

// O(n^2) reference: tests every pair directly.
ClusterSet build_clusters_bruteforce(const LoopSoup& soup, double touch_distance = 0.0);

// Minimum over distinct cluster pairs of the polyline-to-polyline distance.
// nullopt when fewer than 2 clusters exist.
std::optional<double> min_cluster_distance(const ClusterSet& clusters, const LoopSoup& soup);

// Same partition up to relabeling (cluster ids are canonical here, so this
// is plain equality of sorted cluster contents).
bool same_partition(const ClusterSet& a, const ClusterSet& b);

}  // namespace loopsoup
