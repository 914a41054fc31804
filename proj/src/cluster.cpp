#include "loopsoup/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace loopsoup {

namespace {

// Union-find with path compression and union by size; deterministic.
struct UnionFind {
    std::vector<std::uint32_t> parent;
    std::vector<std::uint32_t> size;

    explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void merge(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

// Segment-level test without the bbox shortcut.
bool segments_touch(const Loop& a, const Loop& b, double touch) {
    for (std::size_t i = 0; i + 1 < a.points.size(); ++i) {
        for (std::size_t j = 0; j + 1 < b.points.size(); ++j) {
            if (touch > 0.0) {
                if (segment_distance(a.points[i], a.points[i + 1], b.points[j], b.points[j + 1]) <=
                    touch)
                    return true;
            } else if (segments_intersect(a.points[i], a.points[i + 1], b.points[j],
                                          b.points[j + 1])) {
                return true;
            }
        }
    }
    return false;
}

ClusterSet assemble(const LoopSoup& soup, IntersectionGraph graph) {
    const std::size_t n = soup.loops.size();
    UnionFind uf(n);
    for (const auto& [i, j] : graph.edges) uf.merge(i, j);

    // Cluster id = rank of the smallest loop index in the cluster.
    std::unordered_map<std::uint32_t, std::uint32_t> root_to_id;
    std::vector<std::uint32_t> roots;
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t r = uf.find(i);
        if (root_to_id.emplace(r, static_cast<std::uint32_t>(roots.size())).second)
            roots.push_back(r);
    }

    ClusterSet cs;
    cs.graph = std::move(graph);
    cs.labels.resize(n);
    cs.clusters.resize(roots.size());
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::uint32_t id = root_to_id.at(uf.find(i));
        cs.labels[i] = id;
        cs.clusters[id].push_back(i);
    }
    return cs;
}

}  // namespace

bool loops_intersect(const Loop& a, const Loop& b, double touch_distance) {
    if (!a.bbox.inflated(touch_distance).overlaps(b.bbox)) return false;
    return segments_touch(a, b, touch_distance);
}

ClusterSet build_clusters_bruteforce(const LoopSoup& soup, double touch_distance) {
    const std::size_t n = soup.loops.size();
    IntersectionGraph graph;
    graph.n_loops = n;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j)
            if (loops_intersect(soup.loops[i], soup.loops[j], touch_distance))
                graph.edges.emplace_back(i, j);
    return assemble(soup, std::move(graph));
}

ClusterSet build_clusters(const LoopSoup& soup, double touch_distance) {
    const std::size_t n = soup.loops.size();
    if (n == 0) return assemble(soup, {0, {}});

    // Cell size: median bbox diagonal balances candidate counts across the
    // scale-invariant loop population.
    std::vector<double> diags(n);
    for (std::size_t i = 0; i < n; ++i) diags[i] = soup.loops[i].bbox.diagonal();
    std::nth_element(diags.begin(), diags.begin() + diags.size() / 2, diags.end());
    double cell = diags[diags.size() / 2] + 2.0 * touch_distance;
    if (!(cell > 0.0)) cell = 1.0;

    auto cell_key = [](std::int64_t ix, std::int64_t iy) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
               static_cast<std::uint32_t>(iy);
    };

    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
    for (std::uint32_t i = 0; i < n; ++i) {
        const BBox b = soup.loops[i].bbox.inflated(touch_distance / 2.0);
        const auto x0 = static_cast<std::int64_t>(std::floor(b.lo.x / cell));
        const auto x1 = static_cast<std::int64_t>(std::floor(b.hi.x / cell));
        const auto y0 = static_cast<std::int64_t>(std::floor(b.lo.y / cell));
        const auto y1 = static_cast<std::int64_t>(std::floor(b.hi.y / cell));
        for (std::int64_t cx = x0; cx <= x1; ++cx)
            for (std::int64_t cy = y0; cy <= y1; ++cy) grid[cell_key(cx, cy)].push_back(i);
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> candidates;
    for (const auto& [key, members] : grid) {
        (void)key;
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b)
                candidates.emplace_back(std::min(members[a], members[b]),
                                        std::max(members[a], members[b]));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    IntersectionGraph graph;
    graph.n_loops = n;
    for (const auto& [i, j] : candidates)
        if (loops_intersect(soup.loops[i], soup.loops[j], touch_distance))
            graph.edges.emplace_back(i, j);
    return assemble(soup, std::move(graph));
}

std::optional<double> min_cluster_distance(const ClusterSet& clusters, const LoopSoup& soup) {
    if (clusters.size() < 2) return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < clusters.size(); ++a) {
        for (std::size_t b = a + 1; b < clusters.size(); ++b) {
            for (const auto ia : clusters.clusters[a]) {
                for (const auto ib : clusters.clusters[b]) {
                    best = std::min(best, polyline_distance(soup.loops[ia].points,
                                                            soup.loops[ib].points));
                }
            }
        }
    }
    return best;
}

bool same_partition(const ClusterSet& a, const ClusterSet& b) {
    return a.clusters == b.clusters;
}

}  // namespace loopsoup
