#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "knnlab/sim.hpp"

namespace knnlab::sim {

namespace {

std::vector<Edge> undirected_edges(const NearestNeighborGraph& g) {
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i < g.adj.size(); ++i)
        for (auto j : g.adj[i])
            if (i < j) e.emplace_back(i, j);
    return e;
}

bool edges_cross(const NearestNeighborGraph& g, const Edge& e, const Edge& f) {
    return geom::segments_intersect({g.points[e.first], g.points[e.second]}, {g.points[f.first], g.points[f.second]});
}

CrossingPair label(const NearestNeighborGraph& g, Edge e, Edge f) {
    if (f < e) std::swap(e, f);  // labels independent of discovery order
    const std::array<std::uint32_t, 4> in{e.first, e.second, f.first, f.second};
    CrossingPair c{in[0], in[1], in[2], in[3], std::nullopt};
    try {
        const auto nc = regions::normalize_crossing_pair(g.points[in[0]], g.points[in[1]], g.points[in[2]], g.points[in[3]]);
        c.a1 = in[static_cast<std::size_t>(nc.role_of_input[0])];
        c.a2 = in[static_cast<std::size_t>(nc.role_of_input[1])];
        c.b1 = in[static_cast<std::size_t>(nc.role_of_input[2])];
        c.b2 = in[static_cast<std::size_t>(nc.role_of_input[3])];
        c.frame = nc.frame;
    } catch (const std::invalid_argument&) {
        // degenerate touching configuration; keep the input labels
    }
    return c;
}

void sort_report(CrossingReport& r) {
    std::sort(r.pairs.begin(), r.pairs.end(), [](const CrossingPair& x, const CrossingPair& y) {
        return std::tie(x.a1, x.a2, x.b1, x.b2) < std::tie(y.a1, y.a2, y.b1, y.b2);
    });
}

}  // namespace

CrossingReport find_crossing_pairs(const NearestNeighborGraph& g, const ComponentDecomposition& comps) {
    CrossingReport report;
    if (comps.count() <= 1) return report;
    const auto edges = undirected_edges(g);
    if (edges.empty()) return report;
    const std::uint32_t giant = comps.largest();

    // bucket edges by the grid cells their bounding boxes meet
    double xmin = INFINITY, ymin = INFINITY, xmax = -INFINITY, ymax = -INFINITY, longest = 0.0;
    for (const auto& [i, j] : edges) {
        const Point a = g.points[i], b = g.points[j];
        xmin = std::min({xmin, a.x, b.x});
        xmax = std::max({xmax, a.x, b.x});
        ymin = std::min({ymin, a.y, b.y});
        ymax = std::max({ymax, a.y, b.y});
        longest = std::max(longest, geom::distance(a, b));
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
    double cell = std::max(longest, span / 256.0);
    if (!(cell > 0.0)) cell = 1.0;
    const auto nx = static_cast<std::int64_t>((xmax - xmin) / cell) + 1;
    const auto ny = static_cast<std::int64_t>((ymax - ymin) / cell) + 1;
    auto cx = [&](double x) { return std::clamp<std::int64_t>(static_cast<std::int64_t>((x - xmin) / cell), 0, nx - 1); };
    auto cy = [&](double y) { return std::clamp<std::int64_t>(static_cast<std::int64_t>((y - ymin) / cell), 0, ny - 1); };
    std::vector<std::vector<std::uint32_t>> bucket(static_cast<std::size_t>(nx * ny));
    auto cells_of = [&](const Edge& e, auto&& fn) {
        const Point a = g.points[e.first], b = g.points[e.second];
        for (auto j = cy(std::min(a.y, b.y)); j <= cy(std::max(a.y, b.y)); ++j)
            for (auto i = cx(std::min(a.x, b.x)); i <= cx(std::max(a.x, b.x)); ++i) fn(static_cast<std::size_t>(j * nx + i));
    };
    for (std::uint32_t t = 0; t < edges.size(); ++t) cells_of(edges[t], [&](std::size_t c) { bucket[c].push_back(t); });

    std::vector<std::uint32_t> cand;
    for (std::uint32_t t = 0; t < edges.size(); ++t) {
        const auto ce = comps.id[edges[t].first];
        if (ce == giant) continue;
        cand.clear();
        cells_of(edges[t], [&](std::size_t c) { cand.insert(cand.end(), bucket[c].begin(), bucket[c].end()); });
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (auto u : cand) {
            const auto cf = comps.id[edges[u].first];
            if (cf == ce) continue;
            // each unordered pair once: small-vs-giant from the small side, small-vs-small from the lower id
            if (cf != giant && cf < ce) continue;
            if (edges_cross(g, edges[t], edges[u])) report.pairs.push_back(label(g, edges[t], edges[u]));
        }
    }
    sort_report(report);
    return report;
}

CrossingReport find_crossing_pairs_brute(const NearestNeighborGraph& g, const ComponentDecomposition& comps) {
    CrossingReport report;
    const auto edges = undirected_edges(g);
    for (std::size_t t = 0; t < edges.size(); ++t)
        for (std::size_t u = t + 1; u < edges.size(); ++u) {
            if (comps.id[edges[t].first] == comps.id[edges[u].first]) continue;
            if (edges_cross(g, edges[t], edges[u])) report.pairs.push_back(label(g, edges[t], edges[u]));
        }
    sort_report(report);
    return report;
}

}  // namespace knnlab::sim
