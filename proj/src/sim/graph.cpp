#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "knnlab/sim.hpp"
#include "point_grid.hpp"

namespace knnlab::sim {

using detail::dist2;
using detail::PointGrid;

std::string model_name(ModelKind k) {
    switch (k) {
        case ModelKind::Directed: return "directed";
        case ModelKind::Mutual: return "mutual";
        case ModelKind::Either: return "either";
        case ModelKind::Gilbert: return "gilbert";
    }
    return "?";
}

ModelKind parse_model(const std::string& s) {
    if (s == "directed") return ModelKind::Directed;
    if (s == "mutual") return ModelKind::Mutual;
    if (s == "either") return ModelKind::Either;
    if (s == "gilbert") return ModelKind::Gilbert;
    throw std::invalid_argument("unknown model '" + s + "'");
}

namespace {

using Cand = std::pair<double, std::uint32_t>;

int effective_k(const std::vector<Point>& pts, int k) {
    if (k < 0) throw std::invalid_argument("k must be non-negative");
    if (pts.empty()) return 0;
    return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), pts.size() - 1));
}

std::vector<std::uint32_t> drain(std::vector<Cand>& heap) {
    std::sort(heap.begin(), heap.end());
    std::vector<std::uint32_t> out;
    out.reserve(heap.size());
    for (const auto& c : heap) out.push_back(c.second);
    return out;
}

std::vector<Edge> gilbert_edges(const std::vector<Point>& pts, double radius, bool brute) {
    if (!(radius >= 0.0)) throw std::invalid_argument("gilbert radius must be non-negative");
    const double r2 = radius * radius;
    std::vector<Edge> e;
    const auto n = static_cast<std::uint32_t>(pts.size());
    if (brute) {
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i + 1; j < n; ++j)
                if (dist2(pts[i], pts[j]) <= r2) e.emplace_back(i, j);
        return e;
    }
    const PointGrid grid(pts, radius);
    for (std::uint32_t i = 0; i < n; ++i) {
        const Point p = pts[i];
        grid.for_box(p.x - radius, p.y - radius, p.x + radius, p.y + radius, [&](std::uint32_t j) {
            if (j > i && dist2(p, pts[j]) <= r2) e.emplace_back(i, j);
        });
    }
    std::sort(e.begin(), e.end());
    return e;
}

NearestNeighborGraph finish(const std::vector<Point>& pts, int k, Model model, NeighborLists out, std::vector<Edge> edges) {
    NearestNeighborGraph g;
    g.points = pts;
    g.k = k;
    g.model = model;
    g.out = std::move(out);
    g.edges = std::move(edges);
    g.adj.assign(pts.size(), {});
    for (const auto& [i, j] : g.edges) {
        g.adj[i].push_back(j);
        g.adj[j].push_back(i);
    }
    for (auto& a : g.adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return g;
}

}  // namespace

NeighborLists knn_lists(const std::vector<Point>& pts, int k) {
    const int kk = effective_k(pts, k);
    NeighborLists lists(pts.size());
    if (kk == 0) return lists;
    const auto n = pts.size();

    double xmin = pts[0].x, xmax = pts[0].x, ymin = pts[0].y, ymax = pts[0].y;
    for (const Point& p : pts) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double span = std::max(xmax - xmin, ymax - ymin);
    const double cell = span > 0.0 ? span * std::sqrt(static_cast<double>(kk) / static_cast<double>(n)) : 1.0;
    const PointGrid grid(pts, cell);
    const std::int64_t nx = grid.nx(), ny = grid.ny();
    const double h = grid.cell();

    std::vector<Cand> heap;
    heap.reserve(static_cast<std::size_t>(kk) + 1);
    for (std::uint32_t i = 0; i < n; ++i) {
        const Point p = pts[i];
        heap.clear();
        auto offer = [&](std::uint32_t j) {
            if (j == i) return;
            const Cand c{dist2(p, pts[j]), j};
            if (heap.size() < static_cast<std::size_t>(kk)) {
                heap.push_back(c);
                std::push_heap(heap.begin(), heap.end());
            } else if (c < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = c;
                std::push_heap(heap.begin(), heap.end());
            }
        };
        const std::int64_t ci = grid.cx(p.x), cj = grid.cy(p.y);
        for (std::int64_t r = 0;; ++r) {
            if (r == 0) {
                grid.for_cell(ci, cj, offer);
            } else {
                for (std::int64_t a = ci - r; a <= ci + r; ++a) {
                    grid.for_cell(a, cj - r, offer);
                    grid.for_cell(a, cj + r, offer);
                }
                for (std::int64_t b = cj - r + 1; b <= cj + r - 1; ++b) {
                    grid.for_cell(ci - r, b, offer);
                    grid.for_cell(ci + r, b, offer);
                }
            }
            const bool left = ci - r <= 0, right = ci + r >= nx - 1, down = cj - r <= 0, up = cj + r >= ny - 1;
            if (left && right && down && up) break;
            if (heap.size() == static_cast<std::size_t>(kk)) {
                // distance from p to the unvisited cells
                double b = INFINITY;
                if (!left) b = std::min(b, p.x - (grid.x0() + static_cast<double>(ci - r) * h));
                if (!right) b = std::min(b, grid.x0() + static_cast<double>(ci + r + 1) * h - p.x);
                if (!down) b = std::min(b, p.y - (grid.y0() + static_cast<double>(cj - r) * h));
                if (!up) b = std::min(b, grid.y0() + static_cast<double>(cj + r + 1) * h - p.y);
                if (b > 0.0 && heap.front().first < b * b * (1.0 - 1e-12)) break;
            }
        }
        lists[i] = drain(heap);
    }
    return lists;
}

NeighborLists knn_lists_brute(const std::vector<Point>& pts, int k) {
    const int kk = effective_k(pts, k);
    NeighborLists lists(pts.size());
    if (kk == 0) return lists;
    std::vector<Cand> all;
    for (std::uint32_t i = 0; i < pts.size(); ++i) {
        all.clear();
        for (std::uint32_t j = 0; j < pts.size(); ++j)
            if (j != i) all.emplace_back(dist2(pts[i], pts[j]), j);
        std::sort(all.begin(), all.end());
        all.resize(static_cast<std::size_t>(kk));
        lists[i] = drain(all);
    }
    return lists;
}

NearestNeighborGraph graph_from_lists(const std::vector<Point>& pts, const NeighborLists& lists, int k, Model model) {
    if (model.kind == ModelKind::Gilbert) {
        return finish(pts, k, model, {}, gilbert_edges(pts, model.radius, false));
    }
    if (lists.size() != pts.size()) throw std::invalid_argument("graph_from_lists: one list per point required");
    const auto kk = static_cast<std::size_t>(effective_k(pts, k));
    NeighborLists out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (lists[i].size() < kk) throw std::invalid_argument("graph_from_lists: neighbour list too short");
        out[i].assign(lists[i].begin(), lists[i].begin() + static_cast<std::ptrdiff_t>(kk));
    }
    std::vector<Edge> edges;
    switch (model.kind) {
        case ModelKind::Directed:
            for (std::uint32_t i = 0; i < out.size(); ++i)
                for (auto j : out[i]) edges.emplace_back(i, j);
            break;
        case ModelKind::Either:
            for (std::uint32_t i = 0; i < out.size(); ++i)
                for (auto j : out[i]) edges.emplace_back(std::min(i, j), std::max(i, j));
            break;
        case ModelKind::Mutual: {
            NeighborLists sorted = out;
            for (auto& s : sorted) std::sort(s.begin(), s.end());
            for (std::uint32_t i = 0; i < out.size(); ++i)
                for (auto j : out[i])
                    if (j > i && std::binary_search(sorted[j].begin(), sorted[j].end(), i)) edges.emplace_back(i, j);
            break;
        }
        case ModelKind::Gilbert: break;
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return finish(pts, k, model, std::move(out), std::move(edges));
}

NearestNeighborGraph build_graph(const PointSet& ps, int k, Model model) {
    if (model.kind == ModelKind::Gilbert) return graph_from_lists(ps.points, {}, k, model);
    return graph_from_lists(ps.points, knn_lists(ps.points, k), k, model);
}

NearestNeighborGraph brute_force_graph(const PointSet& ps, int k, Model model) {
    if (model.kind == ModelKind::Gilbert) return finish(ps.points, k, model, {}, gilbert_edges(ps.points, model.radius, true));
    return graph_from_lists(ps.points, knn_lists_brute(ps.points, k), k, model);
}

NearestNeighborGraph with_edges(const NearestNeighborGraph& g, std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return finish(g.points, g.k, g.model, g.out, std::move(edges));
}

bool NearestNeighborGraph::has_edge(std::uint32_t i, std::uint32_t j) const {
    return std::binary_search(adj[i].begin(), adj[i].end(), j);
}

double NearestNeighborGraph::kth_radius(std::uint32_t i) const {
    if (out.empty() || out[i].empty()) return 0.0;
    return geom::distance(points[i], points[out[i].back()]);
}

}  // namespace knnlab::sim
