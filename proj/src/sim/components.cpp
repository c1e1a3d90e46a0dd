#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "knnlab/sim.hpp"
#include "point_grid.hpp"

namespace knnlab::sim {

namespace {

constexpr std::size_t kExactDiameterLimit = 5000;

struct Dsu {
    std::vector<std::uint32_t> parent;
    explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

bool lex_less(Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

double max_pairwise(const std::vector<Point>& pts) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, detail::dist2(pts[i], pts[j]));
    return std::sqrt(best);
}

// Andrew's monotone chain, collinear points dropped
std::vector<Point> hull(std::vector<Point> p) {
    std::sort(p.begin(), p.end(), lex_less);
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return p;
    std::vector<Point> h(2 * p.size());
    std::size_t m = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (m >= 2 && geom::orientation(h[m - 2], h[m - 1], p[i]) <= 0) --m;
        h[m++] = p[i];
    }
    for (std::size_t i = p.size() - 1, lo = m + 1; i-- > 0;) {
        while (m >= lo && geom::orientation(h[m - 2], h[m - 1], p[i]) <= 0) --m;
        h[m++] = p[i];
    }
    h.resize(m - 1);
    return h;
}

}  // namespace

double diameter(const std::vector<Point>& pts) {
    if (pts.size() < kExactDiameterLimit) return max_pairwise(pts);
    return max_pairwise(hull(pts));
}

std::uint32_t ComponentDecomposition::largest() const {
    if (size.empty()) throw std::logic_error("no components");
    return static_cast<std::uint32_t>(std::max_element(size.begin(), size.end()) - size.begin());
}

ComponentDecomposition components(const NearestNeighborGraph& g) {
    const auto n = g.points.size();
    Dsu dsu(n);
    for (const auto& [i, j] : g.edges) dsu.unite(i, j);

    // representative point of each root: lexicographically least, index as a last resort
    std::vector<std::uint32_t> rep(n, UINT32_MAX);
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto r = dsu.find(i);
        if (rep[r] == UINT32_MAX || lex_less(g.points[i], g.points[rep[r]])) rep[r] = i;
    }
    std::vector<std::uint32_t> roots;
    for (std::uint32_t i = 0; i < n; ++i)
        if (dsu.find(i) == i) roots.push_back(i);
    std::sort(roots.begin(), roots.end(), [&](std::uint32_t a, std::uint32_t b) {
        const Point pa = g.points[rep[a]], pb = g.points[rep[b]];
        if (lex_less(pa, pb)) return true;
        if (lex_less(pb, pa)) return false;
        return rep[a] < rep[b];
    });
    std::vector<std::uint32_t> id_of_root(n, 0);
    for (std::uint32_t c = 0; c < roots.size(); ++c) id_of_root[roots[c]] = c;

    ComponentDecomposition d;
    d.id.resize(n);
    d.size.assign(roots.size(), 0);
    std::vector<std::vector<Point>> members(roots.size());
    for (std::uint32_t i = 0; i < n; ++i) {
        d.id[i] = id_of_root[dsu.find(i)];
        ++d.size[d.id[i]];
        members[d.id[i]].push_back(g.points[i]);
    }
    d.diameter.resize(roots.size());
    for (std::size_t c = 0; c < roots.size(); ++c) d.diameter[c] = diameter(members[c]);
    return d;
}

}  // namespace knnlab::sim
