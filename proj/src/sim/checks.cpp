#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "knnlab/disks.hpp"
#include "knnlab/sim.hpp"
#include "point_grid.hpp"

namespace knnlab::sim {

using detail::dist2;
using detail::PointGrid;

namespace {

constexpr double kPi = std::numbers::pi;

double typical_cell(const NearestNeighborGraph& g) {
    if (g.points.empty()) return 1.0;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const Point& p : g.points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double span = std::max(xmax - xmin, ymax - ymin);
    return span > 0.0 ? span / std::sqrt(static_cast<double>(g.points.size())) * 2.0 : 1.0;
}

std::vector<Edge> undirected(const NearestNeighborGraph& g) {
    std::vector<Edge> e;
    for (std::uint32_t i = 0; i < g.adj.size(); ++i)
        for (auto j : g.adj[i])
            if (i < j) e.emplace_back(i, j);
    return e;
}

// distance between angles, in [0, pi]
double ang_dist(double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    return d > kPi ? 2.0 * kPi - d : d;
}

std::string idx(std::uint32_t a, std::uint32_t b) {
    std::ostringstream os;
    os << a << ',' << b;
    return os.str();
}

}  // namespace

std::vector<HalfDiskViolation> check_half_disk_lemma(const NearestNeighborGraph& g) {
    std::vector<HalfDiskViolation> bad;
    const PointGrid grid(g.points, typical_cell(g));
    for (const auto& [u, v] : undirected(g)) {
        for (int side = 0; side < 2; ++side) {
            const std::uint32_t x = side ? v : u;
            const std::uint32_t y = side ? u : v;
            const Point px = g.points[x];
            const double l2 = dist2(px, g.points[y]);
            const double h = std::sqrt(l2) / 2.0;
            grid.for_box(px.x - h, px.y - h, px.x + h, px.y + h, [&](std::uint32_t z) {
                if (z == x || 4.0 * dist2(px, g.points[z]) >= l2) return;
                if (!g.has_edge(x, z)) bad.push_back({x, y, z});
            });
        }
    }
    std::sort(bad.begin(), bad.end(), [](const auto& a, const auto& b) {
        return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
    });
    bad.erase(std::unique(bad.begin(), bad.end(), [](const auto& a, const auto& b) {
                  return a.x == b.x && a.y == b.y && a.z == b.z;
              }),
              bad.end());
    return bad;
}

IUOutcome check_intersect_union_lemma(const NearestNeighborGraph& g, std::uint32_t w, std::uint32_t x,
                                      std::uint32_t y, std::uint32_t z) {
    const std::array<std::uint32_t, 4> ids{w, x, y, z};
    for (auto i : ids)
        if (i >= g.points.size()) throw std::out_of_range("intersect-union: index out of range");
    if (w == y || w == z || x == y || x == z) return IUOutcome::Holds;
    if (g.out.empty()) throw std::invalid_argument("intersect-union: needs out-neighbour lists");
    auto disk = [&](std::uint32_t i) { return geom::Disk{g.points[i], g.kth_radius(i)}; };
    const auto Dw = disk(w), Dx = disk(x), Dy = disk(y), Dz = disk(z);
    const bool cond_union = geom::disk_covered_by_union(Dw, Dy, Dz) && geom::disk_covered_by_union(Dx, Dy, Dz);
    const bool cond_inter = geom::lens_inside_disk(Dw, Dx, Dy) && geom::lens_inside_disk(Dw, Dx, Dz);
    if (!cond_union || !cond_inter) return IUOutcome::Skipped;
    if (g.has_edge(w, y) || g.has_edge(w, z) || g.has_edge(x, y) || g.has_edge(x, z)) return IUOutcome::Holds;
    return IUOutcome::Violated;
}

IUSummary sample_intersect_union(const NearestNeighborGraph& g, std::size_t samples, std::uint64_t seed) {
    IUSummary s;
    std::vector<std::uint32_t> eligible;
    for (std::uint32_t i = 0; i < g.out.size(); ++i)
        if (g.out[i].size() >= 3) eligible.push_back(i);
    if (eligible.empty()) return s;
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < samples; ++t) {
        const auto w = eligible[rng() % eligible.size()];
        const auto& nw = g.out[w];
        const auto x = nw[rng() % nw.size()];
        const auto y = nw[rng() % nw.size()];
        const auto& nz = (rng() & 1) && !g.out[x].empty() ? g.out[x] : nw;
        const auto z = nz[rng() % nz.size()];
        if (x == y || x == z || y == z || w == z) continue;
        const std::array<std::uint32_t, 3> pick{x, y, z};
        ++s.sampled;
        const auto r = check_intersect_union_lemma(g, w, pick[0], pick[1], pick[2]);
        if (r == IUOutcome::Skipped) continue;
        ++s.tested;
        if (r == IUOutcome::Violated) ++s.violations;
    }
    return s;
}

FarApartReport check_far_apart(const NearestNeighborGraph& g, const ComponentDecomposition& comps) {
    FarApartReport rep;
    if (comps.count() <= 1) return rep;
    const double floor_ratio = 0.25 / std::sqrt(6.0);
    const PointGrid grid(g.points, typical_cell(g));
    for (const auto& [b1, b2] : undirected(g)) {
        const Point p1 = g.points[b1], p2 = g.points[b2];
        const double len = geom::distance(p1, p2);
        const double m = len;
        const auto cb = comps.id[b1];
        grid.for_box(std::min(p1.x, p2.x) - m, std::min(p1.y, p2.y) - m, std::max(p1.x, p2.x) + m,
                     std::max(p1.y, p2.y) + m, [&](std::uint32_t a) {
                         if (comps.id[a] == cb) return;
                         const double ratio = geom::point_segment_distance(g.points[a], {p1, p2}) / len;
                         if (ratio >= 1.0) return;
                         ++rep.pairs_examined;
                         rep.min_ratio = std::min(rep.min_ratio, ratio);
                         if (ratio < floor_ratio) ++rep.violations;
                     });
    }
    return rep;
}

bool GoodnessReport::good() const { return std::none_of(bad.begin(), bad.end(), [](bool b) { return b; }); }

namespace {

// neighbours within rho only shrink the widest angular gap, so a near query usually settles it
bool empty_half_disc(const std::vector<Point>& pts, const PointGrid& grid, std::uint32_t i, double rho, double side) {
    const Point p = pts[i];
    // walls: inward normal angle and distance
    struct Wall {
        double normal;
        double dist;
    };
    const std::array<Wall, 4> walls{{{0.0, p.x}, {kPi, side - p.x}, {kPi / 2, p.y}, {-kPi / 2, side - p.y}}};
    std::vector<std::pair<double, double>> wall_arcs;  // (centre, half-width), closed
    for (const auto& w : walls) {
        if (w.dist < 0.0) return false;
        if (w.dist < rho) wall_arcs.emplace_back(w.normal, std::asin(w.dist / rho));
    }

    std::vector<double> phi;
    double lo = 0.0, hi = 2.0 * kPi;
    auto widest_gap = [&](double reach) {
        phi.clear();
        const double r2 = reach * reach;
        bool coincident = false;
        grid.for_box(p.x - reach, p.y - reach, p.x + reach, p.y + reach, [&](std::uint32_t j) {
            if (j == i) return;
            const double d2 = dist2(p, pts[j]);
            if (d2 > r2) return;
            if (d2 == 0.0) coincident = true;
            phi.push_back(std::atan2(pts[j].y - p.y, pts[j].x - p.x));
        });
        if (coincident) return 0.0;
        if (phi.empty()) return 2.0 * kPi + 1.0;
        std::sort(phi.begin(), phi.end());
        double best = -1.0;
        for (std::size_t t = 0; t < phi.size(); ++t) {
            const double next = t + 1 < phi.size() ? phi[t + 1] : phi[0] + 2.0 * kPi;
            if (next - phi[t] > best) {
                best = next - phi[t];
                lo = phi[t] + kPi / 2;
                hi = phi[t] + best - kPi / 2;
            }
        }
        return best;
    };
    const double near = std::min(rho, 2.0 * grid.cell());
    if (near < rho && widest_gap(near) <= kPi) return false;
    const double gap = widest_gap(rho);
    if (gap <= kPi) return false;
    const bool full = phi.empty();

    // directions u allowed by the points form the open arc (lo, hi)
    auto allowed = [&](double th) {
        if (!full && !(ang_dist(th, 0.5 * (lo + hi)) < 0.5 * (hi - lo))) return false;
        for (const auto& [c, h] : wall_arcs)
            if (ang_dist(th, c) > h) return false;
        return true;
    };
    std::vector<double> cands;
    if (full) {
        cands.push_back(0.0);
    } else {
        const double eps = 1e-9 * (hi - lo);
        cands.insert(cands.end(), {0.5 * (lo + hi), lo + eps, hi - eps});
    }
    for (const auto& [c, h] : wall_arcs) cands.insert(cands.end(), {c, c - h, c + h});
    return std::any_of(cands.begin(), cands.end(), allowed);
}

}  // namespace

bool has_empty_half_disc(const NearestNeighborGraph& g, std::uint32_t i, double rho, double side) {
    const PointGrid grid(g.points, typical_cell(g));
    return empty_half_disc(g.points, grid, i, rho, side);
}

GoodnessReport check_goodness(const NearestNeighborGraph& g, const ComponentDecomposition& comps,
                              const CrossingReport& crossings, const bounds::ModelConstants& consts) {
    GoodnessReport rep;
    const double sl = std::sqrt(std::log(consts.n));
    const double side = std::sqrt(consts.n);
    const double d = consts.d;
    const double big = d * sl;

    // 1: joined points in tiles whose centres are more than 2 d sqrt(log n) apart
    {
        const geom::GridSpec tiles{sl / (20000.0 * d), {0.0, 0.0}};
        for (const auto& [u, v] : undirected(g)) {
            const Point cu = geom::tile_center(tiles, geom::tile_of(tiles, g.points[u]));
            const Point cv = geom::tile_center(tiles, geom::tile_of(tiles, g.points[v]));
            if (geom::distance(cu, cv) > 2.0 * big) {
                rep.bad[0] = true;
                rep.witness[0] = idx(u, v);
                break;
            }
        }
    }
    // 2: unjoined points within sqrt(log n) / d
    {
        const double lim = sl / d;
        const PointGrid grid(g.points, lim);
        for (std::uint32_t i = 0; i < g.points.size() && !rep.bad[1]; ++i) {
            const Point p = g.points[i];
            grid.for_box(p.x - lim, p.y - lim, p.x + lim, p.y + lim, [&](std::uint32_t j) {
                if (rep.bad[1] || j <= i) return;
                if (dist2(p, g.points[j]) <= lim * lim && !g.has_edge(i, j)) {
                    rep.bad[1] = true;
                    rep.witness[1] = idx(i, j);
                }
            });
        }
    }
    // 3: empty half-disc of radius d sqrt(log n) inside the square
    const PointGrid grid(g.points, typical_cell(g));
    for (std::uint32_t i = 0; i < g.points.size(); ++i) {
        if (empty_half_disc(g.points, grid, i, big, side)) {
            rep.bad[2] = true;
            rep.witness[2] = std::to_string(i);
            break;
        }
    }
    // 4: two large components
    {
        std::vector<std::uint32_t> large;
        for (std::uint32_t c = 0; c < comps.count(); ++c)
            if (comps.diameter[c] >= big) large.push_back(c);
        if (large.size() >= 2) {
            rep.bad[3] = true;
            rep.witness[3] = idx(large[0], large[1]);
        }
    }
    // 5: small component near a corner
    if (comps.count() > 1) {
        for (std::uint32_t i = 0; i < g.points.size(); ++i) {
            const auto c = comps.id[i];
            if (comps.diameter[c] > big) continue;
            const Point p = g.points[i];
            const double dx = std::min(p.x, side - p.x), dy = std::min(p.y, side - p.y);
            if (std::hypot(dx, dy) <= 2.0 * big) {
                rep.bad[4] = true;
                rep.witness[4] = idx(c, i);
                break;
            }
        }
    }
    // 6: crossing edges from different components
    if (!crossings.pairs.empty()) {
        rep.bad[5] = true;
        const auto& cp = crossings.pairs.front();
        rep.witness[5] = idx(cp.a1, cp.a2) + ',' + idx(cp.b1, cp.b2);
    }
    return rep;
}

std::vector<ComponentSetupWitness> find_component_setup(const NearestNeighborGraph& g,
                                                        const ComponentDecomposition& comps,
                                                        double small_diameter, double side) {
    std::vector<ComponentSetupWitness> out;
    if (comps.count() <= 1) return out;
    const auto window = geom::polygon({{0.0, 0.0}, {side, 0.0}, {side, side}, {0.0, side}});
    std::vector<std::vector<std::uint32_t>> members(comps.count());
    for (std::uint32_t i = 0; i < g.points.size(); ++i) members[comps.id[i]].push_back(i);

    for (std::uint32_t c = 0; c < comps.count(); ++c) {
        if (comps.diameter[c] > small_diameter) continue;
        ComponentSetupWitness w;
        w.component = c;
        double best = INFINITY;
        for (auto a : members[c])
            for (std::uint32_t b = 0; b < g.points.size(); ++b) {
                if (comps.id[b] == c) continue;
                const double d2 = dist2(g.points[a], g.points[b]);
                if (d2 < best) {
                    best = d2;
                    w.a = a;
                    w.b = b;
                }
            }
        auto by_x = [&](std::uint32_t u, std::uint32_t v) {
            return g.points[u].x < g.points[v].x || (g.points[u].x == g.points[v].x && u < v);
        };
        w.xl = *std::min_element(members[c].begin(), members[c].end(), by_x);
        w.xr = *std::max_element(members[c].begin(), members[c].end(), by_x);
        const auto f = regions::build_component_setup(g.points[w.a], g.points[w.b], g.points[w.xl], g.points[w.xr], window);
        for (std::uint32_t i = 0; i < g.points.size(); ++i) {
            if (i == w.a || i == w.b) continue;
            const Point p = g.points[i];
            if (f.A.contains(p)) ++w.count_A;
            if (f.B.contains(p)) ++w.count_B;
            if (comps.id[i] != c && f.C.contains(p)) ++w.count_C;
        }
        out.push_back(w);
    }
    return out;
}

}  // namespace knnlab::sim
