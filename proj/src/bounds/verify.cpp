#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "knnlab/bounds.hpp"
#include "knnlab/grid.hpp"
#include "knnlab/parallel.hpp"
#include "knnlab/regions.hpp"

namespace knnlab::bounds {

namespace loc = regions::loc;
using geom::disk;
using geom::Ellipse;
using geom::Region;

namespace {

double half_diag(double s) { return s * std::sqrt(2.0) / 2.0; }

bool is_a1_kind(AreaKind k) { return k == AreaKind::LPlus || k == AreaKind::HPlus; }

// S2 when a1 sits at its lowest admissible location with maximal radius
Region s2_floor() {
    const double r1 = geom::distance(loc::a1_floor, loc::b1);
    return regions::region_S2(loc::a1_floor, r1);
}

Region kite_s2() { return geom::polygon({loc::w_minus, loc::v_minus, loc::z, loc::u_minus}); }

// first point, walking up the unit circle about `centre` from `start`, where the focal sum
// to (focus, x) reaches `sum`; the half-radius crossing if that comes first
Point boundary_walk(Point centre, Point focus, Point x, double sum, bool from_left) {
    const double tc = 2.0 * std::asin(0.25);
    const auto at = [&](double t) {
        return from_left ? Point{centre.x - std::cos(t), std::sin(t)} : Point{centre.x + std::cos(t), std::sin(t)};
    };
    const auto f = [&](double t) {
        const Point p = at(t);
        return geom::distance(focus, p) + geom::distance(x, p) - sum;
    };
    constexpr int steps = 4096;
    double prev = 0.0;
    for (int i = 1; i <= steps; ++i) {
        const double t = tc * i / steps;
        if (f(t) >= 0.0) {
            double lo = prev;
            double hi = t;
            for (int it = 0; it < 80; ++it) {
                const double mid = (lo + hi) / 2.0;
                (f(mid) >= 0.0 ? hi : lo) = mid;
            }
            return at(lo);
        }
        prev = t;
    }
    return at(tc);
}

}  // namespace

const char* area_name(AreaKind k) {
    switch (k) {
        case AreaKind::LPlus: return "L_plus";
        case AreaKind::LMinus: return "L_minus";
        case AreaKind::HPlus: return "H_plus";
        case AreaKind::HMinus: return "H_minus";
    }
    return "?";
}

double area_target(AreaKind k) {
    switch (k) {
        case AreaKind::LPlus: return 0.3411;
        case AreaKind::LMinus: return 0.3564;
        case AreaKind::HPlus: return 0.1300;
        case AreaKind::HMinus: return 0.0958;
    }
    return 0.0;
}

std::vector<geom::TileId> candidate_squares(AreaKind k, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("candidate_squares: step must be positive");
    const double per_unit = 1.0 / s;
    if (std::abs(per_unit - std::round(per_unit)) > 1e-6 * per_unit) {
        throw std::invalid_argument("candidate_squares: 1/s must be an integer so b1 and b2 are tile corners");
    }
    const geom::GridSpec g{s, {0.0, 0.0}};
    const Region hull(is_a1_kind(k) ? geom::Shape(regions::s1_polygon()) : geom::Shape(regions::s2_triangle()));
    const Region near = geom::inflate(is_a1_kind(k) ? regions::region_S1() : s2_floor(), half_diag(s));
    const auto box = *hull.bounds();
    const geom::TileRange tr = geom::tiles_covering(g, {box.xmin - s, box.ymin - s, box.xmax + s, box.ymax + s});
    std::vector<geom::TileId> out;
    for (std::int64_t j = tr.j0; j <= tr.j1; ++j) {
        for (std::int64_t i = tr.i0; i <= tr.i1; ++i) {
            const Point c = geom::tile_center(g, {i, j});
            if (hull.contains(c) || near.contains(c)) out.push_back({i, j});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<Point, Point> h_points(Point x, double s) {
    const double sum = 1.0 - half_diag(s);
    // h1 on the circle about b2 walking up from b1; h2 mirrored
    return {boundary_walk(loc::b2, loc::b1, x, sum, true), boundary_walk(loc::b1, loc::b2, x, sum, false)};
}

SquareCandidate square_radii(AreaKind k, Point x, double s) {
    const double d = half_diag(s);
    SquareCandidate sq;
    sq.center = x;
    sq.s = s;
    sq.rho_max = std::min(geom::distance(loc::b1, x), geom::distance(loc::b2, x)) + d;
    switch (k) {
        case AreaKind::LPlus:
        case AreaKind::HPlus: {
            const auto [h1, h2] = h_points(x, s);
            sq.h1 = h1;
            sq.h2 = h2;
            sq.sigma = std::max({geom::distance(x, h1), geom::distance(x, h2), geom::distance(x, loc::w_minus)}) - d;
            break;
        }
        case AreaKind::LMinus:
        case AreaKind::HMinus:
            sq.h1 = loc::a1_floor;
            sq.h2 = loc::z;
            sq.sigma = std::max(geom::distance(x, loc::a1_floor), geom::distance(x, loc::z)) - d;
            break;
    }
    return sq;
}

Region counting_region(AreaKind k, Point x, double s, HPlusReading reading) {
    const double d = half_diag(s);
    const double diag = s * std::sqrt(2.0);
    const SquareCandidate sq = square_radii(k, x, s);
    const Region above = geom::half_plane({0, 0}, {0, -1});  // y >= 0
    const Region below = geom::half_plane({0, 0}, {0, 1});   // y <= 0
    const auto lens = [&](Point b, Point focus) {
        // tile inside D_b(1/2) and inside the shrunken ellipse for every a in the square
        return disk(b, 0.5 - d) & Region(Ellipse{b, focus, 1.0 - 3.0 * d});
    };
    switch (k) {
        case AreaKind::LPlus: {
            if (sq.sigma - diag <= 0.0) return Region::empty();
            return disk(x, sq.sigma - diag) & above & (lens(loc::b1, x) | lens(loc::b2, x));
        }
        case AreaKind::LMinus: {
            if (sq.sigma - diag <= 0.0) return Region::empty();
            const Region w1 = geom::deflate(geom::polygon({loc::b1, loc::u_minus, loc::b2}), d);
            const Region w2 = geom::deflate(geom::polygon({loc::b1, loc::v_minus, loc::b2}), d);
            return disk(x, sq.sigma - diag) & below & Region::union_of({lens(loc::b1, x), lens(loc::b2, x), w1, w2});
        }
        case AreaKind::HPlus: {
            const auto side = [&](Point b, Point other) {
                const Region band = disk(b, 1.0 + d) - disk(other, 1.0 - d);
                if (reading == HPlusReading::OutsideBoth) {
                    return band - (disk(b, 0.5 - d) | Region(Ellipse{b, x, 1.0 - 3.0 * d}));
                }
                return band - lens(b, x);
            };
            const Region s2 = geom::inflate(kite_s2(), d);
            return disk(x, sq.rho_max + diag) & Region::union_of({side(loc::b1, loc::b2), side(loc::b2, loc::b1), s2});
        }
        case AreaKind::HMinus: {
            const Region outside = Region::plane() - (disk(loc::b1, 1.0 - d) | disk(loc::b2, 1.0 - d));
            const Region high = above - (disk(loc::b1, 0.5 - d) | disk(loc::b2, 0.5 - d));
            return disk(x, sq.rho_max + diag) & (outside | high);
        }
    }
    return Region::empty();
}

std::int64_t count_for_candidate(AreaKind k, Point x, double s, HPlusReading reading) {
    const Region r = counting_region(k, x, s, reading);
    if (r.kind() == Region::Kind::Empty) return 0;
    const geom::GridSpec g{s, {0.0, 0.0}};
    const geom::RowSweep sweep(r);
    if (!sweep.bounds()) throw std::logic_error("counting region unbounded");
    return sweep.count_centers(g, geom::tiles_covering(g, *sweep.bounds()));
}

AreaVerification verify_area(AreaKind k, double s, int threads, HPlusReading reading) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cands = candidate_squares(k, s);
    if (cands.empty()) throw std::invalid_argument("verify: step too coarse for any candidate square");
    const geom::GridSpec g{s, {0.0, 0.0}};
    std::vector<std::int64_t> counts(cands.size(), -1);
    parallel_for(cands.size(), threads, [&](std::size_t i) {
        const Point c = geom::tile_center(g, cands[i]);
        if (square_radii(k, c, s).feasible()) counts[i] = count_for_candidate(k, c, s, reading);
    });
    const bool lower = k == AreaKind::LPlus || k == AreaKind::LMinus;
    // first extremum in sorted tile order, so the witness does not depend on scheduling
    std::size_t best = counts.size(), skipped = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] < 0) {
            ++skipped;
            continue;
        }
        if (best == counts.size() || (lower ? counts[i] < counts[best] : counts[i] > counts[best])) best = i;
    }
    if (best == counts.size()) throw std::invalid_argument("verify: no feasible candidate square");
    AreaVerification out;
    out.tiles = counts[best];
    out.candidates = cands.size();
    out.infeasible = skipped;
    const Point w = geom::tile_center(g, cands[best]);
    out.extremal = square_radii(k, w, s);
    const double area = static_cast<double>(counts[best]) * s * s;
    std::string name = area_name(k);
    if (k == AreaKind::HPlus && reading == HPlusReading::OutsideBoth) name += "_outside_both";
    out.cert = make_certificate(name, s, area, area_target(k), lower ? ">" : "<", {w.x, w.y});
    out.cert.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

Certificate verify_L_plus(double s, int threads) { return verify_area(AreaKind::LPlus, s, threads).cert; }
Certificate verify_L_minus(double s, int threads) { return verify_area(AreaKind::LMinus, s, threads).cert; }
Certificate verify_H_plus(double s, int threads) { return verify_area(AreaKind::HPlus, s, threads).cert; }
Certificate verify_H_minus(double s, int threads) { return verify_area(AreaKind::HMinus, s, threads).cert; }

}  // namespace knnlab::bounds
