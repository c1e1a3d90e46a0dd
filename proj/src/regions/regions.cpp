#include "knnlab/regions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace knnlab::regions {

using geom::ConvexPolygon;
using geom::Disk;
using geom::distance;
using geom::Ellipse;
using geom::HalfDisk;
using geom::HalfPlane;
using geom::HalfSide;

double CrossingFrame::r1() const { return std::min(distance(a1, loc::b1), distance(a1, loc::b2)); }
double CrossingFrame::r2() const { return std::min(distance(a2, loc::b1), distance(a2, loc::b2)); }

CrossingFrame make_frame(Point a1, Point a2) {
    CrossingFrame f{a1, a2, 0.0, 0.0};
    f.rho1 = f.r1();
    f.rho2 = f.r2();
    return f;
}

void validate_frame(const CrossingFrame& f) {
    constexpr double tol = 1e-12;
    if (!(f.a1.x > 0.0 && f.a1.x < 1.0)) throw std::invalid_argument("frame: a1.x must lie in (0,1)");
    if (!(f.a1.y >= 0.0)) throw std::invalid_argument("frame: a1 must lie on or above the axis");
    if (!(f.a2.y <= 0.0)) throw std::invalid_argument("frame: a2 must lie on or below the axis");
    if (!(f.rho1 > 0.0 && f.rho1 <= f.r1() + tol)) throw std::invalid_argument("frame: need 0 < rho1 <= r1");
    if (!(f.rho2 > 0.0 && f.rho2 <= f.r2() + tol)) throw std::invalid_argument("frame: need 0 < rho2 <= r2");
}

bool crossing_order_holds(Point a1, Point a2, Point b1, Point b2) {
    const geom::Segment b{b1, b2};
    return distance(a1, a2) <= distance(b1, b2) && distance(a1, b1) <= distance(a1, b2) &&
           geom::point_segment_distance(a1, b) <= geom::point_segment_distance(a2, b);
}

NormalizedCrossing normalize_crossing_pair(Point a1, Point a2, Point b1, Point b2) {
    if (!geom::segments_intersect({a1, a2}, {b1, b2})) {
        throw std::invalid_argument("normalize_crossing_pair: segments do not intersect");
    }
    const std::array<Point, 4> in = {a1, a2, b1, b2};
    std::array<int, 4> chosen{};
    bool found = false;
    for (int mask = 0; mask < 8 && !found; ++mask) {
        const bool swap_pairs = mask & 4;
        const bool swap_a = mask & 2;
        const bool swap_b = mask & 1;
        std::array<int, 4> role = {0, 1, 2, 3};
        if (swap_pairs) role = {2, 3, 0, 1};
        if (swap_a) std::swap(role[0], role[1]);
        if (swap_b) std::swap(role[2], role[3]);
        if (crossing_order_holds(in[role[0]], in[role[1]], in[role[2]], in[role[3]])) {
            chosen = role;
            found = true;
        }
    }
    // some labeling always works for crossing segments; keep the identity if rounding disagrees
    if (!found) chosen = {0, 1, 2, 3};

    const Point pb1 = in[chosen[2]];
    const Point pb2 = in[chosen[3]];
    const Point axis = pb2 - pb1;
    const double len = geom::norm(axis);
    if (len == 0.0) throw std::invalid_argument("normalize_crossing_pair: degenerate segment");
    const Point ux = (1.0 / len) * axis;
    const auto map = [&](Point p) {
        const Point v = p - pb1;
        return Point{geom::dot(v, ux) / len, geom::cross(ux, v) / len};
    };
    Point na1 = map(in[chosen[0]]);
    Point na2 = map(in[chosen[1]]);
    bool reflected = false;
    if (na1.y < 0.0 || (na1.y == 0.0 && na2.y > 0.0)) {
        na1.y = -na1.y;
        na2.y = -na2.y;
        reflected = true;
    }
    NormalizedCrossing out;
    out.frame = make_frame(na1, na2);
    out.role_of_input = chosen;
    out.reflected = reflected;
    out.scale = len;
    return out;
}

const Region& NamedRegionSet::at(const std::string& name) const {
    const auto it = regions.find(name);
    if (it == regions.end()) throw std::out_of_range("no region named " + name);
    return it->second;
}

Region upper(const Region& r) { return r - geom::half_plane({0, 0}, {0, 1}); }
Region lower(const Region& r) { return r - geom::half_plane({0, 0}, {0, -1}); }

Region triangle_T() { return geom::polygon({loc::b1, loc::b2, loc::w}); }
Region triangle_T2() { return geom::polygon({loc::b1, loc::z, loc::b2}); }

Region region_S1(bool appendix) {
    const Region half_b1 = geom::disk(loc::b1, 0.5);
    if (appendix) return triangle_T() - (half_b1 | geom::disk(loc::b2, 0.5));
    return (triangle_T() & geom::half_plane({0.5, 0}, {1, 0})) - half_b1;
}

Region wedge_b1() {
    const double c = std::sqrt(3.0) / 2.0;
    return Region(geom::AngularSector{loc::b1, {c, -0.5}, {1, 0}});
}

Region wedge_b2() {
    const double c = std::sqrt(3.0) / 2.0;
    return Region(geom::AngularSector{loc::b2, {-1, 0}, {-c, -0.5}});
}

Region region_S2(Point a1, double r1) {
    return (triangle_T2() & geom::disk(a1, r1)) - (wedge_b1() | wedge_b2());
}

NamedRegionSet build_named_regions(const CrossingFrame& f, const RegionOptions& opt) {
    validate_frame(f);
    NamedRegionSet s;
    auto& R = s.regions;
    s.points = {{"b1", loc::b1},           {"b2", loc::b2},           {"w", loc::w},
                {"z", loc::z},             {"q", loc::q},             {"w-", loc::w_minus},
                {"u-", loc::u_minus},      {"v-", loc::v_minus},      {"u+", loc::u_plus},
                {"v+", loc::v_plus},       {"u+alt", loc::u_plus_alt}, {"v+alt", loc::v_plus_alt},
                {"a1", f.a1},              {"a2", f.a2}};

    const Region B1 = geom::disk(loc::b1, 1.0);
    const Region B2 = geom::disk(loc::b2, 1.0);
    const Region half1 = geom::disk(loc::b1, 0.5);
    const Region half2 = geom::disk(loc::b2, 0.5);
    const Region A1 = geom::disk(f.a1, f.r1());
    const Region A2 = geom::disk(f.a2, f.r2());
    const Region Dk1 = geom::disk(f.a1, f.rho1);
    const Region Dk2 = geom::disk(f.a2, f.rho2);
    const Region E1(Ellipse{f.a1, loc::b1, 1.0});
    const Region E2(Ellipse{f.a1, loc::b2, 1.0});
    const Region F1(Ellipse{f.a2, loc::b1, 1.0});
    const Region F2(Ellipse{f.a2, loc::b2, 1.0});
    const Region T2 = triangle_T2();
    const Region wedges = wedge_b1() | wedge_b2();
    const Region M = Dk1 & Dk2;

    R["T"] = triangle_T();
    R["T2"] = T2;
    R["S1"] = region_S1(opt.appendix_s1);
    R["S2"] = (T2 & A1) - wedges;
    R["A1"] = A1;
    R["A2"] = A2;
    R["B1"] = B1;
    R["B2"] = B2;
    R["Dk1"] = Dk1;
    R["Dk2"] = Dk2;
    R["E1"] = E1;
    R["E2"] = E2;
    R["F1"] = F1;
    R["F2"] = F2;
    R["M"] = M;
    R["M+"] = upper(M);
    R["M-"] = lower(M);
    R["R1"] = Dk1 & (B1 - B2);
    R["R2"] = Dk1 & (B2 - B1);
    R["L1"] = (upper(Dk1) & E1 & half1) - M;
    R["L2"] = (upper(Dk1) & E2 & half2) - M;
    R["L3"] = opt.appendix_l3 ? upper(M) & half1 & half2 : upper(M) & (half1 | half2);
    R["L4"] = T2 & Dk2 & wedges;
    R["L5"] = (lower(Dk2) & F1 & half1) - T2;
    R["L6"] = (lower(Dk2) & F2 & half2) - T2;
    R["H1"] = R["R1"] - R["L1"];
    R["H2"] = R["R2"] - R["L2"];
    R["H3"] = (opt.appendix_h3 ? A2 : lower(A2)) - (B1 | B2);
    R["H4"] = upper(M) - R["L3"];
    R["H5"] = R["S2"];
    R["L+"] = Region::union_of({R["L1"], R["L2"], R["L3"]});
    R["L-"] = Region::union_of({R["L4"], R["L5"], R["L6"]});
    R["H+"] = Region::union_of({R["H1"], R["H2"], R["H5"]});
    R["H-"] = R["H3"] | R["H4"];
    R["L"] = R["L+"] | R["L-"];
    R["H"] = R["H+"] | R["H-"];
    return s;
}

ConvexPolygon s1_polygon() {
    const double c = std::sqrt(3.0) / 4.0;
    return ConvexPolygon{{{0.5, 0.0}, {1.0 - c, 0.25}, loc::w, {c, 0.25}}};
}

ConvexPolygon s2_triangle() { return ConvexPolygon{{loc::v_minus, loc::u_minus, loc::w_minus}}; }

ComponentSetupFrame build_component_setup(Point a, Point b, Point xl, Point xr, const Region& window) {
    ComponentSetupFrame f;
    f.a = a;
    f.b = b;
    f.xl = xl;
    f.xr = xr;
    f.rho = distance(a, b);
    if (!(f.rho > 0.0)) throw std::invalid_argument("component setup: a and b must differ");
    f.window = window;
    const Region Da = geom::disk(a, f.rho);
    const Region Db = geom::disk(b, f.rho);
    f.C = (Region(HalfDisk{xl, f.rho, HalfSide::Left}) | Region(HalfDisk{xr, f.rho, HalfSide::Right})) & window;
    f.A = (Da - (Db | f.C)) & window;
    f.B = (Db - (Da | f.C)) & window;
    return f;
}

TileFrame build_tile_frame(Point a, Point b, std::vector<geom::TileId> Y, double s, Point origin) {
    if (!(s > 0.0)) throw std::invalid_argument("tile frame: step must be positive");
    TileFrame t;
    t.a = a;
    t.b = b;
    t.s = s;
    t.rho = distance(a, b);
    t.r = t.rho - std::sqrt(2.0) * s;
    t.grid = {s, origin};
    const geom::TileSet yset = geom::make_tile_set(t.grid, std::move(Y));
    t.Y = *yset.tiles;
    if (t.Y.empty() || !geom::contains(yset, a)) throw std::invalid_argument("tile frame: a must lie in a tile of Y");
    if (geom::contains(yset, b)) throw std::invalid_argument("tile frame: b must not lie in Y");
    if (!(t.r > 0.0)) throw std::invalid_argument("tile frame: rho must exceed sqrt2 s");

    std::vector<geom::TileId> z;
    const auto reach = static_cast<std::int64_t>(std::ceil(t.r / s)) + 1;
    for (const auto& y : t.Y) {
        const Point cy = geom::tile_center(t.grid, y);
        for (std::int64_t dj = -reach; dj <= reach; ++dj) {
            for (std::int64_t di = -reach; di <= reach; ++di) {
                const geom::TileId id{y.i + di, y.j + dj};
                if (distance(geom::tile_center(t.grid, id), cy) <= t.r) z.push_back(id);
            }
        }
    }
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end()), z.end());
    std::vector<geom::TileId> zonly;
    std::set_difference(z.begin(), z.end(), t.Y.begin(), t.Y.end(), std::back_inserter(zonly));
    t.Z = std::move(zonly);

    for (const auto& y : t.Y) {
        if (distance(geom::tile_center(t.grid, y), a) <= t.rho + std::sqrt(2.0) * s) t.Y_prime.push_back(y);
    }
    t.Y_region = Region(yset);
    t.Z_region = t.Z.empty() ? Region::empty() : Region(geom::make_tile_set(t.grid, t.Z));
    t.Y_prime_region = t.Y_prime.empty() ? Region::empty() : Region(geom::make_tile_set(t.grid, t.Y_prime));
    t.B_prime = geom::disk(b, t.rho) - Region::union_of({geom::disk(a, t.rho), t.Y_region, t.Z_region});
    return t;
}

BetaFrame build_beta_frame(const TileFrame& t, Point beta, double lambda) {
    if (lambda < t.rho) throw std::invalid_argument("beta frame: lambda must be at least rho");
    // the boundary circle of D_b(rho) is allowed: the extremal configuration puts beta there
    const bool inside_b_prime = t.B_prime.contains(beta) && distance(beta, t.b) < t.rho * (1.0 - 1e-12);
    if (t.Y_region.contains(beta) || inside_b_prime) {
        throw std::invalid_argument("beta frame: beta must lie outside Y and B'");
    }
    BetaFrame f;
    f.base = t;
    f.beta = beta;
    f.lambda = lambda;
    const Region Da_rho = geom::disk(t.a, t.rho);
    const Region Db_rho = geom::disk(t.b, t.rho);
    f.A_lambda = lambda > t.rho ? geom::disk(t.a, lambda) - (Da_rho | Db_rho) : Region::empty();
    f.B_lambda = t.B_prime & geom::disk(t.a, lambda);
    const double ab = distance(t.a, beta);
    const Region Dbeta = geom::disk(beta, ab);
    f.B_star = ((Dbeta & t.B_prime) | (Dbeta - geom::disk(t.a, ab))) - (t.Y_region | t.Z_region);
    return f;
}

}  // namespace knnlab::regions
