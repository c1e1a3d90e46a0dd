#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "knnlab/region.hpp"

namespace knnlab::regions {

using geom::Point;
using geom::Region;

// fixed locations of the normalized crossing frame
namespace loc {
inline const Point b1{0.0, 0.0};
inline const Point b2{1.0, 0.0};
inline const Point w{0.5, 0.5 / std::sqrt(3.0)};
inline const Point z{0.5, -std::sqrt(3.0) / 2.0};
inline const Point z_plus{0.5, std::sqrt(3.0) / 2.0};
inline const Point q{11.0 / 12.0, std::sqrt(23.0) / 12.0};
inline const Point w_minus{0.5, -0.5 / std::sqrt(3.0)};
inline const Point u_minus{0.75, -std::sqrt(3.0) / 4.0};
inline const Point v_minus{0.25, -std::sqrt(3.0) / 4.0};
// corners of the polygon containing L3 as used in its emptiness proof
inline const Point u_plus{1.0 / 6.0, 0.5 / std::sqrt(3.0)};
inline const Point v_plus{5.0 / 6.0, 0.5 / std::sqrt(3.0)};
// the glossary's alternative values
inline const Point u_plus_alt{0.25, std::sqrt(3.0) / 4.0};
inline const Point v_plus_alt{0.75, std::sqrt(3.0) / 4.0};
// lowest admissible a1: d(a1, b1b2) >= 1/(4 sqrt 6)
inline const Point a1_floor{0.5, 0.25 / std::sqrt(6.0)};
}  // namespace loc

inline const double kFarApart = 0.25 / std::sqrt(6.0);

struct CrossingFrame {
    Point a1;
    Point a2;
    double rho1 = 0.0;
    double rho2 = 0.0;

    double r1() const;
    double r2() const;
};

// rho_i = r_i
CrossingFrame make_frame(Point a1, Point a2);
// throws std::invalid_argument if the normalization invariants fail
void validate_frame(const CrossingFrame& f);

// the three ordering conditions of a crossing pair (geometry only)
bool crossing_order_holds(Point a1, Point a2, Point b1, Point b2);

struct NormalizedCrossing {
    CrossingFrame frame;
    // role -> input position; roles are a1, a2, b1, b2 and inputs are (a1, a2, b1, b2) as passed
    std::array<int, 4> role_of_input{};
    bool reflected = false;
    double scale = 1.0;  // length of b1b2 in input units
};

// similarity b1 -> (0,0), b2 -> (1,0), reflected so a1.y >= 0. Labels are permuted so that the
// ordering conditions hold. Throws std::invalid_argument if the segments do not intersect.
NormalizedCrossing normalize_crossing_pair(Point a1, Point a2, Point b1, Point b2);

struct RegionOptions {
    bool appendix_s1 = false;  // T minus both half-radius disks
    bool appendix_l3 = false;  // intersection of the half-radius disks
    bool appendix_h3 = false;  // whole A2 rather than its lower half
};

struct NamedRegionSet {
    std::map<std::string, Region> regions;
    std::map<std::string, Point> points;

    const Region& at(const std::string& name) const;
};

// strict halves: above / below the line through b1 and b2
Region upper(const Region& r);
Region lower(const Region& r);

Region triangle_T();
Region triangle_T2();
Region region_S1(bool appendix = false);
Region region_S2(Point a1, double r1);
// closed wedges of T2 where the base angle at b1 (resp. b2) is at most pi/6
Region wedge_b1();
Region wedge_b2();

NamedRegionSet build_named_regions(const CrossingFrame& f, const RegionOptions& opt = {});

geom::ConvexPolygon s1_polygon();  // hull T_a1 of S1 and its mirror
geom::ConvexPolygon s2_triangle();  // hull T_a2 of S2

struct ComponentSetupFrame {
    Point a;
    Point b;
    Point xl;
    Point xr;
    double rho = 0.0;
    Region window;
    Region C;
    Region A;
    Region B;
};

ComponentSetupFrame build_component_setup(Point a, Point b, Point xl, Point xr, const Region& window);

struct TileFrame {
    Point a;
    Point b;
    double rho = 0.0;
    double s = 0.0;
    double r = 0.0;  // rho - sqrt2 s
    geom::GridSpec grid;
    std::vector<geom::TileId> Y;
    std::vector<geom::TileId> Z;
    std::vector<geom::TileId> Y_prime;
    Region Y_region;
    Region Z_region;
    Region Y_prime_region;
    Region B_prime;
};

TileFrame build_tile_frame(Point a, Point b, std::vector<geom::TileId> Y, double s, Point origin = {0, 0});

struct BetaFrame {
    TileFrame base;
    Point beta;
    double lambda = 0.0;
    Region A_lambda;
    Region B_lambda;
    Region B_star;
};

BetaFrame build_beta_frame(const TileFrame& t, Point beta, double lambda);

}  // namespace knnlab::regions
