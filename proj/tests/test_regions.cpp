#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "knnlab/grid.hpp"
#include "knnlab/regions.hpp"

using namespace knnlab;
using geom::Point;
using namespace knnlab::regions;

namespace {

Point sample_in(const Region& r, geom::Box box, std::mt19937_64& rng, int tries = 100000) {
    std::uniform_real_distribution<double> ux(box.xmin, box.xmax), uy(box.ymin, box.ymax);
    for (int i = 0; i < tries; ++i) {
        const Point p{ux(rng), uy(rng)};
        if (r.contains(p)) return p;
    }
    throw std::runtime_error("sampling failed");
}

CrossingFrame random_frame(std::mt19937_64& rng) {
    for (;;) {
        // frames from actual crossings also satisfy the far-apart bound
        const Point a1 = sample_in(region_S1(), {0.0, kFarApart, 0.5, 0.3}, rng);
        const double r1 = std::min(geom::distance(a1, loc::b1), geom::distance(a1, loc::b2));
        try {
            // S2 sits in the triangle v- u- w- once a1 is far enough from the axis
            const Point a2 = sample_in(region_S2(a1, r1), {0.25, loc::u_minus.y, 0.75, loc::w_minus.y}, rng, 2000);
            return make_frame(a1, a2);
        } catch (const std::runtime_error&) {
        }
    }
}

}  // namespace

TEST_CASE("frame points") {
    CHECK(loc::w.y == doctest::Approx(0.288675134594813));
    CHECK(loc::q.x == doctest::Approx(0.916666666666667));
    CHECK(loc::q.y == doctest::Approx(0.399652626904197));
    CHECK(loc::u_minus.y == doctest::Approx(-0.433012701892219));
    CHECK(loc::w_minus.y == doctest::Approx(-0.288675134594813));
    // q sits on both unit circles' relevant arcs: |b1 q| = ... and |b2 q| = 1/2
    CHECK(geom::distance(loc::q, loc::b2) == doctest::Approx(1.0 / std::sqrt(6.0)));
    CHECK(s1_polygon().vertices.size() == 4);
    CHECK(s2_triangle().vertices.size() == 3);
    CHECK_NOTHROW(geom::validate(s1_polygon()));
    CHECK_NOTHROW(geom::validate(s2_triangle()));
}

TEST_CASE("S1 and S2 membership") {
    const Region s1 = region_S1();
    CHECK(s1.contains({0.5, 0.20}));
    CHECK_FALSE(s1.contains({0.3, 0.1}));  // inside D_b1(1/2)
    CHECK_FALSE(s1.contains({0.6, 0.1}));
    CHECK(region_S1(true).contains({0.5, 0.20}));
    CHECK_FALSE(region_S1(true).contains({0.6, 0.1}));

    // S1 inside its hull, S2 inside its hull
    std::mt19937_64 rng(7);
    const Region hull1(s1_polygon());
    const Region hull2(s2_triangle());
    for (int i = 0; i < 500; ++i) {
        const CrossingFrame f = random_frame(rng);
        CHECK(hull1.contains(f.a1));
        CHECK(hull2.contains(f.a2));
    }
}

TEST_CASE("normalize crossing pair") {
    SUBCASE("identity") {
        const auto n = normalize_crossing_pair({0.4, 0.2}, {0.5, -0.4}, {0, 0}, {1, 0});
        CHECK(n.frame.a1.x == doctest::Approx(0.4));
        CHECK(n.frame.a1.y == doctest::Approx(0.2));
        CHECK(n.frame.a2.y == doctest::Approx(-0.4));
        CHECK(n.role_of_input == std::array<int, 4>{0, 1, 2, 3});
        CHECK_FALSE(n.reflected);
        CHECK(n.scale == doctest::Approx(1.0));
    }
    SUBCASE("scaled rotated and relabeled") {
        // same configuration, scaled by 3, rotated 90 degrees, pairs swapped
        const auto t = [](Point p) { return Point{-3 * p.y + 5, 3 * p.x - 2}; };
        const auto n = normalize_crossing_pair(t({1, 0}), t({0, 0}), t({0.5, -0.4}), t({0.4, 0.2}));
        CHECK(n.scale == doctest::Approx(3.0));
        CHECK(n.frame.a1.x == doctest::Approx(0.4));
        CHECK(n.frame.a1.y == doctest::Approx(0.2));
        CHECK(n.frame.a2.x == doctest::Approx(0.5));
        CHECK(n.frame.a2.y == doctest::Approx(-0.4));
    }
    SUBCASE("disjoint segments throw") {
        CHECK_THROWS_AS(normalize_crossing_pair({0, 1}, {1, 1}, {0, 0}, {1, 0}), std::invalid_argument);
    }
    SUBCASE("random crossings satisfy the ordering") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1, 1);
        int done = 0;
        while (done < 3000) {
            const Point p[4] = {{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
            if (!geom::segments_intersect({p[0], p[1]}, {p[2], p[3]})) continue;
            ++done;
            const auto n = normalize_crossing_pair(p[0], p[1], p[2], p[3]);
            const auto& r = n.role_of_input;
            CHECK(crossing_order_holds(p[r[0]], p[r[1]], p[r[2]], p[r[3]]));
            CHECK(n.frame.a1.y >= 0.0);
            CHECK(n.frame.a2.y <= 1e-12);
            CHECK(geom::distance(n.frame.a1, n.frame.a2) <= 1.0 + 1e-9);
            CHECK(geom::distance(p[r[2]], p[r[3]]) == doctest::Approx(n.scale));
            CHECK(geom::distance(p[r[0]], p[r[1]]) / n.scale ==
                  doctest::Approx(geom::distance(n.frame.a1, n.frame.a2)));
        }
    }
}

TEST_CASE("validate frame") {
    CHECK_NOTHROW(validate_frame(make_frame({0.5, 0.2}, {0.5, -0.5})));
    CHECK_THROWS_AS(validate_frame(make_frame({1.2, 0.2}, {0.5, -0.5})), std::invalid_argument);
    CHECK_THROWS_AS(validate_frame(make_frame({0.5, -0.2}, {0.5, -0.5})), std::invalid_argument);
    CrossingFrame f = make_frame({0.5, 0.2}, {0.5, -0.5});
    f.rho1 = f.r1() * 1.01;
    CHECK_THROWS_AS(validate_frame(f), std::invalid_argument);
    CHECK_THROWS_AS(build_named_regions(f), std::invalid_argument);
}

TEST_CASE("named regions: H and L disjoint, halves respected") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ux(-1.2, 2.2), uy(-1.6, 1.2);
    long in_l = 0, in_h = 0;
    for (int fi = 0; fi < 10000; ++fi) {
        const CrossingFrame f = random_frame(rng);
        const NamedRegionSet s = build_named_regions(f);
        const Region& H = s.at("H");
        const Region& L = s.at("L");
        const Region& Lp = s.at("L+");
        const Region& Lm = s.at("L-");
        for (int k = 0; k < 60; ++k) {
            const Point p{ux(rng), uy(rng)};
            const bool h = H.contains(p);
            const bool l = L.contains(p);
            in_h += h;
            in_l += l;
            CHECK_FALSE((h && l));
            if (Lp.contains(p)) CHECK(p.y > 0.0);
            if (Lm.contains(p)) CHECK((p.y < 0.0 || s.at("T2").contains(p)));
        }
    }
    // the sampling actually lands in both
    CHECK(in_h > 1000);
    CHECK(in_l > 1000);
}

TEST_CASE("q lies in the b2 ellipse and half disk for every a1 in S1") {
    CHECK(geom::distance(loc::q, loc::b2) == doctest::Approx(1.0 / std::sqrt(6.0)));
    CHECK(geom::distance(loc::q, loc::b1) == doctest::Approx(1.0));
    const double reach = 1.0 - 1.0 / std::sqrt(6.0);
    for (const Point c : {Point{0.5, 0.0}, Point{std::sqrt(3.0) / 4.0, 0.25}, loc::w}) {
        CHECK(geom::distance(loc::q, c) < reach);
    }
    std::mt19937_64 rng(5);
    for (int i = 0; i < 2000; ++i) {
        const Point a1 = sample_in(region_S1(), {0.0, 0.0, 0.5, 0.3}, rng);
        CHECK(geom::contains(geom::Ellipse{a1, loc::b2, 1.0}, loc::q));
        CHECK(geom::contains(geom::Disk{loc::b2, 0.5}, loc::q));
    }
}

TEST_CASE("component setup") {
    const Region window = geom::polygon({{-5, -5}, {5, -5}, {5, 5}, {-5, 5}});
    const auto f = build_component_setup({0, 0}, {1, 0}, {-0.5, 0}, {1.5, 0}, window);
    CHECK(f.rho == doctest::Approx(1.0));
    CHECK(f.A.contains({-0.2, 0.9}));
    CHECK_FALSE(f.A.contains({-0.6, 0.0}));  // in C
    CHECK_FALSE(f.A.contains({0.5, 0.0}));   // in D_b
    CHECK(f.C.contains({-0.6, 0.0}));
    CHECK(f.C.contains({1.6, 0.2}));
    CHECK_FALSE(f.C.contains({0.5, 0.0}));
    const auto a = geom::grid_area_bounds(f.A, {0.01, {0, 0}}, geom::Region::plane(), 1);
    const auto b = geom::grid_area_bounds(f.B, {0.01, {0, 0}}, geom::Region::plane(), 1);
    const double k = std::numbers::pi / 3.0 + std::sqrt(3.0) / 2.0;
    CHECK(a.lower <= std::numbers::pi);
    CHECK(a.lower <= k);
    CHECK(b.lower <= k);
    CHECK(a.upper >= b.lower);
}

TEST_CASE("tile frame invariants") {
    const double s = 0.01;
    const Point a{0.005, 0.005};
    const Point b{1.0, 0.0};
    std::vector<geom::TileId> Y = {{0, 0}, {1, 0}, {0, 1}, {-1, 0}};
    const TileFrame t = build_tile_frame(a, b, Y, s);
    CHECK(t.rho == doctest::Approx(geom::distance(a, b)));
    CHECK(t.r == doctest::Approx(t.rho - std::sqrt(2.0) * s));
    CHECK(t.Y.size() == 4);
    CHECK(std::is_sorted(t.Z.begin(), t.Z.end()));
    for (const auto& z : t.Z) CHECK_FALSE(std::binary_search(t.Y.begin(), t.Y.end(), z));
    // every Z tile center within r of a Y center, and the converse for a sampled tile
    for (std::size_t i = 0; i < t.Z.size(); i += 97) {
        const Point cz = geom::tile_center(t.grid, t.Z[i]);
        double best = 1e9;
        for (const auto& y : t.Y) best = std::min(best, geom::distance(cz, geom::tile_center(t.grid, y)));
        CHECK(best <= t.r);
    }
    CHECK(t.Y_prime.size() == 4);
    CHECK_FALSE(t.B_prime.contains({0.5, 0.0}));
    CHECK(t.B_prime.contains({1.5, 0.0}));
    for (const auto& z : t.Z) {
        if (z.i % 13 == 0) CHECK_FALSE(t.B_prime.contains(geom::tile_center(t.grid, z)));
    }
    CHECK_THROWS_AS(build_tile_frame({0.5, 0.5}, b, Y, s), std::invalid_argument);
    CHECK_THROWS_AS(build_tile_frame(a, {0.015, 0.005}, Y, s), std::invalid_argument);
}

TEST_CASE("beta frame") {
    const double s = 0.01;
    const TileFrame t = build_tile_frame({0.0, 0.0}, {1.0, 0.0}, {{0, 0}}, s);
    const double lam = 1.0767;
    const Point beta{lam * lam / 2.0, std::sqrt(lam * lam - std::pow(lam, 4) / 4.0)};
    const BetaFrame f = build_beta_frame(t, beta, lam);
    const auto A = geom::slice_area(f.A_lambda, 20000);
    CHECK(A.value == doctest::Approx(0.3372033).epsilon(1e-5));
    const auto B = geom::grid_area_bounds(f.B_lambda, {0.002, {0, 0}}, geom::Region::plane(), 1);
    CHECK(B.lower <= 0.1632);
    const Point far{beta.x + 0.3 * std::cos(1.2), beta.y + 0.3 * std::sin(1.2)};
    CHECK(f.B_star.contains(far));
    CHECK_FALSE(f.B_star.contains(geom::tile_center(t.grid, {0, 0})));

    const BetaFrame g = build_beta_frame(t, beta, t.rho);
    CHECK(g.A_lambda.kind() == Region::Kind::Empty);
    CHECK_THROWS_AS(build_beta_frame(t, beta, t.rho * 0.9), std::invalid_argument);
    CHECK_THROWS_AS(build_beta_frame(t, {1.5, 0.0}, lam), std::invalid_argument);
}
