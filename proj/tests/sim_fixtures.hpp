#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "knnlab/sim.hpp"

namespace fixtures {

using knnlab::geom::Point;

struct CrossingConstruction {
    knnlab::sim::PointSet ps;
    int k = 7;
    std::uint32_t a1 = 0, a2 = 1, b1 = 2, b2 = 3;
};

// two crossing mutual edges a1a2, b1b2 held in different components by five clusters.
// unit frame b1 = (0,0), b2 = (1,0), shifted by (2,2) to stay in the positive quadrant
inline CrossingConstruction crossing_construction() {
    const Point shift{2.0, 2.0};
    const Point a1{0.5, 0.3}, a2{0.5, -0.25}, b1{0.0, 0.0}, b2{1.0, 0.0};
    std::vector<Point> pts{a1, a2, b1, b2};
    auto cluster = [&](Point c, int m, double radius, double phase) {
        for (int j = 0; j < m; ++j) {
            const double t = phase + 2.0 * std::numbers::pi * j / m;
            pts.push_back({c.x + radius * std::cos(t), c.y + radius * std::sin(t)});
        }
    };
    auto along = [](Point from, Point through, double len) {
        const Point v = through - from;
        const double l = knnlab::geom::norm(v);
        return from + (len / l) * v;
    };
    // a1's neighbours beyond both unit disks
    cluster({0.5, 0.875}, 6, 0.002, 0.1);
    // a2's neighbours, each held by b_i and a supporting cluster further out
    const Point L = along(b2, a2, knnlab::geom::distance(b2, a2) + 0.54);
    const Point R = along(b1, a2, knnlab::geom::distance(b1, a2) + 0.54);
    cluster(L, 3, 0.002, 0.3);
    cluster(R, 3, 0.002, 0.7);
    cluster(along(b1, L, knnlab::geom::norm(L) + 0.53), 4, 0.002, 0.2);
    cluster(along(b2, R, knnlab::geom::distance(b2, R) + 0.53), 4, 0.002, 0.5);
    // fill b_i's unit disk to k - 1
    pts.push_back({-0.3, 0.01});
    pts.push_back({1.3, -0.01});
    for (auto& p : pts) p = p + shift;
    CrossingConstruction c;
    c.ps = knnlab::sim::make_point_set(std::move(pts));
    return c;
}

}  // namespace fixtures
