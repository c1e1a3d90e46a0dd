#include "knnlab/disks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace knnlab::geom {

double disk_lens_area(double d, double r1, double r2) {
    if (d >= r1 + r2) return 0.0;
    const double small = std::min(r1, r2);
    if (d <= std::abs(r1 - r2)) return std::numbers::pi * small * small;
    const double c1 = std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0);
    const double c2 = std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0);
    const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    return r1 * r1 * std::acos(c1) + r2 * r2 * std::acos(c2) - 0.5 * std::sqrt(std::max(0.0, k));
}

namespace {

constexpr double kSlack = 1e-12;

// part of circle c inside closed disk t, as an arc centred at angle `mid` with half-width `half`
struct Arc {
    enum class Kind { None, Full, Part } kind = Kind::None;
    double mid = 0.0;
    double half = 0.0;
};

Arc arc_inside(const Disk& c, const Disk& t) {
    const Point v = t.center - c.center;
    const double dd = norm(v);
    if (dd + c.radius <= t.radius) return {Arc::Kind::Full};
    if (dd == 0.0) return {};
    const double cosv = (c.radius * c.radius + dd * dd - t.radius * t.radius) / (2.0 * c.radius * dd);
    if (cosv > 1.0) return {};
    if (cosv <= -1.0) return {Arc::Kind::Full};
    return {Arc::Kind::Part, std::atan2(v.y, v.x), std::acos(cosv)};
}

double angular_gap(double a, double b) {
    double g = std::fmod(std::abs(a - b), 2.0 * std::numbers::pi);
    return g > std::numbers::pi ? 2.0 * std::numbers::pi - g : g;
}

// arc (mid, half) lies inside the coverage arc `cover`
bool arc_within(double mid, double half, const Arc& cover) {
    if (cover.kind == Arc::Kind::Full) return true;
    if (cover.kind == Arc::Kind::None) return false;
    return angular_gap(mid, cover.mid) + half <= cover.half - kSlack;
}

}  // namespace

bool disk_inside_disk(const Disk& a, const Disk& b) {
    return distance(a.center, b.center) + a.radius <= b.radius - kSlack;
}

bool disk_covered_by_union(const Disk& a, const Disk& p, const Disk& q) {
    // a is a disk and p ∪ q has no holes, so covering the boundary circle suffices
    const Arc ap = arc_inside(a, p);
    const Arc aq = arc_inside(a, q);
    if (ap.kind == Arc::Kind::Full || aq.kind == Arc::Kind::Full) {
        return disk_inside_disk(a, p) || disk_inside_disk(a, q);
    }
    if (ap.kind == Arc::Kind::None || aq.kind == Arc::Kind::None) return false;
    // the complement of ap must sit inside aq
    return arc_within(ap.mid + std::numbers::pi, std::numbers::pi - ap.half, aq);
}

bool lens_inside_disk(const Disk& a, const Disk& b, const Disk& target) {
    const double d = distance(a.center, b.center);
    if (d >= a.radius + b.radius) return true;
    if (d + a.radius <= b.radius) return disk_inside_disk(a, target);
    if (d + b.radius <= a.radius) return disk_inside_disk(b, target);
    // the lens is bounded by the arc of ∂a inside b and the arc of ∂b inside a
    const Arc on_a = arc_inside(a, b);
    const Arc on_b = arc_inside(b, a);
    return arc_within(on_a.mid, on_a.half, arc_inside(a, target)) &&
           arc_within(on_b.mid, on_b.half, arc_inside(b, target));
}

}  // namespace knnlab::geom
