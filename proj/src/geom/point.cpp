#include "knnlab/point.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace knnlab::geom {

double distance(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

double point_segment_distance(Point p, const Segment& s) {
    const Point ab = s.b - s.a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, s.a);
    const double t = std::clamp(dot(p - s.a, ab) / len2, 0.0, 1.0);
    return distance(p, s.a + t * ab);
}

namespace {

struct Pair {
    double hi;
    double lo;
};

Pair two_product(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

Pair two_sum(double a, double b) {
    const double x = a + b;
    const double bv = x - a;
    const double av = x - bv;
    return {x, (a - av) + (b - bv)};
}

// Shewchuk's grow-expansion; components stay nonoverlapping and increasing
void grow(std::vector<double>& e, double b) {
    double q = b;
    for (double& ei : e) {
        const Pair s = two_sum(q, ei);
        ei = s.lo;
        q = s.hi;
    }
    e.push_back(q);
}

int exact_orientation(Point a, Point b, Point c) {
    const std::array<Pair, 6> terms = {
        two_product(b.x, c.y),  two_product(-b.x, a.y), two_product(-a.x, c.y),
        two_product(-b.y, c.x), two_product(b.y, a.x),  two_product(a.y, c.x),
    };
    std::vector<double> e;
    e.reserve(16);
    for (const Pair& t : terms) {
        grow(e, t.lo);
        grow(e, t.hi);
    }
    for (auto it = e.rbegin(); it != e.rend(); ++it) {
        if (*it > 0) return 1;
        if (*it < 0) return -1;
    }
    return 0;
}

bool on_segment(Point p, Point q, Point r) {
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) && std::min(p.y, r.y) <= q.y &&
           q.y <= std::max(p.y, r.y);
}

}  // namespace

int orientation(Point a, Point b, Point c) {
    const double left = (b.x - a.x) * (c.y - a.y);
    const double right = (b.y - a.y) * (c.x - a.x);
    const double det = left - right;
    const double bound = 3.3306690738754716e-16 * (std::abs(left) + std::abs(right));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return exact_orientation(a, b, c);
}

bool segments_intersect(const Segment& s, const Segment& t) {
    const int o1 = orientation(s.a, s.b, t.a);
    const int o2 = orientation(s.a, s.b, t.b);
    const int o3 = orientation(t.a, t.b, s.a);
    const int o4 = orientation(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(s.a, t.a, s.b)) return true;
    if (o2 == 0 && on_segment(s.a, t.b, s.b)) return true;
    if (o3 == 0 && on_segment(t.a, s.a, t.b)) return true;
    if (o4 == 0 && on_segment(t.a, s.b, t.b)) return true;
    return false;
}

}  // namespace knnlab::geom
