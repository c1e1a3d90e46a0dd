#pragma once

#include <cmath>

namespace knnlab::geom {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double t, Point a) { return {t * a.x, t * a.y}; }
    friend constexpr Point operator*(Point a, double t) { return {t * a.x, t * a.y}; }
    friend constexpr bool operator==(Point a, Point b) = default;
};

struct Segment {
    Point a;
    Point b;
};

// axis-aligned box, closed
struct Box {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
constexpr Point perp(Point a) { return {-a.y, a.x}; }

inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double distance(Point p, Point q);
double point_segment_distance(Point p, const Segment& s);

// sign of det[b-a, c-a]: +1 counter-clockwise, -1 clockwise, 0 collinear. Exact.
int orientation(Point a, Point b, Point c);

// closed segments; touching and collinear overlap count
bool segments_intersect(const Segment& s, const Segment& t);

}  // namespace knnlab::geom
