#include "knnlab/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace knnlab::geom {

Box tile_box(const GridSpec& g, TileId t) {
    const double x0 = g.origin.x + static_cast<double>(t.i) * g.step;
    const double y0 = g.origin.y + static_cast<double>(t.j) * g.step;
    return {x0, y0, g.origin.x + static_cast<double>(t.i + 1) * g.step,
            g.origin.y + static_cast<double>(t.j + 1) * g.step};
}

Point tile_center(const GridSpec& g, TileId t) {
    return {g.origin.x + (static_cast<double>(t.i) + 0.5) * g.step,
            g.origin.y + (static_cast<double>(t.j) + 0.5) * g.step};
}

TileId tile_of(const GridSpec& g, Point p) {
    return {static_cast<std::int64_t>(std::floor((p.x - g.origin.x) / g.step)),
            static_cast<std::int64_t>(std::floor((p.y - g.origin.y) / g.step))};
}

TileSet make_tile_set(const GridSpec& g, std::vector<TileId> tiles) {
    if (!(g.step > 0.0)) throw std::invalid_argument("tile set: step must be positive");
    std::sort(tiles.begin(), tiles.end());
    tiles.erase(std::unique(tiles.begin(), tiles.end()), tiles.end());
    return {g, std::make_shared<const std::vector<TileId>>(std::move(tiles))};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr Box kEmptyBox{kInf, kInf, -kInf, -kInf};

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

Point unit(Point v) { return (1.0 / norm(v)) * v; }

struct ShapeValidator {
    void operator()(const Disk& d) const {
        require(is_finite(d.center) && std::isfinite(d.radius), "disk: non-finite");
        require(d.radius > 0.0, "disk: radius must be positive");
    }
    void operator()(const HalfDisk& d) const {
        require(is_finite(d.center) && std::isfinite(d.radius), "half-disk: non-finite");
        require(d.radius > 0.0, "half-disk: radius must be positive");
    }
    void operator()(const Ellipse& e) const {
        require(is_finite(e.focus1) && is_finite(e.focus2) && std::isfinite(e.focal_sum), "ellipse: non-finite");
        require(e.focal_sum > distance(e.focus1, e.focus2), "ellipse: focal sum must exceed focal distance");
    }
    void operator()(const HalfPlane& h) const {
        require(is_finite(h.anchor) && is_finite(h.normal), "half-plane: non-finite");
        require(h.normal.x != 0.0 || h.normal.y != 0.0, "half-plane: zero normal");
    }
    void operator()(const AngularSector& s) const {
        require(is_finite(s.apex) && is_finite(s.ray1) && is_finite(s.ray2), "sector: non-finite");
        require(cross(s.ray1, s.ray2) > 0.0, "sector: rays must turn counter-clockwise by less than pi");
    }
    void operator()(const ConvexPolygon& p) const {
        const auto& v = p.vertices;
        require(v.size() >= 3, "polygon: need at least 3 vertices");
        double turning = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            require(is_finite(v[i]), "polygon: non-finite vertex");
            const Point e1 = v[(i + 1) % v.size()] - v[i];
            const Point e2 = v[(i + 2) % v.size()] - v[(i + 1) % v.size()];
            require(cross(e1, e2) > 0.0, "polygon: vertices must be strictly convex and counter-clockwise");
            turning += std::atan2(cross(e1, e2), dot(e1, e2));
        }
        require(std::abs(turning - 2.0 * std::numbers::pi) < 1e-9, "polygon: not simple");
    }
    void operator()(const TileSet& t) const {
        require(t.grid.step > 0.0 && is_finite(t.grid.origin), "tile set: bad grid");
        require(t.tiles != nullptr, "tile set: missing tiles");
    }
};

bool tileset_contains(const TileSet& t, Point p) {
    const double fx = (p.x - t.grid.origin.x) / t.grid.step;
    const double fy = (p.y - t.grid.origin.y) / t.grid.step;
    const auto i = static_cast<std::int64_t>(std::floor(fx));
    const auto j = static_cast<std::int64_t>(std::floor(fy));
    const bool xedge = fx == std::floor(fx);
    const bool yedge = fy == std::floor(fy);
    const auto has = [&](std::int64_t a, std::int64_t b) {
        return std::binary_search(t.tiles->begin(), t.tiles->end(), TileId{a, b});
    };
    if (has(i, j)) return true;
    if (xedge && has(i - 1, j)) return true;
    if (yedge && has(i, j - 1)) return true;
    return xedge && yedge && has(i - 1, j - 1);
}

struct ShapeContains {
    Point p;
    bool operator()(const Disk& d) const {
        const double dx = p.x - d.center.x;
        const double dy = p.y - d.center.y;
        return dx * dx + dy * dy <= d.radius * d.radius;
    }
    bool operator()(const HalfDisk& d) const {
        if (!(*this)(Disk{d.center, d.radius})) return false;
        switch (d.side) {
            case HalfSide::Left: return p.x <= d.center.x;
            case HalfSide::Right: return p.x >= d.center.x;
            case HalfSide::Upper: return p.y >= d.center.y;
            case HalfSide::Lower: return p.y <= d.center.y;
        }
        return false;
    }
    bool operator()(const Ellipse& e) const { return distance(p, e.focus1) + distance(p, e.focus2) <= e.focal_sum; }
    bool operator()(const HalfPlane& h) const { return dot(p - h.anchor, h.normal) <= 0.0; }
    bool operator()(const AngularSector& s) const {
        const Point v = p - s.apex;
        return cross(s.ray1, v) >= 0.0 && cross(v, s.ray2) >= 0.0;
    }
    bool operator()(const ConvexPolygon& poly) const {
        const auto& v = poly.vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Point a = v[i];
            const Point b = v[(i + 1) % v.size()];
            if (cross(b - a, p - a) < 0.0) return false;
        }
        return true;
    }
    bool operator()(const TileSet& t) const { return tileset_contains(t, p); }
};

struct ShapeBounds {
    std::optional<Box> operator()(const Disk& d) const {
        return Box{d.center.x - d.radius, d.center.y - d.radius, d.center.x + d.radius, d.center.y + d.radius};
    }
    std::optional<Box> operator()(const HalfDisk& d) const {
        Box b = *(*this)(Disk{d.center, d.radius});
        switch (d.side) {
            case HalfSide::Left: b.xmax = d.center.x; break;
            case HalfSide::Right: b.xmin = d.center.x; break;
            case HalfSide::Upper: b.ymin = d.center.y; break;
            case HalfSide::Lower: b.ymax = d.center.y; break;
        }
        return b;
    }
    std::optional<Box> operator()(const Ellipse& e) const {
        const Point c = 0.5 * (e.focus1 + e.focus2);
        const double a = 0.5 * e.focal_sum;
        return Box{c.x - a, c.y - a, c.x + a, c.y + a};
    }
    std::optional<Box> operator()(const HalfPlane&) const { return std::nullopt; }
    std::optional<Box> operator()(const AngularSector&) const { return std::nullopt; }
    std::optional<Box> operator()(const ConvexPolygon& p) const {
        Box b = kEmptyBox;
        for (Point v : p.vertices) {
            b.xmin = std::min(b.xmin, v.x);
            b.ymin = std::min(b.ymin, v.y);
            b.xmax = std::max(b.xmax, v.x);
            b.ymax = std::max(b.ymax, v.y);
        }
        return b;
    }
    std::optional<Box> operator()(const TileSet& t) const {
        Box b = kEmptyBox;
        for (TileId id : *t.tiles) {
            const Box tb = tile_box(t.grid, id);
            b.xmin = std::min(b.xmin, tb.xmin);
            b.ymin = std::min(b.ymin, tb.ymin);
            b.xmax = std::max(b.xmax, tb.xmax);
            b.ymax = std::max(b.ymax, tb.ymax);
        }
        return b;
    }
};

}  // namespace

void validate(const Shape& s) { std::visit(ShapeValidator{}, s); }

bool contains(const Shape& s, Point p) { return std::visit(ShapeContains{p}, s); }

bool is_convex(const Shape& s) { return !std::holds_alternative<TileSet>(s); }

std::optional<Box> shape_bounds(const Shape& s) { return std::visit(ShapeBounds{}, s); }

struct Region::Node {
    Kind kind = Kind::Empty;
    std::optional<Shape> shape;
    std::vector<Region> children;
};

Region::Region() : Region(empty()) {}

Region::Region(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Region::Region(Shape s) {
    validate(s);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Primitive;
    n->shape = std::move(s);
    node_ = std::move(n);
}

Region Region::empty() {
    static const auto node = std::make_shared<const Node>(Node{Kind::Empty, std::nullopt, {}});
    return Region(node);
}

Region Region::plane() {
    static const auto node = std::make_shared<const Node>(Node{Kind::Plane, std::nullopt, {}});
    return Region(node);
}

Region Region::union_of(std::vector<Region> parts) {
    std::vector<Region> kept;
    for (auto& p : parts) {
        if (p.kind() == Kind::Plane) return plane();
        if (p.kind() != Kind::Empty) kept.push_back(std::move(p));
    }
    if (kept.empty()) return empty();
    if (kept.size() == 1) return kept.front();
    return Region(std::make_shared<const Node>(Node{Kind::Union, std::nullopt, std::move(kept)}));
}

Region Region::intersection_of(std::vector<Region> parts) {
    std::vector<Region> kept;
    for (auto& p : parts) {
        if (p.kind() == Kind::Empty) return empty();
        if (p.kind() != Kind::Plane) kept.push_back(std::move(p));
    }
    if (kept.empty()) return plane();
    if (kept.size() == 1) return kept.front();
    return Region(std::make_shared<const Node>(Node{Kind::Intersection, std::nullopt, std::move(kept)}));
}

Region Region::difference(Region left, Region right) {
    if (left.kind() == Kind::Empty || right.kind() == Kind::Plane) return empty();
    if (right.kind() == Kind::Empty) return left;
    return Region(
        std::make_shared<const Node>(Node{Kind::Difference, std::nullopt, {std::move(left), std::move(right)}}));
}

Region::Kind Region::kind() const { return node_->kind; }

const Shape& Region::shape() const {
    if (node_->kind != Kind::Primitive) throw std::logic_error("region is not a primitive");
    return *node_->shape;
}

std::span<const Region> Region::children() const { return node_->children; }

bool Region::contains(Point p) const {
    switch (node_->kind) {
        case Kind::Empty: return false;
        case Kind::Plane: return true;
        case Kind::Primitive: return geom::contains(*node_->shape, p);
        case Kind::Union:
            return std::any_of(node_->children.begin(), node_->children.end(),
                               [p](const Region& c) { return c.contains(p); });
        case Kind::Intersection:
            return std::all_of(node_->children.begin(), node_->children.end(),
                               [p](const Region& c) { return c.contains(p); });
        case Kind::Difference: return node_->children[0].contains(p) && !node_->children[1].contains(p);
    }
    return false;
}

std::optional<Box> Region::bounds() const {
    switch (node_->kind) {
        case Kind::Empty: return kEmptyBox;
        case Kind::Plane: return std::nullopt;
        case Kind::Primitive: return shape_bounds(*node_->shape);
        case Kind::Union: {
            Box b = kEmptyBox;
            for (const auto& c : node_->children) {
                const auto cb = c.bounds();
                if (!cb) return std::nullopt;
                b = {std::min(b.xmin, cb->xmin), std::min(b.ymin, cb->ymin), std::max(b.xmax, cb->xmax),
                     std::max(b.ymax, cb->ymax)};
            }
            return b;
        }
        case Kind::Intersection: {
            std::optional<Box> b;
            for (const auto& c : node_->children) {
                const auto cb = c.bounds();
                if (!cb) continue;
                if (!b) {
                    b = cb;
                } else {
                    b = Box{std::max(b->xmin, cb->xmin), std::max(b->ymin, cb->ymin), std::min(b->xmax, cb->xmax),
                            std::min(b->ymax, cb->ymax)};
                }
            }
            return b;
        }
        case Kind::Difference: return node_->children[0].bounds();
    }
    return std::nullopt;
}

bool membership(const Region& r, Point p) { return r.contains(p); }

namespace {

HalfPlane shifted(const HalfPlane& h, double delta) {
    return {h.anchor + delta * unit(h.normal), h.normal};
}

// Sutherland-Hodgman clip of a convex polygon by a closed half-plane
std::vector<Point> clip(const std::vector<Point>& poly, const HalfPlane& h) {
    std::vector<Point> out;
    const auto side = [&](Point p) { return dot(p - h.anchor, h.normal); };
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point a = poly[i];
        const Point b = poly[(i + 1) % poly.size()];
        const double sa = side(a);
        const double sb = side(b);
        if (sa <= 0) out.push_back(a);
        if ((sa < 0 && sb > 0) || (sa > 0 && sb < 0)) out.push_back(a + (sa / (sa - sb)) * (b - a));
    }
    return out;
}

std::optional<Region> offset_polygon(const std::vector<Point>& v, double delta) {
    Box b = *ShapeBounds{}(ConvexPolygon{v});
    const double pad = std::abs(delta) + 1.0;
    std::vector<Point> poly = {
        {b.xmin - pad, b.ymin - pad}, {b.xmax + pad, b.ymin - pad}, {b.xmax + pad, b.ymax + pad}, {b.xmin - pad, b.ymax + pad}};
    for (std::size_t i = 0; i < v.size() && !poly.empty(); ++i) {
        const Point e = v[(i + 1) % v.size()] - v[i];
        poly = clip(poly, shifted(HalfPlane{v[i], {e.y, -e.x}}, delta));
    }
    // drop near-duplicate and collinear vertices
    std::vector<Point> clean;
    for (Point p : poly) {
        if (clean.empty() || distance(clean.back(), p) > 1e-15) clean.push_back(p);
    }
    while (clean.size() > 1 && distance(clean.front(), clean.back()) <= 1e-15) clean.pop_back();
    bool changed = true;
    while (changed && clean.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < clean.size(); ++i) {
            const Point a = clean[(i + clean.size() - 1) % clean.size()];
            const Point c = clean[(i + 1) % clean.size()];
            if (cross(clean[i] - a, c - clean[i]) <= 0.0) {
                clean.erase(clean.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    if (clean.size() < 3) return std::nullopt;
    return Region(ConvexPolygon{std::move(clean)});
}

Region square(const Box& b) {
    return Region(ConvexPolygon{{{b.xmin, b.ymin}, {b.xmax, b.ymin}, {b.xmax, b.ymax}, {b.xmin, b.ymax}}});
}

// signed offset of a primitive; nullopt when the result is empty
std::optional<Region> offset_shape(const Shape& s, double delta) {
    if (const auto* d = std::get_if<Disk>(&s)) {
        if (d->radius + delta <= 0.0) return std::nullopt;
        return Region(Disk{d->center, d->radius + delta});
    }
    if (const auto* h = std::get_if<HalfDisk>(&s)) {
        if (h->radius + delta <= 0.0) return std::nullopt;
        Point n{};
        switch (h->side) {
            case HalfSide::Left: n = {1, 0}; break;
            case HalfSide::Right: n = {-1, 0}; break;
            case HalfSide::Upper: n = {0, -1}; break;
            case HalfSide::Lower: n = {0, 1}; break;
        }
        return Region(Disk{h->center, h->radius + delta}) & Region(shifted(HalfPlane{h->center, n}, delta));
    }
    if (const auto* e = std::get_if<Ellipse>(&s)) {
        const double sum = e->focal_sum + 2.0 * delta;
        if (sum <= distance(e->focus1, e->focus2)) return std::nullopt;
        return Region(Ellipse{e->focus1, e->focus2, sum});
    }
    if (const auto* h = std::get_if<HalfPlane>(&s)) return Region(shifted(*h, delta));
    if (const auto* a = std::get_if<AngularSector>(&s)) {
        const HalfPlane h1{a->apex, {a->ray1.y, -a->ray1.x}};
        const HalfPlane h2{a->apex, {-a->ray2.y, a->ray2.x}};
        return Region(shifted(h1, delta)) & Region(shifted(h2, delta));
    }
    if (const auto* p = std::get_if<ConvexPolygon>(&s)) return offset_polygon(p->vertices, delta);
    const auto& t = std::get<TileSet>(s);
    if (2.0 * -delta >= t.grid.step) return std::nullopt;
    std::vector<Region> parts;
    parts.reserve(t.tiles->size());
    for (TileId id : *t.tiles) {
        Box b = tile_box(t.grid, id);
        parts.push_back(square({b.xmin - delta, b.ymin - delta, b.xmax + delta, b.ymax + delta}));
    }
    return Region::union_of(std::move(parts));
}

// delta > 0 inflates, < 0 deflates
std::optional<Region> offset(const Region& r, double delta) {
    switch (r.kind()) {
        case Region::Kind::Empty: return std::nullopt;
        case Region::Kind::Plane: return r;
        case Region::Kind::Primitive: return offset_shape(r.shape(), delta);
        case Region::Kind::Union: {
            std::vector<Region> parts;
            for (const auto& c : r.children()) {
                if (auto o = offset(c, delta)) parts.push_back(std::move(*o));
            }
            if (parts.empty()) return std::nullopt;
            return Region::union_of(std::move(parts));
        }
        case Region::Kind::Intersection: {
            std::vector<Region> parts;
            for (const auto& c : r.children()) {
                auto o = offset(c, delta);
                if (!o) return std::nullopt;
                parts.push_back(std::move(*o));
            }
            return Region::intersection_of(std::move(parts));
        }
        case Region::Kind::Difference: {
            auto left = offset(r.children()[0], delta);
            if (!left) return std::nullopt;
            auto right = offset(r.children()[1], -delta);
            if (!right) return left;
            return Region::difference(std::move(*left), std::move(*right));
        }
    }
    return std::nullopt;
}

}  // namespace

Region inflate(const Region& r, double delta) {
    require(delta >= 0.0, "inflate: delta must be non-negative");
    if (delta == 0.0) return r;
    auto o = offset(r, delta);
    return o ? *o : Region::empty();
}

Region deflate(const Region& r, double delta) {
    require(delta >= 0.0, "deflate: delta must be non-negative");
    if (delta == 0.0) return r;
    if (r.kind() == Region::Kind::Empty) return r;
    auto o = offset(r, -delta);
    if (!o) throw std::invalid_argument("deflate: region collapses to empty");
    return *o;
}

namespace {

nlohmann::json pt(Point p) { return nlohmann::json::array({p.x, p.y}); }

const char* side_name(HalfSide s) {
    switch (s) {
        case HalfSide::Left: return "left";
        case HalfSide::Right: return "right";
        case HalfSide::Upper: return "upper";
        case HalfSide::Lower: return "lower";
    }
    return "?";
}

struct ShapeJson {
    nlohmann::json operator()(const Disk& d) const {
        return {{"type", "disk"}, {"center", pt(d.center)}, {"radius", d.radius}};
    }
    nlohmann::json operator()(const HalfDisk& d) const {
        return {{"type", "half_disk"}, {"center", pt(d.center)}, {"radius", d.radius}, {"side", side_name(d.side)}};
    }
    nlohmann::json operator()(const Ellipse& e) const {
        return {{"type", "ellipse"}, {"focus1", pt(e.focus1)}, {"focus2", pt(e.focus2)}, {"focal_sum", e.focal_sum}};
    }
    nlohmann::json operator()(const HalfPlane& h) const {
        return {{"type", "half_plane"}, {"anchor", pt(h.anchor)}, {"normal", pt(h.normal)}};
    }
    nlohmann::json operator()(const AngularSector& s) const {
        return {{"type", "sector"}, {"apex", pt(s.apex)}, {"ray1", pt(s.ray1)}, {"ray2", pt(s.ray2)}};
    }
    nlohmann::json operator()(const ConvexPolygon& p) const {
        nlohmann::json v = nlohmann::json::array();
        for (Point q : p.vertices) v.push_back(pt(q));
        return {{"type", "polygon"}, {"vertices", v}};
    }
    nlohmann::json operator()(const TileSet& t) const {
        nlohmann::json ids = nlohmann::json::array();
        for (TileId id : *t.tiles) ids.push_back({id.i, id.j});
        return {{"type", "tiles"}, {"step", t.grid.step}, {"origin", pt(t.grid.origin)}, {"tiles", ids}};
    }
};

}  // namespace

nlohmann::json to_json(const Shape& s) { return std::visit(ShapeJson{}, s); }

nlohmann::json to_json(const Region& r) {
    switch (r.kind()) {
        case Region::Kind::Empty: return {{"op", "empty"}};
        case Region::Kind::Plane: return {{"op", "plane"}};
        case Region::Kind::Primitive: return to_json(r.shape());
        default: break;
    }
    nlohmann::json kids = nlohmann::json::array();
    for (const auto& c : r.children()) kids.push_back(to_json(c));
    const char* op = r.kind() == Region::Kind::Union          ? "union"
                     : r.kind() == Region::Kind::Intersection ? "intersection"
                                                              : "difference";
    return {{"op", op}, {"children", kids}};
}

Region disk(Point c, double r) { return Region(Disk{c, r}); }

Region half_plane(Point anchor, Point outward_normal) { return Region(HalfPlane{anchor, outward_normal}); }

Region polygon(std::vector<Point> ccw_vertices) { return Region(ConvexPolygon{std::move(ccw_vertices)}); }

}  // namespace knnlab::geom
