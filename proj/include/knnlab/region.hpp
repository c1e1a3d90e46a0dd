#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <json.hpp>

#include "knnlab/point.hpp"

namespace knnlab::geom {

struct GridSpec {
    double step = 0.0;
    Point origin{};
};

struct TileId {
    std::int64_t i = 0;
    std::int64_t j = 0;
    friend auto operator<=>(const TileId&, const TileId&) = default;
};

Box tile_box(const GridSpec& g, TileId t);
Point tile_center(const GridSpec& g, TileId t);
TileId tile_of(const GridSpec& g, Point p);

struct Disk {
    Point center;
    double radius = 0.0;
};

enum class HalfSide { Left, Right, Upper, Lower };

// closed half of a disk on the given side of its center, e.g. Left = {x <= center.x}
struct HalfDisk {
    Point center;
    double radius = 0.0;
    HalfSide side = HalfSide::Left;
};

struct Ellipse {
    Point focus1;
    Point focus2;
    double focal_sum = 0.0;
};

// {p : dot(p - anchor, normal) <= 0}; normal points outward
struct HalfPlane {
    Point anchor;
    Point normal;
};

// closed cone swept counter-clockwise from ray1 to ray2, opening angle < pi
struct AngularSector {
    Point apex;
    Point ray1;
    Point ray2;
};

// strictly convex, counter-clockwise
struct ConvexPolygon {
    std::vector<Point> vertices;
};

// union of closed grid tiles; ids sorted and unique
struct TileSet {
    GridSpec grid;
    std::shared_ptr<const std::vector<TileId>> tiles;
};

TileSet make_tile_set(const GridSpec& g, std::vector<TileId> tiles);

using Shape = std::variant<Disk, HalfDisk, Ellipse, HalfPlane, AngularSector, ConvexPolygon, TileSet>;

// throws std::invalid_argument when the shape breaks its invariants
void validate(const Shape& s);
bool contains(const Shape& s, Point p);
bool is_convex(const Shape& s);
std::optional<Box> shape_bounds(const Shape& s);

class Region {
public:
    enum class Kind { Empty, Plane, Primitive, Union, Intersection, Difference };

    Region();  // empty
    explicit Region(Shape s);

    static Region empty();
    static Region plane();
    static Region union_of(std::vector<Region> parts);
    static Region intersection_of(std::vector<Region> parts);
    static Region difference(Region left, Region right);

    Kind kind() const;
    const Shape& shape() const;             // Primitive only
    std::span<const Region> children() const;  // Union/Intersection/Difference

    bool contains(Point p) const;
    // conservative bounding box; nullopt when unbounded
    std::optional<Box> bounds() const;
    bool bounded() const { return bounds().has_value(); }

    friend Region operator|(const Region& a, const Region& b) { return union_of({a, b}); }
    friend Region operator&(const Region& a, const Region& b) { return intersection_of({a, b}); }
    friend Region operator-(const Region& a, const Region& b) { return difference(a, b); }

private:
    struct Node;
    explicit Region(std::shared_ptr<const Node> n);
    std::shared_ptr<const Node> node_;
};

bool membership(const Region& r, Point p);

// inflate(r) contains r contains deflate(r); both may be loose.
// deflate throws std::invalid_argument when a primitive at the top level collapses.
Region inflate(const Region& r, double delta);
Region deflate(const Region& r, double delta);

nlohmann::json to_json(const Shape& s);
nlohmann::json to_json(const Region& r);

// convenience constructors
Region disk(Point c, double r);
Region half_plane(Point anchor, Point outward_normal);
Region polygon(std::vector<Point> ccw_vertices);

}  // namespace knnlab::geom
