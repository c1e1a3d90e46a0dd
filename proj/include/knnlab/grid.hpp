#pragma once

#include <cstdint>
#include <vector>

#include "knnlab/region.hpp"

namespace knnlab::geom {

struct AreaBound {
    double lower = 0.0;
    double upper = 0.0;
};

enum class Cover { Outside, Boundary, Inside };

// conservative three-valued test of a closed tile against r:
// Inside means the whole tile is in r, Outside means the tile interior misses r
Cover classify(const Shape& s, const Box& tile);
Cover classify(const Region& r, const Box& tile);

// lower counts tiles certified inside r∩window, upper adds every tile not certified outside
AreaBound grid_area_bounds(const Region& r, const GridSpec& g, const Region& window, int threads = 0);

struct TileRange {
    std::int64_t i0 = 0;
    std::int64_t i1 = -1;
    std::int64_t j0 = 0;
    std::int64_t j1 = -1;
};

TileRange tiles_covering(const GridSpec& g, const Box& b);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Region flattened for repeated line queries. Leaves are evaluated as intervals
// on a horizontal line and combined along breakpoints.
class RowSweep {
public:
    explicit RowSweep(const Region& r);

    // disjoint sorted intervals of r on the line y = const
    void slice(double y, std::vector<Interval>& out) const;
    double slice_length(double y) const;

    // tiles of `range` whose centers lie in r (exact membership at the ends)
    std::int64_t count_centers(const GridSpec& g, const TileRange& range) const;
    // same, only rows j in [j0, j1] and tiles whose center is in r
    std::int64_t count_row(const GridSpec& g, std::int64_t j, std::int64_t i0, std::int64_t i1) const;

    const std::optional<Box>& bounds() const { return bounds_; }

private:
    enum class OpKind : std::uint8_t { Leaf, True, False, Union, Intersection, Difference };
    struct Op {
        OpKind kind;
        std::uint32_t arg;  // leaf index or child count
    };
    bool eval(const std::vector<char>& leaf_state) const;
    void leaf_intervals(std::size_t leaf, double y, std::vector<Interval>& out) const;
    void compile(const Region& r);

    std::vector<Shape> leaves_;
    std::vector<Op> ops_;
    std::optional<Box> bounds_;
};

std::int64_t count_tile_centers(const Region& r, const GridSpec& g, const TileRange& range);

struct QuadratureArea {
    double value = 0.0;
    double error_estimate = 0.0;
};

// midpoint rule over exact slice lengths; error estimate from halving the strip count
QuadratureArea slice_area(const Region& r, int strips = 200000);

}  // namespace knnlab::geom
