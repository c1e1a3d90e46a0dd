#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "knnlab/point.hpp"

namespace knnlab::sim::detail {

using geom::Point;

// bucketed uniform grid over the bounding box of a point list (CSR layout)
class PointGrid {
public:
    PointGrid(const std::vector<Point>& pts, double cell) : pts_(pts) {
        if (pts.empty()) return;
        x0_ = x1_ = pts[0].x;
        y0_ = y1_ = pts[0].y;
        for (const Point& p : pts) {
            x0_ = std::min(x0_, p.x);
            x1_ = std::max(x1_, p.x);
            y0_ = std::min(y0_, p.y);
            y1_ = std::max(y1_, p.y);
        }
        const double span = std::max(x1_ - x0_, y1_ - y0_);
        cell_ = (cell > 0.0 && std::isfinite(cell)) ? cell : 1.0;
        // cap the cell count near 4 N
        const double cap = std::sqrt(4.0 * static_cast<double>(pts.size())) + 1.0;
        if (span / cell_ > cap) cell_ = span / cap;
        if (!(cell_ > 0.0)) cell_ = 1.0;
        nx_ = static_cast<std::int64_t>((x1_ - x0_) / cell_) + 1;
        ny_ = static_cast<std::int64_t>((y1_ - y0_) / cell_) + 1;
        start_.assign(static_cast<std::size_t>(nx_ * ny_ + 1), 0);
        for (const Point& p : pts) ++start_[static_cast<std::size_t>(flat(cx(p.x), cy(p.y))) + 1];
        for (std::size_t i = 1; i < start_.size(); ++i) start_[i] += start_[i - 1];
        items_.resize(pts.size());
        std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
        for (std::uint32_t i = 0; i < pts.size(); ++i) {
            items_[fill[static_cast<std::size_t>(flat(cx(pts[i].x), cy(pts[i].y)))]++] = i;
        }
    }

    std::int64_t cx(double x) const { return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((x - x0_) / cell_)), 0, nx_ - 1); }
    std::int64_t cy(double y) const { return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((y - y0_) / cell_)), 0, ny_ - 1); }
    std::int64_t nx() const { return nx_; }
    std::int64_t ny() const { return ny_; }
    double cell() const { return cell_; }
    double x0() const { return x0_; }
    double y0() const { return y0_; }
    bool empty() const { return pts_.empty(); }

    template <class F>
    void for_cell(std::int64_t i, std::int64_t j, F&& f) const {
        if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return;
        const auto c = static_cast<std::size_t>(flat(i, j));
        for (std::uint32_t t = start_[c]; t < start_[c + 1]; ++t) f(items_[t]);
    }

    // every point in cells meeting the box; callers filter exactly
    template <class F>
    void for_box(double xmin, double ymin, double xmax, double ymax, F&& f) const {
        if (pts_.empty()) return;
        const std::int64_t i0 = cx(xmin), i1 = cx(xmax), j0 = cy(ymin), j1 = cy(ymax);
        for (std::int64_t j = j0; j <= j1; ++j)
            for (std::int64_t i = i0; i <= i1; ++i) for_cell(i, j, f);
    }

private:
    std::int64_t flat(std::int64_t i, std::int64_t j) const { return j * nx_ + i; }

    const std::vector<Point>& pts_;
    double x0_ = 0.0, y0_ = 0.0, x1_ = 0.0, y1_ = 0.0;
    double cell_ = 1.0;
    std::int64_t nx_ = 0, ny_ = 0;
    std::vector<std::uint32_t> start_;
    std::vector<std::uint32_t> items_;
};

inline double dist2(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

}  // namespace knnlab::sim::detail
