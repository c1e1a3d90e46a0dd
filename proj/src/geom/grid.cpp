#include "knnlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "knnlab/parallel.hpp"

namespace knnlab::geom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Cover combine_and(Cover a, Cover b) {
    if (a == Cover::Outside || b == Cover::Outside) return Cover::Outside;
    if (a == Cover::Inside && b == Cover::Inside) return Cover::Inside;
    return Cover::Boundary;
}

Cover classify_half_plane(const HalfPlane& h, const Box& t) {
    const Point corners[4] = {{t.xmin, t.ymin}, {t.xmax, t.ymin}, {t.xmax, t.ymax}, {t.xmin, t.ymax}};
    double lo = kInf;
    double hi = -kInf;
    for (Point c : corners) {
        const double m = dot(c - h.anchor, h.normal);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    if (hi <= 0.0) return Cover::Inside;
    if (lo >= 0.0) return Cover::Outside;
    return Cover::Boundary;
}

double box_distance(Point p, const Box& t) {
    const double dx = std::max({t.xmin - p.x, 0.0, p.x - t.xmax});
    const double dy = std::max({t.ymin - p.y, 0.0, p.y - t.ymax});
    return std::hypot(dx, dy);
}

bool corners_inside(const Shape& s, const Box& t) {
    return contains(s, {t.xmin, t.ymin}) && contains(s, {t.xmax, t.ymin}) && contains(s, {t.xmax, t.ymax}) &&
           contains(s, {t.xmin, t.ymax});
}

}  // namespace

Cover classify(const Shape& s, const Box& t) {
    if (const auto* d = std::get_if<Disk>(&s)) {
        const double dx = std::max({t.xmin - d->center.x, 0.0, d->center.x - t.xmax});
        const double dy = std::max({t.ymin - d->center.y, 0.0, d->center.y - t.ymax});
        if (dx * dx + dy * dy >= d->radius * d->radius) return Cover::Outside;
        return corners_inside(s, t) ? Cover::Inside : Cover::Boundary;
    }
    if (const auto* h = std::get_if<HalfDisk>(&s)) {
        Point n{};
        switch (h->side) {
            case HalfSide::Left: n = {1, 0}; break;
            case HalfSide::Right: n = {-1, 0}; break;
            case HalfSide::Upper: n = {0, -1}; break;
            case HalfSide::Lower: n = {0, 1}; break;
        }
        return combine_and(classify(Disk{h->center, h->radius}, t), classify_half_plane({h->center, n}, t));
    }
    if (const auto* e = std::get_if<Ellipse>(&s)) {
        const Point c{0.5 * (t.xmin + t.xmax), 0.5 * (t.ymin + t.ymax)};
        const double half_diag = 0.5 * std::hypot(t.xmax - t.xmin, t.ymax - t.ymin);
        const double via_center = distance(c, e->focus1) + distance(c, e->focus2) - 2.0 * half_diag;
        const double via_box = box_distance(e->focus1, t) + box_distance(e->focus2, t);
        if (std::max(via_center, via_box) >= e->focal_sum) return Cover::Outside;
        return corners_inside(s, t) ? Cover::Inside : Cover::Boundary;
    }
    if (const auto* h = std::get_if<HalfPlane>(&s)) return classify_half_plane(*h, t);
    if (const auto* a = std::get_if<AngularSector>(&s)) {
        const HalfPlane h1{a->apex, {a->ray1.y, -a->ray1.x}};
        const HalfPlane h2{a->apex, {-a->ray2.y, a->ray2.x}};
        return combine_and(classify_half_plane(h1, t), classify_half_plane(h2, t));
    }
    if (const auto* p = std::get_if<ConvexPolygon>(&s)) {
        const Box pb = *shape_bounds(s);
        if (pb.xmax <= t.xmin || pb.xmin >= t.xmax || pb.ymax <= t.ymin || pb.ymin >= t.ymax) return Cover::Outside;
        const auto& v = p->vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Point e = v[(i + 1) % v.size()] - v[i];
            if (classify_half_plane({v[i], {e.y, -e.x}}, t) == Cover::Outside) return Cover::Outside;
        }
        return corners_inside(s, t) ? Cover::Inside : Cover::Boundary;
    }
    const auto& ts = std::get<TileSet>(s);
    const TileRange range = tiles_covering(ts.grid, t);
    std::int64_t hit = 0;
    std::int64_t total = 0;
    for (std::int64_t j = range.j0; j <= range.j1; ++j) {
        for (std::int64_t i = range.i0; i <= range.i1; ++i) {
            const Box b = tile_box(ts.grid, {i, j});
            // only tiles sharing interior with t matter
            if (b.xmax <= t.xmin || b.xmin >= t.xmax || b.ymax <= t.ymin || b.ymin >= t.ymax) continue;
            ++total;
            if (std::binary_search(ts.tiles->begin(), ts.tiles->end(), TileId{i, j})) ++hit;
        }
    }
    if (hit == 0) return Cover::Outside;
    return hit == total ? Cover::Inside : Cover::Boundary;
}

Cover classify(const Region& r, const Box& t) {
    switch (r.kind()) {
        case Region::Kind::Empty: return Cover::Outside;
        case Region::Kind::Plane: return Cover::Inside;
        case Region::Kind::Primitive: return classify(r.shape(), t);
        case Region::Kind::Union: {
            bool all_out = true;
            for (const auto& c : r.children()) {
                const Cover k = classify(c, t);
                if (k == Cover::Inside) return Cover::Inside;
                if (k != Cover::Outside) all_out = false;
            }
            return all_out ? Cover::Outside : Cover::Boundary;
        }
        case Region::Kind::Intersection: {
            bool all_in = true;
            for (const auto& c : r.children()) {
                const Cover k = classify(c, t);
                if (k == Cover::Outside) return Cover::Outside;
                if (k != Cover::Inside) all_in = false;
            }
            return all_in ? Cover::Inside : Cover::Boundary;
        }
        case Region::Kind::Difference: {
            const Cover l = classify(r.children()[0], t);
            if (l == Cover::Outside) return Cover::Outside;
            const Cover rt = classify(r.children()[1], t);
            if (rt == Cover::Inside) return Cover::Outside;
            if (l == Cover::Inside && rt == Cover::Outside) return Cover::Inside;
            return Cover::Boundary;
        }
    }
    return Cover::Boundary;
}

TileRange tiles_covering(const GridSpec& g, const Box& b) {
    if (!(b.xmin <= b.xmax) || !(b.ymin <= b.ymax)) return {};
    if (!std::isfinite(b.xmin) || !std::isfinite(b.xmax) || !std::isfinite(b.ymin) || !std::isfinite(b.ymax)) {
        throw std::invalid_argument("tiles_covering: unbounded box");
    }
    const auto lo = [&](double v, double o) { return static_cast<std::int64_t>(std::floor((v - o) / g.step)); };
    const auto hi = [&](double v, double o) { return static_cast<std::int64_t>(std::ceil((v - o) / g.step)) - 1; };
    TileRange r{lo(b.xmin, g.origin.x), hi(b.xmax, g.origin.x), lo(b.ymin, g.origin.y), hi(b.ymax, g.origin.y)};
    r.i1 = std::max(r.i1, r.i0);
    r.j1 = std::max(r.j1, r.j0);
    return r;
}

AreaBound grid_area_bounds(const Region& r, const GridSpec& g, const Region& window, int threads) {
    if (!(g.step > 0.0)) throw std::invalid_argument("grid_area_bounds: step must be positive");
    const Region clipped = r & window;
    const auto box = clipped.bounds();
    if (!box) throw std::invalid_argument("grid_area_bounds: region must be bounded within the window");
    if (clipped.kind() == Region::Kind::Empty) return {};
    const TileRange range = tiles_covering(g, *box);
    const std::size_t rows = static_cast<std::size_t>(std::max<std::int64_t>(0, range.j1 - range.j0 + 1));
    std::vector<std::int64_t> inside(rows, 0);
    std::vector<std::int64_t> edge(rows, 0);
    parallel_for(rows, threads, [&](std::size_t row) {
        const std::int64_t j = range.j0 + static_cast<std::int64_t>(row);
        for (std::int64_t i = range.i0; i <= range.i1; ++i) {
            switch (classify(clipped, tile_box(g, {i, j}))) {
                case Cover::Inside: ++inside[row]; break;
                case Cover::Boundary: ++edge[row]; break;
                case Cover::Outside: break;
            }
        }
    });
    std::int64_t in = 0;
    std::int64_t bd = 0;
    for (std::size_t k = 0; k < rows; ++k) {
        in += inside[k];
        bd += edge[k];
    }
    const double area = g.step * g.step;
    return {static_cast<double>(in) * area, static_cast<double>(in + bd) * area};
}

// ---- row sweep ----

RowSweep::RowSweep(const Region& r) : bounds_(r.bounds()) { compile(r); }

void RowSweep::compile(const Region& r) {
    switch (r.kind()) {
        case Region::Kind::Empty: ops_.push_back({OpKind::False, 0}); return;
        case Region::Kind::Plane: ops_.push_back({OpKind::True, 0}); return;
        case Region::Kind::Primitive:
            ops_.push_back({OpKind::Leaf, static_cast<std::uint32_t>(leaves_.size())});
            leaves_.push_back(r.shape());
            return;
        default: break;
    }
    for (const auto& c : r.children()) compile(c);
    const auto n = static_cast<std::uint32_t>(r.children().size());
    switch (r.kind()) {
        case Region::Kind::Union: ops_.push_back({OpKind::Union, n}); break;
        case Region::Kind::Intersection: ops_.push_back({OpKind::Intersection, n}); break;
        default: ops_.push_back({OpKind::Difference, 2}); break;
    }
}

bool RowSweep::eval(const std::vector<char>& leaf_state) const {
    bool stack[256];
    std::size_t top = 0;
    for (const Op& op : ops_) {
        switch (op.kind) {
            case OpKind::Leaf: stack[top++] = leaf_state[op.arg] != 0; break;
            case OpKind::True: stack[top++] = true; break;
            case OpKind::False: stack[top++] = false; break;
            case OpKind::Union: {
                bool v = false;
                for (std::uint32_t k = 0; k < op.arg; ++k) v = v || stack[top - 1 - k];
                top -= op.arg;
                stack[top++] = v;
                break;
            }
            case OpKind::Intersection: {
                bool v = true;
                for (std::uint32_t k = 0; k < op.arg; ++k) v = v && stack[top - 1 - k];
                top -= op.arg;
                stack[top++] = v;
                break;
            }
            case OpKind::Difference: {
                const bool v = stack[top - 2] && !stack[top - 1];
                top -= 2;
                stack[top++] = v;
                break;
            }
        }
    }
    return top == 1 && stack[0];
}

namespace {

// {x : nx*x <= rhs}
bool half_line(double nx, double rhs, double& lo, double& hi) {
    if (nx > 0) {
        hi = std::min(hi, rhs / nx);
    } else if (nx < 0) {
        lo = std::max(lo, rhs / nx);
    } else if (rhs < 0) {
        return false;
    }
    return lo <= hi;
}

bool plane_interval(const HalfPlane& h, double y, double& lo, double& hi) {
    const double rhs = h.normal.x * h.anchor.x + h.normal.y * (h.anchor.y - y);
    return half_line(h.normal.x, rhs, lo, hi);
}

bool disk_interval(Point c, double r, double y, double& lo, double& hi) {
    const double dy = y - c.y;
    const double h2 = r * r - dy * dy;
    if (h2 < 0) return false;
    const double h = std::sqrt(h2);
    lo = std::max(lo, c.x - h);
    hi = std::min(hi, c.x + h);
    return lo <= hi;
}

bool convex_interval(const Shape& s, double y, double& lo, double& hi) {
    lo = -kInf;
    hi = kInf;
    if (const auto* d = std::get_if<Disk>(&s)) return disk_interval(d->center, d->radius, y, lo, hi);
    if (const auto* h = std::get_if<HalfDisk>(&s)) {
        if (!disk_interval(h->center, h->radius, y, lo, hi)) return false;
        switch (h->side) {
            case HalfSide::Left: hi = std::min(hi, h->center.x); break;
            case HalfSide::Right: lo = std::max(lo, h->center.x); break;
            case HalfSide::Upper: return y >= h->center.y && lo <= hi;
            case HalfSide::Lower: return y <= h->center.y && lo <= hi;
        }
        return lo <= hi;
    }
    if (const auto* e = std::get_if<Ellipse>(&s)) {
        const Point c = 0.5 * (e->focus1 + e->focus2);
        const double a = 0.5 * e->focal_sum;
        const double f = 0.5 * distance(e->focus1, e->focus2);
        if (f == 0.0) return disk_interval(c, a, y, lo, hi);
        const Point u = (0.5 / f) * (e->focus2 - e->focus1);
        const double ia2 = 1.0 / (a * a);
        const double ib2 = 1.0 / (a * a - f * f);
        const double dy = y - c.y;
        const double A = u.x * u.x * ia2 + u.y * u.y * ib2;
        const double B = 2.0 * dy * u.x * u.y * (ia2 - ib2);
        const double C = dy * dy * (u.y * u.y * ia2 + u.x * u.x * ib2) - 1.0;
        const double disc = B * B - 4.0 * A * C;
        if (disc < 0) return false;
        const double sq = std::sqrt(disc);
        lo = c.x + (-B - sq) / (2.0 * A);
        hi = c.x + (-B + sq) / (2.0 * A);
        return true;
    }
    if (const auto* h = std::get_if<HalfPlane>(&s)) return plane_interval(*h, y, lo, hi);
    if (const auto* a = std::get_if<AngularSector>(&s)) {
        return plane_interval({a->apex, {a->ray1.y, -a->ray1.x}}, y, lo, hi) &&
               plane_interval({a->apex, {-a->ray2.y, a->ray2.x}}, y, lo, hi);
    }
    const auto& v = std::get<ConvexPolygon>(s).vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point e = v[(i + 1) % v.size()] - v[i];
        if (!plane_interval({v[i], {e.y, -e.x}}, y, lo, hi)) return false;
    }
    return true;
}

}  // namespace

void RowSweep::leaf_intervals(std::size_t leaf, double y, std::vector<Interval>& out) const {
    out.clear();
    const Shape& s = leaves_[leaf];
    if (const auto* ts = std::get_if<TileSet>(&s)) {
        for (TileId id : *ts->tiles) {
            const Box b = tile_box(ts->grid, id);
            if (y < b.ymin || y > b.ymax) continue;
            out.push_back({b.xmin, b.xmax});
        }
        std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        std::size_t w = 0;
        for (std::size_t k = 0; k < out.size(); ++k) {
            if (w > 0 && out[k].lo <= out[w - 1].hi) {
                out[w - 1].hi = std::max(out[w - 1].hi, out[k].hi);
            } else {
                out[w++] = out[k];
            }
        }
        out.resize(w);
        return;
    }
    double lo = 0.0;
    double hi = 0.0;
    if (convex_interval(s, y, lo, hi) && lo <= hi) out.push_back({lo, hi});
}

void RowSweep::slice(double y, std::vector<Interval>& out) const {
    out.clear();
    std::vector<std::vector<Interval>> per_leaf(leaves_.size());
    std::vector<double> cuts;
    for (std::size_t l = 0; l < leaves_.size(); ++l) {
        leaf_intervals(l, y, per_leaf[l]);
        for (const auto& iv : per_leaf[l]) {
            cuts.push_back(iv.lo);
            cuts.push_back(iv.hi);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<char> state(leaves_.size());
    const auto inside_at = [&](double x) {
        for (std::size_t l = 0; l < leaves_.size(); ++l) {
            state[l] = 0;
            for (const auto& iv : per_leaf[l]) {
                if (iv.lo <= x && x <= iv.hi) {
                    state[l] = 1;
                    break;
                }
            }
        }
        return eval(state);
    };
    // unbounded pieces on either side
    if (cuts.empty()) {
        if (inside_at(0.0)) out.push_back({-kInf, kInf});
        return;
    }
    if (inside_at(cuts.front() - 1.0)) out.push_back({-kInf, cuts.front()});
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k];
        const double b = cuts[k + 1];
        const double mid = std::isfinite(a) && std::isfinite(b) ? 0.5 * (a + b) : (std::isfinite(a) ? a + 1.0 : b - 1.0);
        if (!inside_at(mid)) continue;
        if (!out.empty() && out.back().hi == a) {
            out.back().hi = b;
        } else {
            out.push_back({a, b});
        }
    }
    if (inside_at(cuts.back() + 1.0)) {
        if (!out.empty() && out.back().hi == cuts.back()) {
            out.back().hi = kInf;
        } else {
            out.push_back({cuts.back(), kInf});
        }
    }
}

double RowSweep::slice_length(double y) const {
    std::vector<Interval> iv;
    slice(y, iv);
    double total = 0.0;
    for (const auto& i : iv) total += i.hi - i.lo;
    return total;
}

std::int64_t RowSweep::count_row(const GridSpec& g, std::int64_t j, std::int64_t i0, std::int64_t i1) const {
    if (i0 > i1) return 0;
    const double y = g.origin.y + (static_cast<double>(j) + 0.5) * g.step;
    const auto center = [&](std::int64_t i) { return Point{g.origin.x + (static_cast<double>(i) + 0.5) * g.step, y}; };

    thread_local std::vector<Interval> tmp;
    thread_local std::vector<std::int64_t> range_lo;
    thread_local std::vector<std::int64_t> range_hi;
    thread_local std::vector<std::uint32_t> range_leaf;
    thread_local std::vector<std::int64_t> cuts;
    thread_local std::vector<char> state;
    range_lo.clear();
    range_hi.clear();
    range_leaf.clear();
    cuts.clear();

    const double lim_lo = static_cast<double>(i0) - 2.0;
    const double lim_hi = static_cast<double>(i1) + 2.0;
    for (std::size_t l = 0; l < leaves_.size(); ++l) {
        leaf_intervals(l, y, tmp);
        const Shape& s = leaves_[l];
        for (const auto& iv : tmp) {
            const double fa = std::clamp(std::ceil((iv.lo - g.origin.x) / g.step - 0.5), lim_lo, lim_hi);
            const double fb = std::clamp(std::floor((iv.hi - g.origin.x) / g.step - 0.5), lim_lo, lim_hi);
            std::int64_t a = std::max(static_cast<std::int64_t>(fa), i0);
            std::int64_t b = std::min(static_cast<std::int64_t>(fb), i1);
            if (a > b) continue;
            // exact membership decides the end tiles
            while (a > i0 && contains(s, center(a - 1))) --a;
            while (a <= b && !contains(s, center(a))) ++a;
            while (b < i1 && contains(s, center(b + 1))) ++b;
            while (b >= a && !contains(s, center(b))) --b;
            if (a > b) continue;
            range_lo.push_back(a);
            range_hi.push_back(b);
            range_leaf.push_back(static_cast<std::uint32_t>(l));
            cuts.push_back(a);
            cuts.push_back(b + 1);
        }
    }
    cuts.push_back(i0);
    cuts.push_back(i1 + 1);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    state.assign(leaves_.size(), 0);
    std::int64_t count = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const std::int64_t p = cuts[k];
        if (p < i0 || p > i1) continue;
        std::fill(state.begin(), state.end(), 0);
        for (std::size_t m = 0; m < range_lo.size(); ++m) {
            if (range_lo[m] <= p && p <= range_hi[m]) state[range_leaf[m]] = 1;
        }
        if (eval(state)) count += std::min(cuts[k + 1], i1 + 1) - p;
    }
    return count;
}

std::int64_t RowSweep::count_centers(const GridSpec& g, const TileRange& range) const {
    TileRange r = range;
    if (bounds_) {
        if (!(bounds_->xmin <= bounds_->xmax)) return 0;
        const TileRange b = tiles_covering(g, *bounds_);
        r.i0 = std::max(r.i0, b.i0 - 1);
        r.i1 = std::min(r.i1, b.i1 + 1);
        r.j0 = std::max(r.j0, b.j0 - 1);
        r.j1 = std::min(r.j1, b.j1 + 1);
    }
    std::int64_t total = 0;
    for (std::int64_t j = r.j0; j <= r.j1; ++j) total += count_row(g, j, r.i0, r.i1);
    return total;
}

std::int64_t count_tile_centers(const Region& r, const GridSpec& g, const TileRange& range) {
    return RowSweep(r).count_centers(g, range);
}

QuadratureArea slice_area(const Region& r, int strips) {
    if (strips < 2) throw std::invalid_argument("slice_area: need at least two strips");
    const auto box = r.bounds();
    if (!box) throw std::invalid_argument("slice_area: region must be bounded");
    if (!(box->ymin < box->ymax)) return {};
    const RowSweep sweep(r);
    const auto midpoint = [&](int n) {
        const double h = (box->ymax - box->ymin) / n;
        double sum = 0.0;
        double comp = 0.0;  // Kahan
        for (int k = 0; k < n; ++k) {
            const double term = sweep.slice_length(box->ymin + (k + 0.5) * h) - comp;
            const double t = sum + term;
            comp = (t - sum) - term;
            sum = t;
        }
        return sum * h;
    };
    const double fine = midpoint(strips);
    const double coarse = midpoint(strips / 2);
    return {fine, std::abs(fine - coarse)};
}

}  // namespace knnlab::geom
