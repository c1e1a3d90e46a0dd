#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

#include "knnlab/sim.hpp"

namespace knnlab::sim {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr char kMagic[8] = {'K', 'N', 'N', 'P', 'T', 'S', '0', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("point set: truncated input");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

// uniform in [0, 1) from the top 53 bits
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::uint64_t splitmix64_mix(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix64_mix(splitmix64_mix(master + kGolden * (stream + 1)) + kGolden * (index + 1));
}

PointSet sample_poisson(double n, std::uint64_t seed) {
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("sample_poisson: n must be positive");
    PointSet ps;
    ps.seed = seed;
    ps.window = {std::sqrt(n), n};
    std::mt19937_64 rng(seed);
    std::poisson_distribution<long long> count(n);
    const auto m = static_cast<std::size_t>(count(rng));
    ps.points.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = unit(rng) * ps.window.side;
        const double y = unit(rng) * ps.window.side;
        ps.points.push_back({x, y});
    }
    return ps;
}

PointSet make_point_set(std::vector<Point> pts) {
    double side = 1.0;
    for (const Point& p : pts) {
        if (!is_finite(p) || p.x < 0.0 || p.y < 0.0) throw std::invalid_argument("make_point_set: coordinates must be finite and >= 0");
        side = std::max({side, p.x, p.y});
    }
    PointSet ps;
    ps.points = std::move(pts);
    ps.window = {side, side * side};
    return ps;
}

void write_binary(std::ostream& os, const PointSet& ps) {
    os.write(kMagic, 8);
    put_f64(os, ps.window.n);
    put_u64(os, ps.seed);
    put_u64(os, ps.points.size());
    for (const Point& p : ps.points) {
        put_f64(os, p.x);
        put_f64(os, p.y);
    }
}

PointSet read_binary(std::istream& is) {
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("point set: bad magic");
    PointSet ps;
    ps.window.n = get_f64(is);
    ps.window.side = std::sqrt(ps.window.n);
    ps.seed = get_u64(is);
    const std::uint64_t m = get_u64(is);
    for (std::uint64_t i = 0; i < m; ++i) {
        const double x = get_f64(is);
        const double y = get_f64(is);
        ps.points.push_back({x, y});
    }
    return ps;
}

void write_csv(std::ostream& os, const PointSet& ps) {
    os << "index,x,y\n";
    for (std::size_t i = 0; i < ps.points.size(); ++i) {
        os << i << ',' << format_real(ps.points[i].x) << ',' << format_real(ps.points[i].y) << '\n';
    }
}

}  // namespace knnlab::sim
