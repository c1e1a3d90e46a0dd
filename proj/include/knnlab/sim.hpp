#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "knnlab/bounds.hpp"
#include "knnlab/point.hpp"
#include "knnlab/regions.hpp"

namespace knnlab::sim {

using geom::Point;

// ---- seeds ----

std::uint64_t splitmix64_mix(std::uint64_t x);
// seed of item `index` in stream `stream`: mix(mix(master + G*(stream+1)) + G*(index+1)), G = 0x9E3779B97F4A7C15
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

// ---- point sets ----

struct SampleWindow {
    double side = 0.0;
    double n = 0.0;
};

struct PointSet {
    std::vector<Point> points;
    std::uint64_t seed = 0;
    SampleWindow window;
};

PointSet sample_poisson(double n, std::uint64_t seed);
// hand-built set; the window is the smallest square [0, side]^2 holding the points (side >= 1)
PointSet make_point_set(std::vector<Point> pts);

// magic "KNNPTS01", n (f64), seed (u64), count (u64), then x,y pairs; all little-endian
void write_binary(std::ostream& os, const PointSet& ps);
PointSet read_binary(std::istream& is);
void write_csv(std::ostream& os, const PointSet& ps);

// ---- graphs ----

enum class ModelKind { Directed, Mutual, Either, Gilbert };

struct Model {
    ModelKind kind = ModelKind::Mutual;
    double radius = 0.0;  // gilbert only
};

std::string model_name(ModelKind k);
// "directed", "mutual", "either", "gilbert"; throws std::invalid_argument otherwise
ModelKind parse_model(const std::string& s);

using Edge = std::pair<std::uint32_t, std::uint32_t>;

// out-neighbour lists, nearest first, ties by lower index
using NeighborLists = std::vector<std::vector<std::uint32_t>>;

NeighborLists knn_lists(const std::vector<Point>& pts, int k);
NeighborLists knn_lists_brute(const std::vector<Point>& pts, int k);

struct NearestNeighborGraph {
    std::vector<Point> points;
    int k = 0;
    Model model;
    NeighborLists out;  // empty for gilbert
    // directed: arcs (i, j) with j in out[i]; otherwise undirected pairs with i < j. Sorted, unique.
    std::vector<Edge> edges;
    // undirected adjacency (for directed: the underlying graph), sorted
    std::vector<std::vector<std::uint32_t>> adj;

    bool has_edge(std::uint32_t i, std::uint32_t j) const;  // undirected view
    double kth_radius(std::uint32_t i) const;               // distance to the last out-neighbour
};

// lists may be longer than k; the first k entries are used
NearestNeighborGraph graph_from_lists(const std::vector<Point>& pts, const NeighborLists& lists, int k, Model model);
NearestNeighborGraph build_graph(const PointSet& ps, int k, Model model);
NearestNeighborGraph brute_force_graph(const PointSet& ps, int k, Model model);
// replace the edge set, for negative controls
NearestNeighborGraph with_edges(const NearestNeighborGraph& g, std::vector<Edge> edges);

// ---- components ----

struct ComponentDecomposition {
    std::vector<std::uint32_t> id;  // per point; ids ordered by each component's lexicographically least point
    std::vector<std::uint32_t> size;
    std::vector<double> diameter;

    std::size_t count() const { return size.size(); }
    std::uint32_t largest() const;  // lowest id among those of maximal size
};

// components of the undirected view (weak components for directed)
ComponentDecomposition components(const NearestNeighborGraph& g);
double diameter(const std::vector<Point>& pts);

// ---- crossings ----

struct CrossingPair {
    std::uint32_t a1 = 0;
    std::uint32_t a2 = 0;
    std::uint32_t b1 = 0;
    std::uint32_t b2 = 0;
    std::optional<regions::CrossingFrame> frame;
};

struct CrossingReport {
    std::vector<CrossingPair> pairs;
};

CrossingReport find_crossing_pairs(const NearestNeighborGraph& g, const ComponentDecomposition& comps);
CrossingReport find_crossing_pairs_brute(const NearestNeighborGraph& g, const ComponentDecomposition& comps);

// ---- lemma checks ----

struct HalfDiskViolation {
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::uint32_t z = 0;  // strictly inside D_x(|xy|/2) but not joined to x
};

std::vector<HalfDiskViolation> check_half_disk_lemma(const NearestNeighborGraph& g);

enum class IUOutcome { Holds, Violated, Skipped };

// skipped when the two disk conditions fail; indices sharing a point count as holding
IUOutcome check_intersect_union_lemma(const NearestNeighborGraph& g, std::uint32_t w, std::uint32_t x,
                                      std::uint32_t y, std::uint32_t z);

struct IUSummary {
    std::size_t sampled = 0;
    std::size_t tested = 0;  // preconditions held
    std::size_t violations = 0;
};

// w uniform, x and y from the out-list of w, z from the out-lists of w and x.
// On sampled sets the disk conditions hold only in degenerate position, so `tested` is normally 0.
IUSummary sample_intersect_union(const NearestNeighborGraph& g, std::size_t samples, std::uint64_t seed);

struct FarApartReport {
    std::size_t pairs_examined = 0;  // point/edge pairs in different components within |b1b2| of the edge
    double min_ratio = 1.0;          // capped at 1
    std::size_t violations = 0;      // ratio < 1/(4 sqrt 6)
};

FarApartReport check_far_apart(const NearestNeighborGraph& g, const ComponentDecomposition& comps);

struct GoodnessReport {
    std::array<bool, 6> bad{};  // condition i+1 holds (configuration bad)
    std::array<std::string, 6> witness;
    bool good() const;
};

GoodnessReport check_goodness(const NearestNeighborGraph& g, const ComponentDecomposition& comps,
                              const CrossingReport& crossings, const bounds::ModelConstants& consts);

// empty half-disc of radius rho at point i lying inside the window
bool has_empty_half_disc(const NearestNeighborGraph& g, std::uint32_t i, double rho, double side);

struct ComponentSetupWitness {
    std::uint32_t component = 0;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::uint32_t xl = 0;
    std::uint32_t xr = 0;
    std::size_t count_A = 0;
    std::size_t count_B = 0;
    std::size_t count_C = 0;
};

// one witness per component of diameter <= small_diameter (none when the graph is connected)
std::vector<ComponentSetupWitness> find_component_setup(const NearestNeighborGraph& g,
                                                        const ComponentDecomposition& comps,
                                                        double small_diameter, double side);

// ---- experiments ----

struct TrialResult {
    double n = 0.0;
    int k = 0;
    double c = 0.0;
    std::uint64_t seed = 0;
    bool connected = false;
    std::size_t num_components = 0;
    std::array<double, 2> largest_two_diameters{};
    std::size_t num_crossing_pairs = 0;
    std::size_t smallest_component_size = 0;
    std::size_t second_largest_size = 0;
};

// k = ceil(c log n); gilbert uses pi R^2 = c log n
int k_for(double c, double n);
TrialResult run_trial(double n, double c, ModelKind model, std::uint64_t seed);

struct WilsonInterval {
    double lo = 0.0;
    double hi = 0.0;
};

WilsonInterval wilson95(std::size_t successes, std::size_t trials);

struct ConnectivityRow {
    double n = 0.0;
    int k = 0;
    double c = 0.0;
    ModelKind model = ModelKind::Mutual;
    std::size_t trials = 0;
    double connected_frac = 0.0;
    WilsonInterval wilson;
    double mean_components = 0.0;
    std::size_t max_small_component = 0;  // largest non-giant component over all trials
    std::size_t crossing_pairs_total = 0;
    std::uint64_t seed = 0;               // master seed
};

// trial t at sweep index s uses derive_seed(master, s, t)
std::vector<ConnectivityRow> estimate_connectivity(double n, const std::vector<double>& c_values,
                                                   std::size_t trials, std::uint64_t master_seed,
                                                   ModelKind model = ModelKind::Mutual, int threads = 0);

std::string csv_header();
std::string csv_row(const ConnectivityRow& r);
// %.17g
std::string format_real(double v);

}  // namespace knnlab::sim
