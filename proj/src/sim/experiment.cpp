#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "knnlab/parallel.hpp"
#include "knnlab/sim.hpp"

namespace knnlab::sim {

int k_for(double c, double n) {
    if (!(c > 0.0) || !(n > 1.0)) throw std::invalid_argument("k_for: need c > 0 and n > 1");
    return static_cast<int>(std::ceil(c * std::log(n)));
}

TrialResult run_trial(double n, double c, ModelKind model, std::uint64_t seed) {
    TrialResult t;
    t.n = n;
    t.c = c;
    t.seed = seed;
    t.k = k_for(c, n);
    const PointSet ps = sample_poisson(n, seed);
    Model m{model, 0.0};
    if (model == ModelKind::Gilbert) m.radius = std::sqrt(c * std::log(n) / std::numbers::pi);
    const auto g = build_graph(ps, t.k, m);
    const auto comps = components(g);
    t.num_components = comps.count();
    t.connected = t.num_components <= 1;
    std::vector<double> diam = comps.diameter;
    std::sort(diam.begin(), diam.end(), std::greater<>());
    for (std::size_t i = 0; i < 2 && i < diam.size(); ++i) t.largest_two_diameters[i] = diam[i];
    std::vector<std::uint32_t> sizes = comps.size;
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    if (!sizes.empty()) t.smallest_component_size = sizes.back();
    if (sizes.size() > 1) t.second_largest_size = sizes[1];
    if (!t.connected) t.num_crossing_pairs = find_crossing_pairs(g, comps).pairs.size();
    return t;
}

WilsonInterval wilson95(std::size_t successes, std::size_t trials) {
    if (trials == 0) throw std::invalid_argument("wilson95: no trials");
    constexpr double z = 1.959963984540054;
    const double nt = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nt;
    const double denom = 1.0 + z * z / nt;
    const double centre = (p + z * z / (2.0 * nt)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nt + z * z / (4.0 * nt * nt)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<ConnectivityRow> estimate_connectivity(double n, const std::vector<double>& c_values,
                                                   std::size_t trials, std::uint64_t master_seed,
                                                   ModelKind model, int threads) {
    if (trials < 1) throw std::invalid_argument("estimate_connectivity: trials must be >= 1");
    const std::size_t m = c_values.size();
    std::vector<TrialResult> results(m * trials);
    parallel_for(results.size(), threads, [&](std::size_t u) {
        const std::size_t s = u / trials, t = u % trials;
        results[u] = run_trial(n, c_values[s], model, derive_seed(master_seed, s, t));
    });
    std::vector<ConnectivityRow> rows;
    for (std::size_t s = 0; s < m; ++s) {
        ConnectivityRow r;
        r.n = n;
        r.c = c_values[s];
        r.k = k_for(r.c, n);
        r.model = model;
        r.trials = trials;
        r.seed = master_seed;
        std::size_t connected = 0;
        double comps = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            const auto& tr = results[s * trials + t];
            connected += tr.connected ? 1 : 0;
            comps += static_cast<double>(tr.num_components);
            r.max_small_component = std::max(r.max_small_component, tr.second_largest_size);
            r.crossing_pairs_total += tr.num_crossing_pairs;
        }
        r.connected_frac = static_cast<double>(connected) / static_cast<double>(trials);
        r.wilson = wilson95(connected, trials);
        r.mean_components = comps / static_cast<double>(trials);
        rows.push_back(r);
    }
    return rows;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_header() {
    return "n,k,c,model,trials,connected_frac,wilson_lo,wilson_hi,mean_components,max_small_component,"
           "crossing_pairs_total,seed";
}

std::string csv_row(const ConnectivityRow& r) {
    std::string s;
    s += format_real(r.n) + ',' + std::to_string(r.k) + ',' + format_real(r.c) + ',' + model_name(r.model) + ',';
    s += std::to_string(r.trials) + ',' + format_real(r.connected_frac) + ',' + format_real(r.wilson.lo) + ',';
    s += format_real(r.wilson.hi) + ',' + format_real(r.mean_components) + ',' + std::to_string(r.max_small_component) + ',';
    s += std::to_string(r.crossing_pairs_total) + ',' + std::to_string(r.seed);
    return s;
}

}  // namespace knnlab::sim
