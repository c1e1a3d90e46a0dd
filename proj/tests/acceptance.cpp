// Acceptance suite: one PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "knnlab/bounds.hpp"
#include "knnlab/parallel.hpp"
#include "knnlab/sim.hpp"

namespace fs = std::filesystem;
using namespace knnlab;
using geom::Point;

namespace {

struct Options {
    double grid_step = 0.001;
    double bracket_step = 0.004;
    std::string cli;
    std::vector<int> only;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct Line {
    bool pass = true;
    std::vector<std::string> notes;
    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        notes.push_back((ok ? "" : "!") + what);
    }
};

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const bounds::Certificate& find_cert(const std::vector<bounds::Certificate>& certs, const std::string& name) {
    for (const auto& c : certs)
        if (c.name == name) return c;
    throw std::runtime_error("missing certificate " + name);
}

std::string cert_note(const bounds::Certificate& c) {
    return c.name + "=" + num(c.computed) + " " + c.comparator + " " + num(c.target);
}

// ---- 1 and 2: grid areas ----

struct GridResults {
    std::map<bounds::AreaKind, bounds::AreaVerification> fine, coarse;
};

bool near_tile(Point w, const std::vector<Point>& quoted, double s) {
    for (auto q : quoted)
        if (std::abs(w.x - q.x) <= s * (1 + 1e-9) && std::abs(w.y - q.y) <= s * (1 + 1e-9)) return true;
    return false;
}

Line criterion_grid(const Options& o, GridResults& gr) {
    using bounds::AreaKind;
    const std::map<AreaKind, std::vector<Point>> quoted = {
        {AreaKind::LPlus, {{0.4995, 0.1895}, {0.5005, 0.1895}}},
        {AreaKind::LMinus, {{0.4995, -0.3825}, {0.5005, -0.3825}}},
        {AreaKind::HPlus, {{0.4995, 0.2885}}},
        {AreaKind::HMinus, {{0.4995, -0.4335}}},
    };
    Line line;
    for (const auto& [k, centers] : quoted) {
        gr.fine[k] = bounds::verify_area(k, o.grid_step, o.threads);
        gr.coarse[k] = bounds::verify_area(k, o.bracket_step, o.threads);
        const auto& f = gr.fine[k].cert;
        const auto& c = gr.coarse[k].cert;
        const Point w = gr.fine[k].extremal.center;
        line.require(f.passed, cert_note(f));
        line.require(near_tile(w, centers, o.grid_step),
                     std::string(bounds::area_name(k)) + " witness (" + num(w.x) + "," + num(w.y) + ")");
        const bool lower = k == AreaKind::LPlus || k == AreaKind::LMinus;
        const bool bracket = lower ? c.computed <= f.computed : c.computed >= f.computed;
        line.require(bracket, std::string(bounds::area_name(k)) + "@" + num(o.bracket_step) + "=" + num(c.computed));
    }
    return line;
}

Line criterion_ratio(const Options& o, const GridResults& gr) {
    using bounds::AreaKind;
    const auto v = [&](AreaKind k) { return gr.fine.at(k).cert.computed; };
    const auto rr = bounds::crossing_ratio(v(AreaKind::HPlus), v(AreaKind::HMinus), v(AreaKind::LPlus),
                                           v(AreaKind::LMinus), o.grid_step);
    Line line;
    line.require(rr.ratio.passed, cert_note(rr.ratio));
    line.require(rr.threshold.passed, cert_note(rr.threshold));
    return line;
}

// ---- 3 to 5: closed forms ----

Line criterion_certs(const std::vector<bounds::Certificate>& suite, const std::vector<std::string>& names) {
    Line line;
    for (const auto& n : names) {
        const auto& c = find_cert(suite, n);
        line.require(c.passed, cert_note(c));
    }
    return line;
}

// ---- 6: oracle equivalence ----

sim::PointSet random_instance(std::mt19937_64& rng, std::size_t n, int flavour) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> p;
    const double side = std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (flavour == 0) {
            p.push_back({u(rng) * side, u(rng) * side});
        } else if (flavour == 1) {
            // integer lattice, lots of ties and duplicates
            p.push_back({std::floor(u(rng) * 12.0), std::floor(u(rng) * 12.0)});
        } else {
            const double cx = std::floor(u(rng) * 5.0) * 6.0 + 1.0, cy = std::floor(u(rng) * 5.0) * 6.0 + 1.0;
            p.push_back({cx + 0.4 * u(rng), cy + 0.4 * u(rng)});
        }
    }
    return sim::make_point_set(p);
}

Line criterion_oracle(const Options& o) {
    constexpr std::size_t kInstances = 200;
    std::vector<std::uint8_t> ok(kInstances, 0);
    parallel_for(kInstances, o.threads, [&](std::size_t inst) {
        std::mt19937_64 rng(sim::derive_seed(o.seed, 6, inst));
        const std::size_t n = 2 + rng() % 1999;
        const int k = 1 + static_cast<int>(rng() % 50);
        const auto ps = random_instance(rng, n, static_cast<int>(inst % 3));
        const double radius = 0.3 + 2.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        bool same = true;
        for (auto kind : {sim::ModelKind::Directed, sim::ModelKind::Mutual, sim::ModelKind::Either, sim::ModelKind::Gilbert}) {
            const sim::Model m{kind, radius};
            const auto fast = sim::build_graph(ps, k, m);
            const auto slow = sim::brute_force_graph(ps, k, m);
            same = same && fast.out == slow.out && fast.edges == slow.edges;
        }
        ok[inst] = same;
    });
    const auto good = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
    Line line;
    line.require(good == kInstances, std::to_string(good) + "/" + std::to_string(kInstances) + " instances x 4 models identical");
    return line;
}

// ---- 7: lemma suites ----

Line criterion_lemmas(const Options& o) {
    constexpr std::size_t kSeeds = 100;
    constexpr double n = 1e3;
    const int k_lo = static_cast<int>(std::ceil(std::log(n)));
    const int k_hi = static_cast<int>(std::ceil(2.0 * std::log(n)));
    struct Tally {
        std::size_t graphs = 0, half_disk = 0, iu_tested = 0, iu_viol = 0, far_examined = 0, far_viol = 0;
        double far_min = 1.0;
    };
    std::vector<Tally> tallies(kSeeds);
    parallel_for(kSeeds, o.threads, [&](std::size_t s) {
        const auto ps = sim::sample_poisson(n, sim::derive_seed(o.seed, 7, s));
        const auto lists = sim::knn_lists(ps.points, k_hi);
        auto& t = tallies[s];
        for (int k = k_lo; k <= k_hi; ++k) {
            const auto g = sim::graph_from_lists(ps.points, lists, k, {sim::ModelKind::Mutual, 0.0});
            const auto comps = sim::components(g);
            const auto iu = sim::sample_intersect_union(g, 500, sim::derive_seed(o.seed, 70 + static_cast<std::uint64_t>(k), s));
            const auto far = sim::check_far_apart(g, comps);
            ++t.graphs;
            t.half_disk += sim::check_half_disk_lemma(g).size();
            t.iu_tested += iu.tested;
            t.iu_viol += iu.violations;
            t.far_examined += far.pairs_examined;
            t.far_viol += far.violations;
            t.far_min = std::min(t.far_min, far.min_ratio);
        }
    });
    Tally sum;
    for (const auto& t : tallies) {
        sum.graphs += t.graphs;
        sum.half_disk += t.half_disk;
        sum.iu_tested += t.iu_tested;
        sum.iu_viol += t.iu_viol;
        sum.far_examined += t.far_examined;
        sum.far_viol += t.far_viol;
        sum.far_min = std::min(sum.far_min, t.far_min);
    }
    Line line;
    line.notes.push_back(std::to_string(sum.graphs) + " graphs, k=" + std::to_string(k_lo) + ".." + std::to_string(k_hi));
    line.require(sum.half_disk == 0, "half-disk violations=" + std::to_string(sum.half_disk));
    line.require(sum.iu_viol == 0, "intersect-union violations=" + std::to_string(sum.iu_viol) +
                                       " (quadruples meeting the disk conditions: " + std::to_string(sum.iu_tested) + ")");
    line.require(sum.far_viol == 0, "far-apart violations=" + std::to_string(sum.far_viol) + " (pairs " +
                                        std::to_string(sum.far_examined) + ", min ratio " + num(sum.far_min) + ")");
    return line;
}

// ---- 8: statistical direction ----

Line criterion_statistics(const Options& o) {
    constexpr double n = 1e4;
    constexpr std::size_t trials = 200;
    const auto rows = sim::estimate_connectivity(n, {1.5, 0.3}, trials, o.seed, sim::ModelKind::Mutual, o.threads);
    Line line;
    line.require(rows[0].connected_frac >= 0.99, "c=1.5 connected " + num(rows[0].connected_frac));
    line.require(rows[1].connected_frac <= 0.05, "c=0.3 connected " + num(rows[1].connected_frac));

    // mutual edges at k are mutual at k+1, so components only merge as k grows
    const int k_hi = static_cast<int>(std::ceil(2.0 * std::log(n)));
    std::vector<std::uint8_t> mono(trials, 0);
    parallel_for(trials, o.threads, [&](std::size_t t) {
        const auto ps = sim::sample_poisson(n, sim::derive_seed(o.seed, 8, t));
        const auto lists = sim::knn_lists(ps.points, k_hi);
        std::size_t prev = ps.points.size() + 1;
        bool was_connected = false, ok = true;
        for (int k = 1; k <= k_hi; ++k) {
            const auto cnt = sim::components(sim::graph_from_lists(ps.points, lists, k, {sim::ModelKind::Mutual, 0.0})).count();
            ok = ok && cnt <= prev && (!was_connected || cnt <= 1);
            was_connected = cnt <= 1;
            prev = cnt;
        }
        mono[t] = ok;
    });
    const auto good = static_cast<std::size_t>(std::count(mono.begin(), mono.end(), 1));
    line.require(good == trials, "monotone in k (1.." + std::to_string(k_hi) + ") " + std::to_string(good) + "/" +
                                     std::to_string(trials));
    return line;
}

// ---- 9: reproducibility through the CLI ----

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& cmd) {
    const int st = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

Line criterion_reproducible(const Options& o) {
    Line line;
    if (o.cli.empty() || !fs::exists(o.cli)) {
        line.require(false, "CLI binary not found (pass --cli)");
        return line;
    }
    const fs::path root = fs::temp_directory_path() / ("knnlab_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    const std::string seed = std::to_string(o.seed);
    for (int t : {1, 4}) {
        const std::string dir = (root / ("T" + std::to_string(t))).string();
        const std::string common = "'" + o.cli + "' --no-timing --seed " + seed + " --threads " + std::to_string(t) + " --out '" + dir + "'";
        const int a = run(common + " simulate --n 2000 --c-min 0.5 --c-max 1.5 --c-step 0.25 --trials 40");
        const int b = run(common + " verify --step " + num(o.bracket_step) + " --which all");
        line.require(a == 0 && (b == 0 || b == 1), "T=" + std::to_string(t) + " runs exited " + std::to_string(a) + "," +
                                                       std::to_string(b));
    }
    std::vector<fs::path> files = {"simulate.csv"};
    for (const auto& e : fs::directory_iterator(root / "T1" / "certificates"))
        files.push_back(fs::path("certificates") / e.path().filename());
    std::sort(files.begin(), files.end());
    std::size_t same = 0;
    for (const auto& f : files) {
        const auto p1 = root / "T1" / f, p4 = root / "T4" / f;
        if (fs::exists(p4) && slurp(p1) == slurp(p4) && !slurp(p1).empty()) ++same;
    }
    line.require(files.size() == 6 && same == files.size(),
                 std::to_string(same) + "/" + std::to_string(files.size()) + " files byte-identical for T=1 vs T=4");
    fs::remove_all(root);
    return line;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance suite"};
    Options o;
    app.add_option("--grid-step", o.grid_step, "grid step for criteria 1-2");
    app.add_option("--bracket-step", o.bracket_step, "coarse step for the bracket and reproducibility checks");
    app.add_option("--cli", o.cli, "path to the knnlab binary (criterion 9)");
    app.add_option("--only", o.only, "run only these criteria");
    app.add_option("--seed", o.seed);
    app.add_option("--threads", o.threads);
    CLI11_PARSE(app, argc, argv);

    const auto wanted = [&](int c) { return o.only.empty() || std::find(o.only.begin(), o.only.end(), c) != o.only.end(); };
    bool all = true;
    auto report = [&](int id, const char* title, auto&& fn) {
        if (!wanted(id)) return;
        const auto t0 = std::chrono::steady_clock::now();
        Line line;
        try {
            line = fn();
        } catch (const std::exception& e) {
            line.require(false, std::string("exception: ") + e.what());
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string notes;
        for (const auto& n : line.notes) notes += (notes.empty() ? "" : "; ") + n;
        std::printf("criterion %d %s: %s  [%s] (%.1fs)\n", id, title, line.pass ? "PASS" : "FAIL", notes.c_str(), sec);
        std::fflush(stdout);
        all = all && line.pass;
    };

    GridResults grid;
    report(1, "grid areas", [&] { return criterion_grid(o, grid); });
    report(2, "crossing ratio", [&] {
        if (grid.fine.empty()) criterion_grid(o, grid);
        return criterion_ratio(o, grid);
    });
    std::vector<bounds::Certificate> suite;
    auto get_suite = [&]() -> const std::vector<bounds::Certificate>& {
        if (suite.empty()) suite = bounds::threshold_suite(bounds::kConnectThreshold);
        return suite;
    };
    report(3, "closed-form constants", [&] {
        return criterion_certs(get_suite(), {"simple_constant", "corner_exponent", "edge_exponent", "y_cap_boundary"});
    });
    report(4, "exponent maximizations", [&] {
        return criterion_certs(get_suite(), {"anotdense_interior", "anotdense_interior_argmax", "anotdense_boundary",
                                             "anotdense_boundary_argmax", "xsmall_interior", "xsmall_interior_argmax",
                                             "xsmall_boundary", "xsmall_boundary_argmax"});
    });
    report(5, "mu chain", [&] {
        return criterion_certs(get_suite(), {"mu", "c_log_mu", "b_star_area", "b_prime_cap_b_star_area"});
    });
    report(6, "oracle equivalence", [&] { return criterion_oracle(o); });
    report(7, "lemma suites", [&] { return criterion_lemmas(o); });
    report(8, "statistical direction", [&] { return criterion_statistics(o); });
    report(9, "reproducibility", [&] { return criterion_reproducible(o); });
    return all ? 0 : 1;
}
