#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "knnlab/bounds.hpp"
#include "knnlab/parallel.hpp"
#include "knnlab/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace knnlab;

namespace {

constexpr const char* kVersion = "knnlab 0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Global {
    int threads = 0;
    std::uint64_t seed = 1;
    bool no_timing = false;
    std::string out = ".";
};

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

class Manifest {
public:
    Manifest(const Global& g, std::string command, json config)
        : g_(g), command_(std::move(command)), config_(std::move(config)), start_(g.no_timing ? "" : utc_now()) {}

    void output(const fs::path& p) { outputs_.push_back(p); }

    void write() const {
        json digests = json::array();
        for (const auto& p : outputs_) digests.push_back({{"path", p.generic_string()}, {"fnv1a", bounds::fnv1a_hex(slurp(p))}});
        json m = {{"command", command_}, {"config", config_},   {"seed", g_.seed},
                  {"version", kVersion}, {"outputs", digests}};
        m["started"] = g_.no_timing ? json(nullptr) : json(start_);
        m["finished"] = g_.no_timing ? json(nullptr) : json(utc_now());
        write_file(fs::path(g_.out) / (command_ + "_manifest.json"), m.dump(2) + "\n");
    }

private:
    const Global& g_;
    std::string command_;
    json config_;
    std::string start_;
    std::vector<fs::path> outputs_;
};

json global_config(const Global& g) {
    return {{"threads", g.threads}, {"seed", g.seed}, {"no_timing", g.no_timing}, {"out", g.out}};
}

std::string fmt(double v) { return sim::format_real(v); }

std::string step_label(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", s);
    return buf;
}

// ---- constants ----

struct ConstantsOpts {
    double c = 0.0;
    double n = 1e6;
    double c_prime = 0.0;
};

int cmd_constants(const Global& g, const ConstantsOpts& o) {
    const auto mc = bounds::model_constants(o.c, o.n, o.c_prime);
    const auto suite = bounds::threshold_suite(o.c);
    std::printf("c        %s\nn        %s\nc_minus  %s\nc_plus   %s\nr        %s\nR        %s\nd        %s\n",
                fmt(mc.c).c_str(), fmt(mc.n).c_str(), fmt(mc.c_minus).c_str(), fmt(mc.c_plus).c_str(),
                fmt(mc.r).c_str(), fmt(mc.R).c_str(), fmt(mc.d).c_str());
    std::printf("\n%-28s %-22s %-7s %-10s %s\n", "check", "computed", "cmp", "target", "result");
    json certs = json::array();
    for (auto cert : suite) {
        if (g.no_timing) cert.runtime_ms = 0.0;
        std::printf("%-28s %-22s %-7s %-10s %s\n", cert.name.c_str(), fmt(cert.computed).c_str(),
                    cert.comparator.c_str(), fmt(cert.target).c_str(), cert.passed ? "PASS" : "FAIL");
        certs.push_back(cert.to_json());
    }
    const json out = {{"constants",
                       {{"c", mc.c}, {"n", mc.n}, {"c_minus", mc.c_minus}, {"c_plus", mc.c_plus}, {"r", mc.r},
                        {"R", mc.R}, {"c_prime", mc.c_prime}, {"d", mc.d}}},
                      {"thresholds", certs}};
    const fs::path path = fs::path(g.out) / "constants.json";
    write_file(path, out.dump(2) + "\n");
    Manifest m(g, "constants", {{"global", global_config(g)}, {"c", o.c}, {"n", o.n}, {"c_prime", o.c_prime}});
    m.output(path);
    m.write();
    return 0;
}

// ---- verify ----

struct VerifyOpts {
    double step = 0.001;
    std::string which = "all";
    std::string hplus_reading = "definition";
};

int cmd_verify(const Global& g, const VerifyOpts& o) {
    if (!(o.step > 0.0 && o.step <= 0.01)) throw UsageError("--step must lie in (0, 0.01]");
    const auto reading =
        o.hplus_reading == "outside-both" ? bounds::HPlusReading::OutsideBoth : bounds::HPlusReading::Definition;
    const bool all = o.which == "all";
    const bool need_all = all || o.which == "ratio";
    Manifest m(g, "verify",
               {{"global", global_config(g)}, {"step", o.step}, {"which", o.which}, {"hplus_reading", o.hplus_reading}});
    bool ok = true;
    auto emit = [&](bounds::Certificate c, bool write) {
        if (g.no_timing) c.runtime_ms = 0.0;
        std::printf("%-22s %-22s %s %-8s %s\n", c.name.c_str(), fmt(c.computed).c_str(), c.comparator.c_str(),
                    fmt(c.target).c_str(), c.passed ? "PASS" : "FAIL");
        if (!write) return;
        ok = ok && c.passed;
        const fs::path path = fs::path(g.out) / "certificates" / (c.name + "_" + step_label(o.step) + ".json");
        write_file(path, c.to_json().dump(2) + "\n");
        m.output(path);
    };
    const std::pair<const char*, bounds::AreaKind> kinds[] = {{"lplus", bounds::AreaKind::LPlus},
                                                              {"lminus", bounds::AreaKind::LMinus},
                                                              {"hplus", bounds::AreaKind::HPlus},
                                                              {"hminus", bounds::AreaKind::HMinus}};
    double area[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        if (!need_all && o.which != kinds[i].first) continue;
        const auto r = kinds[i].second == bounds::AreaKind::HPlus ? bounds::verify_area(kinds[i].second, o.step, g.threads, reading)
                                                                  : bounds::verify_area(kinds[i].second, o.step, g.threads);
        area[i] = r.cert.computed;
        emit(r.cert, all || o.which == kinds[i].first);
    }
    if (need_all) {
        auto rr = bounds::crossing_ratio(area[2], area[3], area[0], area[1], o.step);
        rr.ratio.witness["c_threshold"] = rr.threshold.computed;
        rr.ratio.witness["c_threshold_target"] = rr.threshold.target;
        emit(rr.threshold, false);
        emit(rr.ratio, true);
    }
    m.write();
    return ok ? 0 : 1;
}

// ---- simulate ----

struct SimulateOpts {
    double n = 1e4;
    std::vector<double> c;
    double c_min = 0.0, c_max = 0.0, c_step = 0.0;
    std::size_t trials = 100;
    std::string model = "mutual";
    std::string csv;
};

std::vector<double> c_grid(const SimulateOpts& o) {
    if (!o.c.empty()) return o.c;
    if (!(o.c_step > 0.0) || !(o.c_min > 0.0) || o.c_max < o.c_min)
        throw UsageError("give --c, or --c-min/--c-max/--c-step with 0 < c-min <= c-max and c-step > 0");
    std::vector<double> cs;
    for (std::size_t i = 0;; ++i) {
        const double v = o.c_min + static_cast<double>(i) * o.c_step;
        if (v > o.c_max + 1e-9 * o.c_step) break;
        cs.push_back(v);
    }
    return cs;
}

int cmd_simulate(const Global& g, const SimulateOpts& o) {
    if (o.trials < 1) throw UsageError("--trials must be >= 1");
    if (!(o.n > 1.0)) throw UsageError("--n must exceed 1");
    sim::ModelKind model;
    try {
        model = sim::parse_model(o.model);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto cs = c_grid(o);
    const auto rows = sim::estimate_connectivity(o.n, cs, o.trials, g.seed, model, g.threads);
    std::string text = sim::csv_header() + "\n";
    for (const auto& r : rows) text += sim::csv_row(r) + "\n";
    std::fputs(text.c_str(), stdout);
    const fs::path path = o.csv.empty() ? fs::path(g.out) / "simulate.csv" : fs::path(o.csv);
    write_file(path, text);
    Manifest m(g, "simulate",
               {{"global", global_config(g)}, {"n", o.n}, {"c", cs}, {"trials", o.trials}, {"model", o.model}});
    m.output(path);
    m.write();
    return 0;
}

// ---- check ----

struct CheckOpts {
    double n = 1e3;
    double c = 1.0;
    std::size_t trials = 100;
    std::size_t iu_samples = 200;
    bool inject_bug = false;
};

// drop one edge xz where x also keeps an edge more than twice as long, so the half-disk check must fire
sim::NearestNeighborGraph corrupt(const sim::NearestNeighborGraph& g) {
    for (std::uint32_t x = 0; x < g.adj.size(); ++x) {
        double near = INFINITY, far = 0.0;
        std::uint32_t z = 0;
        for (auto j : g.adj[x]) {
            const double d = geom::distance(g.points[x], g.points[j]);
            if (d < near) near = d, z = j;
            far = std::max(far, d);
        }
        if (far > 2.0 * near) {
            std::vector<sim::Edge> kept;
            const sim::Edge drop{std::min(x, z), std::max(x, z)};
            for (const auto& e : g.edges)
                if (e != drop) kept.push_back(e);
            return sim::with_edges(g, std::move(kept));
        }
    }
    throw std::runtime_error("inject-bug: no edge suitable for corruption");
}

struct CheckTrial {
    std::size_t half_disk = 0;
    sim::IUSummary iu;
    sim::FarApartReport far;
    std::size_t components = 0;
    std::size_t crossings = 0;
    std::array<bool, 6> bad{};
    bool good = false;
};

int cmd_check(const Global& g, const CheckOpts& o) {
    if (o.trials < 1) throw UsageError("--trials must be >= 1");
    if (!(o.n > 1.0) || !(o.c > 0.0)) throw UsageError("need --n > 1 and --c > 0");
    const int k = sim::k_for(o.c, o.n);
    const auto consts = bounds::model_constants(o.c, o.n);
    std::vector<CheckTrial> res(o.trials);
    parallel_for(o.trials, g.threads, [&](std::size_t t) {
        const auto seed = sim::derive_seed(g.seed, 0, t);
        const auto ps = sim::sample_poisson(o.n, seed);
        auto gr = sim::build_graph(ps, k, {sim::ModelKind::Mutual, 0.0});
        if (o.inject_bug && t == 0) gr = corrupt(gr);
        const auto comps = sim::components(gr);
        const auto cr = sim::find_crossing_pairs(gr, comps);
        const auto gd = sim::check_goodness(gr, comps, cr, consts);
        auto& r = res[t];
        r.half_disk = sim::check_half_disk_lemma(gr).size();
        r.iu = sim::sample_intersect_union(gr, o.iu_samples, sim::derive_seed(g.seed, 1, t));
        r.far = sim::check_far_apart(gr, comps);
        r.components = comps.count();
        r.crossings = cr.pairs.size();
        r.bad = gd.bad;
        r.good = gd.good();
    });

    std::size_t hd = 0, iu_tested = 0, iu_viol = 0, far_ex = 0, far_viol = 0, good = 0, connected = 0, crossings = 0;
    double far_min = 1.0;
    std::array<std::size_t, 6> bad_counts{};
    for (const auto& r : res) {
        hd += r.half_disk;
        iu_tested += r.iu.tested;
        iu_viol += r.iu.violations;
        far_ex += r.far.pairs_examined;
        far_viol += r.far.violations;
        far_min = std::min(far_min, r.far.min_ratio);
        good += r.good ? 1 : 0;
        connected += r.components <= 1 ? 1 : 0;
        crossings += r.crossings;
        for (int i = 0; i < 6; ++i) bad_counts[i] += r.bad[i] ? 1 : 0;
    }
    const auto w = sim::wilson95(good, o.trials);
    const std::size_t violations = hd + iu_viol + far_viol;
    const json report = {
        {"n", o.n},
        {"c", o.c},
        {"k", k},
        {"trials", o.trials},
        {"seed", g.seed},
        {"inject_bug", o.inject_bug},
        {"half_disk", {{"violations", hd}}},
        {"intersect_union", {{"sampled", o.iu_samples * o.trials}, {"tested", iu_tested}, {"violations", iu_viol}}},
        {"far_apart", {{"pairs_examined", far_ex}, {"min_ratio", far_min}, {"violations", far_viol}}},
        {"goodness",
         {{"good", good}, {"fraction", static_cast<double>(good) / static_cast<double>(o.trials)},
          {"wilson_lo", w.lo}, {"wilson_hi", w.hi}, {"bad_condition_counts", bad_counts}}},
        {"connected", connected},
        {"crossing_pairs_total", crossings},
        {"deterministic_violations", violations},
    };
    const std::string text = report.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    const fs::path path = fs::path(g.out) / "check.json";
    write_file(path, text);
    Manifest m(g, "check",
               {{"global", global_config(g)}, {"n", o.n}, {"c", o.c}, {"trials", o.trials},
                {"iu_samples", o.iu_samples}, {"inject_bug", o.inject_bug}});
    m.output(path);
    m.write();
    return violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mutual k-NN graph simulations and numerical bound verification"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "key=value config file; [subcommand] sections hold subcommand keys");
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    g.threads = default_threads();
    app.add_option("--threads", g.threads, "worker threads (default: KNNLAB_THREADS or hardware)")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "master seed");
    app.add_flag("--no-timing", g.no_timing, "zero runtimes and omit timestamps");
    app.add_option("--out", g.out, "output directory");

    ConstantsOpts co;
    auto* constants = app.add_subcommand("constants", "model constants and closed-form thresholds");
    constants->add_option("--c", co.c, "connectivity constant")->required();
    constants->add_option("--n", co.n, "number of expected points");
    constants->add_option("--c-prime", co.c_prime, "extra term in d");

    VerifyOpts vo;
    auto* verify = app.add_subcommand("verify", "grid verification of the crossing-pair areas");
    verify->add_option("--step", vo.step, "grid step, in (0, 0.01]");
    verify->add_option("--which", vo.which)->check(CLI::IsMember({"lplus", "lminus", "hplus", "hminus", "ratio", "all"}));
    verify->add_option("--hplus-reading", vo.hplus_reading)->check(CLI::IsMember({"definition", "outside-both"}));

    SimulateOpts so;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo connectivity estimates, CSV out");
    simulate->add_option("--n", so.n, "expected number of points");
    auto* c_opt = simulate->add_option("--c", so.c, "one or more values of c");
    simulate->add_option("--c-min", so.c_min)->excludes(c_opt);
    simulate->add_option("--c-max", so.c_max)->excludes(c_opt);
    simulate->add_option("--c-step", so.c_step)->excludes(c_opt);
    simulate->add_option("--trials", so.trials);
    simulate->add_option("--model", so.model, "directed|mutual|either|gilbert");
    simulate->add_option("--csv", so.csv, "CSV path (default <out>/simulate.csv)");

    CheckOpts ko;
    auto* check = app.add_subcommand("check", "lemma checks and goodness over sampled graphs");
    check->add_option("--n", ko.n);
    check->add_option("--c", ko.c);
    check->add_option("--trials", ko.trials);
    check->add_option("--iu-samples", ko.iu_samples, "intersect-union quadruples per trial");
    check->add_flag("--inject-bug", ko.inject_bug, "corrupt the first graph (negative control)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*constants) return cmd_constants(g, co);
        if (*verify) return cmd_verify(g, vo);
        if (*simulate) return cmd_simulate(g, so);
        if (*check) return cmd_check(g, ko);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
