#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "knnlab/bounds.hpp"
#include "knnlab/regions.hpp"

using namespace knnlab;
using namespace knnlab::bounds;
using std::numbers::pi;

TEST_CASE("model constants") {
    const ModelConstants m = model_constants(1.0, 1e4);
    CHECK(m.c_minus == doctest::Approx(0.135335283).epsilon(1e-9));
    CHECK(m.c_plus == doctest::Approx(21.74625462).epsilon(1e-9));
    CHECK(pi * m.r * m.r == doctest::Approx(m.c_minus * std::log(1e4)));
    CHECK(pi * m.R * m.R == doctest::Approx(m.c_plus * std::log(1e4)));
    CHECK(m.separation() == doctest::Approx(m.r / 5.0));
    CHECK(m.d == doctest::Approx(4.0 * std::sqrt(m.c_plus / pi)));
    CHECK(model_constants(1.0, 1e4, 100.0).d == 100.0);
    CHECK(model_constants(1e6, 1e4).c_minus / 1e6 == doctest::Approx(std::exp(-1.0)).epsilon(1e-5));
    CHECK_THROWS_AS(model_constants(0.0, 1e4), std::invalid_argument);
    CHECK_THROWS_AS(model_constants(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("full-empty bounds") {
    CHECK(full_empty_bound(1.0, 1.0, 1.0) == doctest::Approx(0.5));
    CHECK(full_empty_bound(3.0, 2.0, 0.0) == 1.0);
    CHECK(full_empty_bound(0.0, 0.0, 5.0) == 1.0);
    const double K = lune_area();
    CHECK(full_empty_bound(K, pi, 1.0) ==
          doctest::Approx((2 * pi + 3 * std::sqrt(3.0)) / (8 * pi + 3 * std::sqrt(3.0))));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.01, 5.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = u(rng), y = u(rng), k = u(rng), e = u(rng) * 0.1;
        CHECK(full_empty_bound(x + e, y, k) >= full_empty_bound(x, y, k));
        CHECK(full_empty_bound(x, y + e, k) <= full_empty_bound(x, y, k));
        CHECK(full_empty_bound(x, y, k + e) <= full_empty_bound(x, y, k));
    }

    CHECK(full_empty2_bound(1, 1, 1, 1, 1) == doctest::Approx(4.0 / 9.0));
    CHECK_THROWS_AS(full_empty2_bound(3, 1, 1, 1, 1), ConditionFailure);
    CHECK_THROWS_AS(full_empty2_bound(1, 3, 1, 1, 1), ConditionFailure);

    // center case integrand at |Y| = 0.6069: about n^-1.0001
    const auto p = xsmall_problem(false);
    CHECK(p.objective(0.6069) == doctest::Approx(-1.0003).epsilon(2e-4));
}

TEST_CASE("isoperimetric blow-up and y caps") {
    const double r = 0.7;
    CHECK(iso_blowup_lower(0.0, r, false) == doctest::Approx(pi * r * r));
    CHECK(iso_blowup_lower(pi * r * r, r, false) == doctest::Approx(3 * pi * r * r));
    CHECK(iso_blowup_lower(0.0, r, true) == doctest::Approx(pi * r * r / 2));
    CHECK(iso_blowup_lower(2.0, r, true) == doctest::Approx(iso_blowup_lower(2.0, r, false) / 2));
    CHECK_THROWS_AS(iso_blowup_lower(-1.0, r, false), std::invalid_argument);

    CHECK(solve_y_cap(true) == doctest::Approx(pi * std::pow(1 + std::sqrt(3.0), 2) / 4));
    CHECK(solve_y_cap(true, 1.0 - 1e-4) == doctest::Approx(5.861).epsilon(1e-4));
    CHECK(solve_y_cap(false) == doctest::Approx(18.3105).epsilon(1e-5));
    CHECK(solve_y_cap(true, 0.0) == 0.0);
    for (const bool b : {false, true}) {
        const double y = solve_y_cap(b, 0.9);
        CHECK(y == doctest::Approx(iso_blowup_lower(y, 0.9, b)));
    }
}

TEST_CASE("certificates") {
    const Certificate c = make_certificate("x", 0.1, 2.0, 1.0, ">");
    CHECK(c.passed);
    CHECK(c.recheck() == c.passed);
    CHECK_FALSE(make_certificate("x", 0.1, 1.0, 1.0, ">").passed);
    CHECK_FALSE(make_certificate("x", 0.1, 1.0 - 1e-13, 1.0, "<", nullptr, 1e-12).passed);
    CHECK(make_certificate("x", 0, 1.02928, 1.0293, "quoted", nullptr, 0, 4).passed);
    CHECK(make_certificate("x", 0, -0.34395, -0.3439, "quoted", nullptr, 0, 4).passed);
    CHECK_FALSE(make_certificate("x", 0, -0.3441, -0.3439, "quoted", nullptr, 0, 4).passed);
    CHECK(make_certificate("x", 0, -1.1884, -1.185, "within", nullptr, 5e-3).passed);
    const auto j = c.to_json();
    for (const char* key : {"name", "step", "computed", "target", "comparator", "witness", "passed", "runtime_ms",
                            "config_hash"}) {
        CHECK(j.contains(key));
    }
    CHECK(c.config_hash == make_certificate("x", 0.1, 5.0, 1.0, ">").config_hash);
    CHECK(c.config_hash != make_certificate("x", 0.2, 2.0, 1.0, ">").config_hash);
}

TEST_CASE("crossing ratio") {
    const auto r = crossing_ratio(0.1300, 0.0958, 0.3411, 0.3564);
    CHECK(r.ratio.computed < 0.2446);
    CHECK(r.ratio.passed);
    CHECK(-1.0 / std::log(0.2446) == doctest::Approx(0.71016).epsilon(1e-5));
    CHECK(r.threshold.computed <= 0.7102);
    const auto z = crossing_ratio(0.0, 0.0, 0.3, 0.3);
    CHECK(z.ratio.computed == 0.0);
    CHECK(z.threshold.computed == 0.0);
}

TEST_CASE("exponent maximization") {
    SUBCASE("known maximum") {
        ExponentProblem p{"parabola", [](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0, false, {}};
        const Maximum m = maximize_exponent(p, 1000);
        CHECK(m.argmax == doctest::Approx(0.3).epsilon(1e-8));
        CHECK(m.value == doctest::Approx(0.0));
    }
    SUBCASE("endpoint maximum") {
        ExponentProblem p{"line", [](double x) { return x; }, 0.0, 2.0, false, {}};
        CHECK(maximize_exponent(p, 1000).argmax == 2.0);
    }
    SUBCASE("objectives dominate random samples") {
        std::mt19937_64 rng(9);
        for (const auto& p : {anotdense_problem(false), anotdense_problem(true), xsmall_problem(false),
                              xsmall_problem(true)}) {
            const Maximum m = maximize_exponent(p, 100000);
            std::uniform_real_distribution<double> u(p.lo, p.hi);
            for (int i = 0; i < 1000; ++i) {
                const double x = u(rng);
                if (x > 0.0) CHECK(m.value >= p.objective(x));
            }
        }
    }
    SUBCASE("quoted values") {
        const Maximum a = maximize_exponent(anotdense_problem(false));
        CHECK(a.value == doctest::Approx(-1.18845).epsilon(1e-5));
        CHECK(a.argmax == doctest::Approx(lune_area() + pi / 1000));
        CHECK(maximize_exponent(anotdense_problem(true)).value == doctest::Approx(-0.815571).epsilon(1e-5));
        const Maximum x = maximize_exponent(xsmall_problem(false));
        CHECK(x.argmax == doctest::Approx(0.607348).epsilon(1e-5));
        CHECK(x.value == doctest::Approx(-1.000277).epsilon(1e-6));
        const Maximum xb = maximize_exponent(xsmall_problem(true));
        CHECK(xb.argmax == doctest::Approx(0.601550).epsilon(1e-5));
        CHECK(xb.value == doctest::Approx(-0.593191).epsilon(1e-5));
    }
}

TEST_CASE("solve_mu") {
    CHECK(solve_mu(1, 0, 1, 2) == doctest::Approx(4.0).epsilon(1e-10));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int i = 0; i < 500; ++i) {
        const double a1 = u(rng);
        const double a3 = a1 * std::uniform_real_distribution<double>(1.0, 1.99)(rng);
        const double a2 = u(rng), a4 = u(rng);
        const double mu = solve_mu(a1, a2, a3, a4);
        const double sum = a1 + a2 + a3 + a4;
        CHECK(std::abs(mu * a2 + std::sqrt(4 * mu * a1 * a3) - sum) <= 1e-8 * sum);
        CHECK(solve_mu(3 * a1, 3 * a2, 3 * a3, 3 * a4) == doctest::Approx(mu).epsilon(1e-9));
        CHECK(solve_mu(a3, a2, a1, a4) == doctest::Approx(mu).epsilon(1e-12));
    }
    CHECK_THROWS_AS(solve_mu(1, 1, 2.5, 1), ConditionFailure);
    CHECK_THROWS_AS(solve_mu(0, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("connectivity areas") {
    const ConnectAreas a = connect_areas(50000);
    CHECK(a.A_lambda == doctest::Approx(0.3372033).epsilon(1e-6));
    CHECK(a.B_lambda == doctest::Approx(0.1631987).epsilon(1e-6));
    CHECK(a.B_star == doctest::Approx(2.30475).epsilon(1e-5));
    CHECK(a.B_prime_cap_star == doctest::Approx(0.6515343).epsilon(1e-6));
    CHECK(a.B_prime == doctest::Approx(lune_area()).epsilon(1e-7));
    CHECK(geom::distance({0, 0}, a.beta) == doctest::Approx(kBetaRadius));
    CHECK(geom::distance({1, 0}, a.beta) == doctest::Approx(1.0));
    // the E3 ring bound
    CHECK(pi * (kBetaRadius * kBetaRadius - 1) == doctest::Approx(0.5007).epsilon(1e-3));
}

TEST_CASE("h points") {
    const double s = 0.001;
    for (const geom::Point x : {geom::Point{0.4995, 0.1885}, geom::Point{0.45, 0.25}, geom::Point{0.4995, 0.2885}}) {
        const auto [h1, h2] = h_points(x, s);
        CHECK(geom::distance(h1, {1, 0}) == doctest::Approx(1.0));
        CHECK(geom::distance(h2, {0, 0}) == doctest::Approx(1.0));
        CHECK(h1.y > 0.0);
        CHECK(geom::distance(h1, {0, 0}) <= 0.5 + 1e-12);
        CHECK(geom::distance(h2, {1, 0}) <= 0.5 + 1e-12);
    }
    CHECK(square_radii(AreaKind::LPlus, {0.4995, 0.1885}, s).feasible());
    CHECK(square_radii(AreaKind::HPlus, {0.4995, 0.2885}, s).feasible());
    // next to the axis a1 would need a radius above its distance to b1
    CHECK_FALSE(square_radii(AreaKind::LPlus, {0.4995, 0.0005}, s).feasible());
    CHECK_FALSE(square_radii(AreaKind::LPlus, {0.45, 0.25}, s).feasible());
}

TEST_CASE("candidate squares") {
    const double s = 0.01;
    const auto c1 = candidate_squares(AreaKind::LPlus, s);
    const auto c2 = candidate_squares(AreaKind::HMinus, s);
    CHECK_FALSE(c1.empty());
    CHECK_FALSE(c2.empty());
    const geom::GridSpec g{s, {0, 0}};
    // tiles touching the axis at a corner of S1 may sit one row down
    for (const auto& t : c1) CHECK(geom::tile_center(g, t).y > -s);
    for (const auto& t : c2) CHECK(geom::tile_center(g, t).y < 0.0);
    CHECK_THROWS_AS(candidate_squares(AreaKind::LPlus, 0.003), std::invalid_argument);
    CHECK_THROWS_AS(candidate_squares(AreaKind::LPlus, 0.0), std::invalid_argument);
}

TEST_CASE("grid refinement is monotone" * doctest::timeout(300)) {
    for (const auto k : {AreaKind::LPlus, AreaKind::LMinus, AreaKind::HPlus, AreaKind::HMinus}) {
        const double a = verify_area(k, 0.008).cert.computed;
        const double b = verify_area(k, 0.004).cert.computed;
        const double c = verify_area(k, 0.002).cert.computed;
        CAPTURE(area_name(k));
        if (k == AreaKind::LPlus || k == AreaKind::LMinus) {
            CHECK(a <= b);
            CHECK(b <= c);
        } else {
            CHECK(a >= b);
            CHECK(b >= c);
        }
    }
}

TEST_CASE("infeasible squares are skipped") {
    const auto v = verify_area(AreaKind::LPlus, 0.004);
    CHECK(v.infeasible > 0);
    CHECK(v.infeasible < v.candidates);
    CHECK(v.extremal.feasible());
    CHECK(v.extremal.center.y > 0.1);
    CHECK(v.cert.computed == doctest::Approx(0.333248).epsilon(1e-9));
}

TEST_CASE("verification is thread-count independent") {
    for (const auto k : {AreaKind::LPlus, AreaKind::HMinus}) {
        const auto one = verify_area(k, 0.01, 1).cert;
        const auto four = verify_area(k, 0.01, 4).cert;
        CHECK(one.computed == four.computed);
        CHECK(one.witness == four.witness);
    }
}
