#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "knnlab/point.hpp"
#include "knnlab/region.hpp"

namespace knnlab::bounds {

using geom::Point;

// thrown when a lemma's hypotheses fail for the given inputs
class ConditionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kLowerThreshold = 0.7209;    // directed-model lower bound used in the tiling lemmas
inline constexpr double kConnectThreshold = 0.9684;
inline constexpr double kBetaRadius = 1.0767;
inline constexpr double kSmallFraction = 0.309;
inline constexpr double kTileSlack = 1e-4;           // r = rho - sqrt2 s > (1 - 1e-4) rho

// pi/3 + sqrt3/2: area of D_b(1) minus D_a(1) for |ab| = 1
double lune_area();

struct ModelConstants {
    double c = 0.0;
    double c_minus = 0.0;
    double c_plus = 0.0;
    double n = 0.0;
    double r = 0.0;  // pi r^2 = c_minus log n
    double R = 0.0;  // pi R^2 = c_plus log n
    double c_prime = 0.0;
    double d = 0.0;

    double separation() const { return r / 5.0; }
};

ModelConstants model_constants(double c, double n, double c_prime = 0.0);

double full_empty_bound(double area_x, double area_y, double k);
// throws ConditionFailure unless area_x <= area_y + area_z and area_y <= area_x + area_z
double full_empty2_bound(double area_x, double area_y, double area_z, double m, double k);
double iso_blowup_lower(double area_y, double r, bool boundary);

struct Certificate {
    std::string name;
    double step = 0.0;  // grid step or tolerance
    double computed = 0.0;
    double target = 0.0;
    // ">" and "<" are strict (beyond guard); "quoted" matches at the quoted precision;
    // "within" means |computed - target| <= guard
    std::string comparator;
    nlohmann::json witness;
    bool passed = false;
    double runtime_ms = 0.0;
    std::string config_hash;
    int decimals = 0;  // only for "quoted"
    double guard = 0.0;

    // re-evaluate passed from the stored numbers
    bool recheck() const;
    nlohmann::json to_json() const;
};

Certificate make_certificate(std::string name, double step, double computed, double target,
                             std::string comparator, nlohmann::json witness = nullptr, double guard = 0.0,
                             int decimals = 0);

// computed lies in [target - half unit, target + one unit) of the last quoted decimal,
// so both rounded and truncated quotations match
bool matches_quoted(double computed, double target, int decimals);

std::string fnv1a_hex(const std::string& bytes);

// ---- grid verification of the crossing-pair areas ----

enum class AreaKind { LPlus, LMinus, HPlus, HMinus };

const char* area_name(AreaKind k);
double area_target(AreaKind k);

struct SquareCandidate {
    Point center;
    double s = 0.0;
    double sigma = 0.0;    // lower bound on the k-NN radius for any position in the square
    double rho_max = 0.0;  // upper bound on the same
    Point h1;
    Point h2;

    // sigma > rho_max: no admissible a_i lies in the square
    bool feasible() const { return sigma <= rho_max; }
};

// how the H+ bullet "outside of either E_i or D_b_i(1/2)" is read. Definition follows
// H_i = R_i minus (E_i cap D_b_i(1/2)); OutsideBoth drops tiles inside either one, which
// matches the quoted 0.1299 but is not an upper bound on |H_i|.
enum class HPlusReading { Definition, OutsideBoth };

// tiles that may contain a1 (L+, H+) or a2 (L-, H-)
std::vector<geom::TileId> candidate_squares(AreaKind k, double s);
SquareCandidate square_radii(AreaKind k, Point x, double s);
// the lowest locations of the two dense-region boundaries reachable from square center x
std::pair<Point, Point> h_points(Point x, double s);
// region whose tile centers are counted for candidate x
geom::Region counting_region(AreaKind k, Point x, double s, HPlusReading reading = HPlusReading::Definition);
std::int64_t count_for_candidate(AreaKind k, Point x, double s, HPlusReading reading = HPlusReading::Definition);

struct AreaVerification {
    Certificate cert;
    std::int64_t tiles = 0;
    std::size_t candidates = 0;
    std::size_t infeasible = 0;  // candidates skipped because no admissible a_i lies there
    SquareCandidate extremal;
};

AreaVerification verify_area(AreaKind k, double s, int threads = 0, HPlusReading reading = HPlusReading::Definition);
Certificate verify_L_plus(double s, int threads = 0);
Certificate verify_L_minus(double s, int threads = 0);
Certificate verify_H_plus(double s, int threads = 0);
Certificate verify_H_minus(double s, int threads = 0);

struct RatioResult {
    Certificate ratio;
    Certificate threshold;
};

// H bounds are upper bounds and L bounds are lower bounds
RatioResult crossing_ratio(double h_plus, double h_minus, double l_plus, double l_minus, double step = 0.0);
RatioResult crossing_ratio(double s, int threads = 0);

// ---- exponent maximization ----

struct ExponentProblem {
    std::string name;
    std::function<double(double)> objective;  // coefficient of log n
    double lo = 0.0;
    double hi = 0.0;
    bool lo_open = false;
    std::map<std::string, double> params;
};

struct Maximum {
    double argmax = 0.0;
    double value = 0.0;
};

Maximum maximize_exponent(const ExponentProblem& p, std::size_t grid = 1'000'000);

// over |Y'| in (0, K + pi/1000]
ExponentProblem anotdense_problem(bool boundary, double c = kLowerThreshold, double r = 1.0 - kTileSlack);
// over |Y| in (0, cap]; cap defaults to 11.7 (interior) or 5.86 (boundary)
ExponentProblem xsmall_problem(bool boundary, double c = kLowerThreshold, double r = 1.0 - kTileSlack,
                               double cap = 0.0);
// exponent of the large-|Y| branch at the cap
double xsmall_large_y_exponent(bool boundary, double c = kLowerThreshold, double r = 1.0 - kTileSlack,
                               double cap = 0.0);

// positive root of |Y| = iso_blowup_lower(|Y|, r, boundary)
double solve_y_cap(bool boundary, double r = 1.0);

// unique mu > 0 with a1+a2+a3+a4 = mu a2 + sqrt(4 mu a1 a3)
double solve_mu(double a1, double a2, double a3, double a4);

// areas entering the connectivity argument, unit rho
struct ConnectAreas {
    double A_lambda = 0.0;        // |A(1.0767)|
    double B_lambda = 0.0;        // |B(1.0767)|
    double B_star = 0.0;          // |B*| at the extremal beta
    double B_prime_cap_star = 0.0;
    double B_prime = 0.0;
    double Z = 0.0;
    double quadrature_error = 0.0;  // largest error estimate among the above
    Point beta;
};

ConnectAreas connect_areas(int strips = 200000);

std::vector<Certificate> threshold_suite(double c = kConnectThreshold);

}  // namespace knnlab::bounds
