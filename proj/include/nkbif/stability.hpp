#pragma once

// Geometry of the Taylor-rule parameter plane: trace/determinant maps, bifurcation
// borders, stability-triangle vertices, region labels, determinacy counting and
// pole placement.

#include <string_view>
#include <vector>

#include "nkbif/model.hpp"

namespace nkbif {

constexpr double kBorderTol = 1e-9;

struct TraceDet {
    double trace = 0.0;
    double det = 0.0;
};

struct RuleGains {
    double f_x = 0.0;
    double f_pi = 0.0;
};

/// Closed-loop trace and determinant are affine in (F_x, F_pi):
///   T = t0 + t_fx F_x,   D = d0 + d_fx F_x + d_fpi F_pi.
/// Coefficients are read off the variant's own A_yy, so both variants share one code path.
struct AffineTraceDetMap {
    double t0 = 0.0;
    double t_fx = 0.0;
    double d0 = 0.0;
    double d_fx = 0.0;
    double d_fpi = 0.0;
};

AffineTraceDetMap trace_det_map(const ModelParams& params);

TraceDet trace_det_from_rule(const ModelParams& params, double f_x, double f_pi);
RuleGains rule_from_trace_det(const ModelParams& params, double trace, double det);

/// D = 1: F_x as a function of F_pi.
double hopf_border(const ModelParams& params, double f_pi);
/// p(1) = 0: F_pi as a function of F_x.
double saddle_node_border(const ModelParams& params, double f_x);
/// p(-1) = 0: F_x as a function of F_pi.
double flip_border(const ModelParams& params, double f_pi);
/// Delta = 0 solved for F_pi at fixed F_x. D is linear in F_pi and T does not depend on
/// it, so the set has at most one element.
std::vector<double> discriminant_border(const ModelParams& params, double f_x);
/// Delta = 0 solved for F_x at fixed F_pi (a quadratic): zero, one or two roots, ascending.
std::vector<double> discriminant_border_fx(const ModelParams& params, double f_pi);

struct Vertex {
    std::string_view label;
    EigenReportd eigen;
    double f_pi = 0.0;
    double f_x = 0.0;
};

struct TriangleVertices {
    Vertex a;      // lambda1 = lambda2 = 1
    Vertex b;      // lambda1 = lambda2 = -1
    Vertex c;      // lambda1 = -1, lambda2 = 1
    Vertex omega;  // lambda1 = lambda2 = 0
    Vertex origin; // laissez-faire, F = 0

    std::vector<const Vertex*> rows() const { return {&a, &b, &c, &omega, &origin}; }
};

TriangleVertices triangle_vertices(const ModelParams& params);

enum class Region {
    R1_saddle,
    R2_source_real_straddle,
    R3_saddle_neg,
    R4_1_sink_real,
    R4_2_sink_complex,
    R4_3_source_complex,
    R4_4_source_real,
    R4_5_both_below_minus1,
    Border_SaddleNode,
    Border_Flip,
    Border_Hopf,
    Border_Discriminant,
};

std::string_view to_string(Region r);
bool is_border(Region r);

struct RegionClass {
    Region label = Region::R1_saddle;
    int stable_count = 0;
    EigenReportd eigen;
};

/// Label from the signs of p(1), p(-1), D - 1 and Delta. Points within border_tol
/// (absolute, on each of those quantities) of a border get the border label.
RegionClass classify_region(const ModelParams& params, double f_x, double f_pi,
                            double border_tol = kBorderTol);
RegionClass classify_trace_det(double trace, double det, double border_tol = kBorderTol);

/// Number of moduli strictly below 1 - tol.
int stable_count(const EigenReportd& e, double tol = kBorderTol);

/// p(1) > tol for the closed loop.
bool taylor_principle_holds(const ModelParams& params, double f_x, double f_pi,
                            double tol = kBorderTol);

/// Scalar x' = (A + BF) x: negative feedback iff -2A < BF < 0. Requires A > 0.
bool is_negative_feedback_scalar(double a, double b, double f);

struct ScalarBounds {
    double lower = 0.0;
    double upper = 0.0;
};
/// Inflation-response window 1 < F_pi < 1 + 2/(ab) of the one-dimensional accelerationist model.
ScalarBounds scalar_accelerationist_bounds(double a, double b);

enum class InterestRateTiming { ForwardLooking, Predetermined };
enum class Determinacy { Determinate, Indeterminate, Explosive, Boundary };

std::string_view to_string(InterestRateTiming t);
std::string_view to_string(Determinacy d);

struct DeterminacyReport {
    Determinacy status = Determinacy::Determinate;
    int predetermined = 0;     // 2 shock states, plus the interest rate and its lag when predetermined
    int required_stable = 0;   // stable endogenous eigenvalues the counting rule asks for
    int stable = 0;            // stable endogenous eigenvalues found
    EigenReportd eigen;
};

DeterminacyReport classify_determinacy(const ModelParams& params, const TaylorRule& rule,
                                       InterestRateTiming timing, double border_tol = kBorderTol);

/// Initial forward-looking values anchored by given i0 and i1 under a predetermined rate:
/// solves [F (A+BF); F] (x0, pi0) = (i1, i0).
Vec2d anchor_from_rates(const ModelParams& params, const TaylorRule& rule, double i0, double i1);

enum class PolePlacement { AffineMap, CanonicalForm, Ackermann };
std::string_view to_string(PolePlacement m);

RuleGains pole_place(const ModelParams& params, double trace, double det, PolePlacement method);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct GridPoint {
    double f_pi = 0.0;
    double f_x = 0.0;
    RegionClass region;
};

/// Row-major: outer index over F_pi (ascending), inner over F_x (ascending).
std::vector<GridPoint> sweep_grid(const ModelParams& params, Range f_pi, Range f_x, int n_pi,
                                  int n_x, double border_tol = kBorderTol);

}  // namespace nkbif
