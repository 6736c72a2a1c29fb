#include "nkbif/stability.hpp"

#include <cmath>
#include <string>

namespace nkbif {

namespace {

void require_controllable_map(const AffineTraceDetMap& m, const char* who) {
    if (m.t_fx == 0.0 || m.d_fpi == 0.0) {
        throw Error(ErrorKind::Uncontrollable, std::string(who) + ": gamma*kappa = 0");
    }
}

double lerp(const Range& r, int k, int n) {
    if (k == n - 1) return r.hi;
    return r.lo + (r.hi - r.lo) * static_cast<double>(k) / static_cast<double>(n - 1);
}

}  // namespace

AffineTraceDetMap trace_det_map(const ModelParams& params) {
    const StructuralMatrices m = build_matrices(params);
    const Mat2d& a = m.A_yy;
    const double g = m.B_y(0);
    AffineTraceDetMap out;
    out.t0 = a.trace();
    out.t_fx = g;
    out.d0 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    out.d_fx = g * a(1, 1);
    out.d_fpi = -g * a(1, 0);
    return out;
}

TraceDet trace_det_from_rule(const ModelParams& params, double f_x, double f_pi) {
    const AffineTraceDetMap m = trace_det_map(params);
    return {m.t0 + m.t_fx * f_x, m.d0 + m.d_fx * f_x + m.d_fpi * f_pi};
}

RuleGains rule_from_trace_det(const ModelParams& params, double trace, double det) {
    const AffineTraceDetMap m = trace_det_map(params);
    require_controllable_map(m, "rule_from_trace_det");
    RuleGains g;
    g.f_x = (trace - m.t0) / m.t_fx;
    g.f_pi = (det - m.d0 - m.d_fx * g.f_x) / m.d_fpi;
    return g;
}

double hopf_border(const ModelParams& params, double f_pi) {
    const AffineTraceDetMap m = trace_det_map(params);
    if (m.d_fx == 0.0) throw Error(ErrorKind::InvalidArgument, "hopf_border: gamma = 0");
    return (1.0 - m.d0 - m.d_fpi * f_pi) / m.d_fx;
}

double saddle_node_border(const ModelParams& params, double f_x) {
    const AffineTraceDetMap m = trace_det_map(params);
    if (m.d_fpi == 0.0) throw Error(ErrorKind::InvalidArgument, "saddle_node_border: gamma*kappa = 0");
    // 1 - T + D = 0
    return (m.t0 - 1.0 - m.d0 + (m.t_fx - m.d_fx) * f_x) / m.d_fpi;
}

double flip_border(const ModelParams& params, double f_pi) {
    const AffineTraceDetMap m = trace_det_map(params);
    const double slope = m.t_fx + m.d_fx;
    if (slope == 0.0) throw Error(ErrorKind::InvalidArgument, "flip_border: gamma = 0");
    // 1 + T + D = 0
    return -(1.0 + m.t0 + m.d0 + m.d_fpi * f_pi) / slope;
}

std::vector<double> discriminant_border(const ModelParams& params, double f_x) {
    const AffineTraceDetMap m = trace_det_map(params);
    if (m.d_fpi == 0.0) return {};
    const double t = m.t0 + m.t_fx * f_x;
    return {(0.25 * t * t - m.d0 - m.d_fx * f_x) / m.d_fpi};
}

std::vector<double> discriminant_border_fx(const ModelParams& params, double f_pi) {
    const AffineTraceDetMap m = trace_det_map(params);
    const double qa = 0.25 * m.t_fx * m.t_fx;
    const double qb = 0.5 * m.t0 * m.t_fx - m.d_fx;
    const double qc = 0.25 * m.t0 * m.t0 - m.d0 - m.d_fpi * f_pi;
    if (qa == 0.0) {
        if (qb == 0.0) return {};
        return {-qc / qb};
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return {};
    if (disc == 0.0) return {-qb / (2.0 * qa)};
    const double root = std::sqrt(disc);
    const double q = -0.5 * (qb + std::copysign(root, qb));
    double r1 = q / qa;
    double r2 = qc / q;
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2};
}

TriangleVertices triangle_vertices(const ModelParams& params) {
    const auto make = [&](std::string_view label, double trace, double det) {
        const RuleGains g = rule_from_trace_det(params, trace, det);
        return Vertex{label, eig2_from_trace_det(trace, det), g.f_pi, g.f_x};
    };
    TriangleVertices v;
    v.a = make("A", 2.0, 1.0);
    v.b = make("B", -2.0, 1.0);
    v.c = make("C", 0.0, -1.0);
    v.omega = make("Omega", 0.0, 0.0);
    const TraceDet open = trace_det_from_rule(params, 0.0, 0.0);
    v.origin = Vertex{"O", eig2_from_trace_det(open.trace, open.det), 0.0, 0.0};
    return v;
}

std::string_view to_string(Region r) {
    switch (r) {
        case Region::R1_saddle: return "R1_saddle";
        case Region::R2_source_real_straddle: return "R2_source_real_straddle";
        case Region::R3_saddle_neg: return "R3_saddle_neg";
        case Region::R4_1_sink_real: return "R4_1_sink_real";
        case Region::R4_2_sink_complex: return "R4_2_sink_complex";
        case Region::R4_3_source_complex: return "R4_3_source_complex";
        case Region::R4_4_source_real: return "R4_4_source_real";
        case Region::R4_5_both_below_minus1: return "R4_5_both_below_minus1";
        case Region::Border_SaddleNode: return "Border_SaddleNode";
        case Region::Border_Flip: return "Border_Flip";
        case Region::Border_Hopf: return "Border_Hopf";
        case Region::Border_Discriminant: return "Border_Discriminant";
    }
    return "unknown";
}

bool is_border(Region r) {
    return r == Region::Border_SaddleNode || r == Region::Border_Flip || r == Region::Border_Hopf ||
           r == Region::Border_Discriminant;
}

int stable_count(const EigenReportd& e, double tol) {
    return (e.modulus1 < 1.0 - tol ? 1 : 0) + (e.modulus2 < 1.0 - tol ? 1 : 0);
}

RegionClass classify_trace_det(double trace, double det, double border_tol) {
    RegionClass out;
    out.eigen = eig2_from_trace_det(trace, det);
    out.stable_count = stable_count(out.eigen, border_tol);

    const double p1 = char_poly_eval(trace, det, 1.0);
    const double pm1 = char_poly_eval(trace, det, -1.0);
    const double disc = trace * trace - 4.0 * det;

    if (std::abs(p1) <= border_tol) {
        out.label = Region::Border_SaddleNode;
    } else if (std::abs(pm1) <= border_tol) {
        out.label = Region::Border_Flip;
    } else if (std::abs(det - 1.0) <= border_tol && disc < 0.0) {
        out.label = Region::Border_Hopf;
    } else if (std::abs(disc) <= border_tol) {
        out.label = Region::Border_Discriminant;
    } else if (p1 < 0.0) {
        out.label = pm1 > 0.0 ? Region::R1_saddle : Region::R2_source_real_straddle;
    } else if (pm1 < 0.0) {
        out.label = Region::R3_saddle_neg;
    } else if (disc < 0.0) {
        out.label = det < 1.0 ? Region::R4_2_sink_complex : Region::R4_3_source_complex;
    } else if (trace > 2.0) {
        out.label = Region::R4_4_source_real;
    } else if (trace < -2.0) {
        out.label = Region::R4_5_both_below_minus1;
    } else {
        out.label = Region::R4_1_sink_real;
    }
    return out;
}

RegionClass classify_region(const ModelParams& params, double f_x, double f_pi, double border_tol) {
    const TraceDet td = trace_det_from_rule(params, f_x, f_pi);
    return classify_trace_det(td.trace, td.det, border_tol);
}

bool taylor_principle_holds(const ModelParams& params, double f_x, double f_pi, double tol) {
    const TraceDet td = trace_det_from_rule(params, f_x, f_pi);
    return char_poly_eval(td.trace, td.det, 1.0) > tol;
}

bool is_negative_feedback_scalar(double a, double b, double f) {
    if (!(a > 0.0)) {
        throw Error(ErrorKind::OutOfScope, "is_negative_feedback_scalar: stated for A > 0 only");
    }
    const double bf = b * f;
    return -2.0 * a < bf && bf < 0.0;
}

ScalarBounds scalar_accelerationist_bounds(double a, double b) {
    if (!(a * b > 0.0) || !std::isfinite(a * b)) {
        throw Error(ErrorKind::InvalidArgument, "scalar_accelerationist_bounds: need a*b > 0");
    }
    return {1.0, 1.0 + 2.0 / (a * b)};
}

std::string_view to_string(InterestRateTiming t) {
    return t == InterestRateTiming::ForwardLooking ? "forward-looking" : "predetermined";
}

std::string_view to_string(Determinacy d) {
    switch (d) {
        case Determinacy::Determinate: return "determinate";
        case Determinacy::Indeterminate: return "indeterminate";
        case Determinacy::Explosive: return "explosive";
        case Determinacy::Boundary: return "boundary";
    }
    return "unknown";
}

DeterminacyReport classify_determinacy(const ModelParams& params, const TaylorRule& rule,
                                       InterestRateTiming timing, double border_tol) {
    DeterminacyReport rep;
    const Mat2d acl = closed_loop(build_matrices(params), rule);
    rep.eigen = eig2(acl);
    rep.stable = stable_count(rep.eigen, border_tol);
    const bool predetermined_rate = timing == InterestRateTiming::Predetermined;
    rep.predetermined = predetermined_rate ? 4 : 2;
    rep.required_stable = predetermined_rate ? 2 : 0;

    const auto near_unit = [&](double m) { return std::abs(m - 1.0) <= border_tol; };
    if (near_unit(rep.eigen.modulus1) || near_unit(rep.eigen.modulus2)) {
        rep.status = Determinacy::Boundary;
    } else if (rep.stable == rep.required_stable) {
        rep.status = Determinacy::Determinate;
    } else if (rep.stable > rep.required_stable) {
        rep.status = Determinacy::Indeterminate;
    } else {
        rep.status = Determinacy::Explosive;
    }
    return rep;
}

Vec2d anchor_from_rates(const ModelParams& params, const TaylorRule& rule, double i0, double i1) {
    const Mat2d acl = closed_loop(build_matrices(params), rule);
    Mat2d lhs;
    lhs.row(0) = rule.endogenous() * acl;
    lhs.row(1) = rule.endogenous();
    try {
        return solve_linear_2x2<double>(lhs, Vec2d(i1, i0));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularSystem) {
            throw Error(ErrorKind::NoAnchor, "anchor_from_rates: anchor matrix is singular");
        }
        throw;
    }
}

std::string_view to_string(PolePlacement m) {
    switch (m) {
        case PolePlacement::AffineMap: return "affine-map";
        case PolePlacement::CanonicalForm: return "canonical-form";
        case PolePlacement::Ackermann: return "ackermann";
    }
    return "unknown";
}

RuleGains pole_place(const ModelParams& params, double trace, double det, PolePlacement method) {
    if (!std::isfinite(trace) || !std::isfinite(det)) {
        throw Error(ErrorKind::InvalidArgument, "pole_place: non-finite target");
    }
    const StructuralMatrices m = build_matrices(params);
    if (kalman_controllability_rank(m.A_yy, m.B_y) < 2) {
        throw Error(ErrorKind::Uncontrollable, "pole_place: controllability rank below 2");
    }

    switch (method) {
        case PolePlacement::AffineMap:
            return rule_from_trace_det(params, trace, det);

        case PolePlacement::CanonicalForm: {
            // Move to controllable canonical form, where the gain simply shifts the
            // characteristic-polynomial coefficients, then map back through [B, AB].
            const Mat2d c = controllability_matrix<double>(m.A_yy, m.B_y);
            const double t_a = m.A_yy.trace();
            const double d_a = m.A_yy.determinant();
            const RowVec2d shift(trace - t_a, d_a - det);
            Mat2d w_inv;
            w_inv << 1.0, t_a,
                     0.0, 1.0;
            const RowVec2d f = (shift * w_inv) * c.inverse();
            return {f(0), f(1)};
        }

        case PolePlacement::Ackermann: {
            const RowVec2d f = ackermann_gain<double>(m.A_yy, m.B_y, trace, det);
            return {f(0), f(1)};
        }
    }
    throw Error(ErrorKind::InvalidArgument, "pole_place: unknown method");
}

std::vector<GridPoint> sweep_grid(const ModelParams& params, Range f_pi, Range f_x, int n_pi, int n_x,
                                  double border_tol) {
    if (n_pi < 2 || n_x < 2) {
        throw Error(ErrorKind::InvalidArgument, "sweep_grid: resolution must be at least 2 per axis");
    }
    for (const Range& r : {f_pi, f_x}) {
        if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi)) {
            throw Error(ErrorKind::InvalidArgument, "sweep_grid: empty or non-finite range");
        }
    }
    const AffineTraceDetMap m = trace_det_map(params);
    std::vector<GridPoint> out;
    out.reserve(static_cast<std::size_t>(n_pi) * static_cast<std::size_t>(n_x));
    for (int i = 0; i < n_pi; ++i) {
        const double fp = lerp(f_pi, i, n_pi);
        for (int j = 0; j < n_x; ++j) {
            const double fx = lerp(f_x, j, n_x);
            GridPoint gp;
            gp.f_pi = fp;
            gp.f_x = fx;
            gp.region = classify_trace_det(m.t0 + m.t_fx * fx, m.d0 + m.d_fx * fx + m.d_fpi * fp,
                                           border_tol);
            out.push_back(gp);
        }
    }
    return out;
}

}  // namespace nkbif
