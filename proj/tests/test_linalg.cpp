#include <doctest.h>

#include <random>

#include "nkbif/linalg.hpp"
#include "nkbif/model.hpp"
#include "oracles.hpp"

using namespace nkbif;
using doctest::Approx;

TEST_CASE("eig2 on the identity gives a double root at one") {
    const auto e = eig2<double>(Mat2d::Identity());
    CHECK(e.trace == 2.0);
    CHECK(e.det == 1.0);
    CHECK(e.lambda1.real() == 1.0);
    CHECK(e.lambda2.real() == 1.0);
    CHECK(e.lambda1.imag() == 0.0);
    CHECK_FALSE(e.is_complex());
}

TEST_CASE("eig2 on a rotation gives +-i") {
    Mat2d m;
    m << 0, -1, 1, 0;
    const auto e = eig2<double>(m);
    CHECK(e.discriminant == Approx(-4.0));
    CHECK(e.is_complex());
    CHECK(e.lambda1.real() == Approx(0.0));
    CHECK(std::abs(e.lambda1.imag()) == Approx(1.0));
    CHECK(e.lambda2 == std::conj(e.lambda1));
    CHECK(e.modulus1 == Approx(1.0));
    CHECK(e.modulus2 == Approx(1.0));
}

TEST_CASE("open-loop text matrix: saddle with lambda2 = 1/(lambda1 beta)") {
    const auto p = ModelParams::baseline();
    const auto m = build_matrices(p);
    const auto e = eig2<double>(m.A_yy);
    CHECK(e.trace == Approx(2.0606).epsilon(1e-4));
    CHECK(e.det == Approx(1.0101).epsilon(1e-4));
    CHECK(e.lambda1.real() == Approx(0.8035).epsilon(1e-3));
    CHECK(e.lambda2.real() == Approx(1.2571).epsilon(1e-3));
    // The product is 1/beta, so the second root is 1/(lambda1 beta).
    CHECK(e.lambda2.real() == Approx(1.0 / (e.lambda1.real() * p.beta)).epsilon(1e-12));
}

TEST_CASE("eig2 agrees with a general eigensolver and satisfies Vieta") {
    std::mt19937_64 gen(11);
    for (int k = 0; k < 10000; ++k) {
        const Mat2d m = oracle::random_matrix(gen);
        const auto e = eig2<double>(m);
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        CHECK(std::abs(e.lambda1 + e.lambda2 - e.trace) <= 1e-12 * scale);
        CHECK(std::abs(e.lambda1 * e.lambda2 - e.det) <= 1e-12 * scale * scale);
        CHECK(std::abs(e.discriminant - (e.trace * e.trace - 4 * e.det)) <= 1e-12 * scale * scale);
        if (!e.is_complex()) {
            CHECK(e.lambda1.real() <= e.lambda2.real());
            // Each real root is a zero of the characteristic polynomial.
            CHECK(std::abs(char_poly_eval<double>(m, e.lambda1.real())) <= 1e-9 * scale * scale);
            CHECK(std::abs(char_poly_eval<double>(m, e.lambda2.real())) <= 1e-9 * scale * scale);
        } else {
            CHECK(e.lambda2 == std::conj(e.lambda1));
            CHECK(e.modulus1 == Approx(std::sqrt(e.det)));
        }
        const auto ref = oracle::eigenvalues(m);
        const double mods_ref_hi = std::max(std::abs(ref[0]), std::abs(ref[1]));
        const double mods_ref_lo = std::min(std::abs(ref[0]), std::abs(ref[1]));
        CHECK(e.max_modulus() == Approx(mods_ref_hi).epsilon(1e-7));
        CHECK(e.min_modulus() == Approx(mods_ref_lo).epsilon(1e-6).scale(1e-6));
    }
}

TEST_CASE("eig2 rejects non-finite entries") {
    Mat2d m = Mat2d::Identity();
    m(0, 1) = std::nan("");
    CHECK_THROWS_AS(eig2<double>(m), Error);
    try {
        eig2<double>(m);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidArgument);
    }
}

TEST_CASE("char_poly_eval") {
    CHECK(char_poly_eval<double>(Mat2d::Identity(), 1.0) == 0.0);
    CHECK(char_poly_eval<double>(0.0, 0.0, -1.0) == 1.0);
    const auto m = build_matrices(ModelParams::baseline());
    const double p1 = char_poly_eval<double>(m.A_yy, 1.0);
    CHECK(p1 == Approx(1.0 - 2.0606 + 1.0101).epsilon(1e-3));
    CHECK(p1 < 0.0);
}

TEST_CASE("solve_linear_2x2") {
    CHECK(solve_linear_2x2<double>(Mat2d::Identity(), Vec2d(3, -1)).isApprox(Vec2d(3, -1)));
    Mat2d d;
    d << 2, 0, 0, 4;
    CHECK(solve_linear_2x2<double>(d, Vec2d(2, 4)).isApprox(Vec2d(1, 1)));

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int k = 0; k < 2000; ++k) {
        const Mat2d m = oracle::random_matrix(gen);
        if (std::abs(m.determinant()) < 1e-3) continue;
        const Vec2d v(u(gen), u(gen));
        const Vec2d rhs = m * v;
        const Vec2d got = solve_linear_2x2<double>(m, rhs);
        CHECK((m * got - rhs).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1e-2, rhs.cwiseAbs().maxCoeff()));
        CHECK((got - v).cwiseAbs().maxCoeff() <= 1e-10 / std::min(1.0, std::abs(m.determinant())) * 10);
    }

    Mat2d singular;
    singular << 1, 2, 2, 4;
    try {
        solve_linear_2x2<double>(singular, Vec2d(1, 1));
        FAIL("expected singular-system");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularSystem);
    }
}

TEST_CASE("discrete Sylvester: degenerate cases and Kronecker oracle") {
    std::mt19937_64 gen(5);
    const Mat2d c = oracle::random_matrix(gen);
    const Mat2d any = oracle::random_matrix(gen);
    CHECK(solve_discrete_sylvester<double>(any, Mat2d::Zero(), c).isApprox(c));
    CHECK(solve_discrete_sylvester<double>(Mat2d::Zero(), any, c).isApprox(c));

    int checked = 0;
    for (int k = 0; k < 2000; ++k) {
        const Mat2d as = oracle::random_matrix(gen, 1.0);
        const Mat2d bs = oracle::random_matrix(gen, 1.0);
        const Mat2d cs = oracle::random_matrix(gen, 1.0);
        const Eigen::Matrix4d op = sylvester_operator<double>(as, bs);
        if (op.fullPivLu().rcond() < 1e-3) continue;
        const Mat2d x = solve_discrete_sylvester<double>(as, bs, cs);
        const Mat2d ref = oracle::kron_sylvester(as, bs, cs);
        CHECK((x - ref).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
        CHECK((as * x * bs + x - cs).cwiseAbs().maxCoeff() < 1e-10);
        ++checked;
    }
    CHECK(checked > 1000);
}

TEST_CASE("discrete Sylvester: singular system reported") {
    // As = I, Bs = -I gives the zero operator.
    try {
        solve_discrete_sylvester<double>(Mat2d::Identity(), Mat2d(-Mat2d::Identity()), Mat2d::Identity());
        FAIL("expected no-unique-solution");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoUniqueSolution);
    }
}

TEST_CASE("AX - XB = C and Lyapunov wrappers") {
    std::mt19937_64 gen(8);
    for (int k = 0; k < 200; ++k) {
        const Mat2d a = oracle::random_matrix(gen);
        const Mat2d b = 0.3 * oracle::random_matrix(gen);
        const Mat2d c = oracle::random_matrix(gen);
        Mat2d x;
        try {
            x = solve_sylvester_ax_xb<double>(a, b, c);
        } catch (const Error&) {
            continue;
        }
        CHECK((a * x - x * b - c).cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, x.cwiseAbs().maxCoeff()));
    }
    Mat2d ac;
    ac << 0.5, 0.2, -0.1, 0.3;
    const Mat2d w = Mat2d::Identity();
    const Mat2d x = solve_discrete_lyapunov<double>(ac, w);
    CHECK((x - w - ac.transpose() * x * ac).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("DARE: trivial dynamics returns Q") {
    Mat2d q;
    q << 2, 0.5, 0.5, 1;
    const auto sol = solve_dare<double>(Mat2d::Zero(), Vec2d(1, 0), q, 0.3);
    CHECK((sol.P - q).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("DARE: scalar embedding solves p^2 - 0.25 p - 1 = 0") {
    Mat2d a;
    a << 0.5, 0, 0, 0.5;
    Mat2d q = Mat2d::Identity();
    // Decoupled second state: uncontrolled and stable, so its block is a Lyapunov sum.
    const auto sol = solve_dare<double>(a, Vec2d(1, 0), q, 1.0);
    const double root = (0.25 + std::sqrt(0.0625 + 4.0)) / 2.0;
    CHECK(root == Approx(1.13278).epsilon(1e-5));
    CHECK(sol.P(0, 0) == Approx(root).epsilon(1e-12));
    CHECK(sol.P(1, 1) == Approx(1.0 / (1.0 - 0.25)).epsilon(1e-12));
}

TEST_CASE("DARE: matches long-double value iteration on random controllable systems") {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    int checked = 0;
    for (int k = 0; k < 200; ++k) {
        const Mat2d a = oracle::random_matrix(gen, 1.2);
        const Vec2d b(u(gen), u(gen) - 1.0);
        if (kalman_controllability_rank(a, b) < 2) continue;
        if (std::abs(controllability_matrix<double>(a, b).determinant()) < 0.05) continue;
        Mat2d l = oracle::random_matrix(gen, 1.0);
        const Mat2d q = l * l.transpose() + 0.1 * Mat2d::Identity();
        const double r = u(gen);
        const auto sol = solve_dare<double>(a, b, q, r);
        const auto ref = oracle::value_iteration_dare(a, b, q, r, q);
        REQUIRE(ref.converged);
        CHECK((sol.P - ref.P).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, ref.P.cwiseAbs().maxCoeff()));
        CHECK((sol.P - sol.P.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(eig2<double>(sol.P).lambda1.real() >= -1e-12);
        CHECK(sol.residual < 1e-10);
        CHECK(eig2<double>(Mat2d(a + b * sol.F)).max_modulus() < 1.0);
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("DARE: singular Q still yields the stabilizing root") {
    // Q = 0 with an unstable A: the minimum-energy solution mirrors unstable roots inside.
    Mat2d a;
    a << 1.2, 0.3, 0.0, 0.5;
    const auto sol = solve_dare<double>(a, Vec2d(1, 1), Mat2d::Zero(), 1.0);
    const auto e = eig2<double>(Mat2d(a + Vec2d(1, 1) * sol.F));
    CHECK(e.max_modulus() < 1.0);
    CHECK(e.max_modulus() == Approx(1.0 / 1.2).epsilon(1e-10));
}

TEST_CASE("DARE: input validation") {
    const Mat2d a = Mat2d::Identity();
    const Vec2d b(1, 0.5);
    Mat2d not_psd;
    not_psd << -1, 0, 0, 1;
    Mat2d asym;
    asym << 1, 0.5, 0, 1;
    for (const Mat2d& q : {not_psd, asym}) {
        try {
            solve_dare<double>(a, b, q, 1.0);
            FAIL("expected invalid-argument");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidArgument);
        }
    }
    CHECK_THROWS_AS(solve_dare<double>(a, b, Mat2d::Identity(), 0.0), Error);
}

TEST_CASE("DARE: non-convergence carries the residual") {
    Mat2d a;
    a << 1.5, 1.0, 0.0, 0.9;
    DareOptions opts;
    opts.max_iter = 1;
    opts.tol = 1e-300;
    try {
        solve_dare<double>(a, Vec2d(0.0, 1.0), Mat2d::Identity(), 1.0, opts);
        FAIL("expected convergence-failure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConvergenceFailure);
        CHECK(e.residual() > 0.0);
    }
}

TEST_CASE("Ackermann gain places the requested polynomial") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int k = 0; k < 500; ++k) {
        const Mat2d a = oracle::random_matrix(gen);
        const Vec2d b(u(gen), u(gen));
        if (std::abs(controllability_matrix<double>(a, b).determinant()) < 0.1) continue;
        const double t = u(gen), d = u(gen);
        const RowVec2d f = ackermann_gain<double>(a, b, t, d);
        const Mat2d acl = a + b * f;
        CHECK(acl.trace() == Approx(t).epsilon(1e-9).scale(1.0));
        CHECK(acl.determinant() == Approx(d).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("templated on scalar: long double instantiation") {
    Mat2<long double> m;
    m << 1.0L, 2.0L, -0.5L, 0.25L;
    const auto e = eig2<long double>(m);
    CHECK(static_cast<double>(std::abs(e.lambda1 * e.lambda2 - e.det)) < 1e-15);
}
