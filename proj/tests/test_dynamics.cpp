#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "cosym/builtins.hpp"
#include "cosym/dynamics.hpp"

using namespace cosym;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Manifold torus() { return Manifold::product_torus(1, {1.0}); }

ScalarField centered_bump(const Manifold& m, double amplitude = 1.0) {
    return scaled_field(bump_field(m, std::vector<double>(2 * m.n(), 0.5), 0.15, 0.35),
                        amplitude);
}

}  // namespace

TEST_CASE("hamiltonian field of a constant vanishes") {
    const Manifold m = torus();
    const VectorField x = hamiltonian_vector_field(m, constant_field(3.0));
    const Tangent v = x.evaluator(0.0, m.canonicalize({0.2, 0.4, 0.6}));
    CHECK(std::fabs(v.d_theta) <= 1e-10);
    for (double c : v.d_base) CHECK(std::fabs(c) <= 1e-10);
}

TEST_CASE("transport hamiltonian is purely vertical on the bump plateau") {
    const Manifold m = torus();
    const ScalarField rho = centered_bump(m);
    const double c = 0.4;
    ScalarField k;  // K = -c * theta * rho
    k.value = [rho, c](double t, const Point& p) { return -c * p.theta * rho.value(t, p); };

    const Point plateau = m.canonicalize({0.3, 0.5, 0.5});
    const Tangent v =
        hamiltonian_vector_field(m, k).evaluator(0.0, plateau);
    // default convention: flat(X) = dK, so X = -c * xi where rho == 1
    CHECK(v.d_theta == doctest::Approx(-c).epsilon(1e-8));
    CHECK(std::fabs(v.d_base[0]) <= 1e-8);
    CHECK(std::fabs(v.d_base[1]) <= 1e-8);

    const Tangent w =
        hamiltonian_vector_field(m, k, VerticalSign::TransitivityConvention)
            .evaluator(0.0, plateau);
    CHECK(w.d_theta == doctest::Approx(c).epsilon(1e-8));
}

TEST_CASE("reeb-invariant hamiltonians generate horizontal flows") {
    const Manifold m = Manifold::product_torus(2, {1.0, 2.0});
    for (const char* name : {"sin_x1", "sinx1_siny1", "bump"}) {
        const VectorField x = hamiltonian_vector_field(m, builtin_field(m, name));
        for (const Point& p : random_points(m, 15, 4))
            CHECK(std::fabs(x.evaluator(0.0, p).d_theta) <= 1e-10);  // eta(X_H) = xi(H) = 0
    }
}

TEST_CASE("flow of the zero field is the identity") {
    const Manifold m = torus();
    Isotopy iso;
    iso.generator.evaluator = [](double, const Point& p) {
        Tangent v;
        v.d_base.assign(p.base.size(), 0.0);
        return v;
    };
    const Point p = m.canonicalize({0.7, 0.1, 0.9});
    CHECK(m.distance(time_one_map(m, iso, p), p) == 0.0);
}

TEST_CASE("reeb generator for one period returns to the start") {
    const Manifold m = torus();
    const Isotopy iso = reeb_isotopy(m, m.period(), 0.01);
    const Point p = m.canonicalize({0.25, 0.6, 0.35});
    CHECK(m.distance(time_one_map(m, iso, p), p) <= 1e-12);
}

TEST_CASE("unit translation along x1 is a loop") {
    const Manifold m = torus();
    const Isotopy iso = translation_loop(m, 1, 0.01);
    for (const Point& p : random_points(m, 10, 2))
        CHECK(m.distance(time_one_map(m, iso, p), p) <= 1e-12);
}

TEST_CASE("flows respect the mapping-torus seam") {
    const Manifold m = Manifold::mapping_torus(MonodromyMatrix{{{2, 1}, {1, 1}}});
    const Isotopy iso = reeb_isotopy(m, m.period(), 0.01);
    const Point p = m.canonicalize({0.0, 0.2, 0.3});
    const Point q = time_one_map(m, iso, p);
    CHECK(std::fabs(wrap_diff(q.base[0], 0.7, 1.0)) <= 1e-12);
    CHECK(std::fabs(wrap_diff(q.base[1], 0.5, 1.0)) <= 1e-12);
}

TEST_CASE("rk4 exhibits fourth-order step convergence") {
    const Manifold m = torus();
    const ScalarField h = scaled_field(sinx_siny_field(m), 0.5);
    const VectorField x = hamiltonian_vector_field(m, h);
    const Point p = m.canonicalize({0.0, 0.2, 0.3});

    Isotopy fine{x, 0.0, 1.0, 1e-4, Scheme::RK4};
    const Point reference = time_one_map(m, fine, p);
    auto error_at = [&](double step) {
        Isotopy iso{x, 0.0, 1.0, step, Scheme::RK4};
        return m.distance(time_one_map(m, iso, p), reference);
    };
    const double e1 = error_at(0.02);
    const double e2 = error_at(0.01);
    const double e3 = error_at(0.005);
    CHECK(e1 / e2 >= 12.0);
    CHECK(e1 / e2 <= 20.0);
    CHECK(e2 / e3 >= 12.0);
    CHECK(e2 / e3 <= 20.0);
}

TEST_CASE("midpoint scheme is second order") {
    const Manifold m = torus();
    const VectorField x = hamiltonian_vector_field(m, scaled_field(sinx_siny_field(m), 0.5));
    const Point p = m.canonicalize({0.0, 0.2, 0.3});
    Isotopy fine{x, 0.0, 1.0, 1e-4, Scheme::RK4};
    const Point reference = time_one_map(m, fine, p);
    auto error_at = [&](double step) {
        Isotopy iso{x, 0.0, 1.0, step, Scheme::Midpoint};
        return m.distance(time_one_map(m, iso, p), reference);
    };
    const double ratio = error_at(0.02) / error_at(0.01);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.5);
}

TEST_CASE("flow validates the step and reports divergence with its time") {
    const Manifold m = torus();
    Isotopy iso = reeb_isotopy(m, 1.0, 0.3);  // 0.3 does not divide 1.0
    const Point p = m.canonicalize({0.0, 0.0, 0.0});
    CHECK_THROWS_AS(flow(m, iso, p), std::invalid_argument);

    Isotopy bad;
    bad.step = 0.25;
    bad.generator.evaluator = [](double t, const Point& p2) {
        Tangent v;
        v.d_theta = t > 0.4 ? std::nan("") : 1.0;
        v.d_base.assign(p2.base.size(), 0.0);
        return v;
    };
    try {
        flow(m, bad, p);
        FAIL("expected divergence");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("t = 0.5") != std::string::npos);
    }
}

TEST_CASE("step residual estimate is tiny for smooth flows") {
    const Manifold m = torus();
    const Isotopy iso = hamiltonian_isotopy(m, scaled_field(sinx_siny_field(m), 0.3), 0.01);
    const FlowResult r = flow(m, iso, m.canonicalize({0.1, 0.2, 0.3}), FlowOptions{true, true});
    CHECK(r.max_step_residual > 0.0);
    CHECK(r.max_step_residual <= 1e-7);
    CHECK(r.trajectory.size() == 101);
}

TEST_CASE("conservation: identity and reeb flows have only stencil noise") {
    const Manifold m = torus();
    const auto samples = random_points(m, 5, 6);
    Isotopy zero;
    zero.generator.evaluator = [](double, const Point& p) {
        Tangent v;
        v.d_base.assign(p.base.size(), 0.0);
        return v;
    };
    const ConservationReport rid = conservation_check(m, zero, samples);
    CHECK(rid.eta_residual <= 1e-10);
    CHECK(rid.omega_residual <= 1e-10);

    const ConservationReport rreeb =
        conservation_check(m, reeb_isotopy(m, m.period(), 0.01), samples);
    CHECK(rreeb.eta_residual <= 1e-10);
    CHECK(rreeb.omega_residual <= 1e-10);
}

TEST_CASE("conservation: bump flow residual is small and fourth order in the step") {
    const Manifold m = torus();
    const auto samples = random_points(m, 6, 777);
    const ScalarField h = centered_bump(m, 0.2);
    const ConservationReport coarse =
        conservation_check(m, hamiltonian_isotopy(m, h, 1e-3), samples);
    const ConservationReport fine =
        conservation_check(m, hamiltonian_isotopy(m, h, 5e-4), samples);
    CHECK(coarse.eta_residual <= 1e-5);
    CHECK(coarse.omega_residual <= 1e-5);
    const double c = std::max(coarse.eta_residual, coarse.omega_residual);
    const double f = std::max(fine.eta_residual, fine.omega_residual);
    CHECK(c / f >= 12.0);
}

TEST_CASE("poisson bracket of a field with itself and with constants vanishes") {
    const Manifold m = torus();
    const ScalarField h = sinx_siny_field(m);
    const ScalarField hh = poisson_bracket(m, h, h);
    const ScalarField hc = poisson_bracket(m, h, constant_field(2.0));
    for (const Point& p : random_points(m, 10, 8)) {
        CHECK(std::fabs(hh.value(0.0, p)) <= 1e-12);
        CHECK(std::fabs(hc.value(0.0, p)) <= 1e-12);
    }
}

TEST_CASE("poisson bracket reproduces the analytic product formula") {
    const Manifold m = torus();
    const ScalarField bracket = poisson_bracket(m, sin_x_field(m, 1), sin_y_field(m, 1));
    for (const Point& p : random_points(m, 20, 12)) {
        const double expected =
            kTwoPi * kTwoPi * std::cos(kTwoPi * p.base[0]) * std::cos(kTwoPi * p.base[1]);
        CHECK(bracket.value(0.0, p) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("poisson bracket scales with the inverse weight") {
    const double a = 2.5;
    const Manifold m = Manifold::product_torus(1, {a});
    const ScalarField bracket = poisson_bracket(m, sin_x_field(m, 1), sin_y_field(m, 1));
    const Point p = m.canonicalize({0.0, 0.0, 0.0});
    CHECK(bracket.value(0.0, p) == doctest::Approx(kTwoPi * kTwoPi / a).epsilon(1e-10));
}

TEST_CASE("poisson bracket is antisymmetric") {
    const Manifold m = Manifold::product_torus(2, {1.0, 2.0});
    const ScalarField h = builtin_field(m, "sinx1_siny1");
    const ScalarField k = builtin_field(m, "sin_x2");
    const ScalarField hk = poisson_bracket(m, h, k);
    const ScalarField kh = poisson_bracket(m, k, h);
    for (const Point& p : random_points(m, 20, 14))
        CHECK(std::fabs(hk.value(0.0, p) + kh.value(0.0, p)) <= 1e-12);
}

TEST_CASE("commutator of flows with vanishing bracket stays near the identity") {
    const Manifold m = torus();
    // both depend on x1 only, so the leafwise bracket vanishes identically
    const ScalarField h = scaled_field(sin_x_field(m, 1), 0.5);
    const ScalarField k = scaled_field(cos_x_field(m, 1), 0.5);
    for (const auto& row : commutator_flow(m, h, k, 0.01, 0.01 / 64, random_points(m, 6, 20))) {
        for (double c : row.displacement) CHECK(std::fabs(c) <= 1e-6);
    }
}

TEST_CASE("commutator displacement approaches eps^2 X_{H,K} at third order") {
    const Manifold m = torus();
    const double amp = 1.0 / kTwoPi;
    const ScalarField h = scaled_field(sin_x_field(m, 1), amp);
    const ScalarField k = scaled_field(sin_y_field(m, 1), amp);
    const auto samples = random_points(m, 6, 23);
    std::vector<double> residuals;
    for (double eps : {0.1, 0.05, 0.025}) {
        double r = 0.0;
        for (const auto& row : commutator_flow(m, h, k, eps, eps / 64.0, samples))
            r = std::max(r, row.residual);
        residuals.push_back(r);
    }
    CHECK(std::log2(residuals[0] / residuals[1]) >= 2.7);
    CHECK(std::log2(residuals[1] / residuals[2]) >= 2.7);
}

TEST_CASE("commutator at eps = 0 is the identity") {
    const Manifold m = torus();
    const auto rows = commutator_flow(m, sin_x_field(m, 1), sin_y_field(m, 1), 0.0, 0.01,
                                      random_points(m, 3, 25));
    for (const auto& row : rows)
        for (double c : row.displacement) CHECK(c == 0.0);
}

TEST_CASE("compactly supported pair witnesses non-commutativity") {
    const Manifold m = torus();
    const auto [h, k] = noncommuting_pair(m);
    // a point in the falloff annulus, where the bracket field is nonzero
    const Point p = m.canonicalize({0.0, 0.68, 0.5});
    double moved = 0.0;
    for (const auto& row : commutator_flow(m, h, k, 0.1, 0.1 / 64, {p}))
        for (double c : row.displacement) moved = std::max(moved, std::fabs(c));
    CHECK(moved >= 1e-4);
}

TEST_CASE("vertical transport reaches the target angle on the plateau") {
    const Manifold m = torus();
    const ScalarField rho = centered_bump(m);
    const Point z0 = m.canonicalize({0.2, 0.5, 0.5});
    const Point z1 = m.canonicalize({0.7, 0.5, 0.5});

    const FlowResult r = vertical_transport_auto(m, z0, z1, rho);
    CHECK(std::fabs(wrap_diff(r.endpoint.theta, 0.7, 1.0)) <= 1e-8);
    CHECK(std::fabs(wrap_diff(r.endpoint.base[0], 0.5, 1.0)) <= 1e-10);
    CHECK(std::fabs(wrap_diff(r.endpoint.base[1], 0.5, 1.0)) <= 1e-10);

    // the alternate sign convention lands on the same target
    const FlowResult alt =
        vertical_transport_auto(m, z0, z1, rho, VerticalSign::TransitivityConvention);
    CHECK(std::fabs(wrap_diff(alt.endpoint.theta, 0.7, 1.0)) <= 1e-8);
}

TEST_CASE("vertical transport with c = 0 is the identity") {
    const Manifold m = torus();
    const ScalarField rho = centered_bump(m);
    const Point z0 = m.canonicalize({0.2, 0.5, 0.5});
    const FlowResult r = vertical_transport(m, z0, z0, rho, 0.0);
    CHECK(m.distance(r.endpoint, z0) <= 1e-12);
}

TEST_CASE("vertical transport stays exact at the plateau edge") {
    const Manifold m = torus();
    const ScalarField rho = centered_bump(m);
    // |x - 0.5| = 0.149 < plateau radius 0.15: still on the plateau
    const Point z0 = m.canonicalize({0.9, 0.649, 0.5});
    const Point z1 = m.canonicalize({0.15, 0.649, 0.5});
    const FlowResult r = vertical_transport_auto(m, z0, z1, rho);
    CHECK(std::fabs(wrap_diff(r.endpoint.theta, 0.15, 1.0)) <= 1e-8);
}

TEST_CASE("vertical transport enforces its preconditions") {
    const Manifold m = torus();
    const ScalarField rho = centered_bump(m);
    const Point z0 = m.canonicalize({0.2, 0.5, 0.5});
    const Point off_plateau = m.canonicalize({0.2, 0.9, 0.9});
    const Point other_fiber = m.canonicalize({0.7, 0.6, 0.5});
    CHECK_THROWS_AS(vertical_transport(m, off_plateau, off_plateau, rho, 0.1),
                    std::domain_error);
    CHECK_THROWS_AS(vertical_transport(m, z0, other_fiber, rho, 0.1), std::domain_error);
}

TEST_CASE("isotopy inverse undoes the flow") {
    const Manifold m = torus();
    const Isotopy iso = hamiltonian_isotopy(m, scaled_field(sinx_siny_field(m), 0.4), 1e-3);
    const Isotopy inv = inverse(iso);
    for (const Point& p : random_points(m, 5, 30)) {
        const Point back = time_one_map(m, inv, time_one_map(m, iso, p));
        CHECK(m.distance(back, p) <= 1e-10);
    }
}

TEST_CASE("trajectory csv lists time and coordinates") {
    const Manifold m = torus();
    const FlowResult r =
        flow(m, reeb_isotopy(m, 0.5, 0.25), m.canonicalize({0.0, 0.25, 0.75}),
             FlowOptions{true, false});
    std::ostringstream out;
    write_trajectory_csv(out, m, r);
    const std::string text = out.str();
    CHECK(text.rfind("time,theta,x1,y1\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 6);  // header + 5 rows
}
