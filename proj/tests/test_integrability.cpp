#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <sstream>
#include <string>

#include "cosym/builtins.hpp"
#include "cosym/integrability.hpp"

using namespace cosym;

TEST_CASE("a single integral commutes with itself") {
    const Manifold m = Manifold::product_torus(1, {1.0});
    const IntegralSet set = separable_integral_set(m);
    const CommutingReport rep = verify_commuting(m, set, random_points(m, 20, 5));
    CHECK(rep.max_bracket <= 1e-12);
    CHECK(rep.max_reeb_derivative <= 1e-12);
    CHECK(rep.gradient_rank == 2);
    CHECK(rep.pass);
}

TEST_CASE("separable integrals on the 5-torus commute pairwise") {
    const Manifold m = Manifold::product_torus(2, {1.0, 2.0});
    const IntegralSet set = separable_integral_set(m);
    REQUIRE(set.integrals.size() == 2);
    const CommutingReport rep = verify_commuting(m, set, random_points(m, 30, 6));
    CHECK(rep.max_bracket <= 1e-12);
    CHECK(rep.gradient_rank == 3);  // n + 1 including the reeb action
    CHECK(rep.pass);
}

TEST_CASE("a dependent set loses gradient rank") {
    const Manifold m = Manifold::product_torus(2, {1.0, 1.0});
    IntegralSet set = separable_integral_set(m);
    set.integrals[1] = set.integrals[0];  // duplicate kills independence
    const CommutingReport rep = verify_commuting(m, set, random_points(m, 10, 7));
    CHECK(rep.gradient_rank == 2);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("integrals are conserved along the combined flow") {
    const Manifold m = Manifold::product_torus(2, {1.0, 2.0});
    const IntegralSet set = separable_integral_set(m);
    const ScalarField h = set.integrals.front();  // H = I_1
    const Point start = m.canonicalize({0.1, 0.15, 0.35, 0.6, 0.8});
    const DriftReport rep = conservation_along_flow(m, h, set, start, 10.0, 1e-3);
    for (double drift : rep.integral_drift) CHECK(drift <= 1e-8);
    CHECK(rep.hamiltonian_drift <= 1e-8);
    CHECK(rep.flow.trajectory.size() == 10001);
}

TEST_CASE("reeb flow alone conserves every integral exactly") {
    const Manifold m = Manifold::product_torus(1, {1.0});
    const IntegralSet set = separable_integral_set(m);
    const DriftReport rep = conservation_along_flow(m, constant_field(0.0), set,
                                                    m.canonicalize({0.0, 0.3, 0.7}), 5.0, 1e-2);
    for (double drift : rep.integral_drift) CHECK(drift <= 1e-13);
}

TEST_CASE("non-commuting hamiltonians are rejected with a bracket witness") {
    const Manifold m = Manifold::product_torus(2, {1.0, 1.0});
    const IntegralSet set = separable_integral_set(m);
    const ScalarField h = builtin_field(m, "sin_y1");  // {sin_y1, sin_x1} != 0
    try {
        conservation_along_flow(m, h, set, m.canonicalize({0.0, 0.1, 0.1, 0.1, 0.1}), 1.0, 1e-2);
        FAIL("expected a precondition error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("bracket") != std::string::npos);
    }
}

TEST_CASE("non-invariant hamiltonians are rejected") {
    const Manifold m = Manifold::product_torus(1, {1.0});
    const IntegralSet set = separable_integral_set(m);
    CHECK_THROWS_AS(conservation_along_flow(m, builtin_field(m, "sin_theta"), set,
                                            m.canonicalize({0.0, 0.2, 0.2}), 1.0, 1e-2),
                    std::domain_error);
}

TEST_CASE("energy drift along a self-flow decreases at fourth order") {
    const Manifold m = Manifold::product_torus(1, {1.0});
    const ScalarField h = scaled_field(builtin_field(m, "sinx1_siny1"), 0.5);
    IntegralSet set;
    set.integrals = {h};
    set.reeb_action = reeb_action_field(m);
    set.labels = {"h", "reeb_action"};
    const Point start = m.canonicalize({0.0, 0.2, 0.05});
    const DriftReport coarse = conservation_along_flow(m, h, set, start, 10.0, 1e-2);
    const DriftReport fine = conservation_along_flow(m, h, set, start, 10.0, 5e-3);
    CHECK(coarse.integral_drift[0] > 0.0);
    CHECK(coarse.integral_drift[0] / fine.integral_drift[0] >= 12.0);
}

TEST_CASE("monodromy extraction recovers the gluing matrix") {
    const MonodromyMatrix cat{{{2, 1}, {1, 1}}};
    const MonodromyReport rep = extract_monodromy(Manifold::mapping_torus(cat));
    CHECK(rep.matrix == cat);
    CHECK(rep.determinant == 1);
    CHECK(rep.fit_residual <= 1e-10);

    const MonodromyMatrix shear{{{1, 1}, {0, 1}}};
    const MonodromyReport rep2 = extract_monodromy(Manifold::mapping_torus(shear));
    CHECK(rep2.matrix == shear);
    CHECK(rep2.determinant == 1);

    // the product torus is the identity-monodromy case
    const MonodromyReport rep3 = extract_monodromy(Manifold::product_torus(1, {1.0}));
    CHECK(rep3.matrix == MonodromyMatrix{{{1, 0}, {0, 1}}});
    CHECK(rep3.determinant == 1);

    CHECK_THROWS_AS(extract_monodromy(Manifold::product_torus(2, {1.0, 1.0})),
                    std::invalid_argument);
}

TEST_CASE("invariant torus frames are isotropic for omega") {
    const Manifold m = Manifold::product_torus(2, {1.0, 2.5});
    const IntegralSet set = separable_integral_set(m);
    CHECK(max_isotropy_residual(m, set, random_points(m, 20, 9)) <= 1e-6);
}

TEST_CASE("torus cloud csv has one row per point") {
    const Manifold m = Manifold::product_torus(1, {1.0});
    std::ostringstream out;
    write_point_cloud_csv(out, m, random_points(m, 3, 2));
    const std::string text = out.str();
    CHECK(text.rfind("theta,x1,y1\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
