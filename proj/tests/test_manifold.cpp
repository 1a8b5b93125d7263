#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cosym/manifold.hpp"

using namespace cosym;

namespace {

Manifold cat_map_torus() {
    return Manifold::mapping_torus(MonodromyMatrix{{{2, 1}, {1, 1}}});
}

// Independent seam oracle: apply the integer matrix directly, mod 1.
std::vector<double> monodromy_apply(const MonodromyMatrix& a, double x, double y) {
    return {wrap_unit(static_cast<double>(a[0][0]) * x + static_cast<double>(a[0][1]) * y),
            wrap_unit(static_cast<double>(a[1][0]) * x + static_cast<double>(a[1][1]) * y)};
}

}  // namespace

TEST_CASE("canonicalize wraps product torus coordinates") {
    const Manifold m = Manifold::product_torus(1, {1.0});
    const Point p = m.canonicalize({1.25, 0.5, 0.5});
    CHECK(p.theta == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(p.base[0] == doctest::Approx(0.5));
    CHECK(p.base[1] == doctest::Approx(0.5));
}

TEST_CASE("canonicalize applies the cat-map monodromy at the seam") {
    const Manifold m = cat_map_torus();
    const Point p = m.canonicalize({1.0, 0.2, 0.3});
    const auto expected = monodromy_apply(m.monodromy(), 0.2, 0.3);
    CHECK(p.theta == doctest::Approx(0.0));
    CHECK(p.base[0] == doctest::Approx(expected[0]).epsilon(1e-14));
    CHECK(p.base[1] == doctest::Approx(expected[1]).epsilon(1e-14));
    // frozen values from the oracle
    CHECK(p.base[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(p.base[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("canonicalize leaves canonical points unchanged and is idempotent") {
    const Manifold pt = Manifold::product_torus(2, {1.0, 2.5});
    const Manifold mt = cat_map_torus();
    for (const Manifold& m : {pt, mt}) {
        for (const Point& p : random_points(m, 50, 99)) {
            const Point q = m.canonicalize(to_coords(p));
            CHECK(m.distance(p, q) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("canonicalize rejects non-finite input") {
    const Manifold m = Manifold::product_torus(1, {1.0});
    CHECK_THROWS_AS(m.canonicalize({std::nan(""), 0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(m.canonicalize({0.0, HUGE_VAL, 0.0}), std::domain_error);
}

TEST_CASE("reeb vector is the unit theta direction") {
    for (const Manifold& m : {Manifold::product_torus(2, {1.0, 3.0}), cat_map_torus()}) {
        const Point p = random_points(m, 1, 7).front();
        const Tangent v = m.reeb_vector(p);
        CHECK(v.d_theta == 1.0);  // eta(xi) = 1 exactly
        for (double c : v.d_base) CHECK(c == 0.0);
    }
}

TEST_CASE("reeb flow is periodic on the product torus") {
    const Manifold m = Manifold::product_torus(1, {1.0});
    const Point p = m.canonicalize({0.3, 0.1, 0.9});
    CHECK(m.distance(m.reeb_flow(p, 1.0), p) <= 1e-15);
    CHECK(m.distance(m.reeb_flow(p, 0.0), p) == 0.0);
}

TEST_CASE("time-T reeb flow on the mapping torus is the monodromy") {
    const Manifold m = cat_map_torus();
    const Point p = m.canonicalize({0.0, 0.2, 0.3});
    const Point q = m.reeb_flow(p, 1.0);
    CHECK(q.theta == doctest::Approx(0.0));
    CHECK(q.base[0] == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(q.base[1] == doctest::Approx(0.5).epsilon(1e-12));

    // whole frame at theta = 0
    for (const Point& f : random_points(m, 20, 3)) {
        const Point at = m.canonicalize(0.0, f.base);
        const Point image = m.reeb_flow(at, m.period());
        const auto expected = monodromy_apply(m.monodromy(), at.base[0], at.base[1]);
        CHECK(std::fabs(wrap_diff(image.base[0], expected[0], 1.0)) <= 1e-12);
        CHECK(std::fabs(wrap_diff(image.base[1], expected[1], 1.0)) <= 1e-12);
    }
}

TEST_CASE("reeb flow inverts exactly up to rounding") {
    const Manifold pt = Manifold::product_torus(2, {1.0, 2.0}, 2.0);
    const Manifold mt = cat_map_torus();
    for (const Manifold& m : {pt, mt}) {
        std::size_t i = 0;
        for (const Point& p : random_points(m, 100, 21)) {
            const double s = (static_cast<double>(i++) - 50.0) / 7.0;
            CHECK(m.distance(m.reeb_flow(m.reeb_flow(p, s), -s), p) <= 1e-12);
        }
    }
}

TEST_CASE("manifold invariants are enforced") {
    CHECK_THROWS_AS(Manifold::product_torus(1, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(Manifold::product_torus(1, {-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Manifold::product_torus(1, {1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Manifold::product_torus(2, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Manifold::mapping_torus(MonodromyMatrix{{{2, 0}, {0, 1}}}),
                    std::invalid_argument);  // det = 2
    CHECK_THROWS_AS(Manifold::mapping_torus(MonodromyMatrix{{{0, 1}, {1, 0}}}),
                    std::invalid_argument);  // det = -1
}

TEST_CASE("config serialization round trips") {
    const Manifold pt = Manifold::product_torus(2, {1.0, 2.5}, 3.0);
    const Manifold pt2 = Manifold::from_config(pt.to_config());
    CHECK(pt2.kind() == ManifoldKind::ProductTorus);
    CHECK(pt2.n() == 2);
    CHECK(pt2.period() == doctest::Approx(3.0));
    CHECK(pt2.weights()[1] == doctest::Approx(2.5));

    const Manifold mt = cat_map_torus();
    const Manifold mt2 = Manifold::from_config(mt.to_config());
    CHECK(mt2.kind() == ManifoldKind::MappingTorus);
    CHECK(mt2.monodromy() == mt.monodromy());

    CHECK_THROWS_AS(Manifold::from_config("kind = klein_bottle\n"), std::invalid_argument);
    CHECK_THROWS_AS(Manifold::from_config("kind product_torus\n"), std::invalid_argument);
}

TEST_CASE("seeded sampling is reproducible") {
    const Manifold m = Manifold::product_torus(1, {1.0});
    const auto a = random_points(m, 10, 42);
    const auto b = random_points(m, 10, 42);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(m.distance(a[i], b[i]) == 0.0);
    const auto c = random_points(m, 10, 43);
    bool all_equal = true;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (m.distance(a[i], c[i]) > 0.0) all_equal = false;
    CHECK_FALSE(all_equal);
}
