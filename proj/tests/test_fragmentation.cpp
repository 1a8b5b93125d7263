#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cosym/builtins.hpp"
#include "cosym/fragmentation.hpp"

using namespace cosym;

namespace {

Manifold torus() { return Manifold::product_torus(1, {1.0}); }

}  // namespace

TEST_CASE("build_cover tiles the base with overlapping boxes") {
    const Manifold m = torus();
    const ChartCover cover = build_cover(m, 2, 0.25);
    CHECK(cover.charts.size() == 4);
    for (const ChartBox& box : cover.charts) {
        CHECK(box.half_width[0] == doctest::Approx(0.375));  // side 0.75
        CHECK(box.half_width[1] == doctest::Approx(0.375));
    }
}

TEST_CASE("build_cover rejects degenerate parameters") {
    const Manifold m = torus();
    CHECK_THROWS_AS(build_cover(m, 1, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(build_cover(m, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_cover(m, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_cover(m, 2, 0.6), std::invalid_argument);  // side would exceed 1
}

TEST_CASE("every base point lies in at least one chart") {
    const Manifold m = torus();
    const ChartCover cover = build_cover(m, 2, 0.25);
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            Point p;
            p.theta = 0.0;
            p.base = {i / 100.0, j / 100.0};
            bool covered = false;
            for (const ChartBox& box : cover.charts) covered = covered || box_contains(box, p);
            CHECK(covered);
        }
    }
}

TEST_CASE("partition of unity is subordinate, nonnegative, and sums to one") {
    const Manifold m = torus();
    const ChartCover cover = build_cover(m, 2, 0.25);
    const PartitionOfUnity pou = partition_of_unity(m, cover);
    REQUIRE(pou.bumps.size() == 4);

    for (const Point& p : random_points(m, 60, 13)) {
        double total = 0.0;
        for (std::size_t c = 0; c < pou.bumps.size(); ++c) {
            const double v = pou.bumps[c].value(0.0, p);
            CHECK(v >= 0.0);
            if (!box_contains(cover.charts[c], p)) CHECK(v == 0.0);
            total += v;
        }
        CHECK(std::fabs(total - 1.0) <= 1e-10);
    }
}

TEST_CASE("partition bumps are theta independent") {
    const Manifold m = torus();
    const PartitionOfUnity pou = partition_of_unity(m, build_cover(m, 2, 0.25));
    for (const ScalarField& rho : pou.bumps) {
        CHECK(rho.reeb_invariant);
        Point p;
        p.base = {0.31, 0.62};
        p.theta = 0.1;
        const double v1 = rho.value(0.0, p);
        p.theta = 0.8;
        CHECK(rho.value(0.0, p) == doctest::Approx(v1));
    }
}

TEST_CASE("a point interior to exactly one chart gets the full bump there") {
    const Manifold m = torus();
    const ChartCover cover = build_cover(m, 2, 0.25);
    const PartitionOfUnity pou = partition_of_unity(m, cover);
    // center of chart 0 lies outside all other boxes (distance 0.5 > 0.375)
    Point p;
    p.theta = 0.0;
    p.base = cover.charts[0].center;
    CHECK(pou.bumps[0].value(0.0, p) == doctest::Approx(1.0));
    for (std::size_t c = 1; c < pou.bumps.size(); ++c)
        CHECK(pou.bumps[c].value(0.0, p) <= 1e-15);

    // a point between two chart centers picks up both
    p.base = {0.5, cover.charts[0].center[1]};
    const double v0 = pou.bumps[0].value(0.0, p);
    CHECK(v0 > 0.0);
    CHECK(v0 < 1.0);
}

TEST_CASE("a cover with holes is rejected when building the partition") {
    const Manifold m = torus();
    ChartCover gapped;
    gapped.divisions = 1;
    gapped.overlap = 0.1;
    gapped.charts.push_back(ChartBox{{0.5, 0.5}, {0.1, 0.1}});  // misses most of the base
    CHECK_THROWS_AS(partition_of_unity(m, gapped), std::runtime_error);
}

TEST_CASE("fragment_hamiltonian splits H into chart pieces that sum back") {
    const Manifold m = torus();
    const PartitionOfUnity pou = partition_of_unity(m, build_cover(m, 2, 0.25));

    const auto zero_pieces = fragment_hamiltonian(constant_field(0.0), pou);
    for (const ScalarField& piece : zero_pieces)
        CHECK(piece.value(0.0, m.canonicalize({0.0, 0.5, 0.5})) == 0.0);

    const ScalarField h = builtin_field(m, "sinx1_siny1");
    const auto pieces = fragment_hamiltonian(h, pou);
    for (const ScalarField& piece : pieces) CHECK(piece.reeb_invariant);
    for (const Point& p : grid_points(m, 10)) {
        double total = 0.0;
        for (const ScalarField& piece : pieces) total += piece.value(0.0, p);
        CHECK(std::fabs(total - h.value(0.0, p)) <= 1e-12);
    }
}

TEST_CASE("one-piece splitting reproduces the flow to integrator accuracy") {
    const Manifold m = torus();
    const ScalarField h = scaled_field(builtin_field(m, "sinx1_siny1"), 0.05);
    const auto samples = random_points(m, 5, 41);
    const SplittingReport rep =
        compose_local_flows(m, {h}, Splitting::Strang, 8, samples, &h);
    CHECK(rep.max_deviation <= 1e-6);
}

TEST_CASE("commuting translation pieces compose exactly") {
    const Manifold m = torus();
    // H = alpha * x1 + beta * y1 on the branch splits into two pieces whose
    // fields are constant translations; the closed-form endpoint is exact.
    const double alpha = 0.3, beta = -0.2;
    ScalarField hx, hy;
    hx.value = [alpha](double, const Point& p) { return alpha * p.base[0]; };
    hx.gradient = [alpha](double, const Point&) { return std::vector<double>{0.0, alpha, 0.0}; };
    hx.reeb_invariant = true;
    hy.value = [beta](double, const Point& p) { return beta * p.base[1]; };
    hy.gradient = [beta](double, const Point&) { return std::vector<double>{0.0, 0.0, beta}; };
    hy.reeb_invariant = true;

    const Point start = m.canonicalize({0.1, 0.25, 0.5});
    for (const Splitting scheme : {Splitting::LieTrotter, Splitting::Strang}) {
        const Point got = split_flow(m, {hx, hy}, scheme, 4, start);
        // X_{hx} = -alpha d/dy1, X_{hy} = beta d/dx1
        const Point want = m.canonicalize({0.1, 0.25 + beta, 0.5 - alpha});
        CHECK(m.distance(got, want) <= 1e-10);
    }
}

TEST_CASE("splitting orders: lie-trotter is first, strang second") {
    const Manifold m = torus();
    const ScalarField h = scaled_field(builtin_field(m, "sinx1_siny1"), 0.05);
    const auto pieces = fragment_hamiltonian(h, partition_of_unity(m, build_cover(m, 2, 0.25)));
    const auto samples = random_points(m, 8, 55);

    const SplittingReport lt =
        compose_local_flows(m, pieces, Splitting::LieTrotter, 8, samples, &h);
    CHECK(lt.empirical_order >= 0.75);
    CHECK(lt.empirical_order <= 1.35);

    const SplittingReport st = compose_local_flows(m, pieces, Splitting::Strang, 8, samples, &h);
    CHECK(st.empirical_order >= 1.8);
    CHECK(st.empirical_order <= 2.4);
    CHECK(st.max_deviation < lt.max_deviation);
}

TEST_CASE("strang reconstruction at 64 substeps is tight") {
    const Manifold m = torus();
    const ScalarField h = scaled_field(builtin_field(m, "sinx1_siny1"), 0.05);
    const auto pieces = fragment_hamiltonian(h, partition_of_unity(m, build_cover(m, 2, 0.25)));
    Isotopy reference;
    reference.generator = hamiltonian_vector_field(m, h);
    reference.step = 1.0 / 4096.0;
    double deviation = 0.0;
    for (const Point& p : random_points(m, 8, 56)) {
        const Point split = split_flow(m, pieces, Splitting::Strang, 64, p);
        deviation = std::max(deviation, m.distance(split, time_one_map(m, reference, p)));
    }
    CHECK(deviation <= 1e-4);
}

TEST_CASE("sum precondition is enforced") {
    const Manifold m = torus();
    const ScalarField h = builtin_field(m, "sinx1_siny1");
    const ScalarField other = builtin_field(m, "sin_x1");
    const auto pieces = fragment_hamiltonian(h, partition_of_unity(m, build_cover(m, 2, 0.25)));
    CHECK_THROWS_AS(
        compose_local_flows(m, pieces, Splitting::Strang, 4, random_points(m, 3, 1), &other),
        std::domain_error);
}

TEST_CASE("chart-local flows fix points outside their chart") {
    const Manifold m = torus();
    const ChartCover cover = build_cover(m, 2, 0.25);
    const auto pieces = fragment_hamiltonian(scaled_field(builtin_field(m, "sinx1_siny1"), 0.05),
                                             partition_of_unity(m, cover));
    for (std::size_t c = 0; c < pieces.size(); ++c) {
        for (const Point& p : random_points(m, 40, 60 + c)) {
            if (box_contains(cover.charts[c], p)) continue;
            const Point q = split_flow(m, {pieces[c]}, Splitting::Strang, 4, p);
            CHECK(m.distance(q, p) <= 1e-12);
        }
    }
}

TEST_CASE("fragmented flows of invariant hamiltonians commute with the reeb flow") {
    const Manifold m = torus();
    const ScalarField h = scaled_field(builtin_field(m, "sinx1_siny1"), 0.05);
    const auto pieces = fragment_hamiltonian(h, partition_of_unity(m, build_cover(m, 2, 0.25)));
    const double s = 0.37;
    for (const Point& p : random_points(m, 6, 71)) {
        const Point a = m.reeb_flow(split_flow(m, pieces, Splitting::Strang, 16, p), s);
        const Point b = split_flow(m, pieces, Splitting::Strang, 16, m.reeb_flow(p, s));
        CHECK(m.distance(a, b) <= 1e-6);
    }
}
