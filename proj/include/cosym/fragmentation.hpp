#pragma once

// Constructive fragmentation: Reeb-invariant chart covers, equivariant
// partitions of unity, Hamiltonian decomposition, and splitting-based
// reconstruction of the global flow from the chart-local ones.
//
// Charts are products (base box) x (full theta circle), so everything built
// from them is theta-invariant by construction. The product decomposition of
// the time-one map is realized numerically as Lie-Trotter / Strang splitting
// with measured convergence order.

#include <vector>

#include "cosym/dynamics.hpp"
#include "cosym/forms.hpp"
#include "cosym/manifold.hpp"

namespace cosym {

struct ChartBox {
    std::vector<double> center;      // base coordinates, size 2n
    std::vector<double> half_width;  // per base dimension
};

struct ChartCover {
    std::vector<ChartBox> charts;
    int divisions = 2;
    double overlap = 0.25;
};

struct PartitionOfUnity {
    std::vector<ScalarField> bumps;  // theta-independent, one per chart, summing to 1
    ChartCover cover;
};

/// divisions^{2n} overlapping boxes tiling the base torus; each box has side
/// 1/divisions + overlap (strictly smaller than the fundamental domain).
ChartCover build_cover(const Manifold& m, int divisions, double overlap);

/// Wrap-aware membership in the closed box.
bool box_contains(const ChartBox& box, const Point& p);

/// Normalized plateau bumps subordinate to the cover. Throws if some point
/// of the check grid has no bump mass (cover gap).
PartitionOfUnity partition_of_unity(const Manifold& m, const ChartCover& cover,
                                    double plateau_fraction = 0.5, int check_grid = 32);

/// The chart-supported pieces rho_i * H; they sum to H pointwise.
std::vector<ScalarField> fragment_hamiltonian(const ScalarField& h, const PartitionOfUnity& pou);

enum class Splitting { LieTrotter, Strang };

struct SplittingReport {
    Splitting scheme = Splitting::Strang;
    int steps = 0;
    double max_deviation = 0.0;      // at the requested resolution
    double empirical_order = 0.0;    // mean slope across {steps, 2 steps, 4 steps}
    std::vector<double> deviations;  // one per resolution
};

struct SplittingOptions {
    double piece_step_fraction = 0.5;  // inner RK4 step as fraction of a substep
    double reference_step = 1.0 / 4096.0;
    double sum_check_tolerance = 1e-10;
};

/// Compose the chart-local Hamiltonian flows over `steps` substeps and
/// compare the endpoints against the flow of the summed Hamiltonian on the
/// sample set. When `reference` is given, the pieces are first checked to
/// sum to it.
SplittingReport compose_local_flows(const Manifold& m, const std::vector<ScalarField>& pieces,
                                    Splitting scheme, int steps, const std::vector<Point>& samples,
                                    const ScalarField* reference = nullptr,
                                    const SplittingOptions& opts = {});

/// Endpoint of the split flow alone (used for support/equivariance checks).
Point split_flow(const Manifold& m, const std::vector<ScalarField>& pieces, Splitting scheme,
                 int steps, const Point& start, const SplittingOptions& opts = {});

}  // namespace cosym
