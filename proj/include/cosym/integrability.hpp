#pragma once

// Liouville integrability checks for Reeb-invariant Hamiltonians and the
// mapping-torus monodromy extraction.
//
// The Reeb action integral is realized as the angle function theta on its
// fundamental branch: its differential is eta (well defined globally), it
// has constant Reeb derivative, and its leafwise bracket with every
// theta-independent integral vanishes. It enters the independence (rank) and
// commutation checks; drift along flows is reported for the leafwise
// integrals and the Hamiltonian, which are the conserved quantities.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cosym/dynamics.hpp"
#include "cosym/forms.hpp"
#include "cosym/manifold.hpp"

namespace cosym {

struct IntegralSet {
    std::vector<ScalarField> integrals;  // n leafwise, Reeb-invariant fields
    ScalarField reeb_action;
    std::vector<std::string> labels;
};

ScalarField reeb_action_field(const Manifold& m);

/// I_k = sin(2 pi x_k) plus the Reeb action.
IntegralSet separable_integral_set(const Manifold& m);

struct CommutingReport {
    double max_bracket = 0.0;        // pairwise, including the Reeb action
    double max_reeb_derivative = 0.0;
    int gradient_rank = 0;           // min over samples of rank{dI_1..dI_n, eta}
    bool pass = false;
};

CommutingReport verify_commuting(const Manifold& m, const IntegralSet& set,
                                 const std::vector<Point>& samples, double tolerance = 1e-10);

struct DriftReport {
    std::vector<double> integral_drift;  // max |I_k(p_t) - I_k(p_0)| along the flow
    double hamiltonian_drift = 0.0;
    FlowResult flow;
};

/// Integrate the combined field X_H + xi and track the integrals. Throws if
/// H fails to be Reeb-invariant or to commute with some I_k on the samples.
DriftReport conservation_along_flow(const Manifold& m, const ScalarField& h,
                                    const IntegralSet& set, const Point& start, double duration,
                                    double step, double bracket_tolerance = 1e-8);

struct MonodromyReport {
    MonodromyMatrix matrix{{{1, 0}, {0, 1}}};
    double fit_residual = 0.0;
    std::int64_t determinant = 1;
};

/// Recover the monodromy by fitting the time-T Reeb map on a fiber frame at
/// theta = 0; requires a 2-dimensional fiber (n = 1).
MonodromyReport extract_monodromy(const Manifold& m);

/// max |omega(v_i, v_j)| over the invariant-torus tangent frames
/// (xi, X_{I_1}, .., X_{I_n}) at the samples.
double max_isotropy_residual(const Manifold& m, const IntegralSet& set,
                             const std::vector<Point>& samples);

void write_point_cloud_csv(std::ostream& out, const Manifold& m, const std::vector<Point>& cloud);

}  // namespace cosym
