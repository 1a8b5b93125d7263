#pragma once

// Weakly Hamiltonian vector fields and numerical flows.
//
// Sign convention: by default the generator of a Hamiltonian H is the unique
// X with flat(X) = dH, so eta(X) = xi(H) and i_X omega = dH - xi(H) eta.
// The alternative convention flips the vertical component to
// eta(X) = -xi(H) (the horizontal part is the same either way); it is
// selectable because the source constructions use both. With the default,
// H = -c * theta * rho moves points by -c along the Reeb direction on the
// plateau of rho.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cosym/forms.hpp"
#include "cosym/manifold.hpp"

namespace cosym {

struct VectorField {
    std::function<Tangent(double, const Point&)> evaluator;
    std::optional<int> support_chart;
};

enum class Scheme { RK4, Midpoint };

enum class VerticalSign {
    DifferentialConvention,   // flat(X_H) = dH, eta(X_H) = +xi(H)
    TransitivityConvention,   // eta(X_H) = -xi(H)
};

struct Isotopy {
    VectorField generator;
    double t_start = 0.0;
    double t_end = 1.0;
    double step = 1e-2;
    Scheme scheme = Scheme::RK4;
};

struct FlowResult {
    Point endpoint;
    std::vector<std::pair<double, Point>> trajectory;  // filled when recording
    double max_step_residual = 0.0;                    // filled when estimating
};

struct FlowOptions {
    bool record_trajectory = false;
    bool estimate_residual = false;  // step-doubling local error estimate
};

VectorField hamiltonian_vector_field(const Manifold& m, const ScalarField& h,
                                     VerticalSign sign = VerticalSign::DifferentialConvention,
                                     const FdOptions& fd = {});

FlowResult flow(const Manifold& m, const Isotopy& iso, const Point& start,
                const FlowOptions& opts = {});

/// Endpoint of the flow started at `start`.
Point time_one_map(const Manifold& m, const Isotopy& iso, const Point& start);

/// Integrate once and return the points at the requested times (sorted,
/// within [t_start, t_end]). Each gap is covered by whole steps of size
/// at most iso.step.
std::vector<Point> flow_sampled(const Manifold& m, const Isotopy& iso, const Point& start,
                                const std::vector<double>& times);

/// Isotopy whose time-one map inverts the time-one map of `iso`.
Isotopy inverse(const Isotopy& iso);

/// Run `a` on [0, 1/2] and `b` on [1/2, 1] (both must live on [0, 1]).
Isotopy concatenate(const Isotopy& a, const Isotopy& b);

/// Conjugate by the coordinate translation p -> p + shift.
Isotopy conjugate_by_translation(const Manifold& m, const Isotopy& iso,
                                 const std::vector<double>& shift);

struct ConservationReport {
    double eta_residual = 0.0;    // max |phi^* eta - eta|
    double omega_residual = 0.0;  // max |phi^* omega - omega|
};

/// Pull back eta and omega through the time-one map, differentiated with a
/// 5-point stencil. The default step keeps the stencil roundoff near 1e-11
/// and its truncation below the integrator error even for flows with strong
/// high-order derivatives (plateau bumps), so the residual exposes the
/// integrator, not the differentiation.
ConservationReport conservation_check(const Manifold& m, const Isotopy& iso,
                                      const std::vector<Point>& samples, double fd_step = 1e-5);

/// Leafwise bracket sum_j (1/a_j) (dH/dx_j dK/dy_j - dH/dy_j dK/dx_j);
/// the 1/a_j come from i_{X_H} omega = dH on the leaves of the weighted form.
ScalarField poisson_bracket(const Manifold& m, const ScalarField& h, const ScalarField& k,
                            const FdOptions& fd = {});

struct CommutatorSample {
    Point at;
    std::vector<double> displacement;  // C_eps(p) - p, unwrapped coordinates
    std::vector<double> predicted;     // eps^2 X_{H,K}(p)
    double residual = 0.0;             // max-norm of (displacement - predicted)
};

/// Group commutator of the eps-flows of H and K on a sample set, applied as
/// phi_H^eps . phi_K^eps . (phi_H^eps)^-1 . (phi_K^eps)^-1 (rightmost first).
std::vector<CommutatorSample> commutator_flow(const Manifold& m, const ScalarField& h,
                                              const ScalarField& k, double eps, double step,
                                              const std::vector<Point>& samples,
                                              const FdOptions& fd = {});

/// Time-one flow of the transport Hamiltonian -c * theta * rho. Requires z0
/// and z1 on the same Reeb fiber and rho == 1 there; under the default
/// convention the plateau motion is theta -> theta - c.
FlowResult vertical_transport(const Manifold& m, const Point& z0, const Point& z1,
                              const ScalarField& rho, double c,
                              VerticalSign sign = VerticalSign::DifferentialConvention,
                              double step = 1e-3);

/// Chooses c so that the time-one map sends z0.theta to z1.theta.
FlowResult vertical_transport_auto(const Manifold& m, const Point& z0, const Point& z1,
                                   const ScalarField& rho,
                                   VerticalSign sign = VerticalSign::DifferentialConvention,
                                   double step = 1e-3);

void write_trajectory_csv(std::ostream& out, const Manifold& m, const FlowResult& result);

}  // namespace cosym
