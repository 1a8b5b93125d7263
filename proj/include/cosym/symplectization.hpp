#pragma once

// Symplectization M x S^1 with Omega = p* omega + p* eta ^ du.
//
// Lifted coordinates are (theta, x_1..x_n, y_1..y_n, u) with u in [0, 2 pi);
// the u circle keeps its own period independent of the manifold's T. Lifted
// Hamiltonians involve the angle u itself and are evaluated on the branch
// [0, 2 pi); the invariant object is their differential.

#include <functional>
#include <vector>

#include "cosym/dynamics.hpp"
#include "cosym/flux.hpp"
#include "cosym/forms.hpp"
#include "cosym/manifold.hpp"

namespace cosym {

struct LiftedPoint {
    Point base_point;
    double u = 0.0;
};

LiftedPoint canonicalize_lifted(const Manifold& m, const std::vector<double>& raw);
std::vector<double> lifted_coords(const LiftedPoint& p);

/// Omega as a (2n+2) x (2n+2) antisymmetric matrix at p.
Eigen::MatrixXd symplectization_matrix(const Manifold& m, const LiftedPoint& p);

/// Lambda_t(x) = int_0^t eta(phi_dot_s)(phi_s(x)) ds by composite Simpson
/// along the trajectory; the lifted rotation subtracts this from u.
double rotation_factor(const Manifold& m, const Isotopy& iso, const Point& x, double t,
                       int quadrature_panels = 64);

struct LiftedIsotopy {
    /// (x, u) -> (phi_t(x), u - Lambda_t(x) mod 2 pi)
    std::function<LiftedPoint(double, const LiftedPoint&)> map;
};

LiftedIsotopy lift_isotopy(const Manifold& m, const Isotopy& iso, int quadrature_panels = 64);

struct LiftedField {
    std::function<double(double, const LiftedPoint&)> value;
};

/// F_t(x) + eta(phi_dot_t)(x) * u, the Hamiltonian of the lifted isotopy.
LiftedField lift_hamiltonian(const Manifold& m, const ScalarField& f, const Isotopy& iso);

struct SymplecticReport {
    double max_residual = 0.0;  // max |J^T Omega J - Omega| entrywise
    std::size_t samples = 0;
};

SymplecticReport verify_symplectic(const Manifold& m,
                                   const std::function<LiftedPoint(const LiftedPoint&)>& map,
                                   const std::vector<LiftedPoint>& samples, double fd_step = 1e-5);

/// int_{gamma x S^1} Omega; equals 2 pi int_gamma eta for the model cycles.
double mixed_cycle_pairing(const Manifold& m, const Cycle& gamma, int panels_u = 64,
                           int panels_v = 64);

std::vector<LiftedPoint> random_lifted_points(const Manifold& m, std::size_t count,
                                              std::uint64_t seed);

}  // namespace cosym
