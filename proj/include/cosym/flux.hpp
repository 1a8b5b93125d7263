#pragma once

// Co-flux of isotopies and the flux lattice.
//
// The flux of an isotopy {phi_t} with generator X_t is the class of
// int_0^1 phi_t^* ( i_{X_t} omega + eta(X_t) eta ) dt, computed with the
// pullback inside the integral. Classes are represented by their pairings
// against the coordinate cycle basis; the pairing against the theta cycle
// is kept separate from the 2n base pairings (eta_component), so either
// convention for classes vanishing on the Reeb field can be applied on top.

#include <optional>
#include <string>
#include <vector>

#include "cosym/dynamics.hpp"
#include "cosym/forms.hpp"
#include "cosym/manifold.hpp"

namespace cosym {

struct Cycle {
    std::string label;
    std::function<std::vector<double>(double)> position;  // s in [0,1] -> raw coordinates
    std::function<std::vector<double>(double)> velocity;
};

struct CycleBasis {
    std::vector<Cycle> generators;  // ordered theta, x_1..x_n, y_1..y_n
    int quadrature_panels = 128;
};

/// Unit loop along coordinate `axis` through the given base point.
Cycle coordinate_cycle(const Manifold& m, int axis, std::vector<double> through = {});
CycleBasis coordinate_cycle_basis(const Manifold& m, int quadrature_panels = 128);

struct FluxClass {
    std::vector<double> h1_pairings;  // against gamma_{x_1}..gamma_{x_n}, gamma_{y_1}..gamma_{y_n}
    double eta_component = 0.0;       // against gamma_theta, reported separately
    std::vector<std::string> basis_labels;
};

struct FluxOptions {
    int time_quadrature_panels = 32;
    double jacobian_fd_step = 1e-5;
    bool check_loop = true;
    double loop_tolerance = 1e-8;
};

/// Time-averaged flux integrand as a one-form evaluator.
OneForm flux_one_form(const Manifold& m, const Isotopy& iso, int time_quadrature_panels = 32,
                      double jacobian_fd_step = 1e-5);

/// Composite-Simpson line integral of alpha along a closed cycle.
double pair_with_cycle(const Manifold& m, const OneForm& alpha, const Cycle& gamma,
                       int panels = 128);

/// Pairings of the flux of `loop` against the basis. With check_loop set the
/// time-one map is verified to be the identity on a sample grid first.
FluxClass flux_class(const Manifold& m, const Isotopy& loop, const CycleBasis& basis,
                     const FluxOptions& opts = {});

struct Lattice {
    std::vector<std::vector<double>> generator_vectors;
    double tolerance = 1e-8;
    bool degenerate = false;
    std::optional<double> min_nonzero_norm;  // over small integer combinations
    std::optional<bool> matches_expected;    // against (+)_k a_k (Z dx_k (+) Z dy_k)
};

struct LatticeOptions {
    FluxOptions flux;
    double tolerance = 1e-8;
    int enumeration_radius = 2;
};

Lattice flux_lattice(const Manifold& m, const std::vector<Isotopy>& loops, const CycleBasis& basis,
                     const LatticeOptions& opts = {});

/// Lattice analysis of already-computed flux pairing vectors.
Lattice analyze_lattice(const Manifold& m, std::vector<std::vector<double>> vectors,
                        double tolerance = 1e-8, int enumeration_radius = 2);

/// Integral of omega over the (x_k, y_k) coordinate 2-torus; equals a_k.
double period_over_2cycle(const Manifold& m, int k, int panels = 64);

/// Integral of a two-form over a parameterized 2-cycle ([0,1]^2 domain).
double surface_integral(const Manifold& m, const TwoForm& w,
                        const std::function<std::vector<double>(double, double)>& position,
                        const std::function<std::vector<double>(double, double)>& d_du,
                        const std::function<std::vector<double>(double, double)>& d_dv,
                        int panels_u = 64, int panels_v = 64);

std::string flux_class_json(const FluxClass& flux);

}  // namespace cosym
