#pragma once

// Catalog of test fields and standard isotopies used across checks and by
// the command-line tool (fields are referenced by name in configs).

#include <string>
#include <vector>

#include "cosym/dynamics.hpp"
#include "cosym/forms.hpp"
#include "cosym/manifold.hpp"

namespace cosym {

/// C^3 bump with value 1 on |u| <= plateau_radius and 0 beyond
/// support_radius; the falloff is cos(pi * smootherstep) so several
/// derivatives vanish at both ends.
double plateau_bump_1d(double u, double plateau_radius, double support_radius);
double plateau_bump_1d_derivative(double u, double plateau_radius, double support_radius);

struct PlateauBump {
    std::vector<double> center;          // base coordinates (size 2n)
    std::vector<double> plateau_radius;  // per base dimension
    std::vector<double> support_radius;

    double value(const Point& p) const;
    std::vector<double> gradient_coords(const Point& p) const;  // size 2n+1, zero theta slot
};

/// theta-independent bump field on the base torus (same radii every axis).
ScalarField bump_field(const Manifold& m, std::vector<double> center, double plateau_radius,
                       double support_radius);

/// sin(2 pi theta / T) * bump: a compactly supported field with nonzero
/// Reeb derivative, used to exercise vertical motion.
ScalarField theta_bump_field(const Manifold& m, std::vector<double> center, double plateau_radius,
                             double support_radius);

ScalarField constant_field(double v);
ScalarField sin_x_field(const Manifold& m, int k);  // sin(2 pi x_k), k in 1..n
ScalarField sin_y_field(const Manifold& m, int k);
ScalarField cos_x_field(const Manifold& m, int k);
ScalarField sin_theta_field(const Manifold& m);     // sin(2 pi theta / T)
ScalarField sinx_siny_field(const Manifold& m);     // sin(2 pi x_1) sin(2 pi y_1)

/// Compactly supported pair with nonvanishing leafwise bracket:
/// rho * (x_1 - cx) and rho * (y_1 - cy) on a chart away from the seams.
std::pair<ScalarField, ScalarField> noncommuting_pair(const Manifold& m);

/// Lookup by name ("bump", "theta_bump", "sin_x1", "sin_theta", ...).
ScalarField builtin_field(const Manifold& m, const std::string& name);
std::vector<std::string> builtin_field_names();

/// f * g with product-rule gradient when both factors carry one.
ScalarField product_field(const ScalarField& f, const ScalarField& g);
ScalarField sum_field(const std::vector<ScalarField>& terms);
ScalarField scaled_field(const ScalarField& f, double amplitude);

/// Unit-time loop translating coordinate `axis` (0 = theta by one period,
/// 1..2n = base axis by one lattice unit).
Isotopy translation_loop(const Manifold& m, int axis, double step = 0.01);

/// Constant-coefficient translation isotopy (not necessarily a loop).
Isotopy translation_isotopy(const Manifold& m, const std::vector<double>& velocity,
                            double step = 0.01);

Isotopy reeb_isotopy(const Manifold& m, double total_time, double step = 0.01);

Isotopy hamiltonian_isotopy(const Manifold& m, const ScalarField& h, double step = 1e-2,
                            VerticalSign sign = VerticalSign::DifferentialConvention);

}  // namespace cosym
