#pragma once

// Pointwise exterior calculus on the model manifolds.
//
// Covector coefficients are always ordered (theta, x_1..x_n, y_1..y_n),
// matching Point/Tangent components. Two-form values are antisymmetric
// matrices W with W(i, j) = omega(e_i, e_j) on the coordinate frame.
//
// The structure map of the pair (eta, omega) is omega + eta (x) eta; `flat`
// applies it to a tangent vector, `sharp` inverts it (the system is uniquely
// solvable because eta ^ omega^n is a volume form).

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "cosym/manifold.hpp"

namespace cosym {

struct OneForm {
    std::function<std::vector<double>(const Point&)> coefficients;
    bool closedness_hint = false;
};

struct TwoForm {
    std::function<Eigen::MatrixXd(const Point&)> matrix;
};

/// Time-dependent scalar on the manifold. `gradient` is optional; when
/// absent, derivatives fall back to finite differences.
struct ScalarField {
    std::function<double(double, const Point&)> value;
    std::function<std::vector<double>(double, const Point&)> gradient;
    bool reeb_invariant = false;
};

struct FdOptions {
    double step = 1e-5;
    bool richardson = false;
};

std::vector<double> eta_coefficients(const Manifold& m, const Point& p);
Eigen::MatrixXd omega_matrix(const Manifold& m, const Point& p);
OneForm eta_form(const Manifold& m);
TwoForm omega_form(const Manifold& m);

/// Analytic gradient if the field carries one, else central differences
/// (4th-order Richardson stencil when requested).
std::vector<double> gradient(const Manifold& m, const ScalarField& f, double t, const Point& p,
                             const FdOptions& fd = {});

/// Exterior derivative of a 0-form at fixed time.
OneForm exterior_derivative(const Manifold& m, const ScalarField& f, double t,
                            const FdOptions& fd = {});

/// (i_X w)_j = sum_i X_i W_ij evaluated at p.
std::vector<double> interior_product(const Manifold& m, const Tangent& x, const TwoForm& w,
                                     const Point& p);

/// omega + eta (x) eta as a matrix at p.
Eigen::MatrixXd structure_matrix(const Manifold& m, const Point& p);

/// flat(X) = i_X omega + eta(X) eta, as covector coefficients at p.
std::vector<double> flat(const Manifold& m, const Tangent& x, const Point& p);

/// Unique X with flat(X) = alpha (dense solve of the structure system).
Tangent sharp(const Manifold& m, const std::vector<double>& alpha, const Point& p);

/// Pfaffian of an even-dimensional antisymmetric matrix (0 for odd sizes).
double pfaffian(const Eigen::MatrixXd& a);

/// eta ^ omega^n evaluated on the coordinate frame at p. On the models this
/// is the constant n! * prod_k a_k; the n! is our fixed normalization.
double volume_pairing(const Manifold& m, const Point& p);

struct VolumeReport {
    double min_abs = 0.0;
    double max_abs = 0.0;
    std::size_t samples = 0;
    bool pass = false;
};

/// Nondegeneracy check of eta ^ omega^n over a sample set.
VolumeReport volume_check(const Manifold& m, const std::vector<Point>& samples);

}  // namespace cosym
