#pragma once

// Explicit closed cosymplectic model manifolds.
//
// Two families, both (2n+1)-dimensional with coordinates ordered
// (theta, x_1..x_n, y_1..y_n) everywhere in this library:
//
//   ProductTorus:  S^1_T x T^{2n},  eta = d(theta),  omega = sum_k a_k dx_k ^ dy_k.
//   MappingTorus:  (T^2 x [0,T]) / (b, T) ~ (A b, 0) for an integer matrix A
//                  with det A = 1 (n = 1 only),  eta = d(theta),  omega = dx ^ dy.
//
// The Reeb field is d/d(theta) in both; its flow is the exact translation
// theta -> theta + s, with the monodromy applied at each seam crossing of the
// mapping torus. theta lives in [0, T), base coordinates in [0, 1).

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cosym {

class KeyValueConfig;

enum class ManifoldKind { ProductTorus, MappingTorus };

/// Canonical point: theta in [0, T), base coordinates in [0, 1).
struct Point {
    double theta = 0.0;
    std::vector<double> base;
};

/// Velocity components against (d/d theta, d/d x_1, .., d/d y_n).
struct Tangent {
    double d_theta = 0.0;
    std::vector<double> d_base;
};

using MonodromyMatrix = std::array<std::array<std::int64_t, 2>, 2>;

double wrap_unit(double x);                              // into [0, 1)
double wrap(double x, double period);                    // into [0, period)
double wrap_diff(double a, double b, double period);     // a - b in (-period/2, period/2]

class Manifold {
  public:
    static Manifold product_torus(int n, std::vector<double> weights, double reeb_period = 1.0);
    static Manifold mapping_torus(const MonodromyMatrix& monodromy, double reeb_period = 1.0);

    ManifoldKind kind() const { return kind_; }
    int n() const { return n_; }
    int dim() const { return 2 * n_ + 1; }
    double period() const { return period_; }
    const std::vector<double>& weights() const { return weights_; }
    double weight(int k) const { return weights_[static_cast<std::size_t>(k)]; }
    const MonodromyMatrix& monodromy() const;

    /// Reduce raw coordinates (theta, x.., y..) to the fundamental domain,
    /// applying the monodromy once per seam crossing on the mapping torus.
    Point canonicalize(const std::vector<double>& raw) const;
    Point canonicalize(double theta, const std::vector<double>& base) const;

    /// Same, also reporting the (signed) number of seam crossings.
    std::pair<Point, std::int64_t> canonicalize_counted(double theta,
                                                        const std::vector<double>& base) const;

    /// Reeb vector field: (1, 0, ..., 0); satisfies eta(xi) = 1, i_xi omega = 0.
    Tangent reeb_vector(const Point& p) const;

    /// Exact Reeb flow: theta -> theta + s with seam handling.
    Point reeb_flow(const Point& p, double s) const;

    /// Express a tangent given in one fundamental-domain chart in the chart
    /// reached after `crossings` seam transitions (identity on the product torus).
    Tangent transport_tangent(const Tangent& v, std::int64_t crossings) const;

    /// Max-norm distance with all coordinates compared modulo their periods.
    double distance(const Point& a, const Point& b) const;

    std::string to_config() const;
    static Manifold from_config(const std::string& text);
    static Manifold from_config(std::istream& in);
    static Manifold from_config(const KeyValueConfig& cfg);

  private:
    Manifold() = default;

    ManifoldKind kind_ = ManifoldKind::ProductTorus;
    int n_ = 1;
    double period_ = 1.0;
    std::vector<double> weights_;      // all 1.0 on the mapping torus
    MonodromyMatrix monodromy_{{{1, 0}, {0, 1}}};
};

std::vector<double> to_coords(const Point& p);
Point point_from_coords(const Manifold& m, const std::vector<double>& coords);

/// Deterministic uniform samples; doubles are derived from raw mt19937_64
/// output so results do not depend on the standard library's distributions.
std::vector<Point> random_points(const Manifold& m, std::size_t count, std::uint64_t seed);

/// Lattice grid with per_axis points per coordinate, offset to cell centers.
std::vector<Point> grid_points(const Manifold& m, int per_axis);

}  // namespace cosym
