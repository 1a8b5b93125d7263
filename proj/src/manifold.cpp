#include "cosym/manifold.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cosym/config.hpp"

namespace cosym {

double wrap_unit(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r -= 1.0;
    if (r < 0.0) r += 1.0;
    return r;
}

double wrap(double x, double period) { return period * wrap_unit(x / period); }

double wrap_diff(double a, double b, double period) {
    double d = wrap(a - b, period);
    if (d > 0.5 * period) d -= period;
    return d;
}

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::domain_error(std::string("non-finite ") + what);
}

MonodromyMatrix inverse_of(const MonodromyMatrix& m) {
    // det = 1, so the inverse is the integer adjugate.
    return MonodromyMatrix{{{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}}};
}

// Iterated application keeps the base in [0,1), so integer growth of A^k
// never overflows. Crossing counts beyond this bound are a usage error.
constexpr std::int64_t kMaxCrossings = 1 << 20;

}  // namespace

Manifold Manifold::product_torus(int n, std::vector<double> weights, double reeb_period) {
    if (n < 1) throw std::invalid_argument("product torus requires n >= 1");
    if (static_cast<int>(weights.size()) != n)
        throw std::invalid_argument("expected one weight per symplectic pair");
    for (double a : weights) {
        require_finite(a, "weight");
        if (a <= 0.0) throw std::invalid_argument("weights must be strictly positive");
    }
    require_finite(reeb_period, "reeb_period");
    if (reeb_period <= 0.0) throw std::invalid_argument("reeb_period must be positive");

    Manifold m;
    m.kind_ = ManifoldKind::ProductTorus;
    m.n_ = n;
    m.weights_ = std::move(weights);
    m.period_ = reeb_period;
    return m;
}

Manifold Manifold::mapping_torus(const MonodromyMatrix& monodromy, double reeb_period) {
    const std::int64_t det =
        monodromy[0][0] * monodromy[1][1] - monodromy[0][1] * monodromy[1][0];
    if (det != 1)
        throw std::invalid_argument("monodromy must have determinant 1 (omega_F preserving)");
    require_finite(reeb_period, "reeb_period");
    if (reeb_period <= 0.0) throw std::invalid_argument("reeb_period must be positive");

    Manifold m;
    m.kind_ = ManifoldKind::MappingTorus;
    m.n_ = 1;
    m.weights_ = {1.0};
    m.period_ = reeb_period;
    m.monodromy_ = monodromy;
    return m;
}

const MonodromyMatrix& Manifold::monodromy() const {
    if (kind_ != ManifoldKind::MappingTorus)
        throw std::logic_error("monodromy is defined for mapping tori only");
    return monodromy_;
}

std::pair<Point, std::int64_t> Manifold::canonicalize_counted(
    double theta, const std::vector<double>& base) const {
    require_finite(theta, "theta");
    if (static_cast<int>(base.size()) != 2 * n_)
        throw std::invalid_argument("expected 2n base coordinates");
    for (double b : base) require_finite(b, "base coordinate");

    std::int64_t k = static_cast<std::int64_t>(std::floor(theta / period_));
    double th = theta - static_cast<double>(k) * period_;
    if (th >= period_) {
        th -= period_;
        ++k;
    }
    if (th < 0.0) {
        th += period_;
        --k;
    }

    Point p;
    p.theta = th;
    p.base.resize(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) p.base[i] = wrap_unit(base[i]);

    if (kind_ == ManifoldKind::MappingTorus && k != 0) {
        if (std::llabs(k) > kMaxCrossings)
            throw std::domain_error("too many seam crossings in canonicalize");
        const MonodromyMatrix mat = k > 0 ? monodromy_ : inverse_of(monodromy_);
        for (std::int64_t c = 0; c < std::llabs(k); ++c) {
            const double x = p.base[0], y = p.base[1];
            p.base[0] = wrap_unit(static_cast<double>(mat[0][0]) * x +
                                  static_cast<double>(mat[0][1]) * y);
            p.base[1] = wrap_unit(static_cast<double>(mat[1][0]) * x +
                                  static_cast<double>(mat[1][1]) * y);
        }
    }
    return {p, k};
}

Point Manifold::canonicalize(double theta, const std::vector<double>& base) const {
    return canonicalize_counted(theta, base).first;
}

Point Manifold::canonicalize(const std::vector<double>& raw) const {
    if (static_cast<int>(raw.size()) != dim())
        throw std::invalid_argument("expected 2n+1 coordinates");
    return canonicalize(raw[0], std::vector<double>(raw.begin() + 1, raw.end()));
}

Tangent Manifold::reeb_vector(const Point& p) const {
    Tangent v;
    v.d_theta = 1.0;
    v.d_base.assign(p.base.size(), 0.0);
    return v;
}

Point Manifold::reeb_flow(const Point& p, double s) const {
    require_finite(s, "flow time");
    return canonicalize(p.theta + s, p.base);
}

Tangent Manifold::transport_tangent(const Tangent& v, std::int64_t crossings) const {
    if (kind_ != ManifoldKind::MappingTorus || crossings == 0) return v;
    const MonodromyMatrix mat = crossings > 0 ? monodromy_ : inverse_of(monodromy_);
    Tangent out = v;
    for (std::int64_t c = 0; c < std::llabs(crossings); ++c) {
        const double x = out.d_base[0], y = out.d_base[1];
        out.d_base[0] = static_cast<double>(mat[0][0]) * x + static_cast<double>(mat[0][1]) * y;
        out.d_base[1] = static_cast<double>(mat[1][0]) * x + static_cast<double>(mat[1][1]) * y;
    }
    return out;
}

double Manifold::distance(const Point& a, const Point& b) const {
    double d = std::fabs(wrap_diff(a.theta, b.theta, period_));
    for (std::size_t i = 0; i < a.base.size(); ++i)
        d = std::max(d, std::fabs(wrap_diff(a.base[i], b.base[i], 1.0)));
    return d;
}

std::string Manifold::to_config() const {
    std::ostringstream out;
    out.precision(17);
    if (kind_ == ManifoldKind::ProductTorus) {
        out << "kind = product_torus\n";
        out << "n = " << n_ << "\n";
        out << "weights =";
        for (double a : weights_) out << " " << a;
        out << "\n";
    } else {
        out << "kind = mapping_torus\n";
        out << "monodromy_row0 = " << monodromy_[0][0] << " " << monodromy_[0][1] << "\n";
        out << "monodromy_row1 = " << monodromy_[1][0] << " " << monodromy_[1][1] << "\n";
    }
    out << "reeb_period = " << period_ << "\n";
    return out.str();
}

Manifold Manifold::from_config(const std::string& text) {
    std::istringstream in(text);
    return from_config(in);
}

Manifold Manifold::from_config(std::istream& in) {
    return from_config(KeyValueConfig::parse(in));
}

Manifold Manifold::from_config(const KeyValueConfig& cfg) {
    const std::string kind = cfg.get_string("kind");
    const double period = cfg.get_double("reeb_period", 1.0);
    if (kind == "product_torus") {
        const int n = cfg.get_int("n", 1);
        std::vector<double> weights = cfg.get_doubles("weights", std::vector<double>(n, 1.0));
        return product_torus(n, std::move(weights), period);
    }
    if (kind == "mapping_torus") {
        const auto r0 = cfg.get_ints("monodromy_row0");
        const auto r1 = cfg.get_ints("monodromy_row1");
        if (r0.size() != 2 || r1.size() != 2)
            throw std::invalid_argument("monodromy rows must have two integer entries");
        return mapping_torus(MonodromyMatrix{{{r0[0], r0[1]}, {r1[0], r1[1]}}}, period);
    }
    throw std::invalid_argument("unknown manifold kind: " + kind);
}

std::vector<double> to_coords(const Point& p) {
    std::vector<double> c;
    c.reserve(p.base.size() + 1);
    c.push_back(p.theta);
    c.insert(c.end(), p.base.begin(), p.base.end());
    return c;
}

Point point_from_coords(const Manifold& m, const std::vector<double>& coords) {
    return m.canonicalize(coords);
}

std::vector<Point> random_points(const Manifold& m, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<Point> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Point p;
        p.theta = uniform() * m.period();
        p.base.resize(static_cast<std::size_t>(2 * m.n()));
        for (double& b : p.base) b = uniform();
        pts.push_back(std::move(p));
    }
    return pts;
}

std::vector<Point> grid_points(const Manifold& m, int per_axis) {
    if (per_axis < 1) throw std::invalid_argument("per_axis must be positive");
    const int d = m.dim();
    std::vector<Point> pts;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    while (true) {
        Point p;
        p.theta = m.period() * (idx[0] + 0.5) / per_axis;
        p.base.resize(static_cast<std::size_t>(d - 1));
        for (int i = 1; i < d; ++i) p.base[static_cast<std::size_t>(i - 1)] = (idx[static_cast<std::size_t>(i)] + 0.5) / per_axis;
        pts.push_back(std::move(p));
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[static_cast<std::size_t>(i)] < per_axis) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i == d) break;
    }
    return pts;
}

}  // namespace cosym
