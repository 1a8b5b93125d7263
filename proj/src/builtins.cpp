#include "cosym/builtins.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cosym {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double smootherstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smootherstep_derivative(double s) { return 30.0 * s * s * (s - 1.0) * (s - 1.0); }

}  // namespace

double plateau_bump_1d(double u, double r1, double r2) {
    const double a = std::fabs(u);
    if (a <= r1) return 1.0;
    if (a >= r2) return 0.0;
    const double s = (a - r1) / (r2 - r1);
    return 0.5 * (1.0 + std::cos(std::numbers::pi * smootherstep(s)));
}

double plateau_bump_1d_derivative(double u, double r1, double r2) {
    const double a = std::fabs(u);
    if (a <= r1 || a >= r2) return 0.0;
    const double s = (a - r1) / (r2 - r1);
    const double d = -0.5 * std::numbers::pi * std::sin(std::numbers::pi * smootherstep(s)) *
                     smootherstep_derivative(s) / (r2 - r1);
    return u < 0.0 ? -d : d;
}

double PlateauBump::value(const Point& p) const {
    double v = 1.0;
    for (std::size_t i = 0; i < center.size(); ++i) {
        v *= plateau_bump_1d(wrap_diff(p.base[i], center[i], 1.0), plateau_radius[i],
                             support_radius[i]);
        if (v == 0.0) return 0.0;
    }
    return v;
}

std::vector<double> PlateauBump::gradient_coords(const Point& p) const {
    const std::size_t nb = center.size();
    std::vector<double> factors(nb), derivs(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        const double u = wrap_diff(p.base[i], center[i], 1.0);
        factors[i] = plateau_bump_1d(u, plateau_radius[i], support_radius[i]);
        derivs[i] = plateau_bump_1d_derivative(u, plateau_radius[i], support_radius[i]);
    }
    std::vector<double> g(nb + 1, 0.0);
    for (std::size_t i = 0; i < nb; ++i) {
        double prod = derivs[i];
        for (std::size_t j = 0; j < nb; ++j)
            if (j != i) prod *= factors[j];
        g[i + 1] = prod;
    }
    return g;
}

ScalarField bump_field(const Manifold& m, std::vector<double> center, double plateau_radius,
                       double support_radius) {
    const std::size_t nb = static_cast<std::size_t>(2 * m.n());
    if (center.size() != nb) throw std::invalid_argument("bump center needs 2n coordinates");
    if (!(0.0 < plateau_radius && plateau_radius < support_radius && support_radius <= 0.5))
        throw std::invalid_argument("bump radii must satisfy 0 < r1 < r2 <= 1/2");
    PlateauBump bump{std::move(center), std::vector<double>(nb, plateau_radius),
                     std::vector<double>(nb, support_radius)};
    ScalarField f;
    f.value = [bump](double, const Point& p) { return bump.value(p); };
    f.gradient = [bump](double, const Point& p) { return bump.gradient_coords(p); };
    f.reeb_invariant = true;
    return f;
}

ScalarField theta_bump_field(const Manifold& m, std::vector<double> center, double plateau_radius,
                             double support_radius) {
    const ScalarField bump = bump_field(m, std::move(center), plateau_radius, support_radius);
    const double omega = kTwoPi / m.period();
    ScalarField f;
    f.value = [bump, omega](double t, const Point& p) {
        return std::sin(omega * p.theta) * bump.value(t, p);
    };
    f.gradient = [bump, omega](double t, const Point& p) {
        std::vector<double> g = bump.gradient(t, p);
        const double s = std::sin(omega * p.theta);
        for (double& v : g) v *= s;
        g[0] += omega * std::cos(omega * p.theta) * bump.value(t, p);
        return g;
    };
    f.reeb_invariant = false;
    return f;
}

ScalarField constant_field(double v) {
    ScalarField f;
    f.value = [v](double, const Point&) { return v; };
    f.gradient = [](double, const Point& p) {
        return std::vector<double>(p.base.size() + 1, 0.0);
    };
    f.reeb_invariant = true;
    return f;
}

namespace {

ScalarField base_trig_field(const Manifold& m, int axis_offset, int k, bool use_sin) {
    if (k < 1 || k > m.n()) throw std::invalid_argument("coordinate index out of range");
    const std::size_t slot = static_cast<std::size_t>(axis_offset + k - 1);
    ScalarField f;
    f.value = [slot, use_sin](double, const Point& p) {
        const double arg = kTwoPi * p.base[slot];
        return use_sin ? std::sin(arg) : std::cos(arg);
    };
    f.gradient = [slot, use_sin](double, const Point& p) {
        std::vector<double> g(p.base.size() + 1, 0.0);
        const double arg = kTwoPi * p.base[slot];
        g[slot + 1] = use_sin ? kTwoPi * std::cos(arg) : -kTwoPi * std::sin(arg);
        return g;
    };
    f.reeb_invariant = true;
    return f;
}

}  // namespace

ScalarField sin_x_field(const Manifold& m, int k) { return base_trig_field(m, 0, k, true); }
ScalarField sin_y_field(const Manifold& m, int k) { return base_trig_field(m, m.n(), k, true); }
ScalarField cos_x_field(const Manifold& m, int k) { return base_trig_field(m, 0, k, false); }

ScalarField sin_theta_field(const Manifold& m) {
    const double omega = kTwoPi / m.period();
    ScalarField f;
    f.value = [omega](double, const Point& p) { return std::sin(omega * p.theta); };
    f.gradient = [omega](double, const Point& p) {
        std::vector<double> g(p.base.size() + 1, 0.0);
        g[0] = omega * std::cos(omega * p.theta);
        return g;
    };
    f.reeb_invariant = false;
    return f;
}

ScalarField sinx_siny_field(const Manifold& m) {
    return product_field(sin_x_field(m, 1), sin_y_field(m, 1));
}

std::pair<ScalarField, ScalarField> noncommuting_pair(const Manifold& m) {
    // Supported in [0.15, 0.85]^2 of the (x_1, y_1) square, clear of the seams.
    const std::size_t nb = static_cast<std::size_t>(2 * m.n());
    const std::vector<double> center(nb, 0.5);
    const ScalarField rho = bump_field(m, center, 0.15, 0.35);

    auto coordinate_factor = [nb](std::size_t slot) {
        ScalarField f;
        f.value = [slot](double, const Point& p) { return p.base[slot] - 0.5; };
        f.gradient = [slot, nb](double, const Point&) {
            std::vector<double> g(nb + 1, 0.0);
            g[slot + 1] = 1.0;
            return g;
        };
        f.reeb_invariant = true;
        return f;
    };
    return {product_field(rho, coordinate_factor(0)),
            product_field(rho, coordinate_factor(static_cast<std::size_t>(m.n())))};
}

ScalarField product_field(const ScalarField& f, const ScalarField& g) {
    ScalarField out;
    out.value = [f, g](double t, const Point& p) { return f.value(t, p) * g.value(t, p); };
    if (f.gradient && g.gradient) {
        out.gradient = [f, g](double t, const Point& p) {
            const double fv = f.value(t, p), gv = g.value(t, p);
            std::vector<double> grad = f.gradient(t, p);
            const std::vector<double> gg = g.gradient(t, p);
            for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = grad[i] * gv + fv * gg[i];
            return grad;
        };
    }
    out.reeb_invariant = f.reeb_invariant && g.reeb_invariant;
    return out;
}

ScalarField sum_field(const std::vector<ScalarField>& terms) {
    if (terms.empty()) return constant_field(0.0);
    ScalarField out;
    bool all_gradients = true, all_invariant = true;
    for (const ScalarField& f : terms) {
        all_gradients = all_gradients && static_cast<bool>(f.gradient);
        all_invariant = all_invariant && f.reeb_invariant;
    }
    out.value = [terms](double t, const Point& p) {
        double s = 0.0;
        for (const ScalarField& f : terms) s += f.value(t, p);
        return s;
    };
    if (all_gradients) {
        out.gradient = [terms](double t, const Point& p) {
            std::vector<double> g = terms.front().gradient(t, p);
            for (std::size_t i = 1; i < terms.size(); ++i) {
                const std::vector<double> gi = terms[i].gradient(t, p);
                for (std::size_t j = 0; j < g.size(); ++j) g[j] += gi[j];
            }
            return g;
        };
    }
    out.reeb_invariant = all_invariant;
    return out;
}

ScalarField scaled_field(const ScalarField& f, double amplitude) {
    ScalarField out;
    out.value = [f, amplitude](double t, const Point& p) { return amplitude * f.value(t, p); };
    if (f.gradient) {
        out.gradient = [f, amplitude](double t, const Point& p) {
            std::vector<double> g = f.gradient(t, p);
            for (double& v : g) v *= amplitude;
            return g;
        };
    }
    out.reeb_invariant = f.reeb_invariant;
    return out;
}

ScalarField builtin_field(const Manifold& m, const std::string& name) {
    const std::vector<double> center(static_cast<std::size_t>(2 * m.n()), 0.5);
    if (name == "zero") return constant_field(0.0);
    if (name == "one") return constant_field(1.0);
    if (name == "sin_theta") return sin_theta_field(m);
    if (name == "bump") return bump_field(m, center, 0.15, 0.35);
    if (name == "wide_bump") return bump_field(m, center, 0.25, 0.48);
    if (name == "theta_bump") return theta_bump_field(m, center, 0.15, 0.35);
    if (name == "sinx1_siny1") return sinx_siny_field(m);
    if (name == "perf_h") return noncommuting_pair(m).first;
    if (name == "perf_k") return noncommuting_pair(m).second;
    auto indexed = [&](const std::string& prefix) -> int {
        if (name.rfind(prefix, 0) != 0) return 0;
        try {
            return std::stoi(name.substr(prefix.size()));
        } catch (const std::exception&) {
            return 0;
        }
    };
    if (const int k = indexed("sin_x")) return sin_x_field(m, k);
    if (const int k = indexed("sin_y")) return sin_y_field(m, k);
    if (const int k = indexed("cos_x")) return cos_x_field(m, k);
    throw std::invalid_argument("unknown builtin field: " + name);
}

std::vector<std::string> builtin_field_names() {
    return {"zero",       "one",    "sin_theta", "bump",   "wide_bump", "theta_bump",
            "sinx1_siny1", "perf_h", "perf_k",    "sin_x1", "sin_y1",    "cos_x1"};
}

Isotopy translation_loop(const Manifold& m, int axis, double step) {
    if (axis < 0 || axis >= m.dim()) throw std::invalid_argument("translation axis out of range");
    std::vector<double> velocity(static_cast<std::size_t>(m.dim()), 0.0);
    velocity[static_cast<std::size_t>(axis)] = axis == 0 ? m.period() : 1.0;
    return translation_isotopy(m, velocity, step);
}

Isotopy translation_isotopy(const Manifold& m, const std::vector<double>& velocity, double step) {
    if (static_cast<int>(velocity.size()) != m.dim())
        throw std::invalid_argument("velocity needs 2n+1 components");
    Isotopy iso;
    iso.generator.evaluator = [velocity](double, const Point&) {
        Tangent v;
        v.d_theta = velocity[0];
        v.d_base.assign(velocity.begin() + 1, velocity.end());
        return v;
    };
    iso.step = step;
    return iso;
}

Isotopy reeb_isotopy(const Manifold& m, double total_time, double step) {
    std::vector<double> velocity(static_cast<std::size_t>(m.dim()), 0.0);
    velocity[0] = total_time;
    return translation_isotopy(m, velocity, step);
}

Isotopy hamiltonian_isotopy(const Manifold& m, const ScalarField& h, double step,
                            VerticalSign sign) {
    Isotopy iso;
    iso.generator = hamiltonian_vector_field(m, h, sign);
    iso.step = step;
    return iso;
}

}  // namespace cosym
