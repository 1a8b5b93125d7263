#include "cosym/integrability.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cosym/builtins.hpp"

namespace cosym {

ScalarField reeb_action_field(const Manifold&) {
    ScalarField f;
    f.value = [](double, const Point& p) { return p.theta; };
    f.gradient = [](double, const Point& p) {
        std::vector<double> g(p.base.size() + 1, 0.0);
        g[0] = 1.0;  // d(theta) = eta
        return g;
    };
    f.reeb_invariant = false;  // xi(theta) = 1 (constant, not zero)
    return f;
}

IntegralSet separable_integral_set(const Manifold& m) {
    IntegralSet set;
    for (int k = 1; k <= m.n(); ++k) {
        set.integrals.push_back(sin_x_field(m, k));
        set.labels.push_back("sin_x" + std::to_string(k));
    }
    set.reeb_action = reeb_action_field(m);
    set.labels.push_back("reeb_action");
    return set;
}

CommutingReport verify_commuting(const Manifold& m, const IntegralSet& set,
                                 const std::vector<Point>& samples, double tolerance) {
    if (samples.empty()) throw std::invalid_argument("verify_commuting needs samples");
    CommutingReport report;

    std::vector<ScalarField> all = set.integrals;
    all.push_back(set.reeb_action);
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i; j < all.size(); ++j) {
            const ScalarField bracket = poisson_bracket(m, all[i], all[j]);
            for (const Point& p : samples)
                report.max_bracket =
                    std::max(report.max_bracket, std::fabs(bracket.value(0.0, p)));
        }
    }
    for (const ScalarField& integral : set.integrals) {
        for (const Point& p : samples)
            report.max_reeb_derivative =
                std::max(report.max_reeb_derivative, std::fabs(gradient(m, integral, 0.0, p)[0]));
    }

    const std::size_t count = all.size();
    int min_rank = static_cast<int>(count);
    for (const Point& p : samples) {
        Eigen::MatrixXd g(static_cast<Eigen::Index>(count), m.dim());
        for (std::size_t i = 0; i < count; ++i) {
            const std::vector<double> gi = gradient(m, all[i], 0.0, p);
            for (int c = 0; c < m.dim(); ++c)
                g(static_cast<Eigen::Index>(i), c) = gi[static_cast<std::size_t>(c)];
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
        const Eigen::VectorXd sv = svd.singularValues();
        int rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > 1e-8 * std::max(1.0, sv(0))) ++rank;
        min_rank = std::min(min_rank, rank);
    }
    report.gradient_rank = min_rank;
    report.pass = report.max_bracket <= tolerance && report.max_reeb_derivative <= 1e-10 &&
                  report.gradient_rank == static_cast<int>(count);
    return report;
}

DriftReport conservation_along_flow(const Manifold& m, const ScalarField& h,
                                    const IntegralSet& set, const Point& start, double duration,
                                    double step, double bracket_tolerance) {
    if (!h.value) throw std::invalid_argument("conservation_along_flow needs a Hamiltonian");
    const std::vector<Point> probes = random_points(m, 32, 0xace5);
    for (const Point& p : probes) {
        const double dtheta = gradient(m, h, 0.0, p)[0];
        if (std::fabs(dtheta) > bracket_tolerance) {
            std::ostringstream msg;
            msg << "Hamiltonian is not Reeb-invariant: xi(H) = " << dtheta << " at theta = "
                << p.theta;
            throw std::domain_error(msg.str());
        }
    }
    for (std::size_t k = 0; k < set.integrals.size(); ++k) {
        const ScalarField bracket = poisson_bracket(m, h, set.integrals[k]);
        for (const Point& p : probes) {
            const double v = bracket.value(0.0, p);
            if (std::fabs(v) > bracket_tolerance) {
                std::ostringstream msg;
                msg << "integral " << (k < set.labels.size() ? set.labels[k] : "#") << " does not "
                    << "commute with H: bracket = " << v << " at (" << p.theta;
                for (double b : p.base) msg << ", " << b;
                msg << ")";
                throw std::domain_error(msg.str());
            }
        }
    }

    // Combined evolution: horizontal Hamiltonian part plus the Reeb direction.
    const VectorField xh = hamiltonian_vector_field(m, h);
    Isotopy iso;
    iso.generator.evaluator = [m, xh](double t, const Point& p) {
        Tangent v = xh.evaluator(t, p);
        v.d_theta += 1.0;
        return v;
    };
    iso.t_start = 0.0;
    iso.t_end = duration;
    iso.step = step;

    const FlowResult result = flow(m, iso, start, FlowOptions{true, false});
    DriftReport report;
    report.integral_drift.assign(set.integrals.size(), 0.0);
    const double h0 = h.value(0.0, start);
    std::vector<double> i0(set.integrals.size());
    for (std::size_t k = 0; k < set.integrals.size(); ++k)
        i0[k] = set.integrals[k].value(0.0, start);
    for (const auto& [t, p] : result.trajectory) {
        for (std::size_t k = 0; k < set.integrals.size(); ++k)
            report.integral_drift[k] =
                std::max(report.integral_drift[k], std::fabs(set.integrals[k].value(t, p) - i0[k]));
        report.hamiltonian_drift =
            std::max(report.hamiltonian_drift, std::fabs(h.value(t, p) - h0));
    }
    report.flow = result;
    return report;
}

MonodromyReport extract_monodromy(const Manifold& m) {
    if (m.n() != 1)
        throw std::invalid_argument("monodromy extraction needs a 2-dimensional fiber");
    const double h = 1e-3;
    const Point origin = m.canonicalize(0.0, {0.21, 0.34});
    const Point image0 = m.reeb_flow(origin, m.period());

    MonodromyReport report;
    double fitted[2][2];
    for (int j = 0; j < 2; ++j) {
        std::vector<double> base = origin.base;
        base[static_cast<std::size_t>(j)] += h;
        const Point image = m.reeb_flow(m.canonicalize(0.0, base), m.period());
        for (int r = 0; r < 2; ++r)
            fitted[r][j] = wrap_diff(image.base[static_cast<std::size_t>(r)],
                                     image0.base[static_cast<std::size_t>(r)], 1.0) / h;
    }
    for (int r = 0; r < 2; ++r) {
        for (int j = 0; j < 2; ++j) {
            const double rounded = std::round(fitted[r][j]);
            report.fit_residual =
                std::max(report.fit_residual, std::fabs(fitted[r][j] - rounded));
            report.matrix[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
                static_cast<std::int64_t>(rounded);
        }
    }
    if (report.fit_residual > 1e-8)
        throw std::runtime_error("time-T Reeb map is not an integer linear map on the fiber");
    report.determinant = report.matrix[0][0] * report.matrix[1][1] -
                         report.matrix[0][1] * report.matrix[1][0];
    return report;
}

double max_isotropy_residual(const Manifold& m, const IntegralSet& set,
                             const std::vector<Point>& samples) {
    if (samples.empty()) throw std::invalid_argument("isotropy check needs samples");
    double residual = 0.0;
    for (const Point& p : samples) {
        std::vector<Tangent> frame;
        frame.push_back(m.reeb_vector(p));
        for (const ScalarField& integral : set.integrals)
            frame.push_back(sharp(m, gradient(m, integral, 0.0, p), p));
        const Eigen::MatrixXd w = omega_matrix(m, p);
        auto as_vec = [&](const Tangent& v) {
            Eigen::VectorXd c(m.dim());
            c(0) = v.d_theta;
            for (int i = 1; i < m.dim(); ++i) c(i) = v.d_base[static_cast<std::size_t>(i - 1)];
            return c;
        };
        for (std::size_t i = 0; i < frame.size(); ++i)
            for (std::size_t j = i + 1; j < frame.size(); ++j)
                residual = std::max(
                    residual, std::fabs(double(as_vec(frame[i]).transpose() * w * as_vec(frame[j]))));
    }
    return residual;
}

void write_point_cloud_csv(std::ostream& out, const Manifold& m, const std::vector<Point>& cloud) {
    const int n = m.n();
    out << "theta";
    for (int k = 1; k <= n; ++k) out << ",x" << k;
    for (int k = 1; k <= n; ++k) out << ",y" << k;
    out << "\n";
    out.precision(17);
    for (const Point& p : cloud) {
        out << p.theta;
        for (double b : p.base) out << "," << b;
        out << "\n";
    }
}

}  // namespace cosym
