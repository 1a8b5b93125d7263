#include "cosym/symplectization.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cosym/quadrature.hpp"

namespace cosym {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

LiftedPoint canonicalize_lifted(const Manifold& m, const std::vector<double>& raw) {
    if (static_cast<int>(raw.size()) != m.dim() + 1)
        throw std::invalid_argument("expected 2n+2 lifted coordinates");
    LiftedPoint p;
    p.base_point = m.canonicalize(std::vector<double>(raw.begin(), raw.end() - 1));
    p.u = wrap(raw.back(), kTwoPi);
    return p;
}

std::vector<double> lifted_coords(const LiftedPoint& p) {
    std::vector<double> c = to_coords(p.base_point);
    c.push_back(p.u);
    return c;
}

Eigen::MatrixXd symplectization_matrix(const Manifold& m, const LiftedPoint& p) {
    const int d = m.dim();
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(d + 1, d + 1);
    omega.topLeftCorner(d, d) = omega_matrix(m, p.base_point);
    omega(0, d) += 1.0;  // eta ^ du on (d/d theta, d/d u)
    omega(d, 0) -= 1.0;
    return omega;
}

double rotation_factor(const Manifold& m, const Isotopy& iso, const Point& x, double t,
                       int quadrature_panels) {
    if (t < iso.t_start - 1e-12) throw std::invalid_argument("time precedes the isotopy start");
    if (t <= iso.t_start) return 0.0;
    const std::vector<double> nodes = simpson_nodes(iso.t_start, t, quadrature_panels);
    const std::vector<Point> traj = flow_sampled(m, iso, x, nodes);
    std::vector<double> samples(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k)
        samples[k] = iso.generator.evaluator(nodes[k], traj[k]).d_theta;  // eta(phi_dot)
    return simpson_combine(samples, iso.t_start, t);
}

LiftedIsotopy lift_isotopy(const Manifold& m, const Isotopy& iso, int quadrature_panels) {
    LiftedIsotopy lifted;
    lifted.map = [m, iso, quadrature_panels](double t, const LiftedPoint& p) {
        LiftedPoint out;
        if (t <= iso.t_start) {
            out = p;
            return out;
        }
        const std::vector<double> nodes = simpson_nodes(iso.t_start, t, quadrature_panels);
        const std::vector<Point> traj = flow_sampled(m, iso, p.base_point, nodes);
        std::vector<double> samples(nodes.size());
        for (std::size_t k = 0; k < nodes.size(); ++k)
            samples[k] = iso.generator.evaluator(nodes[k], traj[k]).d_theta;
        const double lambda = simpson_combine(samples, iso.t_start, t);
        out.base_point = traj.back();
        out.u = wrap(p.u - lambda, kTwoPi);
        return out;
    };
    return lifted;
}

LiftedField lift_hamiltonian(const Manifold&, const ScalarField& f, const Isotopy& iso) {
    if (!f.value) throw std::invalid_argument("lift_hamiltonian needs a Hamiltonian");
    LiftedField lifted;
    const VectorField gen = iso.generator;
    lifted.value = [f, gen](double t, const LiftedPoint& p) {
        return f.value(t, p.base_point) + gen.evaluator(t, p.base_point).d_theta * p.u;
    };
    return lifted;
}

SymplecticReport verify_symplectic(const Manifold& m,
                                   const std::function<LiftedPoint(const LiftedPoint&)>& map,
                                   const std::vector<LiftedPoint>& samples, double fd_step) {
    if (samples.empty()) throw std::invalid_argument("verify_symplectic needs samples");
    const int d = m.dim() + 1;

    auto unwrap = [&m](const LiftedPoint& p, const std::vector<double>& ref) {
        std::vector<double> c = lifted_coords(p);
        c[0] = ref[0] + wrap_diff(c[0], ref[0], m.period());
        for (std::size_t i = 1; i + 1 < c.size(); ++i)
            c[i] = ref[i] + wrap_diff(c[i], ref[i], 1.0);
        c.back() = ref.back() + wrap_diff(c.back(), ref.back(), kTwoPi);
        return c;
    };

    SymplecticReport report;
    report.samples = samples.size();
    for (const LiftedPoint& p : samples) {
        const std::vector<double> base = lifted_coords(p);
        const std::vector<double> center = lifted_coords(map(p));
        auto image = [&](int axis, double shift) {
            std::vector<double> raw = base;
            raw[static_cast<std::size_t>(axis)] += shift;
            return unwrap(map(canonicalize_lifted(m, raw)), center);
        };
        Eigen::MatrixXd jac(d, d);
        for (int i = 0; i < d; ++i) {
            const auto up = image(i, fd_step);
            const auto dn = image(i, -fd_step);
            const auto up2 = image(i, 2.0 * fd_step);
            const auto dn2 = image(i, -2.0 * fd_step);
            for (int r = 0; r < d; ++r) {
                const std::size_t ri = static_cast<std::size_t>(r);
                jac(r, i) = (-up2[ri] + 8.0 * up[ri] - 8.0 * dn[ri] + dn2[ri]) / (12.0 * fd_step);
            }
        }
        const Eigen::MatrixXd omega = symplectization_matrix(m, p);
        const Eigen::MatrixXd omega_image =
            symplectization_matrix(m, canonicalize_lifted(m, center));
        const Eigen::MatrixXd res = jac.transpose() * omega_image * jac - omega;
        report.max_residual = std::max(report.max_residual, res.cwiseAbs().maxCoeff());
    }
    return report;
}

double mixed_cycle_pairing(const Manifold& m, const Cycle& gamma, int panels_u, int panels_v) {
    if (!gamma.position || !gamma.velocity)
        throw std::invalid_argument("mixed cycle pairing needs a parameterized cycle");
    const int d = m.dim();
    return simpson_2d(
        [&](double s, double v) {
            const Point at = m.canonicalize(gamma.position(s));
            const LiftedPoint lp{at, wrap(kTwoPi * v, kTwoPi)};
            const Eigen::MatrixXd omega = symplectization_matrix(m, lp);
            const std::vector<double> gv = gamma.velocity(s);
            Eigen::VectorXd tu = Eigen::VectorXd::Zero(d + 1);
            for (int i = 0; i < d; ++i) tu(i) = gv[static_cast<std::size_t>(i)];
            Eigen::VectorXd tv = Eigen::VectorXd::Zero(d + 1);
            tv(d) = kTwoPi;  // u = 2 pi v
            return double(tu.transpose() * omega * tv);
        },
        panels_u, panels_v);
}

std::vector<LiftedPoint> random_lifted_points(const Manifold& m, std::size_t count,
                                              std::uint64_t seed) {
    const std::vector<Point> base = random_points(m, count, seed);
    std::vector<Point> shifted = random_points(m, count, seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<LiftedPoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(LiftedPoint{base[i], kTwoPi * shifted[i].theta / m.period()});
    return out;
}

}  // namespace cosym
