#include "cosym/dynamics.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cosym {

namespace {

using Coords = std::vector<double>;

Coords tangent_coords(const Tangent& v) {
    Coords c;
    c.reserve(v.d_base.size() + 1);
    c.push_back(v.d_theta);
    c.insert(c.end(), v.d_base.begin(), v.d_base.end());
    return c;
}

// Evaluate the generator at raw coordinates: canonicalize for the field, then
// express the result back in the chart of the raw representative (the two
// differ by monodromy powers on the mapping torus).
Coords eval_generator(const Manifold& m, const VectorField& gen, double t, const Coords& raw) {
    const auto [q, crossings] =
        m.canonicalize_counted(raw[0], Coords(raw.begin() + 1, raw.end()));
    Tangent v = gen.evaluator(t, q);
    if (crossings != 0) v = m.transport_tangent(v, -crossings);
    return tangent_coords(v);
}

Coords step_once(const Manifold& m, const VectorField& gen, Scheme scheme, double t, double h,
                 const Coords& y) {
    const std::size_t d = y.size();
    auto shifted = [&](const Coords& base, const Coords& k, double factor) {
        Coords out(d);
        for (std::size_t i = 0; i < d; ++i) out[i] = base[i] + factor * k[i];
        return out;
    };
    if (scheme == Scheme::Midpoint) {
        const Coords k1 = eval_generator(m, gen, t, y);
        const Coords k2 = eval_generator(m, gen, t + 0.5 * h, shifted(y, k1, 0.5 * h));
        return shifted(y, k2, h);
    }
    const Coords k1 = eval_generator(m, gen, t, y);
    const Coords k2 = eval_generator(m, gen, t + 0.5 * h, shifted(y, k1, 0.5 * h));
    const Coords k3 = eval_generator(m, gen, t + 0.5 * h, shifted(y, k2, 0.5 * h));
    const Coords k4 = eval_generator(m, gen, t + h, shifted(y, k3, h));
    Coords out(d);
    for (std::size_t i = 0; i < d; ++i)
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

void check_finite_state(const Coords& y, double t) {
    for (double v : y) {
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "flow diverged: non-finite state at t = " << t;
            throw std::runtime_error(msg.str());
        }
    }
}

int step_count(double duration, double step) {
    if (step <= 0.0) throw std::invalid_argument("integrator step must be positive");
    const int n = static_cast<int>(std::llround(duration / step));
    if (n < 1 || std::fabs(n * step - duration) > 1e-9 * std::max(1.0, duration))
        throw std::invalid_argument("step must divide the isotopy duration evenly");
    return n;
}

Coords unwrap_near(const Manifold& m, const Point& p, const Coords& reference) {
    Coords c = to_coords(p);
    c[0] = reference[0] + wrap_diff(c[0], reference[0], m.period());
    for (std::size_t i = 1; i < c.size(); ++i)
        c[i] = reference[i] + wrap_diff(c[i], reference[i], 1.0);
    return c;
}

}  // namespace

VectorField hamiltonian_vector_field(const Manifold& m, const ScalarField& h, VerticalSign sign,
                                     const FdOptions& fd) {
    if (!h.value) throw std::invalid_argument("Hamiltonian has no value evaluator");
    VectorField field;
    field.evaluator = [m, h, sign, fd](double t, const Point& p) {
        const std::vector<double> dh = gradient(m, h, t, p, fd);
        Tangent x = sharp(m, dh, p);
        if (sign == VerticalSign::TransitivityConvention) x.d_theta = -x.d_theta;
        return x;
    };
    return field;
}

FlowResult flow(const Manifold& m, const Isotopy& iso, const Point& start,
                const FlowOptions& opts) {
    if (!iso.generator.evaluator) throw std::invalid_argument("isotopy has no generator");
    const double duration = iso.t_end - iso.t_start;
    if (duration < 0.0) throw std::invalid_argument("isotopy must have t_end >= t_start");

    FlowResult result;
    if (opts.record_trajectory) result.trajectory.emplace_back(iso.t_start, start);
    if (duration == 0.0) {
        result.endpoint = start;
        return result;
    }

    const int nsteps = step_count(duration, iso.step);
    const double h = duration / nsteps;
    Coords y = to_coords(start);
    for (int i = 0; i < nsteps; ++i) {
        const double t = iso.t_start + i * h;
        const Coords y_full = step_once(m, iso.generator, iso.scheme, t, h, y);
        check_finite_state(y_full, t + h);
        const Point p = m.canonicalize(y_full);
        if (opts.estimate_residual) {
            const Coords y_mid = step_once(m, iso.generator, iso.scheme, t, 0.5 * h, y);
            const Coords y_two = step_once(m, iso.generator, iso.scheme, t + 0.5 * h, 0.5 * h, y_mid);
            check_finite_state(y_two, t + h);
            result.max_step_residual =
                std::max(result.max_step_residual, m.distance(p, m.canonicalize(y_two)));
        }
        y = to_coords(p);
        if (opts.record_trajectory) result.trajectory.emplace_back(t + h, p);
    }
    result.endpoint = m.canonicalize(y);
    return result;
}

Point time_one_map(const Manifold& m, const Isotopy& iso, const Point& start) {
    return flow(m, iso, start).endpoint;
}

std::vector<Point> flow_sampled(const Manifold& m, const Isotopy& iso, const Point& start,
                                const std::vector<double>& times) {
    if (!iso.generator.evaluator) throw std::invalid_argument("isotopy has no generator");
    std::vector<Point> out;
    out.reserve(times.size());
    double t = iso.t_start;
    Coords y = to_coords(start);
    const double slack = 1e-9 * std::max(1.0, std::fabs(iso.t_end));
    for (double target : times) {
        if (target < t - slack) throw std::invalid_argument("sample times must be nondecreasing");
        if (target > iso.t_end + slack)
            throw std::invalid_argument("sample time beyond isotopy end");
        const double gap = target - t;
        if (gap > slack) {
            const int nsub = std::max(1, static_cast<int>(std::ceil(gap / iso.step - 1e-12)));
            const double h = gap / nsub;
            for (int i = 0; i < nsub; ++i) {
                y = step_once(m, iso.generator, iso.scheme, t + i * h, h, y);
                check_finite_state(y, t + (i + 1) * h);
                y = to_coords(m.canonicalize(y));
            }
            t = target;
        }
        out.push_back(m.canonicalize(y));
    }
    return out;
}

Isotopy inverse(const Isotopy& iso) {
    Isotopy inv = iso;
    const double a = iso.t_start, b = iso.t_end;
    const VectorField gen = iso.generator;
    inv.generator.evaluator = [gen, a, b](double t, const Point& p) {
        Tangent v = gen.evaluator(a + b - t, p);
        v.d_theta = -v.d_theta;
        for (double& c : v.d_base) c = -c;
        return v;
    };
    return inv;
}

Isotopy concatenate(const Isotopy& a, const Isotopy& b) {
    auto unit_interval = [](const Isotopy& iso) {
        return std::fabs(iso.t_start) < 1e-12 && std::fabs(iso.t_end - 1.0) < 1e-12;
    };
    if (!unit_interval(a) || !unit_interval(b))
        throw std::invalid_argument("concatenate expects isotopies on [0, 1]");
    // Each half runs under the smooth time warp tau(s) = 3s^2 - 2s^3, whose
    // rate vanishes at the junction, so the combined generator is continuous
    // there. The warp changes neither endpoint maps nor the flux (it is a
    // path reparameterization).
    auto warped = [](const VectorField& gen, double s, const Point& p) {
        const double tau = s * s * (3.0 - 2.0 * s);
        const double rate = 6.0 * s * (1.0 - s);
        Tangent v = gen.evaluator(tau, p);
        v.d_theta *= 2.0 * rate;
        for (double& c : v.d_base) c *= 2.0 * rate;
        return v;
    };
    Isotopy out;
    const VectorField ga = a.generator, gb = b.generator;
    out.generator.evaluator = [ga, gb, warped](double t, const Point& p) {
        return t < 0.5 ? warped(ga, 2.0 * t, p) : warped(gb, 2.0 * t - 1.0, p);
    };
    // Keep the junction on a step boundary.
    const double desired = 0.5 * std::min(a.step, b.step);
    const int half_steps = std::max(1, static_cast<int>(std::ceil(0.5 / desired - 1e-12)));
    out.step = 0.5 / half_steps;
    out.scheme = a.scheme;
    return out;
}

Isotopy conjugate_by_translation(const Manifold& m, const Isotopy& iso,
                                 const std::vector<double>& shift) {
    if (static_cast<int>(shift.size()) != m.dim())
        throw std::invalid_argument("translation needs 2n+1 components");
    Isotopy out = iso;
    const VectorField gen = iso.generator;
    out.generator.evaluator = [m, gen, shift](double t, const Point& p) {
        Coords raw = to_coords(p);
        for (std::size_t i = 0; i < raw.size(); ++i) raw[i] -= shift[i];
        return gen.evaluator(t, m.canonicalize(raw));
    };
    return out;
}

ConservationReport conservation_check(const Manifold& m, const Isotopy& iso,
                                      const std::vector<Point>& samples, double fd_step) {
    if (samples.empty()) throw std::invalid_argument("conservation_check needs samples");
    const int d = m.dim();
    ConservationReport report;
    for (const Point& p : samples) {
        const Coords base = to_coords(p);
        const Coords center = to_coords(time_one_map(m, iso, p));
        auto image = [&](int axis, double shift) {
            Coords raw = base;
            raw[static_cast<std::size_t>(axis)] += shift;
            const Point q = time_one_map(m, iso, m.canonicalize(raw));
            return unwrap_near(m, q, center);
        };
        Eigen::MatrixXd jac(d, d);
        for (int i = 0; i < d; ++i) {
            const Coords up = image(i, fd_step);
            const Coords dn = image(i, -fd_step);
            const Coords up2 = image(i, 2.0 * fd_step);
            const Coords dn2 = image(i, -2.0 * fd_step);
            for (int r = 0; r < d; ++r) {
                const std::size_t ri = static_cast<std::size_t>(r);
                jac(r, i) = (-up2[ri] + 8.0 * up[ri] - 8.0 * dn[ri] + dn2[ri]) / (12.0 * fd_step);
            }
        }
        for (int i = 0; i < d; ++i) {
            const double target = i == 0 ? 1.0 : 0.0;
            report.eta_residual = std::max(report.eta_residual, std::fabs(jac(0, i) - target));
        }
        const Eigen::MatrixXd w = omega_matrix(m, p);
        const Eigen::MatrixXd w_image = omega_matrix(m, m.canonicalize(center));
        const Eigen::MatrixXd res = jac.transpose() * w_image * jac - w;
        report.omega_residual = std::max(report.omega_residual, res.cwiseAbs().maxCoeff());
    }
    return report;
}

ScalarField poisson_bracket(const Manifold& m, const ScalarField& h, const ScalarField& k,
                            const FdOptions& fd) {
    if (!h.value || !k.value) throw std::invalid_argument("poisson_bracket needs two fields");
    ScalarField bracket;
    const int n = m.n();
    bracket.value = [m, h, k, fd, n](double t, const Point& p) {
        const std::vector<double> gh = gradient(m, h, t, p, fd);
        const std::vector<double> gk = gradient(m, k, t, p, fd);
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            const std::size_t xj = static_cast<std::size_t>(1 + j);
            const std::size_t yj = static_cast<std::size_t>(1 + n + j);
            s += (gh[xj] * gk[yj] - gh[yj] * gk[xj]) / m.weight(j);
        }
        return s;
    };
    bracket.reeb_invariant = h.reeb_invariant && k.reeb_invariant;
    return bracket;
}

std::vector<CommutatorSample> commutator_flow(const Manifold& m, const ScalarField& h,
                                              const ScalarField& k, double eps, double step,
                                              const std::vector<Point>& samples,
                                              const FdOptions& fd) {
    if (eps < 0.0 || step <= 0.0) throw std::invalid_argument("eps and step must be positive");
    const VectorField xh = hamiltonian_vector_field(m, h, VerticalSign::DifferentialConvention, fd);
    const VectorField xk = hamiltonian_vector_field(m, k, VerticalSign::DifferentialConvention, fd);
    const ScalarField hk = poisson_bracket(m, h, k, fd);
    const VectorField xhk =
        hamiltonian_vector_field(m, hk, VerticalSign::DifferentialConvention, fd);

    const Isotopy flow_h{xh, 0.0, eps, step, Scheme::RK4};
    const Isotopy flow_k{xk, 0.0, eps, step, Scheme::RK4};
    const Isotopy inv_h = inverse(flow_h);
    const Isotopy inv_k = inverse(flow_k);

    std::vector<CommutatorSample> out;
    out.reserve(samples.size());
    for (const Point& p : samples) {
        Point q = p;
        if (eps > 0.0) {
            q = time_one_map(m, inv_k, q);
            q = time_one_map(m, inv_h, q);
            q = time_one_map(m, flow_k, q);
            q = time_one_map(m, flow_h, q);
        }
        CommutatorSample sample;
        sample.at = p;
        const Coords pc = to_coords(p);
        const Coords qc = unwrap_near(m, q, pc);
        sample.displacement.resize(pc.size());
        for (std::size_t i = 0; i < pc.size(); ++i) sample.displacement[i] = qc[i] - pc[i];
        const Coords xv = tangent_coords(xhk.evaluator(0.0, p));
        sample.predicted.resize(xv.size());
        for (std::size_t i = 0; i < xv.size(); ++i) sample.predicted[i] = eps * eps * xv[i];
        for (std::size_t i = 0; i < xv.size(); ++i)
            sample.residual =
                std::max(sample.residual, std::fabs(sample.displacement[i] - sample.predicted[i]));
        out.push_back(std::move(sample));
    }
    return out;
}

namespace {

ScalarField transport_hamiltonian(const ScalarField& rho, double c) {
    ScalarField k;
    k.value = [rho, c](double t, const Point& p) { return -c * p.theta * rho.value(t, p); };
    if (rho.gradient) {
        k.gradient = [rho, c](double t, const Point& p) {
            std::vector<double> g = rho.gradient(t, p);
            const double r = rho.value(t, p);
            for (double& v : g) v *= -c * p.theta;
            g[0] += -c * r;
            return g;
        };
    }
    return k;
}

}  // namespace

FlowResult vertical_transport(const Manifold& m, const Point& z0, const Point& z1,
                              const ScalarField& rho, double c, VerticalSign sign, double step) {
    if (!rho.value) throw std::invalid_argument("transport needs a bump function");
    for (std::size_t i = 0; i < z0.base.size(); ++i) {
        if (std::fabs(wrap_diff(z0.base[i], z1.base[i], 1.0)) > 1e-9)
            throw std::domain_error("transport endpoints must lie on the same Reeb fiber");
    }
    if (std::fabs(rho.value(0.0, z0) - 1.0) > 1e-9)
        throw std::domain_error("rho must equal 1 at the transport fiber");

    const ScalarField k = transport_hamiltonian(rho, c);
    const Isotopy iso{hamiltonian_vector_field(m, k, sign), 0.0, 1.0, step, Scheme::RK4};
    return flow(m, iso, z0, FlowOptions{true, false});
}

FlowResult vertical_transport_auto(const Manifold& m, const Point& z0, const Point& z1,
                                   const ScalarField& rho, VerticalSign sign, double step) {
    const double delta = wrap_diff(z1.theta, z0.theta, m.period());
    const double c = sign == VerticalSign::DifferentialConvention ? -delta : delta;
    return vertical_transport(m, z0, z1, rho, c, sign, step);
}

void write_trajectory_csv(std::ostream& out, const Manifold& m, const FlowResult& result) {
    const int n = m.n();
    out << "time,theta";
    for (int k = 1; k <= n; ++k) out << ",x" << k;
    for (int k = 1; k <= n; ++k) out << ",y" << k;
    out << "\n";
    out.precision(17);
    for (const auto& [t, p] : result.trajectory) {
        out << t << "," << p.theta;
        for (double b : p.base) out << "," << b;
        out << "\n";
    }
}

}  // namespace cosym
