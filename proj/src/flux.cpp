#include "cosym/flux.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cosym/quadrature.hpp"

namespace cosym {

namespace {

using Coords = std::vector<double>;

Coords unwrap_near(const Manifold& m, const Point& p, const Coords& reference) {
    Coords c = to_coords(p);
    c[0] = reference[0] + wrap_diff(c[0], reference[0], m.period());
    for (std::size_t i = 1; i < c.size(); ++i)
        c[i] = reference[i] + wrap_diff(c[i], reference[i], 1.0);
    return c;
}

std::vector<Point> loop_check_samples(const Manifold& m) {
    // 5 points per axis for three coordinates; low-discrepancy samples of the
    // same budget once the grid would blow up.
    if (m.n() == 1) return grid_points(m, 5);
    return random_points(m, 125, 0x5eed);
}

}  // namespace

Cycle coordinate_cycle(const Manifold& m, int axis, std::vector<double> through) {
    if (axis < 0 || axis >= m.dim()) throw std::invalid_argument("cycle axis out of range");
    if (through.empty()) through.assign(static_cast<std::size_t>(m.dim()), 0.0);
    if (static_cast<int>(through.size()) != m.dim())
        throw std::invalid_argument("cycle base point needs 2n+1 coordinates");
    const double length = axis == 0 ? m.period() : 1.0;
    std::string label;
    if (axis == 0) {
        label = "theta";
    } else if (axis <= m.n()) {
        label = "x" + std::to_string(axis);
    } else {
        label = "y" + std::to_string(axis - m.n());
    }
    Cycle cycle;
    cycle.label = label;
    cycle.position = [through, axis, length](double s) {
        Coords raw = through;
        raw[static_cast<std::size_t>(axis)] += s * length;
        return raw;
    };
    cycle.velocity = [axis, length, d = through.size()](double) {
        Coords v(d, 0.0);
        v[static_cast<std::size_t>(axis)] = length;
        return v;
    };
    return cycle;
}

CycleBasis coordinate_cycle_basis(const Manifold& m, int quadrature_panels) {
    CycleBasis basis;
    basis.quadrature_panels = quadrature_panels;
    for (int axis = 0; axis < m.dim(); ++axis)
        basis.generators.push_back(coordinate_cycle(m, axis));
    return basis;
}

OneForm flux_one_form(const Manifold& m, const Isotopy& iso, int time_quadrature_panels,
                      double jacobian_fd_step) {
    if (time_quadrature_panels < 1) throw std::invalid_argument("need at least one time panel");
    const std::vector<double> times =
        simpson_nodes(iso.t_start, iso.t_end, time_quadrature_panels);
    const double h = jacobian_fd_step;

    OneForm form;
    form.closedness_hint = false;
    form.coefficients = [m, iso, times, h](const Point& p) {
        const int d = m.dim();
        const Coords base = to_coords(p);

        // One central trajectory plus 2d perturbed ones, all sampled at the
        // Simpson nodes; the pullback Jacobian comes from central differences.
        const std::vector<Point> central = flow_sampled(m, iso, p, times);
        std::vector<std::vector<Point>> plus(static_cast<std::size_t>(d));
        std::vector<std::vector<Point>> minus(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            Coords raw = base;
            raw[static_cast<std::size_t>(i)] += h;
            plus[static_cast<std::size_t>(i)] = flow_sampled(m, iso, m.canonicalize(raw), times);
            raw[static_cast<std::size_t>(i)] -= 2.0 * h;
            minus[static_cast<std::size_t>(i)] = flow_sampled(m, iso, m.canonicalize(raw), times);
        }

        std::vector<Coords> integrand(times.size(), Coords(static_cast<std::size_t>(d), 0.0));
        for (std::size_t k = 0; k < times.size(); ++k) {
            const Point& at = central[k];
            const Tangent x = iso.generator.evaluator(times[k], at);
            const Coords beta = flat(m, x, at);
            const Coords ref = to_coords(at);
            for (int i = 0; i < d; ++i) {
                const Coords up = unwrap_near(m, plus[static_cast<std::size_t>(i)][k], ref);
                const Coords dn = unwrap_near(m, minus[static_cast<std::size_t>(i)][k], ref);
                double s = 0.0;
                for (int r = 0; r < d; ++r)
                    s += beta[static_cast<std::size_t>(r)] *
                         (up[static_cast<std::size_t>(r)] - dn[static_cast<std::size_t>(r)]) /
                         (2.0 * h);
                integrand[k][static_cast<std::size_t>(i)] = s;  // (J^T beta)_i
            }
        }

        Coords out(static_cast<std::size_t>(d), 0.0);
        std::vector<double> samples(times.size());
        for (int i = 0; i < d; ++i) {
            for (std::size_t k = 0; k < times.size(); ++k)
                samples[k] = integrand[k][static_cast<std::size_t>(i)];
            out[static_cast<std::size_t>(i)] = simpson_combine(samples, iso.t_start, iso.t_end);
        }
        return out;
    };
    return form;
}

double pair_with_cycle(const Manifold& m, const OneForm& alpha, const Cycle& gamma, int panels) {
    if (!alpha.coefficients || !gamma.position || !gamma.velocity)
        throw std::invalid_argument("pairing needs a form and a parameterized cycle");
    const Point start = m.canonicalize(gamma.position(0.0));
    const Point end = m.canonicalize(gamma.position(1.0));
    if (m.distance(start, end) > 1e-9)
        throw std::domain_error("cycle is not closed: endpoint differs from start");

    return simpson(
        [&](double s) {
            const Point at = m.canonicalize(gamma.position(s));
            const Coords c = alpha.coefficients(at);
            const Coords v = gamma.velocity(s);
            double dot = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i) dot += c[i] * v[i];
            return dot;
        },
        0.0, 1.0, panels);
}

FluxClass flux_class(const Manifold& m, const Isotopy& loop, const CycleBasis& basis,
                     const FluxOptions& opts) {
    if (static_cast<int>(basis.generators.size()) != m.dim())
        throw std::invalid_argument("cycle basis must have 2n+1 generators");
    if (opts.check_loop) {
        for (const Point& p : loop_check_samples(m)) {
            const Point image = time_one_map(m, loop, p);
            if (m.distance(image, p) > opts.loop_tolerance) {
                std::ostringstream msg;
                msg << "isotopy is not a loop: time-one map moves (" << p.theta;
                for (double b : p.base) msg << ", " << b;
                msg << ") by " << m.distance(image, p);
                throw std::domain_error(msg.str());
            }
        }
    }

    const OneForm form =
        flux_one_form(m, loop, opts.time_quadrature_panels, opts.jacobian_fd_step);
    FluxClass flux;
    flux.eta_component = pair_with_cycle(m, form, basis.generators[0], basis.quadrature_panels);
    for (std::size_t i = 1; i < basis.generators.size(); ++i) {
        flux.h1_pairings.push_back(
            pair_with_cycle(m, form, basis.generators[i], basis.quadrature_panels));
        flux.basis_labels.push_back(basis.generators[i].label);
    }
    return flux;
}

Lattice flux_lattice(const Manifold& m, const std::vector<Isotopy>& loops, const CycleBasis& basis,
                     const LatticeOptions& opts) {
    std::vector<std::vector<double>> vectors;
    for (const Isotopy& loop : loops)
        vectors.push_back(flux_class(m, loop, basis, opts.flux).h1_pairings);
    return analyze_lattice(m, std::move(vectors), opts.tolerance, opts.enumeration_radius);
}

Lattice analyze_lattice(const Manifold& m, std::vector<std::vector<double>> vectors,
                        double tolerance, int enumeration_radius) {
    Lattice lattice;
    lattice.tolerance = tolerance;
    lattice.generator_vectors = std::move(vectors);
    if (lattice.generator_vectors.empty()) return lattice;

    const std::size_t dim = lattice.generator_vectors.front().size();
    Eigen::MatrixXd mat(static_cast<Eigen::Index>(lattice.generator_vectors.size()),
                        static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < lattice.generator_vectors.size(); ++r)
        for (std::size_t c = 0; c < dim; ++c)
            mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                lattice.generator_vectors[r][c];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
    const Eigen::VectorXd sv = svd.singularValues();
    const Eigen::Index expected_rank = std::min<Eigen::Index>(mat.rows(), mat.cols());
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tolerance * std::max(1.0, sv(0))) ++rank;
    lattice.degenerate = rank < expected_rank;

    // Discreteness witness: shortest nonzero vector over a bounded box of
    // integer combinations of the measured generators.
    const int radius = enumeration_radius;
    const std::size_t count = lattice.generator_vectors.size();
    std::vector<int> coeff(count, -radius);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        double norm2 = 0.0;
        bool zero = true;
        for (std::size_t c = 0; c < dim; ++c) {
            double v = 0.0;
            for (std::size_t r = 0; r < count; ++r)
                v += coeff[r] * lattice.generator_vectors[r][c];
            norm2 += v * v;
        }
        for (int c : coeff)
            if (c != 0) zero = false;
        if (!zero && norm2 > tolerance * tolerance)
            best = std::min(best, std::sqrt(norm2));
        std::size_t i = 0;
        for (; i < count; ++i) {
            if (++coeff[i] <= radius) break;
            coeff[i] = -radius;
        }
        if (i == count) break;
    }
    if (std::isfinite(best)) lattice.min_nonzero_norm = best;

    if (m.kind() == ManifoldKind::ProductTorus) {
        // Expected lattice (+)_k a_k (Z dx_k (+) Z dy_k): every measured
        // pairing must be an integer multiple of the matching weight.
        bool match = true;
        for (const auto& vec : lattice.generator_vectors) {
            for (std::size_t c = 0; c < vec.size(); ++c) {
                const double a = m.weight(static_cast<int>(c % static_cast<std::size_t>(m.n())));
                const double q = vec[c] / a;
                if (std::fabs(q - std::round(q)) > tolerance * std::max(1.0, 1.0 / a))
                    match = false;
            }
        }
        lattice.matches_expected = match;
    }
    return lattice;
}

double surface_integral(const Manifold& m, const TwoForm& w,
                        const std::function<std::vector<double>(double, double)>& position,
                        const std::function<std::vector<double>(double, double)>& d_du,
                        const std::function<std::vector<double>(double, double)>& d_dv,
                        int panels_u, int panels_v) {
    return simpson_2d(
        [&](double u, double v) {
            const Point at = m.canonicalize(position(u, v));
            const Eigen::MatrixXd mat = w.matrix(at);
            const Coords tu = d_du(u, v);
            const Coords tv = d_dv(u, v);
            double s = 0.0;
            for (int i = 0; i < mat.rows(); ++i)
                for (int j = 0; j < mat.cols(); ++j)
                    s += tu[static_cast<std::size_t>(i)] * mat(i, j) *
                         tv[static_cast<std::size_t>(j)];
            return s;
        },
        panels_u, panels_v);
}

double period_over_2cycle(const Manifold& m, int k, int panels) {
    if (k < 1 || k > m.n()) throw std::invalid_argument("coordinate pair index out of range");
    const std::size_t d = static_cast<std::size_t>(m.dim());
    const int xk = k, yk = m.n() + k;
    auto position = [d, xk, yk](double u, double v) {
        Coords raw(d, 0.0);
        raw[static_cast<std::size_t>(xk)] = u;
        raw[static_cast<std::size_t>(yk)] = v;
        return raw;
    };
    auto du = [d, xk](double, double) {
        Coords t(d, 0.0);
        t[static_cast<std::size_t>(xk)] = 1.0;
        return t;
    };
    auto dv = [d, yk](double, double) {
        Coords t(d, 0.0);
        t[static_cast<std::size_t>(yk)] = 1.0;
        return t;
    };
    return surface_integral(m, omega_form(m), position, du, dv, panels, panels);
}

std::string flux_class_json(const FluxClass& flux) {
    nlohmann::ordered_json j;
    j["basis_labels"] = flux.basis_labels;
    j["h1_pairings"] = flux.h1_pairings;
    j["eta_component"] = flux.eta_component;
    return j.dump();
}

}  // namespace cosym
