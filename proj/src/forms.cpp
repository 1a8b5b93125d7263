#include "cosym/forms.hpp"

#include <cmath>
#include <stdexcept>

namespace cosym {

std::vector<double> eta_coefficients(const Manifold& m, const Point&) {
    std::vector<double> c(static_cast<std::size_t>(m.dim()), 0.0);
    c[0] = 1.0;
    return c;
}

Eigen::MatrixXd omega_matrix(const Manifold& m, const Point&) {
    const int d = m.dim();
    const int n = m.n();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < n; ++k) {
        w(1 + k, 1 + n + k) = m.weight(k);
        w(1 + n + k, 1 + k) = -m.weight(k);
    }
    return w;
}

OneForm eta_form(const Manifold& m) {
    return OneForm{[m](const Point& p) { return eta_coefficients(m, p); }, true};
}

TwoForm omega_form(const Manifold& m) {
    return TwoForm{[m](const Point& p) { return omega_matrix(m, p); }};
}

namespace {

double evaluate_shifted(const Manifold& m, const ScalarField& f, double t, const Point& p, int axis,
                        double shift) {
    std::vector<double> raw = to_coords(p);
    raw[static_cast<std::size_t>(axis)] += shift;
    return f.value(t, m.canonicalize(raw));
}

}  // namespace

std::vector<double> gradient(const Manifold& m, const ScalarField& f, double t, const Point& p,
                             const FdOptions& fd) {
    if (f.gradient) return f.gradient(t, p);
    if (!f.value) throw std::invalid_argument("scalar field has no value evaluator");
    const int d = m.dim();
    std::vector<double> g(static_cast<std::size_t>(d));
    const double h = fd.step;
    for (int i = 0; i < d; ++i) {
        const double fp = evaluate_shifted(m, f, t, p, i, h);
        const double fm = evaluate_shifted(m, f, t, p, i, -h);
        if (fd.richardson) {
            const double fp2 = evaluate_shifted(m, f, t, p, i, 2.0 * h);
            const double fm2 = evaluate_shifted(m, f, t, p, i, -2.0 * h);
            g[static_cast<std::size_t>(i)] = (8.0 * (fp - fm) - (fp2 - fm2)) / (12.0 * h);
        } else {
            g[static_cast<std::size_t>(i)] = (fp - fm) / (2.0 * h);
        }
    }
    return g;
}

OneForm exterior_derivative(const Manifold& m, const ScalarField& f, double t,
                            const FdOptions& fd) {
    return OneForm{[m, f, t, fd](const Point& p) { return gradient(m, f, t, p, fd); }, true};
}

std::vector<double> interior_product(const Manifold& m, const Tangent& x, const TwoForm& w,
                                     const Point& p) {
    const Eigen::MatrixXd mat = w.matrix(p);
    const int d = m.dim();
    std::vector<double> c(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < d; ++j) {
        double s = x.d_theta * mat(0, j);
        for (int i = 1; i < d; ++i) s += x.d_base[static_cast<std::size_t>(i - 1)] * mat(i, j);
        c[static_cast<std::size_t>(j)] = s;
    }
    return c;
}

Eigen::MatrixXd structure_matrix(const Manifold& m, const Point& p) {
    Eigen::MatrixXd s = omega_matrix(m, p);
    s(0, 0) += 1.0;  // eta (x) eta with eta = d theta
    return s;
}

std::vector<double> flat(const Manifold& m, const Tangent& x, const Point& p) {
    const TwoForm w = omega_form(m);
    std::vector<double> c = interior_product(m, x, w, p);
    const double eta_of_x = x.d_theta;
    c[0] += eta_of_x;  // + eta(X) eta
    return c;
}

Tangent sharp(const Manifold& m, const std::vector<double>& alpha, const Point& p) {
    const int d = m.dim();
    if (static_cast<int>(alpha.size()) != d)
        throw std::invalid_argument("covector has wrong dimension");
    for (double a : alpha)
        if (!std::isfinite(a)) throw std::domain_error("non-finite covector");

    // flat() produces c = S^T X for S = omega + eta(x)eta.
    const Eigen::MatrixXd s = structure_matrix(m, p).transpose();
    Eigen::VectorXd rhs(d);
    for (int i = 0; i < d; ++i) rhs(i) = alpha[static_cast<std::size_t>(i)];
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(s);
    const Eigen::VectorXd x = lu.solve(rhs);
    if (!x.allFinite() || (s * x - rhs).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + rhs.cwiseAbs().maxCoeff()))
        throw std::runtime_error("structure system is singular");

    Tangent v;
    v.d_theta = x(0);
    v.d_base.resize(static_cast<std::size_t>(d - 1));
    for (int i = 1; i < d; ++i) v.d_base[static_cast<std::size_t>(i - 1)] = x(i);
    return v;
}

double pfaffian(const Eigen::MatrixXd& a) {
    const auto size = a.rows();
    if (size % 2 != 0) return 0.0;
    if (size == 0) return 1.0;
    double result = 0.0;
    for (Eigen::Index j = 1; j < size; ++j) {
        if (a(0, j) == 0.0) continue;
        Eigen::MatrixXd minor(size - 2, size - 2);
        Eigen::Index r = 0;
        for (Eigen::Index i = 1; i < size; ++i) {
            if (i == j) continue;
            Eigen::Index c = 0;
            for (Eigen::Index k = 1; k < size; ++k) {
                if (k == j) continue;
                minor(r, c++) = a(i, k);
            }
            ++r;
        }
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        result += sign * a(0, j) * pfaffian(minor);
    }
    return result;
}

double volume_pairing(const Manifold& m, const Point& p) {
    // (eta ^ omega^n)(e_0..e_2n) = sum_j (-1)^j eta_j * omega^n(frame minus e_j),
    // with omega^n(u_1..u_2n) = n! Pf[omega(u_i, u_j)].
    const int d = m.dim();
    const Eigen::MatrixXd w = omega_matrix(m, p);
    const std::vector<double> eta = eta_coefficients(m, p);
    double nfact = 1.0;
    for (int k = 2; k <= m.n(); ++k) nfact *= k;

    double total = 0.0;
    for (int j = 0; j < d; ++j) {
        if (eta[static_cast<std::size_t>(j)] == 0.0) continue;
        Eigen::MatrixXd minor(d - 1, d - 1);
        Eigen::Index r = 0;
        for (int i = 0; i < d; ++i) {
            if (i == j) continue;
            Eigen::Index c = 0;
            for (int k = 0; k < d; ++k) {
                if (k == j) continue;
                minor(r, c++) = w(i, k);
            }
            ++r;
        }
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        total += sign * eta[static_cast<std::size_t>(j)] * nfact * pfaffian(minor);
    }
    return total;
}

VolumeReport volume_check(const Manifold& m, const std::vector<Point>& samples) {
    if (samples.empty()) throw std::invalid_argument("volume_check needs at least one sample");
    VolumeReport report;
    report.samples = samples.size();
    report.min_abs = std::numeric_limits<double>::infinity();
    report.max_abs = 0.0;
    for (const Point& p : samples) {
        const double v = std::fabs(volume_pairing(m, p));
        report.min_abs = std::min(report.min_abs, v);
        report.max_abs = std::max(report.max_abs, v);
    }
    report.pass = report.min_abs > 0.0;
    return report;
}

}  // namespace cosym
