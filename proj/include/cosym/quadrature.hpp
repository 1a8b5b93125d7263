#pragma once

// Composite Simpson rules on [a, b]; `panels` counts Simpson panels, so the
// integrand is sampled at 2*panels + 1 equispaced nodes.

#include <functional>
#include <stdexcept>
#include <vector>

namespace cosym {

inline std::vector<double> simpson_nodes(double a, double b, int panels) {
    if (panels < 1) throw std::invalid_argument("quadrature needs at least one panel");
    const int count = 2 * panels + 1;
    std::vector<double> nodes(static_cast<std::size_t>(count));
    const double h = (b - a) / (count - 1);
    for (int i = 0; i < count; ++i) nodes[static_cast<std::size_t>(i)] = a + h * i;
    nodes.back() = b;
    return nodes;
}

/// Combine samples taken at simpson_nodes(a, b, panels).
inline double simpson_combine(const std::vector<double>& samples, double a, double b) {
    if (samples.size() < 3 || samples.size() % 2 == 0)
        throw std::invalid_argument("simpson_combine expects 2*panels+1 samples");
    const double h = (b - a) / static_cast<double>(samples.size() - 1);
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i + 1 < samples.size(); i += 2) odd += samples[i];
    for (std::size_t i = 2; i + 1 < samples.size(); i += 2) even += samples[i];
    return h / 3.0 * (samples.front() + samples.back() + 4.0 * odd + 2.0 * even);
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    const std::vector<double> nodes = simpson_nodes(a, b, panels);
    std::vector<double> samples(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) samples[i] = f(nodes[i]);
    return simpson_combine(samples, a, b);
}

/// Product Simpson rule over [0,1]^2.
inline double simpson_2d(const std::function<double(double, double)>& f, int panels_u,
                         int panels_v) {
    const std::vector<double> us = simpson_nodes(0.0, 1.0, panels_u);
    std::vector<double> slices(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) {
        const double u = us[i];
        slices[i] = simpson([&f, u](double v) { return f(u, v); }, 0.0, 1.0, panels_v);
    }
    return simpson_combine(slices, 0.0, 1.0);
}

}  // namespace cosym
