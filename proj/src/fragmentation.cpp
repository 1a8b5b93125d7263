#include "cosym/fragmentation.hpp"

#include <cmath>
#include <stdexcept>

#include "cosym/builtins.hpp"

namespace cosym {

ChartCover build_cover(const Manifold& m, int divisions, double overlap) {
    if (divisions < 2)
        throw std::invalid_argument("cover needs at least 2 divisions per axis "
                                    "(a single chart covering the manifold is not allowed)");
    if (!(overlap > 0.0 && overlap < 1.0))
        throw std::invalid_argument("overlap must lie in (0, 1)");
    const double side = 1.0 / divisions + overlap;
    if (side >= 1.0)
        throw std::invalid_argument("box side 1/divisions + overlap must stay below 1");

    const int nb = 2 * m.n();
    ChartCover cover;
    cover.divisions = divisions;
    cover.overlap = overlap;
    std::vector<int> idx(static_cast<std::size_t>(nb), 0);
    while (true) {
        ChartBox box;
        box.center.resize(static_cast<std::size_t>(nb));
        box.half_width.assign(static_cast<std::size_t>(nb), 0.5 * side);
        for (int i = 0; i < nb; ++i)
            box.center[static_cast<std::size_t>(i)] =
                (idx[static_cast<std::size_t>(i)] + 0.5) / divisions;
        cover.charts.push_back(std::move(box));
        int i = 0;
        for (; i < nb; ++i) {
            if (++idx[static_cast<std::size_t>(i)] < divisions) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i == nb) break;
    }
    return cover;
}

bool box_contains(const ChartBox& box, const Point& p) {
    for (std::size_t i = 0; i < box.center.size(); ++i) {
        if (std::fabs(wrap_diff(p.base[i], box.center[i], 1.0)) > box.half_width[i])
            return false;
    }
    return true;
}

PartitionOfUnity partition_of_unity(const Manifold& m, const ChartCover& cover,
                                    double plateau_fraction, int check_grid) {
    if (cover.charts.empty()) throw std::invalid_argument("cover has no charts");
    if (!(plateau_fraction > 0.0 && plateau_fraction < 1.0))
        throw std::invalid_argument("plateau_fraction must lie in (0, 1)");

    std::vector<PlateauBump> raw;
    raw.reserve(cover.charts.size());
    for (const ChartBox& box : cover.charts) {
        PlateauBump bump;
        bump.center = box.center;
        bump.support_radius = box.half_width;
        bump.plateau_radius = box.half_width;
        for (double& r : bump.plateau_radius) r *= plateau_fraction;
        raw.push_back(std::move(bump));
    }

    auto total_mass = [raw](const Point& p) {
        double s = 0.0;
        for (const PlateauBump& b : raw) s += b.value(p);
        return s;
    };

    // A point with no bump mass means the falloffs opened a gap in the cover.
    const int nb = 2 * m.n();
    std::vector<int> idx(static_cast<std::size_t>(nb), 0);
    while (true) {
        Point p;
        p.theta = 0.0;
        p.base.resize(static_cast<std::size_t>(nb));
        for (int i = 0; i < nb; ++i)
            p.base[static_cast<std::size_t>(i)] =
                static_cast<double>(idx[static_cast<std::size_t>(i)]) / check_grid;
        if (total_mass(p) < 1e-12)
            throw std::runtime_error("partition of unity failed: cover gap at a grid point");
        int i = 0;
        for (; i < nb; ++i) {
            if (++idx[static_cast<std::size_t>(i)] < check_grid) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i == nb) break;
    }

    PartitionOfUnity pou;
    pou.cover = cover;
    for (std::size_t c = 0; c < raw.size(); ++c) {
        ScalarField rho;
        const PlateauBump mine = raw[c];
        rho.value = [mine, total_mass](double, const Point& p) {
            const double v = mine.value(p);
            return v == 0.0 ? 0.0 : v / total_mass(p);
        };
        rho.gradient = [mine, raw, total_mass](double, const Point& p) {
            // quotient rule: d(b/S) = (db * S - b * dS) / S^2
            const double s = total_mass(p);
            const double b = mine.value(p);
            std::vector<double> db = mine.gradient_coords(p);
            std::vector<double> ds(db.size(), 0.0);
            for (const PlateauBump& other : raw) {
                const std::vector<double> g = other.gradient_coords(p);
                for (std::size_t i = 0; i < ds.size(); ++i) ds[i] += g[i];
            }
            for (std::size_t i = 0; i < db.size(); ++i) db[i] = (db[i] * s - b * ds[i]) / (s * s);
            return db;
        };
        rho.reeb_invariant = true;
        pou.bumps.push_back(std::move(rho));
    }
    return pou;
}

std::vector<ScalarField> fragment_hamiltonian(const ScalarField& h, const PartitionOfUnity& pou) {
    if (!h.value) throw std::invalid_argument("fragment_hamiltonian needs a Hamiltonian");
    std::vector<ScalarField> pieces;
    pieces.reserve(pou.bumps.size());
    for (const ScalarField& rho : pou.bumps) pieces.push_back(product_field(rho, h));
    return pieces;
}

namespace {

Point flow_piece(const Manifold& m, const VectorField& field, double t0, double t1, double step,
                 const Point& start) {
    Isotopy iso;
    iso.generator = field;
    iso.t_start = t0;
    iso.t_end = t1;
    iso.step = step;
    return time_one_map(m, iso, start);
}

}  // namespace

Point split_flow(const Manifold& m, const std::vector<ScalarField>& pieces, Splitting scheme,
                 int steps, const Point& start, const SplittingOptions& opts) {
    if (pieces.empty()) throw std::invalid_argument("split_flow needs at least one piece");
    if (steps < 1) throw std::invalid_argument("steps must be positive");
    std::vector<VectorField> fields;
    fields.reserve(pieces.size());
    for (const ScalarField& piece : pieces)
        fields.push_back(hamiltonian_vector_field(m, piece));

    const double dt = 1.0 / steps;
    const std::size_t count = fields.size();
    Point p = start;
    for (int s = 0; s < steps; ++s) {
        const double t0 = s * dt;
        if (scheme == Splitting::LieTrotter) {
            const double inner = dt * opts.piece_step_fraction;
            for (std::size_t i = 0; i < count; ++i)
                p = flow_piece(m, fields[i], t0, t0 + dt, inner, p);
        } else {
            const double half = 0.5 * dt;
            const double inner = half * opts.piece_step_fraction;
            for (std::size_t i = 0; i + 1 < count; ++i)
                p = flow_piece(m, fields[i], t0, t0 + half, inner, p);
            p = flow_piece(m, fields[count - 1], t0, t0 + dt, 2.0 * inner, p);
            for (std::size_t i = count - 1; i-- > 0;)
                p = flow_piece(m, fields[i], t0 + half, t0 + dt, inner, p);
        }
    }
    return p;
}

SplittingReport compose_local_flows(const Manifold& m, const std::vector<ScalarField>& pieces,
                                    Splitting scheme, int steps, const std::vector<Point>& samples,
                                    const ScalarField* reference, const SplittingOptions& opts) {
    if (samples.empty()) throw std::invalid_argument("compose_local_flows needs samples");
    const ScalarField total = sum_field(pieces);
    if (reference != nullptr) {
        for (const Point& p : samples) {
            const double diff = std::fabs(total.value(0.0, p) - reference->value(0.0, p));
            if (diff > opts.sum_check_tolerance)
                throw std::domain_error("pieces do not sum to the reference Hamiltonian");
        }
    }
    const ScalarField& global = reference != nullptr ? *reference : total;

    Isotopy global_iso;
    global_iso.generator = hamiltonian_vector_field(m, global);
    global_iso.step = opts.reference_step;
    std::vector<Point> targets;
    targets.reserve(samples.size());
    for (const Point& p : samples) targets.push_back(time_one_map(m, global_iso, p));

    SplittingReport report;
    report.scheme = scheme;
    report.steps = steps;
    for (const int resolution : {steps, 2 * steps, 4 * steps}) {
        double dev = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const Point q = split_flow(m, pieces, scheme, resolution, samples[i], opts);
            dev = std::max(dev, m.distance(q, targets[i]));
        }
        report.deviations.push_back(dev);
    }
    report.max_deviation = report.deviations.front();
    double order = 0.0;
    int terms = 0;
    for (std::size_t i = 0; i + 1 < report.deviations.size(); ++i) {
        if (report.deviations[i] > 0.0 && report.deviations[i + 1] > 0.0) {
            order += std::log2(report.deviations[i] / report.deviations[i + 1]);
            ++terms;
        }
    }
    report.empirical_order = terms > 0 ? order / terms : 0.0;
    return report;
}

}  // namespace cosym
