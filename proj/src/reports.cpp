#include "cosym/reports.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "cosym/builtins.hpp"
#include "cosym/dynamics.hpp"
#include "cosym/flux.hpp"
#include "cosym/forms.hpp"
#include "cosym/fragmentation.hpp"
#include "cosym/integrability.hpp"
#include "cosym/symplectization.hpp"

namespace cosym {

namespace {

using json = nlohmann::ordered_json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct CommandContext {
    Manifold manifold;
    KeyValueConfig cfg;
    std::uint64_t seed = 12345;
    std::optional<double> tolerance_override;
    std::optional<int> steps_override;

    double tol(const std::string& key, double fallback) const {
        if (tolerance_override) return *tolerance_override;
        return cfg.get_double(key, fallback);
    }
    int steps(const std::string& key, int fallback) const {
        if (steps_override) return *steps_override;
        return cfg.get_int(key, fallback);
    }
};

// The builtin base-coordinate fields are not monodromy-invariant, so the
// commands built on them are defined on the product family only.
void require_product_torus(const Manifold& m, const std::string& command) {
    if (m.kind() != ManifoldKind::ProductTorus)
        throw std::invalid_argument(command + " requires a product torus manifold");
}

Isotopy named_loop(const Manifold& m, const std::string& name, double step) {
    if (name == "theta") return translation_loop(m, 0, step);
    auto indexed = [&](const std::string& prefix) -> int {
        if (name.rfind(prefix, 0) != 0) return 0;
        try {
            return std::stoi(name.substr(prefix.size()));
        } catch (const std::exception&) {
            return 0;
        }
    };
    if (const int k = indexed("x")) return translation_loop(m, k, step);
    if (const int k = indexed("y")) return translation_loop(m, m.n() + k, step);
    throw std::invalid_argument("unknown loop name: " + name +
                                " (expected theta, x<k>, or y<k>)");
}

json run_reeb_check(CommandContext& ctx) {
    const Manifold& m = ctx.manifold;
    const int samples = ctx.cfg.get_int("samples", 1000);
    const double tol = ctx.tol("tolerance", 1e-12);

    // The time-T map is the identity on the product torus and the monodromy
    // twist on a mapping torus; the expected image is computed by a direct
    // matrix multiply mod 1, independent of the flow path.
    auto expected_period_image = [&m](const Point& p) {
        Point q = p;
        if (m.kind() == ManifoldKind::MappingTorus) {
            const MonodromyMatrix& a = m.monodromy();
            const double x = p.base[0], y = p.base[1];
            q.base[0] = wrap_unit(static_cast<double>(a[0][0]) * x +
                                  static_cast<double>(a[0][1]) * y);
            q.base[1] = wrap_unit(static_cast<double>(a[1][0]) * x +
                                  static_cast<double>(a[1][1]) * y);
        }
        return q;
    };

    double max_dev = 0.0;
    double max_roundtrip = 0.0;
    for (const Point& p : random_points(m, static_cast<std::size_t>(samples), ctx.seed)) {
        max_dev = std::max(max_dev,
                           m.distance(m.reeb_flow(p, m.period()), expected_period_image(p)));
        for (const double s : {0.37 * m.period(), 2.61 * m.period()})
            max_roundtrip =
                std::max(max_roundtrip, m.distance(m.reeb_flow(m.reeb_flow(p, s), -s), p));
    }

    json out;
    out["period_map"] = {{"samples", samples},
                         {"max_deviation", max_dev},
                         {"roundtrip_deviation", max_roundtrip},
                         {"tolerance", tol}};
    bool pass = max_dev <= tol && max_roundtrip <= tol;

    if (m.n() == 1) {
        const MonodromyReport rep = extract_monodromy(m);
        json mono;
        mono["matrix"] = {{rep.matrix[0][0], rep.matrix[0][1]},
                          {rep.matrix[1][0], rep.matrix[1][1]}};
        mono["determinant"] = rep.determinant;
        mono["fit_residual"] = rep.fit_residual;
        bool mono_ok = rep.determinant == 1;
        if (m.kind() == ManifoldKind::MappingTorus) {
            const MonodromyMatrix& stored = m.monodromy();
            mono_ok = mono_ok && rep.matrix == stored;
        }
        mono["pass"] = mono_ok;
        out["monodromy"] = mono;
        pass = pass && mono_ok;
    }
    out["pass"] = pass;
    return out;
}

json run_volume(CommandContext& ctx) {
    const Manifold& m = ctx.manifold;
    const int samples = ctx.cfg.get_int("samples", 125);
    const VolumeReport rep =
        volume_check(m, random_points(m, static_cast<std::size_t>(samples), ctx.seed));
    json out;
    out["samples"] = rep.samples;
    out["min_abs"] = rep.min_abs;
    out["max_abs"] = rep.max_abs;
    out["pass"] = rep.pass;
    return out;
}

json run_flux(CommandContext& ctx) {
    const Manifold& m = ctx.manifold;
    std::vector<std::string> loop_names;
    if (ctx.cfg.has("loops")) {
        loop_names = ctx.cfg.get_strings("loops");
    } else {
        for (int k = 1; k <= m.n(); ++k) loop_names.push_back("x" + std::to_string(k));
        for (int k = 1; k <= m.n(); ++k) loop_names.push_back("y" + std::to_string(k));
    }
    const double step = ctx.cfg.get_double("step", 0.01);
    LatticeOptions opts;
    opts.flux.time_quadrature_panels = ctx.steps("time_quadrature", 32);
    opts.tolerance = ctx.tol("tolerance", 1e-8);
    opts.flux.loop_tolerance = ctx.cfg.get_double("loop_tolerance", 1e-8);
    const int panels = ctx.cfg.get_int("cycle_panels", 128);
    const CycleBasis basis = coordinate_cycle_basis(m, panels);

    std::vector<Isotopy> loops;
    for (const std::string& name : loop_names) loops.push_back(named_loop(m, name, step));

    json out;
    json loops_json = json::array();
    std::vector<std::vector<double>> vectors;
    for (std::size_t i = 0; i < loops.size(); ++i) {
        const FluxClass flux = flux_class(m, loops[i], basis, opts.flux);
        json item;
        item["label"] = loop_names[i];
        item["basis_labels"] = flux.basis_labels;
        item["h1_pairings"] = flux.h1_pairings;
        item["eta_component"] = flux.eta_component;
        loops_json.push_back(item);
        vectors.push_back(flux.h1_pairings);
    }
    out["loops"] = loops_json;

    const Lattice lattice =
        analyze_lattice(m, std::move(vectors), opts.tolerance, opts.enumeration_radius);
    json lat;
    lat["degenerate"] = lattice.degenerate;
    if (lattice.min_nonzero_norm)
        lat["min_nonzero_norm"] = *lattice.min_nonzero_norm;
    else
        lat["min_nonzero_norm"] = nullptr;
    if (lattice.matches_expected) lat["matches_expected"] = *lattice.matches_expected;
    out["lattice"] = lat;

    bool pass = !lattice.degenerate;
    if (lattice.matches_expected) pass = pass && *lattice.matches_expected;
    out["pass"] = pass;
    return out;
}

json run_commutator(CommandContext& ctx) {
    const Manifold& m = ctx.manifold;
    require_product_torus(m, "commutator");
    // Default amplitude keeps the eps-flows inside the perturbative regime
    // where the eps^2 expansion of the group commutator is the leading term.
    const double amplitude = ctx.cfg.get_double("amplitude", 1.0 / kTwoPi);
    const ScalarField h =
        scaled_field(builtin_field(m, ctx.cfg.get_string("h_field", "sin_x1")), amplitude);
    const ScalarField k =
        scaled_field(builtin_field(m, ctx.cfg.get_string("k_field", "sin_y1")), amplitude);
    std::vector<double> eps_list = ctx.cfg.get_doubles("eps", {0.1, 0.05, 0.025});
    const int steps_per_flow = ctx.steps("steps_per_flow", 64);
    const int sample_count = ctx.cfg.get_int("samples", 9);
    const double slope_min = ctx.cfg.get_double("slope_min", 2.7);

    const std::vector<Point> samples =
        random_points(m, static_cast<std::size_t>(sample_count), ctx.seed);

    json out;
    std::vector<double> residuals;
    std::vector<double> displacements;
    for (double eps : eps_list) {
        const auto rows = commutator_flow(m, h, k, eps, eps / steps_per_flow, samples);
        double residual = 0.0, disp = 0.0;
        for (const CommutatorSample& row : rows) {
            residual = std::max(residual, row.residual);
            for (double c : row.displacement) disp = std::max(disp, std::fabs(c));
        }
        residuals.push_back(residual);
        displacements.push_back(disp);
    }
    out["eps"] = eps_list;
    out["residuals"] = residuals;
    out["max_displacements"] = displacements;

    // Least-squares slope of log residual vs log eps.
    double slope = 0.0;
    if (eps_list.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const auto count = static_cast<double>(eps_list.size());
        for (std::size_t i = 0; i < eps_list.size(); ++i) {
            const double x = std::log(eps_list[i]);
            const double y = std::log(std::max(residuals[i], 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    }
    out["slope"] = slope;

    const double commuting_eps = ctx.cfg.get_double("commuting_eps", 0.01);
    const double commuting_tol = ctx.tol("commuting_tolerance", 1e-6);
    const ScalarField hc =
        scaled_field(builtin_field(m, ctx.cfg.get_string("commuting_h", "sin_x1")), amplitude);
    const ScalarField kc =
        scaled_field(builtin_field(m, ctx.cfg.get_string("commuting_k", "cos_x1")), amplitude);
    double commuting_disp = 0.0;
    for (const CommutatorSample& row :
         commutator_flow(m, hc, kc, commuting_eps, commuting_eps / steps_per_flow, samples)) {
        for (double c : row.displacement) commuting_disp = std::max(commuting_disp, std::fabs(c));
    }
    out["commuting_displacement"] = commuting_disp;

    // Existence of non-commuting elements: the compactly supported pair must
    // visibly move some point of its support at eps = 0.1.
    const auto [ph, pk] = noncommuting_pair(m);
    const double witness_eps = ctx.cfg.get_double("witness_eps", 0.1);
    double witness = 0.0;
    std::vector<Point> support_samples = samples;
    {
        std::vector<double> c(static_cast<std::size_t>(2 * m.n()), 0.5);
        c[0] = 0.68;  // falloff annulus of the builtin pair
        support_samples.push_back(m.canonicalize(0.0, c));
        c[0] = 0.5;
        c[static_cast<std::size_t>(m.n())] = 0.3;
        support_samples.push_back(m.canonicalize(0.0, c));
    }
    for (const CommutatorSample& row : commutator_flow(m, ph, pk, witness_eps,
                                                       witness_eps / steps_per_flow,
                                                       support_samples)) {
        for (double c : row.displacement) witness = std::max(witness, std::fabs(c));
    }
    out["witness_displacement"] = witness;
    const double witness_min = ctx.cfg.get_double("witness_min", 1e-4);

    const bool pass = slope >= slope_min && commuting_disp <= commuting_tol &&
                      witness >= witness_min;
    out["pass"] = pass;
    return out;
}

json run_fragment(CommandContext& ctx) {
    const Manifold& m = ctx.manifold;
    require_product_torus(m, "fragment");
    const double amplitude = ctx.cfg.get_double("amplitude", 0.05);
    const ScalarField h =
        scaled_field(builtin_field(m, ctx.cfg.get_string("h_field", "sinx1_siny1")), amplitude);
    const int divisions = ctx.cfg.get_int("divisions", 2);
    const double overlap = ctx.cfg.get_double("overlap", 0.25);
    const int steps = ctx.steps("steps", 8);
    const int sample_count = ctx.cfg.get_int("samples", 12);
    const double order_min = ctx.cfg.get_double("order_min", 1.8);
    const double sum_tol = ctx.cfg.get_double("sum_tolerance", 1e-12);
    const double support_tol = ctx.cfg.get_double("support_tolerance", 1e-12);
    const double equivariance_tol = ctx.tol("equivariance_tolerance", 1e-6);

    const ChartCover cover = build_cover(m, divisions, overlap);
    const PartitionOfUnity pou = partition_of_unity(m, cover);
    const std::vector<ScalarField> pieces = fragment_hamiltonian(h, pou);
    const std::vector<Point> samples =
        random_points(m, static_cast<std::size_t>(sample_count), ctx.seed);

    json out;
    out["charts"] = cover.charts.size();

    double sum_residual = 0.0;
    for (const Point& p : grid_points(m, m.n() == 1 ? 10 : 4)) {
        double total = 0.0;
        for (const ScalarField& piece : pieces) total += piece.value(0.0, p);
        sum_residual = std::max(sum_residual, std::fabs(total - h.value(0.0, p)));
    }
    out["sum_residual"] = sum_residual;

    // Chart-local flows must fix every point outside their chart.
    double support_residual = 0.0;
    for (std::size_t c = 0; c < pieces.size(); ++c) {
        Isotopy iso = hamiltonian_isotopy(m, pieces[c], 1.0 / 64.0);
        for (const Point& p : samples) {
            if (box_contains(cover.charts[c], p)) continue;
            support_residual =
                std::max(support_residual, m.distance(time_one_map(m, iso, p), p));
        }
    }
    out["support_residual"] = support_residual;

    json schemes = json::array();
    double strang_order = 0.0;
    for (const Splitting scheme : {Splitting::LieTrotter, Splitting::Strang}) {
        const SplittingReport rep = compose_local_flows(m, pieces, scheme, steps, samples, &h);
        json item;
        item["scheme"] = scheme == Splitting::Strang ? "strang" : "lie_trotter";
        item["steps"] = rep.steps;
        item["deviations"] = rep.deviations;
        item["max_deviation"] = rep.max_deviation;
        item["empirical_order"] = rep.empirical_order;
        schemes.push_back(item);
        if (scheme == Splitting::Strang) strang_order = rep.empirical_order;
    }
    out["schemes"] = schemes;

    double equivariance = 0.0;
    if (h.reeb_invariant) {
        const double s = m.period() / 3.0;
        for (const Point& p : samples) {
            const Point a = m.reeb_flow(split_flow(m, pieces, Splitting::Strang, steps, p), s);
            const Point b = split_flow(m, pieces, Splitting::Strang, steps, m.reeb_flow(p, s));
            equivariance = std::max(equivariance, m.distance(a, b));
        }
    }
    out["equivariance_residual"] = equivariance;

    const bool pass = strang_order >= order_min && sum_residual <= sum_tol &&
                      support_residual <= support_tol && equivariance <= equivariance_tol;
    out["pass"] = pass;
    return out;
}

json run_lift(CommandContext& ctx) {
    const Manifold& m = ctx.manifold;
    require_product_torus(m, "lift");
    const int quadrature = ctx.steps("quadrature", 64);
    const double fd_step = ctx.cfg.get_double("fd_step", 1e-5);
    const double residual_tol = ctx.tol("residual_tolerance", 1e-5);
    const double pairing_tol = ctx.cfg.get_double("pairing_tolerance", 1e-6);
    const int sample_count = ctx.cfg.get_int("samples", 8);
    const double step = ctx.cfg.get_double("step", 1e-3);

    const std::vector<LiftedPoint> samples =
        random_lifted_points(m, static_cast<std::size_t>(sample_count), ctx.seed);
    json out;

    const Isotopy reeb = reeb_isotopy(m, m.period(), step);
    const LiftedIsotopy reeb_lift = lift_isotopy(m, reeb, quadrature);
    const SymplecticReport reeb_rep = verify_symplectic(
        m, [&](const LiftedPoint& p) { return reeb_lift.map(1.0, p); }, samples, fd_step);
    out["reeb_residual"] = reeb_rep.max_residual;

    const double amplitude = ctx.cfg.get_double("amplitude", 0.05);
    const ScalarField bump =
        scaled_field(builtin_field(m, ctx.cfg.get_string("h_field", "bump")), amplitude);
    const Isotopy ham = hamiltonian_isotopy(m, bump, step);
    const LiftedIsotopy ham_lift = lift_isotopy(m, ham, quadrature);
    const SymplecticReport ham_rep = verify_symplectic(
        m, [&](const LiftedPoint& p) { return ham_lift.map(1.0, p); }, samples, fd_step);
    out["hamiltonian_residual"] = ham_rep.max_residual;

    const double theta_pairing = mixed_cycle_pairing(m, coordinate_cycle(m, 0));
    const double x1_pairing = mixed_cycle_pairing(m, coordinate_cycle(m, 1));
    out["mixed_cycle"] = {{"theta", theta_pairing},
                          {"theta_expected", kTwoPi * m.period()},
                          {"x1", x1_pairing}};

    // Section round trip: restricting the lifted Hamiltonian along x -> (x, l)
    // returns F + eta(phi_dot) * l.
    const LiftedField lifted_h = lift_hamiltonian(m, bump, ham);
    double section_residual = 0.0;
    for (const LiftedPoint& p : samples) {
        for (double level : {0.0, 1.0, 4.0}) {
            const LiftedPoint at{p.base_point, level};
            const double direct = lifted_h.value(0.5, at);
            const double expected = bump.value(0.5, p.base_point) +
                                    ham.generator.evaluator(0.5, p.base_point).d_theta * level;
            section_residual = std::max(section_residual, std::fabs(direct - expected));
        }
    }
    out["section_residual"] = section_residual;

    double min_det = std::numeric_limits<double>::infinity();
    for (const LiftedPoint& p : samples)
        min_det = std::min(min_det, std::fabs(symplectization_matrix(m, p).determinant()));
    double weight_product = 1.0;
    for (double a : m.weights()) weight_product *= a;
    out["omega_min_abs_det"] = min_det;
    out["omega_expected_det"] = weight_product * weight_product;

    const bool pass = reeb_rep.max_residual <= residual_tol &&
                      ham_rep.max_residual <= residual_tol &&
                      std::fabs(theta_pairing - kTwoPi * m.period()) <= pairing_tol &&
                      std::fabs(x1_pairing) <= pairing_tol && section_residual <= 1e-12 &&
                      min_det >= weight_product * weight_product * (1.0 - 1e-10);
    out["pass"] = pass;
    return out;
}

json run_integrals(CommandContext& ctx) {
    const Manifold& m = ctx.manifold;
    require_product_torus(m, "integrals");
    const IntegralSet set = separable_integral_set(m);
    const ScalarField h = builtin_field(m, ctx.cfg.get_string("h_field", "sin_x1"));
    const double duration = ctx.cfg.get_double("duration", 10.0);
    const double step = ctx.cfg.get_double("step", 1e-3);
    const double bracket_tol = ctx.tol("bracket_tolerance", 1e-10);
    const double drift_tol = ctx.cfg.get_double("drift_tolerance", 1e-8);
    const double isotropy_tol = ctx.cfg.get_double("isotropy_tolerance", 1e-6);
    const int sample_count = ctx.cfg.get_int("samples", 24);

    const std::vector<Point> samples =
        random_points(m, static_cast<std::size_t>(sample_count), ctx.seed);
    json out;
    out["labels"] = set.labels;

    const CommutingReport commuting = verify_commuting(m, set, samples, bracket_tol);
    out["max_bracket"] = commuting.max_bracket;
    out["max_reeb_derivative"] = commuting.max_reeb_derivative;
    out["gradient_rank"] = commuting.gradient_rank;
    out["expected_rank"] = m.n() + 1;

    Point start = m.canonicalize(0.1, std::vector<double>(static_cast<std::size_t>(2 * m.n()), 0.15));
    if (ctx.cfg.has("start")) start = m.canonicalize(ctx.cfg.get_doubles("start"));
    const DriftReport drift = conservation_along_flow(m, h, set, start, duration, step, 1e-8);
    out["integral_drift"] = drift.integral_drift;
    out["hamiltonian_drift"] = drift.hamiltonian_drift;

    const double isotropy = max_isotropy_residual(m, set, samples);
    out["isotropy_residual"] = isotropy;

    if (ctx.cfg.has("trajectory_csv")) {
        std::ofstream csv(ctx.cfg.get_string("trajectory_csv"));
        write_trajectory_csv(csv, m, drift.flow);
    }
    if (ctx.cfg.has("torus_csv")) {
        std::vector<Point> cloud;
        for (const auto& [t, p] : drift.flow.trajectory)
            if (cloud.size() < 2048) cloud.push_back(p);
        std::ofstream csv(ctx.cfg.get_string("torus_csv"));
        write_point_cloud_csv(csv, m, cloud);
    }

    double max_drift = drift.hamiltonian_drift;
    for (double d : drift.integral_drift) max_drift = std::max(max_drift, d);
    const bool pass = commuting.max_bracket <= bracket_tol &&
                      commuting.gradient_rank == m.n() + 1 && max_drift <= drift_tol &&
                      isotropy <= isotropy_tol;
    out["pass"] = pass;
    return out;
}

}  // namespace

nlohmann::ordered_json manifold_json(const Manifold& m) {
    json out;
    out["kind"] = m.kind() == ManifoldKind::ProductTorus ? "product_torus" : "mapping_torus";
    out["n"] = m.n();
    out["reeb_period"] = m.period();
    if (m.kind() == ManifoldKind::ProductTorus) {
        out["weights"] = m.weights();
    } else {
        const MonodromyMatrix& a = m.monodromy();
        out["monodromy"] = {{a[0][0], a[0][1]}, {a[1][0], a[1][1]}};
    }
    return out;
}

std::vector<std::string> command_names() {
    return {"reeb-check", "volume", "flux", "commutator", "fragment", "lift", "integrals"};
}

RunOutcome run_command(const std::string& command, const KeyValueConfig& cfg,
                       const RunOverrides& overrides) {
    CommandContext ctx{Manifold::from_config(cfg), cfg,
                       overrides.seed ? *overrides.seed
                                      : static_cast<std::uint64_t>(cfg.get_int("seed", 12345)),
                       overrides.tolerance, overrides.steps};

    json results;
    if (command == "reeb-check") {
        results = run_reeb_check(ctx);
    } else if (command == "volume") {
        results = run_volume(ctx);
    } else if (command == "flux") {
        results = run_flux(ctx);
    } else if (command == "commutator") {
        results = run_commutator(ctx);
    } else if (command == "fragment") {
        results = run_fragment(ctx);
    } else if (command == "lift") {
        results = run_lift(ctx);
    } else if (command == "integrals") {
        results = run_integrals(ctx);
    } else {
        throw std::invalid_argument("unknown command: " + command);
    }

    RunOutcome outcome;
    outcome.pass = results.value("pass", false);
    outcome.report = json();
    outcome.report["command"] = command;
    outcome.report["manifold"] = manifold_json(ctx.manifold);
    outcome.report["seed"] = ctx.seed;
    outcome.report["results"] = results;
    outcome.report["pass"] = outcome.pass;
    return outcome;
}

}  // namespace cosym
