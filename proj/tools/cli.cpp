#include "cli.hpp"

#include "output.hpp"
#include "version.hpp"

#include "pendular/dipole_pair.hpp"
#include "pendular/error.hpp"
#include "pendular/model_fit.hpp"
#include "pendular/pendular_moments.hpp"
#include "pendular/units.hpp"
#include "pendular/xxz_chain.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace pendular::cli {

namespace {

double parse_double(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InvalidArgument(std::string(what) + ": not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.emplace_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

/// "a,b,c" | "lo:hi:step" | "log:lo:hi:count"
std::vector<double> parse_grid(const std::string& text, std::string_view what) {
    const auto colon = split(text, ':');
    std::vector<double> grid;
    if (colon.size() == 4 && colon[0] == "log") {
        const double lo = parse_double(colon[1], what);
        const double hi = parse_double(colon[2], what);
        const double count = parse_double(colon[3], what);
        if (!(lo > 0.0) || !(hi >= lo) || count < 1 || count != std::floor(count)) {
            throw InvalidArgument(std::string(what) + ": log grid needs 0 < lo <= hi and count >= 1");
        }
        const int n = static_cast<int>(count);
        for (int i = 0; i < n; ++i) {
            const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
            grid.push_back(i == n - 1 ? hi : lo * std::pow(hi / lo, t));
        }
    } else if (colon.size() == 3) {
        grid = uniform_grid(parse_double(colon[0], what), parse_double(colon[1], what),
                            parse_double(colon[2], what));
    } else if (colon.size() == 1) {
        for (const auto& item : split(text, ',')) {
            grid.push_back(parse_double(item, what));
        }
    } else {
        throw InvalidArgument(std::string(what) + ": expected 'a,b,c', 'lo:hi:step' or 'log:lo:hi:count'");
    }
    validate_grid(grid, what);
    return grid;
}

double parse_angle_deg(const std::string& text) {
    if (text == "magic") {
        return kMagicAngle * 180.0 / std::numbers::pi;
    }
    return parse_double(text, "--alpha");
}

double radians(double deg) {
    if (deg == 90.0) return std::numbers::pi / 2;
    return deg * std::numbers::pi / 180.0;
}

/// Options shared by every command.
struct Common {
    std::string out;
    std::string format = "csv";
    unsigned jobs = 0;
    std::string presets;
    std::string molecule;
    int j_max = kDefaultJMax;
};

void add_common(CLI::App* app, Common& c, bool with_basis = true) {
    app->add_option("--out", c.out, "Output file (default: stdout); a manifest is written beside it");
    app->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--jobs", c.jobs, "Worker threads for scans (0 = all cores)");
    app->add_option("--presets", c.presets, "Molecule preset file (else $PENDULAR_PRESETS)");
    app->add_option("--molecule", c.molecule, "Preset name; adds a units block to the output");
    if (with_basis) {
        app->add_option("--j-max", c.j_max, "Rotor basis cutoff")->check(CLI::Range(1, 200));
    }
}

std::optional<MoleculePreset> resolve_molecule(const Common& c) {
    if (c.molecule.empty()) {
        return std::nullopt;
    }
    const auto path = c.presets.empty() ? std::nullopt
                                        : std::optional<std::filesystem::path>(c.presets);
    return PresetRegistry::resolve(path).get(c.molecule);
}

Json units_block(const MoleculePreset& p) {
    return Json{{"molecule", p.name},
                {"mu_debye", p.mu_debye},
                {"b_cm1", p.b_cm1},
                {"energy_unit", "B"},
                {"kv_cm_per_unit_x", epsilon_for_x(p, 1.0)},
                {"omega_over_b_at_1nm", omega_over_b(p, 1.0)}};
}

Json common_params(const Common& c) {
    Json p = Json::object();
    p["format"] = c.format;
    p["jobs"] = c.jobs;
    p["j_max"] = c.j_max;
    if (!c.presets.empty()) p["presets"] = c.presets;
    if (!c.molecule.empty()) p["molecule"] = c.molecule;
    return p;
}

std::string phase_name(Phase p) { return std::string(to_string(p)); }

Json thresholds_json(const PhaseThresholds& t) {
    return Json{{"ferro_magnetization", t.ferro_magnetization},
                {"staggered_min", t.staggered_min},
                {"gap_min_over_j", t.gap_min_over_j}};
}

// ---------------------------------------------------------------------------
// Commands. Each builds a Table plus the parameter set recorded in the manifest.

struct Result {
    Table table;
    Json params;
};

struct StarkMapArgs {
    double x_max = 12.0;
    double x_step = 0.1;
    std::vector<int> m{0, 1, 2};
    int n_states = 4;
};

Result stark_map_cmd(const StarkMapArgs& a, const Common& c) {
    const std::vector<double> grid = uniform_grid(0.0, a.x_max, a.x_step);
    const auto rows = stark_map(grid, a.m, a.n_states, c.j_max, c.jobs);
    const auto ms = moment_scan(grid, c.j_max, c.jobs);

    Table t{"stark-map", {"x", "m", "j_tilde", "energy", "delta_e"}, {}, {}};
    std::size_t gi = 0;
    for (const StarkMapRow& r : rows) {
        while (grid[gi] != r.x) ++gi;
        t.rows.push_back({r.x, static_cast<long long>(r.m), static_cast<long long>(r.j_tilde),
                          r.energy, ms[gi].delta_e()});
    }
    t.metadata["energy_unit"] = "B";
    t.metadata["delta_e"] = "pseudo-spin gap E(1~,0) - E(1~,1) at the same x";
    Json p = common_params(c);
    p["x_max"] = a.x_max;
    p["x_step"] = a.x_step;
    p["m"] = a.m;
    p["n_states"] = a.n_states;
    return {std::move(t), std::move(p)};
}

struct CoefficientArgs {
    double x_max = 12.0;
    double x_step = 0.1;
    std::string state = "up";
};

Result coefficient_map_cmd(const CoefficientArgs& a, const Common& c) {
    const std::vector<double> grid = uniform_grid(0.0, a.x_max, a.x_step);
    const PseudoSpin s = a.state == "down" ? PseudoSpin::down : PseudoSpin::up;
    Table t{"coefficient-map", {"x", "j", "coefficient"}, {}, {}};
    for (const CoefficientRow& r : coefficient_map(grid, s, c.j_max, c.jobs)) {
        t.rows.push_back({r.x, static_cast<long long>(r.j), r.coefficient});
    }
    t.metadata["state"] = a.state;
    t.metadata["m"] = s == PseudoSpin::down ? 1 : 0;
    Json p = common_params(c);
    p["x_max"] = a.x_max;
    p["x_step"] = a.x_step;
    p["state"] = a.state;
    return {std::move(t), std::move(p)};
}

struct MomentsArgs {
    std::string x_grid = "0:12:0.01";
};

Result moments_cmd(const MomentsArgs& a, const Common& c) {
    const auto grid = parse_grid(a.x_grid, "--x-grid");
    Table t{"moments", {"x", "e0", "e1", "delta_e", "c0", "c1", "cx"}, {}, {}};
    for (const MomentSet& m : moment_scan(grid, c.j_max, c.jobs)) {
        t.rows.push_back({m.x, m.e0, m.e1, m.delta_e(), m.c0, m.c1, m.cx});
    }
    t.metadata["energy_unit"] = "B";
    Json p = common_params(c);
    p["x_grid"] = a.x_grid;
    return {std::move(t), std::move(p)};
}

/// x and omega given directly, or from lab units when a molecule is set.
struct PointArgs {
    std::optional<double> x;
    std::optional<double> omega;
    std::optional<double> epsilon;
    std::optional<double> r;
};

void add_point_options(CLI::App* app, PointArgs& a) {
    auto* x = app->add_option("--x", a.x, "Reduced field mu*eps/B");
    auto* e = app->add_option("--epsilon", a.epsilon, "Field in kV/cm (needs --molecule)");
    x->excludes(e);
    auto* w = app->add_option("--omega", a.omega, "Dipolar scale mu^2/r^3 in units of B");
    auto* r = app->add_option("--r", a.r, "Separation in nm (needs --molecule)");
    w->excludes(r);
}

std::pair<double, double> resolve_point(const PointArgs& a, const std::optional<MoleculePreset>& mol,
                                        double default_omega, Json& metadata) {
    if ((a.epsilon || a.r) && !mol) {
        throw InvalidArgument("--epsilon and --r need --molecule");
    }
    double x = 0.0;
    if (a.x) {
        x = *a.x;
    } else if (a.epsilon) {
        x = reduced_field(*mol, *a.epsilon);
    } else {
        throw InvalidArgument("one of --x or --epsilon is required");
    }
    double omega = default_omega;
    if (a.omega) {
        omega = *a.omega;
    } else if (a.r) {
        omega = omega_over_b(*mol, *a.r);
    }
    if (mol) {
        Json u = units_block(*mol);
        u["epsilon_kv_cm"] = epsilon_for_x(*mol, x);
        if (omega > 0.0) u["r_nm"] = distance_for_omega(*mol, omega);
        metadata["units"] = u;
    }
    return {x, omega};
}

Json point_params(const PointArgs& a) {
    Json p = Json::object();
    if (a.x) p["x"] = *a.x;
    if (a.epsilon) p["epsilon"] = *a.epsilon;
    if (a.omega) p["omega"] = *a.omega;
    if (a.r) p["r"] = *a.r;
    return p;
}

struct CouplingsArgs {
    PointArgs point;
    std::string alpha = "0";
};

Result couplings_cmd(const CouplingsArgs& a, const Common& c) {
    Table t{"couplings",
            {"x", "omega", "alpha_deg", "e0", "e1", "c0", "c1", "cx", "jx", "jy", "jz", "gamma",
             "shift", "jz_over_j"},
            {},
            {}};
    const auto [x, omega] = resolve_point(a.point, resolve_molecule(c), 1.0, t.metadata);
    const double alpha_deg = parse_angle_deg(a.alpha);
    const CouplingGeometry g{omega, radians(alpha_deg)};
    g.validate();
    const MomentSet m = moments(x, c.j_max);
    const HeisenbergConstants h = heisenberg_constants(m, g);
    const double ratio = h.jy != 0.0 ? h.jz / h.jy : std::nan("");
    t.rows.push_back({x, omega, alpha_deg, m.e0, m.e1, m.c0, m.c1, m.cx, h.jx, h.jy, h.jz,
                      h.gamma, h.shift, ratio});
    t.metadata["energy_unit"] = "B";
    t.metadata["hamiltonian"] = "jx XX + jy YY + jz ZZ - gamma (Z1 + Z2) + shift; Z|down> = +|down>";
    t.metadata["jz_over_j"] = "jz / jy";
    Json p = common_params(c);
    p.update(point_params(a.point));
    p["alpha"] = a.alpha;
    return {std::move(t), std::move(p)};
}

struct CouplingMapArgs {
    std::string x_grid = "0:12:0.1";
    std::string alpha_grid = "0:90:1";
};

Result coupling_map_cmd(const CouplingMapArgs& a, const Common& c) {
    const auto xs = parse_grid(a.x_grid, "--x-grid");
    const auto alpha_deg = parse_grid(a.alpha_grid, "--alpha-grid");
    std::vector<double> alphas;
    for (double d : alpha_deg) alphas.push_back(radians(d));
    Table t{"coupling-map",
            {"x", "alpha_deg", "jx_over_omega", "jy_over_omega", "jz_over_omega",
             "gamma2_over_omega"},
            {},
            {}};
    const auto rows = coupling_map(xs, alphas, c.j_max, c.jobs);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const CouplingMapRow& r = rows[i];
        t.rows.push_back({r.x, alpha_deg[i % alpha_deg.size()], r.jx_over_omega, r.jy_over_omega,
                          r.jz_over_omega, r.gamma2_over_omega});
    }
    t.metadata["gamma2"] = "omega-proportional part of gamma";
    Json p = common_params(c);
    p["x_grid"] = a.x_grid;
    p["alpha_grid"] = a.alpha_grid;
    return {std::move(t), std::move(p)};
}

struct FitArgs {
    std::string quantity = "all";
};

Json sigmoid_json(const SigmoidParams& s) {
    return Json{{"a0", s.a0}, {"a1", s.a1}, {"a2", s.a2}, {"x1", s.x1},
                {"x2", s.x2}, {"k1", s.k1}, {"k2", s.k2}};
}

Result fit_cmd(const FitArgs& a, const Common& c) {
    std::vector<FitQuantity> qs;
    if (a.quantity == "all") {
        qs = {FitQuantity::gap, FitQuantity::c0, FitQuantity::c1, FitQuantity::cx};
    } else {
        qs = {*parse_fit_quantity(a.quantity)};
    }
    const auto grid = default_fit_grid();
    const auto ms = moment_scan(grid, c.j_max, c.jobs);
    Table t{"fit", {"quantity", "x", "computed", "published", "published_alt", "refit"}, {}, {}};
    Json summary = Json::object();
    bool all_converged = true;
    for (FitQuantity q : qs) {
        const FitReport r = fit_report(q, ms);
        const std::string name(to_string(q));
        for (const ComparisonRow& row : r.rows) {
            t.rows.push_back({name, row.x, row.computed, row.published, row.published_alt, row.refit});
        }
        Json s;
        s["refit_r_squared"] = std::round(r.refit_r_squared * 1e6) / 1e6;
        s["refit_max_deviation"] = r.refit_max_deviation;
        s["published_max_deviation"] = r.published_max_deviation;
        if (q == FitQuantity::cx) {
            s["published_alt_max_deviation"] = r.published_alt_max_deviation;
            s["published_x1_readings"] = Json::array({-0.4403, -0.04403});
        }
        s["converged"] = r.converged;
        if (r.poly) {
            s["refit"] = r.poly->a;
            s["published"] = published_gap_fit().a;
        } else {
            s["refit"] = sigmoid_json(r.sigmoid->params);
            s["published"] = sigmoid_json(published_sigmoid_fit(q));
        }
        all_converged = all_converged && r.converged;
        summary[name] = s;
    }
    t.metadata["fits"] = summary;
    t.metadata["all_converged"] = all_converged;
    Json p = common_params(c);
    p["quantity"] = a.quantity;
    return {std::move(t), std::move(p)};
}

struct ChainArgs {
    PointArgs point;
    int n = 10;
    std::string boundary = "open";
    bool long_range = false;
};

Result chain_cmd(const ChainArgs& a, const Common& c) {
    Table t{"chain-ed",
            {"n", "boundary", "x", "omega", "j", "jz", "gamma", "jz_over_j", "gamma_over_j",
             "ground_energy", "magnetization", "nn_zz", "staggered_zz", "gap", "spin_gap",
             "overlap_polarized", "ground_up_count", "phase"},
            {},
            {}};
    const auto [x, omega] = resolve_point(a.point, resolve_molecule(c), 1e-4, t.metadata);
    const ChainConstants k = chain_constants(moments(x, c.j_max), omega);
    ChainSpec spec = make_chain(k, a.n, *parse_boundary(a.boundary));
    spec.long_range = a.long_range;
    spec.validate();
    const PhaseThresholds thresholds;
    const ChainResult r = ground_state(spec);
    const Phase phase = classify_phase(r, spec, thresholds);
    t.rows.push_back({static_cast<long long>(a.n), a.boundary, x, omega, k.j, k.jz, k.gamma,
                      k.jz / k.j, k.gamma / k.j, r.ground_energy, r.magnetization_per_site,
                      r.nn_zz_correlation, r.staggered_zz_correlation, r.gap, r.spin_gap,
                      r.ground_overlap_polarized, static_cast<long long>(r.ground_up_count),
                      phase_name(phase)});
    t.metadata["n"] = a.n;
    t.metadata["boundary"] = a.boundary;
    t.metadata["long_range"] = a.long_range;
    t.metadata["thresholds"] = thresholds_json(thresholds);
    t.metadata["energy_unit"] = "B";
    Json p = common_params(c);
    p.update(point_params(a.point));
    p["n"] = a.n;
    p["boundary"] = a.boundary;
    p["long_range"] = a.long_range;
    return {std::move(t), std::move(p)};
}

struct PhaseArgs {
    std::string x_grid = "1:12:1";
    std::string omega_grid = "log:1e-6:1e-4:5";
    int n = 10;
    std::string boundary = "open";
};

Result phase_cmd(const PhaseArgs& a, const Common& c) {
    const auto xs = parse_grid(a.x_grid, "--x-grid");
    const auto omegas = parse_grid(a.omega_grid, "--omega-grid");
    PhaseDiagramOptions opts;
    opts.n = a.n;
    opts.boundary = *parse_boundary(a.boundary);
    opts.j_max = c.j_max;
    opts.workers = c.jobs;
    Table t{"phase-diagram",
            {"x", "omega", "jz_over_j", "gamma_over_j", "phase", "magnetization",
             "overlap_polarized"},
            {},
            {}};
    for (const PhaseDiagramRow& r : phase_diagram(xs, omegas, opts)) {
        t.rows.push_back({r.x, r.omega, r.jz_over_j, r.gamma_over_j, phase_name(r.phase),
                          r.magnetization_per_site, r.ground_overlap_polarized});
    }
    t.metadata["n"] = a.n;
    t.metadata["boundary"] = a.boundary;
    t.metadata["thresholds"] = thresholds_json(opts.thresholds);
    if (const auto mol = resolve_molecule(c)) {
        t.metadata["units"] = units_block(*mol);
    }
    Json p = common_params(c);
    p["x_grid"] = a.x_grid;
    p["omega_grid"] = a.omega_grid;
    p["n"] = a.n;
    p["boundary"] = a.boundary;
    return {std::move(t), std::move(p)};
}

Result convert_cmd(const PointArgs& a, const Common& c) {
    const auto mol = resolve_molecule(c);
    if (!mol) {
        throw InvalidArgument("convert needs --molecule");
    }
    double x = std::nan("");
    double eps = std::nan("");
    if (a.x) {
        x = *a.x;
        eps = epsilon_for_x(*mol, x);
    } else if (a.epsilon) {
        eps = *a.epsilon;
        x = reduced_field(*mol, eps);
    }
    double omega = std::nan("");
    double r = std::nan("");
    if (a.omega) {
        omega = *a.omega;
        r = distance_for_omega(*mol, omega);
    } else if (a.r) {
        r = *a.r;
        omega = omega_over_b(*mol, r);
    }
    if (std::isnan(x) && std::isnan(omega)) {
        throw InvalidArgument("convert needs --epsilon/--x and/or --r/--omega");
    }
    Table t{"convert",
            {"molecule", "mu_debye", "b_cm1", "epsilon_kv_cm", "x", "r_nm", "omega_over_b"},
            {},
            {}};
    t.rows.push_back({mol->name, mol->mu_debye, mol->b_cm1, eps, x, r, omega});
    t.metadata["units"] = units_block(*mol);
    Json p = common_params(c);
    p.update(point_params(a));
    return {std::move(t), std::move(p)};
}

Result presets_cmd(const Common& c) {
    const auto path = c.presets.empty() ? std::nullopt
                                        : std::optional<std::filesystem::path>(c.presets);
    const PresetRegistry reg = PresetRegistry::resolve(path);
    Table t{"presets", {"molecule", "mu_debye", "b_cm1"}, {}, {}};
    for (const auto& name : reg.list()) {
        const MoleculePreset& m = reg.get(name);
        t.rows.push_back({m.name, m.mu_debye, m.b_cm1});
    }
    return {std::move(t), common_params(c)};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pendular-state polar molecule qubits: Stark maps, pseudo-spin couplings and XXZ chains",
                 "pendular"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Common common;
    std::function<Result()> action;

    StarkMapArgs stark;
    auto* s = app.add_subcommand("stark-map", "Pendular energies versus reduced field");
    s->add_option("--x-max", stark.x_max, "Largest reduced field")->capture_default_str();
    s->add_option("--x-step", stark.x_step, "Field step")->capture_default_str();
    s->add_option("--m", stark.m, "Projections M")->delimiter(',')->capture_default_str();
    s->add_option("--n-states", stark.n_states, "States per M")->capture_default_str();
    add_common(s, common);
    s->callback([&] { action = [&] { return stark_map_cmd(stark, common); }; });

    CoefficientArgs coef;
    auto* cm = app.add_subcommand("coefficient-map", "Expansion of a pseudo-spin state over |J,M>");
    cm->add_option("--x-max", coef.x_max)->capture_default_str();
    cm->add_option("--x-step", coef.x_step)->capture_default_str();
    cm->add_option("--state", coef.state)->check(CLI::IsMember({"down", "up"}))->capture_default_str();
    add_common(cm, common);
    cm->callback([&] { action = [&] { return coefficient_map_cmd(coef, common); }; });

    MomentsArgs mom;
    auto* mo = app.add_subcommand("moments", "Energies, orientation cosines and transition moment");
    mo->add_option("--x-grid", mom.x_grid, "a,b,c | lo:hi:step | log:lo:hi:count")->capture_default_str();
    add_common(mo, common);
    mo->callback([&] { action = [&] { return moments_cmd(mom, common); }; });

    CouplingsArgs coup;
    auto* co = app.add_subcommand("couplings", "Pair Heisenberg constants at one point");
    add_point_options(co, coup.point);
    co->add_option("--alpha", coup.alpha, "Array angle in degrees, or 'magic'")->capture_default_str();
    add_common(co, common);
    co->callback([&] { action = [&] { return couplings_cmd(coup, common); }; });

    CouplingMapArgs cmap;
    auto* cp = app.add_subcommand("coupling-map", "Couplings over an (x, alpha) grid, divided by omega");
    cp->add_option("--x-grid", cmap.x_grid)->capture_default_str();
    cp->add_option("--alpha-grid", cmap.alpha_grid, "Degrees")->capture_default_str();
    add_common(cp, common);
    cp->callback([&] { action = [&] { return coupling_map_cmd(cmap, common); }; });

    FitArgs fit;
    auto* fi = app.add_subcommand("fit", "Refit the gap polynomial and moment sigmoids");
    fi->add_option("--quantity", fit.quantity)
        ->check(CLI::IsMember({"all", "gap", "c0", "c1", "cx"}))
        ->capture_default_str();
    add_common(fi, common);
    fi->callback([&] { action = [&] { return fit_cmd(fit, common); }; });

    ChainArgs chain;
    auto* ch = app.add_subcommand("chain-ed", "Exact diagonalization of the XXZ chain at one point");
    add_point_options(ch, chain.point);
    ch->add_option("--n", chain.n, "Sites")->check(CLI::Range(ChainSpec::kMinSites, ChainSpec::kMaxSites))->capture_default_str();
    ch->add_option("--boundary", chain.boundary)->check(CLI::IsMember({"open", "periodic"}))->capture_default_str();
    ch->add_flag("--long-range", chain.long_range, "Couple all pairs with 1/d^3");
    add_common(ch, common);
    ch->callback([&] { action = [&] { return chain_cmd(chain, common); }; });

    PhaseArgs phase;
    auto* ph = app.add_subcommand("phase-diagram", "Chain phase over an (x, omega) grid");
    ph->add_option("--x-grid", phase.x_grid)->capture_default_str();
    ph->add_option("--omega-grid", phase.omega_grid)->capture_default_str();
    ph->add_option("--n", phase.n)->check(CLI::Range(ChainSpec::kMinSites, 12))->capture_default_str();
    ph->add_option("--boundary", phase.boundary)->check(CLI::IsMember({"open", "periodic"}))->capture_default_str();
    add_common(ph, common);
    ph->callback([&] { action = [&] { return phase_cmd(phase, common); }; });

    PointArgs conv;
    auto* cv = app.add_subcommand("convert", "Lab units <-> reduced units for a molecule");
    add_point_options(cv, conv);
    add_common(cv, common, false);
    cv->callback([&] { action = [&] { return convert_cmd(conv, common); }; });

    auto* pr = app.add_subcommand("presets", "List molecule presets");
    add_common(pr, common, false);
    pr->callback([&] { action = [&] { return presets_cmd(common); }; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Result r = action();
        r.table.metadata["code_version"] = kVersion;
        const Format fmt = common.format == "json" ? Format::json : Format::csv;
        std::ostringstream buf;
        write_table(r.table, fmt, buf);
        if (common.out.empty()) {
            out << buf.str();
        } else {
            write_with_manifest(common.out, buf.str(), r.table.command, r.params);
        }
        return kExitOk;
    } catch (const InvalidArgument& e) {
        err << "pendular: error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "pendular: error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConvergenceError& e) {
        err << "pendular: numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "pendular: failure: " << e.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace pendular::cli
