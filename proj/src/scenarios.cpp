#include "hierlab/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

#include "hierlab/bbgky.hpp"
#include "hierlab/counterexample.hpp"
#include "hierlab/definetti.hpp"
#include "hierlab/dynamics.hpp"
#include "hierlab/errors.hpp"
#include "hierlab/hierarchy.hpp"
#include "hierlab/liouville.hpp"
#include "hierlab/regimes.hpp"
#include "hierlab/rng.hpp"

namespace hierlab {

using nlohmann::json;

namespace {

constexpr const char* kKindNames[] = {"duality", "uniqueness", "existence", "chaos",
                                      "counterexample", "definetti", "regimes"};

const std::set<std::string>& allowed_keys() {
  static const std::set<std::string> keys = {
      "scenario.name",        "scenario.kind",         "scenario.seed",
      "model.cutoff",         "model.modes",           "model.s",
      "model.sigma",          "dynamics.nonlinearity", "dynamics.coupling",
      "dynamics.potential",   "time.t0",               "time.t1",
      "time.dt",              "measure.file",          "measure.atoms",
      "hierarchy.max_order",  "tolerance.residual",    "tolerance.equality",
      "tolerance.control",    "chaos.particles",       "chaos.order",
      "chaos.capacity",       "chaos.hartree_dt",      "chaos.initial_re",
      "chaos.initial_im",     "counterexample.half_width", "counterexample.spacing",
      "counterexample.times", "counterexample.centers", "counterexample.width",
      "regimes.d",            "regimes.s",             "regimes.alpha",
      "definetti.atom_norm",  "definetti.lift_modes",
  };
  return keys;
}

void require(const Config& cfg, bool ok, const std::string& key, const std::string& what) {
  if (!ok) cfg.reject(key, what);
}

std::string n2s(double v) { return format_number(v); }
std::string b2s(bool v) { return v ? "true" : "false"; }

Nonlinearity scenario_nonlinearity(const Scenario& sc) {
  if (sc.nonlinearity == "cubic") return Nonlinearity::cubic(sc.coupling);
  if (sc.nonlinearity == "hartree") return Nonlinearity::hartree(PairPotential(sc.potential));
  return Nonlinearity::zero();
}

AtomicMeasure scenario_measure(const Scenario& sc, const ModelSpace& space) {
  if (sc.measure_file.empty()) return default_measure(space, sc.atoms, sc.seed);
  std::ifstream in(sc.measure_file);
  if (!in) throw ContractViolation("cannot read measure file " + sc.measure_file.string());
  AtomicMeasure mu = measure_from_json(json::parse(in));
  if (mu.dim() != space.dim())
    throw ContractViolation("measure file has dimension " + std::to_string(mu.dim()) +
                            " but the model space has " + std::to_string(space.dim()));
  return mu;
}

json header(const Scenario& sc) {
  return json{{"schema_version", kSchemaVersion},
              {"scenario", sc.name},
              {"kind", to_string(sc.kind)},
              {"seed", sc.seed},
              {"config_hash", sc.content_hash}};
}

json curve_maxima(const std::vector<ResidualCurve>& curves) {
  json out = json::array();
  for (const auto& c : curves) out.push_back(c.max);
  return out;
}

// Largest even interior index near the middle, so the corrupted sample is a Simpson node.
std::size_t corruption_index(std::size_t samples) {
  const std::size_t n = samples - 1;
  std::size_t idx = (n / 2) & ~static_cast<std::size_t>(1);
  if (idx == 0) idx = std::min<std::size_t>(2, n);
  return idx;
}

ScenarioResult run_duality(const Scenario& sc) {
  const ModelSpace space = scenario_space(sc);
  const VectorField vf = VectorField::interaction_picture(space, scenario_nonlinearity(sc));
  const AtomicMeasure mu = scenario_measure(sc, space);
  const TestBattery battery = make_test_battery(space, sc.t0, sc.t1, sc.seed);

  const Transport coarse = liouville_from_flow(mu, vf, sc.t0, sc.t1, sc.dt);
  const DualityReport main =
      duality_check(coarse.trajectory, space, vf, sc.max_order, battery, sc.residual_tolerance);
  const Transport fine = liouville_from_flow(mu, vf, sc.t0, sc.t1, sc.dt / 2.0);
  const DualityReport refined =
      duality_check(fine.trajectory, space, vf, sc.max_order, battery, sc.residual_tolerance);

  const std::size_t idx = corruption_index(coarse.trajectory.times.size());
  const MeasureTrajectory bad =
      corrupt_trajectory(coarse.trajectory, idx, 0, space.basis_vector(0));
  const DualityReport control =
      duality_check(bad, space, vf, sc.max_order, battery, sc.residual_tolerance);
  const bool rejected = control.hierarchy_max > sc.control_threshold &&
                        control.characteristic_max > sc.control_threshold;

  ScenarioResult res;
  res.pass = main.pass && main.hierarchy_small && main.characteristic_small && rejected;
  res.report = header(sc);
  res.report["residuals"] = {{"hierarchy", curve_maxima(main.hierarchy)},
                             {"characteristic", curve_maxima(main.characteristic)},
                             {"weak_form", main.weak_form},
                             {"hierarchy_max", main.hierarchy_max},
                             {"characteristic_max", main.characteristic_max},
                             {"weak_form_max", main.weak_form_max},
                             {"tolerance", sc.residual_tolerance}};
  res.report["refinement"] = {
      {"dt", sc.dt},
      {"dt_fine", sc.dt / 2.0},
      {"hierarchy_max_fine", refined.hierarchy_max},
      {"characteristic_max_fine", refined.characteristic_max},
      {"hierarchy_ratio", main.hierarchy_max / refined.hierarchy_max},
      {"characteristic_ratio", main.characteristic_max / refined.characteristic_max}};
  res.report["control"] = {{"time_index", idx},
                           {"hierarchy_max", control.hierarchy_max},
                           {"characteristic_max", control.characteristic_max},
                           {"weak_form_max", control.weak_form_max},
                           {"threshold", sc.control_threshold},
                           {"rejected", rejected}};
  res.report["verdict"] = res.pass ? "PASS" : "FAIL";

  CsvTable hier{"hierarchy_residual", {"t", "k", "residual"}, {}};
  for (std::size_t k = 0; k < main.hierarchy.size(); ++k)
    for (std::size_t i = 0; i < main.hierarchy[k].times.size(); ++i)
      hier.add_row({n2s(main.hierarchy[k].times[i]), std::to_string(k + 1),
                    n2s(main.hierarchy[k].values[i])});
  CsvTable chr{"characteristic_residual", {"t", "vector", "residual"}, {}};
  for (std::size_t j = 0; j < main.characteristic.size(); ++j)
    for (std::size_t i = 0; i < main.characteristic[j].times.size(); ++i)
      chr.add_row({n2s(main.characteristic[j].times[i]), std::to_string(j),
                   n2s(main.characteristic[j].values[i])});
  CsvTable weak{"weak_form", {"test", "residual"}, {}};
  for (std::size_t j = 0; j < main.weak_form.size(); ++j)
    weak.add_row({std::to_string(j), n2s(main.weak_form[j])});
  CsvTable ctl{"control", {"family", "max_residual", "threshold"}, {}};
  ctl.add_row({"hierarchy", n2s(control.hierarchy_max), n2s(sc.control_threshold)});
  ctl.add_row({"characteristic", n2s(control.characteristic_max), n2s(sc.control_threshold)});
  res.tables = {hier, chr, weak, ctl};
  return res;
}

json uniqueness_json(const UniquenessReport& r) {
  return json{{"precondition_holds", r.precondition_holds},
              {"discriminating_order", r.discriminating_order},
              {"initial_defect", r.initial_defect},
              {"discriminating_moment", r.discriminating_moment},
              {"max_defect", r.max_defect},
              {"pass", r.pass}};
}

ScenarioResult run_uniqueness(const Scenario& sc) {
  const ModelSpace space = scenario_space(sc);
  const VectorField vf = VectorField::interaction_picture(space, scenario_nonlinearity(sc));
  const AtomicMeasure mu = scenario_measure(sc, space);
  const TestBattery battery = make_test_battery(space, sc.t0, sc.t1, sc.seed);

  Rng rng(sc.seed, 4);
  std::vector<double> phases(static_cast<std::size_t>(mu.size()));
  for (auto& p : phases) p = rng.uniform(0.0, 2.0 * M_PI);
  const AtomicMeasure rotated = rotate_atoms(mu, phases);
  std::vector<Atom> reversed(mu.atoms().rbegin(), mu.atoms().rend());
  for (auto& p : phases) p = rng.uniform(0.0, 2.0 * M_PI);
  const AtomicMeasure permuted = rotate_atoms(AtomicMeasure(std::move(reversed), mu.radius()), phases);

  // Equal first marginals, different second marginals.
  const StateVector e0 = space.basis_vector(0);
  const StateVector e1 = space.basis_vector(1);
  const AtomicMeasure split({{0.5, e0}, {0.5, e1}});
  const AtomicMeasure mixed({{0.5, (e0 + e1) / std::sqrt(2.0)}, {0.5, (e0 - e1) / std::sqrt(2.0)}});

  const auto run = [&](const AtomicMeasure& a, const AtomicMeasure& b) {
    return uniqueness_experiment(a, b, vf, sc.t0, sc.t1, sc.dt, sc.max_order, battery.vectors,
                                 sc.equality_tolerance);
  };
  const UniquenessReport r_rot = run(mu, rotated);
  const UniquenessReport r_perm = run(mu, permuted);
  const UniquenessReport r_col = run(split, mixed);
  const bool collision_rejected = !r_col.precondition_holds && r_col.discriminating_order == 2;

  ScenarioResult res;
  res.pass = r_rot.pass && r_perm.pass && collision_rejected;
  res.report = header(sc);
  res.report["pairs"] = {{"gauge_rotated", uniqueness_json(r_rot)},
                         {"permuted", uniqueness_json(r_perm)},
                         {"collision", uniqueness_json(r_col)}};
  res.report["collision_rejected"] = collision_rejected;
  res.report["tolerance"] = sc.equality_tolerance;
  res.report["verdict"] = res.pass ? "PASS" : "FAIL";

  CsvTable t{"uniqueness",
             {"pair", "precondition_holds", "discriminating_order", "initial_defect",
              "discriminating_moment", "max_defect", "pass"},
             {}};
  const std::pair<const char*, const UniquenessReport*> rows[] = {
      {"gauge_rotated", &r_rot}, {"permuted", &r_perm}, {"collision", &r_col}};
  for (const auto& [name, r] : rows)
    t.add_row({name, b2s(r->precondition_holds), std::to_string(r->discriminating_order),
               n2s(r->initial_defect), n2s(r->discriminating_moment), n2s(r->max_defect),
               b2s(r->pass)});
  res.tables = {t};
  return res;
}

ScenarioResult run_existence(const Scenario& sc) {
  const ModelSpace space = scenario_space(sc);
  const Nonlinearity g = scenario_nonlinearity(sc);
  const VectorField vf = VectorField::interaction_picture(space, g);
  const AtomicMeasure mu = scenario_measure(sc, space);

  const Transport tr = liouville_from_flow(mu, vf, sc.t0, sc.t1, sc.dt);
  const HierarchyTrajectory h =
      lift_trajectory(tr.trajectory.times, tr.trajectory.measures, sc.max_order, mu.radius());

  bool nonnegative = true;
  for (int lag = 0; lag <= 2 * space.max_abs_label(); ++lag)
    nonnegative = nonnegative && g.potential(space).at(lag) >= 0.0;
  const bool energy_bound = nonnegative && sc.s == 1.0;
  double radius = 0.0;
  for (const auto& a : mu.atoms()) {
    const StateVector physical = space.propagate(a.point, sc.t0);
    radius = std::max(radius, energy_bound ? energy_radius(space, g, physical)
                                           : space.scale_norm(a.point, sc.s));
  }
  const A1Report a1 = a1_check(h, space, sc.s, radius);

  std::vector<ResidualCurve> curves;
  double worst = 0.0;
  for (int k = 1; k <= sc.max_order; ++k) {
    curves.push_back(hierarchy_residual(h, space, vf, k));
    worst = std::max(worst, curves.back().max);
  }

  ScenarioResult res;
  res.pass = a1.holds && a1.atoms_hold && a1.consistent && worst <= sc.residual_tolerance;
  res.report = header(sc);
  res.report["a1"] = {{"radius", radius},
                      {"radius_source", energy_bound ? "mass_plus_energy" : "initial_norm"},
                      {"holds", a1.holds},
                      {"worst_ratio", a1.worst_ratio},
                      {"atoms_hold", a1.atoms_hold},
                      {"worst_atom_ratio", a1.worst_atom_ratio},
                      {"consistent", a1.consistent}};
  res.report["residuals"] = {{"hierarchy", curve_maxima(curves)},
                             {"hierarchy_max", worst},
                             {"tolerance", sc.residual_tolerance}};
  res.report["verdict"] = res.pass ? "PASS" : "FAIL";

  CsvTable t{"existence", {"t", "max_atom_scale_norm"}, {}};
  for (int k = 1; k <= sc.max_order; ++k) t.header.push_back("residual_k" + std::to_string(k));
  for (std::size_t i = 0; i < tr.trajectory.times.size(); ++i) {
    double norm = 0.0;
    for (const auto& a : tr.trajectory.measures[i].atoms())
      norm = std::max(norm, space.scale_norm(a.point, sc.s));
    std::vector<std::string> row{n2s(tr.trajectory.times[i]), n2s(norm)};
    for (const auto& c : curves) row.push_back(n2s(c.values[i]));
    t.add_row(std::move(row));
  }
  res.tables = {t};
  return res;
}

ScenarioResult run_chaos(const Scenario& sc, bool timings) {
  const ModelSpace space = scenario_space(sc);
  StateVector phi0(space.dim());
  for (int i = 0; i < space.dim(); ++i)
    phi0(i) = Complex(sc.initial_re[static_cast<std::size_t>(i)], sc.initial_im[static_cast<std::size_t>(i)]);
  phi0 /= phi0.norm();
  const PairPotential w(sc.potential);

  const auto rows = chaos_experiment(space, phi0, w, sc.particles, sc.marginal_order, sc.t1,
                                     sc.hartree_dt, sc.capacity);
  const auto control = chaos_experiment(space, phi0, PairPotential(), sc.particles,
                                        sc.marginal_order, sc.t1, sc.hartree_dt, sc.capacity);
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].epsilon > 1.1 * rows[i - 1].epsilon) monotone = false;
  double control_max = 0.0;
  for (const auto& r : control) control_max = std::max(control_max, r.epsilon);
  const bool control_zero = control_max <= sc.equality_tolerance;

  ScenarioResult res;
  res.pass = monotone && control_zero;
  res.report = header(sc);
  json table = json::array();
  for (const auto& r : rows) table.push_back({{"n", r.n}, {"k", r.k}, {"epsilon", r.epsilon}});
  res.report["chaos"] = table;
  res.report["nonincreasing"] = monotone;
  res.report["zero_potential_max"] = control_max;
  res.report["verdict"] = res.pass ? "PASS" : "FAIL";

  CsvTable t{"chaos", {"n", "k", "epsilon", "runtime_ms"}, {}};
  for (const auto& r : rows)
    t.add_row({std::to_string(r.n), std::to_string(r.k), n2s(r.epsilon),
               timings ? n2s(r.runtime_ms) : std::string("NA")});
  CsvTable c{"chaos_zero_potential", {"n", "k", "epsilon"}, {}};
  for (const auto& r : control) c.add_row({std::to_string(r.n), std::to_string(r.k), n2s(r.epsilon)});
  res.tables = {t, c};
  return res;
}

ScenarioResult run_counterexample(const Scenario& sc) {
  const Grid grid{sc.half_width, sc.spacing};
  const PhaseSelection sel = select_phase(0.1, Grid{10.0, 0.01}, 1e-3);
  std::vector<GridFunction> tests;
  for (double c : sc.test_centers) tests.push_back(gaussian(grid, c, sc.test_width));
  const NonuniquenessReport r = nonuniqueness_demo(sc.times, grid, tests, sel.selected);

  ScenarioResult res;
  res.pass = r.nonunique;
  res.report = header(sc);
  json phases = json::array();
  for (std::size_t i = 0; i < sel.candidates.size(); ++i)
    phases.push_back({{"phase", to_string(sel.candidates[i])},
                      {"residual_coarse", sel.coarse[i]},
                      {"residual_fine", sel.fine[i]}});
  res.report["phase_selection"] = {{"selected", to_string(sel.selected)}, {"candidates", phases}};
  res.report["mass_spread"] = r.mass_spread;
  res.report["final_ratio"] = r.final_ratio;
  res.report["monotone"] = r.monotone;
  res.report["outcome"] = r.nonunique ? "NONUNIQUE" : "INCONCLUSIVE";
  res.report["verdict"] = res.pass ? "PASS" : "FAIL";

  CsvTable t{"counterexample", {"t", "mass"}, {}};
  for (std::size_t j = 0; j < tests.size(); ++j) t.header.push_back("pairing_" + std::to_string(j + 1));
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    std::vector<std::string> row{n2s(r.times[i]), n2s(r.mass[i])};
    for (const auto& p : r.pairings) row.push_back(n2s(p[i]));
    t.add_row(std::move(row));
  }
  CsvTable p{"phase_selection", {"phase", "residual_coarse", "residual_fine"}, {}};
  for (std::size_t i = 0; i < sel.candidates.size(); ++i)
    p.add_row({to_string(sel.candidates[i]), n2s(sel.coarse[i]), n2s(sel.fine[i])});
  res.tables = {t, p};
  return res;
}

ScenarioResult run_definetti(const Scenario& sc) {
  const ModelSpace space = scenario_space(sc);
  const double tol = sc.equality_tolerance;
  std::vector<std::pair<std::string, std::pair<double, bool>>> checks;
  const auto record = [&](const std::string& name, double value, bool ok) {
    checks.push_back({name, {value, ok}});
  };

  const AtomicMeasure ball = scenario_measure(sc, space);
  const SphereReport sphere_ball = sphere_concentration_test(phi(ball, sc.max_order), tol);
  record("ball_measure_off_sphere", sphere_ball.traces.empty() ? 0.0 : sphere_ball.traces.front(),
         !sphere_ball.on_sphere && sphere_ball.consistent);

  std::vector<Atom> unit_atoms(ball.atoms().begin(), ball.atoms().end());
  for (auto& a : unit_atoms) a.point /= a.point.norm();
  const AtomicMeasure unit(std::move(unit_atoms));
  const SphereReport sphere_unit = sphere_concentration_test(phi(unit, sc.max_order), tol);
  record("unit_measure_on_sphere", sphere_unit.traces.front(),
         sphere_unit.on_sphere && sphere_unit.consistent);

  const CompatibilityReport compat = trace_compatibility_test(phi(unit, sc.max_order), tol);
  const double compat_max =
      compat.defects.empty() ? 0.0 : *std::max_element(compat.defects.begin(), compat.defects.end());
  record("trace_compatibility_defect", compat_max, compat.compatible);

  const double t = 0.3;
  const AtomicMeasure other = default_measure(space, 2, sc.seed + 1);
  const Hierarchy mixed = phi(mixture(ball, other, t), sc.max_order);
  const Hierarchy pa = phi(ball, sc.max_order);
  const Hierarchy pb = phi(other, sc.max_order);
  double convexity = 0.0;
  for (int k = 1; k <= sc.max_order; ++k)
    convexity = std::max(convexity, hermitian_trace_norm(mixed.level(k).matrix -
                                                         (t * pa.level(k).matrix + (1 - t) * pb.level(k).matrix)));
  record("convexity_defect", convexity, convexity <= tol);

  const Hierarchy two = phi(other, 2);
  const auto rebuilt = reconstruct_two_atoms(two, 1e-9);
  const double injectivity = rebuilt ? hierarchy_distance(phi(*rebuilt, sc.max_order), pb) : 1.0;
  record("injectivity_defect", injectivity, rebuilt.has_value() && injectivity <= tol);

  StateVector x = StateVector::Zero(space.dim());
  x(0) = sc.atom_norm;
  const auto rows = weak_star_lifting_demo(AtomicMeasure::dirac(x), 1, sc.lift_modes);
  const double gap = 1.0 - sc.atom_norm * sc.atom_norm;
  bool lifting_ok = !rows.empty();
  for (const auto& r : rows) {
    lifting_ok = lifting_ok && std::abs(r.trace_gap - gap) <= tol &&
                 std::abs(r.zero_mode_pairing - rows.front().zero_mode_pairing) <= tol &&
                 std::abs(r.zero_mode_trace_norm - rows.front().zero_mode_trace_norm) <= tol &&
                 r.trace_norm_distance > tol;
  }
  record("lifting_trace_gap", rows.empty() ? 0.0 : rows.front().trace_gap, lifting_ok);

  ScenarioResult res;
  res.pass = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second.second; });
  res.report = header(sc);
  json j = json::object();
  for (const auto& [name, v] : checks) j[name] = {{"value", v.first}, {"pass", v.second}};
  res.report["checks"] = j;
  res.report["expected_trace_gap"] = gap;
  res.report["verdict"] = res.pass ? "PASS" : "FAIL";

  CsvTable c{"structure", {"check", "value", "pass"}, {}};
  for (const auto& [name, v] : checks) c.add_row({name, n2s(v.first), b2s(v.second)});
  CsvTable l{"lifting",
             {"lift_mode", "zero_mode_pairing", "zero_mode_trace_norm", "trace_gap",
              "trace_norm_distance", "compressed_defect"},
             {}};
  for (const auto& r : rows)
    l.add_row({std::to_string(r.lift_mode), n2s(r.zero_mode_pairing), n2s(r.zero_mode_trace_norm),
               n2s(r.trace_gap), n2s(r.trace_norm_distance), n2s(r.compressed_defect)});
  res.tables = {c, l};
  return res;
}

ScenarioResult run_regimes(const Scenario& sc) {
  const RegimeReport r = classify_uniqueness_regime(sc.dimension, sc.regularity, sc.power);
  ScenarioResult res;
  res.pass = true;
  res.report = header(sc);
  json cases = json::array();
  CsvTable t{"regimes", {"case", "applicable", "covers", "inequality", "lhs", "rhs", "holds"}, {}};
  for (const auto& c : r.cases) {
    json checks = json::array();
    for (const auto& q : c.checks) {
      checks.push_back({{"inequality", q.text}, {"lhs", q.lhs}, {"rhs", q.rhs}, {"holds", q.holds}});
      t.add_row({c.name, b2s(c.applicable), b2s(c.covers), "\"" + q.text + "\"", n2s(q.lhs),
                 n2s(q.rhs), b2s(q.holds)});
    }
    cases.push_back({{"name", c.name}, {"applicable", c.applicable}, {"covers", c.covers}, {"checks", checks}});
  }
  res.report["d"] = r.d;
  res.report["s"] = r.s;
  res.report["alpha"] = r.alpha;
  res.report["covered"] = r.covered;
  res.report["regime"] = r.regime;
  res.report["binding"] = r.binding;
  res.report["cases"] = cases;
  res.report["verdict"] = "PASS";
  res.tables = {t};
  return res;
}

}  // namespace

std::string to_string(ScenarioKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<ScenarioKind> scenario_kind_from_string(const std::string& name) {
  for (int i = 0; i < 7; ++i)
    if (name == kKindNames[i]) return static_cast<ScenarioKind>(i);
  return std::nullopt;
}

Scenario scenario_from_config(ScenarioKind kind, const Config& cfg,
                              const std::filesystem::path& base_dir,
                              std::optional<std::uint64_t> seed_override) {
  cfg.reject_unknown(allowed_keys());
  Scenario sc;
  sc.kind = kind;
  if (kind == ScenarioKind::chaos) {
    sc.modes = 2;
    sc.nonlinearity = "hartree";
  }
  if (kind == ScenarioKind::counterexample) sc.t1 = 0.2;

  if (cfg.has("scenario.kind")) {
    const auto declared = scenario_kind_from_string(cfg.get_string("scenario.kind", ""));
    require(cfg, declared.has_value(), "scenario.kind", "unknown scenario kind");
    require(cfg, *declared == kind, "scenario.kind",
            "config declares '" + to_string(*declared) + "' but the command is '" + to_string(kind) + "'");
  }
  sc.name = cfg.get_string("scenario.name", to_string(kind));
  require(cfg, !sc.name.empty() && sc.name.find_first_of("/\\ ") == std::string::npos,
          "scenario.name", "name must be non-empty without slashes or spaces");
  sc.seed = seed_override ? *seed_override : cfg.get_u64("scenario.seed", sc.seed);

  sc.cutoff = cfg.get_int("model.cutoff", sc.cutoff);
  require(cfg, sc.cutoff >= 0 && sc.cutoff <= 64, "model.cutoff", "cutoff must lie in [0, 64]");
  sc.modes = cfg.get_int("model.modes", sc.modes);
  require(cfg, sc.modes >= 0 && sc.modes <= 129, "model.modes", "modes must lie in [0, 129]");
  sc.s = cfg.get_double("model.s", sc.s);
  require(cfg, std::isfinite(sc.s) && sc.s >= 0.0, "model.s", "s must be finite and nonnegative");
  sc.sigma = cfg.get_double("model.sigma", sc.sigma);
  require(cfg, std::isfinite(sc.sigma) && sc.sigma >= 0.0, "model.sigma",
          "sigma must be finite and nonnegative");

  sc.nonlinearity = cfg.get_string("dynamics.nonlinearity", sc.nonlinearity);
  require(cfg, sc.nonlinearity == "cubic" || sc.nonlinearity == "hartree" || sc.nonlinearity == "zero",
          "dynamics.nonlinearity", "expected cubic, hartree or zero");
  sc.coupling = cfg.get_double("dynamics.coupling", sc.coupling);
  require(cfg, std::isfinite(sc.coupling), "dynamics.coupling", "coupling must be finite");
  sc.potential = cfg.get_doubles("dynamics.potential", sc.potential);
  require(cfg, !sc.potential.empty() && std::all_of(sc.potential.begin(), sc.potential.end(),
                                                    [](double v) { return std::isfinite(v); }),
          "dynamics.potential", "potential must be a nonempty list of finite reals");

  sc.t0 = cfg.get_double("time.t0", sc.t0);
  sc.t1 = cfg.get_double("time.t1", sc.t1);
  require(cfg, std::isfinite(sc.t0), "time.t0", "t0 must be finite");
  require(cfg, std::isfinite(sc.t1) && sc.t1 > sc.t0, "time.t1", "t1 must exceed t0");
  sc.dt = cfg.get_double("time.dt", sc.dt);
  require(cfg, std::isfinite(sc.dt) && sc.dt > 0.0 && sc.dt <= sc.t1 - sc.t0, "time.dt",
          "dt must be positive and at most t1 - t0");

  if (cfg.has("measure.file")) {
    const std::filesystem::path file = cfg.get_string("measure.file", "");
    sc.measure_file = file.is_absolute() ? file : base_dir / file;
    require(cfg, std::filesystem::exists(sc.measure_file), "measure.file", "file not found");
  }
  sc.atoms = cfg.get_int("measure.atoms", sc.atoms);
  require(cfg, sc.atoms >= 1 && sc.atoms <= 64, "measure.atoms", "atoms must lie in [1, 64]");
  sc.max_order = cfg.get_int("hierarchy.max_order", sc.max_order);
  require(cfg, sc.max_order >= 1, "hierarchy.max_order", "max_order must be at least 1");

  sc.residual_tolerance = cfg.get_double("tolerance.residual", sc.residual_tolerance);
  require(cfg, sc.residual_tolerance > 0.0, "tolerance.residual", "tolerance must be positive");
  sc.equality_tolerance = cfg.get_double("tolerance.equality", sc.equality_tolerance);
  require(cfg, sc.equality_tolerance > 0.0, "tolerance.equality", "tolerance must be positive");
  sc.control_threshold = cfg.get_double("tolerance.control", sc.control_threshold);
  require(cfg, sc.control_threshold > 0.0, "tolerance.control", "threshold must be positive");

  sc.particles = cfg.get_ints("chaos.particles", sc.particles);
  require(cfg, !sc.particles.empty() && std::all_of(sc.particles.begin(), sc.particles.end(),
                                                    [](int n) { return n >= 1; }),
          "chaos.particles", "particle numbers must be positive");
  sc.marginal_order = cfg.get_int("chaos.order", sc.marginal_order);
  require(cfg, sc.marginal_order >= 1 &&
                   sc.marginal_order <= *std::min_element(sc.particles.begin(), sc.particles.end()),
          "chaos.order", "order must lie in [1, min particles]");
  sc.capacity = cfg.get_int("chaos.capacity", sc.capacity);
  require(cfg, sc.capacity >= 1, "chaos.capacity", "capacity must be positive");
  sc.hartree_dt = cfg.get_double("chaos.hartree_dt", sc.hartree_dt);
  require(cfg, sc.hartree_dt > 0.0, "chaos.hartree_dt", "step must be positive");
  const int dim = scenario_space(sc).dim();
  if (kind == ScenarioKind::chaos && !cfg.has("chaos.initial_re")) {
    sc.initial_re.resize(static_cast<std::size_t>(dim), 0.0);
  }
  sc.initial_re = cfg.get_doubles("chaos.initial_re", sc.initial_re);
  sc.initial_im = cfg.get_doubles("chaos.initial_im", std::vector<double>(sc.initial_re.size(), 0.0));
  if (kind == ScenarioKind::chaos) {
    require(cfg, static_cast<int>(sc.initial_re.size()) == dim, "chaos.initial_re",
            "need one entry per mode (" + std::to_string(dim) + ")");
    require(cfg, sc.initial_im.size() == sc.initial_re.size(), "chaos.initial_im",
            "need one entry per mode (" + std::to_string(dim) + ")");
    double norm = 0.0;
    for (std::size_t i = 0; i < sc.initial_re.size(); ++i)
      norm += sc.initial_re[i] * sc.initial_re[i] + sc.initial_im[i] * sc.initial_im[i];
    require(cfg, norm > 0.0, "chaos.initial_re", "initial state must be nonzero");
  }

  sc.half_width = cfg.get_double("counterexample.half_width", sc.half_width);
  require(cfg, sc.half_width > 0.0, "counterexample.half_width", "half width must be positive");
  sc.spacing = cfg.get_double("counterexample.spacing", sc.spacing);
  require(cfg, sc.spacing > 0.0 && sc.spacing < sc.half_width, "counterexample.spacing",
          "spacing must be positive and below the half width");
  sc.times = cfg.get_doubles("counterexample.times", sc.times);
  for (std::size_t i = 0; i < sc.times.size(); ++i)
    require(cfg, sc.times[i] > 0.0 && (i == 0 || sc.times[i] < sc.times[i - 1]),
            "counterexample.times", "times must be positive and decreasing");
  sc.test_centers = cfg.get_doubles("counterexample.centers", sc.test_centers);
  sc.test_width = cfg.get_double("counterexample.width", sc.test_width);
  require(cfg, sc.test_width > 0.0, "counterexample.width", "width must be positive");

  sc.dimension = cfg.get_int("regimes.d", sc.dimension);
  require(cfg, sc.dimension >= 1, "regimes.d", "dimension must be positive");
  sc.regularity = cfg.get_double("regimes.s", sc.regularity);
  require(cfg, std::isfinite(sc.regularity), "regimes.s", "s must be finite");
  sc.power = cfg.get_double("regimes.alpha", sc.power);
  require(cfg, std::isfinite(sc.power) && sc.power > 0.0, "regimes.alpha", "alpha must be positive");

  sc.atom_norm = cfg.get_double("definetti.atom_norm", sc.atom_norm);
  require(cfg, sc.atom_norm > 0.0 && sc.atom_norm < 1.0, "definetti.atom_norm",
          "atom norm must lie in (0, 1)");
  sc.lift_modes = cfg.get_ints("definetti.lift_modes", sc.lift_modes);
  if (kind == ScenarioKind::definetti || cfg.has("definetti.lift_modes"))
    for (int n : sc.lift_modes)
      require(cfg, n >= 1 && n < dim, "definetti.lift_modes",
              "lift modes must lie in [1, " + std::to_string(dim - 1) + "]");

  sc.content_hash = sha256_hex(cfg.text() + "\n#kind=" + to_string(kind) + "\n#seed=" + std::to_string(sc.seed));
  return sc;
}

ModelSpace scenario_space(const Scenario& sc) {
  return sc.modes > 0 ? ModelSpace::with_modes(sc.modes, sc.s, sc.sigma)
                      : ModelSpace::with_cutoff(sc.cutoff, sc.s, sc.sigma);
}

AtomicMeasure default_measure(const ModelSpace& space, int atoms, std::uint64_t seed) {
  if (atoms < 1) throw ContractViolation("need at least one atom");
  Rng rng(seed, 3);
  std::vector<Atom> out;
  double total = 0.0;
  for (int i = 0; i < atoms; ++i) {
    StateVector x(space.dim());
    for (int k = 0; k < space.dim(); ++k) x(k) = rng.complex_normal() / space.weights()(k);
    x *= rng.uniform(0.5, 0.9) / x.norm();
    const double w = rng.uniform(0.5, 1.5);
    total += w;
    out.push_back(Atom{w, std::move(x)});
  }
  for (auto& a : out) a.weight /= total;
  return AtomicMeasure(std::move(out));
}

ScenarioResult run_scenario(const Scenario& sc, bool timings) {
  switch (sc.kind) {
    case ScenarioKind::duality: return run_duality(sc);
    case ScenarioKind::uniqueness: return run_uniqueness(sc);
    case ScenarioKind::existence: return run_existence(sc);
    case ScenarioKind::chaos: return run_chaos(sc, timings);
    case ScenarioKind::counterexample: return run_counterexample(sc);
    case ScenarioKind::definetti: return run_definetti(sc);
    case ScenarioKind::regimes: return run_regimes(sc);
  }
  throw ContractViolation("unknown scenario kind");
}

std::filesystem::path write_result(const Scenario& sc, const ScenarioResult& result,
                                   const std::filesystem::path& out_root) {
  const std::filesystem::path dir = out_root / (sc.name + "-" + sc.content_hash.substr(0, 12));
  std::filesystem::create_directories(dir);
  for (const auto& t : result.tables) write_file_atomic(dir / (t.name + ".csv"), t.render());
  write_file_atomic(dir / "report.json", result.report.dump(2) + "\n");
  return dir;
}

}  // namespace hierlab
