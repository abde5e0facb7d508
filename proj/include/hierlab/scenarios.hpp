#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hierlab/config.hpp"
#include "hierlab/measures.hpp"
#include "hierlab/report.hpp"
#include "hierlab/space.hpp"
#include "json.hpp"

namespace hierlab {

enum class ScenarioKind { duality, uniqueness, existence, chaos, counterexample, definetti, regimes };

std::string to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_kind_from_string(const std::string& name);

struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::duality;
  std::uint64_t seed = 0xA11CE;

  int cutoff = 2;
  int modes = 0;  // when positive, overrides cutoff with the first `modes` labels
  double s = 1.0;
  double sigma = 1.0;

  std::string nonlinearity = "cubic";  // cubic | hartree | zero
  double coupling = 1.0;
  std::vector<double> potential{1.0, 1.0};  // by |lag|, hartree only

  double t0 = 0.0;
  double t1 = 1.0;
  double dt = 1e-3;

  std::filesystem::path measure_file;
  int atoms = 3;
  int max_order = 3;

  double residual_tolerance = 1e-6;
  double equality_tolerance = 1e-10;
  double control_threshold = 1e-2;

  std::vector<int> particles{2, 3, 4, 5, 6};
  int marginal_order = 1;
  int capacity = 500;
  double hartree_dt = 1e-4;
  std::vector<double> initial_re{0.8, 0.6};
  std::vector<double> initial_im{0.0, 0.0};

  double half_width = 20.0;
  double spacing = 2.5e-5;
  std::vector<double> times{0.2, 0.1, 0.05, 0.025, 0.01, 0.005, 0.0025, 0.001, 5e-4, 2.5e-4};
  std::vector<double> test_centers{0.0, 0.5, -1.0};
  double test_width = 1.0;

  int dimension = 1;
  double regularity = 1.0;
  double power = 2.0;

  double atom_norm = 0.6;
  std::vector<int> lift_modes{2, 3, 4};

  // Hash of the config text and effective seed, used to name the output directory.
  std::string content_hash;
};

// Defaults for the given kind, overridden by the config. Every key is validated;
// unknown keys and out-of-range values raise ConfigError with the offending position.
Scenario scenario_from_config(ScenarioKind kind, const Config& config,
                              const std::filesystem::path& base_dir,
                              std::optional<std::uint64_t> seed_override = std::nullopt);

ModelSpace scenario_space(const Scenario& sc);

// Seeded atoms with coefficients proportional to 1/a_k and norms in [0.5, 0.9].
AtomicMeasure default_measure(const ModelSpace& space, int atoms, std::uint64_t seed);

struct ScenarioResult {
  nlohmann::json report;
  std::vector<CsvTable> tables;
  bool pass = false;
};

ScenarioResult run_scenario(const Scenario& sc, bool timings = false);

// Writes report.json and every table into out_root/<name>-<hash12>; returns that directory.
std::filesystem::path write_result(const Scenario& sc, const ScenarioResult& result,
                                   const std::filesystem::path& out_root);

}  // namespace hierlab
