#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hierlab/config.hpp"
#include "hierlab/errors.hpp"
#include "hierlab/report.hpp"
#include "hierlab/scenarios.hpp"

namespace fs = std::filesystem;
using namespace hierlab;

namespace {

enum Exit { kPass = 0, kFail = 1, kInputError = 2, kCapacity = 3 };

struct RunOptions {
  std::vector<std::string> configs;
  std::string out = "out";
  bool out_given = false;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
  bool json = false;
  bool timings = false;
  int d = 1;
  double s = 1.0;
  double alpha = 2.0;
};

std::string output_root(const RunOptions& opt, bool& explicit_out) {
  if (const char* env = std::getenv("HIERLAB_OUT"); env && *env) {
    explicit_out = true;
    return env;
  }
  explicit_out = opt.out_given;
  return opt.out;
}

struct Outcome {
  int code = kPass;
  std::string message;
};

Outcome run_one(ScenarioKind kind, const std::string& config_path, const RunOptions& opt,
                const std::string& out_root, bool write, std::mutex& io) {
  Outcome o;
  try {
    const Config cfg = config_path.empty() ? Config::parse("") : Config::load(config_path);
    const fs::path base = config_path.empty() ? fs::current_path() : fs::path(config_path).parent_path();
    Scenario sc = scenario_from_config(kind, cfg, base, opt.seed);
    if (kind == ScenarioKind::regimes && config_path.empty()) {
      sc.dimension = opt.d;
      sc.regularity = opt.s;
      sc.power = opt.alpha;
    }
    const ScenarioResult res = run_scenario(sc, opt.timings);
    std::string where;
    if (write) where = write_result(sc, res, out_root).string();
    std::lock_guard lock(io);
    if (opt.json) {
      std::cout << res.report.dump(2) << "\n";
    } else if (kind == ScenarioKind::regimes) {
      const auto& r = res.report;
      std::cout << "d=" << r["d"] << " s=" << r["s"] << " alpha=" << r["alpha"] << ": "
                << (r["covered"].get<bool>() ? "covered" : "uncovered") << " by "
                << r["regime"].get<std::string>() << "\n  binding: " << r["binding"].get<std::string>()
                << "\n";
    } else {
      std::cout << sc.name << ": " << res.report["verdict"].get<std::string>();
      if (!where.empty()) std::cout << " -> " << where;
      std::cout << "\n";
    }
    o.code = res.pass ? kPass : kFail;
  } catch (const ConfigError& e) {
    o.code = kInputError;
    o.message = e.line() > 0 ? config_path + ":" + std::to_string(e.line()) + ":" +
                                   std::to_string(e.column()) + ": " + e.what()
                             : std::string("config error: ") + e.what();
  } catch (const CapacityError& e) {
    o.code = kCapacity;
    o.message = std::string("capacity exceeded: ") + e.what();
  } catch (const std::exception& e) {
    o.code = kInputError;
    o.message = std::string("error: ") + e.what();
  }
  if (!o.message.empty()) {
    std::lock_guard lock(io);
    std::cerr << o.message << "\n";
  }
  return o;
}

int run_kind(ScenarioKind kind, const RunOptions& opt) {
  bool explicit_out = false;
  const std::string root = output_root(opt, explicit_out);
  const bool write = kind != ScenarioKind::regimes || explicit_out;
  std::vector<std::string> configs = opt.configs;
  if (configs.empty()) configs.push_back("");

  std::vector<Outcome> outcomes(configs.size());
  std::atomic<std::size_t> next{0};
  std::mutex io;
  const auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++)
      outcomes[i] = run_one(kind, configs[i], opt, root, write, io);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(configs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kPass;
  for (const auto& o : outcomes) code = std::max(code, o.code);
  return code;
}

int run_report(const std::vector<std::string>& inputs, const std::string& out) {
  try {
    std::vector<nlohmann::json> reports;
    for (const auto& p : inputs) reports.push_back(load_report(p));
    const nlohmann::json merged = report_merge(reports, inputs);
    const std::string text = merged.dump(2) + "\n";
    if (out.empty())
      std::cout << text;
    else
      write_file_atomic(out, text);
    return kPass;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchy / Liouville duality laboratory"};
  app.require_subcommand(1);
  RunOptions opt;
  std::optional<ScenarioKind> chosen;

  const std::pair<ScenarioKind, const char*> kinds[] = {
      {ScenarioKind::duality, "Hierarchy and characteristic residuals of a transported measure"},
      {ScenarioKind::uniqueness, "Equal initial hierarchies give equal trajectories"},
      {ScenarioKind::existence, "Pushforward construction, A1 bound and residuals"},
      {ScenarioKind::chaos, "Many-body marginals against the Hartree product"},
      {ScenarioKind::counterexample, "Explicit concentrating solution with vanishing weak limit"},
      {ScenarioKind::definetti, "Structure checks for measure hierarchies"},
      {ScenarioKind::regimes, "Classify (d, s, alpha) against the uniqueness regimes"}};
  for (const auto& [kind, help] : kinds) {
    CLI::App* sub = app.add_subcommand(to_string(kind), help);
    sub->add_option("--config", opt.configs, "Scenario config file (repeatable)")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory (HIERLAB_OUT overrides)")
        ->each([&opt](const std::string&) { opt.out_given = true; });
    sub->add_option("--jobs", opt.jobs, "Scenarios run in parallel")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "Override the scenario seed");
    sub->add_flag("--json", opt.json, "Print the JSON report");
    sub->add_flag("--timings", opt.timings, "Record wall-clock timings in CSV output");
    if (kind == ScenarioKind::regimes) {
      sub->add_option("--d", opt.d, "Spatial dimension")->check(CLI::PositiveNumber);
      sub->add_option("--s", opt.s, "Sobolev regularity");
      sub->add_option("--alpha", opt.alpha, "Nonlinearity power")->check(CLI::PositiveNumber);
    }
    sub->callback([&chosen, kind = kind] { chosen = kind; });
  }

  std::vector<std::string> inputs;
  std::string merged_out;
  CLI::App* report = app.add_subcommand("report", "Merge JSON reports with provenance");
  report->add_option("inputs", inputs, "Report files")->required()->check(CLI::ExistingFile);
  report->add_option("--out", merged_out, "Write the merged JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kInputError;
  }
  if (report->parsed()) return run_report(inputs, merged_out);
  return run_kind(*chosen, opt);
}
