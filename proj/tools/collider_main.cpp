// collider command line: run, export, validate

#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "collider/harness.hpp"

namespace {

using nlohmann::json;
using namespace collider;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;

struct Loaded {
  std::string path;
  json config;
  std::vector<std::string> errors;
};

Loaded load(const std::string& path, std::optional<std::uint64_t> seed, std::optional<double> tol_scale) {
  Loaded out{path, json(), {}};
  std::ifstream in(path);
  if (!in) {
    out.errors.push_back("file: cannot open " + path);
    return out;
  }
  try {
    out.config = json::parse(in);
  } catch (const json::parse_error& e) {
    out.errors.push_back(std::string("file: invalid JSON: ") + e.what());
    return out;
  }
  if (out.config.is_object()) {
    if (seed) out.config["seed"] = *seed;
    if (tol_scale) out.config["tol_scale"] = *tol_scale;
  }
  out.errors = validate_config(out.config);
  return out;
}

void print_errors(const Loaded& l) {
  std::cerr << l.path << ": invalid config\n";
  for (const auto& e : l.errors) std::cerr << "  " << e << '\n';
}

struct Outcome {
  std::string path;
  std::string dir;
  std::optional<ResultBundle> bundle;
  std::string error;
};

Outcome execute(const Loaded& l, const std::string& out_root) {
  Outcome o{l.path, {}, std::nullopt, {}};
  try {
    const ExperimentConfig config = parse_config(l.config);
    const std::filesystem::path root = out_root.empty() ? (config.output_dir.empty() ? "results" : config.output_dir)
                                                        : out_root;
    ResultBundle bundle = run(config);
    o.dir = (root / config.name).string();
    write_bundle(bundle, o.dir);
    o.bundle = std::move(bundle);
  } catch (const std::exception& e) {
    o.error = e.what();
  }
  return o;
}

int cmd_run(const std::vector<std::string>& files, const std::string& out, std::optional<std::uint64_t> seed,
            std::optional<double> tol_scale) {
  std::vector<Loaded> loaded;
  bool invalid = false;
  for (const auto& f : files) {
    loaded.push_back(load(f, seed, tol_scale));
    if (!loaded.back().errors.empty()) {
      print_errors(loaded.back());
      invalid = true;
    }
  }
  if (invalid) return kExitInvalid;

  std::vector<std::future<Outcome>> jobs;
  for (const auto& l : loaded) jobs.push_back(std::async(std::launch::async, execute, std::cref(l), out));

  int code = kExitPass;
  for (auto& job : jobs) {
    const Outcome o = job.get();
    if (!o.bundle) {
      std::cerr << o.path << ": error: " << o.error << '\n';
      code = kExitFail;
      continue;
    }
    std::cout << o.path << " -> " << o.dir << '\n';
    for (const Verdict& v : o.bundle->verdicts) {
      std::cout << "  " << (v.pass ? "PASS " : "FAIL ") << v.check << "  value=" << format_double(v.value)
                << "  threshold=" << format_double(v.threshold) << '\n';
    }
    for (const auto& w : o.bundle->warnings) std::cout << "  warning: " << w << '\n';
    if (!o.bundle->passed()) code = kExitFail;
  }
  return code;
}

int cmd_export(const std::string& file, double dt) {
  const Loaded l = load(file, std::nullopt, std::nullopt);
  if (!l.errors.empty()) {
    print_errors(l);
    return kExitInvalid;
  }
  const ExperimentConfig config = parse_config(l.config);
  if (!config.model.is_object()) {
    std::cerr << file << ": export needs a config with a model\n";
    return kExitInvalid;
  }
  try {
    std::cout << export_schedule(build_model(config).schedule, dt).dump(2) << '\n';
  } catch (const std::invalid_argument& e) {
    std::cerr << file << ": " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitPass;
}

int cmd_validate(const std::string& file) {
  const Loaded l = load(file, std::nullopt, std::nullopt);
  if (!l.errors.empty()) {
    print_errors(l);
    return kExitInvalid;
  }
  std::cout << file << ": ok\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collision-model simulator and generator extraction"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::vector<std::string> run_files;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_scale;
  auto* run_cmd = app.add_subcommand("run", "Run one or more experiment configs (concurrently)");
  run_cmd->add_option("config", run_files, "Config files")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "Output root; each config writes to <root>/<name>");
  run_cmd->add_option("--seed", seed, "Seed for random experiments");
  run_cmd->add_option("--tol-scale", tol_scale, "Multiply every tolerance")->check(CLI::PositiveNumber);

  std::string export_file;
  double dt = 0.0;
  auto* export_cmd = app.add_subcommand("export", "Print the gate list of one timestep");
  export_cmd->add_option("config", export_file, "Config file")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--dt", dt, "Timestep")->required()->check(CLI::PositiveNumber);

  std::string validate_file;
  auto* validate_cmd = app.add_subcommand("validate", "Check a config without running it");
  validate_cmd->add_option("config", validate_file, "Config file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  try {
    if (*run_cmd) return cmd_run(run_files, out_dir, seed, tol_scale);
    if (*export_cmd) return cmd_export(export_file, dt);
    if (*validate_cmd) return cmd_validate(validate_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitInvalid;
}
