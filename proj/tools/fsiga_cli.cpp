// Command-line driver: run a config, run a sweep config, or list presets.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fsiga/experiment.hpp"

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::string out_dir;
  double tol = 0;
  int threads = 1;
};

std::string first_comment(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(';', 0) == 0 || line.rfind('#', 0) == 0) {
      const auto b = line.find_first_not_of(";# ");
      return b == std::string::npos ? "" : line.substr(b);
    }
  }
  return "";
}

fs::path preset_dir() {
  if (const char* env = std::getenv("FSIGA_PRESET_DIR")) return env;
  return FSIGA_PRESET_DIR;
}

// Bare preset names resolve against the preset directory.
fs::path resolve_config(const std::string& arg) {
  fs::path p(arg);
  if (fs::exists(p)) return p;
  for (const fs::path cand : {preset_dir() / arg, preset_dir() / (arg + ".ini")}) {
    if (fs::exists(cand)) return cand;
  }
  return p;
}

int execute(const Flags& f, bool sweep) {
  fsiga::ExperimentConfig c = fsiga::load_config(resolve_config(f.config).string());
  const bool is_sweep = c.kind != fsiga::ExperimentKind::SingleRun;
  if (sweep && !is_sweep) {
    throw fsiga::ConfigError("experiment.kind", "'sweep' needs a sweep kind; use 'run'");
  }
  if (!sweep && is_sweep) {
    throw fsiga::ConfigError("experiment.kind",
                             "'" + to_string(c.kind) + "' is a sweep; use 'sweep'");
  }
  if (f.tol > 0) c.tolerance = f.tol;
  c.validate();
  fsiga::RunOptions opts;
  opts.out_dir = f.out_dir.empty() ? fs::path("out") / c.name : fs::path(f.out_dir);
  opts.threads = f.threads;
  const auto result = fsiga::run_experiment(c, opts);
  for (const auto& file : result.files) std::cout << (opts.out_dir / file).string() << "\n";
  return 0;
}

int list_presets() {
  std::vector<fs::path> files;
  if (fs::is_directory(preset_dir())) {
    for (const auto& e : fs::directory_iterator(preset_dir())) {
      if (e.path().extension() == ".ini") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    std::cout << p.stem().string() << "\t" << first_comment(p) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear free-surface wave solver"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", flags.config, "config file or preset name")->required();
    sub->add_option("--out-dir", flags.out_dir, "output directory (default out/<name>)");
    sub->add_option("--tol", flags.tol, "linear solver tolerance override")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", flags.threads, "worker threads for sweep points")
        ->check(CLI::PositiveNumber);
  };
  auto* run = app.add_subcommand("run", "run a single-run config");
  add_common(run);
  auto* sweep = app.add_subcommand("sweep", "run a sweep config");
  add_common(sweep);
  auto* presets = app.add_subcommand("presets", "preset configs");
  presets->require_subcommand(1);
  auto* list = presets->add_subcommand("list", "list bundled presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return execute(flags, false);
    if (*sweep) return execute(flags, true);
    if (*list) return list_presets();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
