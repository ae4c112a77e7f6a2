// Command-line front end: one subcommand per experiment mode.
//
//   phaserec <forward|recover|convergence|resolvent_reduction> --config FILE --out DIR [--quiet]
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "phaserec/error.hpp"
#include "phaserec/experiment.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

int run(const std::string& subcommand, const std::string& config_path, const std::string& out_dir,
        bool quiet) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "[experiments_cli] cannot read config '" << config_path << "'\n";
    return kExitValidation;
  }
  std::stringstream text;
  text << in.rdbuf();

  auto raw = nlohmann::json::parse(text.str(), nullptr, false);
  if (raw.is_discarded()) {
    std::cerr << "[experiments_cli] config '" << config_path << "' is not valid JSON\n";
    return kExitValidation;
  }
  if (!raw.is_object()) {
    std::cerr << "[experiments_cli] config must be a JSON object\n";
    return kExitValidation;
  }
  if (!raw.contains("mode")) raw["mode"] = subcommand;
  if (raw["mode"] != subcommand) {
    std::cerr << "[experiments_cli] config key 'mode': '" << raw["mode"].dump()
              << "' does not match subcommand '" << subcommand << "'\n";
    return kExitValidation;
  }

  const auto config = phaserec::validate_config(raw);
  if (!quiet) {
    for (const auto& warning : config.warnings) std::cerr << "warning: " << warning << '\n';
  }
  const std::string target = out_dir.empty() ? config.output_dir : out_dir;
  if (target.empty()) {
    std::cerr << "[experiments_cli] no output directory: pass --out or set output_dir\n";
    return kExitValidation;
  }
  const auto report = phaserec::run_experiment(config, target);
  if (!quiet) {
    std::cout << "mode " << subcommand << ": f_direct = " << report.f_direct.real() << " + "
              << report.f_direct.imag() << "i";
    if (report.slope) std::cout << ", fitted slope = " << *report.slope;
    std::cout << ", wall time " << report.wall_time_seconds << " s\n"
              << "outputs written to " << target << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-energy scattering workbench: forward solves, phaseless data and phase recovery"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool quiet = false;
  for (const char* name : {"forward", "recover", "convergence", "resolvent_reduction"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_flag("--quiet", quiet, "suppress progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  try {
    return run(subcommand, config_path, out_dir, quiet);
  } catch (const phaserec::Error& e) {
    std::cerr << '[' << e.module() << "] " << e.what() << '\n';
    return e.numerical() ? kExitNumerical : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "[experiments_cli] " << e.what() << '\n';
    return kExitNumerical;
  }
}
