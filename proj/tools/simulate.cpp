// simulate: command-line front end for the majsim scenarios.
#include <cstdio>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"
#include "majsim/scenario.hpp"

namespace {

using namespace majsim;
using namespace majsim::cli;

void print_result(const RunResult& result) {
  for (const auto& path : result.outputs) std::cout << "wrote " << path.string() << '\n';
  for (const auto& note : result.notes) std::cout << "note: " << note << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Majorana and Dirac 1+1D evolution scenarios"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();

  RunOptions options;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override the scenario RNG seed");
  app.add_option("--tolerance", options.tolerance, "Self-check tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string run_path;
  auto* run = app.add_subcommand("run", "Evolve a scenario and write its outputs");
  run->add_option("config", run_path, "Scenario JSON file")->required();

  std::string compare_path;
  auto* compare = app.add_subcommand("compare", "Max-abs deviation between two evolution routes");
  compare->add_option("config", compare_path, "Scenario JSON file")->required();

  double omega = 1.0;
  std::string out_file;
  auto* fig1 = app.add_subcommand("fig1", "<sigma_z>(t) for (1,0) and (1,i)/sqrt2 under both equations");
  fig1->add_option("--omega", omega, "Rest frequency m c^2 / hbar")->capture_default_str();
  fig1->add_option("--out", out_file, "Output CSV path (default fig1.csv in the output directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (*seed_opt) options.seed = seed;

  try {
    if (*run) {
      print_result(run_scenario(load_scenario(run_path), options));
    } else if (*compare) {
      const CompareReport report = compare_scenario(load_scenario(compare_path), options);
      print_result(report.files);
      std::printf("%s vs %s: max deviation %.6e at t = %.6g, mean %.6e, max component sum %.6e over %zu samples\n",
                  to_string(report.a).c_str(), to_string(report.b).c_str(), report.max_deviation, report.argmax_t,
                  report.mean_deviation, report.max_sum_deviation, report.samples);
    } else if (*fig1) {
      Scenario s = fig1_scenario(omega);
      if (!out_file.empty()) {
        const std::filesystem::path out(out_file);
        if (out.extension() != ".csv") throw ConfigError("--out", "expected a .csv path");
        s.output_dir = out.has_parent_path() ? out.parent_path() : std::filesystem::path(".");
        s.prefix = out.stem().string();
      }
      print_result(run_scenario(s, options));
    }
  } catch (const ConfigError& e) {
    std::cerr << kToolName << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const SelfCheckError& e) {
    std::cerr << kToolName << ": " << e.what() << '\n';
    return kExitSelfCheck;
  } catch (const std::exception& e) {
    std::cerr << kToolName << ": " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}
