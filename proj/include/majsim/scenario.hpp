#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "majsim/params.hpp"
#include "majsim/spinor.hpp"
#include "majsim/wavepacket.hpp"

namespace majsim::cli {

inline constexpr const char* kToolName = "simulate";
inline constexpr const char* kToolVersion = "0.1.0";

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "SIMULATE_OUTPUT_DIR";

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSelfCheck = 3;

/// Invalid or incomplete scenario. `where` is a dotted field path
/// ("params.mass") or "line L, column C" for syntax errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error("config error at " + where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum class Mode { kRest, kMomentum, kWavepacket, kIon };

/// Evolution routes a scenario can name. Not every route exists in every mode.
enum class Route { kMajorana, kDirac, kUltra, kMajoranaViaDirac, kDoubled };

std::string to_string(Mode mode);
std::string to_string(Route route);

struct LabeledState {
  std::string label;
  Spinor2 spinor;
  /// Amplitude at -p for momentum scenarios; defaults to `spinor`.
  std::optional<Spinor2> partner;
};

struct MomentumGrid {
  /// Absolute momenta, already converted from p/(mc) when given that way.
  std::vector<double> p;
  bool check_ultra_monotone = false;
};

struct PacketConfig {
  GaussianSpec gaussian;
  std::size_t grid_size = 512;
  double box_length = 200.0;
  std::vector<double> snapshots;
};

struct Scenario {
  std::string name;
  Mode mode = Mode::kRest;
  /// Routes written by `run`, in column order.
  std::vector<Route> routes;
  PhysParams params;
  std::vector<LabeledState> initial;
  std::vector<double> times;
  std::filesystem::path output_dir;
  std::string prefix;
  std::uint64_t seed = 0;
  std::optional<MomentumGrid> momentum;
  std::optional<PacketConfig> packet;
  std::uint64_t shots = 0;
  Route compare_a = Route::kMajorana;
  Route compare_b = Route::kDirac;
  /// The configuration as parsed, echoed into run metadata.
  nlohmann::json source;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  double tolerance = kDefaultTolerance;
};

/// Parses and validates a scenario document. Throws ConfigError.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

/// The four-curve <sigma_z> scenario: states (1,0) and (1,i)/sqrt 2, both
/// equations, 501 samples over one rest period, m = omega and hbar = c = 1.
Scenario fig1_scenario(double omega);

struct RunResult {
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> notes;
};

/// Evolves the scenario and writes its CSV/JSON outputs plus
/// `<prefix>.meta.json`. Throws SelfCheckError when an internal cross-check
/// exceeds options.tolerance.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options);

struct CompareReport {
  Route a;
  Route b;
  double max_deviation = 0.0;
  double mean_deviation = 0.0;
  double argmax_t = 0.0;
  /// Largest sum over components of |A - B|.
  double max_sum_deviation = 0.0;
  std::size_t samples = 0;
  RunResult files;
};

/// Componentwise max |A - B| (and the sum over components) at every sample
/// of the scenario grid. Writes
/// `<prefix>_compare.csv`, `<prefix>_compare.json` and metadata.
CompareReport compare_scenario(const Scenario& scenario, const RunOptions& options);

}  // namespace majsim::cli
