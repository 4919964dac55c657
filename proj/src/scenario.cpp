#include "majsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <locale>
#include <numbers>
#include <set>
#include <sstream>

#include "majsim/ion_embedding.hpp"
#include "majsim/momentum_dynamics.hpp"
#include "majsim/rest_dynamics.hpp"

namespace majsim::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Config field access

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

const json* find(const json& obj, std::string_view key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, std::string_view key, const std::string& path) {
  if (const json* v = find(obj, key)) return *v;
  throw ConfigError(join(path, key), "missing required field");
}

void require_object(const json& v, const std::string& where) {
  if (!v.is_object()) throw ConfigError(where.empty() ? "<root>" : where, "expected an object");
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(join(path, key), "unknown field");
    }
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where, "must be finite");
  return d;
}

double number_or(const json& obj, std::string_view key, const std::string& path, double fallback) {
  const json* v = find(obj, key);
  return v ? number(*v, join(path, key)) : fallback;
}

std::uint64_t unsigned_number(const json& v, const std::string& where) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(where, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string string_value(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where, "expected a string");
  return v.get<std::string>();
}

bool bool_or(const json& obj, std::string_view key, const std::string& path, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return v->get<bool>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// Four reals: re/im of the upper then the lower component.
Spinor2 spinor_value(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 4) {
    throw ConfigError(where, "expected [re_upper, im_upper, re_lower, im_lower]");
  }
  double r[4];
  for (int k = 0; k < 4; ++k) r[k] = number(v[k], where + "[" + std::to_string(k) + "]");
  return {cplx{r[0], r[1]}, cplx{r[2], r[3]}};
}

Route route_from_string(const std::string& s, const std::string& where) {
  if (s == "majorana") return Route::kMajorana;
  if (s == "dirac") return Route::kDirac;
  if (s == "ultra") return Route::kUltra;
  if (s == "majorana_via_dirac") return Route::kMajoranaViaDirac;
  if (s == "doubled") return Route::kDoubled;
  throw ConfigError(where, "unknown equation '" + s + "'");
}

bool route_available(Mode mode, Route route) {
  switch (mode) {
    case Mode::kRest:
      return route != Route::kUltra;
    case Mode::kMomentum:
    case Mode::kWavepacket:
      return route == Route::kMajorana || route == Route::kDirac || route == Route::kUltra;
    case Mode::kIon:
      return route == Route::kMajorana || route == Route::kDoubled;
  }
  return false;
}

bool valid_label(const std::string& label) {
  return !label.empty() && std::all_of(label.begin(), label.end(), [](unsigned char ch) {
    return std::isalnum(ch) || ch == '_' || ch == '-';
  });
}

// ---------------------------------------------------------------------------
// Section parsers

PhysParams parse_params(const json& root) {
  const json& p = require(root, "params", "");
  require_object(p, "params");
  reject_unknown(p, "params", {"mass", "hbar", "c"});
  const double mass = number(require(p, "mass", "params"), "params.mass");
  const double hbar = number_or(p, "hbar", "params", 1.0);
  const double c = number_or(p, "c", "params", 1.0);
  if (mass < 0.0) throw ConfigError("params.mass", "must be >= 0");
  if (hbar <= 0.0) throw ConfigError("params.hbar", "must be > 0");
  if (c <= 0.0) throw ConfigError("params.c", "must be > 0");
  try {
    return PhysParams(mass, hbar, c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("params", e.what());
  }
}

std::vector<double> parse_times(const json& root, const PhysParams& params) {
  const json& t = require(root, "time", "");
  require_object(t, "time");
  reject_unknown(t, "time", {"points", "start", "stop", "stop_periods", "count"});
  std::vector<double> times;
  if (const json* points = find(t, "points")) {
    if (find(t, "stop") || find(t, "stop_periods") || find(t, "count") || find(t, "start")) {
      throw ConfigError("time.points", "cannot be combined with start/stop/count");
    }
    times = number_list(*points, "time.points");
  } else {
    const double start = number_or(t, "start", "time", 0.0);
    const json* stop = find(t, "stop");
    const json* periods = find(t, "stop_periods");
    if ((stop == nullptr) == (periods == nullptr)) {
      throw ConfigError("time.stop", "give exactly one of 'stop' or 'stop_periods'");
    }
    double end = 0.0;
    if (stop) {
      end = number(*stop, "time.stop");
    } else {
      if (params.omega() == 0.0) throw ConfigError("time.stop_periods", "undefined for zero mass");
      end = number(*periods, "time.stop_periods") * params.period();
    }
    std::uint64_t count = 501;
    if (const json* c = find(t, "count")) count = unsigned_number(*c, "time.count");
    if (count < 2) throw ConfigError("time.count", "must be >= 2");
    if (!(end > start)) throw ConfigError("time", "stop must be greater than start");
    times = linspace(start, end, count);
  }
  try {
    require_strictly_increasing(times);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("time", e.what());
  }
  return times;
}

std::vector<LabeledState> parse_initial(const json& root, bool normalize) {
  const json& list = require(root, "initial", "");
  if (!list.is_array() || list.empty()) throw ConfigError("initial", "expected a non-empty array");
  std::vector<LabeledState> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "initial[" + std::to_string(i) + "]";
    const json& item = list[i];
    require_object(item, where);
    reject_unknown(item, where, {"label", "spinor", "partner"});
    LabeledState state;
    state.label = find(item, "label") ? string_value(item["label"], where + ".label") : "s" + std::to_string(i);
    if (!valid_label(state.label)) throw ConfigError(where + ".label", "use letters, digits, '_' or '-'");
    if (!seen.insert(state.label).second) throw ConfigError(where + ".label", "duplicate label");
    state.spinor = spinor_value(require(item, "spinor", where), where + ".spinor");
    if (const json* partner = find(item, "partner")) state.partner = spinor_value(*partner, where + ".partner");
    if (normalize) {
      auto unit = [&](const Spinor2& s, const std::string& field) {
        const double n = norm(s);
        if (n == 0.0) throw ConfigError(field, "cannot normalize a zero spinor");
        return (1.0 / n) * s;
      };
      state.spinor = unit(state.spinor, where + ".spinor");
      if (state.partner) state.partner = unit(*state.partner, where + ".partner");
    }
    out.push_back(std::move(state));
  }
  return out;
}

std::vector<Route> parse_routes(const json& root, Mode mode) {
  if (mode == Mode::kIon) return {Route::kDoubled};
  std::string eq = "both";
  if (const json* v = find(root, "equation")) eq = string_value(*v, "equation");
  if (eq == "both") return {Route::kDirac, Route::kMajorana};
  const Route r = route_from_string(eq, "equation");
  if (r != Route::kMajorana && r != Route::kDirac && !(r == Route::kUltra && mode == Mode::kWavepacket)) {
    throw ConfigError("equation", "'" + eq + "' is not available for mode " + to_string(mode));
  }
  return {r};
}

MomentumGrid parse_momentum(const json& root, const PhysParams& params) {
  const json& m = require(root, "momentum", "");
  require_object(m, "momentum");
  reject_unknown(m, "momentum", {"p", "p_over_mc", "check_ultra_monotone"});
  const json* abs = find(m, "p");
  const json* rel = find(m, "p_over_mc");
  if ((abs == nullptr) == (rel == nullptr)) {
    throw ConfigError("momentum.p", "give exactly one of 'p' or 'p_over_mc'");
  }
  MomentumGrid grid;
  if (abs) {
    grid.p = number_list(*abs, "momentum.p");
  } else {
    if (params.mass() == 0.0) throw ConfigError("momentum.p_over_mc", "undefined for zero mass");
    for (double r : number_list(*rel, "momentum.p_over_mc")) grid.p.push_back(r * params.mass() * params.c());
  }
  for (double p : grid.p) {
    if (p < 0.0) throw ConfigError("momentum", "momenta must be >= 0 (pairs are keyed by |p|)");
  }
  grid.check_ultra_monotone = bool_or(m, "check_ultra_monotone", "momentum", false);
  return grid;
}

PacketConfig parse_packet(const json& root, const std::vector<LabeledState>& initial, const PhysParams& params) {
  const json& p = require(root, "packet", "");
  require_object(p, "packet");
  reject_unknown(p, "packet", {"x0", "p0", "sigma_x", "grid_size", "box_length", "snapshots"});
  PacketConfig cfg;
  cfg.gaussian.x0 = number_or(p, "x0", "packet", 0.0);
  cfg.gaussian.p0 = number_or(p, "p0", "packet", 0.0);
  cfg.gaussian.sigma_x = number(require(p, "sigma_x", "packet"), "packet.sigma_x");
  cfg.gaussian.direction = initial.front().spinor;
  if (const json* n = find(p, "grid_size")) cfg.grid_size = unsigned_number(*n, "packet.grid_size");
  cfg.box_length = number_or(p, "box_length", "packet", cfg.box_length);
  if (const json* s = find(p, "snapshots")) cfg.snapshots = number_list(*s, "packet.snapshots");
  if (initial.size() != 1) throw ConfigError("initial", "wavepacket mode takes exactly one initial spinor");
  if (!is_normalized(cfg.gaussian.direction)) {
    throw ConfigError("initial[0].spinor", "must be normalized (or set \"normalize\": true)");
  }
  try {
    (void)build_gaussian(cfg.gaussian, cfg.grid_size, cfg.box_length, params);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("packet", e.what());
  }
  return cfg;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Convert the byte offset into a line/column position.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column), e.what());
  }
}

// ---------------------------------------------------------------------------
// Output helpers

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out_.imbue(std::locale::classic());
    out_ << std::setprecision(17);
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }

  CsvFile& cell(double v) {
    sep();
    out_ << v;
    return *this;
  }
  CsvFile& cell(const std::string& s) {
    sep();
    out_ << s;
    return *this;
  }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }

  std::ofstream out_;
  bool first_ = true;
};

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
}

class OutputSet {
 public:
  OutputSet(const Scenario& s) : dir_(s.output_dir), prefix_(s.prefix) { fs::create_directories(dir_); }

  fs::path file(const std::string& suffix) {
    fs::path p = dir_ / (prefix_ + suffix);
    result.outputs.push_back(p);
    return p;
  }

  RunResult result;

 private:
  fs::path dir_;
  std::string prefix_;
};

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void write_metadata(OutputSet& out, const Scenario& s, const RunOptions& options, const std::string& command,
                    const json& extra = json::object()) {
  const fs::path meta_path = fs::path(out.file(command == "compare" ? "_compare.meta.json" : ".meta.json"));
  json meta;
  meta["tool"] = kToolName;
  meta["version"] = kToolVersion;
  meta["command"] = command;
  meta["seed"] = options.seed.value_or(s.seed);
  meta["tolerance"] = options.tolerance;
  meta["scenario"] = s.source;
  json files = json::array();
  for (const fs::path& p : out.result.outputs) {
    if (p != meta_path) files.push_back(p.filename().string());
  }
  meta["outputs"] = files;
  meta["notes"] = out.result.notes;
  for (const auto& [key, value] : extra.items()) meta[key] = value;
  write_json(meta_path, meta);
}

void self_check(bool ok, const std::string& what) {
  if (!ok) throw SelfCheckError("self-check failed: " + what);
}

double sum_abs_diff(const Spinor2& a, const Spinor2& b) {
  return std::abs(a.upper - b.upper) + std::abs(a.lower - b.lower);
}

std::vector<std::string> spinor_columns(const std::string& prefix) {
  return {prefix + "_re_upper", prefix + "_im_upper", prefix + "_re_lower", prefix + "_im_lower"};
}

void spinor_cells(CsvFile& csv, const Spinor2& s) {
  csv.cell(s.upper.real()).cell(s.upper.imag()).cell(s.lower.real()).cell(s.lower.imag());
}

PacketEquation packet_equation(Route r) {
  switch (r) {
    case Route::kMajorana:
      return PacketEquation::kMajorana;
    case Route::kDirac:
      return PacketEquation::kDirac;
    case Route::kUltra:
      return PacketEquation::kUltra;
    default:
      throw std::logic_error("route has no wavepacket evolver");
  }
}

MomentumModePair initial_pair(const LabeledState& state, double p) {
  if (p == 0.0) return MomentumModePair::rest(state.spinor);
  return {p, state.spinor, state.partner.value_or(state.spinor)};
}

// Evolved (plus, minus) amplitudes of a momentum-mode scenario for one route.
std::pair<Spinor2, Spinor2> evolve_momentum(Route route, const MomentumModePair& pair, const PhysParams& params,
                                            double t) {
  switch (route) {
    case Route::kMajorana: {
      const MomentumModePair out = majorana_mode_evolve(pair, params, t);
      return {out.plus(), out.minus()};
    }
    case Route::kDirac:
      return {dirac_mode_evolve(pair.plus(), pair.p(), params, t),
              dirac_mode_evolve(pair.minus(), -pair.p(), params, t)};
    case Route::kUltra:
      if (pair.p() == 0.0) throw ConfigError("momentum", "ultra is undefined at p = 0");
      return {ultrarelativistic_approx(pair.plus(), pair.p(), params, t),
              ultrarelativistic_approx(pair.minus(), -pair.p(), params, t)};
    default:
      throw std::logic_error("route has no momentum evolver");
  }
}

Spinor2 evolve_rest(Route route, const Spinor2& psi0, const PhysParams& params, double t) {
  switch (route) {
    case Route::kMajorana:
      return majorana_rest_evolve(psi0, params, t);
    case Route::kDirac:
      return dirac_rest_evolve(psi0, params, t);
    case Route::kMajoranaViaDirac:
      return majorana_via_dirac(psi0, params, t);
    case Route::kDoubled:
      return decode(evolve_doubled(encode(psi0), params, t));
    default:
      throw std::logic_error("route has no rest evolver");
  }
}

// ---------------------------------------------------------------------------
// Mode runners

void run_rest(const Scenario& s, const RunOptions& options, OutputSet& out) {
  std::vector<std::string> header{"t"};
  std::vector<std::vector<double>> columns;
  for (const LabeledState& state : s.initial) {
    for (Route r : s.routes) {
      const RestEquation eq = r == Route::kDirac ? RestEquation::kDirac : RestEquation::kMajorana;
      header.push_back(to_string(r) + "_" + state.label);
      columns.push_back(sigma_z_series(state.spinor, eq, s.params, s.times, options.tolerance).values);
    }
    const double scale = std::max(1.0, norm(state.spinor));
    for (double t : s.times) {
      const Spinor2 direct = majorana_rest_evolve(state.spinor, s.params, t);
      self_check(max_abs_diff(direct, majorana_via_dirac(state.spinor, s.params, t)) <= options.tolerance * scale,
                 "Majorana closed form vs Dirac decomposition for '" + state.label + "'");
      self_check(std::abs(norm(direct) - norm(state.spinor)) <= options.tolerance * scale,
                 "Majorana norm conservation for '" + state.label + "'");
    }
  }
  CsvFile csv(out.file(".csv"), header);
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    csv.cell(s.times[i]);
    for (const auto& col : columns) csv.cell(col[i]);
    csv.end_row();
  }
}

void run_momentum(const Scenario& s, const RunOptions& options, OutputSet& out) {
  const MomentumGrid& grid = *s.momentum;
  const bool massive = s.params.mass() > 0.0;
  std::vector<std::string> header{"label", "p", "p_over_mc", "t", "omega_p", "validity_window", "within_window"};
  for (Route r : s.routes) {
    for (auto& c : spinor_columns(to_string(r))) header.push_back(c);
  }
  for (auto& c : spinor_columns("ultra")) header.push_back(c);
  header.push_back("dev_majorana_ultra");
  header.push_back("dev_dirac_ultra");
  CsvFile csv(out.file(".csv"), header);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const LabeledState& state : s.initial) {
    if (state.partner && std::find(grid.p.begin(), grid.p.end(), 0.0) != grid.p.end()) {
      out.result.notes.push_back("'" + state.label + "': the p = 0 pair is self-conjugate; its partner amplitude is ignored");
    }
    // dev[t][p-index] for the monotonicity check.
    std::vector<std::vector<std::pair<double, double>>> devs(s.times.size());
    for (double p : grid.p) {
      const MomentumModePair pair = initial_pair(state, p);
      const double window = validity_window(p, s.params);
      for (std::size_t ti = 0; ti < s.times.size(); ++ti) {
        const double t = s.times[ti];
        const MomentumModePair maj = majorana_mode_evolve(pair, s.params, t);
        const Spinor2 dir = dirac_mode_evolve(pair.plus(), p, s.params, t);
        self_check(std::abs(maj.norm_squared() - pair.norm_squared()) <= options.tolerance * std::max(1.0, pair.norm_squared()),
                   "Majorana pair norm conservation at p = " + std::to_string(p));
        self_check(std::abs(norm(dir) - norm(pair.plus())) <= options.tolerance * std::max(1.0, norm(pair.plus())),
                   "Dirac mode unitarity at p = " + std::to_string(p));

        csv.cell(state.label).cell(p).cell(massive ? p / (s.params.mass() * s.params.c()) : nan).cell(t);
        csv.cell(omega_p(p, s.params).omega_p).cell(window);
        csv.cell(std::abs(t) <= kUltraValidityFraction * window ? 1.0 : 0.0);
        for (Route r : s.routes) spinor_cells(csv, r == Route::kDirac ? dir : maj.plus());
        if (p > 0.0) {
          const Spinor2 ultra = ultrarelativistic_approx(pair.plus(), p, s.params, t);
          const double dm = norm(maj.plus() - ultra);
          const double dd = norm(dir - ultra);
          spinor_cells(csv, ultra);
          csv.cell(dm).cell(dd);
          devs[ti].push_back({dm, dd});
        } else {
          for (int k = 0; k < 6; ++k) csv.cell(nan);
        }
        csv.end_row();
      }
    }
    if (grid.check_ultra_monotone) {
      std::vector<double> sorted = grid.p;
      self_check(std::is_sorted(sorted.begin(), sorted.end()), "check_ultra_monotone needs increasing momenta");
      for (std::size_t ti = 0; ti < devs.size(); ++ti) {
        for (std::size_t k = 1; k < devs[ti].size(); ++k) {
          self_check(devs[ti][k].first < devs[ti][k - 1].first && devs[ti][k].second < devs[ti][k - 1].second,
                     "massless-limit deviation is not decreasing in p at t = " + std::to_string(s.times[ti]) +
                         " for '" + state.label + "'");
        }
      }
    }
  }
}

void run_wavepacket(const Scenario& s, const RunOptions& options, OutputSet& out) {
  const PacketConfig& cfg = *s.packet;
  const Wavepacket initial = build_gaussian(cfg.gaussian, cfg.grid_size, cfg.box_length, s.params);
  std::vector<std::string> header{"t"};
  for (Route r : s.routes) {
    const std::string n = to_string(r);
    header.insert(header.end(), {n + "_mean_x", n + "_sigma_z", n + "_norm"});
  }
  std::vector<std::vector<std::array<double, 3>>> rows(s.times.size());
  bool fallback = false;
  for (Route r : s.routes) {
    for (std::size_t ti = 0; ti < s.times.size(); ++ti) {
      const EvolvedPacket evolved = evolve_wavepacket(initial, packet_equation(r), s.times[ti]);
      fallback = fallback || evolved.zero_mode_fallback;
      const PositionProfile prof = position_density(evolved.packet);
      self_check(std::abs(evolved.packet.norm_squared() - 1.0) <= options.tolerance,
                 to_string(r) + " packet norm at t = " + std::to_string(s.times[ti]));
      rows[ti].push_back({prof.mean_x, prof.sigma_z, prof.norm});
    }
  }
  CsvFile csv(out.file(".csv"), header);
  for (std::size_t ti = 0; ti < s.times.size(); ++ti) {
    csv.cell(s.times[ti]);
    for (const auto& triple : rows[ti]) csv.cell(triple[0]).cell(triple[1]).cell(triple[2]);
    csv.end_row();
  }
  for (Route r : s.routes) {
    for (std::size_t k = 0; k < cfg.snapshots.size(); ++k) {
      const EvolvedPacket evolved = evolve_wavepacket(initial, packet_equation(r), cfg.snapshots[k]);
      std::ofstream snap(out.file("_" + to_string(r) + "_snap" + std::to_string(k) + ".csv"));
      snap.imbue(std::locale::classic());
      write_snapshot_csv(snap, position_density(evolved.packet));
    }
  }
  if (fallback) {
    out.result.notes.push_back("ultra: the p = 0 row was evolved with the exact Majorana propagator");
  }
}

void run_ion(const Scenario& s, const RunOptions& options, OutputSet& out) {
  const std::uint64_t seed = options.seed.value_or(s.seed);
  const Observable4 sz = lift_observable(Observable2::sigma_z());
  std::vector<std::string> header{"label", "t", "psi1r", "psi2r", "psi1i", "psi2i"};
  for (auto b : kPopulationBasis) header.push_back("pop_" + std::string(b));
  header.insert(header.end(), {"sigma_z_exact", "sigma_z_estimate", "sigma_z_stderr"});
  CsvFile csv(out.file(".csv"), header);
  json records = json::array();
  std::uint64_t index = 0;
  for (const LabeledState& state : s.initial) {
    const RealSpinor4 psi4 = encode(state.spinor);
    for (double t : s.times) {
      const RealSpinor4 now = evolve_doubled(psi4, s.params, t);
      self_check(max_abs_diff(decode(now), majorana_rest_evolve(state.spinor, s.params, t)) <= options.tolerance,
                 "doubled-space evolution vs Majorana closed form for '" + state.label + "'");
      const std::uint64_t record_seed = derive_seed(seed, index++);
      const ShotRecord rec = sample_populations(now, s.shots, record_seed);
      const PopulationEstimate est = estimate_from_populations(sz, rec);
      csv.cell(state.label).cell(t);
      for (double x : now.c) csv.cell(x);
      for (double x : now.c) csv.cell(x * x);
      csv.cell(expectation(sz, now)).cell(est.value).cell(est.standard_error);
      csv.end_row();
      records.push_back({{"label", state.label},
                         {"t", t},
                         {"shots", rec.shots},
                         {"seed", rec.seed},
                         {"counts", rec.counts},
                         {"basis", kPopulationBasis}});
    }
  }
  write_json(out.file("_shots.json"), records);
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kRest:
      return "rest";
    case Mode::kMomentum:
      return "momentum";
    case Mode::kWavepacket:
      return "wavepacket";
    case Mode::kIon:
      return "ion";
  }
  return "unknown";
}

std::string to_string(Route route) {
  switch (route) {
    case Route::kMajorana:
      return "majorana";
    case Route::kDirac:
      return "dirac";
    case Route::kUltra:
      return "ultra";
    case Route::kMajoranaViaDirac:
      return "majorana_via_dirac";
    case Route::kDoubled:
      return "doubled";
  }
  return "unknown";
}

Scenario parse_scenario(const std::string& text) {
  const json root = parse_document(text);
  require_object(root, "");
  reject_unknown(root, "", {"$schema", "description", "name", "mode", "equation", "params", "initial", "normalize",
                            "time", "output", "seed", "momentum", "packet", "ion", "compare"});
  Scenario s;
  s.source = root;
  s.name = find(root, "name") ? string_value(root["name"], "name") : "scenario";

  const std::string mode = string_value(require(root, "mode", ""), "mode");
  if (mode == "rest") {
    s.mode = Mode::kRest;
  } else if (mode == "momentum") {
    s.mode = Mode::kMomentum;
  } else if (mode == "wavepacket") {
    s.mode = Mode::kWavepacket;
  } else if (mode == "ion") {
    s.mode = Mode::kIon;
  } else {
    throw ConfigError("mode", "expected one of rest, momentum, wavepacket, ion");
  }

  s.params = parse_params(root);
  s.routes = parse_routes(root, s.mode);
  s.initial = parse_initial(root, bool_or(root, "normalize", "", false));
  s.times = parse_times(root, s.params);
  if (const json* seed = find(root, "seed")) s.seed = unsigned_number(*seed, "seed");

  switch (s.mode) {
    case Mode::kRest:
      break;
    case Mode::kMomentum:
      s.momentum = parse_momentum(root, s.params);
      break;
    case Mode::kWavepacket:
      s.packet = parse_packet(root, s.initial, s.params);
      break;
    case Mode::kIon: {
      const json& ion = require(root, "ion", "");
      require_object(ion, "ion");
      reject_unknown(ion, "ion", {"shots"});
      s.shots = unsigned_number(require(ion, "shots", "ion"), "ion.shots");
      if (s.shots == 0) throw ConfigError("ion.shots", "must be >= 1");
      for (std::size_t i = 0; i < s.initial.size(); ++i) {
        if (!is_normalized(s.initial[i].spinor)) {
          throw ConfigError("initial[" + std::to_string(i) + "].spinor",
                            "must be normalized for population sampling (or set \"normalize\": true)");
        }
      }
      break;
    }
  }

  if (const json* cmp = find(root, "compare")) {
    require_object(*cmp, "compare");
    reject_unknown(*cmp, "compare", {"a", "b"});
    if (const json* a = find(*cmp, "a")) s.compare_a = route_from_string(string_value(*a, "compare.a"), "compare.a");
    if (const json* b = find(*cmp, "b")) s.compare_b = route_from_string(string_value(*b, "compare.b"), "compare.b");
  } else if (s.mode == Mode::kIon) {
    s.compare_b = Route::kDoubled;
  }
  if (!route_available(s.mode, s.compare_a)) {
    throw ConfigError("compare.a", "'" + to_string(s.compare_a) + "' is not available for mode " + mode);
  }
  if (!route_available(s.mode, s.compare_b)) {
    throw ConfigError("compare.b", "'" + to_string(s.compare_b) + "' is not available for mode " + mode);
  }

  s.prefix = s.name;
  fs::path dir = ".";
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) dir = env;
  if (const json* output = find(root, "output")) {
    require_object(*output, "output");
    reject_unknown(*output, "output", {"dir", "prefix"});
    if (const json* d = find(*output, "dir")) dir = string_value(*d, "output.dir");
    if (const json* p = find(*output, "prefix")) s.prefix = string_value(*p, "output.prefix");
  }
  if (!valid_label(s.prefix)) throw ConfigError("output.prefix", "use letters, digits, '_' or '-'");
  s.output_dir = dir;
  return s;
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Scenario fig1_scenario(double omega) {
  if (!std::isfinite(omega) || omega <= 0.0) throw ConfigError("--omega", "must be finite and > 0");
  const double r = 1.0 / std::sqrt(2.0);
  json doc = {{"name", "fig1"},
              {"mode", "rest"},
              {"equation", "both"},
              {"params", {{"mass", omega}, {"hbar", 1.0}, {"c", 1.0}}},
              {"initial",
               {{{"label", "10"}, {"spinor", {1.0, 0.0, 0.0, 0.0}}},
                {{"label", "1i"}, {"spinor", {r, 0.0, 0.0, r}}}}},
              {"time", {{"start", 0.0}, {"stop_periods", 1.0}, {"count", 501}}}};
  return parse_scenario(doc.dump());
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  OutputSet out(scenario);
  switch (scenario.mode) {
    case Mode::kRest:
      run_rest(scenario, options, out);
      break;
    case Mode::kMomentum:
      run_momentum(scenario, options, out);
      break;
    case Mode::kWavepacket:
      run_wavepacket(scenario, options, out);
      break;
    case Mode::kIon:
      run_ion(scenario, options, out);
      break;
  }
  write_metadata(out, scenario, options, "run");
  return out.result;
}

CompareReport compare_scenario(const Scenario& s, const RunOptions& options) {
  OutputSet out(s);
  CompareReport report;
  report.a = s.compare_a;
  report.b = s.compare_b;
  double sum = 0.0;
  auto record = [&](double t, double dev, double l1) {
    sum += dev;
    report.max_sum_deviation = std::max(report.max_sum_deviation, l1);
    ++report.samples;
    if (report.samples == 1 || dev > report.max_deviation) {
      report.max_deviation = dev;
      report.argmax_t = t;
    }
  };

  switch (s.mode) {
    case Mode::kRest:
    case Mode::kIon: {
      CsvFile csv(out.file("_compare.csv"), {"label", "t", "max_abs", "sum_abs"});
      for (const LabeledState& state : s.initial) {
        for (double t : s.times) {
          const Route a = s.compare_a == Route::kDoubled || s.mode == Mode::kRest ? s.compare_a : Route::kMajorana;
          const Route b = s.compare_b == Route::kDoubled || s.mode == Mode::kRest ? s.compare_b : Route::kMajorana;
          const Spinor2 sa = evolve_rest(a, state.spinor, s.params, t);
          const Spinor2 sb = evolve_rest(b, state.spinor, s.params, t);
          const double dev = max_abs_diff(sa, sb);
          const double l1 = sum_abs_diff(sa, sb);
          csv.cell(state.label).cell(t).cell(dev).cell(l1);
          csv.end_row();
          record(t, dev, l1);
        }
      }
      break;
    }
    case Mode::kMomentum: {
      CsvFile csv(out.file("_compare.csv"), {"label", "p", "t", "max_abs", "sum_abs"});
      for (const LabeledState& state : s.initial) {
        for (double p : s.momentum->p) {
          const MomentumModePair pair = initial_pair(state, p);
          for (double t : s.times) {
            const auto [a_plus, a_minus] = evolve_momentum(s.compare_a, pair, s.params, t);
            const auto [b_plus, b_minus] = evolve_momentum(s.compare_b, pair, s.params, t);
            const double dev = std::max(max_abs_diff(a_plus, b_plus), max_abs_diff(a_minus, b_minus));
            const double l1 = sum_abs_diff(a_plus, b_plus) + sum_abs_diff(a_minus, b_minus);
            csv.cell(state.label).cell(p).cell(t).cell(dev).cell(l1);
            csv.end_row();
            record(t, dev, l1);
          }
        }
      }
      break;
    }
    case Mode::kWavepacket: {
      const PacketConfig& cfg = *s.packet;
      const Wavepacket initial = build_gaussian(cfg.gaussian, cfg.grid_size, cfg.box_length, s.params);
      CsvFile csv(out.file("_compare.csv"), {"t", "max_abs", "sum_abs"});
      for (double t : s.times) {
        const EvolvedPacket a = evolve_wavepacket(initial, packet_equation(s.compare_a), t);
        const EvolvedPacket b = evolve_wavepacket(initial, packet_equation(s.compare_b), t);
        if (a.zero_mode_fallback || b.zero_mode_fallback) {
          if (out.result.notes.empty()) {
            out.result.notes.push_back("ultra: the p = 0 row was evolved with the exact Majorana propagator");
          }
        }
        const double dev = max_abs_diff(a.packet, b.packet);
        double l1 = 0.0;
        for (std::size_t i = 0; i < a.packet.grid_size(); ++i) {
          l1 += sum_abs_diff(a.packet.modes()[i], b.packet.modes()[i]);
        }
        csv.cell(t).cell(dev).cell(l1);
        csv.end_row();
        record(t, dev, l1);
      }
      break;
    }
  }
  report.mean_deviation = report.samples ? sum / static_cast<double>(report.samples) : 0.0;

  const json summary = {{"a", to_string(report.a)},
                        {"b", to_string(report.b)},
                        {"max_deviation", report.max_deviation},
                        {"mean_deviation", report.mean_deviation},
                        {"argmax_t", report.argmax_t},
                        {"max_sum_deviation", report.max_sum_deviation},
                        {"samples", report.samples}};
  write_json(out.file("_compare.json"), summary);
  write_metadata(out, s, options, "compare");
  report.files = out.result;
  return report;
}

}  // namespace majsim::cli
