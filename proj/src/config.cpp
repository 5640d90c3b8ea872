#include "shockzoom/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "shockzoom/error.hpp"

namespace shockzoom {

namespace {

struct KeySpec {
  const char* key;
  const char* value;
  const char* help;
};

// `auto` entries resolve per scenario or command.
constexpr KeySpec kKeys[] = {
    {"output.dir", "shockzoom-out", "directory receiving CSV files and summary.json"},
    {"seed", "42", "seed of the perturbation generator"},
    {"kernel", "parallel", "parallel | serial"},
    {"flux.name", "burgers", "burgers | burgers-linear | quartic"},
    {"flux.params", "", "flux parameters (burgers-linear: b; quartic: kappa, lo, hi)"},
    {"scenario.id", "theorem1-single", "theorem1-single | theorem1-merging | theorem2-formation"},
    {"scenario.params", "auto", "scenario parameters; auto uses the scenario defaults"},
    {"eps", "auto", "strictly decreasing viscosities"},
    {"grid.dx_zoom", "0.1", "mesh in zoomed units; the physical mesh is eps^beta times it"},
    {"grid.half_width", "0", "physical half-width of the solve domain; 0 derives it"},
    {"grid.scheme", "central", "central | llf"},
    {"grid.cfl", "0.5", "advective CFL number"},
    {"grid.diffusion", "0.45", "diffusion number"},
    {"window.t", "auto", "zoomed time range"},
    {"window.x", "auto", "zoomed space range"},
    {"window.dt", "0.1", "zoomed snapshot spacing"},
    {"fit.shift_bound", "auto", "bound on the fitted (t, x) shift; 0 disables the fit"},
    {"limit.merge_taus", "-20,-30,-40", "start times of the merging runs behind W"},
    {"limit.z_levels", "64,128,256", "truncation levels behind Z"},
    {"limit.z_tolerance", "0.05", "largest accepted difference of the last two Z levels"},
    {"run.max_final_error", "0.1", "single shock: final sup error bound as a fraction of the jump"},
    {"run.write_fields", "true", "write the zoomed field of every eps"},
    {"sweep.nodes", "4096", "nodes of the physical grid"},
    {"sweep.domain", "-1,1", "physical domain"},
    {"sweep.t_check", "1", "comparison time"},
    {"sweep.scheme", "llf", "central | llf"},
    {"sweep.lipschitz", "0,1", "interval where the reference is Lipschitz"},
    {"sweep.min_slope", "0.45", "smallest accepted L1 rate"},
    {"audit.suite", "lemma81", "lemma81 | zbo | zmono | oleinik | phase | lemma31"},
    {"audit.lemma81.t", "-10,-0.5", "time range"},
    {"audit.lemma81.x", "-50,50", "space range"},
    {"audit.lemma81.nt", "100", "time samples"},
    {"audit.lemma81.nx", "100", "space samples"},
    {"audit.zbo.n", "16", "truncation level"},
    {"audit.zbo.dx", "0.02", "mesh"},
    {"audit.zbo.x_max", "40", "domain half-width"},
    {"audit.zbo.times", "-9,-4,-1", "check times"},
    {"audit.zmono.levels", "4,8,16", "increasing truncation levels"},
    {"audit.zmono.samples", "100", "sampled (t, x >= 0) points per pair"},
    {"audit.zmono.t", "-4,-0.5", "time range; must not start before -(smallest level)"},
    {"audit.zmono.x", "0,10", "space range of the samples"},
    {"audit.zmono.dx", "0.05", "mesh"},
    {"audit.zmono.tolerance", "1e-4", "allowed decrease between levels"},
    {"audit.oleinik.amplitude", "4", "data amplitude * sin(x) on [0, 2 pi]"},
    {"audit.oleinik.nodes", "1025", "periodic nodes including the closing one"},
    {"audit.oleinik.times", "0.5,1,2", "check times"},
    {"audit.phase.delta0", "0.05", "data closeness to the end states outside [a, b]"},
    {"audit.phase.delta1", "0.5", "width of the invariant region"},
    {"audit.phase.steepness", "4", "data -tanh(steepness x)"},
    {"audit.phase.domain", "-100,100", "physical domain"},
    {"audit.phase.dx", "0.1", "mesh"},
    {"audit.lemma31.deltas", "0.1,0.05,0.025", "strip sizes"},
    {"audit.lemma31.band", "3", "largest accepted ratio between fitted error / delta values"},
    {"ztable.t", "-4,-1", "times"},
    {"ztable.x", "-10,10", "space range"},
    {"ztable.n", "2001", "space samples"},
    {"profile.u_minus", "1", "left state"},
    {"profile.u_plus", "-1", "right state"},
    {"profile.half_width", "20", "dump range [-half_width, half_width]"},
    {"profile.dx", "0.01", "sample spacing"},
    {"merge.states", "1,0,-1", "u_minus, u_star, u_plus"},
    {"merge.taus", "-20,-30,-40", "decreasing start times"},
    {"merge.window_t", "-10,20", "stored time range; its start is the comparison time"},
    {"merge.window_x", "-30,30", "stored space range"},
    {"merge.dt", "0.5", "snapshot spacing"},
    {"merge.dx", "0.05", "mesh"},
    {"merge.max_fit_error", "0.05", "sup error bound of the final traveling-wave fit, as a fraction of the jump"},
    {"zlimit.levels", "16,32,64", "increasing truncation levels"},
    {"zlimit.window_t", "-3,1", "time range"},
    {"zlimit.window_x", "-4,4", "space range"},
    {"zlimit.dt", "0.1", "snapshot spacing"},
    {"zlimit.dx", "0.05", "mesh"},
    {"zlimit.tolerance", "0.05", "largest accepted difference of the last two levels"},
};

const KeySpec* find_key(const std::string& key) {
  for (const auto& k : kKeys) {
    if (key == k.key) return &k;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  fail(ErrorKind::Config, key + ": expected " + expected + ", got '" + value + "'");
}

double parse_number(const std::string& key, const std::string& token) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE ||
      !std::isfinite(v)) {
    bad_value(key, token, "a finite number");
  }
  return v;
}

std::vector<std::string> tokens(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

Config Config::defaults() {
  Config c;
  for (const auto& k : kKeys) c.values_[k.key] = k.value;
  return c;
}

void Config::set(const std::string& key, const std::string& value) {
  if (!find_key(key)) fail(ErrorKind::Config, "unknown config key '" + key + "'");
  values_[key] = value;
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    fail(ErrorKind::Config, "expected key=value, got '" + assignment + "'");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void Config::merge_text(const std::string& text, const std::string& origin) {
  std::istringstream is(text);
  std::string section;
  int lineno = 0;
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorKind::Config, where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string full = section.empty() ? key : section + "." + key;
    if (!find_key(full)) fail(ErrorKind::Config, where + ": unknown config key '" + full + "'");
    values_[full] = trim(line.substr(eq + 1));
  }
}

void Config::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  merge_text(os.str(), path);
}

const std::string& Config::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorKind::Config, "unknown config key '" + key + "'");
  return it->second;
}

double Config::number(const std::string& key) const { return parse_number(key, trim(text(key))); }

long Config::integer(const std::string& key) const {
  const std::string v = trim(text(key));
  char* end = nullptr;
  errno = 0;
  const long n = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    bad_value(key, v, "an integer");
  }
  return n;
}

bool Config::flag(const std::string& key) const {
  const std::string v = trim(text(key));
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& tok : tokens(text(key))) out.push_back(parse_number(key, tok));
  return out;
}

std::vector<long> Config::integers(const std::string& key) const {
  std::vector<long> out;
  for (const auto& tok : tokens(text(key))) {
    const double v = parse_number(key, tok);
    if (v != std::floor(v)) bad_value(key, tok, "integers");
    out.push_back(static_cast<long>(v));
  }
  return out;
}

std::pair<double, double> Config::range(const std::string& key) const {
  const auto v = numbers(key);
  if (v.size() != 2 || !(v[1] > v[0])) bad_value(key, text(key), "an increasing pair lo,hi");
  return {v[0], v[1]};
}

std::string Config::dump(bool with_help) const {
  std::ostringstream os;
  for (const auto& [key, value] : values_) {
    if (with_help) {
      if (const auto* spec = find_key(key)) os << "# " << spec->help << "\n";
    }
    os << key << " = " << value << "\n";
  }
  return os.str();
}

}  // namespace shockzoom
