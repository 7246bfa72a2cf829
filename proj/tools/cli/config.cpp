#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace softphoton::cli {
namespace {

enum class Kind { number, integer, number_or_auto, vec3, ladder, families, counterterm, photons, complex };

struct KeyInfo {
  const char* name;
  Kind kind;
};

// Echo order follows this table.
constexpr KeyInfo kKeys[] = {
    {"family", Kind::families},
    {"e", Kind::number},
    {"m", Kind::number},
    {"v", Kind::vec3},
    {"v_prime", Kind::vec3},
    {"x", Kind::vec3},
    {"lambda", Kind::number},
    {"eps", Kind::number},
    {"uv_scale", Kind::number},
    {"grid.k_min", Kind::number_or_auto},
    {"grid.k_max", Kind::number_or_auto},
    {"grid.radial_panels", Kind::integer},
    {"grid.nodes_per_panel", Kind::integer},
    {"grid.n_cos", Kind::integer},
    {"grid.n_phi", Kind::integer},
    {"grid.max_panel_width", Kind::number_or_auto},
    {"lambda_ladder", Kind::ladder},
    {"eps_ladder", Kind::ladder},
    {"t_ladder", Kind::ladder},
    {"counterterm", Kind::counterterm},
    {"counterterm_scale", Kind::number},
    {"photons", Kind::photons},
    {"hard", Kind::complex},
    {"horizon", Kind::number},
    {"time_nodes", Kind::integer},
};

const KeyInfo* find_key(const std::string& key) {
  for (const auto& k : kKeys) {
    if (key == k.name) return &k;
  }
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  double x = 0.0;
  const char* end = t.data() + t.size();
  const auto [p, ec] = std::from_chars(t.data(), end, x);
  if (t.empty() || ec != std::errc() || p != end) throw ConfigError(field, "expected a number, got '" + text + "'");
  return x;
}

int parse_int(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  int x = 0;
  const char* end = t.data() + t.size();
  const auto [p, ec] = std::from_chars(t.data(), end, x);
  if (t.empty() || ec != std::errc() || p != end) throw ConfigError(field, "expected an integer, got '" + text + "'");
  return x;
}

std::vector<double> parse_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(field, part));
  return out;
}

bool experiment_is(const std::string& name, std::initializer_list<const char*> any) {
  return std::any_of(any.begin(), any.end(), [&](const char* n) { return name == n; });
}

bool coarse_experiment(const std::string& name) { return experiment_is(name, {"crosscheck", "emission"}); }

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"exponent",  "scan-lambda", "converge",   "counterterm-check",
                                              "emission",  "compare-gauges", "crosscheck", "validate"};
  return names;
}

bool is_experiment(const std::string& name) {
  const auto& n = experiment_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

Config::Config(std::string experiment) : experiment_(std::move(experiment)) {
  if (!is_experiment(experiment_)) throw ConfigError("experiment", "unknown experiment '" + experiment_ + "'");
}

std::string Config::default_for(const std::string& key) const {
  const std::string& x = experiment_;
  if (key == "family") {
    if (x == "exponent") return "PFB,PFBR";
    if (x == "counterterm-check") return "PFB,BN_C,BN_F";
    if (x == "crosscheck") return "PFB,BN_F";
    if (x == "emission") return "BN_F";
    return "PFB";
  }
  if (key == "e") return "0.30282";
  if (key == "m") return "1";
  if (key == "v") return "0.1,0,0";
  if (key == "v_prime") return "-0.1,0,0";
  if (key == "x") return "0,0,0";
  if (key == "lambda") return "0.1";
  if (key == "eps") return "0.1";
  if (key == "uv_scale") return "1";
  if (key == "grid.k_min") return "auto";
  if (key == "grid.k_max") return coarse_experiment(x) ? "6" : "auto";
  if (key == "grid.radial_panels") return coarse_experiment(x) ? "12" : (x == "converge" ? "16" : "24");
  if (key == "grid.nodes_per_panel") return coarse_experiment(x) ? "8" : "16";
  if (key == "grid.n_cos") return coarse_experiment(x) ? "16" : (x == "converge" ? "32" : "64");
  if (key == "grid.n_phi") return coarse_experiment(x) ? "8" : (x == "converge" ? "16" : "32");
  if (key == "grid.max_panel_width") return "auto";
  if (key == "lambda_ladder") return "geometric(1e-2,1e-4,7)";
  if (key == "eps_ladder") return "geometric(1e-2,7.8125e-5,8)";
  if (key == "t_ladder") return "geometric(10,160,5)";
  if (key == "counterterm") return "natural";
  if (key == "counterterm_scale") return "1";
  if (key == "photons") return "0.2,0.1,-0.3,0;0.1,-0.2,0.25,1";
  if (key == "hard") return "1,0";
  if (key == "horizon") return "30";
  if (key == "time_nodes") return "16";
  throw ConfigError(key, "unknown key");
}

void Config::set(const std::string& key, const std::string& value) {
  if (!find_key(key)) throw ConfigError(key, "unknown key");
  values_[key] = trim(value);
}

void Config::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError(trim(assignment), "expected key=value");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

void Config::load_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    try {
      set_assignment(line);
    } catch (const ConfigError& e) {
      throw ConfigError(e.field(), e.detail() + " (" + origin + ":" + std::to_string(lineno) + ")");
    }
  }
}

void Config::load_json(const std::string& text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", origin + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("config") || !doc["config"].is_object()) {
    throw ConfigError("config", origin + ": expected a report envelope with a \"config\" object");
  }
  if (doc.contains("experiment") && doc["experiment"] != experiment_) {
    throw ConfigError("experiment", origin + ": envelope is for '" + doc["experiment"].dump() + "'");
  }
  for (const auto& [key, value] : doc["config"].items()) {
    if (!value.is_string()) throw ConfigError(key, "expected a string value");
    set(key, value.get<std::string>());
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    load_json(text, path);
  } else {
    load_text(text, path);
  }
}

std::string Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  return it != values_.end() ? it->second : default_for(key);
}

double Config::number(const std::string& key) const {
  const double x = parse_double(key, raw(key));
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

int Config::integer(const std::string& key) const { return parse_int(key, raw(key)); }

Vec3 Config::vec3(const std::string& key) const {
  const auto c = parse_list(key, raw(key));
  if (c.size() != 3) throw ConfigError(key, "expected three comma-separated components");
  return {c[0], c[1], c[2]};
}

std::vector<double> Config::ladder(const std::string& key) const {
  const std::string s = raw(key);
  if (s.rfind("geometric(", 0) == 0) {
    if (s.back() != ')') throw ConfigError(key, "unterminated geometric(...)");
    const auto args = split(s.substr(10, s.size() - 11), ',');
    if (args.size() != 3) throw ConfigError(key, "geometric(first,last,count) takes three arguments");
    const double a = parse_double(key, args[0]);
    const double b = parse_double(key, args[1]);
    const int n = parse_int(key, args[2]);
    if (!(a > 0.0) || !(b > 0.0) || n < 2) throw ConfigError(key, "geometric ladder needs positive ends and count >= 2");
    return geometric_ladder(a, b, n);
  }
  return parse_list(key, s);
}

std::vector<Family> Config::families() const {
  std::vector<Family> out;
  for (const auto& name : split(raw("family"), ',')) {
    const auto f = family_from_string(name);
    if (!f) throw ConfigError("family", "unknown family '" + name + "'");
    out.push_back(*f);
  }
  return out;
}

PhotonList Config::photons() const {
  PhotonList out;
  const std::string s = raw("photons");
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ';')) {
    const auto c = split(item, ',');
    if (c.size() != 4) throw ConfigError("photons", "each photon is kx,ky,kz,index");
    out.push_back({{parse_double("photons", c[0]), parse_double("photons", c[1]), parse_double("photons", c[2])},
                   parse_int("photons", c[3])});
  }
  return out;
}

Complex Config::complex_number(const std::string& key) const {
  const auto c = parse_list(key, raw(key));
  if (c.size() != 2) throw ConfigError(key, "expected re,im");
  return {c[0], c[1]};
}

ModelSpec Config::model() const {
  ModelSpec s;
  s.family = families().front();
  s.kin.e = number("e");
  s.kin.m = number("m");
  s.kin.v = vec3("v");
  s.kin.x = vec3("x");
  s.disp = Dispersion(number("lambda"));
  s.ff = FormFactor(number("uv_scale"));
  s.eps = number("eps");
  return s;
}

GridSpec Config::grid_spec(const Dispersion& disp, const FormFactor& ff) const {
  GridSpec g = GridSpec::defaults_for(disp, ff);
  if (raw("grid.k_min") != "auto") g.k_min = number("grid.k_min");
  if (raw("grid.k_max") != "auto") g.k_max = number("grid.k_max");
  g.radial_panels = integer("grid.radial_panels");
  g.nodes_per_panel = integer("grid.nodes_per_panel");
  g.n_cos = integer("grid.n_cos");
  g.n_phi = integer("grid.n_phi");
  if (raw("grid.max_panel_width") != "auto") {
    g.max_panel_width = number("grid.max_panel_width");
  } else if (experiment_ == "converge") {
    // Resolve the oscillation period 2 pi / t_max with a few nodes per cycle.
    const auto t = ladder("t_ladder");
    g.max_panel_width = 8.0 / *std::max_element(t.begin(), t.end());
  }
  return g;
}

QuadratureGrid Config::grid(const Dispersion& disp, const FormFactor& ff) const {
  return QuadratureGrid(grid_spec(disp, ff));
}

QuadratureGrid Config::grid_for_lambda(double lambda) const {
  return grid(Dispersion(lambda), FormFactor(number("uv_scale")));
}

PhaseOptions Config::phase_options() const {
  PhaseOptions o;
  o.counterterm_scale = number("counterterm_scale");
  const std::string ct = raw("counterterm");
  if (ct != "natural") {
    const auto kind = counterterm_from_string(ct);
    if (!kind) throw ConfigError("counterterm", "expected natural, z, z1 or z2");
    o.counterterm_override = kind;
  }
  return o;
}

std::vector<std::pair<std::string, std::string>> Config::resolved() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : kKeys) {
    std::string value = raw(k.name);
    // Unparseable values are echoed verbatim so validate can still report them.
    try {
      if (k.kind == Kind::number || (k.kind == Kind::number_or_auto && value != "auto")) {
        value = format_double(number(k.name));
      } else if (k.kind == Kind::vec3) {
        const Vec3 u = vec3(k.name);
        value = format_double(u.x) + "," + format_double(u.y) + "," + format_double(u.z);
      }
    } catch (const ConfigError&) {
    }
    out.emplace_back(k.name, value);
  }
  return out;
}

std::vector<std::string> Config::diagnostics() const {
  std::vector<std::string> out;
  auto report = [&](const std::string& code, const std::string& field, const std::string& detail) {
    out.push_back(code + " at field \"" + field + "\": " + detail);
  };
  // Every key must at least parse.
  for (const auto& k : kKeys) {
    try {
      switch (k.kind) {
        case Kind::number: number(k.name); break;
        case Kind::integer: integer(k.name); break;
        case Kind::number_or_auto:
          if (raw(k.name) != "auto") number(k.name);
          break;
        case Kind::vec3: vec3(k.name); break;
        case Kind::ladder: ladder(k.name); break;
        case Kind::families: families(); break;
        case Kind::counterterm: phase_options(); break;
        case Kind::photons: photons(); break;
        case Kind::complex: complex_number(k.name); break;
      }
    } catch (const ConfigError& e) {
      report("ConfigInvalid", e.field(), e.detail());
    } catch (const NumericalError& e) {
      report(to_string(e.code()), k.name, e.what());
    }
  }
  if (!out.empty()) return out;

  for (const char* key : {"v", "v_prime"}) {
    if (!(norm(vec3(key)) < 1.0)) report("NonPhysicalVelocity", key, "|v| must be < 1");
  }
  const bool ladder_lambda = experiment_is(experiment_, {"scan-lambda", "compare-gauges"});
  if (!(number("lambda") > 0.0)) report("NonPositiveCutoff", "lambda", "photon mass must be > 0");
  if (!(number("uv_scale") > 0.0)) report("NonPositiveCutoff", "uv_scale", "UV scale must be > 0");
  if (!(number("m") > 0.0)) report("InvalidArgument", "m", "mass must be > 0");
  const double eps = number("eps");
  if (experiment_ == "converge") {
    if (!(eps >= 0.0)) report("InvalidArgument", "eps", "adiabatic rate must be >= 0");
  } else if (experiment_is(experiment_, {"exponent", "scan-lambda", "compare-gauges", "emission", "crosscheck"})) {
    if (!(eps > 0.0)) report("InvalidArgument", "eps", "Moeller construction needs eps > 0");
  }

  auto check_ladder = [&](const char* key, bool decreasing) {
    const auto l = ladder(key);
    if (l.size() < 3) report("InvalidArgument", key, "ladder needs at least 3 points");
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (!(l[i] > 0.0)) {
        report(key == std::string("lambda_ladder") ? "NonPositiveCutoff" : "InvalidArgument", key,
               "ladder entries must be > 0");
        return;
      }
      if (i > 0 && (decreasing ? !(l[i] < l[i - 1]) : !(l[i] > l[i - 1]))) {
        report("InvalidArgument", key, decreasing ? "ladder must be decreasing" : "ladder must be increasing");
        return;
      }
    }
  };
  if (ladder_lambda) check_ladder("lambda_ladder", true);
  if (experiment_ == "counterterm-check") check_ladder("eps_ladder", true);
  if (experiment_ == "converge") check_ladder("t_ladder", false);

  const auto fams = families();
  auto only = [&](std::initializer_list<Family> allowed, const char* why) {
    for (Family f : fams) {
      if (std::find(allowed.begin(), allowed.end(), f) == allowed.end()) {
        report("InvalidArgument", "family", std::string(to_string(f)) + " " + why);
      }
    }
  };
  if (experiment_ == "emission") only({Family::BN_F}, "has no emission amplitude; use BN_F");
  if (experiment_ == "converge" && fams.size() != 1) report("InvalidArgument", "family", "converge takes one family");
  if (experiment_ == "counterterm-check" && !(number("counterterm_scale") > 0.0)) {
    report("InvalidArgument", "counterterm_scale", "must be > 0");
  }

  if (experiment_ == "emission") {
    for (const auto& p : photons()) {
      if (p.index < 0 || p.index > 3) report("IndexMismatch", "photons", "Lorentz index must be 0..3");
      if (norm(p.k) == 0.0) report("ZeroMomentum", "photons", "photon momentum must be nonzero");
    }
  }
  if (experiment_ == "crosscheck") {
    if (!(number("horizon") > 0.0)) report("InvalidArgument", "horizon", "must be > 0");
    if (integer("time_nodes") < 2) report("InvalidArgument", "time_nodes", "must be >= 2");
  }

  const char* ints[] = {"grid.radial_panels", "grid.nodes_per_panel", "grid.n_cos", "grid.n_phi"};
  for (const char* key : ints) {
    if (integer(key) < 1) report("InvalidArgument", key, "must be >= 1");
  }
  for (const char* key : {"grid.k_min", "grid.k_max", "grid.max_panel_width"}) {
    if (raw(key) != "auto" && !(number(key) > 0.0)) report("InvalidArgument", key, "must be > 0 or auto");
  }
  if (raw("grid.k_min") != "auto" && raw("grid.k_max") != "auto" && !(number("grid.k_min") < number("grid.k_max"))) {
    report("InvalidArgument", "grid.k_min", "must be below grid.k_max");
  }
  return out;
}

}  // namespace softphoton::cli
