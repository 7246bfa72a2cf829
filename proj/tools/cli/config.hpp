#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "softphoton/amplitudes.hpp"
#include "softphoton/models.hpp"
#include "softphoton/momentum.hpp"

namespace softphoton::cli {

// Raised for malformed or unknown configuration entries; field() names the key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)), detail_(message) {}
  const std::string& field() const { return field_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string field_;
  std::string detail_;
};

const std::vector<std::string>& experiment_names();
bool is_experiment(const std::string& name);

// Flat key=value configuration.  Values are kept as strings until read.
class Config {
 public:
  explicit Config(std::string experiment);

  const std::string& experiment() const { return experiment_; }

  // Lines of `key = value`; '#' starts a comment.  Unknown keys are rejected.
  void load_text(const std::string& text, const std::string& origin);
  // A JSON report envelope: its "config" object (and "experiment", which
  // must match) are applied as if they were key=value lines.
  void load_json(const std::string& text, const std::string& origin);
  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  void set_assignment(const std::string& assignment);  // "key=value"

  // Effective value (explicit or default) as text.
  std::string raw(const std::string& key) const;
  bool is_default(const std::string& key) const { return !values_.count(key); }

  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  Vec3 vec3(const std::string& key) const;
  std::vector<double> ladder(const std::string& key) const;
  // "family" may hold one name or a comma list.
  std::vector<Family> families() const;
  PhotonList photons() const;
  Complex complex_number(const std::string& key) const;

  ModelSpec model() const;
  // Grid for a given photon mass, honouring grid.* overrides.
  QuadratureGrid grid(const Dispersion& disp, const FormFactor& ff) const;
  GridSpec grid_spec(const Dispersion& disp, const FormFactor& ff) const;
  PhaseOptions phase_options() const;
  // Same overrides applied to an arbitrary photon mass (ladders).
  QuadratureGrid grid_for_lambda(double lambda) const;

  // Every key with its effective value, numbers normalized to %.17g.
  std::vector<std::pair<std::string, std::string>> resolved() const;

  // Precondition audit; one line per violation, empty when valid.
  std::vector<std::string> diagnostics() const;

 private:
  std::string default_for(const std::string& key) const;

  std::string experiment_;
  std::map<std::string, std::string> values_;
};

std::string format_double(double x);

}  // namespace softphoton::cli
