// Scenario configuration files for the rz2 tool.
//
// A config is a JSON document:
//
//   {
//     "distributions": [{"sigma": 1, "beta": 0, "sigma_p": 0.5, "beta_p": 0, "kappa": 0.5}],
//     "coefficients": {"a": [{"re": 1, "disc": 1}], "b": [...], "c": [...], "d": [...]},
//     "grid": {"s_max": 5, "s_steps": 101},
//     "mc": {"n_samples": 2000, "seed": 1, "n_perm": 499},
//     "allow_vanishing": false,
//     "fd": {"pivot": 0, "trials": 50, "symmetrize": true},
//     "density": {"index": 0, "points": 401},
//     "z2": {"mode": "proposition", "n_max": 2, "q_grid": ["0", "1/4", "1/3", "1"]}
//   }
//
// Every section is optional at parse time; commands check what they need.
// A report written by the tool is also accepted: its "config" member is used.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rz2/charfn.hpp"
#include "rz2/forms.hpp"
#include "rz2/z2.hpp"

namespace rz2::cli {

/// Validation failure; the message carries "source:line:" when known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maps JSON pointers ("/distributions/0/sigma") to 1-based source lines.
class LineIndex {
 public:
  LineIndex() = default;
  explicit LineIndex(const std::string& text);

  [[nodiscard]] std::optional<int> line(const std::string& pointer) const;

 private:
  std::map<std::string, int> lines_;
};

struct McSettings {
  std::size_t n_samples = 2000;
  std::uint64_t seed = 1;
  std::size_t n_perm = 499;
};

struct FdSettings {
  std::size_t pivot = 0;
  std::size_t trials = 50;
  bool symmetrize = true;
};

struct DensitySettings {
  std::size_t index = 0;
  int points = 401;
};

struct Z2Settings {
  std::string mode = "proposition";
  std::size_t n_max = 2;
  std::vector<z2::Rational> q_grid;  ///< empty: mode default
};

struct ScenarioConfig {
  std::string source = "<config>";
  std::vector<ThetaParams> distributions;
  Coefficients a, b, c, d;
  bool has_cd = false;
  CharacterGrid grid;
  McSettings mc;
  bool allow_vanishing = false;
  FdSettings fd;
  DensitySettings density;
  Z2Settings z2;
  LineIndex lines;
  std::string pointer_base;  ///< "/config" when read from a report

  /// "source:line: message" for the given JSON pointer.
  [[nodiscard]] ConfigError error_at(const std::string& pointer, const std::string& message) const;

  /// Problem built from distributions and all four coefficient lists.
  /// Throws ConfigError if c/d are missing, lengths disagree, or a law is
  /// not a probability measure.
  [[nodiscard]] FormsProblem forms_problem() const;

  /// Checks distributions and a/b for builders that derive c and d.
  void require_ab() const;
};

ScenarioConfig parse_config(const std::string& text, const std::string& source);
ScenarioConfig load_config(const std::string& path);

/// Normalized echo of the config (all defaults filled in), suitable as input.
nlohmann::json to_json(const ScenarioConfig& config);

nlohmann::json to_json(const ThetaParams& p);
nlohmann::json to_json(const Coefficients& coeffs);

}  // namespace rz2::cli
