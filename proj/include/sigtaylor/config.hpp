#pragma once

#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigtaylor/taylor.hpp"

namespace sigtaylor {

/// A config file could not be read, or a value is missing or malformed.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key-value store with dotted section keys (pi.d = 2,
/// field.1.family = exp_decay).  Lines are "key = value"; '#' starts a
/// comment; later assignments win.
class Config {
 public:
  Config() = default;

  static Config parse(std::istream& in);
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;

  unsigned long long seed() const;  // "seed" key, default 42

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

/// Deterministic kinked driver on [0, 1]: component i is a triangle wave of
/// frequency i, shifted per component, scaled to the given amplitude.
PLPath zigzag_driver(int d, int segments, double amplitude = 1.0);

/// Multiscale driver on [0, 1] with 2^depth segments: the listed components
/// are built by seeded midpoint displacement (increments of size sqrt(h)
/// across all scales, Brownian-like); the remaining components drift as t.
PLPath midpoint_driver(int d, int depth, double sigma,
                       const std::vector<int>& rough_components,
                       unsigned long long seed);

/// Everything a subcommand needs, assembled from a Config.
struct Experiment {
  PiIndex ix;
  std::vector<double> gammas;
  SmoothVectorField field;
  PLPath driver;
  Eigen::VectorXd xi;
  double s = 0.0;
  double t = 1.0;
  int levels = 7;        // dyadic interval levels for remainder sweeps
  int refine = 2;        // control-grid refinement
  double tol = 1e-12;    // ODE oracle tolerance
  double cap = 1.0;      // series cap for signature/control emissions
  std::optional<int> n_override;  // run.N unless "auto"

  /// run.N when given, otherwise the admissible order for the gammas.
  int order() const;
};

PiIndex pi_from_config(const Config& c);
SmoothVectorField field_from_config(const Config& c, int d);
PLPath driver_from_config(const Config& c, int d, unsigned long long seed);
Experiment assemble_experiment(const Config& c);

}  // namespace sigtaylor
