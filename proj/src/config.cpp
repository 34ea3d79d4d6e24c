#include "sigtaylor/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace sigtaylor {

namespace {

std::string trim(const std::string& s) {
  const auto from = s.find_first_not_of(" \t\r\n");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r\n");
  return s.substr(from, to - from + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double parse_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw ConfigError("key '" + key + "' is not a number: '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  const int i = static_cast<int>(std::lround(v));
  if (std::abs(v - i) > 1e-9)
    throw ConfigError("key '" + key + "' is not an integer: '" + text + "'");
  return i;
}

}  // namespace

Config Config::parse(std::istream& in) {
  Config c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        " has no '=': '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        " has an empty key");
    c.kv_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse(in);
}

void Config::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

std::string Config::get(const std::string& key,
                        const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  return parse_double(key, get(key));
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : parse_double(key, it->second);
}

int Config::get_int(const std::string& key) const {
  return parse_int(key, get(key));
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : parse_int(key, it->second);
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& item : split(get(key), ','))
    out.push_back(parse_double(key, item));
  return out;
}

std::vector<int> Config::get_ints(const std::string& key) const {
  std::vector<int> out;
  for (const std::string& item : split(get(key), ','))
    out.push_back(parse_int(key, item));
  return out;
}

unsigned long long Config::seed() const {
  const auto it = kv_.find("seed");
  if (it == kv_.end()) return 42;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(it->second.c_str(), &end, 10);
  if (end == it->second.c_str() || *end != '\0' || errno != 0)
    throw ConfigError("key 'seed' is not an unsigned integer: '" +
                      it->second + "'");
  return v;
}

PLPath zigzag_driver(int d, int segments, double amplitude) {
  if (d < 1) throw ConfigError("zigzag driver needs d >= 1");
  if (segments < 1) throw ConfigError("zigzag driver needs >= 1 segment");
  if (!(amplitude > 0.0)) throw ConfigError("zigzag amplitude must be > 0");
  std::vector<double> times(static_cast<std::size_t>(segments) + 1);
  Eigen::MatrixXd vals(d, segments + 1);
  const auto tri = [](double u) {
    const double frac = u - std::floor(u);
    return 4.0 * std::abs(frac - 0.5) - 1.0;
  };
  for (int k = 0; k <= segments; ++k) {
    const double t = static_cast<double>(k) / segments;
    times[static_cast<std::size_t>(k)] = t;
    for (int i = 1; i <= d; ++i) {
      const double phase = (i - 1) / 4.0;
      vals(i - 1, k) =
          amplitude * (tri(i * t + phase) - tri(phase));
    }
  }
  return PLPath(std::move(times), std::move(vals));
}

PLPath midpoint_driver(int d, int depth, double sigma,
                       const std::vector<int>& rough_components,
                       unsigned long long seed) {
  if (d < 1) throw ConfigError("midpoint driver needs d >= 1");
  if (depth < 1 || depth > 16)
    throw ConfigError("midpoint depth must lie in 1..16");
  if (!(sigma > 0.0)) throw ConfigError("midpoint sigma must be > 0");
  for (int i : rough_components)
    if (i < 1 || i > d)
      throw ConfigError("rough component index outside 1..d");

  const int n = 1 << depth;
  std::vector<double> times(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k)
    times[static_cast<std::size_t>(k)] = static_cast<double>(k) / n;

  Eigen::MatrixXd vals(d, n + 1);
  for (int i = 1; i <= d; ++i) {
    const bool rough = std::find(rough_components.begin(),
                                 rough_components.end(),
                                 i) != rough_components.end();
    if (!rough) {
      for (int k = 0; k <= n; ++k) vals(i - 1, k) = times[k];
      continue;
    }
    // Midpoint displacement with Brownian scaling: each level fills the
    // midpoints with mean of the neighbours plus a sqrt(spacing)/2 kick,
    // from a per-component stream so components stay independent.
    std::mt19937_64 rng(seed * 1000003ULL + static_cast<unsigned>(i));
    std::normal_distribution<double> gauss;
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    v[static_cast<std::size_t>(n)] = sigma * gauss(rng);
    for (int level = 0; level < depth; ++level) {
      const int stride = n >> level;
      const double spacing = 1.0 / (1 << level);
      const double kick = sigma * std::sqrt(spacing) / 2.0;
      for (int a = 0; a < n; a += stride) {
        const int mid = a + stride / 2;
        v[static_cast<std::size_t>(mid)] =
            0.5 * (v[static_cast<std::size_t>(a)] +
                   v[static_cast<std::size_t>(a + stride)]) +
            kick * gauss(rng);
      }
    }
    for (int k = 0; k <= n; ++k) vals(i - 1, k) = v[static_cast<std::size_t>(k)];
  }
  return PLPath(std::move(times), std::move(vals));
}

PiIndex pi_from_config(const Config& c) {
  const int d = c.get_int("pi.d");
  const double p = c.get_double("pi.p");
  if (c.has("pi.k")) {
    std::vector<int> ks = c.get_ints("pi.k");
    if (static_cast<int>(ks.size()) != d)
      throw ConfigError("pi.k needs exactly pi.d entries");
    return PiIndex::uniform(p, std::move(ks));
  }
  return PiIndex::homogeneous(p, d);
}

namespace {

ComponentPtr component_from_config(const Config& c, const std::string& prefix,
                                   int dim_hint) {
  const std::string family = c.get(prefix + ".family");
  if (family == "linear") {
    const std::vector<double> flat = c.get_doubles(prefix + ".matrix");
    const int n = static_cast<int>(std::lround(std::sqrt(
        static_cast<double>(flat.size()))));
    if (n * n != static_cast<int>(flat.size()))
      throw ConfigError(prefix + ".matrix needs a square count of entries");
    Eigen::MatrixXd A(n, n);
    for (int r = 0; r < n; ++r)
      for (int col = 0; col < n; ++col)
        A(r, col) = flat[static_cast<std::size_t>(r * n + col)];
    Eigen::VectorXd b;
    if (c.has(prefix + ".offset")) {
      const std::vector<double> off = c.get_doubles(prefix + ".offset");
      if (static_cast<int>(off.size()) != n)
        throw ConfigError(prefix + ".offset dimension mismatch");
      b = Eigen::Map<const Eigen::VectorXd>(off.data(), n);
    }
    return linear_component(std::move(A), std::move(b));
  }
  if (family == "rotation")
    return rotation_component(c.get_double(prefix + ".omega", 1.0));
  if (family == "exp_decay")
    return exp_decay_component(c.get_double(prefix + ".scale", 1.0),
                               c.get_double(prefix + ".rate", 1.0));
  if (family == "constant") {
    const std::vector<double> cv = c.get_doubles(prefix + ".values");
    return constant_component(
        Eigen::Map<const Eigen::VectorXd>(cv.data(),
                                          static_cast<Eigen::Index>(cv.size())));
  }
  if (family == "polynomial") {
    const int n = c.get_int(prefix + ".dim", dim_hint);
    if (n < 1) throw ConfigError(prefix + ".dim must be >= 1");
    std::vector<std::vector<Monomial>> rows(static_cast<std::size_t>(n));
    for (int j = 1;; ++j) {
      const std::string key = prefix + ".term." + std::to_string(j);
      if (!c.has(key)) {
        if (j == 1) throw ConfigError(prefix + " polynomial needs term.1");
        break;
      }
      // row:coeff:p1,p2,...,pn
      const std::string text = c.get(key);
      const auto c1 = text.find(':');
      const auto c2 = text.find(':', c1 == std::string::npos ? 0 : c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw ConfigError(key + " must look like row:coeff:p1,...,pn");
      const int row = parse_int(key, trim(text.substr(0, c1)));
      if (row < 1 || row > n)
        throw ConfigError(key + " row index outside 1..dim");
      Monomial m;
      m.coeff = parse_double(key, trim(text.substr(c1 + 1, c2 - c1 - 1)));
      for (const std::string& e : split(text.substr(c2 + 1), ','))
        m.powers.push_back(parse_int(key, e));
      if (static_cast<int>(m.powers.size()) != n)
        throw ConfigError(key + " needs one power per state coordinate");
      rows[static_cast<std::size_t>(row - 1)].push_back(std::move(m));
    }
    return polynomial_component(std::move(rows));
  }
  throw ConfigError(prefix + ".family '" + family + "' is not known");
}

}  // namespace

SmoothVectorField field_from_config(const Config& c, int d) {
  std::vector<ComponentPtr> comps;
  std::vector<double> gammas;
  int dim_hint = 0;
  for (int i = 1; i <= d; ++i) {
    const std::string prefix = "field." + std::to_string(i);
    comps.push_back(component_from_config(c, prefix, dim_hint));
    dim_hint = comps.back()->dim();
    gammas.push_back(c.get_double(prefix + ".gamma"));
  }
  const int n = comps.front()->dim();
  Box box = [&] {
    if (c.has("field.box.lo") || c.has("field.box.hi")) {
      const std::vector<double> lo = c.get_doubles("field.box.lo");
      const std::vector<double> hi = c.get_doubles("field.box.hi");
      if (static_cast<int>(lo.size()) != n ||
          static_cast<int>(hi.size()) != n)
        throw ConfigError("field.box.lo/hi need one entry per coordinate");
      return Box(Eigen::Map<const Eigen::VectorXd>(lo.data(), n),
                 Eigen::Map<const Eigen::VectorXd>(hi.data(), n));
    }
    return Box::centered(n, c.get_double("field.box.radius", 5.0));
  }();
  return SmoothVectorField(std::move(comps), std::move(gammas),
                           std::move(box));
}

PLPath driver_from_config(const Config& c, int d, unsigned long long seed) {
  const std::string kind = c.get("driver.kind");
  if (kind == "file") {
    const std::string path = c.get("driver.path");
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open driver file '" + path + "'");
    PLPath x = PLPath::from_csv(in);
    if (x.dimension() != d)
      throw ConfigError("driver file dimension does not match pi.d");
    return x;
  }
  if (kind == "points") {
    const std::vector<double> times = c.get_doubles("driver.times");
    const std::vector<std::string> rows = split(c.get("driver.values"), ';');
    if (static_cast<int>(rows.size()) != d)
      throw ConfigError("driver.values needs pi.d ';'-separated rows");
    Eigen::MatrixXd vals(d, static_cast<Eigen::Index>(times.size()));
    for (int i = 0; i < d; ++i) {
      std::vector<double> row;
      for (const std::string& item : split(rows[static_cast<std::size_t>(i)],
                                           ','))
        row.push_back(parse_double("driver.values", item));
      if (row.size() != times.size())
        throw ConfigError("driver.values row length must match driver.times");
      for (std::size_t k = 0; k < row.size(); ++k)
        vals(i, static_cast<Eigen::Index>(k)) = row[k];
    }
    return PLPath(times, std::move(vals));
  }
  if (kind == "zigzag")
    return zigzag_driver(d, c.get_int("driver.segments", 8),
                         c.get_double("driver.amplitude", 1.0));
  if (kind == "midpoint") {
    std::vector<int> rough = {1};
    if (c.has("driver.rough")) rough = c.get_ints("driver.rough");
    return midpoint_driver(d, c.get_int("driver.depth", 11),
                           c.get_double("driver.sigma", 1.0), rough, seed);
  }
  throw ConfigError("driver.kind '" + kind + "' is not known");
}

int Experiment::order() const {
  if (n_override) return *n_override;
  return admissible_params(ix, gammas).N;
}

Experiment assemble_experiment(const Config& c) {
  PiIndex ix = pi_from_config(c);
  const int d = ix.dimension();
  SmoothVectorField field = field_from_config(c, d);
  PLPath driver = driver_from_config(c, d, c.seed());

  std::vector<double> gammas;
  for (int i = 1; i <= d; ++i)
    gammas.push_back(c.get_double("field." + std::to_string(i) + ".gamma"));

  Eigen::VectorXd xi = Eigen::VectorXd::Zero(field.state_dim());
  if (c.has("run.xi")) {
    const std::vector<double> raw = c.get_doubles("run.xi");
    if (static_cast<int>(raw.size()) != field.state_dim())
      throw ConfigError("run.xi needs one entry per state coordinate");
    xi = Eigen::Map<const Eigen::VectorXd>(raw.data(), field.state_dim());
  }

  std::optional<int> n_override;
  const std::string n_text = c.get("run.N", "auto");
  if (n_text != "auto") {
    const int n_val = parse_int("run.N", n_text);
    if (n_val < 0) throw ConfigError("run.N must be >= 0 or 'auto'");
    n_override = n_val;
  }

  Experiment ex{std::move(ix),
                std::move(gammas),
                std::move(field),
                std::move(driver),
                std::move(xi),
                0.0,
                1.0,
                c.get_int("run.levels", 7),
                c.get_int("run.refine", 2),
                c.get_double("run.tol", 1e-12),
                c.get_double("run.cap", 1.0),
                n_override};
  ex.s = c.get_double("run.s", ex.driver.start());
  ex.t = c.get_double("run.t", ex.driver.end());
  if (!(ex.s < ex.t)) throw ConfigError("run.s must be below run.t");
  if (ex.levels < 1 || ex.levels > 20)
    throw ConfigError("run.levels must lie in 1..20");
  if (ex.refine < 0 || ex.refine > 8)
    throw ConfigError("run.refine must lie in 0..8");
  if (!(ex.tol > 0.0)) throw ConfigError("run.tol must be > 0");
  if (!(ex.cap > 0.0)) throw ConfigError("run.cap must be > 0");
  return ex;
}

}  // namespace sigtaylor
