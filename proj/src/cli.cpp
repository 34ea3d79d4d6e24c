#include "sigtaylor/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "sigtaylor/config.hpp"
#include "sigtaylor/control.hpp"
#include "sigtaylor/suite.hpp"

namespace sigtaylor {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_report(const std::string& out_dir, const std::string& name,
                  const std::string& content, std::ostream& out) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / name).string();
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << content;
  out << "wrote " << path << "\n";
}

/// Driver-level inputs shared by the subcommands that do not need a vector
/// field: grading, driver, window and word-degree cap.
struct DriverSetup {
  PiIndex ix;
  PLPath driver;
  double s = 0.0;
  double t = 0.0;
  double cap = 1.0;
  int refine = 2;
};

DriverSetup driver_setup(const Config& c) {
  PiIndex ix = pi_from_config(c);
  PLPath driver = driver_from_config(c, ix.dimension(), c.seed());
  DriverSetup ds{std::move(ix),
                 std::move(driver),
                 0.0,
                 0.0,
                 c.get_double("run.cap", 1.0),
                 c.get_int("run.refine", 2)};
  ds.s = c.get_double("run.s", ds.driver.start());
  ds.t = c.get_double("run.t", ds.driver.end());
  if (!(ds.s < ds.t)) throw ConfigError("run.s must be below run.t");
  if (!(ds.cap > 0.0)) throw ConfigError("run.cap must be > 0");
  if (ds.refine < 0 || ds.refine > 8)
    throw ConfigError("run.refine must lie in 0..8");
  return ds;
}

std::vector<double> config_gammas(const Config& c, int d) {
  std::vector<double> gammas;
  for (int i = 1; i <= d; ++i)
    gammas.push_back(c.get_double("field." + std::to_string(i) + ".gamma"));
  return gammas;
}

TaylorParams experiment_params(const Experiment& ex) {
  TaylorParams params = admissible_params(ex.ix, ex.gammas);
  if (ex.n_override) params.N = *ex.n_override;
  return params;
}

int cmd_signature(const Config& c, const std::string& out_dir,
                  std::ostream& out) {
  const DriverSetup ds = driver_setup(c);
  const BasisPtr basis = WordBasis::make(ds.ix, ds.cap);
  const GroupSeries X = path_signature(ds.driver, ds.s, ds.t, basis);
  write_report(out_dir, "signature.csv", to_csv(X), out);
  out << "signature over [" << fmt6(ds.s) << ", " << fmt6(ds.t) << "]: "
      << basis->size() << " words up to degree " << fmt6(ds.cap) << "\n";
  return 0;
}

int cmd_shuffle_check(const Config& c, const std::string& out_dir,
                      std::ostream& out) {
  const DriverSetup ds = driver_setup(c);
  const BasisPtr basis = WordBasis::make(ds.ix, ds.cap);
  const GroupSeries X = path_signature(ds.driver, ds.s, ds.t, basis);
  const double defect = shuffle_defect(X);
  const double tol = c.get_double("run.shuffle_tol", 1e-10);
  std::string csv = "quantity,value\n";
  csv += "defect," + fmt17(defect) + "\n";
  csv += "tolerance," + fmt17(tol) + "\n";
  write_report(out_dir, "shuffle.csv", csv, out);
  const bool ok = defect <= tol;
  out << "shuffle defect " << fmt6(defect) << " against tolerance "
      << fmt6(tol) << (ok ? ": group-like\n" : ": VIOLATION\n");
  return ok ? 0 : 1;
}

int cmd_control(const Config& c, const std::string& out_dir,
                std::ostream& out) {
  const DriverSetup ds = driver_setup(c);
  const BasisPtr basis = WordBasis::make(ds.ix, ds.cap);

  // Anchor times: window ends plus interior breakpoints, thinned so the
  // emitted table stays readable and the full-table sweep stays small.
  std::vector<double> anchors{ds.s};
  for (double bt : ds.driver.times)
    if (bt > ds.s + 1e-12 && bt < ds.t - 1e-12) anchors.push_back(bt);
  anchors.push_back(ds.t);
  if (anchors.size() > 33) {
    std::vector<double> thin;
    const std::size_t n = anchors.size();
    for (int j = 0; j <= 32; ++j) {
      const std::size_t idx =
          static_cast<std::size_t>(std::llround(j * double(n - 1) / 32.0));
      if (thin.empty() || anchors[idx] > thin.back()) thin.push_back(anchors[idx]);
    }
    anchors = std::move(thin);
  }
  // Full pair tables cost cubic work in the grid size; cap the refinement so
  // the refined grid stays at or below 257 points.
  int refine = ds.refine;
  while (refine > 0 && ((anchors.size() - 1) << refine) + 1 > 257) --refine;
  std::vector<double> refined = ControlGrid::dyadic_refine(anchors, refine);

  std::optional<SmoothVectorField> field;
  if (c.has("field.1.family")) field = field_from_config(c, ds.ix.dimension());
  const SignatureFn fn =
      field ? make_signature_fn(ds.driver, basis, field->lip_norms())
            : make_signature_fn(ds.driver, basis);
  const ControlGrid grid(std::move(refined), fn, basis);

  std::vector<Word> words;
  for (std::size_t i = 0; i < basis->size(); ++i)
    if (basis->word(i).length() > 0) words.push_back(basis->word(i));
  const std::vector<Eigen::MatrixXd> tables = variation_tables(grid, words);
  const Eigen::MatrixXd omega = omega_table(grid, ds.cap);

  std::vector<std::size_t> at;
  for (double a : anchors) at.push_back(grid.index_of(a));

  struct VarRow {
    double s, t;
    std::string w;
    double v;
  };
  std::vector<VarRow> vrows;
  for (std::size_t wi = 0; wi < words.size(); ++wi)
    for (std::size_t a = 0; a + 1 < at.size(); ++a)
      for (std::size_t b = a + 1; b < at.size(); ++b)
        vrows.push_back({anchors[a], anchors[b], words[wi].str(),
                         tables[wi](static_cast<Eigen::Index>(at[a]),
                                    static_cast<Eigen::Index>(at[b]))});
  std::sort(vrows.begin(), vrows.end(), [](const VarRow& x, const VarRow& y) {
    if (x.s != y.s) return x.s < y.s;
    if (x.t != y.t) return x.t < y.t;
    return x.w < y.w;
  });
  std::string vcsv = "s,t,word,variation\n";
  for (const VarRow& r : vrows)
    vcsv += fmt17(r.s) + "," + fmt17(r.t) + "," + r.w + "," + fmt17(r.v) + "\n";
  write_report(out_dir, "control_variations.csv", vcsv, out);

  std::string ocsv = "s,t,omega\n";
  for (std::size_t a = 0; a + 1 < at.size(); ++a)
    for (std::size_t b = a + 1; b < at.size(); ++b)
      ocsv += fmt17(anchors[a]) + "," + fmt17(anchors[b]) + "," +
              fmt17(omega(static_cast<Eigen::Index>(at[a]),
                          static_cast<Eigen::Index>(at[b]))) +
              "\n";
  write_report(out_dir, "control_omega.csv", ocsv, out);

  out << "control tables on " << anchors.size() << " anchor times ("
      << grid.size() << " grid points, refinement " << refine << "), omega["
      << fmt6(ds.s) << ", " << fmt6(ds.t) << "] = "
      << fmt6(omega(static_cast<Eigen::Index>(at.front()),
                    static_cast<Eigen::Index>(at.back())))
      << "\n";
  return 0;
}

int cmd_params(const Config& c, const std::string& out_dir,
               std::ostream& out) {
  const PiIndex ix = pi_from_config(c);
  const TaylorParams params =
      admissible_params(ix, config_gammas(c, ix.dimension()));
  const std::string json = render_params_json(params);
  write_report(out_dir, "params.json", json, out);
  out << json;
  return 0;
}

int cmd_taylor(const Config& c, const std::string& out_dir,
               std::ostream& out) {
  const Experiment ex = assemble_experiment(c);
  const TaylorParams params = experiment_params(ex);

  std::vector<RemainderReport> reps;
  for (int k = ex.levels - 1; k >= 0; --k) {
    const double tk = ex.s + (ex.t - ex.s) * std::ldexp(1.0, -k);
    reps.push_back(
        remainder(ex.field, ex.driver, ex.xi, ex.s, tk, params, ex.tol,
                  ex.refine));
  }
  write_report(out_dir, "taylor.csv", render_remainder_csv(reps), out);

  std::vector<double> lx, ly;
  double max_ratio = 0.0;
  for (const RemainderReport& r : reps) {
    max_ratio = std::max(max_ratio, r.ratio);
    out << "  [" << fmt6(r.s) << ", " << fmt6(r.t) << "] remainder "
        << fmt6(r.remainder) << " bound " << fmt6(r.bound) << " ratio "
        << fmt6(r.ratio) << "\n";
    if (r.omega >= 1e-10 && r.next_term > 0.0 && r.remainder > 0.0) {
      lx.push_back(std::log(r.omega));
      ly.push_back(std::log(r.remainder));
    }
  }
  const double expected = (params.N + 1) / params.p;
  bool pass = true;
  double slope = std::numeric_limits<double>::quiet_NaN();
  if (lx.size() >= 3) {
    slope = least_squares_slope(lx, ly);
    pass = std::abs(slope - expected) <= 0.3;
  }

  nlohmann::ordered_json j;
  j["N"] = params.N;
  j["expected_slope"] = expected;
  if (lx.size() >= 3)
    j["slope"] = slope;
  else
    j["slope"] = nullptr;
  j["windows"] = static_cast<int>(reps.size());
  j["usable_windows"] = static_cast<int>(lx.size());
  j["max_ratio"] = max_ratio;
  j["pass"] = pass;
  write_report(out_dir, "taylor_summary.json", j.dump(2) + "\n", out);

  if (lx.size() >= 3)
    out << "remainder order " << fmt6(slope) << " against expected "
        << fmt6(expected) << (pass ? ": PASS\n" : ": FAIL\n");
  else
    out << "too few usable windows for an order fit (" << lx.size()
        << "); bounds max ratio " << fmt6(max_ratio) << "\n";
  return pass ? 0 : 1;
}

int cmd_decay(const Config& c, const std::string& out_dir, std::ostream& out) {
  const Experiment ex = assemble_experiment(c);
  const TaylorParams params = experiment_params(ex);
  const double cap = (params.N + 1) / params.p;
  const BasisPtr basis = WordBasis::make(ex.ix, cap);
  const GroupSeries X = rescale_signal(
      path_signature(ex.driver, ex.s, ex.t, basis), ex.field.lip_norms());

  double omega_val;
  if (c.has("run.omega")) {
    omega_val = c.get_double("run.omega");
  } else {
    const BasisPtr ctl = WordBasis::make(ex.ix, 1.0);
    const ControlGrid grid = make_control_grid(
        ex.driver, ctl, ex.s, ex.t, ex.refine, &ex.field.lip_norms());
    omega_val = control_omega(grid, ex.s, ex.t);
  }

  std::string csv = "word,lhs,rhs,pass\n";
  int rows = 0;
  int violations = 0;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const Word& w = basis->word(i);
    if (w.length() == 0) continue;
    const DecayReport rep = factorial_decay_check(X, w, params, omega_val);
    csv += w.str() + "," + fmt17(rep.lhs) + "," + fmt17(rep.rhs) + "," +
           (rep.pass ? "1" : "0") + "\n";
    ++rows;
    if (!rep.pass) ++violations;
  }
  write_report(out_dir, "decay.csv", csv, out);
  out << "factorial decay with omega " << fmt6(omega_val) << ": " << rows
      << " words, " << violations << " violations\n";
  return violations == 0 ? 0 : 1;
}

int cmd_neoclassical(const Config& c, const std::string& out_dir,
                     std::ostream& out) {
  std::vector<double> ps{1.0, 1.5, 2.0, 3.0, 4.0};
  if (c.has("neo.p")) ps = c.get_doubles("neo.p");
  const int nmax = c.get_int("neo.nmax", 10);
  const int grid_n = c.get_int("neo.grid", 10);
  const double tmax = c.get_double("neo.max", 2.0);
  if (nmax < 0) throw ConfigError("neo.nmax must be >= 0");
  if (grid_n < 2) throw ConfigError("neo.grid must be >= 2");
  if (!(tmax > 0.0)) throw ConfigError("neo.max must be > 0");

  std::string csv = "p,n,s,t,lhs,rhs,pass\n";
  int rows = 0;
  int violations = 0;
  for (double p : ps)
    for (int n = 0; n <= nmax; ++n)
      for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j) {
          const double s = i * tmax / (grid_n - 1);
          const double t = j * tmax / (grid_n - 1);
          const NeoclassicalReport rep = neoclassical_check(p, n, s, t);
          bool ok = rep.pass;
          // The inequality collapses to an identity at p = 1.
          if (p == 1.0 && std::abs(rep.lhs - rep.rhs) > 1e-12 * (1.0 + rep.rhs))
            ok = false;
          csv += fmt17(p) + "," + std::to_string(n) + "," + fmt17(s) + "," +
                 fmt17(t) + "," + fmt17(rep.lhs) + "," + fmt17(rep.rhs) + "," +
                 (ok ? "1" : "0") + "\n";
          ++rows;
          if (!ok) ++violations;
        }
  write_report(out_dir, "neoclassical.csv", csv, out);
  out << "neoclassical inequality: " << rows << " instances, " << violations
      << " violations\n";
  return violations == 0 ? 0 : 1;
}

int cmd_kershaw(const Config& c, const std::string& out_dir,
                std::ostream& out) {
  const PiIndex ix = pi_from_config(c);
  const TaylorParams params =
      admissible_params(ix, config_gammas(c, ix.dimension()));
  const int nmax = c.get_int("kershaw.nmax", 30);
  const KershawReport rep = kershaw_ratio_check(params, nmax);

  std::string csv = "N,a,ratio\n";
  for (int j = 1; j <= nmax; ++j)
    csv += std::to_string(j) + "," +
           fmt17(rep.a[static_cast<std::size_t>(j - 1)]) + "," +
           fmt17(rep.ratios[static_cast<std::size_t>(j - 1)]) + "\n";
  write_report(out_dir, "kershaw.csv", csv, out);

  // Bounded ratios show up as a tail that never sets a new maximum.
  double head_max = 0.0;
  for (std::size_t i = 0; i + 1 < rep.ratios.size(); ++i)
    head_max = std::max(head_max, rep.ratios[i]);
  const bool ok = rep.ratios.back() <= head_max + 1e-15;
  out << "kershaw ratios up to N = " << nmax << ": max " << fmt6(rep.max_ratio)
      << ", terms grow from index " << rep.growth_from
      << (ok ? "; tail bounded\n" : "; tail still rising: FAIL\n");
  return ok ? 0 : 1;
}

int cmd_suite(const Config& c, const std::string& out_dir, std::ostream& out) {
  const SuiteResult res =
      run_acceptance_suite(c.seed(), c.get_int("run.refine", 2), out);

  nlohmann::ordered_json j;
  j["all_pass"] = res.all_pass();
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CriterionResult& cr : res.criteria) {
    nlohmann::ordered_json e;
    e["index"] = cr.index;
    e["name"] = cr.name;
    e["pass"] = cr.pass;
    e["detail"] = cr.detail;
    e["seconds"] = cr.seconds;
    arr.push_back(e);
  }
  j["criteria"] = arr;
  nlohmann::ordered_json inst;
  for (const auto& [module, count] : res.property_instances)
    inst[module] = count;
  j["property_instances"] = inst;
  write_report(out_dir, "suite_report.json", j.dump(2) + "\n", out);
  return res.all_pass() ? 0 : 1;
}

}  // namespace

std::string render_params_json(const TaylorParams& params) {
  nlohmann::ordered_json j;
  j["d"] = params.ix.dimension();
  j["p"] = params.p;
  std::vector<int> ks;
  std::vector<double> ps;
  for (int i = 1; i <= params.ix.dimension(); ++i) {
    ks.push_back(params.ix.k(i));
    ps.push_back(params.ix.p(i));
  }
  j["k"] = ks;
  j["p_i"] = ps;
  j["gammas"] = params.gamma_list;
  j["gamma"] = params.gamma;
  j["N"] = params.N;
  j["theta"] = params.theta;
  j["beta"] = params.beta;
  return j.dump(2) + "\n";
}

std::string render_remainder_csv(const std::vector<RemainderReport>& rows) {
  std::string csv = "s,t,N,omega,remainder,bound,ratio,next_term\n";
  for (const RemainderReport& r : rows)
    csv += fmt17(r.s) + "," + fmt17(r.t) + "," + std::to_string(r.N) + "," +
           fmt17(r.omega) + "," + fmt17(r.remainder) + "," + fmt17(r.bound) +
           "," + fmt17(r.ratio) + "," + fmt17(r.next_term) + "\n";
  return csv;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Rough-path signatures, controls and Taylor-scheme "
               "remainder checks"};
  app.name("sigtaylor");
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  unsigned long long seed_value = 0;
  int refine_value = 0;
  app.add_option("--config", config_path,
                 "configuration file (flat key = value lines)");
  app.add_option("--out", out_dir, "directory for report files");
  CLI::Option* seed_opt =
      app.add_option("--seed", seed_value, "override the configured seed");
  CLI::Option* refine_opt = app.add_option(
      "--refine", refine_value, "override run.refine (control refinement)");

  const std::vector<std::pair<std::string, std::string>> subs{
      {"signature", "emit the driver's truncated signature as CSV"},
      {"shuffle-check", "certify the signature is group-like"},
      {"control", "emit word-variation and control tables"},
      {"params", "derive scheme parameters from the grading"},
      {"taylor", "measure Taylor remainders on shrinking windows"},
      {"decay", "check factorial decay of signature coefficients"},
      {"neoclassical", "check the graded binomial inequality"},
      {"kershaw", "check boundedness of the bound's ratio sequence"},
      {"suite", "run the full acceptance suite"},
  };
  for (const auto& [name, desc] : subs)
    app.add_subcommand(name, desc)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Config cfg =
        config_path.empty() ? Config() : Config::load(config_path);
    if (seed_opt->count() > 0) cfg.set("seed", std::to_string(seed_value));
    if (refine_opt->count() > 0)
      cfg.set("run.refine", std::to_string(refine_value));

    const std::string name = app.get_subcommands().at(0)->get_name();
    if (name == "signature") return cmd_signature(cfg, out_dir, out);
    if (name == "shuffle-check") return cmd_shuffle_check(cfg, out_dir, out);
    if (name == "control") return cmd_control(cfg, out_dir, out);
    if (name == "params") return cmd_params(cfg, out_dir, out);
    if (name == "taylor") return cmd_taylor(cfg, out_dir, out);
    if (name == "decay") return cmd_decay(cfg, out_dir, out);
    if (name == "neoclassical") return cmd_neoclassical(cfg, out_dir, out);
    if (name == "kershaw") return cmd_kershaw(cfg, out_dir, out);
    if (name == "suite") return cmd_suite(cfg, out_dir, out);
    err << "error: unhandled subcommand '" << name << "'\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace sigtaylor
