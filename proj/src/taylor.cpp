#include "sigtaylor/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sigtaylor {

namespace {

constexpr double kStopTol = 1e-12;

std::string exit_message(double t) {
  char buf[96];
  std::snprintf(buf, sizeof buf,
                "trajectory left the domain box at t = %.12g", t);
  return buf;
}

/// One adaptive Dormand-Prince 5(4) sweep from t to target with a fixed
/// driver velocity (the right-hand side is autonomous within a segment).
/// h carries the accepted step size across calls.
void advance(const SmoothVectorField& field, const Eigen::VectorXd& velocity,
             double& t, double target, Eigen::VectorXd& y, double tol,
             double& h, SolveResult& res, bool strict_domain) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  while (target - t > kStopTol * (1.0 + std::abs(target))) {
    h = std::min(h, target - t);
    const Eigen::VectorXd k1 = field.drift(y, velocity);
    const Eigen::VectorXd k2 = field.drift(y + h * (a21 * k1), velocity);
    const Eigen::VectorXd k3 =
        field.drift(y + h * (a31 * k1 + a32 * k2), velocity);
    const Eigen::VectorXd k4 =
        field.drift(y + h * (a41 * k1 + a42 * k2 + a43 * k3), velocity);
    const Eigen::VectorXd k5 = field.drift(
        y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), velocity);
    const Eigen::VectorXd k6 = field.drift(
        y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5),
        velocity);
    const Eigen::VectorXd y5 =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXd k7 = field.drift(y5, velocity);
    const Eigen::VectorXd err =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const double scale = tol * (1.0 + y.lpNorm<Eigen::Infinity>());
    const double ratio = err.lpNorm<Eigen::Infinity>() / scale;
    if (ratio <= 1.0) {
      t += h;
      y = y5;
      ++res.accepted_steps;
      if (!field.domain().contains(y)) {
        res.stayed_in_box = false;
        if (strict_domain) throw DomainExitError(exit_message(t), t);
      }
    } else {
      ++res.rejected_steps;
    }
    const double factor =
        ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2)
                    : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (!(h > 1e-14 * std::max(1.0, std::abs(t))))
      throw std::runtime_error("integration step size underflow");
  }
  t = target;
}

}  // namespace

SolveResult ode_solve(const SmoothVectorField& field, const PLPath& x,
                      const Eigen::VectorXd& xi,
                      const std::vector<double>& out_times, double tol,
                      bool strict_domain) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (out_times.empty())
    throw std::invalid_argument("at least one output time required");
  if (x.dimension() != field.driver_dim())
    throw std::invalid_argument("driver and field dimensions differ");
  if (xi.size() != field.state_dim())
    throw std::invalid_argument("initial state dimension mismatch");
  for (std::size_t i = 0; i + 1 < out_times.size(); ++i)
    if (!(out_times[i] < out_times[i + 1]))
      throw std::invalid_argument("output times must be increasing");
  if (out_times.front() < x.start() - kStopTol ||
      out_times.back() > x.end() + kStopTol)
    throw std::invalid_argument("output times outside the driver range");

  SolveResult res;
  res.tolerance = tol;
  if (!field.domain().contains(xi)) {
    res.stayed_in_box = false;
    if (strict_domain) throw DomainExitError(exit_message(x.start()), x.start());
  }

  // Stop at every breakpoint (the velocity changes) and every output time.
  std::vector<double> stops = out_times;
  for (double bp : x.times)
    if (bp > x.start() + kStopTol && bp < out_times.back() - kStopTol)
      stops.push_back(bp);
  std::sort(stops.begin(), stops.end());

  double t = x.start();
  Eigen::VectorXd y = xi;
  double h = std::max(x.end() - x.start(), kStopTol);
  std::size_t next_out = 0;
  int segment = 0;
  for (double stop : stops) {
    if (stop > t + kStopTol) {
      while (segment + 1 < x.segments() && x.times[segment + 1] <= t + kStopTol)
        ++segment;
      advance(field, x.velocity(segment), t, stop, y, tol, h, res,
              strict_domain);
    }
    while (next_out < out_times.size() &&
           std::abs(out_times[next_out] - stop) <= kStopTol) {
      res.times.push_back(out_times[next_out]);
      res.states.push_back(y);
      ++next_out;
    }
  }
  if (next_out != out_times.size())
    throw std::logic_error("an output time was not reached");
  return res;
}

Eigen::VectorXd taylor_increment(const SmoothVectorField& field,
                                 const GroupSeries& X_st,
                                 const Eigen::VectorXd& y_s, const PiIndex& ix,
                                 int N) {
  if (N < 0) throw std::invalid_argument("step order must be >= 0");
  const BasisPtr& basis = X_st.basis();
  if (basis->grading() != ix)
    throw std::invalid_argument("signature grading mismatch");
  if (!ix.uniform_graded())
    throw std::invalid_argument("word weights need the uniform grading");
  const double p = ix.uniform_p();
  if (basis->cap() + kDegreeTol < N / p) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "series cap %.6g does not reach degree %.6g", basis->cap(),
                  N / p);
    throw CapabilityError(buf);
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(field.state_dim());
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const Word& w = basis->word(i);
    if (w.empty()) continue;
    if (weight(w, ix) > N) {
      // Words are ordered by degree, so the weight cap is final.
      break;
    }
    const double c = X_st[i];
    if (c == 0.0) continue;
    out += c * compose_F(field, w, y_s);
  }
  return out;
}

double remainder_bound(const TaylorParams& params, int d, double omega_val,
                       double C) {
  if (d < 1) throw std::invalid_argument("driver dimension must be >= 1");
  if (omega_val < 0.0)
    throw std::invalid_argument("control values are nonnegative");
  const double expnt = (params.N + 1) / params.p;
  return C * fractional_factorial(params.N) * std::pow(d, params.N + 1) *
         std::pow(params.beta, params.N) * std::pow(omega_val, expnt) /
         fractional_factorial(expnt);
}

double euler_bound(double theta_val, double omega_val, double C) {
  if (omega_val < 0.0)
    throw std::invalid_argument("control values are nonnegative");
  return C * std::min(std::pow(omega_val, theta_val), omega_val);
}

RemainderReport remainder(const SmoothVectorField& field, const PLPath& x,
                          const Eigen::VectorXd& xi, double s, double t,
                          const TaylorParams& params, double tol,
                          int refine_levels) {
  if (!(s < t))
    throw std::invalid_argument("interval must satisfy s < t");
  const PiIndex& ix = params.ix;
  if (ix.dimension() != x.dimension())
    throw std::invalid_argument("grading and driver dimensions differ");

  const SolveResult sol = s > x.start() + kStopTol
                              ? ode_solve(field, x, xi, {s, t}, tol)
                              : ode_solve(field, x, xi, {x.start(), t}, tol);
  const Eigen::VectorXd& y_s = sol.states.front();
  const Eigen::VectorXd& y_t = sol.states.back();

  RemainderReport report;
  report.s = s;
  report.t = t;
  report.N = params.N;

  BasisPtr basis = WordBasis::make(ix, (params.N + 1) / params.p);
  const GroupSeries X = path_signature(x, s, t, basis);
  report.taylor = taylor_increment(field, X, y_s, ix, params.N);
  report.true_increment = y_t - y_s;
  report.remainder = (report.true_increment - report.taylor).norm();

  Eigen::VectorXd next = Eigen::VectorXd::Zero(field.state_dim());
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const Word& w = basis->word(i);
    if (w.empty() || weight(w, ix) != params.N + 1) continue;
    const double c = X[i];
    if (c == 0.0) continue;
    next += c * compose_F(field, w, y_s);
  }
  report.next_term = next.norm();

  const BasisPtr ctl_basis = WordBasis::make(ix, 1.0);
  const Eigen::VectorXd& lip = field.lip_norms();
  const ControlGrid grid =
      make_control_grid(x, ctl_basis, s, t, refine_levels, &lip);
  report.omega = control_omega(grid, s, t);
  report.bound = remainder_bound(params, field.driver_dim(), report.omega);
  report.ratio = report.bound > 0.0 ? report.remainder / report.bound : 0.0;
  return report;
}

DecayReport factorial_decay_check(const GroupSeries& X_st, const Word& l,
                                  const TaylorParams& params,
                                  double omega_val) {
  if (l.empty())
    throw std::invalid_argument("the decay bound concerns nonempty words");
  if (omega_val < 0.0)
    throw std::invalid_argument("control values are nonnegative");
  const double wl = static_cast<double>(weight(l, params.ix));
  DecayReport report;
  report.lhs = std::abs(X_st.coeff(l));
  report.rhs = std::pow(params.beta, wl - 1.0) *
               std::pow(omega_val, wl / params.p) /
               fractional_factorial(wl / params.p);
  report.pass = report.lhs <= report.rhs + 1e-12 * (1.0 + report.rhs);
  return report;
}

NeoclassicalReport neoclassical_check(double p, int n, double s, double t) {
  if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (s < 0.0 || t < 0.0)
    throw std::invalid_argument("s and t must be nonnegative");
  NeoclassicalReport report;
  double sum = 0.0;
  for (int j = 0; j <= n; ++j) {
    sum += std::pow(s, j / p) * std::pow(t, (n - j) / p) /
           (fractional_factorial(j / p) * fractional_factorial((n - j) / p));
  }
  report.lhs = sum / (p * p);
  report.rhs = std::pow(s + t, n / p) / fractional_factorial(n / p);
  report.pass = report.lhs <= report.rhs + 1e-12 * (1.0 + report.rhs);
  return report;
}

KershawReport kershaw_ratio_check(const TaylorParams& params, int N_max) {
  if (N_max < 2) throw std::invalid_argument("N_max must be >= 2");
  KershawReport report;
  report.a.reserve(N_max + 1);
  for (int j = 1; j <= N_max + 1; ++j)
    report.a.push_back(fractional_factorial(j - 1.0) *
                       std::pow(params.beta, j - 1.0) /
                       fractional_factorial(j / params.p));
  double partial = 0.0;
  for (int N = 1; N <= N_max; ++N) {
    partial += report.a[N - 1];
    report.ratios.push_back(partial / report.a[N]);
    report.max_ratio = std::max(report.max_ratio, report.ratios.back());
  }
  report.growth_from = 1;
  for (int j = N_max; j >= 1; --j) {
    if (report.a[j] > report.a[j - 1]) continue;
    report.growth_from = j + 1;
    break;
  }
  return report;
}

std::vector<Eigen::VectorXd> step_scheme(const SmoothVectorField& field,
                                         const SignatureFn& sig,
                                         const std::vector<double>& partition,
                                         const Eigen::VectorXd& xi,
                                         const PiIndex& ix, int N) {
  if (partition.empty())
    throw std::invalid_argument("partition needs >= 1 time");
  for (std::size_t i = 0; i + 1 < partition.size(); ++i)
    if (!(partition[i] < partition[i + 1]))
      throw std::invalid_argument("partition times must be increasing");
  if (!field.domain().contains(xi))
    throw DomainExitError(exit_message(partition.front()), partition.front());
  std::vector<Eigen::VectorXd> trajectory = {xi};
  Eigen::VectorXd y = xi;
  for (std::size_t k = 0; k + 1 < partition.size(); ++k) {
    const GroupSeries X = sig(partition[k], partition[k + 1]);
    y += taylor_increment(field, X, y, ix, N);
    if (!field.domain().contains(y))
      throw DomainExitError(exit_message(partition[k + 1]), partition[k + 1]);
    trajectory.push_back(y);
  }
  return trajectory;
}

}  // namespace sigtaylor
