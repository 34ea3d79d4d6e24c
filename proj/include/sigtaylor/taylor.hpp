#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "sigtaylor/control.hpp"
#include "sigtaylor/group_series.hpp"
#include "sigtaylor/lift.hpp"
#include "sigtaylor/vector_field.hpp"
#include "sigtaylor/words.hpp"

namespace sigtaylor {

/// The trajectory left the field's domain box.
struct DomainExitError : std::runtime_error {
  double exit_time;
  DomainExitError(const std::string& msg, double t)
      : std::runtime_error(msg), exit_time(t) {}
};

/// Ground-truth integration output.
struct SolveResult {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  double tolerance = 0.0;
  long accepted_steps = 0;
  long rejected_steps = 0;
  bool stayed_in_box = true;
};

/// Integrates dy = sum_i f_i(y) dx^i along the piecewise-linear driver with
/// an adaptive fifth-order scheme, sampling the states at out_times (which
/// must be increasing and lie inside the driver's time range).  Local error
/// is controlled to tol; leaving the domain box raises DomainExitError unless
/// strict_domain is false, which only clears stayed_in_box.
SolveResult ode_solve(const SmoothVectorField& field, const PLPath& x,
                      const Eigen::VectorXd& xi,
                      const std::vector<double>& out_times, double tol = 1e-12,
                      bool strict_domain = true);

/// One Taylor step: sum over words of weight 1..N of F^w(y_s) (X_st, w).
/// The Euler truncation of degree at most one is the same sum with
/// N = floor(p).  X_st's basis must reach degree N/p.
Eigen::VectorXd taylor_increment(const SmoothVectorField& field,
                                 const GroupSeries& X_st,
                                 const Eigen::VectorXd& y_s, const PiIndex& ix,
                                 int N);

/// C N! d^{N+1} beta^N omega^{(N+1)/p} / ((N+1)/p)!.
double remainder_bound(const TaylorParams& params, int d, double omega_val,
                       double C = 1.0);

/// C min(omega^theta, omega).
double euler_bound(double theta_val, double omega_val, double C = 1.0);

/// Everything measured about one Taylor step on [s, t].
struct RemainderReport {
  double s = 0.0;
  double t = 0.0;
  int N = 0;
  Eigen::VectorXd taylor;
  Eigen::VectorXd true_increment;
  double remainder = 0.0;  // |true - taylor|
  double omega = 0.0;      // control of the rescaled driver
  double bound = 0.0;      // remainder_bound with C = 1
  double ratio = 0.0;      // remainder / bound (0 when the bound is 0)
  double next_term = 0.0;  // |sum over weight N+1 of F^w(y_s) (X,w)|
};

/// Solves to s and t with the ODE oracle, forms the Taylor increment from the
/// signature over [s, t], and evaluates the bound with omega taken on the
/// driver rescaled by the field's Lipschitz norms.
RemainderReport remainder(const SmoothVectorField& field, const PLPath& x,
                          const Eigen::VectorXd& xi, double s, double t,
                          const TaylorParams& params, double tol = 1e-12,
                          int refine_levels = 2);

struct DecayReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// |(X_st, l)| against beta^{||l||-1} omega^{||l||/p} / (||l||/p)!.
DecayReport factorial_decay_check(const GroupSeries& X_st, const Word& l,
                                  const TaylorParams& params,
                                  double omega_val);

struct NeoclassicalReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// p^{-2} sum_j s^{j/p} t^{(n-j)/p} / ((j/p)! ((n-j)/p)!) against
/// (s+t)^{n/p} / (n/p)!; an identity at p = 1, strict below otherwise.
NeoclassicalReport neoclassical_check(double p, int n, double s, double t);

struct KershawReport {
  std::vector<double> a;       // a_1 .. a_{N_max + 1}
  std::vector<double> ratios;  // sum_{j <= N} a_j / a_{N+1} for N = 1..N_max
  double max_ratio = 0.0;
  int growth_from = 0;  // a_{j+1} > a_j for every j at or beyond this index
};

/// The partial-sum-to-next-term ratios of a_j = (j-1)! beta^{j-1} / (j/p)!,
/// whose boundedness powers the remainder estimate.
KershawReport kershaw_ratio_check(const TaylorParams& params, int N_max);

/// Iterates taylor_increment over the partition times: the step-N scheme.
/// Returns one state per partition time, starting at xi.
std::vector<Eigen::VectorXd> step_scheme(const SmoothVectorField& field,
                                         const SignatureFn& sig,
                                         const std::vector<double>& partition,
                                         const Eigen::VectorXd& xi,
                                         const PiIndex& ix, int N);

}  // namespace sigtaylor
