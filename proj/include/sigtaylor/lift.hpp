#pragma once

#include <Eigen/Core>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "sigtaylor/group_series.hpp"

namespace sigtaylor {

/// Piecewise-linear signal: strictly increasing breakpoint times with one
/// column of values per breakpoint.
struct PLPath {
  std::vector<double> times;
  Eigen::MatrixXd values;  // d rows, one column per breakpoint

  PLPath() = default;
  PLPath(std::vector<double> ts, Eigen::MatrixXd vals);

  int dimension() const { return static_cast<int>(values.rows()); }
  int segments() const { return static_cast<int>(times.size()) - 1; }
  double start() const { return times.front(); }
  double end() const { return times.back(); }

  /// Linear interpolation; t must lie within the time range.
  Eigen::VectorXd at(double t) const;

  /// Constant velocity on segment k (between breakpoints k and k+1).
  Eigen::VectorXd velocity(int segment) const;

  /// Rows "t,x1,...,xd" with that exact header.
  std::string to_csv() const;
  static PLPath from_csv(std::istream& in);
};

/// Signature of one linear piece with increment dx:
/// coefficient of i1..im is dx_{i1} ... dx_{im} / m!.
GroupSeries segment_signature(const Eigen::VectorXd& dx, const BasisPtr& basis);

/// Signature of the path restricted to [s, t], by folding segment signatures
/// with the Chen product; s and t need not be breakpoints.
GroupSeries path_signature(const PLPath& x, double s, double t,
                           const BasisPtr& basis);

/// Coefficient of i1..im multiplied by norms[i1] ... norms[im].
GroupSeries rescale_signal(const GroupSeries& X, const Eigen::VectorXd& norms);

/// Two-parameter multiplicative functional on a time grid.
using SignatureFn = std::function<GroupSeries(double, double)>;

SignatureFn make_signature_fn(PLPath path, BasisPtr basis);
SignatureFn make_signature_fn(PLPath path, BasisPtr basis,
                              Eigen::VectorXd lip_norms);

/// Discrete group path assembled from exponentials of given log-increments.
/// Every exponential must certify group-like under the shuffle test.
class SyntheticGroupPath {
 public:
  SyntheticGroupPath(std::vector<GroupSeries> log_increments,
                     std::vector<double> times = {},
                     double rel_tol = kGroupLikeTol);

  const std::vector<double>& times() const { return times_; }

  /// X_{s,t} for grid times s <= t.
  GroupSeries eval(double s, double t) const;

  SignatureFn fn() const;

 private:
  std::size_t index_of(double t) const;

  std::vector<double> times_;
  std::vector<GroupSeries> increments_;  // one per grid cell
};

}  // namespace sigtaylor
