#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sigtaylor/config.hpp"

namespace sigtaylor {

/// Verdict for one acceptance criterion, with a measurement summary for the
/// log line.
struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteResult {
  std::vector<CriterionResult> criteria;

  /// How many property instances each module contributed across the run.
  std::map<std::string, int> property_instances;

  bool all_pass() const;
};

/// Least-squares slope of y against x; needs at least two points.
double least_squares_slope(const std::vector<double>& x,
                           const std::vector<double>& y);

/// A driver/field pair with its grading, used by the local-order
/// experiments; shared between the acceptance suite and demo configs.
struct OrderFamily {
  std::string name;
  PiIndex ix;
  std::vector<double> gammas;
  SmoothVectorField field;
  PLPath driver;
  Eigen::VectorXd xi;
};

/// Planar rotation-plus-polynomial field driven by a deterministic zigzag,
/// homogeneous degree-2 grading; the step-3 scheme applies.
OrderFamily homogeneous_order_family();

/// Rough first component (midpoint-displacement signal) with a smooth drift
/// second component under the (2, 1) grading; the step-2 scheme applies.
OrderFamily mixed_order_family(unsigned long long seed);

/// Runs the ten acceptance checks, streaming one verdict line per criterion
/// to `progress`.  `refine` sets the control-grid refinement depth used by
/// the remainder experiments.
SuiteResult run_acceptance_suite(unsigned long long seed, int refine,
                                 std::ostream& progress);

}  // namespace sigtaylor
