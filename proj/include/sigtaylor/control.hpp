#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sigtaylor/lift.hpp"

namespace sigtaylor {

/// Raised by split_by_control when one grid cell alone exceeds the budget.
struct SplitBudgetError : std::runtime_error {
  SplitBudgetError(double s, double t, double omega_value);
  double cell_start;
  double cell_end;
  double cell_omega;
};

/// Time grid paired with a two-parameter signature functional.  Partition
/// suprema are taken over subsets of the grid, so they approximate the true
/// variation from below and can only grow under refinement.
class ControlGrid {
 public:
  ControlGrid(std::vector<double> grid, SignatureFn source, BasisPtr basis);

  /// Midpoint insertion, applied `levels` times.
  static std::vector<double> dyadic_refine(std::vector<double> grid,
                                           int levels);

  std::size_t size() const { return grid_.size(); }
  double time(std::size_t i) const { return grid_[i]; }
  const std::vector<double>& grid() const { return grid_; }
  const BasisPtr& basis() const { return basis_; }

  /// Grid position of t; off-grid times are an error.
  std::size_t index_of(double t) const;

  /// Signature increment over one grid cell, cached.
  const GroupSeries& cell(std::size_t i) const;

  /// Signature increment between two grid points, assembled from cells and
  /// cached; meant for small grids.
  const GroupSeries& pair(std::size_t a, std::size_t b) const;

 private:
  std::vector<double> grid_;
  SignatureFn source_;
  BasisPtr basis_;
  mutable std::vector<std::optional<GroupSeries>> cells_;
  mutable std::map<std::pair<std::size_t, std::size_t>, GroupSeries> pairs_;
};

/// Convenience grid for a piecewise-linear driver over [s, t]: breakpoints
/// plus dyadic refinement, optionally rescaling the signal by Lip norms.
ControlGrid make_control_grid(const PLPath& x, const BasisPtr& basis, double s,
                              double t, int refine_levels = 2,
                              const Eigen::VectorXd* lip_norms = nullptr);

/// Largest value of sum_k |(X_{t_k, t_{k+1}}, w)|^(1/|w|) over grid
/// partitions of [s, t], for several words in one sweep.
std::vector<double> word_variations(const ControlGrid& g,
                                    const std::vector<Word>& words, double s,
                                    double t);

double word_variation(const ControlGrid& g, const Word& w, double s, double t);

/// Control function: sum of word variations over words 0 < |w| <= cap.
double control_omega(const ControlGrid& g, double s, double t,
                     double cap = 1.0);

/// All-pairs variation values V(i, j) for i <= j; small grids only.
Eigen::MatrixXd variation_table(const ControlGrid& g, const Word& w);
std::vector<Eigen::MatrixXd> variation_tables(const ControlGrid& g,
                                              const std::vector<Word>& words);
Eigen::MatrixXd omega_table(const ControlGrid& g, double cap = 1.0);

/// Greedy partition of [s, t] into grid intervals with omega at most budget,
/// each stretched as far as the grid allows.  Returns the partition times
/// including both endpoints.
std::vector<double> split_by_control(const ControlGrid& g, double s, double t,
                                     double budget);

}  // namespace sigtaylor
