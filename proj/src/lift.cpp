#include "sigtaylor/lift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace sigtaylor {

namespace {

constexpr double kTimeTol = 1e-12;

}  // namespace

PLPath::PLPath(std::vector<double> ts, Eigen::MatrixXd vals)
    : times(std::move(ts)), values(std::move(vals)) {
  if (times.size() < 2) throw std::invalid_argument("path needs two breakpoints");
  if (values.cols() != static_cast<Eigen::Index>(times.size()))
    throw std::invalid_argument("one value column per breakpoint required");
  if (values.rows() < 1 || values.rows() > 9)
    throw std::invalid_argument("path dimension must be in 1..9");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("breakpoint times must strictly increase");
}

Eigen::VectorXd PLPath::at(double t) const {
  if (t < start() - kTimeTol || t > end() + kTimeTol)
    throw std::out_of_range("time outside the path range");
  t = std::clamp(t, start(), end());
  const auto hi = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t seg =
      std::min(static_cast<std::size_t>(hi - times.begin()), times.size() - 1) -
      1;
  const double span = times[seg + 1] - times[seg];
  const double u = (t - times[seg]) / span;
  return values.col(static_cast<Eigen::Index>(seg)) * (1.0 - u) +
         values.col(static_cast<Eigen::Index>(seg + 1)) * u;
}

Eigen::VectorXd PLPath::velocity(int segment) const {
  if (segment < 0 || segment >= segments())
    throw std::out_of_range("segment index outside the path");
  const auto s = static_cast<Eigen::Index>(segment);
  return (values.col(s + 1) - values.col(s)) /
         (times[static_cast<std::size_t>(segment) + 1] -
          times[static_cast<std::size_t>(segment)]);
}

std::string PLPath::to_csv() const {
  std::string out = "t";
  for (int i = 1; i <= dimension(); ++i) out += ",x" + std::to_string(i);
  out += "\n";
  char buf[64];
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", times[k]);
    out += buf;
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      std::snprintf(buf, sizeof(buf), ",%.17g",
                    values(i, static_cast<Eigen::Index>(k)));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

PLPath PLPath::from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty path file");
  if (line.rfind("t,", 0) != 0)
    throw std::invalid_argument("path file must start with a t,x1,... header");
  const int d = static_cast<int>(std::count(line.begin(), line.end(), ','));
  std::vector<double> ts;
  std::vector<double> flat;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
    if (static_cast<int>(cells.size()) != d + 1)
      throw std::invalid_argument("path row has wrong column count: " + line);
    ts.push_back(cells[0]);
    flat.insert(flat.end(), cells.begin() + 1, cells.end());
  }
  Eigen::MatrixXd vals(d, static_cast<Eigen::Index>(ts.size()));
  for (std::size_t k = 0; k < ts.size(); ++k)
    for (int i = 0; i < d; ++i)
      vals(i, static_cast<Eigen::Index>(k)) =
          flat[k * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)];
  return PLPath(std::move(ts), std::move(vals));
}

GroupSeries segment_signature(const Eigen::VectorXd& dx,
                              const BasisPtr& basis) {
  const WordBasis& b = *basis;
  if (dx.size() != b.grading().dimension())
    throw std::invalid_argument("increment dimension does not match grading");
  GroupSeries out(basis);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Word& w = b.word(i);
    double c = 1.0;
    for (int pos = 0; pos < w.length(); ++pos)
      c *= dx[w.letters[static_cast<std::size_t>(pos)] - 1] / (pos + 1);
    out[i] = c;
  }
  return out;
}

GroupSeries path_signature(const PLPath& x, double s, double t,
                           const BasisPtr& basis) {
  if (x.dimension() != basis->grading().dimension())
    throw std::invalid_argument("path dimension does not match grading");
  if (t < s) throw std::invalid_argument("signature needs s <= t");
  GroupSeries acc = GroupSeries::identity(basis);
  if (t - s <= kTimeTol) return acc;

  double cursor = s;
  Eigen::VectorXd here = x.at(s);
  for (std::size_t k = 0; k + 1 < x.times.size(); ++k) {
    const double segEnd = x.times[k + 1];
    if (segEnd <= cursor + kTimeTol) continue;
    const double stop = std::min(segEnd, t);
    Eigen::VectorXd there = x.at(stop);
    acc = chen_product(acc, segment_signature(there - here, basis));
    here = std::move(there);
    cursor = stop;
    if (cursor >= t - kTimeTol) break;
  }
  return acc;
}

GroupSeries rescale_signal(const GroupSeries& X, const Eigen::VectorXd& norms) {
  const WordBasis& b = *X.basis();
  if (norms.size() != b.grading().dimension())
    throw std::invalid_argument("one norm per letter required");
  if ((norms.array() < 0.0).any())
    throw std::invalid_argument("norms must be nonnegative");
  GroupSeries out(X.basis());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Word& w = b.word(i);
    double c = X[i];
    for (int l : w.letters) c *= norms[l - 1];
    out[i] = c;
  }
  return out;
}

SignatureFn make_signature_fn(PLPath path, BasisPtr basis) {
  return [path = std::move(path), basis = std::move(basis)](double s, double t) {
    return path_signature(path, s, t, basis);
  };
}

SignatureFn make_signature_fn(PLPath path, BasisPtr basis,
                              Eigen::VectorXd lip_norms) {
  return [path = std::move(path), basis = std::move(basis),
          norms = std::move(lip_norms)](double s, double t) {
    return rescale_signal(path_signature(path, s, t, basis), norms);
  };
}

SyntheticGroupPath::SyntheticGroupPath(std::vector<GroupSeries> log_increments,
                                       std::vector<double> times,
                                       double rel_tol) {
  if (log_increments.empty())
    throw std::invalid_argument("at least one increment required");
  if (times.empty()) {
    times.resize(log_increments.size() + 1);
    for (std::size_t i = 0; i < times.size(); ++i)
      times[i] = static_cast<double>(i);
  }
  if (times.size() != log_increments.size() + 1)
    throw std::invalid_argument("need one more time than increments");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("grid times must strictly increase");

  increments_.reserve(log_increments.size());
  for (const GroupSeries& v : log_increments) {
    GroupSeries g = exp_series(v);
    if (!is_group_like(g, rel_tol))
      throw std::invalid_argument(
          "increment exponential fails the shuffle certification");
    increments_.push_back(std::move(g));
  }
  times_ = std::move(times);
}

std::size_t SyntheticGroupPath::index_of(double t) const {
  for (std::size_t i = 0; i < times_.size(); ++i)
    if (std::abs(times_[i] - t) <= kTimeTol) return i;
  throw std::invalid_argument("time is not a grid point");
}

GroupSeries SyntheticGroupPath::eval(double s, double t) const {
  const std::size_t a = index_of(s);
  const std::size_t b = index_of(t);
  if (b < a) throw std::invalid_argument("eval needs s <= t");
  GroupSeries acc = GroupSeries::identity(increments_.front().basis());
  for (std::size_t k = a; k < b; ++k) acc = chen_product(acc, increments_[k]);
  return acc;
}

SignatureFn SyntheticGroupPath::fn() const {
  return [self = *this](double s, double t) { return self.eval(s, t); };
}

}  // namespace sigtaylor
