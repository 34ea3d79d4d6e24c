#include "sigtaylor/vector_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace sigtaylor {

namespace {

constexpr int kUnlimitedOrder = std::numeric_limits<int>::max();
constexpr std::size_t kGridPointLimit = 200000;

std::string format_point(const Eigen::VectorXd& y) {
  std::string out = "(";
  char buf[40];
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", y[i]);
    out += buf;
  }
  return out + ")";
}

}  // namespace

Box::Box(Eigen::VectorXd l, Eigen::VectorXd h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo.size() == 0 || lo.size() != hi.size())
    throw std::invalid_argument("box bounds need matching nonzero dimensions");
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i]))
      throw std::invalid_argument("box bounds must satisfy lo < hi");
}

Box Box::centered(int n, double radius) {
  if (n <= 0 || !(radius > 0.0))
    throw std::invalid_argument("centered box needs n >= 1 and radius > 0");
  return Box(Eigen::VectorXd::Constant(n, -radius),
             Eigen::VectorXd::Constant(n, radius));
}

bool Box::contains(const Eigen::VectorXd& y, double tol) const {
  if (y.size() != lo.size()) return false;
  for (Eigen::Index i = 0; i < lo.size(); ++i)
    if (y[i] < lo[i] - tol || y[i] > hi[i] + tol) return false;
  return true;
}

namespace {

class LinearComponent final : public FieldComponent {
 public:
  LinearComponent(Eigen::MatrixXd A, Eigen::VectorXd b)
      : A_(std::move(A)), b_(std::move(b)) {
    if (A_.rows() == 0 || A_.rows() != A_.cols())
      throw std::invalid_argument("linear component needs a square matrix");
    if (b_.size() == 0) b_ = Eigen::VectorXd::Zero(A_.rows());
    if (b_.size() != A_.rows())
      throw std::invalid_argument("linear offset dimension mismatch");
  }

  int dim() const override { return static_cast<int>(A_.rows()); }

  Eigen::VectorXd derivative(
      const Eigen::VectorXd& y,
      const std::vector<Eigen::VectorXd>& dirs) const override {
    if (dirs.empty()) return A_ * y + b_;
    if (dirs.size() == 1) return A_ * dirs[0];
    return Eigen::VectorXd::Zero(A_.rows());
  }

  ComponentPtr scaled(double factor) const override {
    return ComponentPtr(new LinearComponent(factor * A_, factor * b_));
  }

  ComponentPtr clone() const override {
    return ComponentPtr(new LinearComponent(A_, b_));
  }

  int poly_degree() const override { return A_.isZero(0.0) ? 0 : 1; }

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
};

class PolynomialComponent final : public FieldComponent {
 public:
  explicit PolynomialComponent(std::vector<std::vector<Monomial>> rows)
      : rows_(std::move(rows)) {
    if (rows_.empty())
      throw std::invalid_argument("polynomial component needs >= 1 row");
    const std::size_t n = rows_.size();
    for (const auto& row : rows_)
      for (const Monomial& m : row) {
        if (m.powers.size() != n)
          throw std::invalid_argument(
              "monomial power list must match the state dimension");
        for (int e : m.powers)
          if (e < 0) throw std::invalid_argument("monomial powers must be >= 0");
      }
  }

  int dim() const override { return static_cast<int>(rows_.size()); }

  Eigen::VectorXd derivative(
      const Eigen::VectorXd& y,
      const std::vector<Eigen::VectorXd>& dirs) const override {
    const int n = dim();
    Eigen::VectorXd out(n);
    for (int r = 0; r < n; ++r) {
      // Differentiate the monomial list once per direction, then evaluate.
      std::vector<Monomial> work = rows_[r];
      for (const Eigen::VectorXd& v : dirs) {
        std::vector<Monomial> next;
        for (const Monomial& m : work)
          for (int j = 0; j < n; ++j) {
            if (m.powers[j] == 0) continue;
            Monomial dm = m;
            dm.coeff *= m.powers[j] * v[j];
            --dm.powers[j];
            if (dm.coeff != 0.0) next.push_back(std::move(dm));
          }
        work = std::move(next);
        if (work.empty()) break;
      }
      double acc = 0.0;
      for (const Monomial& m : work) {
        double term = m.coeff;
        for (int j = 0; j < n; ++j)
          for (int e = 0; e < m.powers[j]; ++e) term *= y[j];
        acc += term;
      }
      out[r] = acc;
    }
    return out;
  }

  ComponentPtr scaled(double factor) const override {
    std::vector<std::vector<Monomial>> rows = rows_;
    for (auto& row : rows)
      for (Monomial& m : row) m.coeff *= factor;
    return ComponentPtr(new PolynomialComponent(std::move(rows)));
  }

  ComponentPtr clone() const override {
    return ComponentPtr(new PolynomialComponent(rows_));
  }

  int poly_degree() const override {
    int deg = 0;
    for (const auto& row : rows_)
      for (const Monomial& m : row) {
        if (m.coeff == 0.0) continue;
        int total = 0;
        for (int e : m.powers) total += e;
        deg = std::max(deg, total);
      }
    return deg;
  }

 private:
  std::vector<std::vector<Monomial>> rows_;
};

class ExpDecayComponent final : public FieldComponent {
 public:
  ExpDecayComponent(double c, double a) : c_(c), a_(a) {}

  int dim() const override { return 1; }

  Eigen::VectorXd derivative(
      const Eigen::VectorXd& y,
      const std::vector<Eigen::VectorXd>& dirs) const override {
    double value = c_ * std::exp(-a_ * y[0]);
    for (const Eigen::VectorXd& v : dirs) value *= -a_ * v[0];
    Eigen::VectorXd out(1);
    out[0] = value;
    return out;
  }

  ComponentPtr scaled(double factor) const override {
    return ComponentPtr(new ExpDecayComponent(factor * c_, a_));
  }

  ComponentPtr clone() const override {
    return ComponentPtr(new ExpDecayComponent(c_, a_));
  }

 private:
  double c_;
  double a_;
};

}  // namespace

ComponentPtr linear_component(Eigen::MatrixXd A, Eigen::VectorXd b) {
  return ComponentPtr(new LinearComponent(std::move(A), std::move(b)));
}

ComponentPtr rotation_component(double omega) {
  Eigen::MatrixXd A(2, 2);
  A << 0.0, -omega, omega, 0.0;
  return linear_component(std::move(A));
}

ComponentPtr constant_component(Eigen::VectorXd c) {
  const Eigen::Index n = c.size();
  if (n == 0) throw std::invalid_argument("constant component needs a vector");
  return linear_component(Eigen::MatrixXd::Zero(n, n), std::move(c));
}

ComponentPtr identity_component(int n) {
  if (n <= 0) throw std::invalid_argument("identity component needs n >= 1");
  return linear_component(Eigen::MatrixXd::Identity(n, n));
}

ComponentPtr exp_decay_component(double c, double a) {
  return ComponentPtr(new ExpDecayComponent(c, a));
}

ComponentPtr polynomial_component(std::vector<std::vector<Monomial>> rows) {
  return ComponentPtr(new PolynomialComponent(std::move(rows)));
}

Eigen::VectorXd apply_derivation(const FieldComponent& f,
                                 const FieldComponent& phi,
                                 const Eigen::VectorXd& y, const Box* box) {
  if (f.dim() != phi.dim() || y.size() != f.dim())
    throw std::invalid_argument("derivation needs matching dimensions");
  if (box != nullptr && !box->contains(y))
    throw std::domain_error("derivation point " + format_point(y) +
                            " lies outside the domain box");
  return phi.derivative(y, {f.value(y)});
}

SmoothVectorField::SmoothVectorField(std::vector<ComponentPtr> components,
                                     std::vector<double> gammas, Box domain,
                                     std::vector<int> derivative_orders)
    : gammas_(std::move(gammas)),
      domain_(std::move(domain)),
      orders_(std::move(derivative_orders)) {
  if (components.empty())
    throw std::invalid_argument("a field needs >= 1 component");
  if (gammas_.size() != components.size())
    throw std::invalid_argument("one gamma per component required");
  state_dim_ = components.front()->dim();
  for (const ComponentPtr& c : components)
    if (!c || c->dim() != state_dim_)
      throw std::invalid_argument("components must share one state dimension");
  if (domain_.dim() != state_dim_)
    throw std::invalid_argument("domain box dimension mismatch");
  if (orders_.empty()) {
    orders_.assign(components.size(), kUnlimitedOrder);
  } else if (orders_.size() != components.size()) {
    throw std::invalid_argument("one derivative order per component required");
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (!(gammas_[i] > 0.0))
      throw std::invalid_argument("smoothness gamma must be positive");
    if (orders_[i] < lenient_floor(gammas_[i]))
      throw std::invalid_argument(
          "derivative order must reach floor(gamma) for each component");
  }
  components_.reserve(components.size());
  for (ComponentPtr& c : components) components_.emplace_back(std::move(c));
}

const FieldComponent& SmoothVectorField::component(int letter) const {
  if (letter < 1 || letter > driver_dim())
    throw std::invalid_argument("component letter out of range");
  return *components_[letter - 1];
}

double SmoothVectorField::gamma(int letter) const {
  if (letter < 1 || letter > driver_dim())
    throw std::invalid_argument("component letter out of range");
  return gammas_[letter - 1];
}

int SmoothVectorField::derivative_order(int letter) const {
  if (letter < 1 || letter > driver_dim())
    throw std::invalid_argument("component letter out of range");
  return orders_[letter - 1];
}

Eigen::VectorXd SmoothVectorField::drift(const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& xdot) const {
  if (xdot.size() != driver_dim())
    throw std::invalid_argument("driver velocity dimension mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(state_dim_);
  for (int i = 0; i < driver_dim(); ++i) {
    if (xdot[i] == 0.0) continue;
    out += xdot[i] * components_[i]->value(y);
  }
  return out;
}

const Eigen::VectorXd& SmoothVectorField::lip_norms() const {
  if (lip_norms_.size() == 0) {
    const int density = state_dim_ == 1 ? 129 : state_dim_ == 2 ? 33 : 9;
    lip_norms_.resize(driver_dim());
    for (int i = 0; i < driver_dim(); ++i)
      lip_norms_[i] =
          lip_norm_estimate(*components_[i], gammas_[i], domain_, density);
  }
  return lip_norms_;
}

SmoothVectorField SmoothVectorField::normalized() const {
  const Eigen::VectorXd& norms = lip_norms();
  std::vector<ComponentPtr> scaled;
  scaled.reserve(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (!(norms[static_cast<Eigen::Index>(i)] > 0.0))
      throw std::invalid_argument(
          "a component with zero norm cannot be normalized");
    scaled.push_back(
        components_[i]->scaled(1.0 / norms[static_cast<Eigen::Index>(i)]));
  }
  SmoothVectorField out(std::move(scaled), gammas_, domain_, orders_);
  out.normalized_flag_ = true;
  out.lip_norms_ = Eigen::VectorXd::Ones(driver_dim());
  return out;
}

bool SmoothVectorField::is_normalized(double tol) const {
  if (normalized_flag_) return true;
  return (lip_norms().array() - 1.0).abs().maxCoeff() <= tol;
}

namespace {

Eigen::VectorXd word_derivative_impl(const SmoothVectorField& field,
                                     const std::vector<int>& letters,
                                     std::size_t pos, const Eigen::VectorXd& y,
                                     const std::vector<Eigen::VectorXd>& dirs,
                                     const std::vector<int>& suffix_degree) {
  const std::size_t q = dirs.size();
  // The suffix map is polynomial of the recorded degree, so any higher
  // derivative vanishes; without this cutoff the subset expansion would
  // discover the zeros only at the bottom, at super-exponential cost.
  if (q > static_cast<std::size_t>(suffix_degree[pos]))
    return Eigen::VectorXd::Zero(y.size());
  if (pos == letters.size()) {
    // The identity map: value y, derivative the direction itself, then zero.
    if (q == 0) return y;
    if (q == 1) return dirs[0];
    return Eigen::VectorXd::Zero(y.size());
  }
  const FieldComponent& f = field.component(letters[pos]);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(y.size());
  std::vector<Eigen::VectorXd> f_dirs;
  std::vector<Eigen::VectorXd> rec_dirs;
  const std::size_t subsets = std::size_t{1} << q;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    // Directions in the mask keep differentiating the suffix map; the rest
    // land on this component, whose derivative fills the leading slot.
    f_dirs.clear();
    rec_dirs.assign(1, Eigen::VectorXd());
    for (std::size_t b = 0; b < q; ++b) {
      if (mask & (std::size_t{1} << b))
        rec_dirs.push_back(dirs[b]);
      else
        f_dirs.push_back(dirs[b]);
    }
    rec_dirs[0] = f.derivative(y, f_dirs);
    // The leading slot enters multilinearly, so an exactly-zero factor
    // (e.g. any second derivative of a linear component) kills the branch.
    if (rec_dirs[0].isZero(0.0)) continue;
    sum += word_derivative_impl(field, letters, pos + 1, y, rec_dirs,
                                suffix_degree);
  }
  return sum;
}

}  // namespace

Eigen::VectorXd field_word_derivative(
    const SmoothVectorField& field, const Word& w, const Eigen::VectorXd& y,
    const std::vector<Eigen::VectorXd>& dirs) {
  if (y.size() != field.state_dim())
    throw std::invalid_argument("evaluation point dimension mismatch");
  for (const Eigen::VectorXd& v : dirs)
    if (v.size() != field.state_dim())
      throw std::invalid_argument("direction dimension mismatch");
  if (dirs.size() > 20)
    throw std::length_error("derivative order beyond subset enumeration");
  if (!field.domain().contains(y))
    throw std::domain_error("evaluation point " + format_point(y) +
                            " lies outside the domain box");
  const int need =
      std::max(0, w.length() - 1 + static_cast<int>(dirs.size()));
  for (int letter : w.letters) {
    if (letter < 1 || letter > field.driver_dim())
      throw std::invalid_argument("word letter outside the driver alphabet");
    if (field.derivative_order(letter) < need) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "component %d declares derivative order %d; the request "
                    "needs %d",
                    letter, field.derivative_order(letter), need);
      throw CapabilityError(buf);
    }
  }
  // Degree of the composed map for each suffix: the empty word is the
  // identity, and prepending f takes deg to deg(f) + (deg - 1).
  std::vector<int> suffix_degree(w.letters.size() + 1);
  suffix_degree.back() = 1;
  for (std::size_t pos = w.letters.size(); pos-- > 0;) {
    const int deg = field.component(w.letters[pos]).poly_degree();
    suffix_degree[pos] = std::min(
        kUnboundedDegree, std::max(0, suffix_degree[pos + 1] - 1 + deg));
  }
  return word_derivative_impl(field, w.letters, 0, y, dirs, suffix_degree);
}

Eigen::VectorXd compose_F(const SmoothVectorField& field, const Word& w,
                          const Eigen::VectorXd& y) {
  return field_word_derivative(field, w, y, {});
}

FactorialBoundReport factorial_bound_check(
    const SmoothVectorField& field, const PiIndex& ix, const Word& w,
    int letter, const std::vector<Eigen::VectorXd>& grid, BoundMode mode) {
  if (!field.is_normalized())
    throw NormalizationError(
        "bound checks require unit Lipschitz norms; call normalized() first");
  if (grid.empty())
    throw std::invalid_argument("bound check needs >= 1 sample point");
  FactorialBoundReport report;
  if (mode == BoundMode::weight) {
    report.bound =
        fractional_factorial(static_cast<double>(weight(w, ix)));
  } else {
    if (degree(w, ix) > 1.0 + kDegreeTol)
      throw std::invalid_argument(
          "degree mode only covers words of degree at most one");
    report.bound =
        fractional_factorial(static_cast<double>(lenient_floor(ix.p_max())));
  }
  const Word iw = w.prepended(letter);
  std::vector<Eigen::VectorXd> base_values;
  base_values.reserve(grid.size());
  for (const Eigen::VectorXd& y : grid) {
    report.sup_value =
        std::max(report.sup_value, compose_F(field, iw, y).norm());
    base_values.push_back(compose_F(field, w, y));
  }
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      const double dist = (grid[i] - grid[j]).norm();
      if (dist < 1e-12) continue;
      report.lip_quotient = std::max(
          report.lip_quotient, (base_values[i] - base_values[j]).norm() / dist);
    }
  const double slack = report.bound * 1e-9 + 1e-12;
  report.pass = report.sup_value <= report.bound + slack &&
                report.lip_quotient <= report.bound + slack;
  return report;
}

TaylorParams admissible_params(const PiIndex& ix,
                               const std::vector<double>& gamma_list) {
  if (static_cast<int>(gamma_list.size()) != ix.dimension())
    throw std::invalid_argument("one gamma per driving letter required");
  if (!ix.uniform_graded())
    throw std::invalid_argument(
        "parameter arithmetic requires the uniform grading p_i = p / k_i");
  const double p = ix.uniform_p();
  const double pmax = ix.p_max();
  double gamma = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ix.dimension(); ++i) {
    const double gi = gamma_list[i];
    if (!(gi > 0.0))
      throw std::invalid_argument("smoothness gamma must be positive");
    const int ki = ix.k(i + 1);
    const double pi = ix.p(i + 1);
    const double thr_weight = pmax * (1.0 - ki / p) + 1.0;
    const double thr_exponent = pmax * (1.0 - 1.0 / pi) + 1.0;
    const double thr = std::max(thr_weight, thr_exponent);
    if (gi < thr + 1e-9) {
      char buf[192];
      std::snprintf(buf, sizeof buf,
                    "component %d: gamma = %.6g does not exceed the "
                    "admissibility thresholds %.6g (weight form) and %.6g "
                    "(exponent form)",
                    i + 1, gi, thr_weight, thr_exponent);
      throw std::invalid_argument(buf);
    }
    gamma = std::min(gamma, (gi - 1.0) * p / pmax + ki);
  }
  TaylorParams params{ix,        gamma_list,       gamma, strict_floor(gamma),
                      theta(ix), beta_constant(p), p};
  if (params.N < lenient_floor(p))
    throw std::logic_error("derived step order fell below floor(p)");
  return params;
}

double beta_series_sum(double q) {
  if (!(q > 1.0 + 1e-12))
    throw std::invalid_argument("series exponent must exceed one");
  static std::map<double, double> cache;
  const auto hit = cache.find(q);
  if (hit != cache.end()) return hit->second;
  constexpr long kStop = 1000000;
  double sum = 0.0;
  for (long k = kStop; k >= 2; --k) sum += std::pow(2.0 / k, q);
  // Euler-Maclaurin tail from a = kStop + 1: integral + half-term + slope.
  const double a = static_cast<double>(kStop) + 1.0;
  const double tail =
      std::pow(2.0, q) * (std::pow(a, 1.0 - q) / (q - 1.0) +
                          std::pow(a, -q) / 2.0 + q * std::pow(a, -q - 1.0) / 12.0);
  const double result = sum + tail;
  cache.emplace(q, result);
  return result;
}

double beta_constant(double p) {
  if (!(p >= 1.0 - 1e-12))
    throw std::invalid_argument("variation exponent must be >= 1");
  const double q = (lenient_floor(p) + 1.0) / p;
  return p * (1.0 + beta_series_sum(q));
}

double lip_norm_estimate(const FieldComponent& f, double gamma, const Box& box,
                         int grid_density) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (box.dim() != f.dim())
    throw std::invalid_argument("box dimension mismatch");
  if (grid_density < 2)
    throw std::invalid_argument("grid density must be >= 2");
  const int n = box.dim();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= static_cast<std::size_t>(grid_density);
    if (total > kGridPointLimit)
      throw std::length_error("norm-estimation grid too large");
  }

  std::vector<Eigen::VectorXd> points;
  points.reserve(total);
  std::vector<int> odo(n, 0);
  for (std::size_t count = 0; count < total; ++count) {
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i)
      y[i] = box.lo[i] +
             (box.hi[i] - box.lo[i]) * odo[i] / (grid_density - 1.0);
    points.push_back(std::move(y));
    for (int i = 0; i < n; ++i) {
      if (++odo[i] < grid_density) break;
      odo[i] = 0;
    }
  }

  // Diagonal directions: every nonzero sign pattern, normalized.  Symmetric
  // multilinear forms attain their norm on the diagonal, so this samples the
  // right quantity.
  std::vector<Eigen::VectorXd> dirs;
  std::vector<int> signs(n, -1);
  while (true) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = signs[i];
    if (v.norm() > 0.0) dirs.push_back(v / v.norm());
    int i = 0;
    for (; i < n; ++i) {
      if (signs[i] < 1) {
        ++signs[i];
        break;
      }
      signs[i] = -1;
    }
    if (i == n) break;
  }

  const int k_top = std::max(0, strict_floor(gamma));
  const double holder = gamma - k_top;

  double best = 0.0;
  for (const Eigen::VectorXd& y : points) {
    best = std::max(best, f.value(y).norm());
    for (int q = 1; q <= k_top; ++q)
      for (const Eigen::VectorXd& v : dirs) {
        const std::vector<Eigen::VectorXd> stack(q, v);
        best = std::max(best, f.derivative(y, stack).norm());
      }
  }

  // Holder quotient of the top derivative on a thinned point set.
  std::vector<const Eigen::VectorXd*> sample;
  const std::size_t stride = points.size() / 400 + 1;
  for (std::size_t i = 0; i < points.size(); i += stride)
    sample.push_back(&points[i]);
  const std::size_t dir_count = k_top == 0 ? 1 : dirs.size();
  for (std::size_t di = 0; di < dir_count; ++di) {
    std::vector<Eigen::VectorXd> top;
    top.reserve(sample.size());
    for (const Eigen::VectorXd* y : sample) {
      if (k_top == 0) {
        top.push_back(f.value(*y));
      } else {
        const std::vector<Eigen::VectorXd> stack(k_top, dirs[di]);
        top.push_back(f.derivative(*y, stack));
      }
    }
    for (std::size_t i = 0; i < sample.size(); ++i)
      for (std::size_t j = i + 1; j < sample.size(); ++j) {
        const double dist = (*sample[i] - *sample[j]).norm();
        if (dist < 1e-12) continue;
        best = std::max(best,
                        (top[i] - top[j]).norm() / std::pow(dist, holder));
      }
  }
  return best;
}

}  // namespace sigtaylor
