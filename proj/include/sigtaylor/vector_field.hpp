#pragma once

#include <Eigen/Core>
#include <memory>
#include <stdexcept>
#include <vector>

#include "sigtaylor/words.hpp"

namespace sigtaylor {

/// A word needs higher derivatives than a component declares.
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bound checks require unit Lipschitz norms first.
struct NormalizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Axis-aligned box on which field norms are estimated.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Box() = default;
  Box(Eigen::VectorXd l, Eigen::VectorXd h);
  static Box centered(int n, double radius);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Eigen::VectorXd& y, double tol = 1e-9) const;
};

/// One driving component f : R^n -> R^n with exact derivative evaluators:
/// derivative(y, {v_1, ..., v_q}) is the symmetric form D^q f(y)[v_1..v_q],
/// and an empty direction list gives the plain value f(y).
/// Sentinel polynomial degree for components with derivatives of every order.
inline constexpr int kUnboundedDegree = 1 << 20;

class FieldComponent {
 public:
  virtual ~FieldComponent() = default;

  virtual int dim() const = 0;
  virtual Eigen::VectorXd derivative(
      const Eigen::VectorXd& y,
      const std::vector<Eigen::VectorXd>& dirs) const = 0;
  virtual std::unique_ptr<FieldComponent> scaled(double factor) const = 0;
  virtual std::unique_ptr<FieldComponent> clone() const = 0;

  /// An upper bound on the polynomial degree: derivatives of any order above
  /// it vanish identically.  Derivation chains use this to prune branches
  /// that would only discover the zero at the bottom of the recursion.
  virtual int poly_degree() const { return kUnboundedDegree; }

  Eigen::VectorXd value(const Eigen::VectorXd& y) const {
    return derivative(y, {});
  }
};

using ComponentPtr = std::unique_ptr<FieldComponent>;

/// f(y) = A y + b.
ComponentPtr linear_component(Eigen::MatrixXd A,
                              Eigen::VectorXd b = Eigen::VectorXd());
/// Planar f(y) = omega * (-y_2, y_1).
ComponentPtr rotation_component(double omega);
/// State-independent f(y) = c.
ComponentPtr constant_component(Eigen::VectorXd c);
/// The identity map, useful as the seed of derivation chains.
ComponentPtr identity_component(int n);
/// Scalar f(y) = c * exp(-a y) on a one-dimensional state.
ComponentPtr exp_decay_component(double c = 1.0, double a = 1.0);

/// coeff * y_1^{powers[0]} * ... * y_n^{powers[n-1]}.
struct Monomial {
  double coeff = 0.0;
  std::vector<int> powers;
};

/// One monomial list per output coordinate; rows.size() fixes the dimension.
ComponentPtr polynomial_component(std::vector<std::vector<Monomial>> rows);

/// The derivation f acting on phi: (D phi)(y) applied to f(y).
Eigen::VectorXd apply_derivation(const FieldComponent& f,
                                 const FieldComponent& phi,
                                 const Eigen::VectorXd& y,
                                 const Box* box = nullptr);

/// Driving vector fields f_1..f_d with declared smoothness gamma_i, the box
/// norms are estimated on, and optional per-component derivative-order caps
/// (unlimited by default; closed-form families evaluate any order).
class SmoothVectorField {
 public:
  SmoothVectorField(std::vector<ComponentPtr> components,
                    std::vector<double> gammas, Box domain,
                    std::vector<int> derivative_orders = {});

  int state_dim() const { return state_dim_; }
  int driver_dim() const { return static_cast<int>(components_.size()); }
  const Box& domain() const { return domain_; }

  /// Letters are 1-based, matching words.
  const FieldComponent& component(int letter) const;
  double gamma(int letter) const;
  int derivative_order(int letter) const;

  /// sum_i f_i(y) xdot_i, the ODE right-hand side along a driver velocity.
  Eigen::VectorXd drift(const Eigen::VectorXd& y,
                        const Eigen::VectorXd& xdot) const;

  /// Grid estimates of the Lip(gamma_i) norms on the domain box, cached.
  const Eigen::VectorXd& lip_norms() const;

  /// Components divided by their estimated norms; the paired driver rescaling
  /// is rescale_signal with the same norms, leaving the equation unchanged.
  SmoothVectorField normalized() const;
  bool is_normalized(double tol = 1e-9) const;

 private:
  std::vector<std::shared_ptr<const FieldComponent>> components_;
  std::vector<double> gammas_;
  Box domain_;
  std::vector<int> orders_;
  int state_dim_ = 0;
  bool normalized_flag_ = false;
  mutable Eigen::VectorXd lip_norms_;  // empty until first use
};

/// D^q F^w(y)[dirs...], where F^w = (f_{i_1} o ... o f_{i_m})(I) under the
/// derivation f(phi) = (D phi) f, and F^eps is the identity map.
Eigen::VectorXd field_word_derivative(const SmoothVectorField& field,
                                      const Word& w, const Eigen::VectorXd& y,
                                      const std::vector<Eigen::VectorXd>& dirs);

/// F^w(y); the coefficient functions of the expansion.
Eigen::VectorXd compose_F(const SmoothVectorField& field, const Word& w,
                          const Eigen::VectorXd& y);

/// Which factorial caps the bound check: the integer word weight ||w||! or
/// the degree-capped floor(p_max)! valid for words of degree at most one.
enum class BoundMode { weight, degree };

struct FactorialBoundReport {
  double sup_value = 0.0;      // max |F^{letter w}| over the grid
  double lip_quotient = 0.0;   // max |F^w(y)-F^w(x)| / |y-x| over grid pairs
  double bound = 0.0;
  bool pass = false;
};

/// Checks sup |F^{letter w}| and the Lipschitz quotient of F^w against the
/// mode's factorial on the given sample points; the field must be normalized.
FactorialBoundReport factorial_bound_check(
    const SmoothVectorField& field, const PiIndex& ix, const Word& w,
    int letter, const std::vector<Eigen::VectorXd>& grid,
    BoundMode mode = BoundMode::weight);

/// Derived Taylor-scheme parameters for an admissible (grading, smoothness)
/// pair.
struct TaylorParams {
  PiIndex ix;
  std::vector<double> gamma_list;
  double gamma = 0.0;  // min_i ((gamma_i - 1) p / p_max + k_i)
  int N = 0;           // largest integer strictly below gamma
  double theta = 0.0;  // smallest word degree above one
  double beta = 0.0;   // series constant for the remainder bound
  double p = 0.0;
};

/// Validates gamma_i > p_max (1 - k_i/p) + 1 (equivalently, with 1/p_i) for
/// every letter, then derives gamma, N, theta and beta.  N >= floor(p) holds
/// for every admissible input.
TaylorParams admissible_params(const PiIndex& ix,
                               const std::vector<double>& gamma_list);

/// p (1 + sum_{k>=2} (2/k)^q) with q = (floor(p)+1)/p; one-part series
/// summation with a tail-corrected cutoff, accurate to about 1e-10 relative.
double beta_constant(double p);

/// The series part sum_{k>=2} (2/k)^q alone, q > 1; strictly decreasing in q.
double beta_series_sum(double q);

/// Grid lower bound for the Lip(gamma) norm on the box: suprema of
/// derivatives up to the Lipschitz order plus a Holder quotient of the top
/// derivative.  grid_density counts sample points per axis.
double lip_norm_estimate(const FieldComponent& f, double gamma, const Box& box,
                         int grid_density = 33);

}  // namespace sigtaylor
