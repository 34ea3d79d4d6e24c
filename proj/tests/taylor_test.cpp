#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "sigtaylor/taylor.hpp"

using namespace sigtaylor;

namespace {

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

PLPath line_path(double from, double to, double t0 = 0.0, double t1 = 1.0) {
  Eigen::MatrixXd vals(1, 2);
  vals << from, to;
  return PLPath({t0, t1}, vals);
}

// dy = y dx in one dimension; solution y(t) = xi * exp(x(t) - x(0)).
SmoothVectorField scalar_exponential_field(double radius = 4.0) {
  std::vector<ComponentPtr> comps;
  comps.push_back(identity_component(1));
  return SmoothVectorField(std::move(comps), {2.5}, Box::centered(1, radius));
}

// dy = exp(-y) dx; from xi = 0 along x(t) = t the solution is log(1 + t).
SmoothVectorField log_growth_field() {
  std::vector<ComponentPtr> comps;
  comps.push_back(exp_decay_component());
  return SmoothVectorField(std::move(comps), {2.5}, Box::centered(1, 3.0));
}

}  // namespace

TEST_CASE("ode_solve reproduces closed forms along smooth and kinked drivers") {
  const SmoothVectorField field = scalar_exponential_field();

  SUBCASE("straight driver gives the exponential") {
    const SolveResult res =
        ode_solve(field, line_path(0.0, 1.0), vec1(1.0), {1.0});
    REQUIRE(res.states.size() == 1);
    CHECK(res.states[0][0] == doctest::Approx(std::exp(1.0)).epsilon(1e-11));
    CHECK(res.accepted_steps > 0);
    CHECK(res.stayed_in_box);
  }

  SUBCASE("only the driver increment matters, kinks included") {
    Eigen::MatrixXd vals(1, 3);
    vals << 0.0, 0.5, 0.3;
    const PLPath zig({0.0, 0.5, 1.0}, vals);
    const std::vector<double> outs = {0.25, 0.5, 0.75, 1.0};
    const SolveResult res = ode_solve(field, zig, vec1(1.0), outs);
    REQUIRE(res.times == outs);
    REQUIRE(res.states.size() == 4);
    const double xs[] = {0.25, 0.5, 0.4, 0.3};
    for (int k = 0; k < 4; ++k)
      CHECK(res.states[static_cast<std::size_t>(k)][0] ==
            doctest::Approx(std::exp(xs[k])).epsilon(1e-10));
  }

  SUBCASE("rotation carries (1,0) to (0,1) in a quarter turn") {
    std::vector<ComponentPtr> comps;
    comps.push_back(rotation_component(1.0));
    const SmoothVectorField rot(std::move(comps), {2.5}, Box::centered(2, 2.0));
    const double quarter = std::asin(1.0);  // pi / 2
    const SolveResult res =
        ode_solve(rot, line_path(0.0, quarter), vec2(1.0, 0.0), {1.0});
    CHECK(res.states[0][0] == doctest::Approx(0.0).epsilon(1e-10).scale(1.0));
    CHECK(res.states[0][1] == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("exp(-y) drift grows like log(1 + t)") {
    const SmoothVectorField field2 = log_growth_field();
    const SolveResult res = ode_solve(field2, line_path(0.0, 2.0, 0.0, 2.0),
                                      vec1(0.0), {1.0, 2.0});
    CHECK(res.states[0][0] == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(res.states[1][0] == doctest::Approx(std::log(3.0)).epsilon(1e-10));
  }
}

TEST_CASE("ode_solve validates inputs and reports domain exits") {
  const SmoothVectorField field = scalar_exponential_field();
  const PLPath x = line_path(0.0, 1.0);

  CHECK_THROWS_AS(ode_solve(field, x, vec1(1.0), {0.8, 0.4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ode_solve(field, x, vec1(1.0), {1.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ode_solve(field, x, vec1(1.0), {}), std::invalid_argument);
  CHECK_THROWS_AS(ode_solve(field, x, vec2(1.0, 0.0), {1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ode_solve(field, x, vec1(1.0), {1.0}, 0.0),
                  std::invalid_argument);

  SUBCASE("a strict solve throws when exp(t) crosses the box wall") {
    std::vector<ComponentPtr> comps;
    comps.push_back(identity_component(1));
    const SmoothVectorField narrow(std::move(comps), {2.5},
                                   Box::centered(1, 1.5));
    bool thrown = false;
    try {
      ode_solve(narrow, x, vec1(1.0), {1.0});
    } catch (const DomainExitError& e) {
      thrown = true;
      // The wall sits at y = 1.5, crossed at t = log 1.5; the exit is
      // detected at the end of the accepted step that stepped over it.
      CHECK(e.exit_time >= std::log(1.5) - 1e-9);
      CHECK(e.exit_time < 0.8);
    }
    CHECK(thrown);
  }

  SUBCASE("a lenient solve completes and clears stayed_in_box") {
    std::vector<ComponentPtr> comps;
    comps.push_back(identity_component(1));
    const SmoothVectorField narrow(std::move(comps), {2.5},
                                   Box::centered(1, 1.5));
    const SolveResult res =
        ode_solve(narrow, x, vec1(1.0), {1.0}, 1e-12, false);
    CHECK_FALSE(res.stayed_in_box);
    CHECK(res.states[0][0] == doctest::Approx(std::exp(1.0)).epsilon(1e-11));
  }

  SUBCASE("a start outside the box fails immediately") {
    std::vector<ComponentPtr> comps;
    comps.push_back(identity_component(1));
    const SmoothVectorField narrow(std::move(comps), {2.5},
                                   Box::centered(1, 1.5));
    CHECK_THROWS_AS(ode_solve(narrow, x, vec1(2.0), {1.0}), DomainExitError);
  }
}

TEST_CASE("taylor_increment reproduces truncated exponentials") {
  const PiIndex pi = PiIndex::homogeneous(1.0, 1);

  SUBCASE("order two on dx = 0.1 gives 0.105 y") {
    const SmoothVectorField field = scalar_exponential_field();
    const auto basis = WordBasis::make(pi, 3.0);
    const GroupSeries X = path_signature(line_path(0.0, 1.0), 0.0, 0.1, basis);
    const Eigen::VectorXd inc = taylor_increment(field, X, vec1(2.0), pi, 2);
    CHECK(inc[0] == doctest::Approx(0.105 * 2.0).epsilon(1e-14));

    // The degree-one truncation -- the Euler step -- keeps only dx itself.
    const Eigen::VectorXd euler = taylor_increment(field, X, vec1(2.0), pi, 1);
    CHECK(euler[0] == doctest::Approx(0.1 * 2.0).epsilon(1e-14));

    const Eigen::VectorXd none = taylor_increment(field, X, vec1(2.0), pi, 0);
    CHECK(none[0] == 0.0);
  }

  SUBCASE("order fourteen matches the matrix exponential to 1e-10") {
    Eigen::MatrixXd A(2, 2);
    A << 0.3, -1.0, 0.8, 0.2;
    std::vector<ComponentPtr> comps;
    comps.push_back(linear_component(A));
    const SmoothVectorField field(std::move(comps), {2.0},
                                  Box::centered(2, 10.0));
    const auto basis = WordBasis::make(pi, 14.0);
    const GroupSeries X = path_signature(line_path(0.0, 0.7), 0.0, 1.0, basis);
    const Eigen::VectorXd xi = vec2(0.4, -0.3);
    const Eigen::VectorXd inc = taylor_increment(field, X, xi, pi, 14);
    const Eigen::MatrixXd expA = (0.7 * A).exp();
    const Eigen::VectorXd expected =
        expA * xi - xi;
    CHECK((inc - expected).norm() <= 1e-10);
  }
}

TEST_CASE("taylor_increment validates grading and series capability") {
  const PiIndex pi = PiIndex::homogeneous(1.0, 1);
  const SmoothVectorField field = scalar_exponential_field();
  const auto short_basis = WordBasis::make(pi, 1.0);
  const GroupSeries X =
      path_signature(line_path(0.0, 1.0), 0.0, 0.1, short_basis);

  CHECK_THROWS_AS(taylor_increment(field, X, vec1(1.0), pi, 2),
                  CapabilityError);
  CHECK_THROWS_AS(taylor_increment(field, X, vec1(1.0), pi, -1),
                  std::invalid_argument);

  const PiIndex other = PiIndex::homogeneous(2.0, 1);
  CHECK_THROWS_AS(taylor_increment(field, X, vec1(1.0), other, 1),
                  std::invalid_argument);
}

TEST_CASE("remainder measures the Taylor defect against the exact flow") {
  const SmoothVectorField field = scalar_exponential_field(2.0);
  const PiIndex pi = PiIndex::homogeneous(1.0, 1);
  const TaylorParams params = admissible_params(pi, {2.5});
  REQUIRE(params.N == 2);

  const PLPath x = line_path(0.0, 1.0);
  const RemainderReport rep = remainder(field, x, vec1(1.0), 0.0, 0.1, params);

  CHECK(rep.taylor[0] == doctest::Approx(0.105).epsilon(1e-12));
  CHECK(rep.true_increment[0] ==
        doctest::Approx(std::exp(0.1) - 1.0).epsilon(1e-11));
  CHECK(rep.remainder ==
        doctest::Approx(std::exp(0.1) - 1.105).epsilon(1e-6));
  CHECK(rep.next_term == doctest::Approx(1e-3 / 6.0).epsilon(1e-12));

  // f = y has Lip-2.5 norm 2 on [-2, 2], so the rescaled driver moves 0.2.
  CHECK(rep.omega == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(rep.bound ==
        doctest::Approx(remainder_bound(params, 1, rep.omega)).epsilon(1e-14));
  CHECK(rep.remainder <= rep.bound);
  CHECK(rep.ratio == doctest::Approx(rep.remainder / rep.bound).epsilon(1e-14));

  CHECK_THROWS_AS(remainder(field, x, vec1(1.0), 0.3, 0.3, params),
                  std::invalid_argument);
}

TEST_CASE("remainder-to-next-term ratio approaches one on short intervals") {
  const SmoothVectorField field = log_growth_field();
  const PiIndex pi = PiIndex::homogeneous(1.0, 1);
  const TaylorParams params = admissible_params(pi, {2.5});
  const PLPath x = line_path(0.0, 1.0);

  std::vector<double> ratios;
  for (int k = 0; k <= 6; ++k) {
    const double t = std::ldexp(1.0, -k);
    const RemainderReport rep =
        remainder(field, x, vec1(0.0), 0.0, t, params);
    REQUIRE(rep.next_term > 0.0);
    ratios.push_back(rep.remainder / rep.next_term);
  }
  // log(1+h) - h + h^2/2 = h^3/3 - h^4/4 + ..., and the weight-3 term is
  // exactly h^3/3, so the quotient climbs to 1 from below.
  CHECK(std::abs(ratios.back() - 1.0) <= 0.1);
  CHECK(ratios.back() > ratios.front());
  for (std::size_t k = 1; k < ratios.size(); ++k)
    CHECK(std::abs(ratios[k] - 1.0) <= std::abs(ratios[k - 1] - 1.0) + 1e-9);
}

TEST_CASE("remainder_bound and euler_bound frozen values and scaling") {
  const PiIndex pi = PiIndex::homogeneous(1.0, 1);
  const TaylorParams params = admissible_params(pi, {2.5});
  REQUIRE(params.N == 2);

  // 2! * beta(1)^2 * 0.1^3 / 3! with beta(1) = 3.5797362673929057.
  CHECK(remainder_bound(params, 1, 0.1) ==
        doctest::Approx(0.004271503910639549).epsilon(1e-9));
  CHECK(remainder_bound(params, 1, 0.2) /
            remainder_bound(params, 1, 0.1) ==
        doctest::Approx(8.0).epsilon(1e-12));
  CHECK(remainder_bound(params, 1, 0.0) == 0.0);
  CHECK(remainder_bound(params, 2, 0.1) /
            remainder_bound(params, 1, 0.1) ==
        doctest::Approx(8.0).epsilon(1e-12));
  CHECK(remainder_bound(params, 1, 0.1, 3.0) /
            remainder_bound(params, 1, 0.1) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(remainder_bound(params, 0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(remainder_bound(params, 1, -0.1), std::invalid_argument);

  CHECK(euler_bound(1.5, 1.0, 2.0) == doctest::Approx(2.0));
  CHECK(euler_bound(1.5, 0.25) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(euler_bound(1.5, 4.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(euler_bound(1.5, -1.0), std::invalid_argument);
}

TEST_CASE("factorial decay bound holds for line and L-shaped signatures") {
  SUBCASE("powers of one letter at p = 1") {
    const PiIndex pi = PiIndex::homogeneous(1.0, 1);
    const TaylorParams params = admissible_params(pi, {2.5});
    const auto basis = WordBasis::make(pi, 3.0);
    const GroupSeries X =
        path_signature(line_path(0.0, 0.3), 0.0, 1.0, basis);

    for (std::size_t i = 0; i < basis->size(); ++i) {
      const Word& w = basis->word(i);
      if (w.empty()) continue;
      const DecayReport rep = factorial_decay_check(X, w, params, 0.3);
      CHECK(rep.pass);
      CHECK(rep.lhs <= rep.rhs + 1e-12 * (1.0 + rep.rhs));
    }

    // One letter sits exactly on the bound: |dx| = omega^1 / 1!.
    const DecayReport edge =
        factorial_decay_check(X, Word(std::vector<int>{1}), params, 0.3);
    CHECK(edge.lhs == doctest::Approx(edge.rhs).epsilon(1e-13));
    CHECK(edge.pass);
  }

  SUBCASE("the L-shaped area coefficient at p = 2") {
    const PiIndex pi = PiIndex::homogeneous(2.0, 2);
    const TaylorParams params = admissible_params(pi, {2.2, 2.2});
    const auto basis = WordBasis::make(pi, 1.0);
    Eigen::MatrixXd vals(2, 3);
    vals << 0.0, 1.0, 1.0,
            0.0, 0.0, 1.0;
    const PLPath ell({0.0, 1.0, 2.0}, vals);
    const GroupSeries X = path_signature(ell, 0.0, 2.0, basis);
    const Word area(std::vector<int>{1, 2});
    CHECK(X.coeff(area) == doctest::Approx(1.0).epsilon(1e-12));

    const ControlGrid grid = make_control_grid(ell, basis, 0.0, 2.0);
    const double omega_val = control_omega(grid, 0.0, 2.0);
    CHECK(omega_val >= 1.0);

    CHECK(factorial_decay_check(X, area, params, omega_val).pass);
    CHECK(factorial_decay_check(X, Word(std::vector<int>{1}), params,
                                omega_val)
              .pass);
    // Starving the control must expose the violation.
    CHECK_FALSE(factorial_decay_check(X, area, params, 1e-6).pass);
  }

  SUBCASE("input validation") {
    const PiIndex pi = PiIndex::homogeneous(1.0, 1);
    const TaylorParams params = admissible_params(pi, {2.5});
    const auto basis = WordBasis::make(pi, 2.0);
    const GroupSeries X =
        path_signature(line_path(0.0, 0.3), 0.0, 1.0, basis);
    CHECK_THROWS_AS(
        factorial_decay_check(X, Word(std::vector<int>{}), params, 0.3),
        std::invalid_argument);
    CHECK_THROWS_AS(
        factorial_decay_check(X, Word(std::vector<int>{1}), params, -0.3),
        std::invalid_argument);
  }
}

TEST_CASE("neoclassical inequality: equality at p = 1, strict room otherwise") {
  SUBCASE("p = 1 collapses to the binomial theorem") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 2.0);
    std::uniform_int_distribution<int> ns(0, 8);
    for (int rep = 0; rep < 60; ++rep) {
      const NeoclassicalReport r =
          neoclassical_check(1.0, ns(rng), uni(rng), uni(rng));
      CHECK(r.pass);
      CHECK(std::abs(r.lhs - r.rhs) <= 1e-12 * (1.0 + r.rhs));
    }
  }

  SUBCASE("frozen value at p = 2, n = 2, s = t = 1") {
    const NeoclassicalReport r = neoclassical_check(2.0, 2, 1.0, 1.0);
    // 1/4 * (1 + 1/Gamma(3/2)^2 + 1) = 1/2 + 1/pi.
    CHECK(r.lhs == doctest::Approx(0.81830988618379067).epsilon(1e-14));
    CHECK(r.rhs == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.pass);
  }

  SUBCASE("sweep over p, n, and the corner s = 0") {
    for (double p : {1.5, 2.0, 3.0, 4.0})
      for (int n : {0, 1, 2, 4, 7, 10})
        for (double s : {0.0, 0.5, 1.37, 2.0})
          for (double t : {0.0, 0.5, 1.37, 2.0})
            CHECK(neoclassical_check(p, n, s, t).pass);
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(neoclassical_check(0.5, 2, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(neoclassical_check(2.0, -1, 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(neoclassical_check(2.0, 2, -1.0, 1.0),
                    std::invalid_argument);
  }
}

TEST_CASE("kershaw partial-sum ratios stay uniformly bounded") {
  SUBCASE("p = 1") {
    const TaylorParams params =
        admissible_params(PiIndex::homogeneous(1.0, 1), {2.5});
    const KershawReport rep = kershaw_ratio_check(params, 30);
    REQUIRE(rep.a.size() == 31);
    REQUIRE(rep.ratios.size() == 30);
    // The worst ratio is (1 + beta/2) / (beta^2/3) ~ 0.6532 at N = 2.
    CHECK(rep.max_ratio <= 0.66);
    CHECK(rep.max_ratio >= 0.64);
    CHECK(rep.growth_from <= 2);
    CHECK(rep.a[30] > 1e3);
  }

  SUBCASE("p = 2") {
    const TaylorParams params =
        admissible_params(PiIndex::homogeneous(2.0, 1), {2.2});
    const KershawReport rep = kershaw_ratio_check(params, 30);
    CHECK(rep.max_ratio <= 0.11);
    CHECK(rep.growth_from <= 2);
  }

  SUBCASE("p = 3") {
    const TaylorParams params =
        admissible_params(PiIndex::homogeneous(3.0, 1), {3.5});
    const KershawReport rep = kershaw_ratio_check(params, 30);
    CHECK(rep.max_ratio <= 0.05);
    CHECK(rep.growth_from <= 2);
  }

  SUBCASE("input validation") {
    const TaylorParams params =
        admissible_params(PiIndex::homogeneous(1.0, 1), {2.5});
    CHECK_THROWS_AS(kershaw_ratio_check(params, 1), std::invalid_argument);
  }
}

TEST_CASE("step_scheme iterates Taylor increments and converges on refinement") {
  SUBCASE("one step is exactly one increment") {
    const SmoothVectorField field = scalar_exponential_field();
    const PiIndex pi = PiIndex::homogeneous(1.0, 1);
    const auto basis = WordBasis::make(pi, 2.0);
    const PLPath x = line_path(0.0, 0.4);
    const SignatureFn sig = make_signature_fn(x, basis);
    const auto traj = step_scheme(field, sig, {0.0, 1.0}, vec1(1.0), pi, 2);
    REQUIRE(traj.size() == 2);
    const Eigen::VectorXd inc =
        taylor_increment(field, sig(0.0, 1.0), vec1(1.0), pi, 2);
    CHECK((traj[1] - traj[0] - inc).norm() <= 1e-14);
  }

  SUBCASE("dyadic refinement shrinks the endpoint error") {
    const SmoothVectorField field = scalar_exponential_field();
    const PiIndex pi = PiIndex::homogeneous(1.0, 1);
    const auto basis = WordBasis::make(pi, 2.0);
    const PLPath x = line_path(0.0, 1.0);
    const SignatureFn sig = make_signature_fn(x, basis);
    const double exact = std::exp(1.0);

    std::vector<double> errs;
    for (int n : {4, 8, 16, 32}) {
      std::vector<double> part;
      for (int k = 0; k <= n; ++k) part.push_back(double(k) / n);
      const auto traj = step_scheme(field, sig, part, vec1(1.0), pi, 2);
      errs.push_back(std::abs(traj.back()[0] - exact));
    }
    for (std::size_t k = 1; k < errs.size(); ++k) CHECK(errs[k] < errs[k - 1]);
    // Weight-2 truncation of dy = y dx: local h^3 error, global h^2, with
    // constant ~ e/6, so ~ 4.4e-4 at h = 1/32.
    CHECK(errs.back() < errs.front() / 10.0);
    CHECK(errs.back() < 1e-3);
  }

  SUBCASE("mixed grading scheme tracks the flow") {
    const PiIndex pi = PiIndex::uniform(2.0, {1, 2});
    std::vector<ComponentPtr> comps;
    comps.push_back(rotation_component(0.5));
    Eigen::MatrixXd A(2, 2);
    A << -0.2, 0.1, 0.0, -0.3;
    comps.push_back(linear_component(A));
    const SmoothVectorField field(std::move(comps), {2.5, 1.5},
                                  Box::centered(2, 3.0));
    const TaylorParams params = admissible_params(pi, {2.5, 1.5});
    REQUIRE(params.N == 2);

    Eigen::MatrixXd vals(2, 2);
    vals << 0.0, 1.0,
            0.0, 1.0;
    const PLPath x({0.0, 1.0}, vals);
    const Eigen::VectorXd xi = vec2(1.0, 0.5);
    const double exact =
        ode_solve(field, x, xi, {1.0}).states[0][1];

    const auto basis = WordBasis::make(pi, 1.0);
    const SignatureFn sig = make_signature_fn(x, basis);
    std::vector<double> errs;
    for (int n : {2, 8, 32}) {
      std::vector<double> part;
      for (int k = 0; k <= n; ++k) part.push_back(double(k) / n);
      const auto traj = step_scheme(field, sig, part, xi, pi, params.N);
      errs.push_back(std::abs(traj.back()[1] - exact));
    }
    CHECK(errs[2] < errs[0]);
    CHECK(errs[2] < 1e-3);

    // Accumulation: the endpoint error stays within 10x of the summed
    // per-step remainders along the flow, and a fortiori of the summed
    // per-step bounds.
    {
      const Eigen::VectorXd exact_state = ode_solve(field, x, xi, {1.0}).states[0];
      std::vector<double> part;
      for (int k = 0; k <= 8; ++k) part.push_back(double(k) / 8);
      const auto traj = step_scheme(field, sig, part, xi, pi, params.N);
      const double global = (traj.back() - exact_state).norm();
      double local_sum = 0.0;
      double bound_sum = 0.0;
      for (int k = 0; k < 8; ++k) {
        const RemainderReport rep =
            remainder(field, x, xi, part[k], part[k + 1], params);
        local_sum += rep.remainder;
        bound_sum += rep.bound;
      }
      CHECK(global <= 10.0 * local_sum);
      CHECK(global <= 10.0 * bound_sum);
    }
  }

  SUBCASE("leaving the box interrupts the scheme") {
    const SmoothVectorField field = scalar_exponential_field(1.2);
    const PiIndex pi = PiIndex::homogeneous(1.0, 1);
    const auto basis = WordBasis::make(pi, 2.0);
    const PLPath x = line_path(0.0, 1.0);
    const SignatureFn sig = make_signature_fn(x, basis);
    bool thrown = false;
    try {
      step_scheme(field, sig, {0.0, 0.5, 1.0}, vec1(1.0), pi, 2);
    } catch (const DomainExitError& e) {
      thrown = true;
      // From y = 1 the first step adds (0.5 + 0.125) and crosses y = 1.2.
      CHECK(e.exit_time == doctest::Approx(0.5));
    }
    CHECK(thrown);
  }

  SUBCASE("partition validation") {
    const SmoothVectorField field = scalar_exponential_field();
    const PiIndex pi = PiIndex::homogeneous(1.0, 1);
    const auto basis = WordBasis::make(pi, 2.0);
    const SignatureFn sig = make_signature_fn(line_path(0.0, 1.0), basis);
    CHECK_THROWS_AS(step_scheme(field, sig, {}, vec1(1.0), pi, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(step_scheme(field, sig, {0.0, 0.0}, vec1(1.0), pi, 2),
                    std::invalid_argument);
  }
}

TEST_CASE("homogeneous smallest order matches the Euler exponent") {
  // At the smallest admissible order, (N+1)/p lands exactly on the first
  // word degree beyond one, so both error exponents agree.
  const PiIndex pi = PiIndex::homogeneous(2.0, 2);
  const TaylorParams params = admissible_params(pi, {2.2, 2.2});
  REQUIRE(params.N == 2);
  CHECK((params.N + 1) / params.p == doctest::Approx(params.theta).epsilon(1e-12));

  const double omega_val = 0.37;
  const double taylor_exp =
      std::pow(omega_val, (params.N + 1) / params.p);
  const double euler_exp = std::pow(omega_val, params.theta);
  CHECK(taylor_exp == doctest::Approx(euler_exp).epsilon(1e-12));
}
