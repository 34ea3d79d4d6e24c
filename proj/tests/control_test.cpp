#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "sigtaylor/control.hpp"
#include "sigtaylor/group_series.hpp"
#include "sigtaylor/lift.hpp"
#include "sigtaylor/words.hpp"

using namespace sigtaylor;

namespace {

PLPath line_path(double slope, double t0, double t1, int segments) {
  std::vector<double> times;
  Eigen::MatrixXd values(1, segments + 1);
  for (int i = 0; i <= segments; ++i) {
    const double t = t0 + (t1 - t0) * i / segments;
    times.push_back(t);
    values(0, i) = slope * t;
  }
  return PLPath(times, values);
}

PLPath random_path(std::mt19937& rng, int d, int segments, double step_scale) {
  std::uniform_real_distribution<double> step(-step_scale, step_scale);
  std::vector<double> times;
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(d, segments + 1);
  for (int i = 0; i <= segments; ++i) {
    times.push_back(static_cast<double>(i) / segments);
    if (i > 0) {
      for (int k = 0; k < d; ++k) values(k, i) = values(k, i - 1) + step(rng);
    }
  }
  return PLPath(times, values);
}

}  // namespace

TEST_CASE("variation of a single coordinate matches hand values") {
  // Monotone line x(t) = t: for p = 2 the whole increment dominates every
  // split of the single-letter word, and the double letter carries t^2/2.
  const PiIndex pi = PiIndex::homogeneous(2.0, 1);
  auto basis = WordBasis::make(pi, 1.0);
  PLPath path = line_path(1.0, 0.0, 1.0, 2);
  ControlGrid grid = make_control_grid(path, basis, 0.0, 1.0, 0);
  CHECK(grid.size() == 3);

  const double var1 = word_variation(grid, Word({1}), 0.0, 1.0);
  CHECK(var1 == doctest::Approx(1.0).epsilon(1e-12));

  const double var11 = word_variation(grid, Word({1, 1}), 0.0, 1.0);
  CHECK(var11 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("zigzag path forces the refined partition") {
  // 0 -> 1 -> 0: the full increment vanishes, so the supremum must pick the
  // breakpoint and score |1|^2 + |-1|^2 = 2 for the single-letter word at
  // p = 2.
  const PiIndex pi = PiIndex::homogeneous(2.0, 1);
  auto basis = WordBasis::make(pi, 1.0);
  std::vector<double> times = {0.0, 0.5, 1.0};
  Eigen::MatrixXd values(1, 3);
  values << 0.0, 1.0, 0.0;
  PLPath path(times, values);
  ControlGrid grid = make_control_grid(path, basis, 0.0, 1.0, 0);
  CHECK(word_variation(grid, Word({1}), 0.0, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("dynamic programme agrees with exhaustive partition search") {
  std::mt19937 rng(20240915);
  const PiIndex pi = PiIndex::homogeneous(2.0, 2);
  auto basis = WordBasis::make(pi, 1.0);
  const std::vector<Word> test_words = {Word({1}), Word({2}), Word({1, 2}),
                                        Word({2, 1})};
  for (int trial = 0; trial < 12; ++trial) {
    PLPath path = random_path(rng, 2, 6, 0.8);
    ControlGrid grid = make_control_grid(path, basis, 0.0, 1.0, 0);
    const std::size_t last = grid.size() - 1;
    const std::vector<double> vars =
        word_variations(grid, test_words, 0.0, 1.0);
    REQUIRE(vars.size() == test_words.size());
    for (std::size_t wi = 0; wi < test_words.size(); ++wi) {
      const Word& w = test_words[wi];
      const double deg = degree(w, pi);
      auto increment = [&](std::size_t i, std::size_t j) {
        GroupSeries sig =
            path_signature(path, grid.time(i), grid.time(j), basis);
        return std::pow(std::abs(sig.coeff(w)), 1.0 / deg);
      };
      const double brute = oracle::brute_partition_sup(0, last, increment);
      CHECK(vars[wi] == doctest::Approx(brute).epsilon(1e-10));
    }
  }
}

TEST_CASE("control is superadditive and monotone under refinement") {
  std::mt19937 rng(77);
  const PiIndex pi = PiIndex::uniform(2.0, {1, 2});
  auto basis = WordBasis::make(pi, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    PLPath path = random_path(rng, 2, 5, 0.6);
    ControlGrid coarse = make_control_grid(path, basis, 0.0, 1.0, 0);
    ControlGrid fine = make_control_grid(path, basis, 0.0, 1.0, 2);

    std::uniform_int_distribution<std::size_t> pick(1, coarse.size() - 2);
    const double mid = coarse.time(pick(rng));
    const double left = control_omega(coarse, 0.0, mid);
    const double right = control_omega(coarse, mid, 1.0);
    const double whole = control_omega(coarse, 0.0, 1.0);
    CHECK(left + right <= whole + 1e-10 * (1.0 + whole));

    // A finer grid can only enlarge the family of partitions.
    const double refined = control_omega(fine, 0.0, 1.0);
    CHECK(refined >= whole - 1e-10 * (1.0 + whole));
  }
}

TEST_CASE("signature coefficients obey the variation bound") {
  std::mt19937 rng(4242);
  const PiIndex pi = PiIndex::homogeneous(2.0, 2);
  auto basis = WordBasis::make(pi, 1.0);
  PLPath path = random_path(rng, 2, 6, 0.5);
  ControlGrid grid = make_control_grid(path, basis, 0.0, 1.0, 1);
  for (std::size_t i = 0; i < grid.size(); i += 2) {
    for (std::size_t j = i + 1; j < grid.size(); j += 2) {
      GroupSeries sig = path_signature(path, grid.time(i), grid.time(j), basis);
      for (const Word& w : basis->words()) {
        if (w.length() == 0) continue;
        const double deg = degree(w, pi);
        const double var = word_variation(grid, w, grid.time(i), grid.time(j));
        CHECK(std::abs(sig.coeff(w)) <= std::pow(var, deg) + 1e-12);
      }
    }
  }
}

TEST_CASE("variation tables expose every subinterval consistently") {
  std::mt19937 rng(99);
  const PiIndex pi = PiIndex::homogeneous(2.0, 1);
  auto basis = WordBasis::make(pi, 1.0);
  PLPath path = random_path(rng, 1, 4, 0.7);
  ControlGrid grid = make_control_grid(path, basis, 0.0, 1.0, 0);
  const Word w({1});
  const Eigen::MatrixXd table = variation_table(grid, w);
  const std::size_t n = grid.size();
  REQUIRE(table.rows() == static_cast<Eigen::Index>(n));
  REQUIRE(table.cols() == static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(table(i, i) == 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      CHECK(table(i, j) ==
            doctest::Approx(word_variation(grid, w, grid.time(i), grid.time(j)))
                .epsilon(1e-12));
    }
  }

  const Eigen::MatrixXd omega = omega_table(grid);
  CHECK(omega(0, n - 1) ==
        doctest::Approx(control_omega(grid, 0.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("control splitting respects the budget") {
  const PiIndex pi = PiIndex::homogeneous(1.0, 1);
  auto basis = WordBasis::make(pi, 1.0);
  PLPath path = line_path(1.0, 0.0, 1.0, 4);
  ControlGrid grid = make_control_grid(path, basis, 0.0, 1.0, 0);
  CHECK(control_omega(grid, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("an exact budget produces the obvious halves") {
    const auto cuts = split_by_control(grid, 0.0, 1.0, 0.5);
    REQUIRE(cuts.size() == 3);
    CHECK(cuts[0] == doctest::Approx(0.0));
    CHECK(cuts[1] == doctest::Approx(0.5));
    CHECK(cuts[2] == doctest::Approx(1.0));
  }

  SUBCASE("every piece stays within budget and the count is controlled") {
    const double budget = 0.26;
    const auto cuts = split_by_control(grid, 0.0, 1.0, budget);
    REQUIRE(cuts.size() >= 2);
    CHECK(cuts.front() == doctest::Approx(0.0));
    CHECK(cuts.back() == doctest::Approx(1.0));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      CHECK(control_omega(grid, cuts[i], cuts[i + 1]) <=
            budget * (1.0 + 1e-9));
    }
    const double total = control_omega(grid, 0.0, 1.0);
    CHECK(static_cast<double>(cuts.size() - 1) <= total / budget + 1.0 + 1e-9);
  }

  SUBCASE("a budget below a single cell is reported with the cell") {
    try {
      split_by_control(grid, 0.0, 1.0, 0.1);
      FAIL("expected SplitBudgetError");
    } catch (const SplitBudgetError& err) {
      CHECK(err.cell_omega > 0.1);
      CHECK(err.cell_end > err.cell_start);
    }
  }
}

TEST_CASE("piece counts stay bounded for random paths") {
  std::mt19937 rng(1311);
  const PiIndex pi = PiIndex::homogeneous(2.0, 2);
  auto basis = WordBasis::make(pi, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    PLPath path = random_path(rng, 2, 6, 0.4);
    ControlGrid grid = make_control_grid(path, basis, 0.0, 1.0, 1);
    const double total = control_omega(grid, 0.0, 1.0);
    if (total <= 0.0) continue;
    const double budget = total / 3.0;
    std::vector<double> cuts;
    try {
      cuts = split_by_control(grid, 0.0, 1.0, budget);
    } catch (const SplitBudgetError&) {
      continue;  // a single cell can dominate a rough random path
    }
    CHECK(static_cast<double>(cuts.size() - 1) <= total / budget + 1.0 + 1e-9);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      CHECK(control_omega(grid, cuts[i], cuts[i + 1]) <=
            budget * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("grid validation rejects bad queries") {
  const PiIndex pi = PiIndex::homogeneous(2.0, 1);
  auto basis = WordBasis::make(pi, 1.0);
  PLPath path = line_path(1.0, 0.0, 1.0, 2);
  ControlGrid grid = make_control_grid(path, basis, 0.0, 1.0, 0);
  CHECK_THROWS_AS(word_variation(grid, Word({1}), 0.3, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(word_variation(grid, Word(std::vector<int>{}), 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(word_variation(grid, Word({1, 1, 1}), 0.0, 1.0),
                  std::invalid_argument);
  CHECK(word_variation(grid, Word({1}), 0.5, 0.5) == 0.0);
}

TEST_CASE("synthetic group paths drive the control as well") {
  // Two-cell path from log-increments; the grid machinery should accept its
  // signature function and keep superadditivity.
  const PiIndex pi = PiIndex::homogeneous(2.0, 2);
  auto basis = WordBasis::make(pi, 1.0);
  GroupSeries va(basis);
  va.set_coeff(Word({1}), 0.4);
  va.set_coeff(Word({2}), -0.2);
  GroupSeries vb(basis);
  vb.set_coeff(Word({1}), -0.1);
  vb.set_coeff(Word({2}), 0.3);
  SyntheticGroupPath synth({va, vb}, {0.0, 0.5, 1.0});
  ControlGrid grid(synth.times(), synth.fn(), basis);
  const double omega = control_omega(grid, 0.0, 1.0);
  CHECK(omega > 0.0);
  const double left = control_omega(grid, 0.0, 0.5);
  const double right = control_omega(grid, 0.5, 1.0);
  CHECK(left + right <= omega + 1e-10);
}
