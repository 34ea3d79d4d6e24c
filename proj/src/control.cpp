#include "sigtaylor/control.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace sigtaylor {

namespace {

constexpr double kGridTimeTol = 1e-9;
constexpr double kTieTol = 1e-12;
constexpr std::size_t kTableLimit = 2000;

std::string format_cell(double s, double t, double omega_value) {
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "grid cell [%.12g, %.12g] alone has omega %.12g over budget",
                s, t, omega_value);
  return buf;
}

}  // namespace

SplitBudgetError::SplitBudgetError(double s, double t, double omega_value)
    : std::runtime_error(format_cell(s, t, omega_value)),
      cell_start(s),
      cell_end(t),
      cell_omega(omega_value) {}

ControlGrid::ControlGrid(std::vector<double> grid, SignatureFn source,
                         BasisPtr basis)
    : grid_(std::move(grid)), source_(std::move(source)), basis_(std::move(basis)) {
  if (grid_.size() < 2) throw std::invalid_argument("grid needs two points");
  for (std::size_t i = 1; i < grid_.size(); ++i)
    if (!(grid_[i] > grid_[i - 1]))
      throw std::invalid_argument("grid times must strictly increase");
  cells_.resize(grid_.size() - 1);
}

std::vector<double> ControlGrid::dyadic_refine(std::vector<double> grid,
                                               int levels) {
  for (int lvl = 0; lvl < levels; ++lvl) {
    std::vector<double> next;
    next.reserve(grid.size() * 2);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      next.push_back(grid[i]);
      next.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    next.push_back(grid.back());
    grid = std::move(next);
  }
  return grid;
}

std::size_t ControlGrid::index_of(double t) const {
  const auto it = std::lower_bound(grid_.begin(), grid_.end(), t - kGridTimeTol);
  if (it == grid_.end() || std::abs(*it - t) > kGridTimeTol)
    throw std::invalid_argument("time is not on the control grid");
  return static_cast<std::size_t>(it - grid_.begin());
}

const GroupSeries& ControlGrid::cell(std::size_t i) const {
  if (i + 1 >= grid_.size()) throw std::out_of_range("cell index out of range");
  if (!cells_[i]) cells_[i] = source_(grid_[i], grid_[i + 1]);
  return *cells_[i];
}

const GroupSeries& ControlGrid::pair(std::size_t a, std::size_t b) const {
  if (b < a || b >= grid_.size())
    throw std::out_of_range("pair indices out of range");
  const auto key = std::make_pair(a, b);
  auto it = pairs_.find(key);
  if (it != pairs_.end()) return it->second;
  GroupSeries acc = GroupSeries::identity(basis_);
  if (b > a) {
    acc = cell(a);
    for (std::size_t k = a + 1; k < b; ++k) acc = chen_product(acc, cell(k));
  }
  return pairs_.emplace(key, std::move(acc)).first->second;
}

ControlGrid make_control_grid(const PLPath& x, const BasisPtr& basis, double s,
                              double t, int refine_levels,
                              const Eigen::VectorXd* lip_norms) {
  if (!(s < t)) throw std::invalid_argument("need s < t");
  std::vector<double> grid;
  grid.push_back(s);
  for (double bp : x.times)
    if (bp > s + kGridTimeTol && bp < t - kGridTimeTol) grid.push_back(bp);
  grid.push_back(t);
  grid = ControlGrid::dyadic_refine(std::move(grid), refine_levels);
  SignatureFn fn = lip_norms ? make_signature_fn(x, basis, *lip_norms)
                             : make_signature_fn(x, basis);
  return ControlGrid(std::move(grid), std::move(fn), basis);
}

namespace {

struct SweepWord {
  std::size_t basis_index;
  double exponent;  // 1 / |w|
};

std::vector<SweepWord> resolve_words(const ControlGrid& g,
                                     const std::vector<Word>& words) {
  std::vector<SweepWord> out;
  out.reserve(words.size());
  const WordBasis& basis = *g.basis();
  for (const Word& w : words) {
    auto idx = basis.find(w);
    if (!idx) throw std::invalid_argument("word outside the basis cap");
    const double deg = basis.degree_of(*idx);
    if (deg <= 0.0)
      throw std::invalid_argument("the empty word has no variation");
    out.push_back({*idx, 1.0 / deg});
  }
  return out;
}

}  // namespace

std::vector<double> word_variations(const ControlGrid& g,
                                    const std::vector<Word>& words, double s,
                                    double t) {
  const std::vector<SweepWord> sw = resolve_words(g, words);
  const std::size_t a = g.index_of(s);
  const std::size_t b = g.index_of(t);
  if (b < a) throw std::invalid_argument("need s <= t");
  const std::size_t m = b - a + 1;
  const std::size_t nw = sw.size();

  std::vector<std::vector<double>> V(nw, std::vector<double>(m, 0.0));
  std::vector<std::vector<int>> pieces(nw, std::vector<int>(m, 0));
  if (m >= 2) {
    for (std::size_t w = 0; w < nw; ++w)
      std::fill(V[w].begin() + 1, V[w].end(),
                -std::numeric_limits<double>::infinity());
  }

  for (std::size_t j = 1; j < m; ++j) {
    // walk the column X_{a+i, a+j} downward in i, one live series
    GroupSeries column = g.cell(a + j - 1);
    for (std::size_t i = j - 1;; --i) {
      if (i != j - 1) column = chen_product(g.cell(a + i), column);
      // every V[w][i] with i < j is final once column j is reached
      for (std::size_t w = 0; w < nw; ++w) {
        const double contrib =
            std::pow(std::abs(column[sw[w].basis_index]), sw[w].exponent);
        const double cand = V[w][i] + contrib;
        const int cand_pieces = pieces[w][i] + 1;
        if (cand > V[w][j] + kTieTol) {
          V[w][j] = cand;
          pieces[w][j] = cand_pieces;
        } else if (cand > V[w][j] - kTieTol && cand_pieces < pieces[w][j]) {
          V[w][j] = std::max(V[w][j], cand);
          pieces[w][j] = cand_pieces;
        }
      }
      if (i == 0) break;
    }
  }

  std::vector<double> out(nw);
  for (std::size_t w = 0; w < nw; ++w) out[w] = V[w][m - 1];
  return out;
}

double word_variation(const ControlGrid& g, const Word& w, double s, double t) {
  return word_variations(g, {w}, s, t)[0];
}

namespace {

std::vector<Word> omega_words(const ControlGrid& g, double cap) {
  const WordBasis& basis = *g.basis();
  std::vector<Word> words;
  for (std::size_t i = 1; i < basis.size(); ++i) {
    if (basis.degree_of(i) > cap + kDegreeTol) break;
    words.push_back(basis.word(i));
  }
  if (words.empty())
    throw std::invalid_argument("no words of positive degree within the cap");
  return words;
}

}  // namespace

double control_omega(const ControlGrid& g, double s, double t, double cap) {
  const std::vector<double> vars = word_variations(g, omega_words(g, cap), s, t);
  double omega_value = 0.0;
  for (double v : vars) omega_value += v;
  return omega_value;
}

std::vector<Eigen::MatrixXd> variation_tables(const ControlGrid& g,
                                              const std::vector<Word>& words) {
  const std::vector<SweepWord> sw = resolve_words(g, words);
  const std::size_t n = g.size();
  if (n > kTableLimit)
    throw std::length_error("variation table requested on an oversized grid");
  const std::size_t nw = sw.size();

  // per-word contribution matrix |(X_{i,j}, w)|^(1/|w|)
  std::vector<Eigen::MatrixXd> contrib(
      nw, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(n)));
  for (std::size_t j = 1; j < n; ++j) {
    GroupSeries column = g.cell(j - 1);
    for (std::size_t i = j - 1;; --i) {
      if (i != j - 1) column = chen_product(g.cell(i), column);
      for (std::size_t w = 0; w < nw; ++w)
        contrib[w](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            std::pow(std::abs(column[sw[w].basis_index]), sw[w].exponent);
      if (i == 0) break;
    }
  }

  std::vector<Eigen::MatrixXd> tables(
      nw, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(n)));
  for (std::size_t w = 0; w < nw; ++w) {
    for (std::size_t a = 0; a + 1 < n; ++a) {
      std::vector<double> V(n, -std::numeric_limits<double>::infinity());
      V[a] = 0.0;
      for (std::size_t j = a + 1; j < n; ++j) {
        for (std::size_t i = a; i < j; ++i) {
          if (V[i] == -std::numeric_limits<double>::infinity()) continue;
          V[j] = std::max(
              V[j], V[i] + contrib[w](static_cast<Eigen::Index>(i),
                                      static_cast<Eigen::Index>(j)));
        }
        tables[w](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) =
            V[j];
      }
    }
  }
  return tables;
}

Eigen::MatrixXd variation_table(const ControlGrid& g, const Word& w) {
  return variation_tables(g, {w})[0];
}

Eigen::MatrixXd omega_table(const ControlGrid& g, double cap) {
  const std::vector<Word> words = omega_words(g, cap);
  const std::vector<Eigen::MatrixXd> tables = variation_tables(g, words);
  Eigen::MatrixXd total = tables[0];
  for (std::size_t w = 1; w < tables.size(); ++w) total += tables[w];
  return total;
}

std::vector<double> split_by_control(const ControlGrid& g, double s, double t,
                                     double budget) {
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be positive");
  const std::size_t a = g.index_of(s);
  const std::size_t b = g.index_of(t);
  if (b <= a) throw std::invalid_argument("need s < t");
  const double slack = budget * (1.0 + 1e-12);

  std::vector<double> cut_times = {g.time(a)};
  std::size_t current = a;
  while (current < b) {
    // furthest grid point still within budget; omega grows with the endpoint
    std::size_t lo = current + 1;
    if (control_omega(g, g.time(current), g.time(lo)) > slack) {
      throw SplitBudgetError(g.time(current), g.time(lo),
                             control_omega(g, g.time(current), g.time(lo)));
    }
    std::size_t hi = b;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo + 1) / 2;
      if (control_omega(g, g.time(current), g.time(mid)) <= slack)
        lo = mid;
      else
        hi = mid - 1;
    }
    current = lo;
    cut_times.push_back(g.time(current));
  }
  return cut_times;
}

}  // namespace sigtaylor
