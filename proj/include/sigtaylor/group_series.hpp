#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigtaylor/words.hpp"

namespace sigtaylor {

/// Immutable enumeration context shared by all series over one grading/cap:
/// the canonical word list, reverse lookup, and per-word deconcatenations.
class WordBasis {
 public:
  struct Split {
    std::uint32_t prefix;
    std::uint32_t suffix;
  };

  static std::shared_ptr<const WordBasis> make(
      PiIndex ix, double cap, std::size_t max_words = kDefaultWordLimit);

  const PiIndex& grading() const { return ix_; }
  double cap() const { return cap_; }

  std::size_t size() const { return words_.size(); }
  const Word& word(std::size_t i) const { return words_[i]; }
  const std::vector<Word>& words() const { return words_; }
  double degree_of(std::size_t i) const { return degrees_[i]; }
  std::optional<std::size_t> find(const Word& w) const;

  /// All ways to cut word i in two, including the trivial cuts.
  std::span<const Split> splits(std::size_t i) const;

  bool same_shape(const WordBasis& other) const;

 private:
  WordBasis(PiIndex ix, double cap, std::size_t max_words);

  PiIndex ix_;
  double cap_;
  std::vector<Word> words_;
  std::vector<double> degrees_;
  std::map<Word, std::uint32_t> index_;
  std::vector<std::uint32_t> split_offsets_;
  std::vector<Split> split_data_;
};

using BasisPtr = std::shared_ptr<const WordBasis>;

/// Truncated series over the words of a basis, dense in canonical order.
class GroupSeries {
 public:
  GroupSeries(BasisPtr basis, Eigen::VectorXd coeffs);
  explicit GroupSeries(BasisPtr basis);

  /// Series with (a, empty) = 1 and all other coefficients zero.
  static GroupSeries identity(BasisPtr basis);

  const BasisPtr& basis() const { return basis_; }
  const Eigen::VectorXd& coeffs() const { return c_; }
  Eigen::VectorXd& coeffs() { return c_; }

  double operator[](std::size_t i) const { return c_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return c_[static_cast<Eigen::Index>(i)]; }

  /// Coefficient of w, zero for words outside the basis.
  double coeff(const Word& w) const;
  void set_coeff(const Word& w, double value);

  GroupSeries& operator+=(const GroupSeries& other);
  GroupSeries& operator-=(const GroupSeries& other);
  GroupSeries& operator*=(double s);

 private:
  BasisPtr basis_;
  Eigen::VectorXd c_;
};

GroupSeries operator+(GroupSeries a, const GroupSeries& b);
GroupSeries operator-(GroupSeries a, const GroupSeries& b);
GroupSeries operator*(GroupSeries a, double s);

/// Concatenation (Chen) product: (ab, w) = sum over cuts w = uv of (a,u)(b,v).
GroupSeries chen_product(const GroupSeries& a, const GroupSeries& b);

/// Two-sided concatenation inverse of a unital series.
GroupSeries inverse(const GroupSeries& a);

/// Dilation: coefficient of w scaled by lambda^(p_max |w|); lambda > 0.
GroupSeries dilate(const GroupSeries& a, double lambda);

/// Sum of |(a,w)|^(1 / (p_max |w|)) over words 0 < |w| <= 1.
double homogeneous_norm(const GroupSeries& a);

/// Largest violation of the shuffle identity over basis word pairs whose
/// degrees sum to at most cap.
double shuffle_defect(const GroupSeries& a);

inline constexpr double kGroupLikeTol = 1e-9;

/// Defect test, relative to the largest coefficient magnitude.
bool is_group_like(const GroupSeries& a, double rel_tol = kGroupLikeTol);

/// Truncated concatenation exponential of a series with (v, empty) = 0.
GroupSeries exp_series(const GroupSeries& v);

/// Truncated concatenation logarithm of a series with (a, empty) = 1.
GroupSeries log_series(const GroupSeries& a);

/// "word,coefficient" rows in canonical order, with header.
std::string to_csv(const GroupSeries& a);
GroupSeries series_from_csv(std::istream& in, const BasisPtr& basis);

}  // namespace sigtaylor
