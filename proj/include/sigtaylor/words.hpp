#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sigtaylor/numerics.hpp"

namespace sigtaylor {

/// Grading of the driving signal: one variation exponent p_i >= 1 per letter.
///
/// A letter contributes 1/p_i to the degree of a word.  When every exponent
/// has the form p / k_i for a common p >= 1 and integers k_i in {1..floor(p)},
/// the grading also assigns each word an exact integer weight sum(k_i), which
/// is p times its degree.
class PiIndex {
 public:
  /// Arbitrary exponents, no integer weights.
  explicit PiIndex(std::vector<double> p_list);

  /// Exponents p / k_i derived from a common p and integer weights k_i.
  static PiIndex uniform(double p, std::vector<int> k_list);

  /// All letters share the same exponent p (k_i = 1).
  static PiIndex homogeneous(double p, int d);

  int dimension() const { return static_cast<int>(p_.size()); }
  double p(int letter) const;
  double p_max() const { return p_max_; }
  const std::vector<double>& exponents() const { return p_; }

  bool uniform_graded() const { return uniform_p_ > 0.0; }
  double uniform_p() const;
  int k(int letter) const;
  const std::vector<int>& letter_weights() const;

  bool operator==(const PiIndex& other) const;
  bool operator!=(const PiIndex& other) const { return !(*this == other); }

 private:
  PiIndex() = default;

  std::vector<double> p_;
  std::vector<int> k_;
  double uniform_p_ = 0.0;
  double p_max_ = 1.0;
};

/// Word over the alphabet {1..d}; the empty word is allowed.
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> ls) : letters(std::move(ls)) {}

  int length() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }

  Word prepended(int letter) const;
  Word appended(int letter) const;
  Word reversed() const;
  static Word concat(const Word& a, const Word& b);

  /// Bare digit string, "e" for the empty word.
  std::string str() const;
  static Word parse(std::string_view text);

  /// Length-then-lexicographic order (grading-independent).
  bool operator<(const Word& other) const;
  bool operator==(const Word& other) const { return letters == other.letters; }
  bool operator!=(const Word& other) const { return !(*this == other); }
};

/// Finite formal sum of words with real coefficients; zeros are not stored.
class WordSum {
 public:
  void add(const Word& w, double c);
  double coeff(const Word& w) const;
  const std::map<Word, double>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  double total_mass() const;

 private:
  std::map<Word, double> terms_;
};

/// Degree |w| = sum of 1/p_i over the letters; |empty| = 0.
double degree(const Word& w, const PiIndex& ix);

/// Integer weight sum of k_i (= p times the degree); requires a uniform
/// grading.
long long weight(const Word& w, const PiIndex& ix);

inline constexpr std::size_t kDefaultWordLimit = 200000;

/// All words of degree <= cap + kDegreeTol, sorted by (degree, length, lex).
/// Throws if more than max_count words qualify.
std::vector<Word> enumerate_words(const PiIndex& ix, double cap,
                                  std::size_t max_count = kDefaultWordLimit);

/// Shuffle product with multiplicities; total mass is binomial(m1+m2, m1).
WordSum shuffle(const Word& a, const Word& b);

/// Smallest word degree exceeding 1, found among one-letter extensions of
/// words of degree <= 1.
double theta(const PiIndex& ix);

}  // namespace sigtaylor
