#include "sigtaylor/words.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigtaylor {

namespace {

void check_dimension(int d) {
  if (d < 1 || d > 9)
    throw std::invalid_argument("alphabet dimension must be in 1..9");
}

}  // namespace

PiIndex::PiIndex(std::vector<double> p_list) : p_(std::move(p_list)) {
  check_dimension(static_cast<int>(p_.size()));
  for (double p : p_)
    if (!(p >= 1.0) || !std::isfinite(p))
      throw std::invalid_argument("variation exponents must satisfy p_i >= 1");
  p_max_ = *std::max_element(p_.begin(), p_.end());
}

PiIndex PiIndex::uniform(double p, std::vector<int> k_list) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw std::invalid_argument("uniform exponent must satisfy p >= 1");
  check_dimension(static_cast<int>(k_list.size()));
  const int kmax = static_cast<int>(std::floor(p));
  PiIndex ix;
  ix.uniform_p_ = p;
  ix.k_ = std::move(k_list);
  ix.p_.reserve(ix.k_.size());
  for (int k : ix.k_) {
    if (k < 1 || k > kmax)
      throw std::invalid_argument("letter weights must lie in 1..floor(p)");
    ix.p_.push_back(p / k);
  }
  ix.p_max_ = *std::max_element(ix.p_.begin(), ix.p_.end());
  return ix;
}

PiIndex PiIndex::homogeneous(double p, int d) {
  check_dimension(d);
  return uniform(p, std::vector<int>(static_cast<std::size_t>(d), 1));
}

double PiIndex::p(int letter) const {
  if (letter < 1 || letter > dimension())
    throw std::out_of_range("letter outside the alphabet");
  return p_[static_cast<std::size_t>(letter - 1)];
}

double PiIndex::uniform_p() const {
  if (!uniform_graded())
    throw std::logic_error("grading has no uniform exponent");
  return uniform_p_;
}

int PiIndex::k(int letter) const {
  if (!uniform_graded())
    throw std::logic_error("grading has no uniform exponent");
  if (letter < 1 || letter > dimension())
    throw std::out_of_range("letter outside the alphabet");
  return k_[static_cast<std::size_t>(letter - 1)];
}

const std::vector<int>& PiIndex::letter_weights() const {
  if (!uniform_graded())
    throw std::logic_error("grading has no uniform exponent");
  return k_;
}

bool PiIndex::operator==(const PiIndex& other) const {
  return p_ == other.p_ && k_ == other.k_ && uniform_p_ == other.uniform_p_;
}

Word Word::prepended(int letter) const {
  Word w;
  w.letters.reserve(letters.size() + 1);
  w.letters.push_back(letter);
  w.letters.insert(w.letters.end(), letters.begin(), letters.end());
  return w;
}

Word Word::appended(int letter) const {
  Word w(*this);
  w.letters.push_back(letter);
  return w;
}

Word Word::reversed() const {
  Word w(*this);
  std::reverse(w.letters.begin(), w.letters.end());
  return w;
}

Word Word::concat(const Word& a, const Word& b) {
  Word w(a);
  w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
  return w;
}

std::string Word::str() const {
  if (letters.empty()) return "e";
  std::string s;
  s.reserve(letters.size());
  for (int l : letters) s.push_back(static_cast<char>('0' + l));
  return s;
}

Word Word::parse(std::string_view text) {
  if (text == "e" || text.empty()) return Word();
  Word w;
  w.letters.reserve(text.size());
  for (char c : text) {
    if (c < '1' || c > '9')
      throw std::invalid_argument("word letters must be digits 1..9");
    w.letters.push_back(c - '0');
  }
  return w;
}

bool Word::operator<(const Word& other) const {
  if (letters.size() != other.letters.size())
    return letters.size() < other.letters.size();
  return letters < other.letters;
}

void WordSum::add(const Word& w, double c) {
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  } else if (c == 0.0) {
    terms_.erase(it);
  }
}

double WordSum::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? 0.0 : it->second;
}

double WordSum::total_mass() const {
  double m = 0.0;
  for (const auto& [w, c] : terms_) m += c;
  return m;
}

double degree(const Word& w, const PiIndex& ix) {
  double deg = 0.0;
  for (int l : w.letters) deg += 1.0 / ix.p(l);
  return deg;
}

long long weight(const Word& w, const PiIndex& ix) {
  long long sum = 0;
  for (int l : w.letters) sum += ix.k(l);
  return sum;
}

std::vector<Word> enumerate_words(const PiIndex& ix, double cap,
                                  std::size_t max_count) {
  if (!(cap >= 0.0)) throw std::invalid_argument("degree cap must be >= 0");
  const double limit = cap + kDegreeTol;
  std::vector<Word> out;
  std::vector<double> degs;

  // Depth-first over one-letter extensions; degrees only grow.
  std::vector<std::pair<Word, double>> stack;
  stack.emplace_back(Word(), 0.0);
  while (!stack.empty()) {
    auto [w, deg] = std::move(stack.back());
    stack.pop_back();
    if (out.size() >= max_count)
      throw std::length_error("word enumeration exceeds the configured limit");
    out.push_back(w);
    degs.push_back(deg);
    for (int letter = ix.dimension(); letter >= 1; --letter) {
      const double dnew = deg + 1.0 / ix.p(letter);
      if (dnew <= limit) stack.emplace_back(w.appended(letter), dnew);
    }
  }

  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (degs[a] < degs[b] - kDegreeTol) return true;
    if (degs[b] < degs[a] - kDegreeTol) return false;
    return out[a] < out[b];
  });
  std::vector<Word> sorted;
  sorted.reserve(out.size());
  for (std::size_t i : order) sorted.push_back(std::move(out[i]));
  return sorted;
}

namespace {

WordSum shuffle_rec(const Word& a, const Word& b) {
  if (a.empty()) {
    WordSum s;
    s.add(b, 1.0);
    return s;
  }
  if (b.empty()) {
    WordSum s;
    s.add(a, 1.0);
    return s;
  }
  Word atail(std::vector<int>(a.letters.begin() + 1, a.letters.end()));
  Word btail(std::vector<int>(b.letters.begin() + 1, b.letters.end()));
  WordSum left = shuffle_rec(atail, b);
  WordSum right = shuffle_rec(a, btail);
  WordSum s;
  for (const auto& [w, c] : left.terms()) s.add(w.prepended(a.letters[0]), c);
  for (const auto& [w, c] : right.terms()) s.add(w.prepended(b.letters[0]), c);
  return s;
}

}  // namespace

WordSum shuffle(const Word& a, const Word& b) { return shuffle_rec(a, b); }

double theta(const PiIndex& ix) {
  const std::vector<Word> low = enumerate_words(ix, 1.0);
  double best = 0.0;
  bool found = false;
  for (const Word& w : low) {
    const double deg = degree(w, ix);
    for (int letter = 1; letter <= ix.dimension(); ++letter) {
      const double dnew = deg + 1.0 / ix.p(letter);
      if (dnew > 1.0 + kDegreeTol && (!found || dnew < best)) {
        best = dnew;
        found = true;
      }
    }
  }
  if (!found) throw std::logic_error("no word degree exceeds 1");
  return best;
}

}  // namespace sigtaylor
