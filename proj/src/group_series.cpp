#include "sigtaylor/group_series.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace sigtaylor {

WordBasis::WordBasis(PiIndex ix, double cap, std::size_t max_words)
    : ix_(std::move(ix)), cap_(cap) {
  words_ = enumerate_words(ix_, cap_, max_words);
  degrees_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    degrees_.push_back(degree(words_[i], ix_));
    index_.emplace(words_[i], static_cast<std::uint32_t>(i));
  }

  split_offsets_.reserve(words_.size() + 1);
  split_offsets_.push_back(0);
  for (const Word& w : words_) {
    for (int cut = 0; cut <= w.length(); ++cut) {
      Word pre(std::vector<int>(w.letters.begin(), w.letters.begin() + cut));
      Word suf(std::vector<int>(w.letters.begin() + cut, w.letters.end()));
      split_data_.push_back({index_.at(pre), index_.at(suf)});
    }
    split_offsets_.push_back(static_cast<std::uint32_t>(split_data_.size()));
  }
}

std::shared_ptr<const WordBasis> WordBasis::make(PiIndex ix, double cap,
                                                std::size_t max_words) {
  return std::shared_ptr<const WordBasis>(
      new WordBasis(std::move(ix), cap, max_words));
}

std::optional<std::size_t> WordBasis::find(const Word& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return static_cast<std::size_t>(it->second);
}

std::span<const WordBasis::Split> WordBasis::splits(std::size_t i) const {
  return {split_data_.data() + split_offsets_[i],
          split_data_.data() + split_offsets_[i + 1]};
}

bool WordBasis::same_shape(const WordBasis& other) const {
  return this == &other || (ix_ == other.ix_ && cap_ == other.cap_);
}

namespace {

void require_compatible(const GroupSeries& a, const GroupSeries& b) {
  if (!a.basis()->same_shape(*b.basis()))
    throw std::invalid_argument("series have incompatible grading or cap");
}

}  // namespace

GroupSeries::GroupSeries(BasisPtr basis, Eigen::VectorXd coeffs)
    : basis_(std::move(basis)), c_(std::move(coeffs)) {
  if (static_cast<std::size_t>(c_.size()) != basis_->size())
    throw std::invalid_argument("coefficient vector does not match the basis");
}

GroupSeries::GroupSeries(BasisPtr basis)
    : basis_(std::move(basis)),
      c_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis_->size()))) {}

GroupSeries GroupSeries::identity(BasisPtr basis) {
  GroupSeries s(std::move(basis));
  s.c_[0] = 1.0;  // canonical order puts the empty word first
  return s;
}

double GroupSeries::coeff(const Word& w) const {
  auto i = basis_->find(w);
  return i ? c_[static_cast<Eigen::Index>(*i)] : 0.0;
}

void GroupSeries::set_coeff(const Word& w, double value) {
  auto i = basis_->find(w);
  if (!i) throw std::out_of_range("word outside the basis cap");
  c_[static_cast<Eigen::Index>(*i)] = value;
}

GroupSeries& GroupSeries::operator+=(const GroupSeries& other) {
  require_compatible(*this, other);
  c_ += other.c_;
  return *this;
}

GroupSeries& GroupSeries::operator-=(const GroupSeries& other) {
  require_compatible(*this, other);
  c_ -= other.c_;
  return *this;
}

GroupSeries& GroupSeries::operator*=(double s) {
  c_ *= s;
  return *this;
}

GroupSeries operator+(GroupSeries a, const GroupSeries& b) { return a += b; }
GroupSeries operator-(GroupSeries a, const GroupSeries& b) { return a -= b; }
GroupSeries operator*(GroupSeries a, double s) { return a *= s; }

GroupSeries chen_product(const GroupSeries& a, const GroupSeries& b) {
  require_compatible(a, b);
  const WordBasis& basis = *a.basis();
  GroupSeries out(a.basis());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    double acc = 0.0;
    for (const auto& cut : basis.splits(i)) acc += a[cut.prefix] * b[cut.suffix];
    out[i] = acc;
  }
  return out;
}

GroupSeries inverse(const GroupSeries& a) {
  const WordBasis& basis = *a.basis();
  if (std::abs(a[0] - 1.0) > kGroupLikeTol)
    throw std::invalid_argument("inverse requires a unital series");
  GroupSeries b(a.basis());
  b[0] = 1.0;
  // Canonical order is nondecreasing in degree, so every proper prefix of
  // word i is already resolved when i is reached.
  for (std::size_t i = 1; i < basis.size(); ++i) {
    double acc = a[i];
    for (const auto& cut : basis.splits(i)) {
      if (cut.prefix == 0 || cut.suffix == 0) continue;
      acc += b[cut.prefix] * a[cut.suffix];
    }
    b[i] = -acc;
  }
  return b;
}

GroupSeries dilate(const GroupSeries& a, double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("dilation factor must be positive");
  const WordBasis& basis = *a.basis();
  const double pmax = basis.grading().p_max();
  GroupSeries out(a.basis());
  for (std::size_t i = 0; i < basis.size(); ++i)
    out[i] = a[i] * std::pow(lambda, pmax * basis.degree_of(i));
  return out;
}

double homogeneous_norm(const GroupSeries& a) {
  const WordBasis& basis = *a.basis();
  if (basis.cap() < 1.0 - kDegreeTol)
    throw std::invalid_argument("homogeneous norm needs cap >= 1");
  const double pmax = basis.grading().p_max();
  double norm = 0.0;
  for (std::size_t i = 1; i < basis.size(); ++i) {
    const double deg = basis.degree_of(i);
    if (deg > 1.0 + kDegreeTol) continue;
    norm += std::pow(std::abs(a[i]), 1.0 / (pmax * deg));
  }
  return norm;
}

double shuffle_defect(const GroupSeries& a) {
  const WordBasis& basis = *a.basis();
  const double cap = basis.cap() + kDegreeTol;
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double di = basis.degree_of(i);
    if (di > cap) break;
    for (std::size_t j = i; j < basis.size(); ++j) {
      if (di + basis.degree_of(j) > cap) break;
      const WordSum sh = shuffle(basis.word(i), basis.word(j));
      double rhs = 0.0;
      for (const auto& [w, c] : sh.terms()) {
        auto k = basis.find(w);
        if (!k) throw std::logic_error("shuffle left the enumerated span");
        rhs += c * a[*k];
      }
      worst = std::max(worst, std::abs(a[i] * a[j] - rhs));
    }
  }
  return worst;
}

bool is_group_like(const GroupSeries& a, double rel_tol) {
  const double scale =
      std::max(1.0, a.coeffs().cwiseAbs().maxCoeff());
  return shuffle_defect(a) <= rel_tol * scale;
}

namespace {

int nilpotency_steps(const WordBasis& basis) {
  double min_deg = 1.0;
  const PiIndex& ix = basis.grading();
  for (int l = 1; l <= ix.dimension(); ++l)
    min_deg = std::min(min_deg, 1.0 / ix.p(l));
  return static_cast<int>(std::floor(basis.cap() / min_deg)) + 2;
}

}  // namespace

GroupSeries exp_series(const GroupSeries& v) {
  if (std::abs(v[0]) > 1e-12)
    throw std::invalid_argument("exponential needs (v, empty) = 0");
  GroupSeries acc = GroupSeries::identity(v.basis());
  GroupSeries term = GroupSeries::identity(v.basis());
  const int steps = nilpotency_steps(*v.basis());
  for (int k = 1; k <= steps; ++k) {
    term = chen_product(term, v);
    term *= 1.0 / k;
    if (term.coeffs().cwiseAbs().maxCoeff() == 0.0) break;
    acc += term;
  }
  return acc;
}

GroupSeries log_series(const GroupSeries& a) {
  if (std::abs(a[0] - 1.0) > 1e-12)
    throw std::invalid_argument("logarithm needs (a, empty) = 1");
  GroupSeries z = a;
  z[0] = 0.0;
  GroupSeries acc(a.basis());
  GroupSeries term = GroupSeries::identity(a.basis());
  const int steps = nilpotency_steps(*a.basis());
  for (int k = 1; k <= steps; ++k) {
    term = chen_product(term, z);
    if (term.coeffs().cwiseAbs().maxCoeff() == 0.0) break;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    acc += term * (sign / k);
  }
  return acc;
}

std::string to_csv(const GroupSeries& a) {
  const WordBasis& basis = *a.basis();
  std::string out = "word,coefficient\n";
  char line[64];
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::snprintf(line, sizeof(line), "%s,%.17g\n", basis.word(i).str().c_str(),
                  a[i]);
    out += line;
  }
  return out;
}

GroupSeries series_from_csv(std::istream& in, const BasisPtr& basis) {
  GroupSeries out(basis);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && line.rfind("word,", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("malformed series row: " + line);
    const Word w = Word::parse(line.substr(0, comma));
    out.set_coeff(w, std::stod(line.substr(comma + 1)));
  }
  return out;
}

}  // namespace sigtaylor
