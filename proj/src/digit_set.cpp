#include "fractspec/digit_set.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fractspec {

namespace {

std::vector<Rational> expand(const std::vector<Block>& blocks) {
  std::vector<Rational> out{Rational(0)};
  for (const auto& b : blocks) {
    std::vector<Rational> next;
    next.reserve(out.size() * static_cast<std::size_t>(b.length));
    for (const auto& x : out)
      for (long long i = 0; i < b.length; ++i) next.push_back(x + b.scale * Rational(i));
    out = std::move(next);
  }
  return out;
}

std::complex<double> unit_phasor(const Rational& turns) {
  // turns is reduced to [0, 1) exactly; only the final conversion rounds.
  double t = turns.frac().to_double();
  double angle = 2.0 * std::numbers::pi * t;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

DigitSet::DigitSet(std::vector<Rational> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw DomainError("digit set must be nonempty");
  std::sort(elements_.begin(), elements_.end());
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
    throw DomainError("digit set contains a repeated element");
}

DigitSet::DigitSet(std::vector<Rational> elements, std::vector<Block> structure) : DigitSet(std::move(elements)) {
  for (const auto& b : structure) {
    if (b.length < 1) throw DomainError("block length must be positive");
    if (b.length > 1 && b.scale.is_zero()) throw DomainError("block with zero scale");
  }
  auto sums = expand(structure);
  std::sort(sums.begin(), sums.end());
  if (std::adjacent_find(sums.begin(), sums.end()) != sums.end())
    throw NotDirectSumError("block structure is not a direct sum");
  if (sums != elements_) throw DomainError("block structure does not reproduce the digit set");
  structure_ = std::move(structure);
}

DigitSet DigitSet::consecutive(long long n) { return block(Rational(1), n); }

DigitSet DigitSet::block(const Rational& scale, long long n) {
  if (n < 1) throw DomainError("consecutive digit set needs n >= 1");
  std::vector<Block> blocks{{scale, n}};
  return DigitSet(expand(blocks), blocks);
}

DigitSet DigitSet::from_integers(std::initializer_list<long long> values) {
  std::vector<Rational> v;
  for (long long x : values) v.emplace_back(x);
  return DigitSet(std::move(v));
}

bool DigitSet::contains(const Rational& x) const { return std::binary_search(elements_.begin(), elements_.end(), x); }

bool DigitSet::is_integral() const {
  return std::all_of(elements_.begin(), elements_.end(), [](const Rational& x) { return x.is_integer(); });
}

Rational DigitSet::max_abs() const { return std::max(elements_.front().abs(), elements_.back().abs()); }

DigitSet DigitSet::scaled(const Rational& factor) const {
  if (factor.is_zero() && size() > 1) throw DomainError("scaling a digit set by zero collapses it");
  std::vector<Rational> v;
  v.reserve(size());
  for (const auto& x : elements_) v.push_back(x * factor);
  if (!structure_) return DigitSet(std::move(v));
  std::vector<Block> blocks = *structure_;
  for (auto& b : blocks) b.scale *= factor;
  return DigitSet(std::move(v), std::move(blocks));
}

DigitSet DigitSet::translated(const Rational& shift) const {
  std::vector<Rational> v;
  v.reserve(size());
  for (const auto& x : elements_) v.push_back(x + shift);
  return DigitSet(std::move(v));
}

DigitSet direct_sum(const DigitSet& a, const DigitSet& b) {
  std::vector<Rational> sums;
  sums.reserve(a.size() * b.size());
  for (const auto& x : a.elements())
    for (const auto& y : b.elements()) sums.push_back(x + y);
  std::sort(sums.begin(), sums.end());
  if (auto it = std::adjacent_find(sums.begin(), sums.end()); it != sums.end())
    throw NotDirectSumError("not a direct sum: " + it->to_string() + " is reached twice");
  if (a.structure() && b.structure()) {
    std::vector<Block> blocks = *a.structure();
    blocks.insert(blocks.end(), b.structure()->begin(), b.structure()->end());
    return DigitSet(std::move(sums), std::move(blocks));
  }
  return DigitSet(std::move(sums));
}

DigitSet alternate_digit_set(long long m, long long N, const Rational& rho) {
  if (m < 1 || N < 1) throw DomainError("alternate digit set needs m, N >= 1");
  if (rho <= Rational(0) || rho >= Rational(1)) throw DomainError("contraction ratio must lie in (0, 1)");
  Rational shift = Rational(1) + Rational(m) * rho - Rational(2 * N * m);
  return direct_sum(direct_sum(DigitSet::consecutive(m), DigitSet::block(Rational(2 * m), N)),
                    DigitSet::block(shift, 2));
}

std::complex<double> mask_eval(const DigitSet& d, double x) {
  std::complex<double> total{0.0, 0.0};
  for (const auto& digit : d.elements()) {
    double phase = digit.to_double() * x;
    phase -= std::floor(phase);
    double angle = 2.0 * std::numbers::pi * phase;
    total += std::complex<double>(std::cos(angle), std::sin(angle));
  }
  return total / static_cast<double>(d.size());
}

std::complex<double> mask_eval(const DigitSet& d, const Rational& x) {
  std::complex<double> total{0.0, 0.0};
  for (const auto& digit : d.elements()) total += unit_phasor(digit * x);
  return total / static_cast<double>(d.size());
}

std::optional<RootOfUnitySum> mask_root_sum(const DigitSet& d, const Rational& x, std::uint64_t max_order) {
  max_order = std::min(max_order, RootOfUnitySum::kMaxOrder);
  mpz_class order = 1;
  std::vector<Rational> phases;
  phases.reserve(d.size());
  for (const auto& digit : d.elements()) {
    phases.push_back((digit * x).frac());
    mpz_lcm(order.get_mpz_t(), order.get_mpz_t(), phases.back().denominator().get_mpz_t());
    if (order > max_order) return std::nullopt;
  }
  RootOfUnitySum sum(order.get_ui());
  for (const auto& ph : phases) {
    Rational k = ph * Rational(order);
    sum.add(static_cast<std::int64_t>(k.numerator().get_si()));
  }
  return sum;
}

std::optional<ZeroSetExpr> mask_zero_set(const DigitSet& d) {
  if (!d.structure()) return std::nullopt;
  ZeroSetComponent component;
  for (const auto& b : *d.structure()) {
    if (b.length == 1) continue;
    if (b.length == 2)
      component.atoms.emplace_back(OddLattice{Rational(1), b.scale});
    else
      component.atoms.emplace_back(LatticeComplement{b.scale.reciprocal(), b.length});
  }
  return ZeroSetExpr({component});
}

std::optional<bool> mask_vanishes(const DigitSet& d, const Rational& x, std::uint64_t max_order) {
  if (auto zs = mask_zero_set(d)) return zs->contains(x);
  if (auto sum = mask_root_sum(d, x, max_order)) return sum->is_zero();
  return std::nullopt;
}

}  // namespace fractspec
