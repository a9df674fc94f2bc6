#include "fractspec/zero_set.hpp"

namespace fractspec {

bool atom_contains(const ZeroAtom& atom, const Rational& x) {
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, LatticeComplement>) {
          Rational y = x * Rational(a.modulus) / a.scale;
          if (!y.is_integer()) return false;
          mpz_class r = y.numerator() % static_cast<long>(a.modulus);
          return r != 0;
        } else {
          Rational y = x * Rational(2) * a.half_denominator / a.scale;
          if (!y.is_integer()) return false;
          mpz_class n = y.numerator();
          return mpz_odd_p(n.get_mpz_t()) != 0;
        }
      },
      atom);
}

Rational atom_min_abs(const ZeroAtom& atom) {
  return std::visit(
      [](const auto& a) -> Rational {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, LatticeComplement>) {
          return (a.scale / Rational(a.modulus)).abs();
        } else {
          return (a.scale / (Rational(2) * a.half_denominator)).abs();
        }
      },
      atom);
}

ZeroAtom scale_atom(const ZeroAtom& atom, const Rational& factor) {
  return std::visit(
      [&](const auto& a) -> ZeroAtom {
        auto copy = a;
        copy.scale = a.scale * factor;
        return copy;
      },
      atom);
}

ZeroSetExpr::ZeroSetExpr(std::vector<ZeroSetComponent> components) : components_(std::move(components)) {
  for (const auto& c : components_) {
    for (const auto& a : c.atoms) {
      bool degenerate = std::visit(
          [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LatticeComplement>)
              return v.scale.is_zero() || v.modulus < 2;
            else
              return v.scale.is_zero() || v.half_denominator.is_zero();
          },
          a);
      if (degenerate) throw DomainError("degenerate zero-set atom");
    }
    if (c.dilation && c.dilation->base.abs() <= Rational(1))
      throw DomainError("dilation base must exceed 1 in absolute value");
  }
}

bool ZeroSetExpr::contains(const Rational& x) const {
  if (x.is_zero()) return false;
  for (const auto& c : components_) {
    if (c.atoms.empty()) continue;
    if (!c.dilation) {
      for (const auto& a : c.atoms)
        if (atom_contains(a, x)) return true;
      continue;
    }
    Rational smallest = atom_min_abs(c.atoms.front());
    for (const auto& a : c.atoms) smallest = std::min(smallest, atom_min_abs(a));
    const Rational& b = c.dilation->base;
    Rational y = x / pow(b, c.dilation->first_exponent);
    while (y.abs() >= smallest) {
      for (const auto& a : c.atoms)
        if (atom_contains(a, y)) return true;
      y /= b;
    }
  }
  return false;
}

bool ZeroSetExpr::empty() const {
  for (const auto& c : components_)
    if (!c.atoms.empty()) return false;
  return true;
}

}  // namespace fractspec
