#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "fractspec/rational.hpp"

namespace fractspec {

/// scale * ((Z \ nZ) / n)
struct LatticeComplement {
  Rational scale;
  long long modulus;
};

/// scale * ((2Z + 1) / (2 * half_denominator))
struct OddLattice {
  Rational scale;
  Rational half_denominator;
};

using ZeroAtom = std::variant<LatticeComplement, OddLattice>;

bool atom_contains(const ZeroAtom& atom, const Rational& x);
/// Smallest |y| over members y of the atom. Atoms never contain 0.
Rational atom_min_abs(const ZeroAtom& atom);
ZeroAtom scale_atom(const ZeroAtom& atom, const Rational& factor);

/// Union over j >= first_exponent of base^j * (atoms). Requires |base| > 1.
struct DilationFamily {
  Rational base;
  long long first_exponent = 1;
};

struct ZeroSetComponent {
  std::vector<ZeroAtom> atoms;
  std::optional<DilationFamily> dilation;
};

/// Finite union of (possibly dilated) lattice atoms with exact membership.
///
/// A dilated component only has finitely many exponents j for which
/// x / base^j can reach an atom, because every atom stays a positive distance
/// away from 0; membership walks exactly those exponents.
class ZeroSetExpr {
 public:
  ZeroSetExpr() = default;
  explicit ZeroSetExpr(std::vector<ZeroSetComponent> components);

  const std::vector<ZeroSetComponent>& components() const { return components_; }
  bool contains(const Rational& x) const;
  bool empty() const;

 private:
  std::vector<ZeroSetComponent> components_;
};

}  // namespace fractspec
