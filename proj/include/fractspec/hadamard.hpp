#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fractspec/digit_set.hpp"
#include "fractspec/root_sum.hpp"

namespace fractspec {

/// Exact record that m_D((l2 - l1) / p) vanishes: the unnormalized mask sum as
/// a root-of-unity sum.
struct PairWitness {
  Rational l1;
  Rational l2;
  RootOfUnitySum sum;
};

struct HadamardCertificate {
  long long p = 1;
  DigitSet digits = DigitSet::consecutive(1);
  DigitSet labels = DigitSet::consecutive(1);
  std::vector<PairWitness> witnesses;
};

struct HadamardFailure {
  Rational l1;
  Rational l2;
  /// m_D((l2 - l1) / p)
  std::complex<double> value;
};

using HadamardResult = std::variant<HadamardCertificate, HadamardFailure>;

/// (p, D, L) is Hadamard iff m_D((l1 - l2) / p) = 0 for all distinct l1, l2 in L.
/// Throws DomainError when #D != #L or p < 1.
HadamardResult check_hadamard(long long p, const DigitSet& digits, const DigitSet& labels);

/// Re-runs every witness of a certificate.
bool verify_certificate(const HadamardCertificate& cert);

/// max |(H* H - I)_{ij}| for H = (1/sqrt #D) (exp(2 pi i d l / p))_{d, l}.
double unitarity_deviation(long long p, const DigitSet& digits, const DigitSet& labels);

/// First label set in lexicographic order with 0 = min L, L inside [0, label_bound],
/// and #L = #D, forming a Hadamard triple. Only the bounded window is searched.
std::optional<HadamardCertificate> search_companion(long long p, const DigitSet& digits, long long label_bound,
                                                    unsigned threads = 1);

/// Stage digit set E_j as a function of the previous-stage digit. A constant map
/// has no branches.
struct StageMap {
  DigitSet constant = DigitSet::consecutive(1);
  std::map<Rational, DigitSet> branches;

  const DigitSet& at(const Rational& previous_digit) const;
};

struct SubTripleCheck {
  std::string name;
  HadamardCertificate certificate;
};

/// Stage data for
///   D^(0) = E_0,  D^(j) = union_{d in D^(j-1)} (d + p^{l_1 + ... + l_j} E_j(d)).
struct ProductFormCertificate {
  long long p = 1;
  DigitSet stage0 = DigitSet::consecutive(1);
  std::vector<StageMap> stages;
  std::vector<long long> exponents;
  std::vector<DigitSet> labels;
  DigitSet assembled = DigitSet::consecutive(1);
  std::vector<SubTripleCheck> checks;
};

struct ProductFormReport {
  bool ok = true;
  std::size_t checks_run = 0;
  std::string detail;
  std::optional<HadamardFailure> failure;
};

/// D^(k) from the stage recursion. Throws NotDirectSumError on a collision.
DigitSet assemble_product_form(long long p, const DigitSet& stage0, const std::vector<StageMap>& stages,
                               const std::vector<long long>& exponents);

/// Checks the assembly and every sub-triple: (p, E_0, L_0), (p, E_j(d), L_j), and
/// for 1 <= r <= k the prefix (E_0 (+) ... (+) E_r, L_0 (+) ... (+) L_r) and suffix
/// (E_r (+) ... (+) E_k, L_r (+) ... (+) L_k). Branch-dependent stages are checked
/// for every combination of distinct stage sets.
ProductFormReport verify_product_form(const ProductFormCertificate& cert);

/// Two-stage construction for p = 2 m N p':
///   E_0 = {0, (1 - 2mN) p + m}, E_1 = D_m, E_2 = 2m D_N,
///   L_0 = {0, N p'}, L_1 = 2N p' D_m, L_2 = p' D_N,
/// assembled as pD = E_0 (+) p E_1 (+) p E_2 (exponents l_1 = 1, l_2 = 0).
/// Throws std::logic_error if a sub-triple fails to verify.
ProductFormCertificate build_product_form(long long m, long long N, long long p_prime);

}  // namespace fractspec
