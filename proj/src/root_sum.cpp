#include "fractspec/root_sum.hpp"

#include <numbers>
#include <string>
#include <vector>

#include "fractspec/rational.hpp"

namespace fractspec {

namespace {

using Coeffs = std::map<std::uint64_t, std::int64_t>;
__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

std::vector<std::uint64_t> distinct_primes(std::uint64_t n) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) primes.push_back(n);
  return primes;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

// Inverse of a modulo m (gcd(a, m) = 1, m >= 1).
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  i128 t = 0, new_t = 1;
  i128 r = m, new_r = a % m;
  while (new_r != 0) {
    i128 q = r / new_r;
    i128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("root-of-unity coefficient overflow");
  return out;
}

// Decides sum_k c_k zeta_r^k == 0 for squarefree r = prod(primes[idx..]).
//
// With r = p r' and zeta_r^k = zeta_p^u zeta_{r'}^v (CRT), Q(zeta_r) has basis
// zeta_p^1..zeta_p^{p-1} over Q(zeta_{r'}) and 1 = -(zeta_p + ... + zeta_p^{p-1}).
// The sum is therefore zero iff S_u - S_0 vanishes in Q(zeta_{r'}) for every
// u in [1, p).
bool squarefree_sum_is_zero(const std::vector<std::uint64_t>& primes, std::size_t idx, std::uint64_t r,
                            const Coeffs& coeffs) {
  if (coeffs.empty()) return true;
  if (idx == primes.size()) {
    std::int64_t total = 0;
    for (const auto& [k, c] : coeffs) total = checked_add(total, c);
    return total == 0;
  }
  const std::uint64_t p = primes[idx];
  const std::uint64_t rest = r / p;
  const std::uint64_t x = inverse_mod(rest % p, p);
  const std::uint64_t y = rest == 1 ? 0 : inverse_mod(p % rest, rest);

  std::map<std::uint64_t, Coeffs> by_u;
  for (const auto& [k, c] : coeffs) {
    std::uint64_t u = mulmod(k % p, x, p);
    std::uint64_t v = rest == 1 ? 0 : mulmod(k % rest, y, rest);
    std::int64_t& slot = by_u[u][v];
    slot = checked_add(slot, c);
  }
  for (auto& [u, m] : by_u) std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
  std::erase_if(by_u, [](const auto& kv) { return kv.second.empty(); });

  const Coeffs zero_part = by_u.contains(0) ? by_u.at(0) : Coeffs{};
  const std::size_t nonzero_u = by_u.size() - (by_u.contains(0) ? 1 : 0);
  // A residue u with S_u empty contributes the condition S_0 == 0.
  if (nonzero_u < p - 1 && !squarefree_sum_is_zero(primes, idx + 1, rest, zero_part)) return false;
  for (const auto& [u, part] : by_u) {
    if (u == 0) continue;
    Coeffs diff = part;
    for (const auto& [v, c] : zero_part) {
      std::int64_t& slot = diff[v];
      slot = checked_add(slot, -c);
    }
    std::erase_if(diff, [](const auto& kv) { return kv.second == 0; });
    if (!squarefree_sum_is_zero(primes, idx + 1, rest, diff)) return false;
  }
  return true;
}

}  // namespace

RootOfUnitySum::RootOfUnitySum(std::uint64_t order) : order_(order) {
  if (order == 0) throw DomainError("root-of-unity sum needs order >= 1");
  if (order > kMaxOrder) throw DomainError("root-of-unity order " + std::to_string(order) + " exceeds supported maximum");
}

void RootOfUnitySum::add(std::int64_t residue, std::int64_t count) {
  if (count == 0) return;
  std::int64_t m = static_cast<std::int64_t>(order_);
  std::int64_t k = residue % m;
  if (k < 0) k += m;
  std::int64_t& slot = coeffs_[static_cast<std::uint64_t>(k)];
  slot = checked_add(slot, count);
  if (slot == 0) coeffs_.erase(static_cast<std::uint64_t>(k));
}

std::complex<double> RootOfUnitySum::value() const {
  std::complex<double> total{0.0, 0.0};
  for (const auto& [k, c] : coeffs_) {
    long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(k) /
                        static_cast<long double>(order_);
    total += static_cast<double>(c) * std::complex<double>(static_cast<double>(std::cos(angle)),
                                                           static_cast<double>(std::sin(angle)));
  }
  return total;
}

bool RootOfUnitySum::is_zero() const {
  if (coeffs_.empty()) return true;
  // Phi_M(x) = Phi_rad(M)(x^s) with s = M / rad(M), and 1, zeta_M, ..., zeta_M^{s-1}
  // is a basis of Q(zeta_M) over Q(zeta_rad(M)). Split by k mod s, then decide
  // each squarefree-order piece.
  const auto primes = distinct_primes(order_);
  std::uint64_t radical = 1;
  for (auto p : primes) radical *= p;
  const std::uint64_t s = order_ / radical;

  std::map<std::uint64_t, Coeffs> groups;
  for (const auto& [k, c] : coeffs_) {
    std::int64_t& slot = groups[k % s][(k / s) % radical];
    slot = checked_add(slot, c);
  }
  for (auto& [a, g] : groups) {
    std::erase_if(g, [](const auto& kv) { return kv.second == 0; });
    if (!squarefree_sum_is_zero(primes, 0, radical, g)) return false;
  }
  return true;
}

}  // namespace fractspec
