#pragma once

// Integer-side number theory on 64-bit words: primality, factoring,
// multiplicative orders, and the search for (p, t) prime pairs feeding the
// tame-character constructions.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tamerep/error.hpp"

namespace tamerep {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

/// base^exp, or nullopt when the result exceeds `limit`.
inline std::optional<u64> checked_pow(u64 base, unsigned exp, u64 limit) {
  u128 acc = 1;
  for (unsigned i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > limit) return std::nullopt;
  }
  return static_cast<u64>(acc);
}

inline constexpr u64 kSizeLimit = u64{1} << 63;

namespace detail {

inline bool strong_probable_prime(u64 n, u64 a) {
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

/// Deterministic for every 64-bit input: the first twelve prime bases
/// suffice below 3.3e24.
inline bool is_prime(u64 m) {
  if (m < 2) return false;
  static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 b : kBases) {
    if (m == b) return true;
    if (m % b == 0) return false;
  }
  for (u64 b : kBases) {
    if (!detail::strong_probable_prime(m, b)) return false;
  }
  return true;
}

namespace detail {

// Brent's variant of Pollard rho with a fixed sequence of constants, so the
// factorization path is reproducible.
inline u64 rho_split(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    u64 r = 1;
    const auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    constexpr u64 kBatch = 128;
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += kBatch;
      } while (k < r && g == 1);
      r <<= 1U;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % p == 0) {
      out.push_back(p);
      factor_into(n / p, out);
      return;
    }
  }
  const u64 d = rho_split(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

/// Prime factorization as ascending (prime, exponent) pairs; factor(1) is empty.
inline std::vector<std::pair<u64, unsigned>> factor(u64 n) {
  if (n == 0) raise(Errc::bad_input, "cannot factor 0");
  std::vector<u64> primes;
  detail::factor_into(n, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 p : primes) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1U);
    }
  }
  return out;
}

inline std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  for (const auto& [p, e] : factor(n)) out.push_back(p);
  return out;
}

inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> out{1};
  for (const auto& [p, e] : factor(n)) {
    const std::size_t count = out.size();
    u64 pk = 1;
    for (unsigned i = 0; i < e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < count; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline u64 euler_phi(u64 m) {
  u64 phi = m;
  for (const auto& [p, e] : factor(m)) phi = phi / p * (p - 1);
  return phi;
}

/// Least e >= 1 with a^e = 1 (mod m).
inline u64 mult_order_mod(u64 a, u64 m) {
  if (m < 2) raise(Errc::bad_input, "modulus must be at least 2");
  a %= m;
  if (std::gcd(a, m) != 1) {
    raise(Errc::not_coprime, std::to_string(a) + " is not a unit modulo " + std::to_string(m));
  }
  u64 order = euler_phi(m);
  for (const auto& [r, e] : factor(order)) {
    for (unsigned i = 0; i < e && powmod(a, order / r, m) == 1; ++i) order /= r;
  }
  return order;
}

/// The recipe condition for a depth-zero self-dual character of order t on
/// the residue field of the degree-n unramified extension: t divides
/// p^{n/2} + 1 and no p^{n/q} - 1 for primes q | n.
inline bool example21_check(u64 n, u64 p, u64 t) {
  if (n == 0 || n % 2 != 0) raise(Errc::bad_input, "n must be a positive even integer");
  if (!is_prime(p)) raise(Errc::bad_input, "p must be prime");
  if (t == 0 || t % p == 0 || n % p == 0) raise(Errc::bad_input, "p must not divide t*n");
  if ((powmod(p, n / 2, t) + 1) % t != 0) return false;
  for (u64 q : prime_divisors(n)) {
    if (powmod(p, n / q, t) == 1 % t) return false;
  }
  return true;
}

struct PairFlags {
  bool t_one_mod_n = false;
  bool order_is_n = false;
  bool p_gt_n = false;
  bool no_subfield_factor = false;  // t does not divide p^{n/q} - 1 for primes q | n
  std::optional<bool> p_gt_ell;
  std::optional<bool> t_gt_ell;

  bool all() const {
    return t_one_mod_n && order_is_n && p_gt_n && no_subfield_factor && p_gt_ell.value_or(true) &&
           t_gt_ell.value_or(true);
  }
};

struct PairCandidate {
  u64 n = 0;
  u64 p = 0;
  u64 t = 0;
  PairFlags flags;

  friend bool operator==(const PairCandidate& a, const PairCandidate& b) {
    return a.n == b.n && a.p == b.p && a.t == b.t;
  }
};

/// Flags are always computed here from (n, p, t, ell), never carried over.
inline PairCandidate evaluate_pair(u64 n, u64 p, u64 t, std::optional<u64> ell = std::nullopt) {
  PairCandidate c{n, p, t, {}};
  c.flags.t_one_mod_n = n != 0 && t % n == 1 % n;
  c.flags.order_is_n = t >= 2 && std::gcd(p, t) == 1 && mult_order_mod(p, t) == n;
  c.flags.p_gt_n = p > n;
  c.flags.no_subfield_factor = t >= 2;
  if (t >= 2 && n != 0) {
    for (u64 q : prime_divisors(n)) {
      if (powmod(p, n / q, t) == 1) c.flags.no_subfield_factor = false;
    }
  }
  if (ell) {
    c.flags.p_gt_ell = p > *ell;
    c.flags.t_gt_ell = t > *ell;
  }
  return c;
}

/// All prime pairs (p, t) with t = 1 mod n, ord_t(p) = n, p > n, p and t
/// above ell, sorted by (t, p).
inline std::vector<PairCandidate> search_pairs(u64 n, u64 ell, u64 p_max, u64 t_max, unsigned jobs = 1) {
  if (n < 2 || n % 2 != 0) raise(Errc::bad_input, "n must be an even integer >= 2");
  if (ell % 2 == 0 || !is_prime(ell)) raise(Errc::bad_input, "ell must be an odd prime");
  if (p_max < n || t_max < n) raise(Errc::bad_bounds, "search bounds must be at least n");

  std::vector<u64> ts;
  for (u64 t = n + 1; t <= t_max; t += n) {
    if (t > ell && is_prime(t)) ts.push_back(t);
  }
  std::vector<u64> ps;
  for (u64 p = std::max(n, ell) + 1; p <= p_max; ++p) {
    if (is_prime(p)) ps.push_back(p);
  }

  const auto scan = [&](std::size_t ti) {
    std::vector<PairCandidate> found;
    const u64 t = ts[ti];
    for (u64 p : ps) {
      if (p == t || p % t == 0) continue;
      if (mult_order_mod(p, t) != n) continue;
      PairCandidate c = evaluate_pair(n, p, t, ell);
      if (!c.flags.all()) continue;
      if ((powmod(p, n / 2, t) + 1) % t != 0) {
        throw std::logic_error("pair violates t | p^{n/2} + 1");
      }
      found.push_back(c);
    }
    return found;
  };

  std::vector<std::vector<PairCandidate>> buckets(ts.size());
  jobs = std::max(1U, jobs);
  if (jobs == 1 || ts.size() < 2) {
    for (std::size_t i = 0; i < ts.size(); ++i) buckets[i] = scan(i);
  } else {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < ts.size(); i += jobs) buckets[i] = scan(i);
      });
    }
  }

  std::vector<PairCandidate> out;
  for (auto& b : buckets) out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.t != b.t ? a.t < b.t : a.p < b.p;
  });
  return out;
}

enum class AuditStatus { checked_true, checked_false, not_effectively_checkable };

constexpr const char* audit_status_name(AuditStatus s) {
  switch (s) {
    case AuditStatus::checked_true: return "CHECKED_TRUE";
    case AuditStatus::checked_false: return "CHECKED_FALSE";
    case AuditStatus::not_effectively_checkable: return "NOT_EFFECTIVELY_CHECKABLE";
  }
  return "UNKNOWN";
}

struct AuditItem {
  std::string condition;
  AuditStatus status;
};

/// Hypotheses of the large-image theorem for maximally induced O-type
/// representations. Conditions involving the constants d(n), t(n) or the
/// compositum K of small fields unramified outside {ell, inf} are
/// ineffective and are reported as such.
inline std::vector<AuditItem> audit_adz(u64 n, u64 ell, u64 p, u64 t, std::optional<u64> d_bound = std::nullopt) {
  const auto st = [](bool b) { return b ? AuditStatus::checked_true : AuditStatus::checked_false; };
  const bool coprime = t >= 2 && std::gcd(p, t) == 1;
  std::vector<AuditItem> out{
      {"n >= 8 even", st(n >= 8 && n % 2 == 0)},
      {"ell odd prime", st(ell % 2 == 1 && is_prime(ell))},
      {"p prime", st(is_prime(p))},
      {"t prime", st(is_prime(t))},
      {"t = 1 mod n", st(n != 0 && t % n == 1 % n)},
      {"ord_t(p) = n", st(coprime && mult_order_mod(p, t) == n)},
      {"t > ell", st(t > ell)},
      {"p > ell", st(p > ell)},
      {"p splits completely in K", AuditStatus::not_effectively_checkable},
      {"t > d(n) + 1", AuditStatus::not_effectively_checkable},
      {"t > t(n)", AuditStatus::not_effectively_checkable},
  };
  if (d_bound) out.push_back({"t > d_bound + 1", st(t > *d_bound + 1)});
  return out;
}

}  // namespace tamerep
