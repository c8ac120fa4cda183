#pragma once

// Depth-zero characters of E^x for E/Q_p unramified of degree n.
//
// E^x = <p> x F_{p^n}^x x U^1. A character here is trivial on U^1, has
// order t on the residue field units, and sends p to `sign`.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "tamerep/arith.hpp"
#include "tamerep/error.hpp"

namespace tamerep {

struct TameCharacter {
  u64 n = 0;
  u64 p = 0;
  u64 t = 0;
  int sign = 1;
  /// chi = psi^{exponent_index} for the fixed order-t character psi of the
  /// residue field; Galois-conjugate choices give equivalent inductions.
  u64 exponent_index = 1;

  friend bool operator==(const TameCharacter&, const TameCharacter&) = default;
};

enum class CharacterType { o_type, s_type, neither };

constexpr const char* character_type_name(CharacterType c) {
  switch (c) {
    case CharacterType::o_type: return "O_TYPE";
    case CharacterType::s_type: return "S_TYPE";
    case CharacterType::neither: return "NEITHER";
  }
  return "NEITHER";
}

inline void validate(const TameCharacter& chi) {
  const auto bad = [](const std::string& m) { raise(Errc::bad_character, m); };
  if (chi.n == 0) bad("n must be positive");
  if (!is_prime(chi.p)) bad("p must be prime");
  if (chi.t == 0) bad("t must be positive");
  if (chi.sign != 1 && chi.sign != -1) bad("sign must be +1 or -1");
  if (chi.n > 64 || !checked_pow(chi.p, static_cast<unsigned>(chi.n), kSizeLimit)) bad("p^n exceeds 2^63");
  if (powmod(chi.p, chi.n, chi.t) != 1 % chi.t) bad("t must divide p^n - 1");
  if (chi.exponent_index >= chi.t && chi.t > 1) bad("exponent_index must lie in [0, t)");
  if (std::gcd(chi.exponent_index, chi.t) != 1) bad("exponent_index must be a unit modulo t");
}

inline TameCharacter make_character(u64 n, u64 p, u64 t, int sign, u64 exponent_index = 1) {
  TameCharacter chi{n, p, t, sign, exponent_index};
  validate(chi);
  return chi;
}

/// No factorization through N_{E/L} for any proper intermediate L. Every
/// E/L is unramified here, so the 1-unit condition is vacuous and
/// factoring through the degree-d subfield means t | p^d - 1.
inline bool is_admissible(const TameCharacter& chi) {
  validate(chi);
  for (u64 q : prime_divisors(chi.n)) {
    if (powmod(chi.p, chi.n / q, chi.t) == 1 % chi.t) return false;
  }
  return true;
}

/// Triviality on the norms from E to its index-2 subfield L. Norms of units
/// cover the residue units of L, so this is t | p^{n/2} + 1; the value at p
/// is constrained only through p^2, which chi sends to 1 either way.
inline bool is_self_dual(const TameCharacter& chi) {
  validate(chi);
  if (chi.p == 2) raise(Errc::bad_character, "p must be odd");
  if (chi.n % 2 != 0) return false;
  return (powmod(chi.p, chi.n / 2, chi.t) + 1) % chi.t == 0;
}

/// Names of the conditions an O/S-type character must satisfy but chi fails.
inline std::vector<std::string> type_failures(const TameCharacter& chi) {
  validate(chi);
  std::vector<std::string> failed;
  if (!is_prime(chi.t)) failed.emplace_back("t prime");
  if (chi.t % chi.n != 1 % chi.n) failed.emplace_back("t = 1 mod n");
  if (chi.t < 2 || chi.t % chi.p == 0 || mult_order_mod(chi.p, chi.t) != chi.n) failed.emplace_back("ord_t(p) = n");
  if (!is_admissible(chi)) failed.emplace_back("admissible");
  if (chi.p == 2 || !is_self_dual(chi)) failed.emplace_back("self-dual");
  return failed;
}

inline CharacterType classify_type(const TameCharacter& chi) {
  if (!type_failures(chi).empty()) return CharacterType::neither;
  return chi.sign == 1 ? CharacterType::o_type : CharacterType::s_type;
}

}  // namespace tamerep
