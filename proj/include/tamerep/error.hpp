#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tamerep {

enum class Errc {
  non_prime_characteristic,
  degree_zero,
  size_overflow,
  zero_element,
  not_a_divisor,
  embedding_failure,
  field_mismatch,
  shape_mismatch,
  singular_matrix,
  not_coprime,
  bad_input,
  bad_bounds,
  bad_character,
  bad_type,
  bad_residue_char,
  degenerate_form,
  odd_characteristic_required,
  not_orthogonal,
  bad_params,
  not_similitude,
  promise_unverifiable,
  cap_exceeded,
  singular_generator,
  too_large,
};

constexpr std::string_view errc_name(Errc e) noexcept {
  switch (e) {
    case Errc::non_prime_characteristic: return "NonPrimeCharacteristic";
    case Errc::degree_zero: return "DegreeZero";
    case Errc::size_overflow: return "SizeOverflow";
    case Errc::zero_element: return "ZeroElement";
    case Errc::not_a_divisor: return "NotADivisor";
    case Errc::embedding_failure: return "EmbeddingFailure";
    case Errc::field_mismatch: return "FieldMismatch";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::singular_matrix: return "SingularMatrix";
    case Errc::not_coprime: return "NotCoprime";
    case Errc::bad_input: return "BadInput";
    case Errc::bad_bounds: return "BadBounds";
    case Errc::bad_character: return "BadCharacter";
    case Errc::bad_type: return "BadType";
    case Errc::bad_residue_char: return "BadResidueChar";
    case Errc::degenerate_form: return "DegenerateForm";
    case Errc::odd_characteristic_required: return "OddCharacteristicRequired";
    case Errc::not_orthogonal: return "NotOrthogonal";
    case Errc::bad_params: return "BadParams";
    case Errc::not_similitude: return "NotSimilitude";
    case Errc::promise_unverifiable: return "PromiseUnverifiable";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::singular_generator: return "SingularGenerator";
    case Errc::too_large: return "TooLarge";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace tamerep
