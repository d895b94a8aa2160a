// Copyright 2026 The cps-hier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CPSHIER_ERROR_HPP_
#define CPSHIER_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace cpshier {

// Failure kinds raised by constructors and operations. Checks that are
// report-based (validate_cps, validate_structure, check_coherence) never
// throw; everything else signals malformed input or misuse through Error.
enum class Errc {
  bad_rational,
  division_by_zero,
  empty_space,
  duplicate_label,
  unknown_atom,
  negative_mass,
  not_normalized,
  space_mismatch,
  partial_map,
  empty_family,
  empty_conditioning_event,
  duplicate_event,
  unknown_event,
  zero_mass_condition,
  family_mismatch,
  not_cylinder_family,
  base_mismatch,
  unknown_type,
  non_positive_order,
  syntax_error,
  validation_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::bad_rational: return "BadRational";
    case Errc::division_by_zero: return "DivisionByZero";
    case Errc::empty_space: return "EmptySpace";
    case Errc::duplicate_label: return "DuplicateLabel";
    case Errc::unknown_atom: return "UnknownAtom";
    case Errc::negative_mass: return "NegativeMass";
    case Errc::not_normalized: return "NotNormalized";
    case Errc::space_mismatch: return "SpaceMismatch";
    case Errc::partial_map: return "PartialMap";
    case Errc::empty_family: return "EmptyFamily";
    case Errc::empty_conditioning_event: return "EmptyConditioningEvent";
    case Errc::duplicate_event: return "DuplicateEvent";
    case Errc::unknown_event: return "UnknownEvent";
    case Errc::zero_mass_condition: return "ZeroMassCondition";
    case Errc::family_mismatch: return "FamilyMismatch";
    case Errc::not_cylinder_family: return "NotCylinderFamily";
    case Errc::base_mismatch: return "BaseMismatch";
    case Errc::unknown_type: return "UnknownType";
    case Errc::non_positive_order: return "NonPositiveOrder";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::validation_error: return "ValidationError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cpshier

#endif  // CPSHIER_ERROR_HPP_
