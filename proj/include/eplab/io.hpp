#pragma once

#include <optional>
#include <string>

#include "eplab/states.hpp"

namespace eplab {

/// A state read from JSON. VOPS inputs are sent through the beam splitter
/// (balanced, w = 1 unless "r" / "w" are given) to obtain rho.
struct StateInput {
  std::optional<VopsState> vops;
  std::optional<BsSetting> setting;
  TwoQubitState rho;
};

/// Accepts
///   {"kind":"vops", "p":..., "D":..., "phi":..., "r":..., "w":...}
///   {"kind":"two_qubit", "matrix_re":[[...]x4], "matrix_im":[[...]x4]}
/// ("kind" may be omitted when matrix_re is present; matrix_im defaults to
/// zero). Invariants are validated; throws std::invalid_argument for
/// malformed JSON and std::domain_error for unphysical states.
StateInput parse_state_json(const std::string& text);

/// {"kind":"two_qubit","matrix_re":...,"matrix_im":...} with 17 digits.
std::string state_to_json(const TwoQubitState& rho);

}  // namespace eplab
