#pragma once

// Internal JSON helpers shared by the library sources.

#include "eplab/measures.hpp"
#include "json.hpp"

namespace eplab::json_util {

inline nlohmann::json matrix_part(const Mat4& m, bool imag) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < 4; ++k) row.push_back(imag ? m(i, k).imag() : m(i, k).real());
    out.push_back(row);
  }
  return out;
}

inline nlohmann::json state(const TwoQubitState& rho) {
  return {{"kind", "two_qubit"}, {"matrix_re", matrix_part(rho.matrix(), false)},
          {"matrix_im", matrix_part(rho.matrix(), true)}};
}

inline nlohmann::json potentials(const PotentialTriple& p) {
  return {{"np", p.np_value}, {"cp", p.cp_value}, {"reep", p.reep_value}};
}

}  // namespace eplab::json_util
