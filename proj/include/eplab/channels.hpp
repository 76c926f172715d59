#pragma once

#include "eplab/states.hpp"

namespace eplab {

enum class ChannelKind { amplitude_damping, phase_damping };

/// Single-qubit channel with two Kraus operators.
struct KrausPair {
  ChannelKind kind;
  double coefficient;
  Mat2 e0;
  Mat2 e1;

  /// max |E0'E0 + E1'E1 - I|
  double completeness_defect() const;
};

/// E0 = |0><0| + sqrt(1-g)|1><1|, E1 = sqrt(g)|0><1|.
KrausPair amplitude_damping(double gamma);

/// E0 = |0><0| + sqrt(1-k)|1><1|, E1 = sqrt(k)|1><1|.
KrausPair phase_damping(double kappa);

/// Applies the channel to qubit 1 or 2; std::invalid_argument otherwise.
TwoQubitState apply_kraus(const TwoQubitState& rho, int qubit_index, const KrausPair& k);

}  // namespace eplab
