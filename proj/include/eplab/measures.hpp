#pragma once

#include <optional>

#include "eplab/ree.hpp"
#include "eplab/states.hpp"

namespace eplab {

/// Entanglement potentials (NP, CP, REEP) of one input state and setting.
struct PotentialTriple {
  double np_value = 0.0;
  double cp_value = 0.0;
  double reep_value = 0.0;
};

/// max(0, -2 min eig(rho^T2)).
double negativity(const TwoQubitState& rho);

/// Wootters concurrence.
double concurrence(const TwoQubitState& rho);

/// h((1 + sqrt(1 - p^2)) / 2).
double ree_closed_pure(double p);

/// (p - 2) log2(1 - p/2) + (1 - p) log2(1 - p).
double ree_closed_horodecki(double p);

/// 1 - h(lambda) for the largest Bell weight lambda >= 1/2, else 0.
double ree_closed_bell_diagonal(double lambda_max);

enum class ClosedFormFamily { none, pure, horodecki, bell_diagonal };

/// Recognises the families with a known REE, up to local diagonal phases,
/// within tol.
ClosedFormFamily detect_closed_form(const TwoQubitState& rho, double tol = 1e-10);

/// Closed-form REE when the state is recognised, std::nullopt otherwise.
std::optional<double> ree_closed_form(const TwoQubitState& rho, double tol = 1e-10);

/// Closed form when available, ree_numeric otherwise.
double relative_entropy_of_entanglement(const TwoQubitState& rho, double tol = 1e-6);

struct MeasureTriple {
  double negativity = 0.0;
  double concurrence = 0.0;
  double ree = 0.0;
};

MeasureTriple measures(const TwoQubitState& rho, double tol = 1e-6);

PotentialTriple potentials(const VopsState& s, const BsSetting& b, double tol = 1e-6);

}  // namespace eplab
