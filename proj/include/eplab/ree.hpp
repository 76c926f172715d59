#pragma once

#include <stdexcept>
#include <vector>

#include "eplab/states.hpp"

namespace eplab {

/// One term w |a><a| (x) |b><b| of a separable decomposition.
struct ProductAtom {
  Vec2 a;
  Vec2 b;
  double weight = 0.0;

  Vec4 vector() const { return kron(a, b); }
};

struct ReeOptions {
  /// Target Frank-Wolfe gap in bits; the returned value is within this of the
  /// true minimum.
  double tol = 1e-6;
  /// Cap on the total number of Frank-Wolfe and corrective steps.
  int max_iterations = 100000;
  /// Return 0 immediately for PPT inputs (exact for two qubits).
  bool ppt_shortcut = true;
  /// Optional starting decomposition (e.g. the solution at a nearby state).
  std::vector<ProductAtom> warm_start;
};

struct ReeSolution {
  double ree_value = 0.0;  // bits
  TwoQubitState closest_separable;
  /// Explicit product-state decomposition of closest_separable; empty when the
  /// PPT shortcut was taken.
  std::vector<ProductAtom> decomposition;
  int iterations = 0;
  /// Frank-Wolfe duality gap at the returned iterate: value - gap <= REE <= value.
  double gap_bound = 0.0;
};

class ReeConvergenceError : public std::runtime_error {
 public:
  ReeConvergenceError(double best_value, double gap, int iterations);

  double best_value() const { return best_value_; }
  double gap() const { return gap_; }
  int iterations() const { return iterations_; }

 private:
  double best_value_;
  double gap_;
  int iterations_;
};

/// Relative entropy S(rho || sigma) in bits. Eigenvalues of sigma below 1e-14
/// are clamped to 1e-14.
double relative_entropy(const Mat4& rho, const Mat4& sigma);

/// Relative entropy of entanglement, minimised over PPT (= separable) states
/// with an active-set Frank-Wolfe method. Throws ReeConvergenceError when the
/// certified gap does not reach opts.tol within opts.max_iterations, or when
/// the objective stops decreasing first (nearly rank-deficient inputs whose
/// optimum has eigenvalues far below tol).
ReeSolution ree_numeric(const TwoQubitState& rho, const ReeOptions& opts = {});

/// Linear minimisation over product pure states: min <ab|g|ab>. Exposed for
/// testing; returns the value and the minimising vectors.
struct ProductMinimum {
  double value;
  Vec2 a;
  Vec2 b;
};
ProductMinimum minimize_over_product_states(const Mat4& g, const std::vector<ProductAtom>& hints = {});

}  // namespace eplab
