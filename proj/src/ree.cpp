#include "eplab/ree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

namespace eplab {

namespace {

constexpr double kEigFloor = 1e-14;
constexpr double kInvLn2 = 1.0 / std::numbers::ln2;
constexpr double kWeightDrop = 1e-15;
constexpr int kCorrectiveSteps = 4;
constexpr int kPolishIterations = 400;
// Outer iterations without a 1e-3 tol decrease of F before giving up.
constexpr int kStallWindow = 12;

// (ln x - ln y) / (x - y), the first divided difference of log.
double divided_log(double x, double y) {
  const double d = x - y;
  const double rel = d / y;
  if (std::abs(rel) < 1e-8) return (1.0 - 0.5 * rel) / y;
  return std::log1p(rel) / d;
}

// F(sigma) = -Tr(rho log2 sigma) and its Frechet derivative
// G = -(1/ln2) U (L o U'rho U) U' with L the divided differences of log.
class Objective {
 public:
  explicit Objective(const Mat4& rho) : rho_(rho) {}

  struct Point {
    Eigen::Vector4d lambda;
    Mat4 basis;
    Mat4 rho_rot;  // U' rho U
  };

  Point at(const Mat4& sigma) const {
    const HermitianSpectrum sp = eigh(sigma);
    Point pt{sp.values, sp.vectors, sp.vectors.adjoint() * rho_ * sp.vectors};
    for (int i = 0; i < 4; ++i) pt.lambda(i) = std::max(pt.lambda(i), kEigFloor);
    return pt;
  }

  static double value(const Point& pt) {
    double f = 0.0;
    for (int i = 0; i < 4; ++i) f -= std::log2(pt.lambda(i)) * pt.rho_rot(i, i).real();
    return f;
  }

  static Eigen::Matrix4d divided_differences(const Point& pt) {
    Eigen::Matrix4d l;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) l(i, j) = divided_log(pt.lambda(i), pt.lambda(j));
    return l;
  }

  static Mat4 gradient(const Point& pt) {
    const Eigen::Matrix4d l = divided_differences(pt);
    Mat4 inner;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) inner(i, j) = -kInvLn2 * l(i, j) * pt.rho_rot(i, j);
    return hermitian_part(pt.basis * inner * pt.basis.adjoint());
  }

  // Tr(G(sigma) d) without forming G.
  double directional(const Mat4& sigma, const Mat4& d) const {
    const Point pt = at(sigma);
    const Eigen::Matrix4d l = divided_differences(pt);
    const Mat4 drot = pt.basis.adjoint() * d * pt.basis;
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) s += l(i, j) * (pt.rho_rot(i, j) * drot(j, i)).real();
    return -kInvLn2 * s;
  }

 private:
  Mat4 rho_;
};

struct Atom {
  Vec2 a;
  Vec2 b;
  Vec4 v;
  double w;
};

Mat4 assemble(const std::vector<Atom>& atoms) {
  Mat4 s = Mat4::Zero();
  for (const auto& at : atoms) s += at.w * at.v * at.v.adjoint();
  return s;
}

// (a' (x) I) g (a (x) I)
Mat2 reduce_on_first(const Mat4& g, const Vec2& a) {
  Mat2 m = Mat2::Zero();
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m(k, l) += std::conj(a(i)) * a(j) * g(basis_index(i, k), basis_index(j, l));
  return m;
}

// (I (x) b') g (I (x) b)
Mat2 reduce_on_second(const Mat4& g, const Vec2& b) {
  Mat2 m = Mat2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) m(i, j) += std::conj(b(k)) * b(l) * g(basis_index(i, k), basis_index(j, l));
  return m;
}

const std::vector<Vec2>& sphere_grid() {
  static const std::vector<Vec2> grid = [] {
    constexpr int n = 96;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / n;
      const double theta = std::acos(z);
      const double phi = golden * i;
      Vec2 v;
      v << std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi);
      pts.push_back(v);
    }
    return pts;
  }();
  return grid;
}

ProductMinimum refine(const Mat4& g, Vec2 a) {
  double prev = std::numeric_limits<double>::infinity();
  Vec2 b;
  double val = prev;
  for (int it = 0; it < 200; ++it) {
    b = min_eigenpair(reduce_on_first(g, a)).second;
    auto [v, na] = min_eigenpair(reduce_on_second(g, b));
    a = na;
    val = v;
    if (prev - val <= 1e-15 * (1.0 + std::abs(val))) break;
    prev = val;
  }
  b = min_eigenpair(reduce_on_first(g, a)).second;
  const double final_val = (kron(a, b).adjoint() * g * kron(a, b))(0, 0).real();
  return {final_val, a, b};
}

// Minimises phi(gamma) = F(sigma + gamma d) over [0, gamma_max] for convex phi.
double line_search(const Objective& obj, const Mat4& sigma, const Mat4& d, double gamma_max) {
  auto slope = [&](double g) { return obj.directional(Mat4(sigma + g * d), d); };
  double lo = 0.0, hi = gamma_max;
  double slo = slope(lo);
  if (slo >= 0.0) return 0.0;
  double shi = slope(hi);
  if (shi <= 0.0) return hi;
  const double s0 = std::abs(slo);
  // Illinois-modified regula falsi on the slope.
  int side = 0;
  for (int it = 0; it < 80; ++it) {
    double g = (lo * shi - hi * slo) / (shi - slo);
    if (!(g > lo && g < hi)) g = 0.5 * (lo + hi);
    const double sg = slope(g);
    if (std::abs(sg) <= 1e-6 * s0) return g;
    if (sg < 0.0) {
      lo = g;
      slo = sg;
      if (side == -1) shi *= 0.5;
      side = -1;
    } else {
      hi = g;
      shi = sg;
      if (side == 1) slo *= 0.5;
      side = 1;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, gamma_max)) break;
  }
  return 0.5 * (lo + hi);
}

void add_atom(std::vector<Atom>& atoms, const Vec2& a, const Vec2& b) {
  const Vec4 v = kron(a, b);
  for (const auto& at : atoms)
    if (std::norm(at.v.dot(v)) > 1.0 - 1e-14) return;
  atoms.push_back({a, b, v, 0.0});
}

std::vector<ProductAtom> export_atoms(const std::vector<Atom>& atoms) {
  std::vector<ProductAtom> out;
  out.reserve(atoms.size());
  for (const auto& at : atoms) out.push_back({at.a, at.b, at.w});
  return out;
}

std::vector<Atom> initial_atoms(const Mat4& rho, const std::vector<ProductAtom>& warm) {
  std::vector<Atom> atoms;
  double total = 0.0;
  for (const auto& pa : warm) {
    if (pa.weight <= 0.0) continue;
    const Vec2 a = pa.a.normalized(), b = pa.b.normalized();
    atoms.push_back({a, b, kron(a, b), pa.weight});
    total += pa.weight;
  }
  if (total > 0.0) {
    for (auto& at : atoms) at.w /= total;
    // Keep the support of sigma wide enough for rho.
    const Mat4 s = assemble(atoms);
    const Objective obj(rho);
    if (std::isfinite(Objective::value(obj.at(s))) && Objective::value(obj.at(s)) < 30.0) return atoms;
    atoms.clear();
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double w = rho(basis_index(i, j), basis_index(i, j)).real();
      if (w <= 0.0) continue;
      Vec2 a = Vec2::Zero(), b = Vec2::Zero();
      a(i) = 1.0;
      b(j) = 1.0;
      atoms.push_back({a, b, kron(a, b), w});
    }
  double s = 0.0;
  for (const auto& at : atoms) s += at.w;
  for (auto& at : atoms) at.w /= s;
  return atoms;
}


// Local descent on the atom vectors themselves (weights absorbed into the
// norm of the first factor). Keeps the active set.
class AtomPolisher {
 public:
  AtomPolisher(const Objective& obj, int n) : obj_(obj), n_(n) {}

  double eval(const Eigen::VectorXd& th, Eigen::VectorXd* grad) const {
    std::vector<Vec2> u(n_), v(n_);
    unpack(th, u, v);
    Mat4 s = Mat4::Zero();
    double z = 0.0;
    std::vector<Vec4> x(n_);
    for (int k = 0; k < n_; ++k) {
      x[k] = kron(u[k], v[k]);
      s += x[k] * x[k].adjoint();
      z += u[k].squaredNorm() * v[k].squaredNorm();
    }
    if (!(z > 0.0)) return std::numeric_limits<double>::infinity();
    const Objective::Point pt = obj_.at(Mat4(s / z));
    const double f = Objective::value(pt);
    if (grad == nullptr) return f;
    const Mat4 g = Objective::gradient(pt);
    const double tgs = (g * s).trace().real();
    grad->resize(8 * n_);
    for (int k = 0; k < n_; ++k) {
      const Vec4 y = g * x[k];
      Vec2 cu = Vec2::Zero(), cv = Vec2::Zero();
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          cu(i) += y(basis_index(i, j)) * std::conj(v[k](j));
          cv(j) += y(basis_index(i, j)) * std::conj(u[k](i));
        }
      const Vec2 du = 2.0 * cu / z - (2.0 * tgs * v[k].squaredNorm() / (z * z)) * u[k];
      const Vec2 dv = 2.0 * cv / z - (2.0 * tgs * u[k].squaredNorm() / (z * z)) * v[k];
      for (int i = 0; i < 2; ++i) {
        (*grad)(8 * k + 2 * i) = du(i).real();
        (*grad)(8 * k + 2 * i + 1) = du(i).imag();
        (*grad)(8 * k + 4 + 2 * i) = dv(i).real();
        (*grad)(8 * k + 4 + 2 * i + 1) = dv(i).imag();
      }
    }
    return f;
  }

  void unpack(const Eigen::VectorXd& th, std::vector<Vec2>& u, std::vector<Vec2>& v) const {
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < 2; ++i) {
        u[k](i) = cplx(th(8 * k + 2 * i), th(8 * k + 2 * i + 1));
        v[k](i) = cplx(th(8 * k + 4 + 2 * i), th(8 * k + 4 + 2 * i + 1));
      }
  }

 private:
  const Objective& obj_;
  int n_;
};

void polish_atoms(const Objective& obj, std::vector<Atom>& atoms, int max_iter, double grad_tol) {
  const int n = static_cast<int>(atoms.size());
  AtomPolisher pol(obj, n);
  Eigen::VectorXd th(8 * n);
  for (int k = 0; k < n; ++k) {
    const Vec2 u = std::sqrt(atoms[k].w) * atoms[k].a;
    for (int i = 0; i < 2; ++i) {
      th(8 * k + 2 * i) = u(i).real();
      th(8 * k + 2 * i + 1) = u(i).imag();
      th(8 * k + 4 + 2 * i) = atoms[k].b(i).real();
      th(8 * k + 4 + 2 * i + 1) = atoms[k].b(i).imag();
    }
  }
  // BFGS with an exact line search on the directional derivative. Working on
  // the slope rather than on function decrease keeps the iterate improving
  // below the sqrt(eps) resolution of F itself.
  const int dim = 8 * n;
  Eigen::VectorXd grad, ngrad;
  double f = pol.eval(th, &grad);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(dim, dim);
  bool scaled = false;
  for (int it = 0; it < max_iter && std::isfinite(f); ++it) {
    if (grad.norm() <= grad_tol) break;
    Eigen::VectorXd dir = -h * grad;
    if (!(grad.dot(dir) < 0.0)) {
      h.setIdentity();
      scaled = false;
      dir = -grad;
    }
    auto slope = [&](double a, Eigen::VectorXd* g) {
      pol.eval(th + a * dir, g);
      return g->dot(dir);
    };
    Eigen::VectorXd gtmp;
    const double s0 = grad.dot(dir);
    double lo = 0.0, slo = s0, hi = 1.0, shi = slope(hi, &gtmp);
    for (int k = 0; k < 8 && shi < 0.0; ++k) {
      lo = hi;
      slo = shi;
      hi *= 2.0;
      shi = slope(hi, &gtmp);
    }
    double a = hi;
    if (shi > 0.0) {
      int side = 0;
      for (int k = 0; k < 60; ++k) {
        a = (lo * shi - hi * slo) / (shi - slo);
        if (!(a > lo && a < hi)) a = 0.5 * (lo + hi);
        const double sa = slope(a, &gtmp);
        if (std::abs(sa) <= 0.1 * std::abs(s0)) break;
        if (sa < 0.0) {
          lo = a;
          slo = sa;
          if (side == -1) shi *= 0.5;
          side = -1;
        } else {
          hi = a;
          shi = sa;
          if (side == 1) slo *= 0.5;
          side = 1;
        }
        if (hi - lo <= 1e-16 * hi) break;
      }
    }
    // A zero slope can also sit on the flat top created by the eigenvalue
    // floor next to a singular sigma; fall back to halving the step then.
    Eigen::VectorXd nth = th + a * dir;
    double nf = pol.eval(nth, &ngrad);
    for (int k = 0; k < 40 && !(nf <= f); ++k) {
      a *= 0.5;
      nth = th + a * dir;
      nf = pol.eval(nth, &ngrad);
    }
    if (!(nf <= f + 1e-12 * (1.0 + std::abs(f)))) break;
    const Eigen::VectorXd sv = nth - th, yv = ngrad - grad;
    const double sy = sv.dot(yv);
    th = nth;
    f = nf;
    grad = ngrad;
    if (sv.norm() <= 1e-16 * (1.0 + th.norm())) break;
    if (sy > 0.0) {
      if (!scaled) {
        h *= sy / yv.squaredNorm();
        scaled = true;
      }
      const double r = 1.0 / sy;
      const Eigen::VectorXd hy = h * yv;
      h += ((sy + yv.dot(hy)) * r * r) * (sv * sv.transpose()) - r * (hy * sv.transpose() + sv * hy.transpose());
    }
  }

  std::vector<Vec2> u(n), v(n);
  pol.unpack(th, u, v);
  double z = 0.0;
  for (int k = 0; k < n; ++k) z += u[k].squaredNorm() * v[k].squaredNorm();
  std::vector<Atom> out;
  for (int k = 0; k < n; ++k) {
    const double w = u[k].squaredNorm() * v[k].squaredNorm() / z;
    if (w <= kWeightDrop) continue;
    const Vec2 a = u[k].normalized(), b = v[k].normalized();
    const Vec4 x = kron(a, b);
    bool merged = false;
    for (auto& o : out)
      if (std::norm(o.v.dot(x)) > 1.0 - 1e-12) {
        o.w += w;
        merged = true;
        break;
      }
    if (!merged) out.push_back({a, b, x, w});
  }
  atoms = std::move(out);
}
struct Certificate {
  double gap;
  double delta;  // > 0 when the mixed iterate (1-delta) sigma + delta I/4 is reported
};

// Lower bound on F over the separable set from the tangent plane at any
// positive tau (tau need not be separable): F* >= F(tau) + <G, s - tau>
// minimised over s. With Tr(G tau) = -1/ln2 and the scale of tau optimised
// this is F(tau) - log2(-m ln2), m = min_s Tr(G s).
double tangent_lower_bound(const Objective& obj, const Mat4& tau, const std::vector<ProductAtom>& hints) {
  const Objective::Point pt = obj.at(tau);
  const double m = minimize_over_product_states(Objective::gradient(pt), hints).value;
  if (!(m < 0.0)) return -std::numeric_limits<double>::infinity();
  return Objective::value(pt) - std::log2(-m * std::numbers::ln2);
}

// Near-singular sigma makes the plain Frank-Wolfe gap useless: directions
// where sigma sits on the eigenvalue floor or carries a tiny eigenvalue pick
// up huge slopes although they barely move F. Regularised tangent points
// give much tighter bounds there.
Certificate best_certificate(const Objective& obj, const Mat4& sigma, double f_sigma,
                             const std::vector<ProductAtom>& hints, double tol) {
  double upper = f_sigma, delta = 0.0;
  double lower = tangent_lower_bound(obj, sigma, hints);
  for (const double rel : {0.01, 0.1, 1.0, 10.0})
    lower = std::max(lower, tangent_lower_bound(obj, Mat4(sigma + rel * tol * Mat4::Identity()), hints));
  for (const double rel : {0.003, 0.03, 0.3}) {
    const double d = rel * tol;
    const Mat4 sm = (1.0 - d) * sigma + 0.25 * d * Mat4::Identity();
    const double f = Objective::value(obj.at(sm));
    if (f < upper) {
      upper = f;
      delta = d;
    }
    lower = std::max(lower, tangent_lower_bound(obj, sm, hints));
  }
  return {std::max(0.0, upper - lower), delta};
}

std::string convergence_message(double best_value, double gap, int iterations) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "REE solver did not converge: best value %.10g, gap %.3g after %d iterations",
                best_value, gap, iterations);
  return buf;
}

}  // namespace

ReeConvergenceError::ReeConvergenceError(double best_value, double gap, int iterations)
    : std::runtime_error(convergence_message(best_value, gap, iterations)),
      best_value_(best_value),
      gap_(gap),
      iterations_(iterations) {}

double relative_entropy(const Mat4& rho, const Mat4& sigma) {
  const Objective obj(rho);
  return Objective::value(obj.at(sigma)) - von_neumann_entropy(rho);
}

ProductMinimum minimize_over_product_states(const Mat4& g, const std::vector<ProductAtom>& hints) {
  const auto& grid = sphere_grid();
  std::array<std::pair<double, int>, 3> best;
  best.fill({std::numeric_limits<double>::infinity(), -1});
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    const double v = min_eigenpair(reduce_on_first(g, grid[i])).first;
    if (v < best[2].first) {
      best[2] = {v, i};
      std::sort(best.begin(), best.end());
    }
  }
  ProductMinimum out{std::numeric_limits<double>::infinity(), Vec2::Zero(), Vec2::Zero()};
  auto consider = [&](const Vec2& a) {
    const ProductMinimum r = refine(g, a);
    if (r.value < out.value) out = r;
  };
  for (const auto& [v, i] : best)
    if (i >= 0) consider(grid[i]);
  for (const auto& h : hints) consider(h.a);
  return out;
}

ReeSolution ree_numeric(const TwoQubitState& state, const ReeOptions& opts) {
  if (!(opts.tol >= 1e-10)) throw std::invalid_argument("REE tolerance must be at least 1e-10");
  const Mat4& rho = state.matrix();
  const double entropy = von_neumann_entropy(rho);

  if (opts.ppt_shortcut && eigvalsh(partial_transpose(rho))(0) >= -1e-12) {
    ReeSolution sol;
    sol.ree_value = 0.0;
    sol.closest_separable = state;
    return sol;
  }

  const Objective obj(rho);
  std::vector<Atom> atoms = initial_atoms(rho, opts.warm_start);
  std::vector<ProductAtom> hints;

  int steps = 0;
  int outer = 0;
  double mix = 0.0;
  std::vector<double> history;
  double gap = std::numeric_limits<double>::infinity();
  Mat4 sigma = assemble(atoms);

  while (true) {
    const Objective::Point pt = obj.at(sigma);
    const Mat4 g = Objective::gradient(pt);

    hints = export_atoms(atoms);
    const ProductMinimum lmo = minimize_over_product_states(g, hints);
    double current = 0.0;
    for (const auto& at : atoms) current += at.w * (at.v.adjoint() * g * at.v)(0, 0).real();
    gap = current - lmo.value;
    if (gap <= opts.tol) break;
    const double f_now = Objective::value(pt);
    // REE >= 0, so the value itself bounds the error.
    const double trivial = std::max(0.0, f_now - entropy);
    gap = std::min(gap, trivial);
    if (trivial <= opts.tol) break;
    if (outer > 0) {
      const Certificate c = best_certificate(obj, sigma, f_now, hints, opts.tol);
      gap = std::min(gap, c.gap);
      if (c.gap <= opts.tol) {
        mix = c.delta;
        break;
      }
    }
    history.push_back(f_now);
    const bool stalled = outer >= kStallWindow && history[outer - kStallWindow] - f_now <= 1e-3 * opts.tol;
    if (steps >= opts.max_iterations || stalled) {
      const double best = std::max(0.0, f_now - entropy);
      throw ReeConvergenceError(best, gap, steps);
    }
    ++outer;
    ++steps;

    add_atom(atoms, lmo.a, lmo.b);

    // Pairwise corrections on the active set.
    for (int c = 0; c < kCorrectiveSteps && steps < opts.max_iterations; ++c, ++steps) {
      const Mat4 gc = c == 0 ? g : Objective::gradient(obj.at(sigma));
      int fw = -1, away = -1;
      double gfw = std::numeric_limits<double>::infinity(), gaway = -gfw;
      for (int k = 0; k < static_cast<int>(atoms.size()); ++k) {
        const double gk = (atoms[k].v.adjoint() * gc * atoms[k].v)(0, 0).real();
        if (gk < gfw) {
          gfw = gk;
          fw = k;
        }
        if (atoms[k].w > 0.0 && gk > gaway) {
          gaway = gk;
          away = k;
        }
      }
      if (fw < 0 || away < 0 || fw == away || gaway - gfw <= 0.25 * opts.tol) break;
      const Mat4 d = atoms[fw].v * atoms[fw].v.adjoint() - atoms[away].v * atoms[away].v.adjoint();
      const double gamma = line_search(obj, sigma, d, atoms[away].w);
      atoms[fw].w += gamma;
      atoms[away].w -= gamma;
      if (atoms[away].w <= kWeightDrop) {
        atoms[fw].w += atoms[away].w;
        atoms.erase(atoms.begin() + away);
      }
      sigma = assemble(atoms);
    }
    polish_atoms(obj, atoms, kPolishIterations, 1e-2 * opts.tol);
    sigma = assemble(atoms);
  }

  double total = 0.0;
  for (const auto& at : atoms) total += at.w;
  for (auto& at : atoms) at.w /= total;
  if (mix > 0.0) {
    for (auto& at : atoms) at.w *= 1.0 - mix;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Vec2 a = Vec2::Zero(), b = Vec2::Zero();
        a(i) = 1.0;
        b(j) = 1.0;
        atoms.push_back({a, b, kron(a, b), 0.25 * mix});
      }
  }
  sigma = assemble(atoms);

  ReeSolution sol;
  sol.ree_value = std::max(0.0, relative_entropy(rho, sigma));
  sol.closest_separable = TwoQubitState::from_matrix(hermitian_part(sigma), 1e-9);
  sol.decomposition = export_atoms(atoms);
  sol.iterations = outer;
  sol.gap_bound = std::max(0.0, gap);
  return sol;
}

}  // namespace eplab
