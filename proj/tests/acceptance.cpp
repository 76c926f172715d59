// Acceptance checks, one line per criterion:
//   acceptance            run all
//   acceptance <id>...    run the named ones
// Exit status is the number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "eplab/boundaries.hpp"
#include "eplab/channels.hpp"
#include "eplab/expsim.hpp"
#include "eplab/figures.hpp"
#include "eplab/tomo.hpp"
#include "test_util.hpp"

using namespace eplab;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double ree_value(const TwoQubitState& rho, const ReeOptions& o) {
  try {
    return ree_numeric(rho, o).ree_value;
  } catch (const ReeConvergenceError& e) {
    if (e.gap() <= o.tol) return e.best_value();
    throw;
  }
}

Outcome closed_form() {
  const auto t0 = std::chrono::steady_clock::now();
  double err_pure = 0.0, err_h = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double p = i / 49.0;
    err_pure = std::max(err_pure, std::abs(ree_value(psi_out(p), {}) - ree_closed_pure(p)));
    err_h = std::max(err_h, std::abs(ree_value(horodecki_state(p), {}) - ree_closed_horodecki(p)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {err_pure <= 1e-4 && err_h <= 1e-4 && secs <= 60.0,
          fmt("max err pure %.2e, Horodecki %.2e, %.2f s", err_pure, err_h, secs)};
}

Outcome characteristic() {
  const CharacteristicPoints c = characteristic_points();
  struct Ref {
    const char* name;
    double e, n, ce, cn;
  };
  const Ref refs[] = {{"P1", 0.228, 0.377, c.e1, c.n1}, {"P2", 0.385, 0.527, c.e2, c.n2}, {"P3", 0.397, 0.6, c.e3, c.n3}};
  bool ok = std::abs(c.n0 - 0.2) <= 0.02;
  std::string d = fmt("N0 %.4f (ref 0.2)", c.n0);
  for (const Ref& r : refs) {
    ok = ok && std::abs(r.ce - r.e) <= 0.005 && std::abs(r.cn - r.n) <= 0.005;
    d += fmt("; %s (%.4f, %.4f) ref (%.3f, %.3f)", r.name, r.ce, r.cn, r.e, r.n);
  }
  return {ok, d};
}

// NP on the sigma_Z curve where its REEP equals e, by bisection in NP.
double sigma_z_np_at(double e) {
  double lo = 1e-6, hi = 1.0 - 1e-6;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (sigma_z_optimize(mid).reep < e ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome dissipation() {
  bool ok = true;
  std::string d;
  for (double k : {0.2, 0.4, 0.6}) {
    const TwoQubitState rho = rho_b(k, k);
    const double e = ree_value(rho, {1e-9});
    const double margin = negativity(rho) - sigma_z_np_at(e);
    ok = ok && margin > 0.0;
    d += fmt("%skappa %.1f margin %.4f", d.empty() ? "" : "; ", k, margin);
  }
  return {ok, d};
}

// Certified lower bound on the REE at the finest solver tolerance.
double ree_lower_bound(const TwoQubitState& rho) {
  ReeOptions o;
  o.tol = 1e-10;
  o.ppt_shortcut = false;
  try {
    const ReeSolution s = ree_numeric(rho, o);
    return s.ree_value - s.gap_bound;
  } catch (const ReeConvergenceError& e) {
    return e.best_value() - e.gap();
  }
}

Outcome measure_properties() {
  std::mt19937_64 rng(2024);
  const double tol = 1e-6;
  int bad_order = 0, bad_pure = 0, bad_lu = 0, bad_ree = 0, ppt = 0, faint = 0;
  for (int i = 0; i < 10000; ++i) {
    const TwoQubitState rho = testutil::random_state(rng, 1 + i % 4);
    const double n = negativity(rho), c = concurrence(rho);
    if (!(n >= -1e-9 && n <= c + 1e-9 && c <= 1.0 + 1e-9)) ++bad_order;
    const TwoQubitState psi = testutil::random_pure(rng);
    if (std::abs(negativity(psi) - concurrence(psi)) > 1e-8) ++bad_pure;
    const TwoQubitState r2 = testutil::random_local_rotation(rng, rho);
    if (std::abs(negativity(r2) - n) > 1e-9 || std::abs(concurrence(r2) - c) > 1e-9) ++bad_lu;
    // Both directions, without the PPT shortcut. NPT states whose REE is
    // itself below tol (N ~ 1e-4) must get a certified positive lower bound.
    ReeOptions o;
    o.tol = tol;
    o.ppt_shortcut = false;
    const bool is_ppt = eigvalsh(partial_transpose(rho.matrix())).minCoeff() >= 0.0;
    ppt += is_ppt;
    const double e = ree_value(rho, o);
    if (is_ppt) {
      bad_ree += e > tol;
    } else if (e <= tol) {
      ++faint;
      bad_ree += !(ree_lower_bound(rho) > 0.0);
    }
  }
  return {bad_order + bad_pure + bad_lu + bad_ree == 0,
          fmt("violations: order %d, pure N=C %d, LU %d, REE/PPT %d (%d PPT states, %d NPT with REE < tol certified "
              "by a 1e-10 solve)",
              bad_order, bad_pure, bad_lu, bad_ree, ppt, faint)};
}

struct ClassCase {
  const char* name;
  SetupConfig config;
};

std::vector<ClassCase> table_i_cases() {
  std::vector<ClassCase> out;
  for (double p : {0.3, 0.6, 0.9}) {
    SetupConfig c;
    c.p = p;
    out.push_back({"i", c});
    c.dephasing = 0.0;
    out.push_back({"ii", c});
  }
  for (double w : {0.3, 0.6, 0.9}) {
    SetupConfig c;
    c.w = w;
    out.push_back({"iii", c});
  }
  return out;
}

Outcome tomo_round_trip() {
  double worst_f = 1.0, worst_m = 0.0, worst_sd = 0.0;
  for (const ClassCase& k : table_i_cases()) {
    SyntheticTruth t;
    CountDataset d;
    if (std::string(k.name) == "iii") {
      const ClassIIIPair pair = class_iii_pair(k.config);
      t = pair.truth;
      d = incoherent_merge(pair.plus, pair.minus);
    } else {
      t = forward_state(k.config);
      d = simulate(k.config, t);
    }
    const ReconstructionResult r = reconstruct(d);
    worst_f = std::min(worst_f, fidelity(remove_local_phases(t.rho_true.matrix()), r.rho.matrix()));
    worst_m = std::max({worst_m, std::abs(r.potentials.np_value - t.potentials_true.np_value),
                        std::abs(r.potentials.cp_value - t.potentials_true.cp_value),
                        std::abs(r.potentials.reep_value - t.potentials_true.reep_value)});
    const MeasureUncertainties u = bootstrap_uncertainties(d, 500, 7);
    worst_sd = std::max({worst_sd, u.negativity, u.concurrence, u.ree});
  }
  return {worst_f >= 0.99 && worst_m <= 0.03 && worst_sd <= 0.03,
          fmt("min fidelity %.4f, max measure error %.4f, max bootstrap sd %.4f", worst_f, worst_m, worst_sd)};
}

Outcome class_separation() {
  ClassSweep s;
  s.bootstrap = 100;
  const std::vector<ClassPoint> pts = class_points(s);
  int wrong_iii = 0, wrong_yellow = 0, n_iii = 0, n_yellow = 0;
  std::vector<std::pair<double, double>> class_i;
  for (const ClassPoint& p : pts) {
    if (p.state_class == "iii") {
      ++n_iii;
      wrong_iii += p.verdict.region != Region::cyan_upper;
    } else {
      ++n_yellow;
      wrong_yellow += p.verdict.region != Region::yellow;
    }
    if (p.state_class == "i") class_i.emplace_back(p.result.potentials.np_value, p.result.potentials.cp_value);
  }
  std::sort(class_i.begin(), class_i.end());
  // Class (ii) CP against the class (i) curve interpolated at the same NP.
  int compared = 0, below = 0;
  double min_gap = 1.0;
  for (const ClassPoint& p : pts) {
    if (p.state_class != "ii") continue;
    const double n = p.result.potentials.np_value;
    if (n < 0.2 || n > 0.9 || n < class_i.front().first || n > class_i.back().first) continue;
    const auto hi = std::lower_bound(class_i.begin(), class_i.end(), std::make_pair(n, -1.0));
    const auto lo = hi == class_i.begin() ? hi : hi - 1;
    const double t = hi->first == lo->first ? 0.0 : (n - lo->first) / (hi->first - lo->first);
    const double cp_i = lo->second + t * (hi->second - lo->second);
    const double gap = p.result.potentials.cp_value - cp_i;
    min_gap = std::min(min_gap, gap);
    ++compared;
    below += gap <= 0.0;
  }
  return {wrong_iii == 0 && wrong_yellow == 0 && compared > 0 && below == 0,
          fmt("class iii not cyan-upper %d/%d, classes i/ii not yellow %d/%d, class ii above i at %d/%d matched NP "
              "(min CP gap %.4f)",
              wrong_iii, n_iii, wrong_yellow, n_yellow, compared - below, compared, min_gap)};
}

Outcome channel_algebra() {
  double kraus = 0.0, trace = 0.0, pt = 0.0, horo = 0.0;
  std::mt19937_64 rng(5);
  for (int i = 0; i <= 10; ++i) {
    const double g = i / 10.0;
    for (const KrausPair& k : {amplitude_damping(g), phase_damping(g)}) {
      kraus = std::max(kraus, k.completeness_defect());
      for (int j = 0; j < 5; ++j) {
        const TwoQubitState rho = testutil::random_state(rng);
        for (int q : {1, 2})
          trace = std::max(trace, std::abs(apply_kraus(rho, q, k).matrix().trace().real() - 1.0));
      }
    }
    const double p = i / 10.0;
    horo = std::max(horo, testutil::max_abs(bs_transform(make_vops(p, 0.0), BsSetting::balanced()).matrix() -
                                            horodecki_state(p).matrix()));
  }
  for (int i = 0; i < 1000; ++i) {
    const Mat4 m = testutil::random_state(rng).matrix();
    pt = std::max(pt, testutil::max_abs(partial_transpose(partial_transpose(m)) - m));
  }
  const double tol = 1e-12;
  return {kraus <= tol && trace <= tol && pt <= tol && horo <= tol,
          fmt("completeness %.1e, trace %.1e, PT involution %.1e, BS/Horodecki %.1e", kraus, trace, pt, horo)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> all = {
      {"closed_form", closed_form},         {"characteristic_points", characteristic},
      {"dissipation", dissipation},         {"measure_properties", measure_properties},
      {"tomo_round_trip", tomo_round_trip}, {"class_separation", class_separation},
      {"channel_algebra", channel_algebra}};
  std::vector<std::string> wanted(argv + 1, argv + argc);
  for (const auto& w : wanted) {
    bool known = false;
    for (const auto& [id, f] : all) known |= id == w;
    if (!known) {
      std::fprintf(stderr, "unknown criterion '%s'\n", w.c_str());
      return 2;
    }
  }
  int failed = 0;
  for (const auto& [id, f] : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), id) == wanted.end()) continue;
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", id.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
