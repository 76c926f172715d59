// eplab command-line tool. Results go to stdout (JSON or CSV), errors to
// stderr as {"error": kind, "message": text}. Exit codes: 0 success, 1
// computational failure, 2 usage error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "eplab/boundaries.hpp"
#include "eplab/expsim.hpp"
#include "eplab/figures.hpp"
#include "eplab/io.hpp"
#include "eplab/measures.hpp"
#include "eplab/tomo.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Thrown for bad flag values noticed after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int report(const char* kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
  return code;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw UsageError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

json verdict_json(const eplab::RegionVerdict& v) {
  return {{"region", eplab::to_string(v.region)}, {"margin_lower", v.margin_lower}, {"margin_upper", v.margin_upper}};
}

// Writes to the file, or to stdout when path is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    write_file(path, text);
}

std::string curves_csv(const std::vector<eplab::BoundaryCurve>& curves) {
  std::ostringstream os;
  bool header = true;
  for (const auto& c : curves) {
    eplab::write_curve_csv(os, c, header);
    header = false;
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement potentials of single-photon states: measures, boundaries, tomography"};
  app.set_config("--config", "", "key=value configuration file; flags override it");
  app.require_subcommand(1);
  std::function<void()> action;

  // measures
  auto* measures = app.add_subcommand("measures", "Negativity, concurrence and REE of a state");
  std::string state_file;
  double tol = 1e-6;
  measures->add_option("--state", state_file, "State JSON file")->required()->check(CLI::ExistingFile);
  measures->add_option("--tol", tol, "REE tolerance (bits)")->check(CLI::PositiveNumber);
  measures->callback([&] {
    action = [&] {
      const eplab::StateInput in = eplab::parse_state_json(read_file(state_file));
      const eplab::MeasureTriple m = eplab::measures(in.rho, tol);
      std::cout << json{{"negativity", m.negativity}, {"concurrence", m.concurrence}, {"ree", m.ree}}.dump(2) << '\n';
    };
  });

  // potentials
  auto* pot = app.add_subcommand("potentials", "Entanglement potentials of a VOPS input");
  double p = 1.0, dephasing = 1.0, phi = 0.0, theta_h = 22.5, w = 1.0;
  pot->add_option("--p", p, "Single-photon probability")->required();
  pot->add_option("--D", dephasing, "Coherence factor D in [0, 1]");
  pot->add_option("--phi", phi, "Coherence phase (rad)");
  pot->add_option("--theta-h", theta_h, "Wave-plate angle (deg), r = sin(2 theta)");
  pot->add_option("--w", w, "Interaction coherence");
  pot->add_option("--tol", tol, "REE tolerance (bits)")->check(CLI::PositiveNumber);
  pot->callback([&] {
    action = [&] {
      const double r = std::abs(std::sin(2.0 * theta_h * std::numbers::pi / 180.0));
      const eplab::PotentialTriple t = eplab::potentials(eplab::make_vops(p, dephasing, phi), eplab::BsSetting(r, w), tol);
      std::cout << json{{"np", t.np_value}, {"cp", t.cp_value}, {"reep", t.reep_value}}.dump(2) << '\n';
    };
  });

  // boundary
  auto* boundary = app.add_subcommand("boundary", "One boundary family as CSV");
  std::string family, plane = "NP-vs-REEP", out;
  int samples = 400;
  boundary->add_option("--family", family, "P, D, Z, A or B")->required();
  boundary->add_option("--plane", plane, "CP-vs-NP, CP-vs-REEP or NP-vs-REEP");
  boundary->add_option("--samples", samples, "Number of samples")->check(CLI::Range(3, 100000));
  boundary->add_option("--out", out, "Output CSV (stdout when omitted)");
  boundary->callback([&] {
    action = [&] {
      eplab::Family f;
      eplab::Plane pl;
      try {
        f = eplab::parse_family(family);
        pl = eplab::parse_plane(plane);
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
      emit(out, curves_csv({eplab::boundary_curve(f, pl, samples)}));
    };
  });

  // points
  auto* points = app.add_subcommand("points", "Characteristic points of the (REEP, NP) plane");
  points->callback([&] {
    action = [&] {
      const eplab::CharacteristicPoints c = eplab::characteristic_points();
      std::cout << json{{"N0", c.n0}, {"N1", c.n1}, {"E1", c.e1}, {"N2", c.n2},
                        {"E2", c.e2}, {"N3", c.n3}, {"E3", c.e3}}
                       .dump(2)
                << '\n';
    };
  });

  // classify
  auto* cls = app.add_subcommand("classify", "Region of a (REEP, NP) pair");
  double reep = 0.0, np = 0.0, band = 0.0;
  cls->add_option("--reep", reep, "REE potential")->required();
  cls->add_option("--np", np, "Negativity potential")->required();
  cls->add_option("--band", band, "Statistical tolerance toward yellow")->check(CLI::NonNegativeNumber);
  cls->callback([&] {
    action = [&] {
      if (!(reep >= 0.0 && reep <= 1.0 && np >= 0.0 && np <= 1.0)) throw UsageError("--reep and --np must lie in [0, 1]");
      std::cout << verdict_json(eplab::classify_with_band(reep, np, band)).dump(2) << '\n';
    };
  });

  // simulate
  auto* sim = app.add_subcommand("simulate", "Synthetic count dataset for a Table I class");
  std::string state_class;
  std::string out_dir;
  double counts = 1e5;
  std::uint64_t seed = 1;
  double sim_p = 1.0, sim_theta = 22.5, sim_w = 1.0;
  sim->add_option("--class", state_class, "i (pure input), ii (dephased input) or iii (incoherent interaction)")
      ->required()
      ->check(CLI::IsMember({"i", "ii", "iii"}));
  sim->add_option("--p", sim_p, "Single-photon probability");
  sim->add_option("--phi", phi, "Coherence phase (rad)");
  sim->add_option("--theta-h", sim_theta, "Wave-plate angle (deg); classes ii and iii use 22.5");
  sim->add_option("--w", sim_w, "Interaction coherence (class iii)");
  sim->add_option("--counts", counts, "Expected counts per setting")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--out", out_dir, "Output directory")->required();
  sim->callback([&] {
    action = [&] {
      eplab::SetupConfig c;
      c.p = sim_p;
      c.phi = phi;
      c.counts_per_setting = counts;
      c.seed = seed;
      if (state_class == "i") {
        c.theta_h = sim_theta;
      } else if (state_class == "ii") {
        c.dephasing = 0.0;
      } else {
        c.w = sim_w;
      }
      const fs::path dir(out_dir);
      if (state_class == "iii") {
        const eplab::ClassIIIPair pair = eplab::class_iii_pair(c);
        eplab::save_dataset(dir / "plus", pair.plus);
        eplab::save_dataset(dir / "minus", pair.minus);
        eplab::save_dataset(dir, eplab::incoherent_merge(pair.plus, pair.minus));
        write_file(dir / "truth.json", eplab::truth_to_json(pair.truth) + "\n");
      } else {
        const eplab::SyntheticTruth t = eplab::forward_state(c);
        eplab::save_dataset(dir, eplab::simulate(c, t));
        write_file(dir / "truth.json", eplab::truth_to_json(t) + "\n");
      }
      std::cout << json{{"out", dir.string()}, {"class", state_class}}.dump() << '\n';
    };
  });

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "Block tomography of a count dataset");
  std::string counts_dir;
  int bootstrap = 0;
  double ree_tol = 1e-8;
  rec->add_option("--counts", counts_dir, "Directory with counts.csv and visibility.csv")
      ->required()
      ->check(CLI::ExistingDirectory);
  rec->add_option("--bootstrap", bootstrap, "Bootstrap resamples (0 for none, otherwise >= 100)")
      ->check(CLI::NonNegativeNumber);
  rec->add_option("--seed", seed, "Bootstrap seed");
  rec->add_option("--tol", ree_tol, "REE tolerance (bits)")->check(CLI::PositiveNumber);
  rec->callback([&] {
    action = [&] {
      if (bootstrap > 0 && bootstrap < 100) throw UsageError("--bootstrap needs at least 100 resamples");
      const eplab::CountDataset d = eplab::load_dataset(counts_dir);
      eplab::ReconstructionResult r = eplab::reconstruct(d, ree_tol);
      if (bootstrap > 0) r.uncertainties = eplab::bootstrap_uncertainties(d, bootstrap, seed, ree_tol);
      std::cout << eplab::reconstruction_to_json(r) << '\n';
    };
  });

  // figure
  auto* fig = app.add_subcommand("figure", "CSV data for the relative-EP figures");
  std::string which;
  fig->add_option("--which", which, "2a (CP vs NP), 2b (CP vs REEP), 2c (NP vs REEP) or 4 (class points)")
      ->required()
      ->check(CLI::IsMember({"2a", "2b", "2c", "4"}));
  fig->add_option("--out", out_dir, "Output directory")->required();
  fig->add_option("--samples", samples, "Samples per curve")->check(CLI::Range(3, 100000));
  fig->add_option("--counts", counts, "Expected counts per setting (figure 4)")->check(CLI::PositiveNumber);
  fig->add_option("--bootstrap", bootstrap, "Bootstrap resamples per point (figure 4)")->check(CLI::NonNegativeNumber);
  fig->add_option("--seed", seed, "Seed (figure 4)");
  fig->callback([&] {
    action = [&] {
      const fs::path dir(out_dir);
      fs::create_directories(dir);
      if (which == "4") {
        if (bootstrap > 0 && bootstrap < 100) throw UsageError("--bootstrap needs at least 100 resamples");
        eplab::ClassSweep s;
        s.counts_per_setting = counts;
        s.bootstrap = bootstrap;
        s.seed = seed;
        std::ostringstream os;
        eplab::write_class_points_csv(os, eplab::class_points(s));
        write_file(dir / "fig4_points.csv", os.str());
        for (const auto& [name, pl] : {std::pair{"fig4a", eplab::Plane::cp_vs_np}, std::pair{"fig4b", eplab::Plane::cp_vs_reep},
                                       std::pair{"fig4c", eplab::Plane::np_vs_reep}})
          write_file(dir / (std::string(name) + "_curves.csv"), curves_csv(eplab::figure_curves(pl, samples)));
        return;
      }
      const eplab::Plane pl = which == "2a"   ? eplab::Plane::cp_vs_np
                              : which == "2b" ? eplab::Plane::cp_vs_reep
                                              : eplab::Plane::np_vs_reep;
      write_file(dir / ("fig" + which + "_curves.csv"), curves_csv(eplab::figure_curves(pl, samples)));
      if (which == "2c") {
        std::ostringstream regions, pts;
        eplab::write_region_table(regions, samples);
        write_file(dir / "fig2c_regions.csv", regions.str());
        eplab::write_points_csv(pts, eplab::characteristic_points());
        write_file(dir / "fig2c_points.csv", pts.str());
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), 2);
  }

  try {
    action();
  } catch (const UsageError& e) {
    return report("usage", e.what(), 2);
  } catch (const std::invalid_argument& e) {
    return report("usage", e.what(), 2);
  } catch (const std::domain_error& e) {
    return report("usage", e.what(), 2);
  } catch (const std::exception& e) {
    return report("computation", e.what(), 1);
  }
  return 0;
}
