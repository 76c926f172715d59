#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "eplab/boundaries.hpp"
#include "eplab/expsim.hpp"
#include "eplab/figures.hpp"
#include "eplab/io.hpp"
#include "eplab/measures.hpp"
#include "eplab/tomo.hpp"

namespace py = pybind11;
using namespace eplab;

namespace {

TwoQubitState to_state(const Mat4& m) { return TwoQubitState::from_matrix(m); }

py::dict triple(const PotentialTriple& t) {
  py::dict d;
  d["np"] = t.np_value;
  d["cp"] = t.cp_value;
  d["reep"] = t.reep_value;
  return d;
}

py::dict verdict(const RegionVerdict& v) {
  py::dict d;
  d["region"] = to_string(v.region);
  d["margin_lower"] = v.margin_lower;
  d["margin_upper"] = v.margin_upper;
  return d;
}

SetupConfig make_config(double p, double dephasing, double phi, double theta_h, double w, double counts,
                        std::uint64_t seed) {
  SetupConfig c;
  c.p = p;
  c.dephasing = dephasing;
  c.phi = phi;
  c.theta_h = theta_h;
  c.w = w;
  c.counts_per_setting = counts;
  c.seed = seed;
  return c;
}

}  // namespace

PYBIND11_MODULE(_eplab, m) {
  m.doc() = "Entanglement potentials of single-photon states";

  py::register_exception<TomographyError>(m, "TomographyError", PyExc_RuntimeError);
  py::register_exception<ReeConvergenceError>(m, "ReeConvergenceError", PyExc_RuntimeError);

  // States, as 4x4 complex numpy arrays.
  m.def("vops", [](double p, double d, double phi) { return make_vops(p, d, phi).matrix(); }, py::arg("p"),
        py::arg("D") = 1.0, py::arg("phi") = 0.0, "2x2 VOPS density matrix");
  m.def(
      "bs_output",
      [](double p, double d, double phi, double r, double w) {
        return bs_transform(make_vops(p, d, phi), BsSetting(r, w)).matrix();
      },
      py::arg("p"), py::arg("D") = 1.0, py::arg("phi") = 0.0, py::arg("r") = std::sqrt(0.5), py::arg("w") = 1.0,
      "Beam-splitter output of a VOPS input and the vacuum");
  m.def("psi_out", [](double p) { return psi_out(p).matrix(); }, py::arg("p"));
  m.def("psi_q", [](double q) { return psi_q(q).matrix(); }, py::arg("q"));
  m.def("horodecki_state", [](double p) { return horodecki_state(p).matrix(); }, py::arg("p"));
  m.def("generalized_horodecki", [](double p, double q) { return generalized_horodecki(p, q).matrix(); },
        py::arg("p"), py::arg("q"));
  m.def("rho_b", [](double k1, double k2) { return rho_b(k1, k2).matrix(); }, py::arg("kappa1"), py::arg("kappa2"));
  m.def("partial_transpose", &partial_transpose, py::arg("rho"));

  // Measures. Matrices are validated as density matrices.
  m.def("negativity", [](const Mat4& rho) { return negativity(to_state(rho)); }, py::arg("rho"));
  m.def("concurrence", [](const Mat4& rho) { return concurrence(to_state(rho)); }, py::arg("rho"));
  m.def(
      "ree", [](const Mat4& rho, double tol) { return relative_entropy_of_entanglement(to_state(rho), tol); },
      py::arg("rho"), py::arg("tol") = 1e-6, "Relative entropy of entanglement in bits");
  m.def(
      "measures",
      [](const Mat4& rho, double tol) {
        const MeasureTriple t = measures(to_state(rho), tol);
        py::dict d;
        d["negativity"] = t.negativity;
        d["concurrence"] = t.concurrence;
        d["ree"] = t.ree;
        return d;
      },
      py::arg("rho"), py::arg("tol") = 1e-6);
  m.def(
      "potentials",
      [](double p, double d, double phi, double r, double w, double tol) {
        return triple(potentials(make_vops(p, d, phi), BsSetting(r, w), tol));
      },
      py::arg("p"), py::arg("D") = 1.0, py::arg("phi") = 0.0, py::arg("r") = std::sqrt(0.5), py::arg("w") = 1.0,
      py::arg("tol") = 1e-6);
  m.def("ree_closed_pure", &ree_closed_pure, py::arg("p"));
  m.def("ree_closed_horodecki", &ree_closed_horodecki, py::arg("p"));

  // Boundaries.
  m.def(
      "boundary",
      [](const std::string& family, const std::string& plane, int samples) {
        const BoundaryCurve c = boundary_curve(parse_family(family), parse_plane(plane), samples);
        std::vector<double> x, y;
        for (const auto& s : c.samples) {
          x.push_back(s.abscissa);
          y.push_back(s.ordinate);
        }
        return std::make_pair(x, y);
      },
      py::arg("family"), py::arg("plane") = "NP-vs-REEP", py::arg("samples") = 400,
      "(abscissa, ordinate) lists of one boundary family");
  m.def(
      "sigma_z_optimize",
      [](double n) {
        const SigmaZResult r = sigma_z_optimize(n);
        return py::dict(py::arg("p") = r.p_opt, py::arg("x") = r.x_opt, py::arg("reep") = r.reep);
      },
      py::arg("n_bar"));
  m.def(
      "rho_a_optimize",
      [](double n) {
        const RhoAResult r = rho_a_optimize(n);
        return py::dict(py::arg("p") = r.p_opt, py::arg("q") = r.q_opt, py::arg("ree") = r.ree);
      },
      py::arg("n_bar"));
  m.def("characteristic_points", [] {
    const CharacteristicPoints c = characteristic_points();
    return py::dict(py::arg("N0") = c.n0, py::arg("N1") = c.n1, py::arg("E1") = c.e1, py::arg("N2") = c.n2,
                    py::arg("E2") = c.e2, py::arg("N3") = c.n3, py::arg("E3") = c.e3);
  });
  m.def(
      "classify", [](double reep, double np, double band) { return verdict(classify_with_band(reep, np, band)); },
      py::arg("reep"), py::arg("np"), py::arg("band") = 0.0, "Region of a (REEP, NP) point");

  // Synthetic experiment and tomography.
  py::class_<CountDataset>(m, "CountDataset")
      .def_property_readonly("n_settings", [](const CountDataset& d) { return d.records.size(); })
      .def("save", [](const CountDataset& d, const std::filesystem::path& dir) { save_dataset(dir, d); })
      .def_static("load", &load_dataset, py::arg("dir"))
      .def("merge", &incoherent_merge, py::arg("other"), "Settingwise sum of counts and times");

  m.def(
      "simulate",
      [](const std::string& state_class, double p, double phi, double theta_h, double w, double counts,
         std::uint64_t seed) {
        SyntheticTruth t;
        CountDataset d;
        if (state_class == "iii") {
          const ClassIIIPair pair = class_iii_pair(make_config(p, 1.0, phi, theta_h, w, counts, seed));
          t = pair.truth;
          d = incoherent_merge(pair.plus, pair.minus);
        } else if (state_class == "i" || state_class == "ii") {
          const SetupConfig c = make_config(p, state_class == "i" ? 1.0 : 0.0, phi, theta_h, 1.0, counts, seed);
          t = forward_state(c);
          d = simulate(c, t);
        } else {
          throw std::invalid_argument("class must be i, ii or iii");
        }
        return std::make_pair(d, t.rho_true.matrix());
      },
      py::arg("state_class"), py::arg("p") = 1.0, py::arg("phi") = 0.0, py::arg("theta_h") = 22.5,
      py::arg("w") = 1.0, py::arg("counts") = 1e5, py::arg("seed") = 1,
      "(dataset, true density matrix) for a Table I class");
  m.def(
      "reconstruct",
      [](const CountDataset& d, int bootstrap, std::uint64_t seed, double tol) {
        ReconstructionResult r;
        {
          py::gil_scoped_release release;
          r = reconstruct(d, tol);
          if (bootstrap > 0) r.uncertainties = bootstrap_uncertainties(d, bootstrap, seed, tol);
        }
        py::dict out;
        out["rho"] = r.rho.matrix();
        out["potentials"] = triple(r.potentials);
        out["uncertainties"] = py::dict(py::arg("np") = r.uncertainties.negativity,
                                        py::arg("cp") = r.uncertainties.concurrence,
                                        py::arg("reep") = r.uncertainties.ree);
        out["purity_criterion"] = r.purity_criterion;
        out["class_i_flag"] = r.class_i_flag;
        out["criterion_warning"] = r.criterion_warning;
        const double band = classification_band(r.uncertainties);
        out["region_point"] = verdict(classify(r.potentials.reep_value, r.potentials.np_value));
        out["region"] = verdict(classify_with_band(r.potentials.reep_value, r.potentials.np_value, band));
        return out;
      },
      py::arg("dataset"), py::arg("bootstrap") = 0, py::arg("seed") = 1, py::arg("tol") = 1e-8);
  m.def("fidelity", &fidelity, py::arg("a"), py::arg("b"));
  m.def("remove_local_phases", &remove_local_phases, py::arg("rho"));
}
