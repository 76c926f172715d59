// Tabulates the sigma_Z and rho_A boundary curves used by
// eplab::default_region_model(). Run by the build.
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "eplab/boundaries.hpp"

namespace {

void emit(std::ostream& os, const char* name, const eplab::BoundaryCurve& c) {
  os << "constexpr Row " << name << "[] = {\n";
  for (const auto& s : c.samples)
    os << "    {" << s.abscissa << ", " << s.ordinate << ", " << s.param_p << ", " << s.param_q_or_x << ", "
       << s.param_kappa << ", " << s.np_value << ", " << s.cp_value << ", " << s.reep_value << "},\n";
  os << "};\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: gen_region_tables <samples> <out.inc>\n";
    return 2;
  }
  try {
    const int n = std::stoi(argv[1]);
    const auto z = eplab::make_curve(eplab::Family::Z, eplab::Plane::np_vs_reep, n);
    const auto a = eplab::make_curve(eplab::Family::A, eplab::Plane::np_vs_reep, n);
    std::ofstream out(argv[2]);
    out << "// generated by gen_region_tables; do not edit\n" << std::setprecision(17);
    emit(out, "kSigmaZRows", z);
    emit(out, "kRhoARows", a);
    if (!out) {
      std::cerr << "cannot write " << argv[2] << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
