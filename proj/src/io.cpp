#include "eplab/io.hpp"

#include <stdexcept>

#include "json.hpp"
#include "json_util.hpp"

namespace eplab {

namespace {

Mat4 read_matrix(const nlohmann::json& j) {
  const auto& re = j.at("matrix_re");
  const nlohmann::json im = j.contains("matrix_im") ? j.at("matrix_im") : nlohmann::json();
  auto check = [](const nlohmann::json& m, const char* name) {
    if (!m.is_array() || m.size() != 4) throw std::invalid_argument(std::string(name) + " must be a 4x4 array");
    for (const auto& row : m)
      if (!row.is_array() || row.size() != 4) throw std::invalid_argument(std::string(name) + " must be a 4x4 array");
  };
  check(re, "matrix_re");
  if (!im.is_null()) check(im, "matrix_im");
  Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) m(i, k) = cplx(re[i][k].get<double>(), im.is_null() ? 0.0 : im[i][k].get<double>());
  return m;
}

}  // namespace

StateInput parse_state_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("state JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("state JSON must be an object");
  std::string kind = j.value("kind", std::string());
  if (kind.empty()) kind = j.contains("matrix_re") ? "two_qubit" : "vops";
  try {
    if (kind == "two_qubit") return StateInput{std::nullopt, std::nullopt, TwoQubitState::from_matrix(read_matrix(j))};
    if (kind == "vops") {
      const VopsState s = make_vops(j.at("p").get<double>(), j.value("D", 1.0), j.value("phi", 0.0));
      const BsSetting b(j.value("r", BsSetting().r()), j.value("w", 1.0));
      return StateInput{s, b, bs_transform(s, b)};
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("state JSON: ") + e.what());
  }
  throw std::invalid_argument("state JSON: unknown kind '" + kind + "'");
}

std::string state_to_json(const TwoQubitState& rho) { return json_util::state(rho).dump(); }

}  // namespace eplab
