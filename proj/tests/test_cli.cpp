#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "eplab_cli_test";
  fs::create_directories(d);
  return d;
}

Run run(const std::string& args) {
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string(EPLAB_CLI) + " " + args + " 2>" + err.string();
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream e(err);
  std::ostringstream ss;
  ss << e.rdbuf();
  r.err = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit 2 with JSON on stderr") {
  for (const char* args : {"", "bogus", "potentials", "potentials --p 1 --unknown 3", "classify --reep x --np 1",
                           "simulate --class iv --out /tmp/x", "reconstruct --counts /nonexistent",
                           "potentials --p 1.5", "reconstruct --counts . --bootstrap 10"}) {
    CAPTURE(args);
    const Run r = run(args);
    CHECK(r.code == 2);
    const json j = json::parse(r.err.substr(0, r.err.find('\n')));
    CHECK(j.contains("error"));
    CHECK(j.contains("message"));
  }
}

TEST_CASE("potentials of the singlet input") {
  const Run r = run("potentials --p 1 --D 1 --theta-h 22.5 --w 1");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["np"].get<double>() == doctest::Approx(1.0));
  CHECK(j["cp"].get<double>() == doctest::Approx(1.0));
  CHECK(j["reep"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("measures from a state file") {
  const fs::path f = scratch() / "state.json";
  std::ofstream(f) << R"({"kind":"vops","p":0.5,"D":0})";
  const Run r = run("measures --state " + f.string());
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["negativity"].get<double>() == doctest::Approx(0.207107).epsilon(1e-6));
  CHECK(j["ree"].get<double>() == doctest::Approx(0.122556).epsilon(1e-6));
  std::ofstream(f) << R"({"kind":"vops","p":2,"D":0})";
  CHECK(run("measures --state " + f.string()).code == 2);
}

TEST_CASE("points and classify") {
  const Run p = run("points");
  REQUIRE(p.code == 0);
  CHECK(json::parse(p.out)["N1"].get<double>() == doctest::Approx(0.377).epsilon(0.02));
  const Run c = run("classify --reep 0.188721875540867 --np 0.5");
  REQUIRE(c.code == 0);
  CHECK(json::parse(c.out)["region"] == "cyan-upper");
  CHECK(json::parse(run("classify --reep 0.9 --np 0.05").out)["region"] == "unphysical");
}

TEST_CASE("boundary CSV") {
  const fs::path f = scratch() / "b.csv";
  REQUIRE(run("boundary --family D --plane CP-vs-NP --samples 11 --out " + f.string()).code == 0);
  std::ifstream in(f);
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 11);
  CHECK(run("boundary --family Q").code == 2);
}

TEST_CASE("simulate class iii then reconstruct gives cyan-upper") {
  const fs::path d = scratch() / "iii";
  fs::remove_all(d);
  REQUIRE(run("simulate --class iii --p 1 --w 0.6 --seed 3 --out " + d.string()).code == 0);
  CHECK(fs::exists(d / "counts.csv"));
  CHECK(fs::exists(d / "plus" / "counts.csv"));
  CHECK(fs::exists(d / "truth.json"));
  const Run r = run("reconstruct --counts " + d.string() + " --bootstrap 100 --seed 4");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["region"]["region"] == "cyan-upper");
  CHECK(j["uncertainties"]["np"].get<double>() < 0.03);
  // Same flags, same output.
  CHECK(run("reconstruct --counts " + d.string() + " --bootstrap 100 --seed 4").out == r.out);
}

TEST_CASE("reconstruct reports computational failures with exit 1") {
  const fs::path d = scratch() / "broken";
  fs::remove_all(d);
  fs::create_directories(d);
  std::ofstream(d / "counts.csv") << "setting_id,proj_a,proj_b,counts,time_s\nHV,H,V,10,1\n";
  const Run r = run("reconstruct --counts " + d.string());
  CHECK(r.code == 1);
  CHECK(json::parse(r.err.substr(0, r.err.find('\n'))).contains("error"));
}

TEST_CASE("config file is overridden by flags") {
  const fs::path f = scratch() / "cfg.ini";
  std::ofstream(f) << "[potentials]\np=0.5\nD=0\n";
  const Run r = run("--config " + f.string() + " potentials --D 1");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["np"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("figure output is byte-identical across runs") {
  const fs::path a = scratch() / "fa", b = scratch() / "fb";
  fs::remove_all(a);
  fs::remove_all(b);
  REQUIRE(run("figure --which 2c --samples 30 --out " + a.string()).code == 0);
  REQUIRE(run("figure --which 2c --samples 30 --out " + b.string()).code == 0);
  for (const char* name : {"fig2c_curves.csv", "fig2c_regions.csv", "fig2c_points.csv"}) {
    CAPTURE(name);
    const std::string x = slurp(a / name);
    CHECK(!x.empty());
    CHECK(x == slurp(b / name));
  }
  REQUIRE(run("figure --which 4 --counts 20000 --out " + a.string()).code == 0);
  REQUIRE(run("figure --which 4 --counts 20000 --out " + b.string()).code == 0);
  CHECK(slurp(a / "fig4_points.csv") == slurp(b / "fig4_points.csv"));
  CHECK(run("figure --which 3 --out " + a.string()).code == 2);
}
