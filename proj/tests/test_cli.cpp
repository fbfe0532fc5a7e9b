#include "celliptic/cli.hpp"
#include "celliptic/grid.hpp"
#include "celliptic/operator_io.hpp"
#include "celliptic/operator_zoo.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace celliptic;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json result_of(const Outcome &o) {
  REQUIRE_MESSAGE(o.code == 0, o.err);
  return json::parse(o.out)["result"];
}

std::string scratch(const std::string &name) {
  const auto dir = std::filesystem::temp_directory_path() / "celliptic_cli_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string read_file(const std::string &path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

} // namespace

TEST_CASE("classify reports the Laplacian certificate") {
  const json r = result_of(call({"classify", "--operator", "zoo:laplacian_scalar", "--n", "2"}));
  CHECK(r["verdict"] == "not_c_elliptic");
  const auto &xi = r["certificate"]["xi"];
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(xi["re"][0].get<double>() == doctest::Approx(s).epsilon(1e-6));
  CHECK(std::abs(xi["im"][0].get<double>()) < 1e-6);
  CHECK(std::abs(xi["re"][1].get<double>()) < 1e-6);
  CHECK(std::abs(xi["im"][1].get<double>()) == doctest::Approx(s).epsilon(1e-6));
  CHECK(r["certificate"]["residual"].get<double>() <= 1e-7);
}

TEST_CASE("nullspace subcommand") {
  const std::string path = scratch("basis.json");
  const Outcome o = call({"nullspace", "--operator", "zoo:symmetric_gradient", "--n", "2", "--dmax", "6", "--out", path});
  REQUIRE(o.code == 0);
  CHECK(o.out.empty());
  const json r = json::parse(read_file(path))["result"];
  CHECK(r["dims"] == json({2, 3, 3, 3, 3, 3, 3}));
  CHECK(r["basis"].size() == 3);
  CHECK(r["stabilized"] == true);
  const Polynomial p = polynomial_from_json(r["basis"][0]);
  CHECK(p.n() == 2);
}

TEST_CASE("operator files round trip through the CLI") {
  const std::string path = scratch("op.json");
  const json j = operator_to_json(zoo::symmetric_gradient(3));
  std::ofstream(path) << j.dump();
  const json r = result_of(call({"nullspace", "--operator", path, "--dmax", "3"}));
  CHECK(r["operator"] == j);
  CHECK(operator_to_json(operator_from_json(r["operator"])) == j);
  CHECK(r["dim"] == 6);
}

TEST_CASE("synth prototypes") {
  const std::string half = scratch("half.grid");
  const Outcome o = call({"synth", "--kind", "indicator_halfdisk", "--lo", "-2", "--hi", "2", "--h", "0.00390625", "--out", half});
  const json r = result_of(o);
  const GridFunction g = read_grid(half);
  CHECK(((g.values().array() == 0.0) || (g.values().array() == 1.0)).all());
  CHECK(r["components"][0]["mean"].get<double>() == doctest::Approx(std::numbers::pi / 2 / 16).epsilon(0.01));

  const std::string rigid = scratch("rigid.grid");
  result_of(call({"synth", "--kind", "polynomial", "--h", "0.125", "--out", rigid, "--params",
                  R"({"terms": [{"alpha": [0, 1], "w": [-1, 0]}, {"alpha": [1, 0], "w": [0, 1]}]})"}));
  const GridFunction rg = read_grid(rigid);
  for (Eigen::Index l = 0; l < rg.size(); ++l) {
    const Eigen::VectorXd x = rg.point(l);
    CHECK(rg.value(l)(0) == -x(1));
    CHECK(rg.value(l)(1) == x(0));
  }

  const std::string cone = scratch("cone.grid");
  result_of(call({"synth", "--kind", "cone_abs", "--h", "0.0625", "--out", cone}));
  const GridFunction cg = read_grid(cone);
  const Eigen::Index mid = cg.find_point(Eigen::VectorXd::Zero(2));
  REQUIRE(mid >= 0);
  CHECK(cg.value(mid)(0) == 0.0);
  for (Eigen::Index l = 0; l < cg.size(); ++l)
    CHECK(cg.value(l)(0) == cg.value(cg.find_point(-cg.point(l)))(0));

  CHECK(call({"synth", "--kind", "spiral", "--out", scratch("x.grid")}).code == 1);
}

TEST_CASE("riesz and maximal subcommands") {
  const std::string grid = scratch("one.grid");
  result_of(call({"synth", "--kind", "polynomial", "--h", "0.00390625", "--out", grid, "--params",
                  R"({"terms": [{"alpha": [0, 0], "w": [1]}]})"}));
  const std::string disk = scratch("disk.json");
  std::ofstream(disk) << json({{"density_ref", "one.grid"},
                               {"window", {{{"kind", "ball"}, {"center", {0, 0}}, {"radius", 1.0}}}}})
                             .dump();
  const json r = result_of(call({"riesz", "--measure", disk, "--s", "1", "--x0", "0", "0"}));
  const double v = r["potential"]["value"].get<double>();
  CHECK(std::abs(v - 2 * std::numbers::pi) <= 0.02 * 2 * std::numbers::pi);

  const std::string delta = scratch("delta.json");
  std::ofstream(delta) << R"({"atoms": [{"x": [0, 0], "w": [1]}]})";
  CHECK(result_of(call({"riesz", "--measure", delta, "--s", "1", "--x0", "1", "0"}))["potential"]["value"] == 1.0);
  CHECK(result_of(call({"riesz", "--measure", delta, "--s", "1", "--x0", "0", "0"}))["potential"]["infinite"] == true);
  const json m = result_of(call({"maximal", "--measure", delta, "--k", "1", "--x0", "1", "0", "--R", "2", "--levels", "4"}));
  CHECK(m["value"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == 1);
  CHECK(call({"frobnicate"}).code == 1);
  CHECK(call({"classify"}).code == 1);
  CHECK(call({"classify", "--operator", "zoo:nonexistent"}).code == 1);
  CHECK(call({"riesz", "--measure", scratch("missing.json"), "--s", "1", "--x0", "0", "0"}).code == 1);
  const std::string delta = scratch("delta2.json");
  std::ofstream(delta) << R"({"atoms": [{"x": [0, 0], "w": [1]}]})";
  CHECK(call({"riesz", "--measure", delta, "--s", "0", "--x0", "1", "0"}).code == 2);
  CHECK(call({"riesz", "--measure", delta, "--s", "1", "--x0", "1"}).code == 1);
  const std::string tiny = scratch("tiny.grid");
  result_of(call({"synth", "--kind", "cone_abs", "--lo", "0", "--hi", "0.5", "--h", "0.25", "--out", tiny}));
  CHECK(call({"linfty-check", "--operator", "zoo:hessian", "--grid", tiny, "--center", "0.25", "0.25", "--radius", "0.1"}).code == 3);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  std::vector<std::string> grids;
  for (const char *h : {"0.03125", "0.015625", "0.0078125"}) {
    grids.push_back(scratch(std::string("hd_") + h + ".grid"));
    result_of(call({"synth", "--kind", "indicator_halfdisk", "--lo", "-2", "--hi", "2", "--h", h, "--out", grids.back()}));
  }
  std::vector<std::string> args{"lebesgue-scan", "--operator", "zoo:gradient", "--grids"};
  args.insert(args.end(), grids.begin(), grids.end());
  const std::string csv = scratch("scan.csv");
  args.insert(args.end(), {"--points", "0", "1", "0", "0.5", "--r", "0.5", "--csv", csv});
  setenv("CELLIPTIC_THREADS", "1", 1);
  const Outcome a = call(args);
  setenv("CELLIPTIC_THREADS", "3", 1);
  const Outcome b = call(args);
  unsetenv("CELLIPTIC_THREADS");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const json r = json::parse(a.out)["result"];
  CHECK(r["verdicts"][0]["predicted"] == "sigma_candidate");
  CHECK(r["verdicts"][1]["predicted"] == "lebesgue");
  const std::string text = read_file(csv);
  CHECK(text.rfind("x0_1,x0_2,slope,osc_last,verdict\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);

  const std::vector<std::string> classify{"classify", "--operator", "zoo:tracefree_symmetric_gradient", "--n", "2", "--seed", "7"};
  CHECK(call(classify).out == call(classify).out);
}
