#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mwfpi/io.hpp"
#include "mwfpi/runner.hpp"

using namespace mwfpi;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mwfpi_test_runner_" + name);
  fs::remove_all(p);
  return p;
}

std::map<std::string, std::string> checksums(const RunManifest& m) {
  std::map<std::string, std::string> out;
  for (const auto& f : m.files) out[f.name] = f.sha256;
  return out;
}
}  // namespace

TEST_CASE("overrides and axes") {
  json doc = default_config_json();
  apply_override(doc, "params.gravity_m_s2=0.002");
  apply_override(doc, "output.dir=somewhere");
  apply_override(doc, "sweep.energy_over_vb={\"min\":0.1,\"max\":0.3,\"count\":3}");
  CHECK(doc["params"]["gravity_m_s2"].get<double>() == 0.002);
  CHECK(doc["output"]["dir"].get<std::string>() == "somewhere");
  doc["scenario"] = "sweep";
  const ScenarioConfig c = parse_config(doc);
  REQUIRE(c.energy_over_vb.size() == 3);
  CHECK(c.energy_over_vb[1] == doctest::Approx(0.2));
  CHECK(c.gravity_m_s2.size() == 30);

  const auto sym = parse_axis(json{{"min", -1.0}, {"max", 1.0}, {"count", 5}});
  CHECK(sym[2] == 0.0);
  CHECK(parse_axis(json(0.5)) == std::vector<double>{0.5});
  CHECK_THROWS_AS(parse_axis(json("x")), Error);
  CHECK_THROWS_AS(apply_override(doc, "novalue"), Error);
}

TEST_CASE("validation rejects bad configs") {
  auto bad = [](const std::string& o, const std::string& scenario = "sweep") {
    CHECK_THROWS_AS(load_config("", {o}, scenario), Error);
  };
  bad("grid.points=1000");
  bad("sweep.energy_over_vb=[0.3,0.2]");
  bad("params.barrier_height_J=-1");
  bad("resonances.gravity_m_s2=[0.001,0.002]", "resonances");
  CHECK_THROWS_AS(load_config("", {}, "nonsense"), Error);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
  CHECK_NOTHROW(load_config("", {}, "spectrum"));
}

TEST_CASE("formatting and hashing") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::nan("")) == "nan");
  const fs::path dir = scratch("hash");
  fs::create_directories(dir);
  const std::string f = (dir / "abc.txt").string();
  std::ofstream(f) << "abc";
  CHECK(sha256_file(f) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  fs::remove_all(dir);
}

TEST_CASE("a one-point sweep reproduces the transmit scenario") {
  const double g = 1.3e-3, e = 0.77;
  const fs::path d1 = scratch("sweep1"), d2 = scratch("transmit");
  const ScenarioConfig sc = load_config("", {"sweep.gravity_m_s2=[0.0013]", "sweep.energy_over_vb=[0.77]",
                                             "output.svg=false", "output.dir=\"" + d1.string() + "\""}, "sweep");
  const ScenarioConfig tc = load_config("", {"params.gravity_m_s2=0.0013", "transmit.energy_over_vb=0.77",
                                             "output.svg=false", "output.dir=\"" + d2.string() + "\""}, "transmit");
  const RunManifest ms = run(sc, 1);
  const RunManifest mt = run(tc, 1);
  REQUIRE(ms.failures() == 0);
  REQUIRE(mt.failures() == 0);
  CHECK(ms.summary["unreachable_points"].get<int>() == 0);
  CHECK(mt.summary["T_R"].get<double>() > 0.0);
  CHECK(mt.summary["E_over_Vb"].get<double>() == doctest::Approx(e));
  std::ifstream in(d1 / "sweep_points.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(row.rfind(format_double(g) + "," + format_double(e) + "," + format_double(mt.summary["T_R"].get<double>()), 0) == 0);
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST_CASE("manifests list every output and are reproducible across worker counts") {
  const fs::path d1 = scratch("rep1"), d2 = scratch("rep2");
  auto cfg = [](const fs::path& d) {
    return load_config("", {"sweep.gravity_m_s2=[0.0011,0.0013]", "sweep.energy_over_vb=[0.75,0.8]",
                            "output.dir=\"" + d.string() + "\""}, "sweep");
  };
  const RunManifest a = run(cfg(d1), 1, Execution::Serial);
  const RunManifest b = run(cfg(d2), 2, Execution::Parallel);
  CHECK(a.points.size() == 4);
  CHECK(a.failures() == 0);
  CHECK(checksums(a) == checksums(b));
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(d1)) {
    if (e.path().filename() == "manifest.json") continue;
    ++n;
    CHECK(checksums(a).count(e.path().filename().string()) == 1);
  }
  CHECK(n == a.files.size());
  const json mj = json::parse(std::ifstream(d1 / "manifest.json"));
  CHECK(mj["artifact_version"] == kVersion);
  CHECK(mj["points"].size() == 4);
  CHECK(mj["files"].size() == a.files.size());
  fs::remove_all(d1);
  fs::remove_all(d2);
}
