#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dzm/cli/commands.hpp"
#include "dzm/kernels.hpp"
#include "json.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run dzm_run(std::vector<std::string> args) {
  args.insert(args.begin(), "dzm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = dzm::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "dzm_cli_test";
  fs::create_directories(d);
  return d;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("bootstrap command") {
  const Run r = dzm_run({"bootstrap", "--rho", "2"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["n_star"] == 3);
  CHECK(j["trace"] == Json::parse(R"([[1,1.0,"power"],[2,2.0,"log"],[3,2.0,"saturated"]])"));
  CHECK(j["version"] == "0.3.0");
  CHECK(j.contains("seeds"));
  CHECK(j.contains("tolerances"));
  CHECK(dzm_run({"bootstrap", "--rho", "0.5"}).code == 2);
}

TEST_CASE("ekku-table command") {
  const Run r = dzm_run({"ekku-table", "--gamma", "4", "--points", "origin"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"gamma", "x_norm", "J", "J_scaled", "branch"});
  CHECK(std::abs(std::stod(rows[1][2]) - oracle::pi * oracle::pi) < 1e-6);
  CHECK(rows[1][4] == "saturated");
  CHECK(dzm_run({"ekku-table", "--gamma", "1"}).code == 2);
}

TEST_CASE("lap-scan command") {
  const Run r = dzm_run({"lap-scan", "--lambda", "1", "--s", "1.5", "--sprime", "1.5", "--eps", "1e-1,1e-2"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"lambda", "eps", "rim", "s", "sprime", "hs_norm", "hs_err"});
  CHECK(std::stod(rows[2][5]) < std::stod(rows[1][5]));

  const Run zero = dzm_run({"lap-scan", "--lambda", "0", "--eps", "1e-1"});
  REQUIRE(zero.code == 0);
  const auto zr = csv_rows(zero.out);
  CHECK(zr[1][2] == "plus-minus");
  CHECK(std::stod(zr[1][5]) == 0.0);

  const Run bad = dzm_run({"lap-scan", "--s", "0.6", "--sprime", "0.6"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("s + s' > 2") != std::string::npos);
  CHECK(dzm_run({"lap-scan", "--rim", "sideways"}).code == 2);
}

TEST_CASE("kernel-eval command") {
  const Run r = dzm_run({"kernel-eval", "--kind", "r0", "--rim", "plus", "--z", "0", "--x", "0,0,1", "--y", "0,0,0"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 17);
  const dzm::Matrix4 a = dzm::a_kernel({0, 0, 1}, {0, 0, 0});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int rr = std::stoi(rows[i][0]), cc = std::stoi(rows[i][1]);
    CHECK(std::abs(std::stod(rows[i][2]) - a(rr, cc).real()) < 1e-12);
    CHECK(std::abs(std::stod(rows[i][3]) - a(rr, cc).imag()) < 1e-12);
  }
  CHECK(dzm_run({"kernel-eval", "--kind", "r0", "--x", "1,1,1", "--y", "1,1,1"}).code == 2);
  CHECK(dzm_run({"kernel-eval", "--kind", "gamma0", "--x", "1,1"}).code == 2);
}

TEST_CASE("verify-zero-mode command, export and re-read") {
  const fs::path d = scratch();
  const Run r = dzm_run({"verify-zero-mode", "--fixture", "loss-yau", "--grid", "32", "--box", "8", "--out",
                         (d / "r.json").string(), "--export", d.string()});
  const Json j = Json::parse(slurp(d / "r.json"));
  CHECK(std::abs(j["exponent"].get<double>() + 2.0) < 0.15);
  CHECK(j["levels"].size() == 3);
  CHECK(j["grid"]["n"] == 32);
  CHECK(r.code == (j["pass"].get<bool>() ? 0 : 1));
  REQUIRE(fs::exists(d / "loss-yau_f.dzm1"));
  const Json meta = Json::parse(slurp(d / "loss-yau_q.meta.json"));
  CHECK(meta["rho"] == 2.0);
  CHECK(meta["C"] == 3.0);
  CHECK(meta["fixture"] == "loss-yau");

  const Run back = dzm_run({"verify-zero-mode", "--field", (d / "loss-yau_f.dzm1").string(), "--potential",
                            (d / "loss-yau_q.dzm1").string()});
  CHECK(back.code == 0);
  CHECK(Json::parse(back.out)["levels"].size() == 1);
  CHECK(dzm_run({"verify-zero-mode", "--field", (d / "absent.dzm1").string(), "--potential",
                 (d / "loss-yau_q.dzm1").string()})
            .code == 3);
}

TEST_CASE("exit codes for usage and io errors") {
  CHECK(dzm_run({"verify-zero-mode", "--fixture", "loss-yau", "--grid", "7"}).code == 2);
  CHECK(dzm_run({"verify-zero-mode", "--fixture", "nope"}).code == 2);
  CHECK(dzm_run({"verify-zero-mode", "--out", "/nonexistent-dir/r.json"}).code == 3);
  CHECK(dzm_run({"verify-zero-mode", "--export", "/nonexistent-dir"}).code == 3);
  CHECK(dzm_run({}).code == 2);
  CHECK(dzm_run({"frobnicate"}).code == 2);
  CHECK(dzm_run({"bootstrap", "--rho"}).code == 2);
  CHECK(dzm_run({"bootstrap", "--config", "/nonexistent-dir/c.json"}).code == 3);
  CHECK(dzm_run({"--help"}).code == 0);
}

TEST_CASE("json config with flag precedence") {
  const fs::path d = scratch();
  {
    std::ofstream(d / "c.json") << R"({"rho": 3.5})";
    std::ofstream(d / "nested.json") << R"({"bootstrap": {"rho": 1.5}, "lap-scan": {"lambda": 9}})";
    std::ofstream(d / "extra.json") << R"({"rho": 2, "colour": "blue"})";
    std::ofstream(d / "broken.json") << R"({"rho": )";
  }
  CHECK(Json::parse(dzm_run({"bootstrap", "--config", (d / "c.json").string()}).out)["rho"] == 3.5);
  CHECK(Json::parse(dzm_run({"--config", (d / "c.json").string(), "bootstrap"}).out)["rho"] == 3.5);
  CHECK(Json::parse(dzm_run({"bootstrap", "--config", (d / "c.json").string(), "--rho", "2"}).out)["rho"] == 2.0);
  CHECK(Json::parse(dzm_run({"bootstrap", "--config", (d / "nested.json").string()}).out)["n_star"] == 5);
  CHECK(dzm_run({"bootstrap", "--config", (d / "extra.json").string()}).code == 2);
  CHECK(dzm_run({"bootstrap", "--config", (d / "broken.json").string()}).code == 2);
}

TEST_CASE("bs-spectrum command") {
  const Run r = dzm_run({"bs-spectrum", "--fixture", "loss-yau", "--grid", "16", "--box", "6", "--k", "2"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  REQUIRE(j["eigenvalues"].size() == 2);
  for (const auto& e : j["eigenvalues"])
    for (const char* key : {"re", "im", "coupling", "defect"}) CHECK(e.contains(key));
  CHECK(j["seeds"] == Json::array({7}));
  CHECK(j["grid"]["n"] == 16);
  CHECK(dzm_run({"bs-spectrum", "--k", "0", "--grid", "16", "--box", "6"}).code == 2);
}

TEST_CASE("reports are byte reproducible") {
  const fs::path d = scratch();
  for (const auto& cmd : std::vector<std::vector<std::string>>{
           {"lap-scan", "--scheme", "mc", "--samples", "40000", "--eps", "1e-1,1e-2", "--seed", "5"},
           {"ekku-table", "--gamma", "2,3", "--points", "1,5"},
           {"bs-spectrum", "--grid", "16", "--box", "6", "--k", "2"}}) {
    auto a = cmd, b = cmd;
    a.insert(a.end(), {"--out", (d / "a.txt").string()});
    b.insert(b.end(), {"--out", (d / "b.txt").string()});
    dzm_run(a);
    dzm_run(b);
    CHECK(slurp(d / "a.txt") == slurp(d / "b.txt"));
    CHECK(slurp(d / "a.txt").find("0.3.0") != std::string::npos);
  }
}

TEST_CASE("thread cap from the environment does not change results") {
  const std::string bin = DZM_CLI_PATH;
  auto capture = [](const std::string& cmd) {
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int status = pclose(p);
    CHECK(status == 0);
    return out;
  };
  const std::string args = " lap-scan --scheme mc --samples 70000 --eps 1e-1";
  const std::string one = capture("DZM_THREADS=1 " + bin + args);
  const std::string three = capture("OMP_NUM_THREADS=3 DZM_THREADS=3 " + bin + args);
  CHECK(one == three);
  CHECK(one.find("hs_norm") != std::string::npos);
}
