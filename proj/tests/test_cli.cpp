#include <doctest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MACDET_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "macdet_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

const std::string kFig7 = "--p1 0.4 --eps1 0.01 --eps2 0.05 --n0 1 --p1max 1 --p2max 1";

}  // namespace

TEST_CASE("classify") {
  auto r = run("classify --p1 0.3 --eps1 0.1 --eps2 0.15");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("Case II\n", 0) == 0);
  r = run("classify --p1 0.5 --eps1 0.2 --eps2 0.2");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("Case II\n", 0) == 0);
  r = run("classify --p1 0.4 --eps1 0.01 --eps2 0.05 --format json");
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["case"] == "Case III");
}

TEST_CASE("validation errors exit 2") {
  const std::string cmd = std::string(MACDET_CLI) + " classify --p1 0.6 --eps1 0.1 --eps2 0.2 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[512];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, n);
  const int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 2);
  CHECK(text.find("p1") != std::string::npos);

  CHECK(run("classify --p1 0.3 --eps1 0.2 --eps2 0.1").code == 2);
  CHECK(run("optimize --p1 0.3 --eps1 0.1 --eps2 0.15").code == 2);
  CHECK(run("sweep " + kFig7 + " --grid p9:0:1:3 --seed 1").code == 2);
  CHECK(run("simulate " + kFig7 + " --power1 2 --seed 1 --trials 10").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("").code == 2);
}

TEST_CASE("io errors exit 1") {
  CHECK(run("optimize " + kFig7 + " --out /nonexistent-dir/x/out.json").code == 1);
}

TEST_CASE("optimize") {
  auto r = run("optimize " + kFig7);
  REQUIRE(r.code == 0);
  auto js = nlohmann::json::parse(r.out);
  CHECK(js["p2_star"].get<double>() == doctest::Approx(0.7637).epsilon(0.005 / 0.7637));
  CHECK(js["p2_capped"] == false);
  r = run("optimize --p1 0.4 --eps1 0.01 --eps2 0.05 --n0 10 --p1max 1 --p2max 1");
  js = nlohmann::json::parse(r.out);
  CHECK(js["p2_star"].get<double>() == 1.0);
  CHECK(js["p2_capped"] == true);
  r = run("optimize --p1 0.01 --eps1 0.2 --eps2 0.3 --n0 1 --p1max 1 --p2max 1");
  js = nlohmann::json::parse(r.out);
  CHECK(js["p1_star"].get<double>() == 0.0);
  CHECK(js["p2_star"].get<double>() == 0.0);
  CHECK(js["pe_star"].get<double>() == 0.01);
}

TEST_CASE("boundaries and pe") {
  auto r = run("boundaries " + kFig7 + " --power1 1 --power2 2");
  REQUIRE(r.code == 0);
  auto js = nlohmann::json::parse(r.out);
  CHECK(js["roots"].size() == 3);
  CHECK(js["d0"].size() == 2);
  CHECK(js["d1"].size() == 2);
  r = run("pe " + kFig7 + " --format csv");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("case,power1,power2,pe,roots,snr_db\n", 0) == 0);
}

TEST_CASE("config file with flag precedence") {
  const auto cfg = scratch("params.toml");
  {
    std::ofstream f(cfg);
    f << "[optimize]\np1=0.4\neps1=0.01\neps2=0.05\nn0=10\np1max=1\np2max=1\n";
  }
  auto r = run("--config " + cfg.string() + " optimize");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["p2_capped"] == true);
  r = run("--config " + cfg.string() + " optimize --n0 1");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["p2_star"].get<double>() == doctest::Approx(0.7637).epsilon(0.01));
}

TEST_CASE("simulate and sweep outputs are byte-identical across threads") {
  const auto a = scratch("sim1.json"), b = scratch("sim4.json");
  REQUIRE(run("simulate " + kFig7 + " --trials 100000 --seed 5 --threads 1 --out " + a.string()).code == 0);
  REQUIRE(run("simulate " + kFig7 + " --trials 100000 --seed 5 --threads 4 --out " + b.string()).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());

  const std::string sweep = "sweep --p1 0.3 --eps1 0.1 --eps2 0.15 --n0 1 --p1max 1 --p2max 1 "
                            "--grid snr_db:-5:10:4 --scheme mac-optimal,orth-asymmetric-bpsk,mac-symmetric-max "
                            "--trials 30000 --seed 9";
  const auto c = scratch("sweep1.csv"), d = scratch("sweep4.csv");
  REQUIRE(run(sweep + " --threads 1 --out " + c.string()).code == 0);
  REQUIRE(run(sweep + " --threads 4 --out " + d.string()).code == 0);
  CHECK(slurp(c) == slurp(d));
  const auto e = scratch("sweep1.json"), f = scratch("sweep4.json");
  REQUIRE(run(sweep + " --format json --threads 1 --out " + e.string()).code == 0);
  REQUIRE(run(sweep + " --format json --threads 3 --out " + f.string()).code == 0);
  CHECK(slurp(e) == slurp(f));
  CHECK(nlohmann::json::parse(slurp(e)).size() == 12);
}

TEST_CASE("region map") {
  auto r = run("region-map --p1 0.5 --resolution 10");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("eps1,eps2,case", 0) == 0);
  CHECK(r.out.find(",I,") == std::string::npos);
  CHECK(run("region-map --p1 0.5 --resolution 1").code == 2);
}
