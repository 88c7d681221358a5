#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "kqpd/cli.hpp"
#include "kqpd/specfun.hpp"

using namespace kqpd;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "kqpd");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("point: coherent Husimi peak") {
  const Run r = run({"point", "--alpha-abs", "1", "--alpha-arg", "0", "--gamma", "0", "--beta-re", "1", "--beta-im",
                     "0", "--kind", "husimi", "--json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::fabs(j["fast"]["value"].get<double>() - 1.0 / kPi) <= 1e-15);
}

TEST_CASE("point: Wigner fast vs oracle at |alpha|=4") {
  const Run r = run({"point", "--alpha-abs", "4", "--gamma", "0.01", "--beta-re", "3.9", "--beta-im", "0.4",
                     "--kind", "wigner", "--method", "both", "--json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["deviation_abs"].get<double>() <= 1e-8);
  CHECK(j["fast"].contains("kmax"));
}

TEST_CASE("point: large amplitude") {
  const Run r = run({"point", "--alpha-abs", "2700", "--gamma", "1e-6", "--beta-re", "2700", "--json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::isfinite(j["fast"]["log_mag"].get<double>()));
  const Run w = run({"point", "--alpha-abs", "2700", "--gamma", "1e-6", "--beta-re", "2700", "--kind", "wigner"});
  CHECK(w.code == 0);
  CHECK(w.out.find("fast.kmax:") != std::string::npos);
}

TEST_CASE("point: oracle outside its domain names the cap") {
  const Run r = run({"point", "--alpha-abs", "200", "--gamma", "0.01", "--beta-re", "200", "--method", "oracle"});
  CHECK(r.code == kExitNumeric);
  CHECK(r.err.find("1e4") != std::string::npos);
}

TEST_CASE("field: coherent normalization and echoed config") {
  const std::string path = "kqpd_cli_field.json";
  const Run r = run({"field", "--alpha-abs", "10", "--gamma", "0", "--res", "200x200", "--out", path});
  REQUIRE(r.code == 0);
  const auto pos = r.out.find("integral: ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::fabs(std::stod(r.out.substr(pos + 10)) - 1.0) <= 1e-3);
  const json j = json::parse(slurp(path));
  REQUIRE(j.contains("config"));
  CHECK(j["config"]["mode"] == "polar");
  CHECK(j["config"]["extent0"].get<double>() == 4.0);
  std::remove(path.c_str());
}

TEST_CASE("field: re-run from the echoed config is byte-identical") {
  const std::string a = "kqpd_cli_a.json", b = "kqpd_cli_b.json";
  REQUIRE(run({"field", "--alpha-abs", "20", "--alpha-arg", "0.3", "--gamma", "2e-3", "--kind", "wigner", "--res",
               "24x30", "--workers", "3", "--out", a})
              .code == 0);
  REQUIRE(run({"field", "--from-config", a, "--out", b}).code == 0);
  CHECK(slurp(a) == slurp(b));
  const std::string c = "kqpd_cli_c.csv";
  REQUIRE(run({"field", "--from-config", a, "--out", c, "--format", "csv"}).code == 0);
  CHECK(slurp(c).rfind("x,p,value,log_mag,sign\n", 0) == 0);
  for (const auto& p : {a, b, c}) std::remove(p.c_str());
}

TEST_CASE("field: Wigner negativity is reported") {
  const Run r = run({"field", "--alpha-abs", "50", "--gamma", "1e-3", "--kind", "wigner", "--res", "80x80",
                     "--workers", "4"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("NEGATIVITY") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"point", "--kind", "banana"}).code == kExitUsage);
  CHECK(run({"field", "--res", "1x4", "--alpha-abs", "3"}).code == kExitUsage);
  CHECK(run({"field", "--alpha-abs", "3", "--res", "4x4", "--out", "/nonexistent-dir/f.json"}).code == kExitUsage);
}

TEST_CASE("validate: small scale passes and is reproducible") {
  const Run a = run({"validate", "--scale", "small", "--seed", "5", "--json"});
  CHECK(a.code == 0);
  const Run b = run({"validate", "--scale", "small", "--seed", "5", "--json"});
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(j.contains("config"));
}

TEST_CASE("installed binary: exit status") {
  const char* bin = std::getenv("KQPD_BIN");
  if (!bin) return;
  const std::string b(bin);
  CHECK(std::system((b + " point --alpha-abs 1 --beta-re 1 > /dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((b + " nonsense > /dev/null 2>&1").c_str())) == kExitUsage);
}
