#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "diagbound/network_io.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

using namespace diagbound;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  const char* env = std::getenv("DIAGBOUND_TEST_TMP");
  fs::path dir = env ? fs::path(env) : fs::temp_directory_path() / "diagbound_cli_test";
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "diagbound");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct Files {
  std::string net, evidence;
  Files() {
    fs::path d = tmp_dir();
    net = (d / "n1.json").string();
    evidence = (d / "e1.json").string();
    write_text_file(net, serialize_network(fixtures::n1()));
    write_text_file(evidence, serialize_case(fixtures::n1(), fixtures::e1()));
  }
};

}  // namespace

TEST_CASE("solve N1,E1") {
  Files f;
  std::string trace = (tmp_dir() / "trace.txt").string();
  Run r = invoke({"solve", f.net, f.evidence, "--trace-out", trace, "--trace-every", "1"});
  CHECK(r.code == cli::kOk);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["hypotheses"][0]["present"] == nlohmann::json::array({"d1"}));
  CHECK(doc["hypotheses"][0]["best"].get<double>() == doctest::Approx(0.780042).epsilon(1e-6));
  std::string text = read_text_file(trace);
  CHECK(text.rfind("expansions nodes settled log_lbr_total log_ubr_total total_error wall_ms", 0) == 0);
}

TEST_CASE("solve with pmin 1 returns at once") {
  Files f;
  Run r = invoke({"solve", f.net, f.evidence, "--pmin", "1"});
  CHECK(r.code == cli::kOk);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["counters"]["expansions"] == 0);
  CHECK(doc["total_error"].get<double>() == doctest::Approx(0.949211).epsilon(1e-6));
}

TEST_CASE("node cap exit code") {
  Files f;
  Run r = invoke({"solve", f.net, f.evidence, "--max-hyps", "1"});
  CHECK(r.code == cli::kNodeCap);
}

TEST_CASE("exact and compare") {
  Files f;
  Run e = invoke({"exact", f.net, f.evidence});
  CHECK(e.code == cli::kOk);
  auto doc = nlohmann::json::parse(e.out);
  CHECK(doc["marginals"][0]["best"].get<double>() == doctest::Approx(0.801951).epsilon(1e-6));

  Run c = invoke({"compare", f.net, f.evidence});
  CHECK(c.code == cli::kOk);
  CHECK(nlohmann::json::parse(c.out)["violations"] == 0);

  Run capped = invoke({"compare", f.net, f.evidence, "--max-hyps", "1", "--format", "tabular"});
  CHECK(capped.code == cli::kOk);
  CHECK(capped.out.find("# violations 0") != std::string::npos);
}

TEST_CASE("oracle guard through the CLI") {
  fs::path d = tmp_dir();
  std::string net = (d / "big.json").string();
  std::string evidence = (d / "big_case.json").string();
  CHECK(invoke({"generate", "--diseases", "25", "--findings", "40", "-o", net}).code == cli::kOk);
  CHECK(invoke({"sample-case", net, "--seed", "3", "-o", evidence}).code == cli::kOk);
  Run r = invoke({"exact", net, evidence});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("too large for oracle") != std::string::npos);
}

TEST_CASE("generate and sample are deterministic") {
  Run a = invoke({"generate", "--seed", "5", "--diseases", "12", "--findings", "20"});
  Run b = invoke({"generate", "--seed", "5", "--diseases", "12", "--findings", "20"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  fs::path d = tmp_dir();
  write_text_file(d / "g.json", a.out);
  Run s1 = invoke({"sample-case", (d / "g.json").string(), "--seed", "9"});
  Run s2 = invoke({"sample-case", (d / "g.json").string(), "--seed", "9"});
  CHECK(s1.out == s2.out);
  CHECK(nlohmann::json::parse(s1.out).contains("true_diseases"));
}

TEST_CASE("check routing") {
  Files f;
  Run all = invoke({"check", f.net, "--case", f.evidence});
  CHECK(all.code == 0);
  CHECK(all.out.find("PASS pos") != std::string::npos);
  CHECK(all.out.find("PASS nps2") != std::string::npos);
  CHECK(all.out.find("PASS npsn") != std::string::npos);
  CHECK(all.out.find("PASS mep") != std::string::npos);

  Run pos = invoke({"check", f.net, "--check", "pos"});
  CHECK(pos.out.find("PASS pos") != std::string::npos);
  CHECK(pos.out.find("nps2") == std::string::npos);

  fs::path d = tmp_dir();
  std::string bad = (d / "bad.json").string();
  write_text_file(bad, serialize_network(fixtures::tabular({0.1, 0.2}, {0.1, 0.2, 0.2, 0.9})));
  Run nps = invoke({"check", bad, "--check", "nps2,npsn"});
  CHECK(nps.out.find("FAIL nps2") != std::string::npos);
  CHECK(nps.out.find("witness") != std::string::npos);
}

TEST_CASE("input errors") {
  Files f;
  fs::path d = tmp_dir();
  std::string broken = (d / "broken.json").string();
  Network n = fixtures::n1();
  n.diseases[0].prior = 1.0;
  write_text_file(broken, serialize_network(n));
  Run r = invoke({"solve", broken, f.evidence});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find("prior not in open interval") != std::string::npos);

  CHECK(invoke({"solve", f.net}).code == cli::kInputError);
  CHECK(invoke({"solve", f.net, f.evidence, "--format", "xml"}).code == cli::kInputError);
  CHECK(invoke({"solve", (d / "missing.json").string(), f.evidence}).code == cli::kInputError);
  CHECK(invoke({}).code == cli::kInputError);
}
