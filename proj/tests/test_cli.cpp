#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

using fractspec::cli::run_cli;
using json = nlohmann::ordered_json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "fractspec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

const char* kCantor = R"({"type":"self_similar","rho":"1/4","digits":["0","2"]})";

}  // namespace

TEST_CASE("fnv1a64 reference values") {
  CHECK(fractspec::cli::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fractspec::cli::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fractspec::cli::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("check-hadamard on the middle-fourth triple") {
  auto r = run({"check-hadamard", "--json", R"({"p":4,"digits":["0","2"],"labels":["0","1"]})"});
  CHECK(r.code == 0);
  auto j = r.report();
  CHECK(j["status"] == "true");
  CHECK(j["result"]["hadamard"] == true);
  CHECK(j["result"]["certificate"]["witnesses"].size() == 1);
  CHECK(j["result"]["unitarity_deviation"].get<double>() < 1e-12);
  CHECK(j["version"] == FRACTSPEC_VERSION);

  auto bad = run({"check-hadamard", "--json", R"({"p":4,"digits":["0","1"],"labels":["0","1"]})"});
  CHECK(bad.code == 1);
  CHECK(bad.report()["result"]["failure"]["l2"] == "1");
}

TEST_CASE("decide-spectral exit codes") {
  auto no = run({"decide-spectral", "--json", R"({"m":1,"N":1,"rho":"1/3"})"});
  CHECK(no.code == 1);
  CHECK(no.report()["result"]["reason"] == "2∤3");
  CHECK(run({"decide-spectral", "--json", R"({"m":2,"N":2,"rho":"1/8"})"}).code == 0);
  CHECK(run({"decide-spectral", "--json", R"({"m":1,"N":1,"rho":"3/2"})"}).code == 2);
}

TEST_CASE("sweep-ft csv row count") {
  const std::string payload =
      std::string(R"({"spec":)") + kCantor + R"(,"from":0,"to":8,"points":1000,"tol":1e-9})";
  auto r = run({"sweep-ft", "--format", "csv", "--threads", "3", "--json", payload});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "xi,re,im,abs,error_bound");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 1000);

  auto one = run({"sweep-ft", "--format", "csv", "--threads", "1", "--json", payload});
  CHECK(one.out == r.out);
}

TEST_CASE("reports are byte-identical and carry the payload hash") {
  const std::string payload = std::string(R"({"spec":)") + kCantor + R"(,"xi":"1/3"})";
  auto a = run({"eval-ft", "--json", payload});
  auto b = run({"eval-ft"}, payload);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fractspec::cli::fnv1a64(json::parse(payload).dump())));
  CHECK(a.report()["payload_hash"] == hex);
  // floats use 17 significant digits
  CHECK(a.out.find("\"abs\": 0.") != std::string::npos);
  const auto pos = a.out.find("\"abs\": ");
  const auto end = a.out.find_first_of(",\n", pos);
  const std::string num = a.out.substr(pos + 7, end - pos - 7);
  CHECK(num.size() >= 18);
}

TEST_CASE("input errors exit 2 with diagnostics") {
  auto malformed = run({"eval-ft", "--json", R"({"spec": {"type": )"});
  CHECK(malformed.code == 2);
  auto j = malformed.report();
  CHECK(j["status"] == "invalid");
  CHECK(j["error"]["position"].get<int>() > 0);

  auto unknown = run({"decide-spectral", "--json", R"({"m":1,"N":1,"rho":"1/2","extra":1})"});
  CHECK(unknown.code == 2);
  CHECK(unknown.report()["error"]["message"].get<std::string>().find("extra") != std::string::npos);

  auto missing = run({"check-hadamard", "--json", R"({"p":4,"digits":["0","2"]})"});
  CHECK(missing.code == 2);

  auto bad_type = run({"eval-ft", "--json", R"({"spec":{"type":"fractal"},"xi":1})"});
  CHECK(bad_type.code == 2);

  auto bad_rational = run({"eval-ft", "--json", R"({"spec":{"type":"self_similar","rho":"1/0","digits":["0"]},"xi":1})"});
  CHECK(bad_rational.code == 2);

  CHECK(run({"decide-spectral", "--format", "csv", "--json", R"({"m":1,"N":1,"rho":"1/2"})"}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"eval-ft", "/nonexistent/payload.json"}).code == 2);
}

TEST_CASE("indeterminate numeric decisions exit 3") {
  const char* odd = R"({"type":"alternating","rho":"1/2","m":1,"n":3})";
  auto z = run({"zero-member", "--json", std::string(R"({"spec":)") + odd + R"(,"x":"1/3","tol":0.9})"});
  CHECK(z.code == 3);
  CHECK(z.report()["result"]["zero"] == "unknown");

  auto o = run({"check-orthogonal", "--json", std::string(R"({"spec":)") + odd + R"(,"lambda":["0","1/3"],"tol":0.9})"});
  CHECK(o.code == 3);
  CHECK(o.report()["result"]["pair"] == json::array({"0", "1/3"}));

  auto s = run({"max-family", "--json",
                std::string(R"({"spec":)") + odd + R"(,"candidates":["0","1/3"],"strict":true,"tol":0.9})"});
  CHECK(s.code == 3);
  CHECK(s.report()["result"]["pair"].size() == 2);
}

TEST_CASE("orthogonality and families") {
  const std::string blocks = R"({"type":"self_similar","rho":"1/4","blocks":[{"scale":"2","length":2}]})";
  auto yes = run({"check-orthogonal", "--json", R"({"spec":)" + blocks + R"(,"lambda":["0","1","4","5"]})"});
  CHECK(yes.code == 0);
  auto no = run({"check-orthogonal", "--json", R"({"spec":)" + blocks + R"(,"lambda":["0","2"]})"});
  CHECK(no.code == 1);
  CHECK(no.report()["result"]["difference"] == "2");

  auto fam = run({"max-family", "--json",
                  R"({"spec":{"type":"alternating","rho":"1/3","m":1,"n":2},"generator":{"kind":"even","p":3,"s":2,"window":"20"}})"});
  CHECK(fam.code == 0);
  CHECK(fam.report()["result"]["size"].get<int>() <= 2);
  CHECK(fam.report()["result"]["candidates"] == 81);
}

TEST_CASE("product form certificates round-trip through verify-certificate") {
  auto built = run({"build-product-form", "--json", R"({"m":2,"N":3,"p_prime":1})"});
  REQUIRE(built.code == 0);
  json cert = built.report()["result"]["certificate"];
  cert.erase("checks");
  auto ok = run({"verify-certificate", "--json", cert.dump()});
  CHECK(ok.code == 0);
  CHECK(ok.report()["result"]["checks_run"] == 7);

  cert["labels"][2] = json::array({"0", "1", "3"});
  auto bad = run({"verify-certificate", "--json", cert.dump()});
  CHECK(bad.code == 1);

  auto h = run({"check-hadamard", "--json", R"({"p":4,"digits":["0","2"],"labels":["0","1"]})"});
  json hc = h.report()["result"]["certificate"];
  CHECK(run({"verify-certificate", "--json", hc.dump()}).code == 0);
  hc["witnesses"][0]["sum"]["coefficients"][1][1] = 2;
  CHECK(run({"verify-certificate", "--json", hc.dump()}).code == 1);
  hc.erase("witnesses");
  CHECK(run({"verify-certificate", "--json", hc.dump()}).code == 0);
}

TEST_CASE("companion search and decomposition") {
  auto none = run({"search-companion", "--threads", "2", "--json", R"({"p":4,"digits":["0","1","8","9"],"bound":64})"});
  CHECK(none.code == 1);
  CHECK(none.report()["result"]["found"] == false);
  auto found = run({"search-companion", "--json", R"({"p":4,"digits":["0","2"],"bound":8})"});
  CHECK(found.code == 0);
  CHECK(found.report()["result"]["certificate"]["labels"] == json::array({"0", "1"}));

  auto d = run({"decompose", "--json", R"({"lambda":["0","1","4","5"],"b1":"4","c":2,"q1":1,"gamma1":2})"});
  CHECK(d.code == 0);
  CHECK(d.report()["result"]["cells"]["0"] == json::array({"0", "1"}));
  CHECK(d.report()["result"]["leftovers"] == json::array({"1", "5"}));
}

TEST_CASE("identities and Q through the CLI") {
  CHECK(run({"verify-nu-mu", "--json", R"({"m":2,"N":3,"rho":"1/5","samples":50})"}).code == 0);
  CHECK(run({"verify-symmetric", "--json", R"({"n":2,"rho":"1/5","samples":50})"}).code == 0);
  auto q = run({"q-function", "--json",
                std::string(R"({"spec":)") + kCantor +
                    R"(,"canonical":{"p":4,"labels":["0","1"],"depth":8},"from":0,"to":1,"points":100,"tol":1e-9})"});
  CHECK(q.code == 0);
  CHECK(q.report()["result"]["min_q"].get<double>() >= 0.999);
  CHECK(q.report()["result"]["values"].size() == 100);
}

TEST_CASE("--output writes the report to a file") {
  const auto path = std::filesystem::temp_directory_path() / "fractspec_cli_test_report.json";
  auto r = run({"decide-spectral", "--output", path.string(), "--json", R"({"m":1,"N":1,"rho":"1/2"})"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  json j = json::parse(f);
  CHECK(j["result"]["spectral"] == true);
  std::filesystem::remove(path);
}
