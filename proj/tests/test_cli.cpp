// Exit-code and error-path checks for the command-line tool. The binary path
// and fixture directory arrive through environment variables set by ctest.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

struct CliResult {
  int status = -1;
  std::string output;
};

CliResult run(const std::string& args) {
  const char* cli = std::getenv("SHEAFCALC_CLI");
  REQUIRE(cli != nullptr);
  CliResult result;
  const std::string command = std::string(cli) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  std::size_t got = 0;
  while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0)
    result.output.append(buffer, got);
  const int raw = pclose(pipe);
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return result;
}

std::string fixture(const std::string& name) {
  const char* dir = std::getenv("SHEAFCALC_FIXTURES");
  REQUIRE(dir != nullptr);
  return std::string(dir) + "/" + name;
}

}  // namespace

TEST_CASE("info reports validated statistics") {
  const CliResult r = run("info --graph " + fixture("theta_p2.json"));
  CHECK(r.status == 0);
  CHECK(r.output.find("\"vertices\": 2") != std::string::npos);
  CHECK(r.output.find("\"bidirected\": true") != std::string::npos);
  CHECK(r.output.find("\"triangular_cliques\": 2") != std::string::npos);
}

TEST_CASE("homology of the constant sheaf") {
  const CliResult r = run("homology --graph " + fixture("p2_undirected.json") +
                          " --sheaf " + fixture("sheaf_p2_const.json"));
  CHECK(r.status == 0);
  CHECK(r.output.find("\"h0\": 1") != std::string::npos);
  CHECK(r.output.find("\"h1\": 0") != std::string::npos);
  CHECK(r.output.find("\"euler\": 1") != std::string::npos);

  // On the doubled carrier the single relation disappears: h1 = 1, euler 0.
  const CliResult d = run("homology --graph " + fixture("theta_p2.json") + " --sheaf " +
                          fixture("sheaf_theta_p2_const.json"));
  CHECK(d.status == 0);
  CHECK(d.output.find("\"h0\": 1") != std::string::npos);
  CHECK(d.output.find("\"h1\": 1") != std::string::npos);
  CHECK(d.output.find("\"euler\": 0") != std::string::npos);
}

TEST_CASE("fodc surfaces the differential and the inner form") {
  const CliResult r = run("fodc --graph " + fixture("theta_p2.json"));
  CHECK(r.status == 0);
  CHECK(r.output.find("\"basis\"") != std::string::npos);
  CHECK(r.output.find("e:fwd") != std::string::npos);
  CHECK(r.output.find("\"theta\"") != std::string::npos);

  // d as CSV on the doubled edge: rows e:fwd, e:bwd over columns v, w.
  const CliResult csv = run("fodc --format csv --graph " + fixture("theta_p2.json"));
  CHECK(csv.output == "-1,1\n1,-1\n");

  // Multigraph carrier: d(delta_v) column is (-1, -1, +1).
  const CliResult multi = run("fodc --format csv --graph " + fixture("fix_multi.json"));
  CHECK(multi.output == "-1,1\n-1,1\n1,-1\n");
}

TEST_CASE("parse failures exit with code 2") {
  CHECK(run("info --graph /dev/null").status == 2);
  CHECK(run("info --graph " + fixture("does_not_exist.json")).status == 2);
  CHECK(run("homology --graph " + fixture("p2_undirected.json") + " --sheaf " +
            fixture("p2_undirected.json"))
            .status == 2);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("laplacian --kind theta --graph " + fixture("theta_p2.json")).status == 2);
  CHECK(run("laplacian --kind nope --graph " + fixture("theta_p2.json")).status == 2);
  CHECK(run("laplacian --kind classical --graph " + fixture("theta_p2.json")).status == 2);
}

TEST_CASE("precondition failures exit with code 3") {
  // deltaF on a sheaf with a singular restriction map.
  const std::string degenerate = fixture("sheaf_p2_degenerate.json");
  const CliResult r = run("laplacian --kind deltaF --graph " +
                          fixture("p2_undirected.json") + " --sheaf " + degenerate);
  CHECK(r.status == 3);
  // check-theorem5 on a non-bundle sheaf.
  const CliResult t =
      run("check-theorem5 --graph " + fixture("theta_p2.json") + " --sheaf " +
          fixture("sheaf_theta_p2_degenerate.json"));
  CHECK(t.status == 3);
}

TEST_CASE("float backend emits decimal matrices") {
  const CliResult r = run("laplacian --kind classical --backend float --format csv --graph " +
                          fixture("p2_undirected.json"));
  CHECK(r.status == 0);
  CHECK(r.output == "1,-1\n-1,1\n");
}
