#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "spherekern/cli.hpp"

using namespace spherekern;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("spherekern_test_" + name)).string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("angles") {
  CHECK(cli::parse_angle("60deg") == doctest::Approx(std::numbers::pi / 3));
  CHECK(cli::parse_angle("1.5") == 1.5);
  CHECK_THROWS(cli::parse_angle("60 deg"));
  CHECK_THROWS(cli::parse_angle("deg"));
  CHECK_THROWS(cli::parse_angle(""));
}

TEST_CASE("lp-bound emits a versioned certificate") {
  const Result r = run({"lp-bound", "--n", "8", "--theta", "60deg", "--dmax", "12", "--format",
                        "json", "--no-timestamp"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["command"] == "lp-bound");
  CHECK(j["seed"] == 0);
  CHECK_FALSE(j.contains("timestamp"));
  CHECK(std::abs(j["bound"].get<double>() - 240.0) < 0.5);
  CHECK(run({"lp-bound", "--n", "8", "--theta", "60deg"}).out.find("timestamp") != std::string::npos);
}

TEST_CASE("identical arguments give identical bytes") {
  const std::vector<std::string> args{"check-pd", "--kernel", "bundle-random", "--n", "5", "--r", "2",
                                      "--trials", "3", "--points", "10", "--seed", "5",
                                      "--no-timestamp"};
  const Result a = run(args);
  const Result b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const Result c = run({"verify-addition", "--n", "6", "--r", "1", "--k", "6", "--samples", "200",
                        "--seed", "7", "--no-timestamp"});
  CHECK(c.code == 0);
  CHECK(c.out == run({"verify-addition", "--n", "6", "--r", "1", "--k", "6", "--samples", "200",
                      "--seed", "7", "--no-timestamp"}).out);
  CHECK(Json::parse(c.out)["seed"] == 7);
}

TEST_CASE("failing verification exits with one and a witness") {
  const Result r = run({"check-pd", "--kernel", "neg-dot", "--n", "3", "--no-timestamp"});
  CHECK(r.code == 1);
  const Json j = Json::parse(r.out);
  CHECK(j["pass"] == false);
  CHECK(j["result"]["witness"]["points"].size() > 0);
  CHECK(run({"check-invariance", "--kernel", "coord", "--n", "3"}).code == 1);
  CHECK(run({"expand", "--kernel", "coord", "--n", "3"}).code == 1);
}

TEST_CASE("usage and domain errors exit with two") {
  Result r = run({"lp-bound", "--n", "3", "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"lp-bound", "--n", "3", "--theta", "sixty"}).code == 2);
  CHECK(run({"lp-bound", "--n", "2"}).code == 2);
  CHECK(run({"expand", "--kernel", "nope"}).code == 2);
  CHECK(run({"lp-bound", "--n", "3", "--format", "xml"}).code == 2);
  CHECK(run({"certify", "--certificate", "/nonexistent/file.json"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("csv and text formats") {
  const Result csv = run({"gegenbauer", "--n", "3", "--dmax", "2", "--t", "0.5", "--format", "csv",
                          "--no-timestamp"});
  REQUIRE(csv.code == 0);
  std::istringstream lines(csv.out);
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK_FALSE(std::getline(lines, extra));
  CHECK(header.find("values[0].p[2]") != std::string::npos);
  CHECK(row.find("-0.125") != std::string::npos);
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
  const Result text = run({"gegenbauer", "--n", "3", "--dmax", "1", "--t", "0.5", "--format", "text",
                           "--no-timestamp"});
  CHECK(text.out.find("alpha = 0.5") != std::string::npos);
}

TEST_CASE("certificate files and output paths") {
  const std::string cert = temp_path("cert.json");
  const std::string report = temp_path("report.json");
  REQUIRE(run({"lp-bound", "--n", "3", "--theta", "60deg", "--save", cert, "--output", report,
               "--no-timestamp"}).code == 0);
  std::ifstream in(report);
  CHECK(Json::parse(in)["command"] == "lp-bound");
  const Result ok = run({"certify", "--certificate", cert, "--no-timestamp"});
  CHECK(ok.code == 0);
  CHECK(Json::parse(ok.out)["result"]["pass"] == true);

  Json doc = Json::parse(std::ifstream(cert));
  doc["coefficients"][1] = doc["coefficients"][1].get<double>() + 10.0;
  std::ofstream(cert) << doc.dump();
  CHECK(run({"certify", "--certificate", cert}).code == 1);
  std::ofstream(cert) << "{not json";
  CHECK(run({"certify", "--certificate", cert}).code == 2);
  std::filesystem::remove(cert);
  std::filesystem::remove(report);
}

TEST_CASE("bundle expansions through files") {
  const std::string path = temp_path("bundle.json");
  REQUIRE(run({"synth-bundle", "--n", "5", "--r", "2", "--dmax", "3", "--trials", "3", "--points",
               "15", "--samples", "50", "--save", path, "--no-timestamp"}).code == 0);
  const Result pd = run({"check-pd", "--expansion", path, "--trials", "3", "--points", "15",
                         "--no-timestamp"});
  CHECK(pd.code == 0);
  CHECK(Json::parse(pd.out)["kernel"]["r"] == 2);
  const Result musin = run({"musin", "--expansion", path, "--n", "5", "--r", "2", "--dmax", "3",
                            "--points", "20", "--no-timestamp"});
  CHECK(musin.code == 0);
  std::filesystem::remove(path);
}

TEST_CASE("other subcommands") {
  CHECK(run({"verify-t1t2", "--n", "5", "--r", "2", "--samples", "100"}).code == 0);
  CHECK(run({"musin", "--kernel", "dot", "--n", "4", "--r", "1", "--points", "20"}).code == 0);
  CHECK(run({"check-invariance", "--kernel", "gegenbauer:2", "--n", "4"}).code == 0);
  const Result e = run({"expand", "--kernel", "gegenbauer:2", "--n", "4", "--dmax", "4",
                        "--no-timestamp"});
  CHECK(e.code == 0);
  CHECK(Json::parse(e.out)["expansion"]["coefficients"][2].get<double>() == doctest::Approx(1.0));
  CHECK(run({"lp-bound", "--n", "3", "--theta", "60deg", "--dmax", "0"}).code == 1);
  CHECK(run({"verify-addition", "--n", "6", "--r", "1", "--k", "3", "--threads", "1"}).code == 0);
}

TEST_CASE("seed from the environment") {
  setenv("SPHEREKERN_SEED", "31", 1);
  const Result r = run({"verify-t1t2", "--n", "4", "--r", "1", "--samples", "10", "--no-timestamp"});
  CHECK(Json::parse(r.out)["seed"] == 31);
  CHECK(Json::parse(run({"verify-t1t2", "--n", "4", "--r", "1", "--samples", "10", "--seed", "2"}).out)["seed"] == 2);
  setenv("SPHEREKERN_SEED", "abc", 1);
  CHECK(run({"verify-t1t2", "--n", "4", "--r", "1"}).code == 2);
  unsetenv("SPHEREKERN_SEED");
}

}  // TEST_SUITE
