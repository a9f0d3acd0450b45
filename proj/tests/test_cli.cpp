#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "config.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "reference_tables.hpp"
#include "xyzbethe/expr.hpp"
#include "xyzbethe/io.hpp"

using namespace xyzbethe;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "xyzbethe");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("xyzbethe_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Last column of every data line, parsed back from "a+bi".
std::vector<cplx> csv_energies(const std::string& csv) {
  std::vector<cplx> out;
  const auto ls = lines(csv);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const std::string cell = ls[i].substr(ls[i].rfind(',') + 1);
    out.push_back(parse_complex(cell));
  }
  return out;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"bogus"}).code == cli::kExitUsage);
  const Run missing = run({"solve-xyz", "--n", "4", "--tau", "0.6i"});
  CHECK(missing.code == cli::kExitUsage);
  CHECK(missing.err.find("--eta") != std::string::npos);
  CHECK(missing.err.find("--help") != std::string::npos);
  CHECK(run({"solve-xyz", "--n", "3", "--tau", "0.6i", "--eta", "pi/10"}).code == cli::kExitUsage);
  CHECK(run({"solve-xyz", "--n", "4", "--tau", "0.6i", "--eta", "pi/"}).code == cli::kExitUsage);
  CHECK(run({"solve-xyz", "--n", "4.5", "--tau", "0.6i", "--eta", "pi/10"}).code == cli::kExitUsage);
  CHECK(run({"solve-xyz", "--n", "4", "--tau", "0.6i", "--eta", "pi/10", "--format", "xml"}).code ==
        cli::kExitUsage);
  CHECK(run({"verify", (scratch_dir() / "does_not_exist.json").string()}).code == cli::kExitUsage);
  CHECK(run({"export-table", "--table", "table9"}).code == cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("solve-xyz reproduces Table 1 left in energy order") {
  const Run r = run({"solve-xyz", "--n", "4", "--tau", "0.6i", "--eta", "pi/10"});
  REQUIRE(r.code == cli::kExitOk);
  const auto es = csv_energies(r.out);
  REQUIRE(es.size() == 16);
  for (std::size_t i = 0; i < es.size(); ++i) {
    CHECK(std::abs(es[i].real() - reftables::table1_left[i].re) < 2e-4);
    CHECK(std::abs(es[i].imag()) < 2e-4);
  }
  CHECK(lines(r.out).front() == "lambda_1,lambda_2,beta,E");
}

TEST_CASE("solve-xyz writes files and checks completeness") {
  const fs::path prefix = scratch_dir() / "t1";
  const Run r = run({"solve-xyz", "--n", "4", "--tau", "0.6i", "--eta", "pi/10", "--out", prefix.string(),
                     "--require-complete"});
  CHECK(r.code == cli::kExitOk);
  CHECK(fs::exists(prefix.string() + ".json"));
  CHECK(fs::exists(prefix.string() + ".csv"));
  CHECK(fs::exists(prefix.string() + "_match.json"));
  const auto sols = io::solutions_from_json(slurp(prefix.string() + ".json"));
  CHECK(sols.size() == 16);
  CHECK(slurp(prefix.string() + "_match.json").find("\"complete\": true") != std::string::npos);
}

TEST_CASE("solve-xyz for Tables 4.a and 4.b") {
  const Run r = run({"solve-xyz", "--n", "6", "--tau", "0.4+0.6i", "--eta", "1/e+i*pi/10"});
  REQUIRE(r.code == cli::kExitOk);
  const auto es = csv_energies(r.out);
  CHECK(es.size() == 64);
  std::vector<cplx> ref;
  for (const auto& row : reftables::table4a) ref.emplace_back(row.re, row.im);
  for (const auto& row : reftables::table4b) ref.emplace_back(row.re, row.im);
  CHECK(oracle::unmatched(es, ref, 2e-3, 2e-3) == 0);
}

TEST_CASE("config file with flag override") {
  const fs::path cfg = scratch_dir() / "model.cfg";
  spit(cfg, "# Table 1 parameters\nn = 4\ntau = 0.6i\neta = pi/10\n");
  const Run base = run({"solve-xyz", "--config", cfg.string()});
  REQUIRE(base.code == cli::kExitOk);
  CHECK(std::abs(csv_energies(base.out).front() - cplx(-7.8613)) < 2e-4);
  const Run over = run({"solve-xyz", "--config", cfg.string(), "--eta", "i*pi/10"});
  REQUIRE(over.code == cli::kExitOk);
  const auto es = csv_energies(over.out);
  CHECK(std::abs(es.front() - cplx(-9.2437)) < 2e-4);
  CHECK(std::abs(es.back() - cplx(9.7400)) < 2e-4);

  spit(cfg, "n = 4\ntau = 0.6i\neta = pi/10\ngamma = 0.3i\n");
  CHECK(run({"solve-xyz", "--config", cfg.string()}).code == cli::kExitUsage);
  spit(cfg, "n 4\n");
  CHECK(run({"solve-xyz", "--config", cfg.string()}).code == cli::kExitUsage);
}

TEST_CASE("config parser") {
  const auto m = cli::parse_config("  # comment\nbeta_range = 3 # trailing\n--tau=\"0.6i\"\n\nseed=7\n");
  CHECK(m.at("beta-range") == "3");
  CHECK(m.at("tau") == "0.6i");
  CHECK(m.at("seed") == "7");
  CHECK(m.size() == 3);
  CHECK_THROWS_AS(cli::parse_config("n = 4\nn = 6\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config(" = 4\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config("just words\n"), cli::ConfigError);
  CHECK_THROWS_AS(cli::load_config_file((scratch_dir() / "nope.cfg").string()), cli::ConfigError);
}

TEST_CASE("solve-xxz and the m-range filter") {
  const Run t5 = run({"solve-xxz", "--n", "4", "--gamma", "i*pi^2/10"});
  REQUIRE(t5.code == cli::kExitOk);
  std::vector<cplx> ref;
  for (const auto& row : reftables::table5_right) ref.emplace_back(row.re, row.im);
  CHECK(oracle::unmatched(csv_energies(t5.out), ref, 2e-4, 2e-4) == 0);
  CHECK(t5.out.find("+inf") != std::string::npos);
  CHECK(t5.out.find("-inf") != std::string::npos);

  const Run t6 = run({"solve-xxz", "--n", "4", "--gamma", "i*pi*(1/e+i*pi/10)"});
  REQUIRE(t6.code == cli::kExitOk);
  ref.clear();
  for (const auto& row : reftables::table6_right) ref.emplace_back(row.re, row.im);
  CHECK(oracle::unmatched(csv_energies(t6.out), ref, 2e-3, 2e-3) == 0);

  const Run sub = run({"solve-xxz", "--n", "4", "--gamma", "i*pi^2/10", "--m-range", "0..1"});
  REQUIRE(sub.code == cli::kExitOk);
  CHECK(csv_energies(sub.out).size() == 14);
  const Run all = run({"solve-xxz", "--n", "4", "--gamma", "i*pi^2/10", "--m-range", "0..2"});
  CHECK(csv_energies(all.out).size() == 16);
  CHECK(run({"solve-xxz", "--n", "4", "--gamma", "i*pi^2/10", "--m-range", "2-1"}).code == cli::kExitUsage);
}

TEST_CASE("verify") {
  const fs::path prefix = scratch_dir() / "v";
  REQUIRE(run({"solve-xyz", "--n", "4", "--tau", "0.6i", "--eta", "pi/10", "--out", prefix.string()}).code == 0);
  const std::string file = prefix.string() + ".json";
  const std::vector<std::string> model{"--n", "4", "--tau", "0.6i", "--eta", "pi/10"};
  auto with_model = [&](std::vector<std::string> a) {
    a.insert(a.end(), model.begin(), model.end());
    return a;
  };
  const Run ok = run(with_model({"verify", file}));
  CHECK(ok.code == cli::kExitOk);
  CHECK(ok.out.find("\"complete\": true") != std::string::npos);
  CHECK(run(with_model({"verify", file, "--tol", "1e-9"})).code == cli::kExitOk);

  auto sols = io::solutions_from_json(slurp(file));
  sols.erase(sols.begin() + 3);
  const fs::path fewer = scratch_dir() / "fewer.json";
  spit(fewer, io::solutions_to_json(sols));
  CHECK(run(with_model({"verify", fewer.string()})).code == cli::kExitVerification);

  spit(fewer, "[{\"oops\": 1}]");
  CHECK(run(with_model({"verify", fewer.string()})).code == cli::kExitUsage);

  const fs::path xprefix = scratch_dir() / "x";
  REQUIRE(run({"solve-xxz", "--n", "4", "--gamma", "i*pi^2/10", "--out", xprefix.string()}).code == 0);
  CHECK(run({"verify", xprefix.string() + ".json", "--n", "4", "--gamma", "i*pi^2/10"}).code == cli::kExitOk);
}

TEST_CASE("diag") {
  const Run xyz = run({"diag", "--n", "4", "--tau", "0.6i", "--eta", "pi/10", "--format", "json"});
  REQUIRE(xyz.code == cli::kExitOk);
  const auto spec = io::spectrum_from_json(xyz.out);
  CHECK(spec.size() == 16);
  const Run xxz = run({"diag", "--n", "4", "--gamma", "i*pi^2/10", "--format", "json"});
  REQUIRE(xxz.code == cli::kExitOk);
  std::vector<cplx> es, ref;
  for (const auto& e : io::spectrum_from_json(xxz.out)) es.push_back(e.energy);
  for (const auto& row : reftables::table5_right) ref.emplace_back(row.re, row.im);
  CHECK(oracle::unmatched(es, ref, 2e-4, 2e-4) == 0);
}

TEST_CASE("limit-scan") {
  const fs::path prefix = scratch_dir() / "scan";
  const Run r = run({"limit-scan", "--n", "4", "--tau", "1.8i", "--eta", "pi/10", "--out", prefix.string()});
  CHECK(r.code == cli::kExitOk);
  const std::string json = slurp(prefix.string() + "_correspondence.json");
  CHECK(json.find("\"complete\": true") != std::string::npos);
  CHECK(json.find("\"pair_count\": 16") != std::string::npos);
  CHECK(slurp(prefix.string() + "_paths.csv").rfind("path,step,im_tau", 0) == 0);
  const std::string svg = slurp(prefix.string() + "_trajectories.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);

  const Run coarse = run({"limit-scan", "--n", "4", "--tau", "1.8i", "--eta", "pi/10", "--steps", "3"});
  CHECK(coarse.out.find("PathJumping") != std::string::npos);
  CHECK(coarse.out.find("\"warning_count\": 0") == std::string::npos);

  const Run same = run({"limit-scan", "--n", "4", "--tau", "1.8i", "--eta", "pi/10", "--target", "1.8"});
  CHECK(same.code == cli::kExitOk);
  CHECK(same.out.find("\"trivial\": true") != std::string::npos);
}

TEST_CASE("export-table") {
  const Run r = run({"export-table", "--table", "table1-left"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.find("tau/2") != std::string::npos);
  const Run x = run({"export-table", "--table", "table5-right"});
  CHECK(x.code == cli::kExitOk);
}

TEST_CASE("output is independent of the thread count") {
  const std::vector<std::string> base{"solve-xyz", "--n", "4", "--tau", "0.4+0.6i", "--eta", "1/e+i*pi/10",
                                      "--format", "json", "--seed", "99"};
  auto with_threads = [&](const char* t) {
    auto a = base;
    a.push_back("--threads");
    a.push_back(t);
    return run(a);
  };
  const Run one = with_threads("1");
  const Run four = with_threads("4");
  REQUIRE(one.code == cli::kExitOk);
  CHECK(one.out == four.out);
  CHECK(one.out == with_threads("1").out);
}
