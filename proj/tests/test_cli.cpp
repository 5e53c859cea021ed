#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "legendre/cli.hpp"
#include "legendre/errors.hpp"

using namespace legendre;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run call(int (*cmd)(const cli::RunConfig&, std::ostream&, std::ostream&), const cli::RunConfig& config) {
  std::ostringstream out, err;
  const int code = cmd(config, out, err);
  return {code, out.str(), err.str()};
}

cli::RunConfig single(cli::u64 q, cli::u64 d) {
  cli::RunConfig c;
  c.q = q;
  c.d = d;
  return c;
}

cli::RunConfig range(cli::u64 q, cli::u64 lo, cli::u64 hi) {
  cli::RunConfig c;
  c.q = q;
  c.d_min = lo;
  c.d_max = hi;
  return c;
}

}  // namespace

TEST_CASE("lfunction for q = 3, d = 4") {
  const auto r = call(cli::cmd_lfunction, single(3, 4));
  CHECK(r.code == cli::kOk);
  const auto doc = nlohmann::json::parse(r.out);
  const auto& res = doc["results"][0];
  CHECK(res["coeffs"] == nlohmann::json::array({"1", "0", "-9"}));
  CHECK(res["rho"] == 1);
  CHECK(res["special_value"]["num"] == "2");
  CHECK(res["special_value"]["den"] == "1");
}

TEST_CASE("d = 2 gives L = 1; a non-coprime d is rejected") {
  auto r = call(cli::cmd_lfunction, single(3, 2));
  CHECK(r.code == cli::kOk);
  CHECK(nlohmann::json::parse(r.out)["results"][0]["coeffs"] == nlohmann::json::array({"1"}));
  r = call(cli::cmd_lfunction, single(3, 6));
  CHECK(r.code == cli::kInvalid);
  CHECK(r.err.find("gcd") != std::string::npos);
  CHECK(call(cli::cmd_bsd, single(3, 2)).code == cli::kInvalid);
}

TEST_CASE("configuration validation") {
  auto c = single(4, 5);
  CHECK(call(cli::cmd_lfunction, c).code == cli::kInvalid);
  c = single(3, 4);
  c.eps = 0.3;
  CHECK(call(cli::cmd_bounds, c).code == cli::kInvalid);
  c = range(3, 10, 5);
  CHECK(call(cli::cmd_scan, c).code == cli::kInvalid);
  c = single(3, 4);
  c.jobs = 0;
  CHECK(call(cli::cmd_lfunction, c).code == cli::kInvalid);
  CHECK_THROWS_AS(cli::parse_checks({"bogus"}), ValidationError);
  CHECK(cli::parse_checks({"rh"}) == std::set<cli::Check>{cli::Check::Rh});
  CHECK(cli::parse_checks({"all"}).size() == 4);
}

TEST_CASE("resource skips") {
  auto c = single(3, 7);
  c.cap = 100;
  const auto r = call(cli::cmd_lfunction, c);
  CHECK(r.code == cli::kResource);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["skipped"].size() == 1);
  CHECK(doc["skipped"][0]["d"] == 7);
  CHECK(doc["skipped"][0]["kind"] == "resource");

  auto all_big = range(3, 7, 7);
  all_big.cap = 100;
  CHECK(call(cli::cmd_lfunction, all_big).code == cli::kResource);

  auto mixed = range(3, 4, 7);
  mixed.cap = 100;
  const auto m = call(cli::cmd_lfunction, mixed);
  CHECK(m.code == cli::kOk);
  const auto md = nlohmann::json::parse(m.out);
  // Every requested d appears once, as a result or as a skip.
  CHECK(md["results"].size() + md["skipped"].size() == 4);
}

TEST_CASE("scan csv") {
  auto c = range(3, 3, 30);
  c.format = cli::Format::Csv;
  const auto r = call(cli::cmd_scan, c);
  CHECK(r.code == cli::kOk);
  std::istringstream lines(r.out);
  std::string header, line;
  std::getline(lines, header);
  CHECK(header.rfind("q,d,H,degN,tau,theta,torsion_lo,torsion_hi,rho,Lstar_num,Lstar_den,sha_reg_num,sha_reg_den,bs_ratio",
                     0) == 0);
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  // d coprime to 3 in [3, 30], minus 17, 19, 25, 29 (fields above 2^24).
  CHECK(rows.size() == 14);
  CHECK(rows.front().rfind("3,4,9,6,128,", 0) == 0);
  CHECK(rows.front().substr(rows.front().size() - 2) == ",1");  // supersingular
  CHECK(r.err.find("\"d\":17") != std::string::npos);

  auto empty = range(3, 3, 3);
  empty.format = cli::Format::Csv;
  const auto e = call(cli::cmd_scan, empty);
  CHECK(e.out == header + "\n");
}

TEST_CASE("output is identical for any number of workers") {
  for (auto cmd : {cli::cmd_scan, cli::cmd_lfunction, cli::cmd_stickelberger}) {
    auto c = range(5, 3, 16);
    const auto one = call(cmd, c);
    c.jobs = 4;
    const auto four = call(cmd, c);
    CHECK(one.out == four.out);
    c.format = cli::Format::Csv;
    const auto csv4 = call(cmd, c);
    c.jobs = 1;
    CHECK(call(cmd, c).out == csv4.out);
  }
}

TEST_CASE("verify passes under a small cap") {
  auto c = range(3, 3, 20);
  c.cap = 1 << 10;
  const auto r = call(cli::cmd_verify, c);
  CHECK(r.code == cli::kOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["pass"] == true);
  CHECK(doc["failures"].empty());
  CHECK(!doc["results"].empty());
}

TEST_CASE("other commands") {
  CHECK(call(cli::cmd_orbits, single(3, 10)).code == cli::kOk);
  const auto j = call(cli::cmd_jacobi, single(3, 4));
  CHECK(j.code == cli::kOk);
  const auto jd = nlohmann::json::parse(j.out);
  CHECK(jd["results"][0]["orbits"][0].contains("embedding"));
  const auto s = call(cli::cmd_stickelberger, single(3, 4));
  CHECK(s.code == cli::kOk);
  CHECK(nlohmann::json::parse(s.out)["results"][0]["all_match"] == true);
  const auto b = call(cli::cmd_bounds, single(3, 28));
  CHECK(b.code == cli::kOk);
  CHECK(nlohmann::json::parse(b.out)["results"][0]["inside"] == true);
  const auto small = call(cli::cmd_bounds, single(3, 4));
  CHECK(nlohmann::json::parse(small.out)["results"][0]["applicable"] == false);
  CHECK(call(cli::cmd_bsd, single(5, 4)).code == cli::kOk);
}

TEST_CASE("cache directory: environment fallback and corrupted tables") {
  const fs::path dir = fs::temp_directory_path() / "legendre_cli_cache_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  CHECK(cli::resolve_cache_dir(std::string(dir)) == dir);
  ::setenv("LEGENDRE_CACHE_DIR", dir.c_str(), 1);
  CHECK(cli::resolve_cache_dir(std::nullopt) == dir);
  ::unsetenv("LEGENDRE_CACHE_DIR");
  CHECK_FALSE(cli::resolve_cache_dir(std::nullopt).has_value());

  auto c = single(3, 5);
  c.cache_dir = dir;
  const auto first = call(cli::cmd_lfunction, c);
  REQUIRE(first.code == cli::kOk);
  std::size_t tables = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    ++tables;
    std::fstream f(entry.path(), std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXXXXX", 7);  // clobber the magic bytes
  }
  CHECK(tables > 0);
  const auto second = call(cli::cmd_lfunction, c);
  CHECK(second.code == cli::kOk);
  CHECK(second.out == first.out);
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::ifstream f(entry.path(), std::ios::binary);
    char magic[7];
    f.read(magic, 7);
    CHECK(std::string(magic, 7) == "FFDLOG1");
  }
  fs::remove_all(dir);
}
