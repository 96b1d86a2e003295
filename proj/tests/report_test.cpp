#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "kron/report.hpp"

using namespace kron;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string tmp_path(const char* stem) {
  return std::string("kron_report_test_") + stem;
}

}  // namespace

TEST_CASE("formatting is 20 significant digits, scientific, stable") {
  {
    PrecisionGuard guard(256);
    CHECK(format_real(Real(1) / 3) == "3.3333333333333333333e-01");
    CHECK(format_real(Real(2)) == "2.0000000000000000000e+00");
    CHECK(format_real(Real(0)) == "0.0000000000000000000e+00");
  }
  {
    // Same value at a different working precision renders identically.
    PrecisionGuard guard(512);
    CHECK(format_real(Real(1) / 3) == "3.3333333333333333333e-01");
  }
  CHECK(format_double(0.5) == "5.0000000000000000000e-01");
  CHECK(format_double(-0.5) == "-5.0000000000000000000e-01");
  CHECK(format_double(1.0 / 3.0) == "3.3333333333333331483e-01");
}

TEST_CASE("csv bytes are deterministic and loadable") {
  CsvTable table;
  table.header = {"t", "s", "bound"};
  table.rows = {{"1", "0.5", "1.0"}, {"2", "0.25", "1.0"}};
  const std::string p1 = tmp_path("a.csv");
  const std::string p2 = tmp_path("b.csv");
  write_csv(table, p1);
  write_csv(table, p2);
  const std::string bytes = slurp(p1);
  CHECK(bytes == slurp(p2));
  CHECK(bytes == "t,s,bound\n1,0.5,1.0\n2,0.25,1.0\n");
  std::remove(p1.c_str());
  std::remove(p2.c_str());
  CHECK_THROWS_AS(write_csv(table, "no_such_dir_zz/x.csv"), IoError);
}

TEST_CASE("sidecar is valid JSON with ordered keys") {
  Sidecar sc;
  sc.add("command", "probe");
  sc.add("alpha", "sqrt2");
  sc.add_raw("bits", "256");
  sc.add_raw("tol", "1.0000000000000000000e-30");
  sc.add_raw("contract_pass", "true");
  const std::string p = tmp_path("meta.json");
  write_sidecar(sc, p);
  const std::string bytes = slurp(p);
  std::remove(p.c_str());

  const auto j = nlohmann::json::parse(bytes);
  CHECK(j.at("command").get<std::string>() == "probe");
  CHECK(j.at("alpha").get<std::string>() == "sqrt2");
  CHECK(j.at("bits").get<long long>() == 256);
  CHECK(j.at("tol").get<double>() == doctest::Approx(1e-30));
  CHECK(j.at("contract_pass").get<bool>() == true);
  // Insertion order is preserved in the raw bytes.
  CHECK(bytes.find("\"command\"") < bytes.find("\"alpha\""));
  CHECK(bytes.find("\"alpha\"") < bytes.find("\"bits\""));
}

TEST_CASE("sidecar escapes string values") {
  Sidecar sc;
  sc.add("note", "a \"quoted\" backslash \\ and tab\tend");
  const std::string p = tmp_path("esc.json");
  write_sidecar(sc, p);
  const std::string bytes = slurp(p);
  std::remove(p.c_str());
  const auto j = nlohmann::json::parse(bytes);
  CHECK(j.at("note").get<std::string>() ==
        "a \"quoted\" backslash \\ and tab\tend");
}

TEST_CASE("plot emission produces an svg with two polylines") {
  SumTrace trace;
  trace.probe = "koksma";
  trace.alpha_desc = "sqrt2";
  trace.f_desc = "cos";
  PrecisionGuard guard(128);
  for (long long t = 1; t <= 16; ++t) {
    SumRow row;
    row.t = t;
    row.s = Real(1) / t;
    row.bound = Real(2);
    row.pass = true;
    trace.rows.push_back(row);
  }
  const std::string p = tmp_path("plot.svg");
  emit_plot(trace, p);
  const std::string bytes = slurp(p);
  CHECK(bytes.find("<svg") != std::string::npos);
  CHECK(bytes.find("polyline") != std::string::npos);
  emit_plot(trace, p);
  CHECK(bytes == slurp(p));  // deterministic bytes
  std::remove(p.c_str());

  SumTrace empty;
  CHECK_THROWS_AS(emit_plot(empty, tmp_path("empty.svg")), IoError);
}
