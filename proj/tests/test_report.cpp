#include <string>

#include "doctest.h"
#include "report.hpp"

using namespace ergolab;
using report::Json;

TEST_CASE("average reports are byte-identical across runs and thread counts") {
  const Json cfg = {{"model", "shift"},         {"vector", "coords:offset=0;1,-1/2"},
                    {"f", "t^(3/2)"},           {"A", "rot:alpha=sqrt2-1,lo=0,hi=1/3"},
                    {"weight", "sqrt2*t^2"},    {"N", 20000},
                    {"difference_k", 2}};
  report::Settings s;
  const auto a = report::average(cfg, s);
  s.jobs = 3;
  const auto b = report::average(cfg, s);
  CHECK(a.json.dump() == b.json.dump());
  REQUIRE(a.files.size() == b.files.size());
  for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(a.files[i] == b.files[i]);
}

TEST_CASE("config echo re-parses to an identical config") {
  const Json cfg = {{"model", "simshift:1,2"}, {"vector", "e:3"},        {"f", "t^(5/2)*ln(t)"},
                    {"h", "rand:r=2"},         {"A", "ap:2,5"},          {"weight", "gp:sqrt2*t^2;sqrt3:t^(3/2)"},
                    {"N", 5000},               {"dedup", true}};
  report::Settings s;
  s.seed = 11;
  const Json once = report::config_to_json(report::config_from_json(cfg, s));
  const Json twice = report::config_to_json(report::config_from_json(once, s));
  CHECK(once.dump() == twice.dump());
  CHECK(once["h"] == "rand:r=2,seed=11");
}

TEST_CASE("--N overrides the config horizon") {
  report::Settings s;
  s.N = 1000;
  const auto c = report::config_from_json({{"f", "t^2"}, {"N", 50000}}, s);
  CHECK(c.N == 1000);
}

TEST_CASE("expected verdicts: string and subset forms") {
  report::Settings s;
  CHECK_FALSE(report::average({{"f", "t^(3/2)"}, {"N", 20000}, {"expected", "converges-to-0"}}, s).failed);
  CHECK(report::average({{"f", "t^(3/2)"}, {"N", 20000}, {"expected", "diverges"}}, s).failed);
  s.N = 20000;
  CHECK_FALSE(report::qtest("t*ln(t)", 2, 2, s).failed);
}

TEST_CASE("classify reports Pm before Ml") {
  const auto r = report::classify("t^(3/2)*ln(t)", {});
  CHECK(r.json["verdict"] == "Pm(2)");
  CHECK(report::classify("ln(t)", {}).json["verdict"] == "Unclassified");
}

TEST_CASE("battery expands grids and runs the gate") {
  const Json spec = {
      {"name", "mini"},
      {"defaults", {{"N", 5000}, {"difference_k", 3}}},
      {"experiments",
       Json::array({{{"id", "g"}, {"grid", {{"f", {"t^(3/2)", "t^2+t"}}, {"h", {"zero", "const:1"}}}}},
                    {{"id", "c"}, {"kind", "classify"}, {"expr", "t"}, {"expected", "Pm(1)"}}})}};
  const auto r = report::battery(spec, {});
  CHECK(r.json["experiments"].size() == 5);
  CHECK(r.json["experiments"][0]["id"] == "g-1");
  CHECK(r.json["van_der_corput_gate"]["instances_checked"] == 4);
  CHECK(r.json["van_der_corput_gate"]["passed"] == true);
  CHECK(r.json["verdict"] == "pass");
}

TEST_CASE("trace CSV header") {
  const auto r = report::average({{"f", "t^(3/2)"}, {"N", 1000}}, {});
  REQUIRE(!r.files.empty());
  CHECK(r.files[0].first == "trace.csv");
  CHECK(r.files[0].second.rfind("N,N_eff,value_re,value_im,norm2,osc\n", 0) == 0);
}
