#include <cstdio>
#include <fstream>
#include <sstream>

#include "cdgreen/output.hpp"
#include "doctest.h"

using namespace cdg;
using namespace cdg::io;

namespace {
const Provenance kProv{"9.9.9", "0123456789abcdef"};
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("doubles keep 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-300) == "-2.5e-300");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(NAN) == "nan");
}

TEST_CASE("RFC 4180 rendering") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("two\nlines") == "\"two\nlines\"");

  CsvTable t({"epsilon", "rho", "note"});
  t.add_row({0.5, 3LL, std::string("x,y")});
  CHECK(t.render(kProv) ==
        "# cdgreen 9.9.9 config_hash=0123456789abcdef\r\n"
        "epsilon,rho,note\r\n"
        "0.5,3,\"x,y\"\r\n");
  CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
}

TEST_CASE("json carries provenance") {
  const std::string s = render_json({{"pass", true}}, kProv);
  const auto j = nlohmann::json::parse(s);
  CHECK(j["cdgreen_version"] == "9.9.9");
  CHECK(j["config_hash"] == "0123456789abcdef");
  CHECK(s.back() == '\n');
}

TEST_CASE("heatmap svg") {
  Heatmap m;
  m.nx = 300;
  m.ny = 5;
  for (int j = 0; j < m.ny; ++j) {
    for (int i = 0; i < m.nx; ++i) m.values.push_back(std::exp(-0.05 * i) * (j + 1));
  }
  m.title = "G < 1 & more";
  const std::string svg = render_svg_heatmap(m, kProv);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("config_hash=0123456789abcdef") != std::string::npos);
  CHECK(svg.find("G &lt; 1 &amp; more") != std::string::npos);
  CHECK(svg.find("#fde725") != std::string::npos);  // brightest colour reached
  // at most 200 x 5 pixels plus 50 colour-bar steps and the background
  std::size_t rects = 0;
  for (std::size_t p = svg.find("<rect"); p != std::string::npos; p = svg.find("<rect", p + 1)) ++rects;
  CHECK(rects == 200 * 5 + 50 + 1);
  CHECK(render_svg_heatmap(m, kProv) == svg);

  m.values.pop_back();
  CHECK_THROWS_AS(render_svg_heatmap(m, kProv), std::invalid_argument);
}

TEST_CASE("fit chart svg") {
  std::vector<scaling::Sample> samples;
  for (double e : {1e-2, 1e-3, 1e-4}) samples.push_back({e, 0.0, 0.8 / std::sqrt(e), 0.0, 10});
  const scaling::Fit f = scaling::fit(scaling::Model::power, samples);
  const std::string svg = render_svg_fit(f, "slope", kProv);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("slope=-0.5") != std::string::npos);
}

TEST_CASE("write_file reports the path") {
  const std::string path = "cdgreen_test_output.tmp";
  write_file(path, "abc");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "abc");
  std::remove(path.c_str());
  try {
    write_file("/nonexistent/dir/x.csv", "abc");
    FAIL("expected an error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/dir/x.csv") != std::string::npos);
  }
}
