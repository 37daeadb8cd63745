#include "cdgreen/config.hpp"
#include "doctest.h"

using namespace cdg;
using namespace cdg::config;

TEST_CASE("defaults are valid and reproduce the anisotropic-plume setup") {
  const RunConfig c = parse("");
  CHECK(c.coefficients.preset == "constant");
  CHECK(c.coefficients.a == 1.0);
  CHECK(c.coefficients.b == 0.0);
  CHECK(c.eval.eps == 1e-3);
  CHECK(c.eval.singular.x == 1.0 / 3.0);
  CHECK(c.eval.grid == 513);
  CHECK(c.hash().size() == 16);
}

TEST_CASE("full document") {
  const RunConfig c = parse(R"(
command = "fd"
seed = 7
tol = 1e-5
format = "json"
coefficients = "smooth"

[fd]
epsilon = [0.05, 0.01]
N = 64
mesh.kind = "uniform"
bc = "neumann"
probe = [0.25, 0.5]

[scaling]
kinds = ["value", "d_xi", "d_eta"]
epsilon = [1e-3]
rho = [0.0625, 0.25, 1]
rho_relative = true
region = "ball"
model = "ln_rho"
max_rel_residual = 0.3
)");
  CHECK(c.command == "fd");
  CHECK(c.seed == 7);
  CHECK(c.tol == 1e-5);
  CHECK(c.coefficients.preset == "smooth");
  CHECK(c.fd.eps == std::vector<double>{0.05, 0.01});
  CHECK(c.fd.n == 64);
  CHECK(c.fd.mesh == fd::MeshKind::uniform);
  CHECK(c.fd.bc == fd::BoundaryCondition::neumann_top_bottom);
  CHECK(c.fd.probe.x == 0.25);
  CHECK(c.scaling.kinds.size() == 3);
  CHECK(c.scaling.rho.back() == 1.0);
  CHECK(c.scaling.model == scaling::Model::ln_rho);
  CHECK(c.scaling.max_rel_residual.value() == 0.3);
  CHECK_FALSE(c.scaling.max_spread.has_value());
}

TEST_CASE("hash follows content, not formatting") {
  const RunConfig a = parse("seed = 3\n[eval]\nepsilon = 0.01\n");
  const RunConfig b = parse("# comment\nseed=3\n[eval]\n  epsilon=0.010\n");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != parse("seed = 4\n[eval]\nepsilon = 0.01\n").hash());
  // threads and out leave the hash alone
  CHECK(a.hash() == parse("seed = 3\nthreads = 2\nout = \"x\"\n[eval]\nepsilon = 0.01\n").hash());
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse("bogus = 1"), ConfigError);
  CHECK_THROWS_AS(parse("[eval]\nepsilon = 0.0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[eval]\nepsilon = \"small\"\n"), ConfigError);
  CHECK_THROWS_AS(parse("[eval]\nvariant = \"hat_square\"\n"), ConfigError);
  CHECK_THROWS_AS(parse("[scaling]\nepsilon = []\n"), ConfigError);
  CHECK_THROWS_AS(parse("[norms]\nregion = \"ball\"\n"), ConfigError);
  CHECK_THROWS_AS(parse("[fd]\nN = 30\n"), ConfigError);
  CHECK_THROWS_AS(parse("[fd]\nmesh.kind = \"bakhvalov\"\n"), ConfigError);
  CHECK_THROWS_AS(parse("[fd]\nprobe = [0.5]\n"), ConfigError);
  CHECK_THROWS_AS(parse("coefficients = \"turbulent\""), ConfigError);
  CHECK_THROWS_AS(parse("[coefficients]\na = -1.0\n"), ConfigError);
  CHECK_THROWS_AS(parse("format = \"xml\""), ConfigError);
  CHECK_THROWS_AS(parse("[eval\n"), ConfigError);
  CHECK_THROWS_AS(load("/nonexistent/cdgreen.toml"), ConfigError);
  try {
    parse("[fd]\nbc = \"robin\"\n");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("fd.bc") != std::string::npos);
  }
}
