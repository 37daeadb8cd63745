#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cdgreen/output.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Green's functions of singularly perturbed convection-diffusion problems"};
  app.set_version_flag("--version", cdg::io::library_version());
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  cdg::cli::Overrides ov;
  std::string only;

  const char* commands[][2] = {
      {"eval", "evaluate an image approximation on a grid (CSV + JSON sidecar, optional SVG)"},
      {"norms", "L1 norms by adaptive quadrature"},
      {"scaling", "eps/rho sweep with a scaling-law fit"},
      {"fd", "finite-difference reference: mass bound, representation identity, image comparison"},
      {"residual", "PDE residual of the fundamental solution and defect of an image approximation"},
      {"selfcheck", "run the acceptance checks"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "TOML run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", ov.out, "output directory");
    sub->add_option("--threads", ov.threads, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", ov.tol, "relative quadrature tolerance");
    sub->add_option("--format", ov.format, "table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--svg", ov.svg, "also write an SVG figure");
    if (std::string(name) == "selfcheck") {
      sub->add_option("--only", ov.only, "criterion ids to run")->delimiter(',');
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << nlohmann::json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump(2) << "\n";
    return cdg::cli::kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return cdg::cli::run(command, config_path, ov, std::cout, std::cerr);
}
