// Experiment runner CLI. Talks to the toolkit through the C API only.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "pw/pw_c.h"

int main(int argc, char** argv) {
  CLI::App app{"Bandlimited-signal toolkit experiment runner"};
  app.require_subcommand(1);

  // run
  std::string config_path;
  std::string out_dir = "pw-out";
  std::uint64_t seed = 0;
  double tol = 0.0;
  bool emit_plots = false;
  CLI::App* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("--config", config_path, "Experiment config JSON")
      ->required();
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Output directory (default pw-out)");
  CLI::Option* tol_opt =
      run->add_option("--tol", tol, "Override the quadrature tolerance");
  run->add_flag("--emit-plots", emit_plots, "Write SVG plots");

  // describe
  int dim = 1;
  std::string kind = "K";
  int axis = 1;
  CLI::App* describe =
      app.add_subcommand("describe", "Describe a catalog signal");
  describe->add_option("--dim", dim, "Dimension n")->required();
  describe->add_option("--kind", kind, "K, P or Q")->required();
  describe->add_option("--axis", axis, "Distinguished axis j (P, Q)");

  CLI::App* version = app.add_subcommand("version", "Print tool version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (version->parsed()) {
    std::printf("%s\n", pw_version());
    return 0;
  }

  if (describe->parsed()) {
    if (kind.size() != 1) {
      std::fprintf(stderr, "error: kind must be one letter (K, P or Q)\n");
      return 1;
    }
    char buffer[1024];
    pw_status st =
        pw_describe_catalog(dim, kind[0], axis, buffer, sizeof(buffer));
    if (st != PW_OK) {
      std::fprintf(stderr, "error: %s\n", pw_last_error());
      return 1;
    }
    std::printf("%s\n", buffer);
    return 0;
  }

  int status = pw_run_experiment(
      config_path.c_str(), out_dir.c_str(), seed_opt->count() > 0, seed,
      tol_opt->count() > 0, tol, emit_plots ? 1 : 0);
  const char* msg = pw_last_error();
  if (status == 0) {
    std::printf("%s\n", msg[0] ? msg : "pass");
  } else {
    std::fprintf(stderr, "%s\n", msg[0] ? msg : "error");
  }
  return status;
}
