#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pw/signal.hpp"

namespace pw::runner {

struct SignalSpec {
  std::string type = "catalog";  // "catalog" | "file"
  std::string kind = "K";        // K | P | Q
  int axis = 1;
  std::string path;              // for type == "file"
};

struct WarpStepSpec {
  std::string type;  // "affine" | "coordinate-power" | "coordinate-sine"
  std::vector<std::vector<double>> matrix;
  std::vector<double> offset;
  int axis = 1;
  int power = 1;
  double amplitude = 0.0;
  double frequency = 1.0;
};

struct GridSpec {
  double extent = 512.0;
  int nodes = 8192;
  std::string window = "hann";  // "hann" | "none"
};

struct ProbeSpec {
  int count = 20;
  double span = 3.0;        // abscissas in [-span, span]
  int points = 801;
  double anchor_range = 2.0;
};

struct ToleranceSpec {
  double affine = 1e-6;
  double nonaffine = 1e-2;
  double oob_factor = 10.0;
  double margin = 1e-8;
  double quad = 1e-3;
};

// One experiment per config; round-trips losslessly through JSON.
struct ExperimentConfig {
  int schema_version = 1;
  std::string kind;  // catalog | warp | spectrum | verify-affine |
                     // verify-theorem | growth-bound | projection
  std::uint64_t seed = 0;
  bool seed_set = false;
  int dim_in = 1;
  int dim_out = 1;
  SignalSpec signal;
  std::vector<WarpStepSpec> warp;
  GridSpec grid;
  ProbeSpec probes;
  ToleranceSpec tol;
  std::vector<double> strengths{0.0, 1.0};
  std::vector<double> z_radii{1.0, 5.0, 10.0};
  int line_count = 50;
  int z_count = 64;
  int projection_dim = 1;

  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;  // canonical: sorted keys, all fields
};

struct ExperimentResult {
  int status = 0;  // 0 pass, 1 usage/operational error, 2 verification failed
  bool pass = false;
  std::string report_json;
  std::vector<std::string> artifacts;  // paths relative to out_dir
};

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::string& out_dir,
                                bool emit_plots = false);

// CLI entry: loads the config file, applies overrides, runs, reports the
// process exit status. Errors land in `message` when provided.
int run_experiment_file(const std::string& config_path,
                        const std::string& out_dir,
                        std::optional<std::uint64_t> seed_override,
                        std::optional<double> tol_override, bool emit_plots,
                        std::string* message = nullptr);

// Support box, closed form and L2 norms of a catalog member.
std::string describe_catalog(int dim, CatalogKind kind, int axis);

std::string tool_version();
std::string config_hash_hex(const std::string& canonical_text);

}  // namespace pw::runner
