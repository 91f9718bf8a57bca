#include "pw/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "pw/affine.hpp"
#include "pw/analysis.hpp"
#include "pw/errors.hpp"
#include "pw/io.hpp"
#include "pw/rng.hpp"
#include "pw/spectra.hpp"
#include "pw/warp.hpp"

namespace pw::runner {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kToolName = "pwtk";
constexpr const char* kToolVersion = "0.1.0";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Config <-> JSON

json signal_to_json(const SignalSpec& s) {
  json j;
  j["type"] = s.type;
  j["kind"] = s.kind;
  j["axis"] = s.axis;
  j["path"] = s.path;
  return j;
}

SignalSpec signal_from_json(const json& j) {
  SignalSpec s;
  s.type = j.value("type", s.type);
  s.kind = j.value("kind", s.kind);
  s.axis = j.value("axis", s.axis);
  s.path = j.value("path", s.path);
  return s;
}

json warp_step_to_json(const WarpStepSpec& w) {
  json j;
  j["type"] = w.type;
  if (w.type == "affine") {
    j["matrix"] = w.matrix;
    j["offset"] = w.offset;
  } else if (w.type == "coordinate-power") {
    j["axis"] = w.axis;
    j["power"] = w.power;
  } else {
    j["axis"] = w.axis;
    j["amplitude"] = w.amplitude;
    j["frequency"] = w.frequency;
  }
  return j;
}

WarpStepSpec warp_step_from_json(const json& j) {
  WarpStepSpec w;
  w.type = j.at("type").get<std::string>();
  if (w.type == "affine") {
    w.matrix = j.at("matrix").get<std::vector<std::vector<double>>>();
    w.offset = j.at("offset").get<std::vector<double>>();
  } else if (w.type == "coordinate-power") {
    w.axis = j.value("axis", 1);
    w.power = j.value("power", 1);
  } else if (w.type == "coordinate-sine") {
    w.axis = j.value("axis", 1);
    w.amplitude = j.value("amplitude", 0.0);
    w.frequency = j.value("frequency", 1.0);
  } else {
    throw Error(ErrorCode::ParseError,
                "config: unknown warp step type '" + w.type + "'");
  }
  return w;
}

spectra::Window parse_window(const std::string& w) {
  if (w == "hann") return spectra::Window::Hann;
  if (w == "none") return spectra::Window::None;
  throw Error(ErrorCode::ParseError, "config: unknown window '" + w + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError,
                std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c.schema_version = j.value("schema_version", 1);
    c.kind = j.at("kind").get<std::string>();
    if (j.contains("seed") && !j["seed"].is_null()) {
      c.seed = j["seed"].get<std::uint64_t>();
      c.seed_set = true;
    }
    if (j.contains("dims")) {
      c.dim_in = j["dims"].value("in", 1);
      c.dim_out = j["dims"].value("out", 1);
    }
    if (j.contains("signal")) c.signal = signal_from_json(j["signal"]);
    if (j.contains("warp")) {
      for (const auto& s : j["warp"]) c.warp.push_back(warp_step_from_json(s));
    }
    if (j.contains("grid")) {
      c.grid.extent = j["grid"].value("extent", c.grid.extent);
      c.grid.nodes = j["grid"].value("nodes", c.grid.nodes);
      c.grid.window = j["grid"].value("window", c.grid.window);
    }
    if (j.contains("probes")) {
      c.probes.count = j["probes"].value("count", c.probes.count);
      c.probes.span = j["probes"].value("span", c.probes.span);
      c.probes.points = j["probes"].value("points", c.probes.points);
      c.probes.anchor_range =
          j["probes"].value("anchor_range", c.probes.anchor_range);
    }
    if (j.contains("tolerances")) {
      const auto& t = j["tolerances"];
      c.tol.affine = t.value("affine", c.tol.affine);
      c.tol.nonaffine = t.value("nonaffine", c.tol.nonaffine);
      c.tol.oob_factor = t.value("oob_factor", c.tol.oob_factor);
      c.tol.margin = t.value("margin", c.tol.margin);
      c.tol.quad = t.value("quad", c.tol.quad);
    }
    if (j.contains("strengths"))
      c.strengths = j["strengths"].get<std::vector<double>>();
    if (j.contains("z_radii"))
      c.z_radii = j["z_radii"].get<std::vector<double>>();
    c.line_count = j.value("line_count", c.line_count);
    c.z_count = j.value("z_count", c.z_count);
    c.projection_dim = j.value("projection_dim", c.projection_dim);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError,
                std::string("config: missing or mistyped field: ") + e.what());
  }
  return c;
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["schema_version"] = schema_version;
  j["kind"] = kind;
  if (seed_set) j["seed"] = seed;
  j["dims"] = {{"in", dim_in}, {"out", dim_out}};
  j["signal"] = signal_to_json(signal);
  json w = json::array();
  for (const auto& s : warp) w.push_back(warp_step_to_json(s));
  j["warp"] = w;
  j["grid"] = {{"extent", grid.extent},
               {"nodes", grid.nodes},
               {"window", grid.window}};
  j["probes"] = {{"count", probes.count},
                 {"span", probes.span},
                 {"points", probes.points},
                 {"anchor_range", probes.anchor_range}};
  j["tolerances"] = {{"affine", tol.affine},
                     {"nonaffine", tol.nonaffine},
                     {"oob_factor", tol.oob_factor},
                     {"margin", tol.margin},
                     {"quad", tol.quad}};
  j["strengths"] = strengths;
  j["z_radii"] = z_radii;
  j["line_count"] = line_count;
  j["z_count"] = z_count;
  j["projection_dim"] = projection_dim;
  return j.dump(2) + "\n";
}

std::string tool_version() {
  return std::string(kToolName) + " " + kToolVersion;
}

std::string config_hash_hex(const std::string& canonical_text) {
  // FNV-1a 64.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : canonical_text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

namespace {

// ---------------------------------------------------------------------------
// Builders

CatalogKind parse_kind(const std::string& k) {
  if (k == "K") return CatalogKind::K;
  if (k == "P") return CatalogKind::P;
  if (k == "Q") return CatalogKind::Q;
  throw Error(ErrorCode::ParseError, "config: unknown catalog kind '" + k +
                                         "' (expected K, P or Q)");
}

PWSignal make_signal(const ExperimentConfig& c) {
  if (c.signal.type == "catalog")
    return PWSignal::catalog(c.dim_out, parse_kind(c.signal.kind),
                             c.signal.axis);
  if (c.signal.type == "file") {
    PWSignal sig = io::load_signal(c.signal.path);
    if (sig.dim() != c.dim_out)
      throw Error(ErrorCode::DimensionError,
                  "config: signal file dimension does not match dims.out");
    return sig;
  }
  throw Error(ErrorCode::ParseError,
              "config: unknown signal type '" + c.signal.type + "'");
}

// Sine amplitudes scale with `strength`; other steps are fixed.
WarpExpr make_warp(const ExperimentConfig& c, double strength = 1.0) {
  WarpExpr w = WarpExpr::identity(c.dim_in);
  for (const auto& s : c.warp) {
    if (s.type == "affine") {
      int rows = static_cast<int>(s.matrix.size());
      if (rows == 0)
        throw Error(ErrorCode::ParseError, "config: empty affine matrix");
      int cols = static_cast<int>(s.matrix[0].size());
      Matrix A(rows, cols);
      for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(s.matrix[r].size()) != cols)
          throw Error(ErrorCode::ParseError, "config: ragged affine matrix");
        for (int cc = 0; cc < cols; ++cc) A(r, cc) = s.matrix[r][cc];
      }
      Vector b = Vector::Zero(rows);
      for (int r = 0; r < std::min<int>(rows, s.offset.size()); ++r)
        b[r] = s.offset[r];
      w = w.then(WarpExpr::affine_map(affine::AffineMap{A, b}));
    } else if (s.type == "coordinate-power") {
      w = w.then(WarpExpr::coord_power(w.dim_out(), s.axis, s.power));
    } else {
      w = w.then(WarpExpr::coord_sine(w.dim_out(), s.axis,
                                      strength * s.amplitude, s.frequency));
    }
  }
  if (w.dim_out() != c.dim_out)
    throw Error(ErrorCode::DimensionError,
                "config: warp output dimension does not match dims.out");
  return w;
}

std::vector<analysis::LineProbe> make_probes(rng::SplitMix64& gen, int dim,
                                             const ProbeSpec& ps) {
  auto xs = analysis::LineProbe::linspace(-ps.span, ps.span, ps.points);
  std::vector<analysis::LineProbe> probes;
  probes.reserve(ps.count);
  for (int i = 0; i < ps.count; ++i) {
    Vector anchor = gen.vector(dim, -ps.anchor_range, ps.anchor_range);
    Vector dir = gen.unit_vector(dim);
    probes.emplace_back(anchor, dir, xs);
  }
  return probes;
}

void require_seed(const ExperimentConfig& c) {
  if (!c.seed_set)
    throw Error(ErrorCode::Precondition,
                "config: a seed is mandatory for experiments with randomized "
                "probe sets");
}

// ---------------------------------------------------------------------------
// Artifacts

struct ArtifactWriter {
  fs::path dir;
  std::map<std::string, std::string> meta;
  std::vector<std::string> names;

  std::string csv_header() const {
    std::string out;
    for (const auto& [k, v] : meta) out += "# " + k + ": " + v + "\n";
    return out;
  }

  void add_text(const std::string& name, const std::string& body) {
    io::write_text_file((dir / name).string(), body);
    names.push_back(name);
  }

  void add_csv(const std::string& name, const std::string& columns,
               const std::vector<std::vector<double>>& rows) {
    std::string body = csv_header() + columns + "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) body += ',';
        body += fmt_double(row[i]);
      }
      body += '\n';
    }
    add_text(name, body);
  }
};

// Minimal deterministic SVG polyline chart.
std::string svg_chart(const std::string& title,
                      const std::vector<double>& xs,
                      const std::vector<std::pair<std::string,
                                                  std::vector<double>>>& series,
                      const std::string& comment) {
  const double W = 720, H = 420, L = 60, R = 20, T = 40, B = 40;
  double xmin = xs.front(), xmax = xs.back();
  double ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& [name, ys] : series) {
    for (double y : ys) {
      if (!std::isfinite(y)) continue;
      if (first) {
        ymin = ymax = y;
        first = false;
      } else {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (ymax <= ymin) ymax = ymin + 1.0;
  if (xmax <= xmin) xmax = xmin + 1.0;
  auto px = [&](double x) {
    return L + (x - xmin) / (xmax - xmin) * (W - L - R);
  };
  auto py = [&](double y) {
    return H - B - (y - ymin) / (ymax - ymin) * (H - T - B);
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\">\n";
  os << "<!-- " << comment << " -->\n";
  os << "<rect width=\"" << W << "\" height=\"" << H
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << L << "\" y=\"24\" font-family=\"sans-serif\" "
        "font-size=\"14\">"
     << title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R
     << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\""
     << H - B << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L << "\" y=\"" << H - 8
     << "\" font-family=\"sans-serif\" font-size=\"11\">" << num(xmin)
     << "</text>\n";
  os << "<text x=\"" << W - R - 40 << "\" y=\"" << H - 8
     << "\" font-family=\"sans-serif\" font-size=\"11\">" << num(xmax)
     << "</text>\n";
  os << "<text x=\"4\" y=\"" << H - B << "\" font-family=\"sans-serif\" "
        "font-size=\"11\">"
     << num(ymin) << "</text>\n";
  os << "<text x=\"4\" y=\"" << T + 10
     << "\" font-family=\"sans-serif\" font-size=\"11\">" << num(ymax)
     << "</text>\n";
  int ci = 0;
  for (const auto& [name, ys] : series) {
    os << "<polyline fill=\"none\" stroke=\"" << kColors[ci % 4]
       << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
      if (!std::isfinite(ys[i])) continue;
      os << num(px(xs[i])) << ',' << num(py(ys[i])) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << W - R - 150 << "\" y=\"" << T + 14 + 14 * ci
       << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
       << kColors[ci % 4] << "\">" << name << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Experiment bodies. Each fills `report` and returns pass/fail; operational
// problems throw pw::Error.

bool run_catalog(const ExperimentConfig& c, ArtifactWriter& w, json& report) {
  PWSignal sig = make_signal(c);
  if (!sig.is_catalog())
    throw Error(ErrorCode::Precondition,
                "catalog experiment needs a catalog signal");
  CatalogKind kind = sig.catalog_kind();
  report["describe"] = describe_catalog(sig.dim(), kind, sig.catalog_axis());
  report["closed_form"] =
      catalog_closed_form_string(sig.dim(), kind, sig.catalog_axis());
  json box = json::array();
  for (const auto& iv : sig.support().box()) box.push_back({iv.lo, iv.hi});
  report["support_box"] = box;
  report["ball_radius"] = sig.support().ball_radius();
  report["density_l2"] = catalog_density_l2(sig.dim(), kind);
  report["signal_l2"] = std::pow(2.0 * kPi, sig.dim() / 2.0) *
                        catalog_density_l2(sig.dim(), kind);
  io::save_signal(sig, (w.dir / "signal.json").string(),
                  io::ValueEncoding::BinaryLE, w.meta);
  w.names.push_back("signal.json");
  w.names.push_back("signal.bin");
  return true;
}

bool run_spectrum(const ExperimentConfig& c, ArtifactWriter& w, json& report,
                  bool emit_plots) {
  PWSignal sig = make_signal(c);
  spectra::SampleGrid grid{sig.dim(), c.grid.extent, c.grid.nodes};
  spectra::Window window = parse_window(c.grid.window);
  auto samples = spectra::sample_signal(sig, grid);
  auto spec = spectra::dft_spectrum(samples, grid, window);
  io::write_spectrum_csv(spec, (w.dir / "spectrum.csv").string(), w.meta);
  w.names.push_back("spectrum.csv");

  double r0 = sig.support().ball_radius();
  report["band_radius_claimed"] = r0;
  report["total_energy"] = spec.total_energy();
  report["oob_at_claimed_radius"] = spectra::oob_energy(spec, r0);
  report["bandwidth_estimate_1e-4"] = spectra::bandwidth_estimate(spec, 1e-4);
  if (window == spectra::Window::None) {
    double sample_energy = 0.0;
    for (const auto& s : samples) sample_energy += std::norm(s);
    report["parseval_rel_error"] =
        sample_energy > 0.0
            ? std::abs(spec.total_energy() - sample_energy) / sample_energy
            : 0.0;
  }
  if (emit_plots && sig.dim() == 1) {
    std::vector<double> us = spec.freq_axes()[0];
    std::vector<double> logp(us.size());
    for (std::size_t i = 0; i < us.size(); ++i)
      logp[i] = std::log10(spec.power()[i] + 1e-300);
    w.add_text("spectrum.svg",
               svg_chart("log10 power vs u", us, {{"log10 power", logp}},
                         w.csv_header()));
  }
  return true;
}

bool run_warp(const ExperimentConfig& c, ArtifactWriter& w, json& report) {
  WarpExpr warp = make_warp(c);
  report["dim_in"] = warp.dim_in();
  report["dim_out"] = warp.dim_out();
  auto aff = warp.as_affine();
  report["is_affine"] = aff.has_value();
  if (aff) {
    report["affine"] = json::parse(io::affine_to_json(*aff));
    report["op_norm"] = aff->op_norm();
    report["injective"] = aff->is_injective();
  }
  auto xs = analysis::LineProbe::linspace(-c.probes.span, c.probes.span,
                                          c.probes.points);
  std::vector<std::vector<double>> rows;
  Vector anchor = Vector::Zero(warp.dim_in());
  Vector dir = Vector::Zero(warp.dim_in());
  dir[0] = 1.0;
  for (double x : xs) {
    Vector y = warp(anchor + x * dir);
    std::vector<double> row{x};
    for (int i = 0; i < y.size(); ++i) row.push_back(y[i]);
    rows.push_back(std::move(row));
  }
  std::string cols = "x";
  for (int i = 1; i <= warp.dim_out(); ++i)
    cols += ",phi" + std::to_string(i);
  w.add_csv("warp.csv", cols, rows);
  return true;
}

bool run_verify_affine(const ExperimentConfig& c, ArtifactWriter& w,
                       json& report, bool emit_plots) {
  require_seed(c);
  WarpExpr warp = make_warp(c);
  rng::SplitMix64 gen(c.seed);
  auto probes = make_probes(gen, warp.dim_in(), c.probes);
  auto verdict =
      analysis::affinity_verdict(warp, probes, c.tol.affine, c.tol.nonaffine);

  const char* names[] = {"affine-consistent", "non-affine", "inconclusive"};
  report["verdict"] = names[static_cast<int>(verdict.result)];
  report["max_residual"] = verdict.max_residual;
  report["affine_tol"] = verdict.affine_tol;
  report["nonaffine_tol"] = verdict.nonaffine_tol;
  if (verdict.result == analysis::AffinityVerdict::Result::NonAffine) {
    report["witness"] = {{"probe", verdict.witness_probe},
                         {"axis", verdict.witness_axis},
                         {"residual", verdict.witness_residual}};
  }
  report["note"] =
      "affine-consistent on finitely many lines is evidence, not proof";

  // Profile of the first probe on the witness axis (or axis 1).
  int axis = verdict.witness_axis > 0 ? verdict.witness_axis : 1;
  int pidx = verdict.witness_probe >= 0 ? verdict.witness_probe : 0;
  auto prof = analysis::warp_phase_profile(warp, probes[pidx], axis);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < prof.abscissas.size(); ++i) {
    double x = prof.abscissas[i];
    rows.push_back({x, prof.phase[i],
                    prof.fit_slope * x + prof.fit_intercept,
                    prof.masked[i] ? 1.0 : 0.0});
  }
  w.add_csv("profile.csv", "x,psi,fit,masked", rows);
  if (emit_plots) {
    std::vector<double> psi, fit;
    for (const auto& r : rows) {
      psi.push_back(r[1]);
      fit.push_back(r[2]);
    }
    w.add_text("profile.svg",
               svg_chart("unwrapped phase and affine fit", prof.abscissas,
                         {{"psi", psi}, {"fit", fit}}, w.csv_header()));
  }
  return verdict.result != analysis::AffinityVerdict::Result::Inconclusive;
}

bool run_verify_theorem(const ExperimentConfig& c, ArtifactWriter& w,
                        json& report, bool emit_plots, int& status) {
  require_seed(c);
  const int m = c.dim_in;
  const int n = c.dim_out;
  if (n < m) {
    report["impossible"] = true;
    report["reason"] =
        "no continuous map from R^m to R^n with n < m preserves the "
        "bandlimited class for every signal";
    if (c.warp.empty())
      throw Error(ErrorCode::Precondition,
                  "verify-theorem: no warp supplied for an impossible "
                  "dimension pair");
    status = 2;
    return false;
  }

  PWSignal f = make_signal(c);
  WarpExpr warp = make_warp(c);
  rng::SplitMix64 gen(c.seed);
  auto probes = make_probes(gen, m, c.probes);
  auto verdict =
      analysis::affinity_verdict(warp, probes, c.tol.affine, c.tol.nonaffine);
  const char* names[] = {"affine-consistent", "non-affine", "inconclusive"};
  report["verdict"] = names[static_cast<int>(verdict.result)];
  report["max_residual"] = verdict.max_residual;

  const double r0 = f.support().ball_radius();
  spectra::SampleGrid grid{m, c.grid.extent, c.grid.nodes};
  spectra::Window window = parse_window(c.grid.window);

  // The zero-strength member must collapse to an affine control.
  WarpExpr control = make_warp(c, 0.0);
  auto control_aff = control.as_affine();
  if (!control_aff)
    throw Error(ErrorCode::Precondition,
                "verify-theorem: the zero-strength member of the family is "
                "not affine");

  if (n > m) {
    // Injective affine route only: verify the composition law directly.
    auto aff = warp.as_affine();
    if (!aff)
      throw Error(ErrorCode::Precondition,
                  "verify-theorem: n > m requires an affine warp");
    PWSignal composed = affine::compose_affine(f, aff->A, aff->b);
    double max_err = 0.0;
    for (int i = 0; i < 25; ++i) {
      Vector t = gen.vector(m, -4.0, 4.0);
      double err = std::abs(composed.eval(t) - f.eval((*aff)(t)));
      max_err = std::max(max_err, err);
    }
    double bound = aff->op_norm() * r0;
    report["compose_max_eval_error"] = max_err;
    report["support_radius"] = composed.support().ball_radius();
    report["support_radius_bound"] = bound;
    bool pass = max_err <= c.tol.quad &&
                composed.support().ball_radius() <= bound * (1.0 + 1e-9);
    status = pass ? 0 : 2;
    return pass;
  }

  // n == m: measure the leakage floor on the unwarped signal, then the
  // out-of-band fraction of every family member at ||A_eps|| r0.
  std::vector<std::pair<double, WarpExpr>> family;
  family.emplace_back(-1.0, WarpExpr::identity(m));  // control row
  for (double eps : c.strengths) family.emplace_back(eps, make_warp(c, eps));

  double a0_norm = control_aff->op_norm();
  std::vector<std::vector<double>> rows;
  json jrows = json::array();
  double floor = 0.0;
  bool affine_rows_ok = true;
  double last_oob = 0.0, last_radius = 0.0;
  for (const auto& [eps, member] : family) {
    auto aff = member.as_affine();
    double radius = aff ? aff->op_norm() * r0 : a0_norm * r0;
    if (eps < 0.0) radius = r0;  // identity control
    auto samples = spectra::sample_on_grid(
        [&](const Vector& t) { return f.eval(member(t)); }, grid);
    auto spec = spectra::dft_spectrum(samples, grid, window);
    double oob = spectra::oob_energy(spec, radius);
    if (eps < 0.0) {
      floor = oob;
    } else {
      rows.push_back({eps, oob, radius, floor > 0.0 ? oob / floor : 0.0});
      jrows.push_back({{"strength", eps},
                       {"oob", oob},
                       {"radius", radius},
                       {"ratio_to_floor", floor > 0.0 ? oob / floor : 0.0}});
      if (aff && oob > c.tol.oob_factor * floor) affine_rows_ok = false;
      last_oob = oob;
      last_radius = radius;
    }
  }
  report["leakage_floor"] = floor;
  report["rows"] = jrows;
  w.meta["baseline_floor"] = fmt_double(floor);
  w.add_csv("spread.csv", "strength,oob,radius,ratio_to_floor", rows);

  bool pass = false;
  if (verdict.result == analysis::AffinityVerdict::Result::AffineConsistent) {
    pass = affine_rows_ok;
    report["expectation"] = "affine warp stays at the leakage floor";
  } else if (verdict.result == analysis::AffinityVerdict::Result::NonAffine) {
    pass = affine_rows_ok && last_oob > c.tol.oob_factor * floor;
    report["expectation"] =
        "non-affine warp spreads beyond oob_factor times the floor";
    report["witness"] = {{"probe", verdict.witness_probe},
                         {"axis", verdict.witness_axis},
                         {"residual", verdict.witness_residual}};
  }
  report["last_oob"] = last_oob;
  report["last_radius"] = last_radius;

  if (emit_plots && !rows.empty()) {
    std::vector<double> eps, ratio;
    for (const auto& r : rows) {
      eps.push_back(r[0]);
      ratio.push_back(r[3]);
    }
    w.add_text("spread.svg", svg_chart("oob ratio to floor vs strength", eps,
                                       {{"ratio", ratio}}, w.csv_header()));
  }
  status = pass ? 0 : 2;
  return pass;
}

bool run_growth_bound(const ExperimentConfig& c, ArtifactWriter& w,
                      json& report, bool emit_plots) {
  require_seed(c);
  PWSignal f = make_signal(c);
  rng::SplitMix64 gen(c.seed);

  std::vector<Complex> zs;
  zs.reserve(c.z_count);
  for (int k = 0; k < c.z_count; ++k) {
    double rho = c.z_radii[k % c.z_radii.size()];
    double ang = 2.0 * kPi * k / c.z_count;
    zs.emplace_back(rho * std::cos(ang), rho * std::sin(ang));
  }

  double min_margin = 0.0;
  bool first = true;
  std::vector<std::vector<double>> rows;
  for (int line = 0; line < c.line_count; ++line) {
    Vector a = gen.vector(f.dim(), -2.0, 2.0);
    Vector b = gen.unit_vector(f.dim());
    auto margins = analysis::exp_type_bound_margins(f, a, b, zs);
    for (std::size_t k = 0; k < margins.size(); ++k) {
      if (first || margins[k] < min_margin) min_margin = margins[k];
      first = false;
      rows.push_back({static_cast<double>(line), zs[k].real(), zs[k].imag(),
                      margins[k]});
    }
  }
  w.add_csv("margins.csv", "line,z_re,z_im,margin", rows);
  report["min_margin"] = min_margin;
  report["lines"] = c.line_count;
  report["z_per_line"] = c.z_count;
  if (emit_plots) {
    std::vector<double> idx(rows.size()), mg(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      idx[i] = static_cast<double>(i);
      mg[i] = rows[i][3];
    }
    w.add_text("margins.svg", svg_chart("growth-bound margins", idx,
                                        {{"margin", mg}}, w.csv_header()));
  }
  return min_margin >= -c.tol.margin;
}

bool run_projection(const ExperimentConfig& c, ArtifactWriter& w,
                    json& report) {
  require_seed(c);
  PWSignal f = make_signal(c);
  const int n = f.dim();
  const int m = c.projection_dim;
  SpectralDensity marginal = affine::project_spectrum(f.spectrum(), m);

  double cnm =
      affine::projection_l2_constant(f.support().ball_radius(), n, m);
  double lhs = marginal.l2_norm();
  double rhs = cnm * f.spectrum().l2_norm();
  report["marginal_l2"] = lhs;
  report["l2_bound"] = rhs;
  report["l2_constant"] = cnm;

  rng::SplitMix64 gen(c.seed);
  double max_err = 0.0, max_tol = 0.0;
  for (int i = 0; i < 50; ++i) {
    Vector x = gen.vector(m, -5.0, 5.0);
    Vector sx = Vector::Zero(n);
    sx.head(m) = x;
    Complex via_marginal = marginal.eval_time(x);
    Complex direct = f.eval(sx);
    max_err = std::max(max_err, std::abs(via_marginal - direct));
    max_tol = std::max(max_tol, 4.0 * marginal.quad_error_bound(x) +
                                    4.0 * f.spectrum().quad_error_bound(sx) +
                                    1e-12);
  }
  report["consistency_max_error"] = max_err;
  report["consistency_tolerance"] = max_tol;

  // Marginal written along its own grid (1D marginals only get a CSV).
  if (m == 1) {
    std::vector<std::vector<double>> rows;
    const AxisGrid& ax = marginal.axes()[0];
    for (int k = 0; k < ax.nodes; ++k) {
      Complex v = marginal.node_value({k});
      rows.push_back({ax.node(k), v.real(), v.imag()});
    }
    w.add_csv("marginal.csv", "u,re,im", rows);
  }
  return max_err <= max_tol && lhs <= rhs * (1.0 + 1e-9);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::string& out_dir, bool emit_plots) {
  static const char* kKinds[] = {"catalog",        "warp",
                                 "spectrum",       "verify-affine",
                                 "verify-theorem", "growth-bound",
                                 "projection"};
  bool known = false;
  for (const char* k : kKinds) known = known || config.kind == k;
  if (!known)
    throw Error(ErrorCode::ParseError,
                "unknown experiment kind '" + config.kind + "'");

  std::string canonical = config.to_json_text();
  std::string hash = config_hash_hex(canonical);

  ArtifactWriter w;
  w.dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(w.dir, ec);
  if (ec)
    throw Error(ErrorCode::IoError, "cannot create output dir " + out_dir);
  w.meta["tool"] = tool_version();
  w.meta["config"] = hash;
  if (config.seed_set) w.meta["seed"] = std::to_string(config.seed);
  w.meta["grid"] = std::to_string(config.grid.nodes) + " nodes, extent " +
                   fmt_double(config.grid.extent);
  w.meta["window"] = config.grid.window;

  json report;
  int status = 0;
  bool pass = false;
  if (config.kind == "catalog") {
    pass = run_catalog(config, w, report);
  } else if (config.kind == "spectrum") {
    pass = run_spectrum(config, w, report, emit_plots);
  } else if (config.kind == "warp") {
    pass = run_warp(config, w, report);
  } else if (config.kind == "verify-affine") {
    pass = run_verify_affine(config, w, report, emit_plots);
    status = pass ? 0 : 2;
  } else if (config.kind == "verify-theorem") {
    pass = run_verify_theorem(config, w, report, emit_plots, status);
  } else if (config.kind == "growth-bound") {
    pass = run_growth_bound(config, w, report, emit_plots);
    status = pass ? 0 : 2;
  } else {
    pass = run_projection(config, w, report);
    status = pass ? 0 : 2;
  }

  json envelope;
  envelope["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  envelope["config_hash"] = hash;
  envelope["config"] = json::parse(canonical);
  envelope["kind"] = config.kind;
  if (config.seed_set) envelope["seed"] = config.seed;
  envelope["status"] = status;
  envelope["pass"] = pass;
  envelope["report"] = report;

  ExperimentResult result;
  result.status = status;
  result.pass = pass;
  result.artifacts = w.names;

  json arts = json::array();
  for (const auto& nme : w.names) arts.push_back(nme);
  arts.push_back("result.json");
  envelope["artifacts"] = arts;
  result.artifacts.push_back("result.json");
  result.report_json = envelope.dump(2) + "\n";
  io::write_text_file((w.dir / "result.json").string(), result.report_json);
  return result;
}

int run_experiment_file(const std::string& config_path,
                        const std::string& out_dir,
                        std::optional<std::uint64_t> seed_override,
                        std::optional<double> tol_override, bool emit_plots,
                        std::string* message) {
  try {
    ExperimentConfig config =
        ExperimentConfig::from_json_text(io::read_text_file(config_path));
    if (seed_override) {
      config.seed = *seed_override;
      config.seed_set = true;
    }
    if (tol_override) config.tol.quad = *tol_override;
    ExperimentResult res = run_experiment(config, out_dir, emit_plots);
    if (message) {
      *message = config.kind + ": " +
                 (res.status == 0
                      ? "pass"
                      : (res.status == 2 ? "verification failed" : "error"));
    }
    return res.status;
  } catch (const Error& e) {
    if (message) *message = e.what();
    return 1;
  } catch (const std::exception& e) {
    if (message) *message = e.what();
    return 1;
  }
}

std::string describe_catalog(int dim, CatalogKind kind, int axis) {
  if (kind == CatalogKind::K) axis = 1;
  BandSupport support = catalog_support(dim, kind, axis);
  std::ostringstream os;
  os << catalog_closed_form_string(dim, kind, axis) << ", support ";
  for (std::size_t i = 0; i < support.box().size(); ++i) {
    if (i) os << " x ";
    os << '[' << support.box()[i].lo << ',' << support.box()[i].hi << ']';
  }
  os << ", ball radius " << support.ball_radius();
  os << ", density L2 norm " << catalog_density_l2(dim, kind);
  os << ", signal L2 norm "
     << std::pow(2.0 * kPi, dim / 2.0) * catalog_density_l2(dim, kind);
  return os.str();
}

}  // namespace pw::runner
