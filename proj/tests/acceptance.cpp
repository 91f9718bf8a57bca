// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. The CLI binary path comes in as argv[1] (used by
// the determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pw/affine.hpp"
#include "pw/analysis.hpp"
#include "pw/errors.hpp"
#include "pw/io.hpp"
#include "pw/rng.hpp"
#include "pw/runner.hpp"
#include "pw/signal.hpp"
#include "pw/spectra.hpp"
#include "pw/warp.hpp"

using namespace pw;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

int g_failures = 0;

void require(Outcome& out, bool cond, const std::string& what) {
  if (!cond) {
    out.pass = false;
    out.detail << " [failed: " << what << "]";
  }
}

template <typename Fn>
void criterion(int id, const char* label, double budget_seconds, Fn&& fn) {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  try {
    fn(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (budget_seconds > 0.0 && secs >= budget_seconds) {
    out.pass = false;
    out.detail << " [runtime " << secs << " s over budget " << budget_seconds
               << " s]";
  }
  if (!out.pass) ++g_failures;
  std::printf("[%s] criterion %d: %s (%.2f s)%s\n",
              out.pass ? "PASS" : "FAIL", id, label, secs,
              out.detail.str().c_str());
  std::fflush(stdout);
}

Vector vec1(double x) {
  Vector v(1);
  v << x;
  return v;
}

double raised_cosine_time(double t) {
  if (std::abs(t) < 1e-6)
    return 1.0 - (1.0 / 6.0 - 1.0 / (kPi * kPi)) * t * t;
  if (std::abs(std::abs(t) - kPi) < 1e-6) {
    double d = std::abs(t) - kPi;
    return 0.5 - d * (0.5 / kPi) + d * d * (0.25 - 1.0 / (kPi * kPi));
  }
  return kPi * kPi * std::sin(t) / (t * (kPi * kPi - t * t));
}

double raised_cosine_freq(double u) {
  return std::abs(u) <= 1.0 ? 0.5 * (1.0 + std::cos(kPi * u)) : 0.0;
}

// Relative L2 mismatch between the DFT-estimated spectrum magnitude of the
// warped samples and the pullback law |det A|^{-1} |g((A^{-1})^* u)|.
double pullback_mismatch(const Matrix& A, const Vector& b,
                         const spectra::SampleGrid& grid, bool catalog_k) {
  const int n = grid.dim;
  auto f_axis = [&](double s) {
    return catalog_k ? 2.0 * sinc_safe(s) : raised_cosine_time(s);
  };
  auto samples = spectra::sample_on_grid(
      [&](const Vector& t) {
        Vector s = A * t + b;
        double v = 1.0;
        for (int i = 0; i < n; ++i) v *= f_axis(s[i]);
        return Complex(v, 0.0);
      },
      grid);
  auto spec = spectra::dft_spectrum(samples, grid, spectra::Window::None);

  const Matrix M = A.inverse().transpose();
  const double inv_det = 1.0 / std::abs(A.determinant());
  const double h = grid.spacing();
  const double ft_scale =
      std::pow(h / (2.0 * kPi), n) * std::sqrt(static_cast<double>(
                                         spec.power().size()));
  auto g_axis = [&](double u) {
    return catalog_k ? (std::abs(u) <= 1.0 ? 1.0 : 0.0)
                     : raised_cosine_freq(u);
  };

  double num = 0.0, den = 0.0;
  const auto& axes = spec.freq_axes();
  std::vector<std::size_t> sizes(n);
  for (int a = 0; a < n; ++a) sizes[a] = axes[a].size();
  Vector u(n);
  for (std::size_t flat = 0; flat < spec.power().size(); ++flat) {
    std::size_t rem = flat;
    for (int a = n - 1; a >= 0; --a) {
      u[a] = axes[a][rem % sizes[a]];
      rem /= sizes[a];
    }
    double est = ft_scale * std::sqrt(spec.power()[flat]);
    Vector w = M * u;
    double ref = inv_det;
    for (int a = 0; a < n; ++a) ref *= g_axis(w[a]);
    num += (est - ref) * (est - ref);
    den += ref * ref;
  }
  return std::sqrt(num / den);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is),
                     std::istreambuf_iterator<char>());
}

}  // namespace

int main(int argc, char** argv) {
  std::string pwcli = argc > 1 ? argv[1] : "";

  // 1 -------------------------------------------------------------------
  criterion(1, "catalog identities at 10^3 seeded points", 1.0,
            [&](Outcome& out) {
    rng::SplitMix64 gen(1001);
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n) {
      for (int trial = 0; trial < 1000; ++trial) {
        Vector t = gen.vector(n, -20.0, 20.0);
        for (int j = 1; j <= n; ++j) {
          double lhs8 = std::abs(catalog_closed_Q(t, j));
          double r8 = identity_residual(t, j, IdentityKind::Modulation);
          require(out, r8 <= 1e-10 * (1.0 + lhs8), "modulation identity residual");
          double lhs9 = std::abs(2.0 * catalog_closed_P(t, j) *
                                 catalog_closed_Q(t, j) * t[j - 1]);
          double r9 = identity_residual(t, j, IdentityKind::Product);
          require(out, r9 <= 1e-10 * (1.0 + lhs9), "product identity residual");
          worst = std::max({worst, r8 / (1.0 + lhs8), r9 / (1.0 + lhs9)});
        }
      }
    }
    out.detail << " worst scaled residual " << worst;
  });

  // 2 -------------------------------------------------------------------
  criterion(2, "pullback law vs DFT oracle, 10 seeded maps", 30.0,
            [&](Outcome& out) {
    rng::SplitMix64 gen(1002);
    double worst = 0.0;
    // 1D: five smooth-bump cases plus the catalog indicator case a = 2.
    spectra::SampleGrid g1{1, 200.0, 4096};
    for (double a : {0.45, -0.8, 1.2, 2.0, 0.6}) {
      Matrix A(1, 1);
      A << a;
      double err = pullback_mismatch(A, vec1(gen.uniform(-1.0, 1.0)), g1,
                                     false);
      worst = std::max(worst, err);
      require(out, err < 0.05, "1D bump case");
    }
    {
      Matrix A(1, 1);
      A << 2.0;
      spectra::SampleGrid gk{1, 512.0, 4096};
      double err = pullback_mismatch(A, vec1(0.0), gk, true);
      worst = std::max(worst, err);
      require(out, err < 0.05, "1D indicator case");
    }
    // 2D: rotated and sheared maps with condition number <= 10.
    spectra::SampleGrid g2{2, 60.0, 256};
    for (int i = 0; i < 4; ++i) {
      double th1 = gen.uniform(0.0, 2.0 * kPi);
      double th2 = gen.uniform(0.0, 2.0 * kPi);
      double smin = (i == 3) ? 0.15 : 0.4;
      Matrix r1(2, 2), r2(2, 2), d = Matrix::Zero(2, 2);
      r1 << std::cos(th1), -std::sin(th1), std::sin(th1), std::cos(th1);
      r2 << std::cos(th2), -std::sin(th2), std::sin(th2), std::cos(th2);
      d(0, 0) = gen.uniform(smin, 1.2);
      d(1, 1) = gen.uniform(smin, 1.2);
      Matrix A = r1 * d * r2;
      double err = pullback_mismatch(A, gen.vector(2, -1.0, 1.0), g2, false);
      worst = std::max(worst, err);
      require(out, err < 0.05, "2D case");
    }
    out.detail << " worst rel L2 error " << worst;
  });

  // 3 -------------------------------------------------------------------
  criterion(3, "affine stays at the leakage floor, sine warp spreads", 60.0,
            [&](Outcome& out) {
    PWSignal k1 = make_catalog(1, CatalogKind::K);
    spectra::SampleGrid grid{1, 256.0, 4096};
    auto oob_of = [&](const WarpExpr& w, double radius) {
      auto samples = spectra::sample_on_grid(
          [&](const Vector& t) { return k1.eval(w(t)); }, grid);
      auto spec = spectra::dft_spectrum(samples, grid, spectra::Window::Hann);
      return spectra::oob_energy(spec, radius);
    };
    double floor = oob_of(WarpExpr::identity(1), 1.0);
    require(out, floor > 0.0 && floor < 0.02, "reasonable floor");
    // Affine warps with operator norm <= 2.
    struct Aff { double a, b; };
    for (Aff c : {Aff{0.5, 0.2}, Aff{1.3, -0.7}, Aff{2.0, 0.4},
                  Aff{-1.7, 1.1}}) {
      Matrix A(1, 1);
      A << c.a;
      WarpExpr w = WarpExpr::affine_map(affine::AffineMap{A, vec1(c.b)});
      double oob = oob_of(w, std::abs(c.a));
      require(out, oob <= 10.0 * floor, "affine oob above 10x floor");
    }
    // t + 0.5 sin t: oracle run measured 33.9x on this grid; the frozen
    // regression threshold is 15x (and in any case well above 10x).
    double spread = oob_of(WarpExpr::coord_sine(1, 1, 0.5, 1.0), 1.0);
    require(out, spread > 15.0 * floor, "sine warp regression threshold");
    require(out, spread > 10.0 * floor, "sine warp above 10x floor");
    out.detail << " floor " << floor << ", sine ratio " << spread / floor;
  });

  // 4 -------------------------------------------------------------------
  criterion(4, "non-injective invariance and the decay violation", 0.0,
            [&](Outcome& out) {
    PWSignal k1 = make_catalog(1, CatalogKind::K);
    Matrix A(1, 2);
    A << 1.0, 1.0;
    std::vector<double> shifts{-100.0, -7.5, 0.0, 3.25, 11.0, 100.0};
    auto rep = analysis::kernel_invariance_check(k1, A, vec1(0.0), shifts);
    require(out, rep.kernel_dim == 1, "kernel dimension");
    require(out, rep.kernel_variance < 1e-20, "variance along (1,-1)/sqrt2");
    require(out, rep.constancy_ok, "constancy");
    require(out, std::abs(rep.value_at_offset - Complex(2.0, 0.0)) < 1e-14,
            "f(0) = 2");
    require(out, rep.decay_violation, "vanishing-at-infinity violation");
    out.detail << " variance " << rep.kernel_variance << ", f(b) "
               << rep.value_at_offset.real();
  });

  // 5 -------------------------------------------------------------------
  criterion(5, "decomposition exactness and spectrum projection", 0.0,
            [&](Outcome& out) {
    rng::SplitMix64 gen(1005);
    int done = 0;
    double worst = 0.0;
    while (done < 100) {
      int n = gen.uniform_int(1, 5);
      int m = gen.uniform_int(1, n);
      Matrix A(n, m);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < m; ++c) A(r, c) = gen.uniform(-1.0, 1.0);
      if (!affine::kernel_basis(A).empty()) continue;
      ++done;
      auto dec = affine::complete_to_invertible(A);
      double anorm = affine::AffineMap::linear(A).op_norm();
      double err = (dec.reconstruct() - A).cwiseAbs().maxCoeff();
      worst = std::max(worst, err / anorm);
      require(out, err <= 1e-12 * anorm, "Kmap^-1 S Q = A");
    }
    out.detail << " worst scaled entry error " << worst << ";";

    PWSignal k2 = make_catalog(2, CatalogKind::K);
    SpectralDensity g = affine::project_spectrum(k2.spectrum(), 1);
    double node_worst = 0.0;
    for (int k = 0; k < g.axes()[0].nodes; ++k)
      node_worst = std::max(node_worst,
                            std::abs(g.node_value({k}) - Complex(2.0, 0.0)));
    require(out, node_worst < 1e-13, "marginal equals 2 on [-1,1]");
    double eval_worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      double x = gen.uniform(-6.0, 6.0);
      Complex via = g.eval_time(vec1(x));
      double expect = 2.0 * (2.0 * sinc_safe(x));
      double tol = 4.0 * g.quad_error_bound(vec1(x)) + 1e-12;
      eval_worst = std::max(eval_worst, std::abs(via - expect));
      require(out, std::abs(via - Complex(expect, 0.0)) <= tol,
              "inverse transform matches K(x, 0)");
    }
    out.detail << " marginal node error " << node_worst
               << ", eval error " << eval_worst;
  });

  // 6 -------------------------------------------------------------------
  criterion(6, "exponential-type growth bound over the catalog", 0.0,
            [&](Outcome& out) {
    rng::SplitMix64 gen(1006);
    std::vector<Complex> zs;
    for (int k = 0; k < 64; ++k) {
      double rho = (k % 4 + 1) * 2.5;  // radii 2.5, 5, 7.5, 10
      double ang = 2.0 * kPi * k / 64.0;
      zs.emplace_back(rho * std::cos(ang), rho * std::sin(ang));
    }
    double min_margin = 1e300;
    for (int n = 1; n <= 3; ++n) {
      std::vector<PWSignal> signals;
      signals.push_back(make_catalog(n, CatalogKind::K));
      for (int j = 1; j <= n; ++j) {
        signals.push_back(make_catalog(n, CatalogKind::P, j));
        signals.push_back(make_catalog(n, CatalogKind::Q, j));
      }
      int lines = 50 / static_cast<int>(signals.size()) + 1;
      for (const PWSignal& f : signals) {
        for (int line = 0; line < lines; ++line) {
          Vector a = gen.vector(n, -2.0, 2.0);
          Vector b = gen.unit_vector(n);
          auto margins = analysis::exp_type_bound_margins(f, a, b, zs);
          for (double m : margins) {
            min_margin = std::min(min_margin, m);
            require(out, m >= -1e-8, "margin below -1e-8");
          }
        }
      }
    }
    // Closed-form case on a fine grid: F(i) = e - 1/e to 1e-10.
    BandSupport s = BandSupport::from_box({{-1.0, 1.0}});
    PWSignal g1 = PWSignal::spectral(SpectralDensity::from_function(
        s, 1 << 16, [](const Vector&) { return Complex(1.0, 0.0); }));
    Complex Fi = eval_pw_complex_on_line(g1, vec1(0.0), vec1(1.0),
                                         Complex(0.0, 1.0));
    double closed_err = std::abs(Fi - Complex(2.35040238728760291376, 0.0));
    require(out, closed_err < 1e-10, "F(i) = e - 1/e to 1e-10");
    out.detail << " min margin " << min_margin << ", F(i) error "
               << closed_err;
  });

  // 7 -------------------------------------------------------------------
  criterion(7, "phase-linearity detector and non-affine witnesses", 0.0,
            [&](Outcome& out) {
    rng::SplitMix64 gen(1007);
    auto xs = analysis::LineProbe::linspace(-3.0, 3.0, 801);
    std::vector<analysis::LineProbe> probes;
    for (int i = 0; i < 20; ++i)
      probes.emplace_back(gen.vector(2, -2.0, 2.0), gen.unit_vector(2), xs);
    Matrix A(2, 2);
    A << 1.2, -0.7, 0.4, 0.9;
    Vector b(2);
    b << 0.5, -1.0;
    WarpExpr affine_warp = WarpExpr::affine_map(affine::AffineMap{A, b});
    auto v1 = analysis::affinity_verdict(affine_warp, probes);
    require(out,
            v1.result == analysis::AffinityVerdict::Result::AffineConsistent,
            "affine verdict");
    require(out, v1.max_residual < 1e-8, "affine residual below 1e-8");
    auto v1_again = analysis::affinity_verdict(affine_warp, probes);
    require(out, v1_again.max_residual == v1.max_residual,
            "deterministic verdict");

    // Cataloged non-affine warps, each with a witness above 1e-2.
    {
      WarpExpr w = WarpExpr::coord_power(1, 1, 3);
      std::vector<analysis::LineProbe> p{analysis::LineProbe(
          vec1(0.0), vec1(1.0), analysis::LineProbe::linspace(0.1, 0.9, 801))};
      auto v = analysis::affinity_verdict(w, p);
      require(out, v.result == analysis::AffinityVerdict::Result::NonAffine,
              "cubic verdict");
      require(out, v.witness_residual > 1e-2, "cubic witness");
    }
    {
      WarpExpr w = WarpExpr::coord_sine(1, 1, 0.5, 1.0);
      std::vector<analysis::LineProbe> p{analysis::LineProbe(
          vec1(0.0), vec1(1.0), xs)};
      auto v = analysis::affinity_verdict(w, p);
      require(out, v.result == analysis::AffinityVerdict::Result::NonAffine,
              "sine verdict");
      require(out, v.witness_residual > 1e-2, "sine witness");
    }
    {
      Matrix swap(2, 2);
      swap << 0, 1, 1, 0;
      WarpExpr w = WarpExpr::affine_map(affine::AffineMap::linear(swap))
                       .then(WarpExpr::coord_power(2, 2, 2));
      std::vector<analysis::LineProbe> p;
      for (int i = 0; i < 5; ++i)
        p.emplace_back(gen.vector(2, -1.0, 1.0), gen.unit_vector(2),
                       analysis::LineProbe::linspace(-2.0, 2.0, 801));
      auto v = analysis::affinity_verdict(w, p);
      require(out, v.result == analysis::AffinityVerdict::Result::NonAffine,
              "swap-square verdict");
      require(out, v.witness_residual > 1e-2, "swap-square witness");
      require(out, v.witness_axis == 2, "swap-square witness axis");
    }
    out.detail << " affine residual " << v1.max_residual;
  });

  // 8 -------------------------------------------------------------------
  criterion(8, "repeated CLI runs are byte-identical", 0.0,
            [&](Outcome& out) {
    require(out, !pwcli.empty(), "pwcli path passed as argv[1]");
    if (pwcli.empty()) return;
    fs::path root = fs::temp_directory_path() / "pwtk_acceptance8";
    fs::remove_all(root);
    fs::create_directories(root);
    std::string config = R"({
  "kind": "verify-theorem",
  "seed": 424242,
  "dims": {"in": 1, "out": 1},
  "warp": [{"type": "coordinate-sine", "axis": 1, "amplitude": 0.5}],
  "grid": {"extent": 256.0, "nodes": 4096, "window": "hann"},
  "probes": {"count": 5, "points": 401},
  "strengths": [0.0, 1.0]
})";
    std::ofstream(root / "config.json") << config;
    for (const char* run : {"a", "b"}) {
      std::string cmd = "\"" + pwcli + "\" run --config \"" +
                        (root / "config.json").string() + "\" --out \"" +
                        (root / run).string() + "\" --emit-plots > \"" +
                        (root / run).string() + ".log\" 2>&1";
      int rc = std::system(cmd.c_str());
      require(out, rc == 0, std::string("CLI run ") + run);
    }
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
      fs::path other = root / "b" / entry.path().filename();
      require(out, fs::exists(other),
              "artifact missing in second run: " +
                  entry.path().filename().string());
      if (!fs::exists(other)) continue;
      require(out, slurp(entry.path()) == slurp(other),
              "artifact differs: " + entry.path().filename().string());
      ++compared;
    }
    require(out, compared >= 2, "at least result.json and spread.csv");
    out.detail << " " << compared << " artifacts compared";
  });

  std::printf("%d/8 criteria passed\n", 8 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
