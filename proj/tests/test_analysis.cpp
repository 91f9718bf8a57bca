#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pw/analysis.hpp"
#include "pw/errors.hpp"
#include "pw/rng.hpp"
#include "pw/signal.hpp"

using namespace pw;
using namespace pw::analysis;

namespace {

Vector vec1(double x) {
  Vector v(1);
  v << x;
  return v;
}

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

affine::AffineMap affine1(double a, double b) {
  Matrix A(1, 1);
  A << a;
  Vector off(1);
  off << b;
  return affine::AffineMap{A, off};
}

// Independent least-squares oracle over (x, y) pairs: returns the max
// absolute residual of the best affine fit.
double ls_max_residual(const std::vector<double>& xs,
                       const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double icept = (sy - slope * sx) / n;
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    worst = std::max(worst, std::abs(ys[i] - (slope * xs[i] + icept)));
  return worst;
}

}  // namespace

TEST_CASE("LineProbe validation") {
  auto xs = LineProbe::linspace(-1.0, 1.0, 11);
  CHECK_THROWS_AS(LineProbe(vec2(0, 0), vec2(0, 0), xs), Error);
  CHECK_THROWS_AS(LineProbe(vec1(0), vec1(1), {0.0, 0.0, 1.0}), Error);
  LineProbe p(vec2(1, 1), vec2(3, 4), xs);
  CHECK(p.direction.norm() == doctest::Approx(1.0));
  CHECK(p.point(2.0)[0] == doctest::Approx(1.0 + 2.0 * 0.6));
}

TEST_CASE("identity warp gives psi(x) = x on a short line") {
  WarpExpr id = WarpExpr::identity(2);
  LineProbe probe(vec2(0, 0), vec2(0, 1),
                  LineProbe::linspace(-1.5, 1.5, 301));
  PhaseProfile prof = warp_phase_profile(id, probe, 2);
  CHECK(prof.max_residual < 1e-9);
  CHECK(prof.fit_slope == doctest::Approx(1.0).epsilon(1e-9));
  // psi follows the axis-2 displacement x itself.
  for (std::size_t i = 0; i < prof.abscissas.size(); i += 50) {
    if (!prof.masked[i])
      CHECK(std::abs(prof.phase[i] - prof.abscissas[i]) < 1e-9);
  }
}

TEST_CASE("affine warps stay below the affine tolerance, with masking") {
  rng::SplitMix64 gen(21);
  auto xs = LineProbe::linspace(-3.0, 3.0, 801);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix A(2, 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) A(r, c) = gen.uniform(-2.0, 2.0);
    Vector b = gen.vector(2, -2.0, 2.0);
    WarpExpr w = WarpExpr::affine_map(affine::AffineMap{A, b});
    LineProbe probe(gen.vector(2, -2.0, 2.0), gen.unit_vector(2), xs);
    for (int j = 1; j <= 2; ++j) {
      PhaseProfile prof = warp_phase_profile(w, probe, j);
      CHECK(prof.max_residual < 1e-8);
      double expected_slope = (A * probe.direction)[j - 1];
      CHECK(std::abs(prof.fit_slope - expected_slope) < 1e-8);
    }
  }
}

TEST_CASE("long affine lines split into several unmasked runs") {
  // Slope 2 with abscissas on multiples of pi/400: the nodes at k pi/2 land
  // inside the zero guard of K, splitting the line into runs.
  WarpExpr w = WarpExpr::affine_map(affine1(2.0, 0.3));
  LineProbe probe(vec1(0.0), vec1(1.0),
                  LineProbe::linspace(-2.0 * kPi, 2.0 * kPi, 1601));
  PhaseProfile prof = warp_phase_profile(w, probe, 1);
  CHECK(prof.run_count > 1);
  CHECK(prof.max_residual < 1e-8);
  CHECK(prof.fit_slope == doctest::Approx(2.0).epsilon(1e-10));
  int masked = 0;
  for (bool m : prof.masked) masked += m ? 1 : 0;
  CHECK(masked > 0);
}

TEST_CASE("unwrapping reconstructs the raw ratio to 1e-12") {
  WarpExpr w = WarpExpr::affine_map(affine1(1.7, -0.4));
  LineProbe probe(vec1(0.2), vec1(1.0), LineProbe::linspace(-5.0, 5.0, 1201));
  PhaseProfile prof = warp_phase_profile(w, probe, 1);
  const Vector phi0 = w(probe.point(0.0));
  for (std::size_t i = 0; i < prof.abscissas.size(); i += 7) {
    if (prof.masked[i]) continue;
    Vector delta = w(probe.point(prof.abscissas[i])) - phi0;
    Complex ratio =
        catalog_closed_Q(delta, 1) / Complex(catalog_closed_K(delta), 0.0);
    ratio /= std::abs(ratio);
    Complex rec = std::exp(Complex(0.0, prof.phase[i]));
    CHECK(std::abs(rec - ratio) < 1e-12);
  }
}

TEST_CASE("cubic warp produces a large residual on [0.1, 0.9]") {
  WarpExpr w = WarpExpr::coord_power(1, 1, 3);
  auto xs = LineProbe::linspace(0.1, 0.9, 801);
  LineProbe probe(vec1(0.0), vec1(1.0), xs);
  PhaseProfile prof = warp_phase_profile(w, probe, 1);
  // psi(x) = x^3 here; compare against the independent LS oracle and the
  // equioscillation lower bound 0.12206 for any affine approximation.
  std::vector<double> ys;
  for (double x : xs) ys.push_back(x * x * x);
  double oracle = ls_max_residual(xs, ys);
  CHECK(prof.max_residual == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(prof.max_residual > 1e-2);
  CHECK(prof.max_residual >= 0.12206);
}

TEST_CASE("fully masked lines raise the degenerate-line error") {
  WarpExpr w = WarpExpr::affine_map(affine1(1e9, 0.0));
  LineProbe probe(vec1(0.0), vec1(1.0), LineProbe::linspace(1.0, 2.0, 51));
  CHECK_THROWS_AS(warp_phase_profile(w, probe, 1), Error);
  try {
    warp_phase_profile(w, probe, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateLine);
  }
}

TEST_CASE("ambiguous phase increments raise the resolution error") {
  // Increments of pi - 1e-4: inside the ambiguity guard but far enough
  // from the K zeros that the points stay unmasked.
  double dx = 6.0 / 800.0;
  WarpExpr w = WarpExpr::affine_map(affine1((kPi - 1e-4) / dx, 0.0));
  LineProbe probe(vec1(0.0), vec1(1.0), LineProbe::linspace(-3.0, 3.0, 801));
  try {
    warp_phase_profile(w, probe, 1);
    FAIL("expected resolution error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResolutionTooCoarse);
  }
}

TEST_CASE("affinity_verdict: affine maps are affine-consistent") {
  rng::SplitMix64 gen(22);
  Matrix A(2, 2);
  A << 1.2, -0.7, 0.4, 0.9;
  WarpExpr w = WarpExpr::affine_map(affine::AffineMap{A, vec2(0.5, -1.0)});
  std::vector<LineProbe> probes;
  auto xs = LineProbe::linspace(-3.0, 3.0, 801);
  for (int i = 0; i < 20; ++i)
    probes.emplace_back(gen.vector(2, -2.0, 2.0), gen.unit_vector(2), xs);
  AffinityVerdict v = affinity_verdict(w, probes);
  CHECK(v.result == AffinityVerdict::Result::AffineConsistent);
  CHECK(v.max_residual < 1e-8);
}

TEST_CASE("affinity_verdict: sine warp is non-affine with a witness") {
  WarpExpr w = WarpExpr::coord_sine(1, 1, 0.5, 1.0);
  std::vector<LineProbe> probes;
  probes.emplace_back(vec1(0.0), vec1(1.0),
                      LineProbe::linspace(-3.0, 3.0, 801));
  AffinityVerdict v = affinity_verdict(w, probes);
  CHECK(v.result == AffinityVerdict::Result::NonAffine);
  CHECK(v.witness_axis == 1);
  CHECK(v.witness_probe == 0);
  // LS residual of 0.5 sin x over [-3, 3] is about 0.447.
  CHECK(v.witness_residual > 0.4);
}

TEST_CASE("affinity_verdict: coordinate swap with squaring flags axis 2") {
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  WarpExpr w = WarpExpr::affine_map(affine::AffineMap::linear(swap))
                   .then(WarpExpr::coord_power(2, 2, 2));
  rng::SplitMix64 gen(23);
  std::vector<LineProbe> probes;
  auto xs = LineProbe::linspace(-2.0, 2.0, 801);
  for (int i = 0; i < 5; ++i)
    probes.emplace_back(gen.vector(2, -1.0, 1.0), gen.unit_vector(2), xs);
  AffinityVerdict v = affinity_verdict(w, probes);
  CHECK(v.result == AffinityVerdict::Result::NonAffine);
  CHECK(v.witness_axis == 2);
}

TEST_CASE("affinity_verdict: tiny perturbations land in the gap") {
  WarpExpr w = WarpExpr::coord_sine(1, 1, 1e-3, 1.0);
  std::vector<LineProbe> probes;
  probes.emplace_back(vec1(0.0), vec1(1.0),
                      LineProbe::linspace(-3.0, 3.0, 801));
  AffinityVerdict v = affinity_verdict(w, probes);
  CHECK(v.result == AffinityVerdict::Result::Inconclusive);
}

TEST_CASE("affinity_verdict rejects an empty probe list") {
  WarpExpr w = WarpExpr::identity(1);
  CHECK_THROWS_AS(affinity_verdict(w, {}), Error);
}

TEST_CASE("growth bound margin at z = 0 is the Cauchy gap") {
  PWSignal k2 = make_catalog(2, CatalogKind::K);
  rng::SplitMix64 gen(24);
  for (int i = 0; i < 10; ++i) {
    Vector a = gen.vector(2, -3.0, 3.0);
    Vector b = gen.unit_vector(2);
    auto margins =
        exp_type_bound_margins(k2, a, b, {Complex(0.0, 0.0)});
    REQUIRE(margins.size() == 1);
    CHECK(margins[0] >= -1e-8);
  }
}

TEST_CASE("growth bound: frozen 1D closed-form case at z = i") {
  BandSupport s = BandSupport::from_box({{-1.0, 1.0}});
  PWSignal g1 = PWSignal::spectral(SpectralDensity::from_function(
      s, 1024, [](const Vector&) { return Complex(1.0, 0.0); }));
  auto margins = exp_type_bound_margins(g1, vec1(0.0), vec1(1.0),
                                        {Complex(0.0, 1.0)});
  // Bound 2e, |F(i)| = e - 1/e, margin e + 1/e = 3.08616126963048755696.
  CHECK(margins[0] == doctest::Approx(3.08616126963048755696).epsilon(1e-6));
}

TEST_CASE("growth bound margins stay nonnegative over catalogs") {
  rng::SplitMix64 gen(25);
  std::vector<Complex> zs;
  for (int k = 0; k < 16; ++k) {
    double rho = (k % 2 == 0) ? 10.0 : 3.0;
    double ang = 2.0 * kPi * k / 16.0;
    zs.emplace_back(rho * std::cos(ang), rho * std::sin(ang));
  }
  for (int n = 1; n <= 3; ++n) {
    for (CatalogKind kind :
         {CatalogKind::K, CatalogKind::P, CatalogKind::Q}) {
      PWSignal f = make_catalog(n, kind, 1);
      for (int line = 0; line < 10; ++line) {
        Vector a = gen.vector(n, -2.0, 2.0);
        Vector b = gen.unit_vector(n);
        auto margins = exp_type_bound_margins(f, a, b, zs);
        for (double m : margins) CHECK(m >= -1e-8);
      }
    }
  }
}

TEST_CASE("kernel invariance for A = [1 1] with the 1D sinc") {
  PWSignal k1 = make_catalog(1, CatalogKind::K);
  Matrix A(1, 2);
  A << 1.0, 1.0;
  std::vector<double> shifts{-40.0, -7.5, 0.0, 3.25, 11.0, 100.0};
  KernelInvarianceReport rep =
      kernel_invariance_check(k1, A, vec1(0.0), shifts);
  CHECK(rep.kernel_dim == 1);
  CHECK(rep.max_deviation < 1e-12);
  CHECK(rep.constancy_ok);
  CHECK(rep.kernel_variance < 1e-20);
  CHECK(std::abs(rep.value_at_offset - Complex(2.0, 0.0)) < 1e-14);
  CHECK(rep.decay_violation);  // f(0) = 2 != 0
}

TEST_CASE("kernel invariance with f(b) = 0 raises no violation") {
  PWSignal k1 = make_catalog(1, CatalogKind::K);
  Matrix A(1, 2);
  A << 1.0, 1.0;
  KernelInvarianceReport rep =
      kernel_invariance_check(k1, A, vec1(kPi), {0.0, 1.0, 2.0});
  CHECK_FALSE(rep.decay_violation);  // f(pi) = 0
  CHECK(rep.constancy_ok);
}

TEST_CASE("kernel invariance with shifts = {0} trivially passes") {
  PWSignal k1 = make_catalog(1, CatalogKind::K);
  Matrix A(1, 2);
  A << 2.0, -2.0;
  KernelInvarianceReport rep =
      kernel_invariance_check(k1, A, vec1(0.3), {0.0});
  CHECK(rep.max_deviation < 1e-15);
}

TEST_CASE("kernel invariance rejects injective maps") {
  PWSignal k1 = make_catalog(1, CatalogKind::K);
  Matrix A(1, 1);
  A << 2.0;
  try {
    kernel_invariance_check(k1, A, vec1(0.0), {1.0});
    FAIL("expected wrong-regime error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongRegime);
  }
}

TEST_CASE("nonaffine_spread: sine family spreads, control sits at floor") {
  PWSignal k1 = make_catalog(1, CatalogKind::K);
  spectra::SampleGrid grid{1, 256.0, 4096};
  std::vector<std::pair<double, WarpExpr>> family;
  family.emplace_back(0.0, WarpExpr::identity(1));
  family.emplace_back(0.25, WarpExpr::coord_sine(1, 1, 0.25, 1.0));
  family.emplace_back(0.5, WarpExpr::coord_sine(1, 1, 0.5, 1.0));
  auto rows = nonaffine_spread(family, k1, grid, 1.0);
  REQUIRE(rows.size() == 3);
  double floor = rows[0].oob;
  CHECK(floor < 0.02);
  // Oracle run on this grid: ratios 8.1x (eps 0.25) and 33.9x (eps 0.5).
  CHECK(rows[1].oob > 4.0 * floor);
  CHECK(rows[2].oob > 10.0 * floor);
  CHECK(rows[2].oob > rows[1].oob);  // spreading grows with strength
}

TEST_CASE("nonaffine_spread requires an affine control") {
  PWSignal k1 = make_catalog(1, CatalogKind::K);
  spectra::SampleGrid grid{1, 64.0, 512};
  std::vector<std::pair<double, WarpExpr>> family;
  family.emplace_back(0.5, WarpExpr::coord_sine(1, 1, 0.5, 1.0));
  CHECK_THROWS_AS(nonaffine_spread(family, k1, grid, 1.0), Error);
}

TEST_CASE("pure rescaling stays at the floor at the rescaled radius") {
  PWSignal k1 = make_catalog(1, CatalogKind::K);
  spectra::SampleGrid grid{1, 256.0, 4096};
  double floor = 0.0;
  for (double eps : {0.0, 0.25, 0.5}) {
    WarpExpr w = WarpExpr::affine_map(affine1(1.0 + eps, 0.0));
    auto samples = spectra::sample_on_grid(
        [&](const Vector& t) { return k1.eval(w(t)); }, grid);
    auto spec = spectra::dft_spectrum(samples, grid, spectra::Window::Hann);
    double oob = spectra::oob_energy(spec, 1.0 + eps);
    if (eps == 0.0) {
      floor = oob;
    } else {
      CHECK(oob <= 10.0 * floor);
    }
  }
}

TEST_CASE("all-affine warp chains collapse to one affine map") {
  Matrix A1(2, 2), A2(2, 2);
  A1 << 1, 2, 0, 1;
  A2 << 0, -1, 1, 0;
  Vector b1(2), b2(2);
  b1 << 0.5, -1.0;
  b2 << 2.0, 0.0;
  WarpExpr w = WarpExpr::affine_map(affine::AffineMap{A1, b1})
                   .then(WarpExpr::affine_map(affine::AffineMap{A2, b2}))
                   .then(WarpExpr::coord_power(2, 1, 1))
                   .then(WarpExpr::coord_sine(2, 2, 0.0, 3.0));
  auto collapsed = w.as_affine();
  REQUIRE(collapsed.has_value());
  CHECK((collapsed->A - A2 * A1).cwiseAbs().maxCoeff() == 0.0);
  CHECK((collapsed->b - (A2 * b1 + b2)).cwiseAbs().maxCoeff() == 0.0);
  Vector t = vec2(0.3, -0.8);
  CHECK(((*collapsed)(t) - w(t)).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_FALSE(WarpExpr::coord_sine(1, 1, 0.5, 1.0).as_affine().has_value());
  CHECK_FALSE(WarpExpr::coord_power(1, 1, 2).as_affine().has_value());
  CHECK_THROWS_AS(
      WarpExpr::identity(2).then(WarpExpr::identity(3)), Error);
}

TEST_CASE("warp expression evaluation applies steps in order") {
  // (t2, t1) then square axis 2, so t -> (t2, t1^2).
  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  WarpExpr w = WarpExpr::affine_map(affine::AffineMap::linear(swap))
                   .then(WarpExpr::coord_power(2, 2, 2));
  Vector y = w(vec2(3.0, -2.0));
  CHECK(y[0] == doctest::Approx(-2.0));
  CHECK(y[1] == doctest::Approx(9.0));
}
