#pragma once

#include <vector>

#include "pw/signal.hpp"
#include "pw/spectra.hpp"
#include "pw/types.hpp"
#include "pw/warp.hpp"

namespace pw::analysis {

// An affine line l(x) = anchor + x * direction with sampled abscissas.
// The direction is normalized on construction; abscissas must be strictly
// increasing and dense enough that phase increments stay below pi.
struct LineProbe {
  Vector anchor;
  Vector direction;
  std::vector<double> abscissas;

  LineProbe(Vector anchor_, Vector direction_, std::vector<double> xs);
  int dim() const { return static_cast<int>(anchor.size()); }
  Vector point(double x) const { return anchor + x * direction; }

  static std::vector<double> linspace(double lo, double hi, int count);
};

// Unwrapped phase of Q_j(delta(x)) / K(delta(x)) along a probe, where
// delta(x) = warp(l(x)) - warp(l(0)). Abscissas where |K| falls under the
// zero guard are masked; unwrapping restarts on each unmasked run and the
// per-run 2 pi k offset is absorbed into the affine fit.
struct PhaseProfile {
  std::vector<double> abscissas;
  std::vector<double> phase;   // unwrapped, fit-aligned; 0 at masked points
  std::vector<bool> masked;
  double fit_slope = 0.0;
  double fit_intercept = 0.0;
  double max_residual = 0.0;   // max |phase - fit| over unmasked points
  int run_count = 0;
};

PhaseProfile warp_phase_profile(const WarpExpr& warp, const LineProbe& probe,
                                int axis);

struct AffinityVerdict {
  enum class Result { AffineConsistent, NonAffine, Inconclusive };

  Result result = Result::Inconclusive;
  double max_residual = 0.0;
  // Witness of non-affinity (indices into the probe list / axes).
  int witness_probe = -1;
  int witness_axis = -1;
  double witness_residual = 0.0;
  double affine_tol = 0.0;
  double nonaffine_tol = 0.0;
};

// Finitely many lines: AffineConsistent is evidence, not proof. Residuals
// between the two tolerances land in the deliberate indeterminate zone.
AffinityVerdict affinity_verdict(const WarpExpr& warp,
                                 const std::vector<LineProbe>& probes,
                                 double affine_tol = 1e-6,
                                 double nonaffine_tol = 1e-2);

// For each z: exp(r |b| |z|) |B|^{1/2} ||g||_2 - |F(z)|, where F is the
// entire extension of x -> f(a + x b) and |B| the volume of the support
// ball. Nonnegative margins (up to quadrature noise) realize the
// exponential-type growth bound.
std::vector<double> exp_type_bound_margins(const PWSignal& f, const Vector& a,
                                           const Vector& b,
                                           const std::vector<Complex>& zs);

struct KernelInvarianceReport {
  double max_deviation = 0.0;      // sup |f(A(t+sv)+b) - f(At+b)|
  double kernel_variance = 0.0;    // variance of f along kernel shifts at 0
  Complex value_at_offset{0.0, 0.0};  // f(b)
  bool constancy_ok = false;
  bool decay_violation = false;    // |f(b)| > 0: f(At+b) cannot vanish at
                                   // infinity along the kernel
  int kernel_dim = 0;
};

// Requires a non-injective A; injective maps are the compose_affine regime.
KernelInvarianceReport kernel_invariance_check(
    const PWSignal& f, const Matrix& A, const Vector& b,
    const std::vector<double>& shifts);

struct SpreadRow {
  double strength = 0.0;
  double oob = 0.0;
  double band_radius = 0.0;
};

// Samples f after each family member, estimates spectra and records the
// out-of-band fraction at `r`. The first member must be affine: its row is
// the measured leakage floor all others are compared against.
std::vector<SpreadRow> nonaffine_spread(
    const std::vector<std::pair<double, WarpExpr>>& family, const PWSignal& f,
    const spectra::SampleGrid& grid, double r,
    spectra::Window window = spectra::Window::Hann);

}  // namespace pw::analysis
