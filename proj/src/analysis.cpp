#include "pw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pw/affine.hpp"
#include "pw/band_support.hpp"
#include "pw/errors.hpp"

namespace pw::analysis {

namespace {

constexpr double kZeroGuardRel = 1e-8;  // mask where |K| < 1e-8 K(0)

struct Run {
  int begin = 0;  // inclusive
  int end = 0;    // exclusive
  int length() const { return end - begin; }
};

// Least-squares affine fit over the unmasked points of all runs, with the
// per-run integer 2 pi offsets re-estimated against the current fit. Two
// rounds are enough: offsets are exact integers once the slope settles.
void fit_with_run_offsets(const std::vector<double>& xs,
                          std::vector<double>& psi,
                          const std::vector<Run>& runs, double& slope,
                          double& intercept, double& max_residual) {
  const Run* anchor_run =
      &*std::max_element(runs.begin(), runs.end(),
                         [](const Run& a, const Run& b) {
                           return a.length() < b.length();
                         });

  auto ls_fit = [&](const std::vector<const Run*>& use) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (const Run* r : use) {
      for (int i = r->begin; i < r->end; ++i) {
        sx += xs[i];
        sy += psi[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * psi[i];
        ++count;
      }
    }
    double denom = count * sxx - sx * sx;
    if (count < 2 || std::abs(denom) < 1e-300) {
      slope = 0.0;
      intercept = count ? sy / count : 0.0;
    } else {
      slope = (count * sxy - sx * sy) / denom;
      intercept = (sy - slope * sx) / count;
    }
  };

  ls_fit({anchor_run});
  for (int round = 0; round < 2; ++round) {
    for (const Run& r : runs) {
      double mean_gap = 0.0;
      for (int i = r.begin; i < r.end; ++i)
        mean_gap += (slope * xs[i] + intercept) - psi[i];
      mean_gap /= r.length();
      double k = std::round(mean_gap / (2.0 * kPi));
      if (k != 0.0) {
        for (int i = r.begin; i < r.end; ++i) psi[i] += 2.0 * kPi * k;
      }
    }
    std::vector<const Run*> all;
    for (const Run& r : runs) all.push_back(&r);
    ls_fit(all);
  }

  max_residual = 0.0;
  for (const Run& r : runs) {
    for (int i = r.begin; i < r.end; ++i) {
      max_residual =
          std::max(max_residual, std::abs(psi[i] - (slope * xs[i] + intercept)));
    }
  }
}

}  // namespace

LineProbe::LineProbe(Vector anchor_, Vector direction_, std::vector<double> xs)
    : anchor(std::move(anchor_)),
      direction(std::move(direction_)),
      abscissas(std::move(xs)) {
  if (anchor.size() != direction.size())
    throw Error(ErrorCode::DimensionError, "LineProbe: dim mismatch");
  double nrm = direction.norm();
  if (nrm < 1e-12)
    throw Error(ErrorCode::DegenerateLine, "LineProbe: zero direction");
  direction /= nrm;
  if (abscissas.size() < 2)
    throw Error(ErrorCode::Precondition, "LineProbe: need >= 2 abscissas");
  for (std::size_t i = 1; i < abscissas.size(); ++i)
    if (!(abscissas[i] > abscissas[i - 1]))
      throw Error(ErrorCode::Precondition,
                  "LineProbe: abscissas must be strictly increasing");
}

std::vector<double> LineProbe::linspace(double lo, double hi, int count) {
  std::vector<double> xs(count);
  for (int i = 0; i < count; ++i)
    xs[i] = lo + (hi - lo) * i / (count - 1);
  return xs;
}

PhaseProfile warp_phase_profile(const WarpExpr& warp, const LineProbe& probe,
                                int axis) {
  if (probe.dim() != warp.dim_in())
    throw Error(ErrorCode::DimensionError,
                "warp_phase_profile: probe dim != warp domain dim");
  const int n = warp.dim_out();
  if (axis < 1 || axis > n)
    throw Error(ErrorCode::IndexError, "warp_phase_profile: axis out of range");

  const int N = static_cast<int>(probe.abscissas.size());
  const Vector phi0 = warp(probe.point(0.0));
  const double k_zero = std::pow(2.0, n);  // K(0)

  PhaseProfile prof;
  prof.abscissas = probe.abscissas;
  prof.phase.assign(N, 0.0);
  prof.masked.assign(N, true);

  std::vector<double> raw(N, 0.0);
  for (int i = 0; i < N; ++i) {
    Vector delta = warp(probe.point(probe.abscissas[i])) - phi0;
    double K = catalog_closed_K(delta);
    if (std::abs(K) < kZeroGuardRel * k_zero) continue;  // exceptional set
    Complex Q = catalog_closed_Q(delta, axis);
    raw[i] = std::arg(Q / K);
    prof.masked[i] = false;
  }

  // Unwrap within each maximal unmasked run.
  std::vector<Run> runs;
  int i = 0;
  while (i < N) {
    if (prof.masked[i]) {
      ++i;
      continue;
    }
    Run run{i, i + 1};
    prof.phase[i] = raw[i];
    while (run.end < N && !prof.masked[run.end]) {
      int k = run.end;
      double inc = raw[k] - raw[k - 1];
      inc -= 2.0 * kPi * std::round(inc / (2.0 * kPi));
      // Increments this close to pi make the 2 pi branch ambiguous.
      if (std::abs(inc) >= kPi * (1.0 - 1e-3))
        throw Error(ErrorCode::ResolutionTooCoarse,
                    "warp_phase_profile: phase increment within 0.1% of pi "
                    "is ambiguous; use denser abscissas");
      prof.phase[k] = prof.phase[k - 1] + inc;
      ++run.end;
    }
    runs.push_back(run);
    i = run.end;
  }
  if (runs.empty())
    throw Error(ErrorCode::DegenerateLine,
                "warp_phase_profile: all abscissas masked by the zero guard");
  prof.run_count = static_cast<int>(runs.size());

  fit_with_run_offsets(prof.abscissas, prof.phase, runs, prof.fit_slope,
                       prof.fit_intercept, prof.max_residual);
  return prof;
}

AffinityVerdict affinity_verdict(const WarpExpr& warp,
                                 const std::vector<LineProbe>& probes,
                                 double affine_tol, double nonaffine_tol) {
  if (probes.empty())
    throw Error(ErrorCode::Precondition, "affinity_verdict: no probes");
  AffinityVerdict v;
  v.affine_tol = affine_tol;
  v.nonaffine_tol = nonaffine_tol;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    for (int j = 1; j <= warp.dim_out(); ++j) {
      PhaseProfile prof = warp_phase_profile(warp, probes[p], j);
      if (prof.max_residual > v.max_residual) {
        v.max_residual = prof.max_residual;
        v.witness_probe = static_cast<int>(p);
        v.witness_axis = j;
        v.witness_residual = prof.max_residual;
      }
    }
  }
  if (v.max_residual >= nonaffine_tol) {
    v.result = AffinityVerdict::Result::NonAffine;
  } else if (v.max_residual <= affine_tol) {
    v.result = AffinityVerdict::Result::AffineConsistent;
    v.witness_probe = -1;
    v.witness_axis = -1;
    v.witness_residual = 0.0;
  } else {
    v.result = AffinityVerdict::Result::Inconclusive;
  }
  return v;
}

std::vector<double> exp_type_bound_margins(const PWSignal& f, const Vector& a,
                                           const Vector& b,
                                           const std::vector<Complex>& zs) {
  const double r = f.support().ball_radius();
  const double vol = ball_volume(f.dim(), r);
  const double bound_const = std::sqrt(vol) * f.spectrum().l2_norm();
  const double blen = b.norm();
  std::vector<double> margins;
  margins.reserve(zs.size());
  for (Complex z : zs) {
    Complex F = eval_pw_complex_on_line(f, a, b, z);
    double bound = std::exp(r * blen * std::abs(z)) * bound_const;
    margins.push_back(bound - std::abs(F));
  }
  return margins;
}

KernelInvarianceReport kernel_invariance_check(
    const PWSignal& f, const Matrix& A, const Vector& b,
    const std::vector<double>& shifts) {
  if (A.rows() != f.dim())
    throw Error(ErrorCode::DimensionError,
                "kernel_invariance_check: matrix rows != signal dim");
  auto kb = affine::kernel_basis(A);
  if (kb.empty())
    throw Error(ErrorCode::WrongRegime,
                "kernel_invariance_check: map is injective; this is the "
                "compose_affine regime");

  KernelInvarianceReport rep;
  rep.kernel_dim = static_cast<int>(kb.size());
  rep.value_at_offset = f.eval(b);

  const int m = static_cast<int>(A.cols());
  std::vector<Vector> base_points = {Vector::Zero(m)};
  {
    Vector t1 = Vector::Constant(m, 0.7);
    Vector t2(m);
    for (int i = 0; i < m; ++i) t2[i] = (i % 2 == 0) ? -1.3 : 0.4;
    base_points.push_back(t1);
    base_points.push_back(t2);
  }

  std::vector<double> origin_vals;
  for (const Vector& t0 : base_points) {
    Complex ref = f.eval(A * t0 + b);
    for (const Vector& v : kb) {
      for (double s : shifts) {
        Complex val = f.eval(A * (t0 + s * v) + b);
        rep.max_deviation =
            std::max(rep.max_deviation, std::abs(val - ref));
        if (t0.isZero()) origin_vals.push_back(std::abs(val));
      }
    }
  }
  if (!origin_vals.empty()) {
    double mean = std::accumulate(origin_vals.begin(), origin_vals.end(), 0.0) /
                  origin_vals.size();
    double var = 0.0;
    for (double v : origin_vals) var += (v - mean) * (v - mean);
    rep.kernel_variance = var / origin_vals.size();
  }
  rep.constancy_ok = rep.max_deviation < 1e-12;
  rep.decay_violation = std::abs(rep.value_at_offset) > 1e-12;
  return rep;
}

std::vector<SpreadRow> nonaffine_spread(
    const std::vector<std::pair<double, WarpExpr>>& family, const PWSignal& f,
    const spectra::SampleGrid& grid, double r, spectra::Window window) {
  if (family.empty())
    throw Error(ErrorCode::Precondition, "nonaffine_spread: empty family");
  if (!family.front().second.as_affine())
    throw Error(ErrorCode::Precondition,
                "nonaffine_spread: the control member must be affine");
  std::vector<SpreadRow> rows;
  rows.reserve(family.size());
  for (const auto& [strength, warp] : family) {
    if (warp.dim_in() != grid.dim || warp.dim_out() != f.dim())
      throw Error(ErrorCode::DimensionError,
                  "nonaffine_spread: warp dims do not match grid/signal");
    auto samples = spectra::sample_on_grid(
        [&](const Vector& t) { return f.eval(warp(t)); }, grid);
    auto spec = spectra::dft_spectrum(samples, grid, window);
    rows.push_back(SpreadRow{strength, spectra::oob_energy(spec, r), r});
  }
  return rows;
}

}  // namespace pw::analysis
