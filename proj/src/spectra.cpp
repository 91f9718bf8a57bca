#include "pw/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pw/errors.hpp"
#include "pw/fft.hpp"
#include "pw/rng.hpp"

namespace pw::spectra {

namespace {

void check_grid(const SampleGrid& grid) {
  if (grid.dim < 1)
    throw Error(ErrorCode::DimensionError, "SampleGrid: dim < 1");
  if (grid.nodes < 2)
    throw Error(ErrorCode::Precondition, "SampleGrid: need at least 2 nodes");
  if (!(grid.extent > 0.0))
    throw Error(ErrorCode::Precondition, "SampleGrid: extent must be > 0");
  if (grid.total_nodes() > kMaxGridNodes)
    throw Error(ErrorCode::ResourceLimit,
                "SampleGrid: node count exceeds memory budget");
}

}  // namespace

std::size_t SampleGrid::total_nodes() const {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) {
    total *= static_cast<std::size_t>(nodes);
    if (total > kMaxGridNodes) return total;
  }
  return total;
}

double SampleGrid::nyquist_radius() const {
  return std::sqrt(static_cast<double>(dim)) * nyquist();
}

std::vector<Complex> sample_on_grid(const Evaluable& f,
                                    const SampleGrid& grid) {
  check_grid(grid);
  std::vector<Complex> out;
  out.reserve(grid.total_nodes());
  std::vector<int> idx(grid.dim, 0);
  Vector t(grid.dim);
  for (;;) {
    for (int a = 0; a < grid.dim; ++a) t[a] = grid.node(idx[a]);
    out.push_back(f(t));
    int a = grid.dim - 1;
    for (; a >= 0; --a) {
      if (++idx[a] < grid.nodes) break;
      idx[a] = 0;
    }
    if (a < 0) break;
  }
  return out;
}

std::vector<Complex> sample_signal(const PWSignal& f, const SampleGrid& grid) {
  check_grid(grid);
  if (f.dim() != grid.dim)
    throw Error(ErrorCode::DimensionError, "sample_signal: dim mismatch");
  double claimed = f.support().ball_radius();
  if (grid.nyquist() < 2.0 * claimed)
    throw Error(ErrorCode::Precondition,
                "sample_signal: Nyquist limit below twice the claimed band "
                "radius");
  return sample_on_grid([&](const Vector& t) { return f.eval(t); }, grid);
}

DiscreteSpectrum::DiscreteSpectrum(int dim,
                                   std::vector<std::vector<double>> freq_axes,
                                   std::vector<double> power)
    : dim_(dim), freqs_(std::move(freq_axes)), power_(std::move(power)) {
  std::size_t total = 1;
  for (const auto& f : freqs_) total *= f.size();
  if (total != power_.size())
    throw Error(ErrorCode::DimensionError,
                "DiscreteSpectrum: power size != bin count");
  total_ = std::accumulate(power_.begin(), power_.end(), 0.0);
}

double DiscreteSpectrum::bin_radius(std::size_t flat) const {
  double sq = 0.0;
  for (int a = dim_ - 1; a >= 0; --a) {
    std::size_t n = freqs_[a].size();
    double u = freqs_[a][flat % n];
    sq += u * u;
    flat /= n;
  }
  return std::sqrt(sq);
}

DiscreteSpectrum dft_spectrum(const std::vector<Complex>& samples,
                              const SampleGrid& grid, Window window) {
  check_grid(grid);
  const std::size_t total = grid.total_nodes();
  if (samples.size() != total)
    throw Error(ErrorCode::DimensionError,
                "dft_spectrum: sample count != grid size");
  const int N = grid.nodes;
  const int n = grid.dim;

  std::vector<Complex> work = samples;
  if (window == Window::Hann) {
    // Periodic Hann per axis; an on-bin tone then leaks only to the two
    // neighbouring bins.
    std::vector<double> w(N);
    for (int k = 0; k < N; ++k)
      w[k] = 0.5 * (1.0 - std::cos(2.0 * kPi * k / N));
    std::vector<int> idx(n, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      double ww = 1.0;
      for (int a = 0; a < n; ++a) ww *= w[idx[a]];
      work[flat] *= ww;
      for (int a = n - 1; a >= 0; --a) {
        if (++idx[a] < N) break;
        idx[a] = 0;
      }
    }
  }

  // FFT along each axis of the row-major cube.
  std::size_t stride = 1;  // stride of the last axis is 1
  for (int a = n - 1; a >= 0; --a) {
    std::size_t outer = total / static_cast<std::size_t>(N);
    std::vector<Complex> line(N);
    for (std::size_t o = 0; o < outer; ++o) {
      // Decompose o into (block, offset) around the transformed axis.
      std::size_t block = o / stride;
      std::size_t offset = o % stride;
      std::size_t base = block * stride * static_cast<std::size_t>(N) + offset;
      for (int k = 0; k < N; ++k)
        line[k] = work[base + static_cast<std::size_t>(k) * stride];
      fft::transform(line, false);
      for (int k = 0; k < N; ++k)
        work[base + static_cast<std::size_t>(k) * stride] = line[k];
    }
    stride *= static_cast<std::size_t>(N);
  }

  // Signed frequencies in increasing order (fftshift layout).
  const double du = grid.freq_resolution();
  std::vector<double> freqs(N);
  std::vector<int> shift(N);  // output bin -> FFT index
  const int half = N / 2;
  for (int j = 0; j < N; ++j) {
    int signed_idx = j - half;
    freqs[j] = du * signed_idx;
    shift[j] = (signed_idx + N) % N;
  }

  std::vector<double> power(total, 0.0);
  const double norm = 1.0 / static_cast<double>(total);
  std::vector<int> idx(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t src = 0;
    for (int a = 0; a < n; ++a)
      src = src * static_cast<std::size_t>(N) +
            static_cast<std::size_t>(shift[idx[a]]);
    power[flat] = std::norm(work[src]) * norm;
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < N) break;
      idx[a] = 0;
    }
  }

  std::vector<std::vector<double>> axes(n, freqs);
  return DiscreteSpectrum(n, std::move(axes), std::move(power));
}

double oob_energy(const DiscreteSpectrum& spec, double r) {
  if (r < 0.0) throw Error(ErrorCode::Precondition, "oob_energy: r < 0");
  double total = spec.total_energy();
  if (total <= 0.0) return 0.0;
  double out = 0.0;
  const auto& p = spec.power();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (spec.bin_radius(i) > r) out += p[i];
  }
  return out / total;
}

double bandwidth_estimate(const DiscreteSpectrum& spec, double tol) {
  if (!(tol > 0.0 && tol < 1.0))
    throw Error(ErrorCode::Precondition,
                "bandwidth_estimate: tol must be in (0, 1)");
  double total = spec.total_energy();
  if (total <= 0.0)
    throw Error(ErrorCode::UndefinedBandwidth,
                "bandwidth_estimate: empty spectrum");
  const auto& p = spec.power();
  std::vector<std::pair<double, double>> by_radius(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    by_radius[i] = {spec.bin_radius(i), p[i]};
  std::sort(by_radius.begin(), by_radius.end());
  // Walk inward from the largest radius; a radius is admissible when the
  // energy strictly beyond it fits under tol. Ties go to the smaller radius.
  double tail = 0.0;
  double best = by_radius.back().first;
  std::size_t i = by_radius.size();
  while (i > 0) {
    std::size_t hi = i;
    double r = by_radius[i - 1].first;
    while (i > 0 && by_radius[i - 1].first == r) --i;
    if (tail <= tol * total) best = r;
    for (std::size_t k = i; k < hi; ++k) tail += by_radius[k].second;
  }
  return best;
}

double decay_sup(const Evaluable& f, int dim, double R, int probes) {
  if (!(R > 0.0)) throw Error(ErrorCode::Precondition, "decay_sup: R <= 0");
  if (probes < 1)
    throw Error(ErrorCode::Precondition, "decay_sup: probes < 1");
  double best = 0.0;
  Vector t(dim);
  for (int i = 0; i < probes; ++i) {
    // Halton directions, radius interleaved on one more dimension.
    double nrm = 0.0;
    for (int a = 0; a < dim; ++a) {
      double c = 2.0 * rng::halton(static_cast<std::size_t>(i) + 1, a) - 1.0;
      t[a] = c;
      nrm += c * c;
    }
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) {
      t.setZero();
      t[0] = 1.0;
      nrm = 1.0;
    }
    double radius =
        R * (1.0 + rng::halton(static_cast<std::size_t>(i) + 1, dim));
    t *= radius / nrm;
    best = std::max(best, std::abs(f(t)));
  }
  return best;
}

}  // namespace pw::spectra
