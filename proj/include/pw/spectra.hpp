#pragma once

#include <functional>
#include <vector>

#include "pw/signal.hpp"
#include "pw/types.hpp"

namespace pw::spectra {

// Symmetric time-domain grid [-T, T]^dim with N nodes per axis, endpoints
// included. Frequency bins come from the DFT of the N samples: spacing
// 2 pi / (N h), so the resolution is ~pi/T and the Nyquist limit pi/h.
struct SampleGrid {
  int dim = 1;
  double extent = 0.0;  // T
  int nodes = 0;        // N per axis

  double spacing() const { return nodes > 1 ? 2.0 * extent / (nodes - 1) : 0.0; }
  double node(int k) const { return -extent + k * spacing(); }
  double freq_resolution() const { return 2.0 * kPi / (nodes * spacing()); }
  double nyquist() const { return kPi / spacing(); }
  // Largest |u| representable across all axes combined.
  double nyquist_radius() const;
  std::size_t total_nodes() const;
};

enum class Window { None, Hann };

using Evaluable = std::function<Complex(const Vector&)>;

// Row-major samples (last axis fastest), deterministic order.
std::vector<Complex> sample_on_grid(const Evaluable& f, const SampleGrid& grid);

// Same, but checks the grid against the signal's claimed band radius:
// Nyquist must be at least twice the claimed radius.
std::vector<Complex> sample_signal(const PWSignal& f, const SampleGrid& grid);

// Periodogram on the canonical signed frequency grid.
class DiscreteSpectrum {
 public:
  DiscreteSpectrum(int dim, std::vector<std::vector<double>> freq_axes,
                   std::vector<double> power);

  int dim() const { return dim_; }
  const std::vector<std::vector<double>>& freq_axes() const { return freqs_; }
  const std::vector<double>& power() const { return power_; }
  double total_energy() const { return total_; }
  // Euclidean |u| of the flat-indexed bin.
  double bin_radius(std::size_t flat) const;

 private:
  int dim_;
  std::vector<std::vector<double>> freqs_;
  std::vector<double> power_;
  double total_ = 0.0;
};

DiscreteSpectrum dft_spectrum(const std::vector<Complex>& samples,
                              const SampleGrid& grid,
                              Window window = Window::None);

// Fraction of spectral energy strictly outside radius r; zero-energy
// spectra report 0 by convention.
double oob_energy(const DiscreteSpectrum& spec, double r);

// Smallest bin radius r with oob_energy(spec, r) <= tol.
double bandwidth_estimate(const DiscreteSpectrum& spec, double tol);

// Max |f| over a deterministic low-discrepancy probe set on the shell
// R <= |t| <= 2R.
double decay_sup(const Evaluable& f, int dim, double R, int probes);

}  // namespace pw::spectra
