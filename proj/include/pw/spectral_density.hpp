#pragma once

#include <functional>
#include <vector>

#include "pw/band_support.hpp"
#include "pw/types.hpp"

namespace pw {

// Uniform node layout along one spectral axis, endpoints included.
struct AxisGrid {
  double lo = 0.0;
  double hi = 0.0;
  int nodes = 0;

  double spacing() const { return nodes > 1 ? (hi - lo) / (nodes - 1) : 0.0; }
  double node(int k) const {
    return k == nodes - 1 ? hi : lo + k * spacing();
  }
  // Trapezoid weight. Degenerate axes carry measure zero.
  double weight(int k) const {
    if (nodes < 2) return 0.0;
    double h = spacing();
    return (k == 0 || k == nodes - 1) ? 0.5 * h : h;
  }
};

// Grid aligned to [lo, hi] with roughly `cells_per_unit` cells per unit
// length. Integer-length boxes get nodes exactly on integer breakpoints.
AxisGrid make_axis_grid(double lo, double hi, int cells_per_unit);

// A grid-sampled complex density g(u) over a BandSupport, with tensor
// trapezoid quadrature. Storage is either a dense row-major array (last
// axis fastest) or a tensor product of per-axis profiles; catalog spectra
// are products, which both shrinks them and makes line evaluations cheap.
class SpectralDensity {
 public:
  SpectralDensity(BandSupport support, std::vector<AxisGrid> axes,
                  std::vector<Complex> dense_values);

  static SpectralDensity separable(BandSupport support,
                                   std::vector<AxisGrid> axes,
                                   std::vector<std::vector<Complex>> factors);

  // Samples `g` on a grid aligned to the support box.
  static SpectralDensity from_function(
      const BandSupport& support, int cells_per_unit,
      const std::function<Complex(const Vector&)>& g);

  int dim() const { return static_cast<int>(axes_.size()); }
  const BandSupport& support() const { return support_; }
  const std::vector<AxisGrid>& axes() const { return axes_; }
  bool is_separable() const { return !factors_.empty(); }
  std::size_t node_count() const;
  double min_spacing() const;

  const std::vector<std::vector<Complex>>& factors() const;
  SpectralDensity to_dense() const;
  // Row-major dense values; materializes a copy when separable.
  std::vector<Complex> dense_values() const;
  Complex node_value(const std::vector<int>& idx) const;
  double node_weight(const std::vector<int>& idx) const;

  double l2_norm() const;   // (sum w |g|^2)^(1/2)
  double l1_norm() const;   // sum w |g|
  Complex integral() const; // sum w g

  // Multilinear interpolation; zero outside the box.
  Complex interpolate(const Vector& u) const;

  // sum_k w_k g_k exp(i <u_k, t>)
  Complex eval_time(const Vector& t) const;
  // sum_k w_k g_k exp(i <u_k, a>) exp(i z <u_k, b>)
  Complex eval_line(const Vector& a, const Vector& b, Complex z) const;

  // Documented trapezoid error scale for eval_time at t: O(h^2 (1+|t|^2)).
  double quad_error_bound(const Vector& t) const;

 private:
  SpectralDensity() = default;

  BandSupport support_ = BandSupport::from_box({{0.0, 0.0}});
  std::vector<AxisGrid> axes_;
  std::vector<Complex> values_;                 // dense storage
  std::vector<std::vector<Complex>> factors_;   // separable storage
};

}  // namespace pw
