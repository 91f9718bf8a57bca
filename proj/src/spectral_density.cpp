#include "pw/spectral_density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pw/errors.hpp"

namespace pw {

namespace {

// Iterates a multi-index over the tensor grid, row-major (last axis fastest).
bool advance(std::vector<int>& idx, const std::vector<AxisGrid>& axes) {
  for (int a = static_cast<int>(axes.size()) - 1; a >= 0; --a) {
    if (++idx[a] < axes[a].nodes) return true;
    idx[a] = 0;
  }
  return false;
}

}  // namespace

AxisGrid make_axis_grid(double lo, double hi, int cells_per_unit) {
  if (!(lo <= hi))
    throw Error(ErrorCode::DomainError, "make_axis_grid: lo > hi");
  if (cells_per_unit < 1)
    throw Error(ErrorCode::DomainError, "make_axis_grid: cells_per_unit < 1");
  double len = hi - lo;
  if (len == 0.0) return AxisGrid{lo, hi, 1};
  int cells = std::max(1, static_cast<int>(std::llround(len * cells_per_unit)));
  return AxisGrid{lo, hi, cells + 1};
}

SpectralDensity::SpectralDensity(BandSupport support,
                                 std::vector<AxisGrid> axes,
                                 std::vector<Complex> dense_values) {
  if (static_cast<int>(axes.size()) != support.dim())
    throw Error(ErrorCode::DimensionError,
                "SpectralDensity: axis count != support dim");
  std::size_t total = 1;
  for (const auto& ax : axes) {
    if (ax.nodes < 1)
      throw Error(ErrorCode::DomainError, "SpectralDensity: empty axis");
    total *= static_cast<std::size_t>(ax.nodes);
  }
  if (total > kMaxGridNodes)
    throw Error(ErrorCode::ResourceLimit,
                "SpectralDensity: grid exceeds node budget");
  if (dense_values.size() != total)
    throw Error(ErrorCode::DimensionError,
                "SpectralDensity: value count != grid size");
  support_ = std::move(support);
  axes_ = std::move(axes);
  values_ = std::move(dense_values);
}

SpectralDensity SpectralDensity::separable(
    BandSupport support, std::vector<AxisGrid> axes,
    std::vector<std::vector<Complex>> factors) {
  if (static_cast<int>(axes.size()) != support.dim() ||
      factors.size() != axes.size())
    throw Error(ErrorCode::DimensionError,
                "SpectralDensity: factor/axis count mismatch");
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (static_cast<int>(factors[a].size()) != axes[a].nodes)
      throw Error(ErrorCode::DimensionError,
                  "SpectralDensity: factor length != axis nodes");
  }
  SpectralDensity d;
  d.support_ = std::move(support);
  d.axes_ = std::move(axes);
  d.factors_ = std::move(factors);
  return d;
}

SpectralDensity SpectralDensity::from_function(
    const BandSupport& support, int cells_per_unit,
    const std::function<Complex(const Vector&)>& g) {
  std::vector<AxisGrid> axes;
  axes.reserve(support.box().size());
  std::size_t total = 1;
  for (const auto& iv : support.box()) {
    axes.push_back(make_axis_grid(iv.lo, iv.hi, cells_per_unit));
    total *= static_cast<std::size_t>(axes.back().nodes);
  }
  if (total > kMaxGridNodes)
    throw Error(ErrorCode::ResourceLimit,
                "SpectralDensity: grid exceeds node budget");
  std::vector<Complex> values;
  values.reserve(total);
  std::vector<int> idx(axes.size(), 0);
  Vector u(static_cast<int>(axes.size()));
  do {
    for (std::size_t a = 0; a < axes.size(); ++a)
      u[static_cast<int>(a)] = axes[a].node(idx[a]);
    values.push_back(g(u));
  } while (advance(idx, axes));
  return SpectralDensity(support, std::move(axes), std::move(values));
}

std::size_t SpectralDensity::node_count() const {
  std::size_t total = 1;
  for (const auto& ax : axes_) total *= static_cast<std::size_t>(ax.nodes);
  return total;
}

double SpectralDensity::min_spacing() const {
  double h = 0.0;
  for (const auto& ax : axes_) {
    if (ax.nodes < 2) continue;
    double s = ax.spacing();
    if (h == 0.0 || s < h) h = s;
  }
  return h;
}

const std::vector<std::vector<Complex>>& SpectralDensity::factors() const {
  if (!is_separable())
    throw Error(ErrorCode::UnsupportedRep,
                "SpectralDensity: dense density has no factors");
  return factors_;
}

std::vector<Complex> SpectralDensity::dense_values() const {
  if (!is_separable()) return values_;
  std::vector<Complex> out;
  out.reserve(node_count());
  std::vector<int> idx(axes_.size(), 0);
  do {
    Complex v = 1.0;
    for (std::size_t a = 0; a < axes_.size(); ++a) v *= factors_[a][idx[a]];
    out.push_back(v);
  } while (advance(idx, axes_));
  return out;
}

SpectralDensity SpectralDensity::to_dense() const {
  if (!is_separable()) return *this;
  return SpectralDensity(support_, axes_, dense_values());
}

Complex SpectralDensity::node_value(const std::vector<int>& idx) const {
  if (is_separable()) {
    Complex v = 1.0;
    for (std::size_t a = 0; a < axes_.size(); ++a) v *= factors_[a][idx[a]];
    return v;
  }
  std::size_t flat = 0;
  for (std::size_t a = 0; a < axes_.size(); ++a)
    flat = flat * static_cast<std::size_t>(axes_[a].nodes) +
           static_cast<std::size_t>(idx[a]);
  return values_[flat];
}

double SpectralDensity::node_weight(const std::vector<int>& idx) const {
  double w = 1.0;
  for (std::size_t a = 0; a < axes_.size(); ++a) w *= axes_[a].weight(idx[a]);
  return w;
}

double SpectralDensity::l2_norm() const {
  if (is_separable()) {
    double prod = 1.0;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      double s = 0.0;
      for (int k = 0; k < axes_[a].nodes; ++k)
        s += axes_[a].weight(k) * std::norm(factors_[a][k]);
      prod *= s;
    }
    return std::sqrt(prod);
  }
  double sum = 0.0;
  std::vector<int> idx(axes_.size(), 0);
  std::size_t flat = 0;
  do {
    sum += node_weight(idx) * std::norm(values_[flat]);
    ++flat;
  } while (advance(idx, axes_));
  return std::sqrt(sum);
}

double SpectralDensity::l1_norm() const {
  if (is_separable()) {
    double prod = 1.0;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      double s = 0.0;
      for (int k = 0; k < axes_[a].nodes; ++k)
        s += axes_[a].weight(k) * std::abs(factors_[a][k]);
      prod *= s;
    }
    return prod;
  }
  double sum = 0.0;
  std::vector<int> idx(axes_.size(), 0);
  std::size_t flat = 0;
  do {
    sum += node_weight(idx) * std::abs(values_[flat]);
    ++flat;
  } while (advance(idx, axes_));
  return sum;
}

Complex SpectralDensity::integral() const {
  if (is_separable()) {
    Complex prod = 1.0;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      Complex s = 0.0;
      for (int k = 0; k < axes_[a].nodes; ++k)
        s += axes_[a].weight(k) * factors_[a][k];
      prod *= s;
    }
    return prod;
  }
  Complex sum = 0.0;
  std::vector<int> idx(axes_.size(), 0);
  std::size_t flat = 0;
  do {
    sum += node_weight(idx) * values_[flat];
    ++flat;
  } while (advance(idx, axes_));
  return sum;
}

Complex SpectralDensity::interpolate(const Vector& u) const {
  if (u.size() != dim())
    throw Error(ErrorCode::DimensionError,
                "SpectralDensity::interpolate: wrong point dim");
  const int n = dim();
  std::vector<int> cell(n);
  std::vector<double> frac(n);
  for (int a = 0; a < n; ++a) {
    const AxisGrid& ax = axes_[a];
    double x = u[a];
    if (x < ax.lo || x > ax.hi) return Complex(0.0, 0.0);
    if (ax.nodes == 1) {
      cell[a] = 0;
      frac[a] = 0.0;
      continue;
    }
    double s = (x - ax.lo) / ax.spacing();
    int c = static_cast<int>(std::floor(s));
    c = std::clamp(c, 0, ax.nodes - 2);
    cell[a] = c;
    frac[a] = s - c;
  }
  if (is_separable()) {
    Complex prod = 1.0;
    for (int a = 0; a < n; ++a) {
      const auto& f = factors_[a];
      if (axes_[a].nodes == 1) {
        prod *= f[0];
      } else {
        prod *= f[cell[a]] * (1.0 - frac[a]) + f[cell[a] + 1] * frac[a];
      }
    }
    return prod;
  }
  // Dense: accumulate over the 2^n cell corners.
  Complex sum = 0.0;
  const int corners = 1 << n;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = 0;
    for (int a = 0; a < n; ++a) {
      int hi = (c >> a) & 1;
      int k = cell[a];
      if (axes_[a].nodes > 1) k += hi;
      w *= (axes_[a].nodes == 1) ? (hi ? 0.0 : 1.0)
                                 : (hi ? frac[a] : 1.0 - frac[a]);
      flat = flat * static_cast<std::size_t>(axes_[a].nodes) +
             static_cast<std::size_t>(k);
    }
    if (w != 0.0) sum += w * values_[flat];
  }
  return sum;
}

Complex SpectralDensity::eval_time(const Vector& t) const {
  Vector zero = Vector::Zero(dim());
  return eval_line(zero, t, Complex(1.0, 0.0));
}

Complex SpectralDensity::eval_line(const Vector& a, const Vector& b,
                                   Complex z) const {
  if (a.size() != dim() || b.size() != dim())
    throw Error(ErrorCode::DimensionError,
                "SpectralDensity::eval_line: wrong vector dim");
  const int n = dim();
  // Per-axis complex frequency w_s = a_s + z b_s; the kernel factorizes as
  // prod_s exp(i u_s w_s).
  std::vector<Complex> w(n);
  for (int s = 0; s < n; ++s) w[s] = a[s] + z * b[s];

  if (is_separable()) {
    Complex prod = 1.0;
    for (int s = 0; s < n; ++s) {
      const AxisGrid& ax = axes_[s];
      Complex sum = 0.0;
      for (int k = 0; k < ax.nodes; ++k) {
        Complex phase = std::exp(Complex(0.0, 1.0) * (ax.node(k) * w[s]));
        sum += ax.weight(k) * factors_[s][k] * phase;
      }
      prod *= sum;
    }
    return prod;
  }

  // Dense: precompute per-axis phase tables, then one pass over nodes.
  std::vector<std::vector<Complex>> phase(n);
  for (int s = 0; s < n; ++s) {
    phase[s].resize(axes_[s].nodes);
    for (int k = 0; k < axes_[s].nodes; ++k)
      phase[s][k] = std::exp(Complex(0.0, 1.0) * (axes_[s].node(k) * w[s]));
  }
  Complex sum = 0.0;
  std::vector<int> idx(axes_.size(), 0);
  std::size_t flat = 0;
  do {
    Complex p = values_[flat];
    double wt = 1.0;
    for (int s = 0; s < n; ++s) {
      p *= phase[s][idx[s]];
      wt *= axes_[s].weight(idx[s]);
    }
    sum += wt * p;
    ++flat;
  } while (advance(idx, axes_));
  return sum;
}

double SpectralDensity::quad_error_bound(const Vector& t) const {
  double h = min_spacing();
  double mag = std::max(1.0, l1_norm());
  return h * h / 12.0 * (1.0 + t.squaredNorm()) * mag * dim();
}

}  // namespace pw
