#include "pw/affine.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "pw/errors.hpp"

namespace pw::affine {

namespace {

constexpr double kInjectivityTol = 1e-10;

std::vector<std::vector<double>> to_plain(const std::vector<Vector>& vs) {
  std::vector<std::vector<double>> out;
  out.reserve(vs.size());
  for (const auto& v : vs)
    out.emplace_back(v.data(), v.data() + v.size());
  return out;
}

void require_injective(const Matrix& A, const char* who) {
  auto kb = kernel_basis(A);
  if (!kb.empty()) {
    std::ostringstream os;
    os << who << ": map has a " << kb.size()
       << "-dimensional kernel and is not injective";
    throw NotInjectiveError(os.str(), to_plain(kb));
  }
}

}  // namespace

double AffineMap::op_norm() const {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

bool AffineMap::is_injective() const { return kernel_basis(A).empty(); }

bool AffineMap::is_invertible() const {
  return A.rows() == A.cols() && is_injective();
}

AffineMap AffineMap::identity(int n) {
  return AffineMap{Matrix::Identity(n, n), Vector::Zero(n)};
}

AffineMap AffineMap::linear(Matrix A) {
  Vector b = Vector::Zero(A.rows());
  return AffineMap{std::move(A), std::move(b)};
}

std::vector<Vector> kernel_basis(const Matrix& A) {
  if (A.size() == 0)
    throw Error(ErrorCode::DimensionError, "kernel_basis: empty matrix");
  if (!A.allFinite())
    throw Error(ErrorCode::DomainError, "kernel_basis: non-finite entries");
  const int m = static_cast<int>(A.cols());
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  std::vector<Vector> basis;
  if (smax == 0.0) {
    // Zero map: the kernel is everything.
    for (int i = 0; i < m; ++i) {
      Vector e = Vector::Zero(m);
      e[i] = 1.0;
      basis.push_back(e);
    }
    return basis;
  }
  int rank = 0;
  for (int i = 0; i < sigma.size(); ++i)
    if (sigma(i) > kInjectivityTol * smax) ++rank;
  for (int i = rank; i < m; ++i) basis.push_back(svd.matrixV().col(i));
  return basis;
}

Matrix InjectiveDecomposition::reconstruct() const {
  const int n = static_cast<int>(Kmap.rows());
  const int m = static_cast<int>(Q.rows());
  Matrix SQ = Matrix::Zero(n, m);
  SQ.topRows(m) = Q;
  return Kmap.transpose() * SQ;  // Kmap is orthogonal
}

InjectiveDecomposition complete_to_invertible(const Matrix& A) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(A.cols());
  if (n < m)
    throw Error(ErrorCode::DimensionError,
                "complete_to_invertible: need n >= m");
  require_injective(A, "complete_to_invertible");

  // Orthonormalize the columns of A (modified Gram-Schmidt, one
  // re-orthogonalization pass keeps the basis orthonormal even for poorly
  // conditioned inputs).
  Matrix U(n, n);
  for (int j = 0; j < m; ++j) {
    Vector v = A.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) v -= U.col(i).dot(v) * U.col(i);
    }
    double nrm = v.norm();
    if (nrm == 0.0)
      throw NotInjectiveError("complete_to_invertible: dependent columns",
                              {});
    U.col(j) = v / nrm;
  }

  // Complete against coordinate axes, pivoting on the largest residual
  // norm; ties go to the lowest axis index.
  std::vector<bool> used(n, false);
  for (int j = m; j < n; ++j) {
    int pick = -1;
    double best = -1.0;
    Vector best_res;
    for (int k = 0; k < n; ++k) {
      if (used[k]) continue;
      Vector e = Vector::Zero(n);
      e[k] = 1.0;
      Vector res = e;
      for (int i = 0; i < j; ++i) res -= U.col(i).dot(res) * U.col(i);
      double nrm = res.norm();
      if (nrm > best + 1e-15) {
        best = nrm;
        pick = k;
        best_res = res;
      }
    }
    if (pick < 0 || best <= 1e-12)
      throw Error(ErrorCode::SingularMatrix,
                  "complete_to_invertible: basis completion failed");
    used[pick] = true;
    // One more projection pass for orthogonality.
    for (int i = 0; i < j; ++i)
      best_res -= U.col(i).dot(best_res) * U.col(i);
    U.col(j) = best_res / best_res.norm();
  }

  InjectiveDecomposition dec;
  dec.Kmap = U.transpose();
  dec.Q = U.leftCols(m).transpose() * A;
  return dec;
}

SpectralDensity spectral_transform_invertible(const SpectralDensity& spec,
                                              const Matrix& A,
                                              const Vector& b) {
  const int n = spec.dim();
  if (A.rows() != n || A.cols() != n || b.size() != n)
    throw Error(ErrorCode::DimensionError,
                "spectral_transform_invertible: need square A matching the "
                "density dimension");
  AffineMap phi{A, b};
  double opn = phi.op_norm();
  double det = A.determinant();
  if (std::abs(det) <= 1e-12 * std::pow(opn, n)) {
    std::ostringstream os;
    os << "spectral_transform_invertible: matrix is singular (det = " << det
       << ")";
    throw Error(ErrorCode::SingularMatrix, os.str());
  }

  const Matrix M = A.inverse().transpose();  // (A^{-1})^*

  // Image of the box under A^* is a parallelotope; record its axis-aligned
  // bounding box. For a linear map the per-axis extremes come from interval
  // arithmetic on the box.
  const Matrix At = A.transpose();
  std::vector<Interval> new_box(n);
  for (int i = 0; i < n; ++i) {
    double lo = 0.0, hi = 0.0;
    for (int j = 0; j < n; ++j) {
      const Interval& iv = spec.support().box()[j];
      double c = At(i, j);
      lo += std::min(c * iv.lo, c * iv.hi);
      hi += std::max(c * iv.lo, c * iv.hi);
    }
    new_box[i] = Interval{lo, hi};
  }
  // The bounding box can overestimate a rotated support; keep the sharp
  // analytic radius ||A|| r alongside it.
  double tight_r =
      std::min(BandSupport::enclosing_radius(new_box),
               opn * spec.support().ball_radius());
  BandSupport new_support =
      BandSupport::from_box_with_radius(new_box, tight_r);

  // Resample at the source resolution.
  double h = spec.min_spacing();
  int cpu = h > 0.0 ? std::max(1, static_cast<int>(std::llround(1.0 / h)))
                    : kDefaultCellsPerUnit;
  std::vector<AxisGrid> axes;
  axes.reserve(n);
  for (int i = 0; i < n; ++i)
    axes.push_back(make_axis_grid(new_box[i].lo, new_box[i].hi, cpu));

  double inv_det = 1.0 / std::abs(det);
  std::vector<Complex> values;
  std::size_t total = 1;
  for (const auto& ax : axes) total *= static_cast<std::size_t>(ax.nodes);
  if (total > kMaxGridNodes)
    throw Error(ErrorCode::ResourceLimit,
                "spectral_transform_invertible: pullback grid exceeds node "
                "budget");
  values.reserve(total);

  std::vector<int> idx(n, 0);
  Vector v(n);
  for (;;) {
    for (int a = 0; a < n; ++a) v[a] = axes[a].node(idx[a]);
    Vector u = M * v;
    Complex g = spec.interpolate(u);
    if (g != Complex(0.0, 0.0)) {
      double phase = u.dot(b);
      g *= inv_det * Complex(std::cos(phase), std::sin(phase));
    }
    values.push_back(g);
    int a = n - 1;
    for (; a >= 0; --a) {
      if (++idx[a] < axes[a].nodes) break;
      idx[a] = 0;
    }
    if (a < 0) break;
  }
  return SpectralDensity(std::move(new_support), std::move(axes),
                         std::move(values));
}

SpectralDensity project_spectrum(const SpectralDensity& spec, int m) {
  const int n = spec.dim();
  if (m >= n || m < 1)
    throw Error(ErrorCode::DimensionError,
                "project_spectrum: need 1 <= m < density dimension");
  const double r = spec.support().ball_radius();

  std::vector<Interval> box_m(spec.support().box().begin(),
                              spec.support().box().begin() + m);
  double r_m = std::min(BandSupport::enclosing_radius(box_m), r);
  BandSupport support = BandSupport::from_box_with_radius(box_m, r_m);
  std::vector<AxisGrid> axes_m(spec.axes().begin(), spec.axes().begin() + m);

  // When the ball encloses the whole box the slice constraint
  // |u''| <= sqrt(r^2 - |u'|^2) is vacuous on box nodes, so a separable
  // density marginalizes axis by axis.
  if (spec.is_separable() && spec.support().ball_contains_box()) {
    std::vector<std::vector<Complex>> factors(
        spec.factors().begin(), spec.factors().begin() + m);
    Complex scale = 1.0;
    for (int a = m; a < n; ++a) {
      const AxisGrid& ax = spec.axes()[a];
      Complex s = 0.0;
      for (int k = 0; k < ax.nodes; ++k)
        s += ax.weight(k) * spec.factors()[a][k];
      scale *= s;
    }
    for (auto& f0 : factors[0]) f0 *= scale;
    return SpectralDensity::separable(std::move(support), std::move(axes_m),
                                      std::move(factors));
  }

  SpectralDensity dense = spec.to_dense();
  const auto& values = dense.dense_values();
  std::size_t lead = 1, trail = 1;
  for (int a = 0; a < m; ++a)
    lead *= static_cast<std::size_t>(spec.axes()[a].nodes);
  for (int a = m; a < n; ++a)
    trail *= static_cast<std::size_t>(spec.axes()[a].nodes);

  std::vector<Complex> out(lead, Complex(0.0, 0.0));
  std::vector<int> idx(n, 0);
  for (std::size_t i = 0; i < lead; ++i) {
    // Decode the leading multi-index and the squared |u'|.
    std::size_t rem = i;
    double lead_sq = 0.0;
    for (int a = m - 1; a >= 0; --a) {
      int k = static_cast<int>(rem % spec.axes()[a].nodes);
      idx[a] = k;
      rem /= static_cast<std::size_t>(spec.axes()[a].nodes);
      double u = spec.axes()[a].node(k);
      lead_sq += u * u;
    }
    double slice_sq = r * r - lead_sq;
    if (slice_sq < 0.0) continue;  // outside the ball: marginal vanishes
    Complex sum = 0.0;
    for (std::size_t j = 0; j < trail; ++j) {
      std::size_t rj = j;
      double w = 1.0;
      double trail_sq = 0.0;
      for (int a = n - 1; a >= m; --a) {
        int k = static_cast<int>(rj % spec.axes()[a].nodes);
        idx[a] = k;
        rj /= static_cast<std::size_t>(spec.axes()[a].nodes);
        double u = spec.axes()[a].node(k);
        trail_sq += u * u;
        w *= spec.axes()[a].weight(k);
      }
      if (trail_sq > slice_sq * (1.0 + 1e-12)) continue;
      sum += w * values[i * trail + j];
    }
    out[i] = sum;
  }
  return SpectralDensity(std::move(support), std::move(axes_m),
                         std::move(out));
}

double projection_l2_constant(double r, int n, int m) {
  if (m >= n || m < 1)
    throw Error(ErrorCode::DimensionError,
                "projection_l2_constant: need 1 <= m < n");
  return std::sqrt(ball_volume(n - m, r));
}

PWSignal compose_affine(const PWSignal& f, const Matrix& A, const Vector& b) {
  const int n = f.dim();
  if (A.rows() != n)
    throw Error(ErrorCode::DimensionError,
                "compose_affine: matrix rows must match the signal dimension");
  if (b.size() != n)
    throw Error(ErrorCode::DimensionError,
                "compose_affine: offset dimension mismatch");
  const int m = static_cast<int>(A.cols());
  require_injective(A, "compose_affine");

  if (n == m)
    return PWSignal::spectral(
        spectral_transform_invertible(f.spectrum(), A, b));

  // n > m: A = Kmap^{-1} S Q, so f(At + b) = h(S Q t) with
  // h(y) = f(Kmap^{-1} y + b). Marginalize h's spectrum onto the leading m
  // axes, then pull back through Q.
  InjectiveDecomposition dec = complete_to_invertible(A);
  SpectralDensity spec_h = spectral_transform_invertible(
      f.spectrum(), dec.Kmap.transpose(), b);  // Kmap^{-1} = Kmap^T
  SpectralDensity spec_proj = project_spectrum(spec_h, m);
  SpectralDensity out =
      spectral_transform_invertible(spec_proj, dec.Q, Vector::Zero(m));
  return PWSignal::spectral(std::move(out));
}

PWSignal compose_affine(const PWSignal& f, const AffineMap& phi) {
  return compose_affine(f, phi.A, phi.b);
}

}  // namespace pw::affine
