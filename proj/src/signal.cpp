#include "pw/signal.hpp"

#include <cmath>
#include <sstream>

#include "pw/errors.hpp"

namespace pw {

namespace {

constexpr Complex kI(0.0, 1.0);

void check_axis(int dim, int axis) {
  if (axis < 1 || axis > dim)
    throw Error(ErrorCode::IndexError,
                "catalog: axis index " + std::to_string(axis) +
                    " out of range for dim " + std::to_string(dim));
}

void check_finite(const Vector& t, const char* who) {
  for (int i = 0; i < t.size(); ++i)
    if (!std::isfinite(t[i]))
      throw Error(ErrorCode::DomainError,
                  std::string(who) + ": non-finite input point");
}

}  // namespace

double sinc_safe(double x) {
  if (!std::isfinite(x))
    throw Error(ErrorCode::DomainError, "sinc_safe: non-finite input");
  // Below the crossover both branches agree to double precision; the series
  // avoids the 0/0.
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

Complex sinc_c(Complex w) {
  if (std::abs(w) < 1e-2) {
    Complex w2 = w * w;
    return 1.0 - w2 / 6.0 + w2 * w2 / 120.0;
  }
  return std::sin(w) / w;
}

double catalog_closed_K(const Vector& t) {
  double prod = 1.0;
  for (int s = 0; s < t.size(); ++s) prod *= 2.0 * sinc_safe(t[s]);
  return prod;
}

double catalog_closed_P(const Vector& t, int axis) {
  check_axis(static_cast<int>(t.size()), axis);
  double prod = 1.0;
  for (int s = 0; s < t.size(); ++s) {
    double f = sinc_safe(t[s]);
    prod *= (s == axis - 1) ? 2.0 * f * f : 2.0 * f;
  }
  return prod;
}

Complex catalog_closed_Q(const Vector& t, int axis) {
  check_axis(static_cast<int>(t.size()), axis);
  Complex prod = 1.0;
  for (int s = 0; s < t.size(); ++s) {
    double f = 2.0 * sinc_safe(t[s]);
    if (s == axis - 1) {
      prod *= std::exp(kI * t[s]) * f;
    } else {
      prod *= f;
    }
  }
  return prod;
}

BandSupport catalog_support(int dim, CatalogKind kind, int axis) {
  if (dim < 1) throw Error(ErrorCode::DimensionError, "catalog: dim < 1");
  if (kind != CatalogKind::K) check_axis(dim, axis);
  std::vector<Interval> box(dim, Interval{-1.0, 1.0});
  if (kind == CatalogKind::P) box[axis - 1] = Interval{-2.0, 2.0};
  if (kind == CatalogKind::Q) box[axis - 1] = Interval{0.0, 2.0};
  return BandSupport::from_box(std::move(box));
}

PWSignal::PWSignal(int dim, std::optional<CatalogParams> cat,
                   SpectralDensity spec)
    : dim_(dim), catalog_(std::move(cat)), spectrum_(std::move(spec)) {}

PWSignal PWSignal::catalog(int dim, CatalogKind kind, int axis, Vector shift,
                           int cells_per_unit) {
  BandSupport support = catalog_support(dim, kind, axis);
  if (kind == CatalogKind::K) axis = 1;
  if (shift.size() == 0) shift = Vector::Zero(dim);
  if (shift.size() != dim)
    throw Error(ErrorCode::DimensionError, "catalog: shift dim mismatch");

  // Tensor-product spectral profiles: indicator on [-1,1], triangle on
  // [-2,2] for the P axis, indicator on [0,2] for the Q axis. A time shift
  // becomes a per-axis modulation exp(-i u s).
  std::vector<AxisGrid> axes;
  std::vector<std::vector<Complex>> factors;
  for (int s = 0; s < dim; ++s) {
    const Interval& iv = support.box()[s];
    AxisGrid ax = make_axis_grid(iv.lo, iv.hi, cells_per_unit);
    std::vector<Complex> f(ax.nodes);
    for (int k = 0; k < ax.nodes; ++k) {
      double u = ax.node(k);
      double base = 1.0;
      if (kind == CatalogKind::P && s == axis - 1)
        base = std::max(1.0 - std::abs(u) / 2.0, 0.0);
      f[k] = base * std::exp(-kI * (u * shift[s]));
    }
    axes.push_back(ax);
    factors.push_back(std::move(f));
  }
  SpectralDensity spec = SpectralDensity::separable(
      support, std::move(axes), std::move(factors));
  return PWSignal(dim, CatalogParams{kind, axis, std::move(shift)},
                  std::move(spec));
}

PWSignal PWSignal::spectral(SpectralDensity density) {
  int dim = density.dim();
  return PWSignal(dim, std::nullopt, std::move(density));
}

const BandSupport& PWSignal::support() const { return spectrum_.support(); }

CatalogKind PWSignal::catalog_kind() const {
  if (!catalog_)
    throw Error(ErrorCode::UnsupportedRep, "PWSignal: not a catalog signal");
  return catalog_->kind;
}

int PWSignal::catalog_axis() const {
  if (!catalog_)
    throw Error(ErrorCode::UnsupportedRep, "PWSignal: not a catalog signal");
  return catalog_->axis;
}

const Vector& PWSignal::catalog_shift() const {
  if (!catalog_)
    throw Error(ErrorCode::UnsupportedRep, "PWSignal: not a catalog signal");
  return catalog_->shift;
}

Complex PWSignal::eval(const Vector& t) const {
  if (t.size() != dim_)
    throw Error(ErrorCode::DimensionError, "eval: point dim mismatch");
  check_finite(t, "eval");
  if (catalog_) {
    Vector arg = t - catalog_->shift;
    switch (catalog_->kind) {
      case CatalogKind::K:
        return Complex(catalog_closed_K(arg), 0.0);
      case CatalogKind::P:
        return Complex(catalog_closed_P(arg, catalog_->axis), 0.0);
      case CatalogKind::Q:
        return catalog_closed_Q(arg, catalog_->axis);
    }
  }
  return spectrum_.eval_time(t);
}

PWSignal make_catalog(int dim, CatalogKind kind, int axis) {
  return PWSignal::catalog(dim, kind, axis);
}

Complex eval_pw(const PWSignal& f, const Vector& t) { return f.eval(t); }

std::vector<Complex> eval_pw_batch(const PWSignal& f,
                                   const std::vector<Vector>& points) {
  std::vector<Complex> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(f.eval(p));
  return out;
}

Complex eval_pw_complex_on_line(const PWSignal& f, const Vector& a,
                                const Vector& b, Complex z) {
  if (a.size() != f.dim() || b.size() != f.dim())
    throw Error(ErrorCode::DimensionError,
                "eval_pw_complex_on_line: vector dim mismatch");
  check_finite(a, "eval_pw_complex_on_line");
  check_finite(b, "eval_pw_complex_on_line");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorCode::DomainError,
                "eval_pw_complex_on_line: non-finite z");
  return f.spectrum().eval_line(a, b, z);
}

double identity_residual(const Vector& t, int axis, IdentityKind which) {
  check_finite(t, "identity_residual");
  check_axis(static_cast<int>(t.size()), axis);
  double K = catalog_closed_K(t);
  Complex Q = catalog_closed_Q(t, axis);
  if (which == IdentityKind::Modulation) {
    Complex rhs = std::exp(Complex(0.0, t[axis - 1])) * K;
    return std::abs(Q - rhs);
  }
  double P = catalog_closed_P(t, axis);
  Complex lhs = 2.0 * Complex(0.0, 1.0) * P * Q * t[axis - 1];
  Complex rhs = Q * Q - K * K;
  return std::abs(lhs - rhs);
}

double quadrature_error_bound(const PWSignal& f, const Vector& t) {
  return f.spectrum().quad_error_bound(t);
}

std::string catalog_closed_form_string(int dim, CatalogKind kind, int axis) {
  if (dim < 1) throw Error(ErrorCode::DimensionError, "catalog: dim < 1");
  if (kind != CatalogKind::K) check_axis(dim, axis);
  std::ostringstream os;
  for (int s = 1; s <= dim; ++s) {
    if (s > 1) os << " * ";
    std::string ts = dim == 1 ? "t" : "t" + std::to_string(s);
    if (kind == CatalogKind::P && s == axis) {
      os << "2 sin^2 " << ts << " / " << ts << "^2";
    } else if (kind == CatalogKind::Q && s == axis) {
      os << "e^{i " << ts << "} 2 sin " << ts << " / " << ts;
    } else {
      os << "2 sin " << ts << " / " << ts;
    }
  }
  return os.str();
}

double catalog_density_l2(int dim, CatalogKind kind) {
  // Indicator axes contribute 2 to the squared norm, the triangle axis 4/3.
  double sq = std::pow(2.0, dim);
  if (kind == CatalogKind::P) sq = 4.0 / 3.0 * std::pow(2.0, dim - 1);
  return std::sqrt(sq);
}

}  // namespace pw
