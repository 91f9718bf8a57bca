#include "pw/warp.hpp"

#include <cmath>

#include "pw/errors.hpp"

namespace pw {

namespace {

void check_axis(int dim, int axis, const char* who) {
  if (axis < 1 || axis > dim)
    throw Error(ErrorCode::IndexError,
                std::string(who) + ": axis out of range");
}

}  // namespace

WarpExpr::WarpExpr(std::vector<Step> steps, int dim_in, int dim_out)
    : steps_(std::move(steps)), dim_in_(dim_in), dim_out_(dim_out) {}

WarpExpr WarpExpr::affine_map(affine::AffineMap phi) {
  int in = phi.dim_in();
  int out = phi.dim_out();
  return WarpExpr({Step{std::move(phi)}}, in, out);
}

WarpExpr WarpExpr::identity(int dim) {
  return affine_map(affine::AffineMap::identity(dim));
}

WarpExpr WarpExpr::coord_power(int dim, int axis, int power) {
  check_axis(dim, axis, "WarpExpr::coord_power");
  if (power < 1)
    throw Error(ErrorCode::DomainError, "WarpExpr::coord_power: power < 1");
  return WarpExpr({Step{CoordPower{axis, power}}}, dim, dim);
}

WarpExpr WarpExpr::coord_sine(int dim, int axis, double amplitude,
                              double frequency) {
  check_axis(dim, axis, "WarpExpr::coord_sine");
  return WarpExpr({Step{CoordSine{axis, amplitude, frequency}}}, dim, dim);
}

WarpExpr WarpExpr::then(const WarpExpr& next) const {
  if (next.dim_in() != dim_out_)
    throw Error(ErrorCode::DimensionError,
                "WarpExpr::then: dimension mismatch in composition");
  std::vector<Step> steps = steps_;
  steps.insert(steps.end(), next.steps_.begin(), next.steps_.end());
  return WarpExpr(std::move(steps), dim_in_, next.dim_out());
}

Vector WarpExpr::operator()(const Vector& t) const {
  if (t.size() != dim_in_)
    throw Error(ErrorCode::DimensionError, "WarpExpr: point dim mismatch");
  Vector x = t;
  for (const auto& step : steps_) {
    if (const auto* aff = std::get_if<affine::AffineMap>(&step)) {
      x = (*aff)(x);
    } else if (const auto* pw_ = std::get_if<CoordPower>(&step)) {
      x[pw_->axis - 1] = std::pow(x[pw_->axis - 1], pw_->power);
    } else {
      const auto& sn = std::get<CoordSine>(step);
      double v = x[sn.axis - 1];
      x[sn.axis - 1] = v + sn.amplitude * std::sin(sn.frequency * v);
    }
  }
  return x;
}

std::optional<affine::AffineMap> WarpExpr::as_affine() const {
  affine::AffineMap acc = affine::AffineMap::identity(dim_in_);
  for (const auto& step : steps_) {
    const affine::AffineMap* aff = std::get_if<affine::AffineMap>(&step);
    if (!aff) {
      // A sine step of amplitude zero and a power step of exponent one are
      // still affine.
      if (const auto* pw_ = std::get_if<CoordPower>(&step);
          pw_ && pw_->power == 1)
        continue;
      if (const auto* sn = std::get_if<CoordSine>(&step);
          sn && sn->amplitude == 0.0)
        continue;
      return std::nullopt;
    }
    acc = affine::AffineMap{aff->A * acc.A, aff->A * acc.b + aff->b};
  }
  return acc;
}

}  // namespace pw
