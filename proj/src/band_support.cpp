#include "pw/band_support.hpp"

#include <cmath>
#include <string>

#include "pw/errors.hpp"

namespace pw {

BandSupport::BandSupport(std::vector<Interval> box, double radius)
    : box_(std::move(box)), ball_radius_(radius) {}

double BandSupport::enclosing_radius(const std::vector<Interval>& box) {
  double sq = 0.0;
  for (const auto& iv : box) {
    double m = std::max(iv.lo * iv.lo, iv.hi * iv.hi);
    sq += m;
  }
  return std::sqrt(sq);
}

BandSupport BandSupport::from_box(std::vector<Interval> box) {
  if (box.empty())
    throw Error(ErrorCode::DimensionError, "BandSupport: empty box");
  for (const auto& iv : box) {
    if (!(iv.lo <= iv.hi))
      throw Error(ErrorCode::DomainError,
                  "BandSupport: interval with lo > hi");
  }
  double r = enclosing_radius(box);
  return BandSupport(std::move(box), r);
}

BandSupport BandSupport::from_box_with_radius(std::vector<Interval> box,
                                              double radius) {
  BandSupport s = from_box(std::move(box));
  if (!(radius >= 0.0))
    throw Error(ErrorCode::DomainError, "BandSupport: negative ball radius");
  // A recorded radius beyond the box-derived one carries no information.
  s.ball_radius_ = std::min(radius, s.ball_radius_);
  return s;
}

bool BandSupport::ball_contains_box() const {
  return ball_radius_ >= enclosing_radius(box_) * (1.0 - 1e-12);
}

double ball_volume(int dim, double radius) {
  if (dim < 0) throw Error(ErrorCode::DimensionError, "ball_volume: dim < 0");
  if (dim == 0) return 1.0;
  double half = 0.5 * dim;
  return std::pow(kPi, half) / std::tgamma(half + 1.0) *
         std::pow(radius, dim);
}

}  // namespace pw
