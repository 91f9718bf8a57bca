#pragma once

#include <vector>

#include "pw/types.hpp"

namespace pw {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Compact spectral support: an axis-aligned closed box together with the
// radius of an origin-centered ball containing the true support. Directly
// constructed supports derive the radius from the box; affine transforms
// may record a tighter radius when the enclosing box overestimates the
// actual (non-axis-aligned) support.
class BandSupport {
 public:
  static BandSupport from_box(std::vector<Interval> box);
  // `radius` must still enclose the true support but may be smaller than
  // the box-derived radius.
  static BandSupport from_box_with_radius(std::vector<Interval> box,
                                          double radius);

  static double enclosing_radius(const std::vector<Interval>& box);

  int dim() const { return static_cast<int>(box_.size()); }
  const std::vector<Interval>& box() const { return box_; }
  double ball_radius() const { return ball_radius_; }

  // True when the ball of ball_radius() contains the whole box (always the
  // case for box-derived radii).
  bool ball_contains_box() const;

 private:
  BandSupport(std::vector<Interval> box, double radius);

  std::vector<Interval> box_;
  double ball_radius_ = 0.0;
};

// Volume of the d-dimensional ball of radius r.
double ball_volume(int dim, double radius);

}  // namespace pw
