#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "pw/affine.hpp"
#include "pw/types.hpp"

namespace pw {

// A continuous map R^m -> R^n built from composable steps: affine maps,
// a coordinatewise power t_j -> t_j^p, and a coordinatewise sinusoidal
// perturbation t_j -> t_j + eps sin(omega t_j). Steps apply in order.
class WarpExpr {
 public:
  struct CoordPower {
    int axis = 1;   // 1-based
    int power = 1;  // >= 1
  };
  struct CoordSine {
    int axis = 1;
    double amplitude = 0.0;
    double frequency = 1.0;
  };
  using Step = std::variant<affine::AffineMap, CoordPower, CoordSine>;

  static WarpExpr affine_map(affine::AffineMap phi);
  static WarpExpr identity(int dim);
  static WarpExpr coord_power(int dim, int axis, int power);
  static WarpExpr coord_sine(int dim, int axis, double amplitude,
                             double frequency = 1.0);

  // Composition: `next` runs after this map.
  WarpExpr then(const WarpExpr& next) const;

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const std::vector<Step>& steps() const { return steps_; }

  Vector operator()(const Vector& t) const;

  // An all-affine chain collapses to a single affine map.
  std::optional<affine::AffineMap> as_affine() const;

 private:
  WarpExpr(std::vector<Step> steps, int dim_in, int dim_out);

  std::vector<Step> steps_;
  int dim_in_ = 0;
  int dim_out_ = 0;
};

}  // namespace pw
