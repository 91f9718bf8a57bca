#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pw/spectral_density.hpp"
#include "pw/types.hpp"

namespace pw {

// sin(x)/x with the removable singularity filled; relative error <= 1e-14.
double sinc_safe(double x);
// Entire extension of the same function to complex arguments.
Complex sinc_c(Complex w);

enum class CatalogKind { K, P, Q };
enum class IdentityKind { Modulation, Product };

// Closed forms of the catalog signals. K is real, P is real, Q is complex.
double catalog_closed_K(const Vector& t);
double catalog_closed_P(const Vector& t, int axis);
Complex catalog_closed_Q(const Vector& t, int axis);

// A bandlimited signal: either a grid-sampled spectral density or a catalog
// member (K, P_j, Q_j, optionally time-shifted). Catalog signals carry a
// tensor-product spectral materialization alongside the closed form, so both
// evaluation routes are always available. Immutable after construction.
class PWSignal {
 public:
  static PWSignal catalog(int dim, CatalogKind kind, int axis = 1,
                          Vector shift = Vector(),
                          int cells_per_unit = kDefaultCellsPerUnit);
  static PWSignal spectral(SpectralDensity density);

  int dim() const { return dim_; }
  const BandSupport& support() const;
  bool is_catalog() const { return catalog_.has_value(); }
  CatalogKind catalog_kind() const;
  int catalog_axis() const;
  const Vector& catalog_shift() const;
  const SpectralDensity& spectrum() const { return spectrum_; }

  // Closed form for catalog signals, quadrature otherwise.
  Complex eval(const Vector& t) const;

 private:
  struct CatalogParams {
    CatalogKind kind;
    int axis;
    Vector shift;
  };

  PWSignal(int dim, std::optional<CatalogParams> cat, SpectralDensity spec);

  int dim_;
  std::optional<CatalogParams> catalog_;
  SpectralDensity spectrum_;
};

PWSignal make_catalog(int dim, CatalogKind kind, int axis = 1);

Complex eval_pw(const PWSignal& f, const Vector& t);
std::vector<Complex> eval_pw_batch(const PWSignal& f,
                                   const std::vector<Vector>& points);

// Entire extension of x -> f(a + x b) evaluated at complex z, by quadrature
// over the spectral representation.
Complex eval_pw_complex_on_line(const PWSignal& f, const Vector& a,
                                const Vector& b, Complex z);

// |LHS - RHS| of the catalog identities at t, from closed forms.
double identity_residual(const Vector& t, int axis, IdentityKind which);

double quadrature_error_bound(const PWSignal& f, const Vector& t);

// Pretty closed-form string and the exact L2 norm of the spectral density.
std::string catalog_closed_form_string(int dim, CatalogKind kind, int axis);
double catalog_density_l2(int dim, CatalogKind kind);
BandSupport catalog_support(int dim, CatalogKind kind, int axis);

}  // namespace pw
