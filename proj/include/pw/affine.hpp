#pragma once

#include <vector>

#include "pw/signal.hpp"
#include "pw/spectral_density.hpp"
#include "pw/types.hpp"

namespace pw::affine {

struct AffineMap {
  Matrix A;
  Vector b;

  int dim_in() const { return static_cast<int>(A.cols()); }
  int dim_out() const { return static_cast<int>(A.rows()); }
  Vector operator()(const Vector& t) const { return A * t + b; }
  double op_norm() const;
  bool is_injective() const;
  bool is_invertible() const;

  static AffineMap identity(int n);
  static AffineMap linear(Matrix A);
};

// Orthonormal basis of ker A; empty when A is injective. The injectivity
// threshold is sigma_min > 1e-10 sigma_max; borderline maps land in the
// kernel rather than being guessed injective.
std::vector<Vector> kernel_basis(const Matrix& A);

// A = Kmap^{-1} S Q with Kmap orthogonal (rows: an orthonormal basis of
// im A completed against coordinate axes), S the canonical injection
// R^m -> R^n, and Q an invertible m x m map.
struct InjectiveDecomposition {
  Matrix Kmap;  // n x n, orthogonal
  Matrix Q;     // m x m, invertible
  Matrix reconstruct() const;  // Kmap^{-1} S Q, for exactness checks
};

InjectiveDecomposition complete_to_invertible(const Matrix& A);

// Exact spectrum of f(At + b) for invertible A: the pullback
// |det A|^{-1} exp(i <(A^{-1})^* v, b>) g((A^{-1})^* v), resampled on a
// uniform grid over the bounding box of A^* applied to the old box.
SpectralDensity spectral_transform_invertible(const SpectralDensity& spec,
                                              const Matrix& A,
                                              const Vector& b);

// Marginal density g(u') = integral of g(u', u'') over the ball slice
// |u''| <= sqrt(r^2 - |u'|^2), intersected with the support box.
SpectralDensity project_spectrum(const SpectralDensity& spec, int m);

// sqrt of the volume of the (n-m)-ball of radius r: the constant in the
// L2 bound on the marginal.
double projection_l2_constant(double r, int n, int m);

// f(At + b) as a PWSignal; routes through the invertible transform when
// n = m and through the decomposition + marginalization when n > m.
// Non-injective A raises NotInjectiveError.
PWSignal compose_affine(const PWSignal& f, const Matrix& A, const Vector& b);
PWSignal compose_affine(const PWSignal& f, const AffineMap& phi);

}  // namespace pw::affine
