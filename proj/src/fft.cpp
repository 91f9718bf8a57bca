#include "pw/fft.hpp"

#include <cmath>

namespace pw::fft {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Iterative Cooley-Tukey, size must be a power of two.
void radix2(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * kPi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    Complex wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        Complex u = a[i + k];
        Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

// Bluestein chirp-z: any length via a power-of-two convolution.
void bluestein(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<Complex> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the argument small for large n.
    std::size_t k2 = (k * k) % (2 * n);
    double ang = sign * kPi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = Complex(std::cos(ang), std::sin(ang));
  }
  const std::size_t m = next_pow2(2 * n - 1);
  std::vector<Complex> x(m, Complex(0.0, 0.0));
  std::vector<Complex> y(m, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
  for (std::size_t k = 0; k < n; ++k) {
    y[k] = std::conj(chirp[k]);
    if (k != 0) y[m - k] = std::conj(chirp[k]);
  }
  radix2(x, false);
  radix2(y, false);
  for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
  radix2(x, true);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  if (inverse) {
    for (auto& v : a) v /= static_cast<double>(n);
  }
}

}  // namespace

void transform(std::vector<Complex>& data, bool inverse) {
  if (data.size() < 2) return;
  if (is_pow2(data.size())) {
    radix2(data, inverse);
  } else {
    bluestein(data, inverse);
  }
}

std::vector<Complex> dft_direct(const std::vector<Complex>& data,
                                bool inverse) {
  const std::size_t n = data.size();
  std::vector<Complex> out(n, Complex(0.0, 0.0));
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    Complex sum(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double ang = sign * 2.0 * kPi * static_cast<double>(j) *
                   static_cast<double>(k) / static_cast<double>(n);
      sum += data[k] * Complex(std::cos(ang), std::sin(ang));
    }
    out[j] = inverse ? sum / static_cast<double>(n) : sum;
  }
  return out;
}

}  // namespace pw::fft
