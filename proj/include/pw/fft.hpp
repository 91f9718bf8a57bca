#pragma once

#include <vector>

#include "pw/types.hpp"

namespace pw::fft {

// In-place DFT of arbitrary length: radix-2 for powers of two, Bluestein
// otherwise. Forward convention X_j = sum_k x_k exp(-2 pi i j k / N);
// inverse divides by N.
void transform(std::vector<Complex>& data, bool inverse);

// Reference O(N^2) DFT, used by tests to pin the fast path.
std::vector<Complex> dft_direct(const std::vector<Complex>& data,
                                bool inverse);

}  // namespace pw::fft
