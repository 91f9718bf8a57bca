#pragma once

#include <complex>

#include <Eigen/Dense>

namespace pw {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Spectral grids default to 128 cells per unit interval, i.e. 257 nodes
// across [-1, 1]. Integer box corners then land exactly on grid nodes.
inline constexpr int kDefaultCellsPerUnit = 128;

// Hard cap on tensor-grid sizes; exceeding it raises a resource error
// instead of exhausting memory.
inline constexpr std::size_t kMaxGridNodes = std::size_t{1} << 26;

}  // namespace pw
