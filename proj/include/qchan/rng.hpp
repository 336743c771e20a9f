#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "qchan/types.hpp"

namespace qchan::rng {

using Engine = std::mt19937_64;

/// Uniform double in [0, 1), drawn as 53 bits straight from the engine so
/// results do not depend on the standard library's distribution internals.
inline double uniform01(Engine& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

/// Standard normal via Box-Muller (one value per call, spare discarded).
inline double gaussian(Engine& g) {
  double u1;
  do {
    u1 = uniform01(g);
  } while (u1 <= 0.0);
  const double u2 = uniform01(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Exponential(1) variate.
inline double exponential(Engine& g) {
  double u;
  do {
    u = uniform01(g);
  } while (u <= 0.0);
  return -std::log(u);
}

/// Vector of independent standard complex Gaussian entries.
template <typename T>
CVec<T> gaussian_cvec(Index n, Engine& g) {
  CVec<T> v(n);
  for (Index i = 0; i < n; ++i) v[i] = Complex<T>(T(gaussian(g)), T(gaussian(g)));
  return v;
}

/// Haar-like random unit vector (normalized complex Gaussian).
template <typename T>
CVec<T> random_unit_cvec(Index n, Engine& g) {
  CVec<T> v = gaussian_cvec<T>(n, g);
  return v / v.norm();
}

/// rows×cols matrix with orthonormal columns, from QR of a complex Gaussian
/// matrix with the R-diagonal phase absorbed (Haar-distributed when square).
template <typename T>
CMat<T> random_isometry(Index rows, Index cols, Engine& g) {
  CMat<T> a(rows, cols);
  for (Index j = 0; j < cols; ++j) a.col(j) = gaussian_cvec<T>(rows, g);
  Eigen::HouseholderQR<CMat<T>> qr(a);
  CMat<T> q = qr.householderQ() * CMat<T>::Identity(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    const Complex<T> r = qr.matrixQR()(j, j);
    const T mag = std::abs(r);
    if (mag > T(0)) q.col(j) *= r / mag;
  }
  return q;
}

template <typename T>
CMat<T> random_unitary(Index n, Engine& g) {
  return random_isometry<T>(n, n, g);
}

}  // namespace qchan::rng
