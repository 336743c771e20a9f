#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qchan {

template <typename T>
using Complex = std::complex<T>;

/// Dense complex matrix over real scalar T. All operators in this library
/// (Kraus operators, unitaries, density matrices, projectors) are stored
/// this way; Eigen is the only math dependency.
template <typename T>
using CMat = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
using CVec = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;

template <typename T>
using RVec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Operand shapes or subsystem labels do not line up.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

/// Rotate v by a global phase so its first component of magnitude > 1e-12
/// is real and non-negative. No-op on (numerically) zero vectors.
template <typename T>
void fix_global_phase(Eigen::Ref<CVec<T>> v) {
  for (Index i = 0; i < v.size(); ++i) {
    const T mag = std::abs(v[i]);
    if (mag > T(1e-12)) {
      v *= std::conj(v[i]) / mag;
      return;
    }
  }
}

}  // namespace detail

}  // namespace qchan
