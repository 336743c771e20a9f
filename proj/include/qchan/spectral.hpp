#pragma once

#include <algorithm>
#include <cmath>

#include "qchan/types.hpp"

namespace qchan {

/// Eigensystem of a Hermitian matrix: real eigenvalues in descending order,
/// eigenvector columns aligned with them. Each eigenvector's first nonzero
/// component is made real non-negative so repeated runs agree.
template <typename T>
struct Spectrum {
  RVec<T> eigenvalues;
  CMat<T> eigenvectors;
};

/// Hermitian eigendecomposition. The input is symmetrized to (M + M†)/2
/// first; deviations beyond 1e-9 (relative to max(1, ‖M‖_F)) are rejected.
template <typename T>
Spectrum<T> herm_eig(const CMat<T>& m) {
  if (m.rows() != m.cols()) throw DimensionError("herm_eig: matrix is not square");
  const T scale = std::max(T(1), m.norm());
  if ((m - m.adjoint()).norm() > T(1e-9) * scale)
    throw std::invalid_argument("herm_eig: matrix is not Hermitian within tolerance");

  const CMat<T> h = (m + m.adjoint()) / T(2);
  Eigen::SelfAdjointEigenSolver<CMat<T>> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("herm_eig: eigensolver failed to converge");

  const Index n = m.rows();
  Spectrum<T> out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.eigenvectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    detail::fix_global_phase<T>(out.eigenvectors.col(k));
  }
  return out;
}

/// ‖A − B‖_F.
template <typename T>
T frobenius_distance(const CMat<T>& a, const CMat<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("frobenius_distance: dimension mismatch");
  return (a - b).norm();
}

/// Completes a set of orthonormal columns to a full unitary. Missing columns
/// come from Gram-Schmidt against the standard basis vectors in index order,
/// skipping candidates whose residual falls below the 1e-8 pivot threshold.
template <typename T>
CMat<T> unitary_completion(const CMat<T>& columns) {
  const Index n = columns.rows();
  const Index k = columns.cols();
  if (k > n) throw DimensionError("unitary_completion: more columns than rows");
  if ((columns.adjoint() * columns - CMat<T>::Identity(k, k)).norm() > T(1e-9))
    throw std::invalid_argument("unitary_completion: input columns are not orthonormal");

  CMat<T> u(n, n);
  u.leftCols(k) = columns;
  Index filled = k;
  for (Index i = 0; i < n && filled < n; ++i) {
    CVec<T> v = CVec<T>::Unit(n, i);
    // two Gram-Schmidt passes keep the completion orthogonal to 1e-14
    for (int pass = 0; pass < 2; ++pass)
      v -= u.leftCols(filled) * (u.leftCols(filled).adjoint() * v);
    const T norm = v.norm();
    if (norm > T(1e-8)) {
      u.col(filled++) = v / norm;
    }
  }
  if (filled < n) throw std::runtime_error("unitary_completion: failed to complete basis");
  if ((u.adjoint() * u - CMat<T>::Identity(n, n)).norm() > T(1e-9))
    throw std::runtime_error("unitary_completion: completion lost orthonormality");
  return u;
}

/// h(p) = −p log₂ p − (1−p) log₂(1−p), with h(0) = h(1) = 0.
template <typename T>
T binary_entropy(T p) {
  if (p < T(0) || p > T(1)) throw std::invalid_argument("binary_entropy: p outside [0,1]");
  T s = 0;
  if (p > T(0)) s -= p * std::log2(p);
  if (p < T(1)) s -= (T(1) - p) * std::log2(T(1) - p);
  return s;
}

/// −Σ λ log₂ λ over eigenvalues above the 1e-12 cutoff, clamped to ≥ 0.
template <typename T>
T entropy_bits(const RVec<T>& eigenvalues) {
  T s = 0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const T l = eigenvalues[i];
    if (l > T(1e-12)) s -= l * std::log2(l);
  }
  return std::max(s, T(0));
}

}  // namespace qchan
