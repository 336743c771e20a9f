#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "qchan/spectral.hpp"
#include "qchan/states.hpp"
#include "qchan/tensor.hpp"
#include "qchan/types.hpp"

namespace qchan {

/// ‖Σ_μ A_μ†A_μ − 1‖_F for a raw operator list.
template <typename T>
T normalization_defect(const std::vector<CMat<T>>& operators) {
  if (operators.empty()) throw std::invalid_argument("normalization_defect: empty operator list");
  const Index d = operators.front().rows();
  for (const auto& a : operators)
    if (a.rows() != d || a.cols() != d)
      throw DimensionError("normalization_defect: inconsistent operator dimensions");
  CMat<T> sum = CMat<T>::Zero(d, d);
  for (const auto& a : operators) sum += a.adjoint() * a;
  return (sum - CMat<T>::Identity(d, d)).norm();
}

/// Trace-preserving quantum operation in operator-sum form: ρ ↦ Σ A_μ ρ A_μ†
/// with Σ A_μ†A_μ = 1 within 1e-8. The operator list is not unique; channel
/// equality means equal Choi matrices, never equal lists.
template <typename T>
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<CMat<T>> operators) : operators_(std::move(operators)) {
    const T defect = normalization_defect(operators_);
    for (const auto& a : operators_)
      if (!a.allFinite()) throw std::invalid_argument("KrausChannel: non-finite entries");
    if (defect > T(1e-8))
      throw std::invalid_argument("KrausChannel: normalization defect " + std::to_string(defect) +
                                  " exceeds 1e-8");
  }

  const std::vector<CMat<T>>& operators() const { return operators_; }
  Index dim() const { return operators_.front().rows(); }
  Index kraus_count() const { return static_cast<Index>(operators_.size()); }

 private:
  std::vector<CMat<T>> operators_;
};

template <typename T>
T validate(const KrausChannel<T>& ch) {
  return normalization_defect(ch.operators());
}

/// Σ A_μ m A_μ† on a raw matrix.
template <typename T>
CMat<T> apply_matrix(const KrausChannel<T>& ch, const CMat<T>& m) {
  if (m.rows() != ch.dim() || m.cols() != ch.dim())
    throw DimensionError("apply_matrix: matrix dimension does not match channel");
  CMat<T> out = CMat<T>::Zero(ch.dim(), ch.dim());
  for (const auto& a : ch.operators()) out += a * m * a.adjoint();
  return out;
}

template <typename T>
DensityOperator<T> apply(const KrausChannel<T>& ch, const DensityOperator<T>& rho) {
  CMat<T> out = apply_matrix(ch, rho.matrix());
  return DensityOperator<T>((out + out.adjoint()) / T(2), rho.layout());
}

/// Operator-sum form of second ∘ first: the Kraus set {B_ν A_μ}.
template <typename T>
KrausChannel<T> compose(const KrausChannel<T>& second, const KrausChannel<T>& first) {
  if (second.dim() != first.dim()) throw DimensionError("compose: channel dimensions differ");
  std::vector<CMat<T>> ops;
  ops.reserve(second.operators().size() * first.operators().size());
  for (const auto& b : second.operators())
    for (const auto& a : first.operators()) ops.push_back(b * a);
  return KrausChannel<T>(std::move(ops));
}

/// Extension 1_R ⊗ $ to a compound space with a ref_dim-dimensional leading
/// factor the channel leaves untouched.
template <typename T>
KrausChannel<T> extend(const KrausChannel<T>& ch, Index ref_dim) {
  if (ref_dim < 1) throw std::invalid_argument("extend: ref_dim must be at least 1");
  const CMat<T> eye = CMat<T>::Identity(ref_dim, ref_dim);
  std::vector<CMat<T>> ops;
  ops.reserve(ch.operators().size());
  for (const auto& a : ch.operators()) ops.push_back(kron(eye, a));
  return KrausChannel<T>(std::move(ops));
}

/// Unitary realization of a channel on system ⊗ environment, with the
/// environment starting in its first basis state.
template <typename T>
class UnitaryDilation {
 public:
  UnitaryDilation(CMat<T> unitary, Index sys_dim, Index env_dim)
      : unitary_(std::move(unitary)), sys_dim_(sys_dim), env_dim_(env_dim) {
    if (sys_dim_ < 1 || env_dim_ < 1 || unitary_.rows() != sys_dim_ * env_dim_ ||
        unitary_.cols() != unitary_.rows())
      throw DimensionError("UnitaryDilation: dimensions do not multiply up");
    const Index n = unitary_.rows();
    if ((unitary_.adjoint() * unitary_ - CMat<T>::Identity(n, n)).norm() > T(1e-8))
      throw std::invalid_argument("UnitaryDilation: matrix is not unitary within 1e-8");
  }

  const CMat<T>& unitary() const { return unitary_; }
  Index sys_dim() const { return sys_dim_; }
  Index env_dim() const { return env_dim_; }
  Index env_init() const { return 0; }

 private:
  CMat<T> unitary_;
  Index sys_dim_;
  Index env_dim_;
};

/// Unitary representation with env_dim = number of Kraus operators:
/// U(|q⟩|0⟩) = Σ_μ (A_μ|q⟩) ⊗ |μ⟩, remaining columns by deterministic
/// completion. Index convention on Q⊗E: (q, μ) ↦ q·env_dim + μ.
template <typename T>
UnitaryDilation<T> to_dilation(const KrausChannel<T>& ch) {
  const Index d = ch.dim();
  const Index m = ch.kraus_count();
  const Index n = d * m;

  CMat<T> cols(n, d);
  for (Index q = 0; q < d; ++q)
    for (Index mu = 0; mu < m; ++mu)
      for (Index qp = 0; qp < d; ++qp) cols(qp * m + mu, q) = ch.operators()[mu](qp, q);

  const CMat<T> w = unitary_completion(cols);
  CMat<T> u(n, n);
  Index next = d;
  for (Index c = 0; c < n; ++c) {
    const Index q = c / m;
    const Index e = c % m;
    u.col(c) = (e == 0) ? w.col(q) : w.col(next++);
  }
  return UnitaryDilation<T>(std::move(u), d, m);
}

/// Kraus operators A_μ = (1 ⊗ ⟨μ|) U (1 ⊗ |0⟩), one per environment basis
/// state.
template <typename T>
KrausChannel<T> from_dilation(const UnitaryDilation<T>& dil) {
  const Index d = dil.sys_dim();
  const Index m = dil.env_dim();
  std::vector<CMat<T>> ops(m, CMat<T>(d, d));
  for (Index mu = 0; mu < m; ++mu)
    for (Index qp = 0; qp < d; ++qp)
      for (Index q = 0; q < d; ++q) ops[mu](qp, q) = dil.unitary()(qp * m + mu, q * m + 0);
  return KrausChannel<T>(std::move(ops));
}

/// Choi matrix (I⊗$)(|Ω⟩⟨Ω|), |Ω⟩ = Σ_i |i⟩|i⟩ unnormalized; the canonical
/// form used for channel equality and the complete-positivity criterion.
/// Index convention: (input, output) ↦ input·d + output.
template <typename T>
class ChoiMatrix {
 public:
  ChoiMatrix(CMat<T> matrix, Index source_dim)
      : matrix_(std::move(matrix)), source_dim_(source_dim) {
    if (matrix_.rows() != source_dim_ * source_dim_ || matrix_.cols() != matrix_.rows())
      throw DimensionError("ChoiMatrix: dimension is not source_dim squared");
    if ((matrix_ - matrix_.adjoint()).norm() > T(1e-9))
      throw std::invalid_argument("ChoiMatrix: matrix is not Hermitian within 1e-9");
  }

  const CMat<T>& matrix() const { return matrix_; }
  Index source_dim() const { return source_dim_; }

  T min_eigenvalue() const {
    const auto spec = herm_eig(matrix_);
    return spec.eigenvalues[spec.eigenvalues.size() - 1];
  }

  /// ‖Tr_out C − 1‖_F; zero for trace-preserving maps.
  T trace_preservation_defect() const {
    const SubsystemLayout layout{{"in", source_dim_}, {"out", source_dim_}};
    return (partial_trace(matrix_, layout, {"in"}) -
            CMat<T>::Identity(source_dim_, source_dim_))
        .norm();
  }

 private:
  CMat<T> matrix_;
  Index source_dim_;
};

template <typename T>
ChoiMatrix<T> choi(const KrausChannel<T>& ch) {
  const Index d = ch.dim();
  CMat<T> c = CMat<T>::Zero(d * d, d * d);
  CVec<T> v(d * d);
  for (const auto& a : ch.operators()) {
    for (Index i = 0; i < d; ++i)
      for (Index qp = 0; qp < d; ++qp) v[i * d + qp] = a(qp, i);
    c += v * v.adjoint();
  }
  return ChoiMatrix<T>(std::move(c), d);
}

/// Re-mixed operator list B_ν = Σ_μ v_νμ A_μ for an isometry v on the Kraus
/// index space; the channel's action (and Choi matrix) is unchanged.
template <typename T>
KrausChannel<T> remix(const KrausChannel<T>& ch, const CMat<T>& v) {
  const Index m = ch.kraus_count();
  if (v.cols() != m) throw DimensionError("remix: column count differs from operator count");
  if ((v.adjoint() * v - CMat<T>::Identity(m, m)).norm() > T(1e-8))
    throw std::invalid_argument("remix: v does not have orthonormal columns");
  std::vector<CMat<T>> ops(v.rows(), CMat<T>::Zero(ch.dim(), ch.dim()));
  for (Index nu = 0; nu < v.rows(); ++nu)
    for (Index mu = 0; mu < m; ++mu) ops[nu] += v(nu, mu) * ch.operators()[mu];
  return KrausChannel<T>(std::move(ops));
}

/// Minimal (Kraus-rank) operator list recovered from the Choi eigenvectors,
/// eigenvalue cutoff 1e-10. Optional canonicalization; not used internally.
template <typename T>
KrausChannel<T> canonical_kraus(const KrausChannel<T>& ch) {
  const auto c = choi(ch);
  const Index d = ch.dim();
  const auto spec = herm_eig(c.matrix());
  std::vector<CMat<T>> ops;
  for (Index k = 0; k < spec.eigenvalues.size(); ++k) {
    if (spec.eigenvalues[k] <= T(1e-10)) break;
    CMat<T> a(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index qp = 0; qp < d; ++qp)
        a(qp, i) = std::sqrt(spec.eigenvalues[k]) * spec.eigenvectors(i * d + qp, k);
    ops.push_back(std::move(a));
  }
  return KrausChannel<T>(std::move(ops));
}

// ---------------------------------------------------------------------------
// Standard channels.

template <typename T>
CMat<T> pauli_x() {
  CMat<T> m(2, 2);
  m << Complex<T>(0), Complex<T>(1), Complex<T>(1), Complex<T>(0);
  return m;
}

template <typename T>
CMat<T> pauli_y() {
  CMat<T> m(2, 2);
  m << Complex<T>(0), Complex<T>(0, -1), Complex<T>(0, 1), Complex<T>(0);
  return m;
}

template <typename T>
CMat<T> pauli_z() {
  CMat<T> m(2, 2);
  m << Complex<T>(1), Complex<T>(0), Complex<T>(0), Complex<T>(-1);
  return m;
}

namespace detail {
template <typename T>
void check_probability(T p, const char* what) {
  if (!(p >= T(0) && p <= T(1)))
    throw std::invalid_argument(std::string(what) + ": parameter out of [0,1]");
}
}  // namespace detail

template <typename T>
KrausChannel<T> identity_channel(Index d) {
  if (d < 1) throw std::invalid_argument("identity_channel: dimension must be at least 1");
  return KrausChannel<T>({CMat<T>::Identity(d, d)});
}

template <typename T>
KrausChannel<T> unitary_channel(const CMat<T>& u) {
  if (u.rows() != u.cols()) throw DimensionError("unitary_channel: matrix is not square");
  if ((u.adjoint() * u - CMat<T>::Identity(u.rows(), u.rows())).norm() > T(1e-8))
    throw std::invalid_argument("unitary_channel: matrix is not unitary within 1e-8");
  return KrausChannel<T>({u});
}

/// {√(1−p)·1, √p·Z}.
template <typename T>
KrausChannel<T> dephasing(T p) {
  detail::check_probability(p, "dephasing");
  return KrausChannel<T>({CMat<T>(std::sqrt(T(1) - p) * CMat<T>::Identity(2, 2)),
                          CMat<T>(std::sqrt(p) * pauli_z<T>())});
}

/// {√(1−p)·1, √p·X}.
template <typename T>
KrausChannel<T> bit_flip(T p) {
  detail::check_probability(p, "bit_flip");
  return KrausChannel<T>({CMat<T>(std::sqrt(T(1) - p) * CMat<T>::Identity(2, 2)),
                          CMat<T>(std::sqrt(p) * pauli_x<T>())});
}

/// {√(1−3p/4)·1, √(p/4)·X, √(p/4)·Y, √(p/4)·Z}.
template <typename T>
KrausChannel<T> depolarizing(T p) {
  detail::check_probability(p, "depolarizing");
  const T w = std::sqrt(p / T(4));
  return KrausChannel<T>({CMat<T>(std::sqrt(T(1) - T(3) * p / T(4)) * CMat<T>::Identity(2, 2)),
                          CMat<T>(w * pauli_x<T>()), CMat<T>(w * pauli_y<T>()),
                          CMat<T>(w * pauli_z<T>())});
}

template <typename T>
KrausChannel<T> amplitude_damping(T gamma) {
  detail::check_probability(gamma, "amplitude_damping");
  CMat<T> a0 = CMat<T>::Zero(2, 2);
  a0(0, 0) = Complex<T>(1);
  a0(1, 1) = Complex<T>(std::sqrt(T(1) - gamma));
  CMat<T> a1 = CMat<T>::Zero(2, 2);
  a1(0, 1) = Complex<T>(std::sqrt(gamma));
  return KrausChannel<T>({std::move(a0), std::move(a1)});
}

/// Random channel by isometry truncation: QR of a Gaussian (d·m)×d matrix,
/// sliced into m Kraus operators. Normalization is exact by construction.
template <typename T>
KrausChannel<T> random_channel(Index dim, Index kraus_count, rng::Engine& g) {
  if (dim < 1 || kraus_count < 1)
    throw std::invalid_argument("random_channel: dimensions must be at least 1");
  const CMat<T> v = rng::random_isometry<T>(dim * kraus_count, dim, g);
  std::vector<CMat<T>> ops(kraus_count, CMat<T>(dim, dim));
  for (Index mu = 0; mu < kraus_count; ++mu)
    for (Index qp = 0; qp < dim; ++qp) ops[mu].row(qp) = v.row(qp * kraus_count + mu);
  return KrausChannel<T>(std::move(ops));
}

}  // namespace qchan
