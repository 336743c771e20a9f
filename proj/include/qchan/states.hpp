#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qchan/layout.hpp"
#include "qchan/rng.hpp"
#include "qchan/spectral.hpp"
#include "qchan/tensor.hpp"
#include "qchan/types.hpp"

namespace qchan {

/// Density operator on a labeled tensor-product space. Construction checks
/// Hermiticity (1e-9), positivity (eigenvalues ≥ −1e-9) and unit trace
/// (1e-9), so a held value is always a valid state.
template <typename T>
class DensityOperator {
 public:
  DensityOperator(CMat<T> matrix, SubsystemLayout layout)
      : matrix_(std::move(matrix)), layout_(std::move(layout)) {
    if (matrix_.rows() != matrix_.cols())
      throw std::invalid_argument("DensityOperator: matrix is not square");
    if (matrix_.rows() != layout_.total_dim())
      throw DimensionError("DensityOperator: matrix dimension does not match layout");
    if (!matrix_.allFinite())
      throw std::invalid_argument("DensityOperator: non-finite entries");
    if ((matrix_ - matrix_.adjoint()).norm() > T(1e-9))
      throw std::invalid_argument("DensityOperator: matrix is not Hermitian within 1e-9");
    if (std::abs(matrix_.trace() - Complex<T>(1)) > T(1e-9))
      throw std::invalid_argument("DensityOperator: trace differs from 1 beyond 1e-9");
    const auto spec = herm_eig(matrix_);
    if (spec.eigenvalues[spec.eigenvalues.size() - 1] < T(-1e-9))
      throw std::invalid_argument("DensityOperator: negative eigenvalue beyond -1e-9");
  }

  explicit DensityOperator(CMat<T> matrix)
      : DensityOperator(std::move(matrix), SubsystemLayout::single("Q", matrix.rows())) {}

  const CMat<T>& matrix() const { return matrix_; }
  const SubsystemLayout& layout() const { return layout_; }
  Index dim() const { return matrix_.rows(); }

  /// Same matrix under a different factor structure (total dim must agree).
  DensityOperator with_layout(SubsystemLayout layout) const {
    return DensityOperator(matrix_, std::move(layout));
  }

  /// Reduced state on the kept factors.
  DensityOperator reduced(const std::vector<std::string>& keep) const {
    return DensityOperator(partial_trace(matrix_, layout_, keep), layout_.keep(keep));
  }

 private:
  CMat<T> matrix_;
  SubsystemLayout layout_;
};

/// Unit-norm state vector on a labeled tensor-product space.
template <typename T>
class PureState {
 public:
  PureState(CVec<T> vector, SubsystemLayout layout)
      : vector_(std::move(vector)), layout_(std::move(layout)) {
    if (vector_.size() != layout_.total_dim())
      throw DimensionError("PureState: vector dimension does not match layout");
    if (!vector_.allFinite()) throw std::invalid_argument("PureState: non-finite entries");
    if (std::abs(vector_.norm() - T(1)) > T(1e-9))
      throw std::invalid_argument("PureState: vector is not normalized within 1e-9");
  }

  explicit PureState(CVec<T> vector)
      : PureState(std::move(vector), SubsystemLayout::single("Q", vector.size())) {}

  const CVec<T>& vector() const { return vector_; }
  const SubsystemLayout& layout() const { return layout_; }
  Index dim() const { return vector_.size(); }

  CMat<T> projector() const { return vector_ * vector_.adjoint(); }

  DensityOperator<T> density() const { return DensityOperator<T>(projector(), layout_); }

 private:
  CVec<T> vector_;
  SubsystemLayout layout_;
};

/// Schmidt form of a bipartition: coefficients √λ_k (descending) with
/// orthonormal bases on the two parts; Σ_k √λ_k |left_k⟩⊗|right_k⟩
/// reconstructs the state.
template <typename T>
struct SchmidtDecomposition {
  RVec<T> coefficients;
  CMat<T> left_basis;
  CMat<T> right_basis;
};

/// Finite ensemble of pure states with probabilities summing to 1.
template <typename T>
class Ensemble {
 public:
  struct Member {
    T probability;
    PureState<T> state;
  };

  explicit Ensemble(std::vector<Member> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("Ensemble: empty ensemble");
    T total = 0;
    for (const auto& m : members_) {
      if (m.probability < T(0)) throw std::invalid_argument("Ensemble: negative probability");
      if (m.state.dim() != members_.front().state.dim())
        throw DimensionError("Ensemble: inconsistent member dimensions");
      total += m.probability;
    }
    if (std::abs(total - T(1)) > T(1e-9))
      throw std::invalid_argument("Ensemble: probabilities do not sum to 1 within 1e-9");
  }

  const std::vector<Member>& members() const { return members_; }
  Index dim() const { return members_.front().state.dim(); }

 private:
  std::vector<Member> members_;
};

/// Von Neumann entropy S(ρ) = −Tr ρ log₂ ρ in bits.
template <typename T>
T von_neumann_entropy(const DensityOperator<T>& rho) {
  return entropy_bits(herm_eig(rho.matrix()).eigenvalues);
}

/// Canonical purification of ρ on R⊗Q: the reference R has dimension equal
/// to rank(ρ) (eigenvalues > 1e-12), standard basis vectors of R paired with
/// eigenvectors of ρ in descending eigenvalue order.
template <typename T>
PureState<T> purify(const DensityOperator<T>& rho) {
  if (rho.layout().has("R"))
    throw std::invalid_argument("purify: input layout already uses the label 'R'");
  const auto spec = herm_eig(rho.matrix());
  const Index d = rho.dim();
  Index rank = 0;
  while (rank < d && spec.eigenvalues[rank] > T(1e-12)) ++rank;

  CVec<T> psi = CVec<T>::Zero(rank * d);
  for (Index k = 0; k < rank; ++k)
    psi.segment(k * d, d) = std::sqrt(spec.eigenvalues[k]) * spec.eigenvectors.col(k);
  detail::fix_global_phase<T>(psi);
  return PureState<T>(std::move(psi), rho.layout().prepend({"R", rank}));
}

/// Schmidt decomposition across the bipartition (first_group | rest).
/// Coefficients are the square roots of the nonzero eigenvalues of the
/// reduced state on the first group, descending.
template <typename T>
SchmidtDecomposition<T> schmidt(const PureState<T>& psi,
                                const std::vector<std::string>& first_group) {
  const auto& fs = psi.layout().factors();
  std::vector<char> in_first(fs.size(), 0);
  for (const auto& l : first_group) in_first[psi.layout().position(l)] = 1;

  std::vector<Index> stride(fs.size());
  Index s = 1;
  for (std::size_t i = fs.size(); i-- > 0;) {
    stride[i] = s;
    s *= fs[i].dim;
  }
  std::vector<std::pair<Index, Index>> a_sel, b_sel;
  for (std::size_t i = 0; i < fs.size(); ++i)
    (in_first[i] ? a_sel : b_sel).emplace_back(fs[i].dim, stride[i]);
  if (a_sel.empty() || b_sel.empty())
    throw std::invalid_argument("schmidt: both sides of the cut must be non-empty");

  const auto a_off = detail::factor_offsets(a_sel);
  const auto b_off = detail::factor_offsets(b_sel);
  const Index da = static_cast<Index>(a_off.size());
  const Index db = static_cast<Index>(b_off.size());

  CMat<T> c(da, db);
  for (Index a = 0; a < da; ++a)
    for (Index b = 0; b < db; ++b) c(a, b) = psi.vector()[a_off[a] + b_off[b]];

  Eigen::JacobiSVD<CMat<T>> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  Index count = 0;
  while (count < sv.size() && sv[count] * sv[count] > T(1e-12)) ++count;

  SchmidtDecomposition<T> out;
  out.coefficients = sv.head(count);
  out.left_basis.resize(da, count);
  out.right_basis.resize(db, count);
  for (Index k = 0; k < count; ++k) {
    CVec<T> u = svd.matrixU().col(k);
    CVec<T> v = svd.matrixV().col(k).conjugate();
    // rotate the pair so the left vector carries the phase convention
    for (Index i = 0; i < u.size(); ++i) {
      const T mag = std::abs(u[i]);
      if (mag > T(1e-12)) {
        const Complex<T> ph = u[i] / mag;
        u *= std::conj(ph);
        v *= ph;
        break;
      }
    }
    out.left_basis.col(k) = u;
    out.right_basis.col(k) = v;
  }
  return out;
}

/// ρ = Σ_i p_i |ψ_i⟩⟨ψ_i|.
template <typename T>
DensityOperator<T> mix(const Ensemble<T>& e) {
  const Index d = e.dim();
  CMat<T> rho = CMat<T>::Zero(d, d);
  for (const auto& m : e.members()) rho += m.probability * m.state.projector();
  return DensityOperator<T>((rho + rho.adjoint()) / T(2), e.members().front().state.layout());
}

/// Ensemble of relative states of the non-reference part given the outcomes
/// of a basis measurement on the first factor of psi. Basis vectors are the
/// columns of r_basis; outcomes below probability 1e-12 are dropped.
template <typename T>
Ensemble<T> relative_state_ensemble(const PureState<T>& psi, const CMat<T>& r_basis) {
  if (psi.layout().size() < 2)
    throw std::invalid_argument("relative_state_ensemble: state has no reference factor");
  const Index dr = psi.layout().factors().front().dim;
  const Index dq = psi.dim() / dr;
  if (r_basis.rows() != dr || r_basis.cols() != dr)
    throw DimensionError("relative_state_ensemble: basis does not span the reference factor");
  if ((r_basis.adjoint() * r_basis - CMat<T>::Identity(dr, dr)).norm() > T(1e-9))
    throw std::invalid_argument("relative_state_ensemble: basis is not orthonormal");

  const SubsystemLayout q_layout =
      psi.layout().drop({psi.layout().factors().front().label});
  std::vector<typename Ensemble<T>::Member> members;
  for (Index i = 0; i < dr; ++i) {
    CVec<T> w = CVec<T>::Zero(dq);
    for (Index r = 0; r < dr; ++r)
      w += std::conj(r_basis(r, i)) * psi.vector().segment(r * dq, dq);
    const T p = w.squaredNorm();
    if (p < T(1e-12)) continue;
    w /= std::sqrt(p);
    detail::fix_global_phase<T>(w);
    members.push_back({p, PureState<T>(std::move(w), q_layout)});
  }
  return Ensemble<T>(std::move(members));
}

/// Reproducible random density operator: `rank` Haar-like pure states mixed
/// with uniform-simplex weights.
template <typename T>
DensityOperator<T> random_density(Index dim, Index rank, rng::Engine& g) {
  if (rank < 1 || rank > dim) throw std::invalid_argument("random_density: rank out of range");
  RVec<T> p(rank);
  for (Index i = 0; i < rank; ++i) p[i] = T(rng::exponential(g));
  p /= p.sum();
  CMat<T> rho = CMat<T>::Zero(dim, dim);
  for (Index i = 0; i < rank; ++i) {
    const CVec<T> v = rng::random_unit_cvec<T>(dim, g);
    rho += p[i] * (v * v.adjoint());
  }
  return DensityOperator<T>((rho + rho.adjoint()) / T(2));
}

template <typename T>
DensityOperator<T> random_density(Index dim, Index rank, std::uint64_t seed) {
  rng::Engine g(seed);
  return random_density<T>(dim, rank, g);
}

}  // namespace qchan
