#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "qchan/channels.hpp"
#include "qchan/infotheory.hpp"
#include "qchan/states.hpp"
#include "qchan/types.hpp"

namespace qchan {

/// Outcome of the recovery-channel construction. The corrector is present
/// exactly when the deficit S(ρ) − I_e1 is within tolerance; in that case
/// verified_fidelity holds F_e of the corrected two-stage process.
template <typename T>
struct CorrectionResult {
  T deficit;
  bool correctable;
  std::optional<KrausChannel<T>> corrector;
  std::optional<T> verified_fidelity;
  T product_defect;
};

/// S(ρ) − I_e1 in bits, clamped to ≥ 0. Zero exactly when a perfect
/// recovery channel exists.
template <typename T>
T correctability_deficit(const DensityOperator<T>& rho, const KrausChannel<T>& ch1) {
  detail::check_dims(rho, ch1, "correctability_deficit");
  return std::max(von_neumann_entropy(rho) - coherent_information(rho, ch1), T(0));
}

/// ‖ρ^{RE'} − ρ^R ⊗ ρ^{E'}‖_F. Vanishes exactly when the deficit does: a
/// perfectly correctable channel leaks nothing to the environment.
template <typename T>
T environment_info_check(const DensityOperator<T>& rho, const KrausChannel<T>& ch1) {
  detail::check_dims(rho, ch1, "environment_info_check");
  const JointStates<T> js = rq_and_re_states(rho, ch1);
  return (js.rho_re.matrix() - kron(js.rho_r.matrix(), js.rho_e.matrix())).norm();
}

/// Builds the explicit recovery channel when the deficit is within tol.
///
/// The construction works on the evolved purification |Ψ^{RQE'}⟩: with
/// Schmidt data (λ_k, |α_k⟩, |β_k⟩) of the purification and the eigensystem
/// (μ_l, |γ_l⟩) of ρ^{E'}, the relative states
///     |φ_kl⟩ = (⟨α_k| ⊗ 1 ⊗ ⟨γ_l|) |Ψ^{RQE'}⟩ / √(λ_k μ_l)
/// must form an orthonormal family for the recovery to exist; their Gram
/// defect doubles as the product-state test, checked against 10·tol. The
/// recovery is {A_0 = Π, A_l = Σ_k |β_k⟩⟨φ_kl|} with Π the projection onto
/// the complement of span{|φ_kl⟩}; a numerically zero Π is pruned.
template <typename T>
CorrectionResult<T> construct_corrector(const DensityOperator<T>& rho,
                                        const KrausChannel<T>& ch1, T tol = T(1e-7)) {
  detail::check_dims(rho, ch1, "construct_corrector");
  if (!(tol > T(0))) throw std::invalid_argument("construct_corrector: tol must be positive");

  CorrectionResult<T> result;
  result.deficit = correctability_deficit(rho, ch1);
  result.product_defect = environment_info_check(rho, ch1);
  result.correctable = result.deficit <= tol;
  if (!result.correctable) return result;

  const Index d = rho.dim();
  const auto rho_spec = herm_eig(rho.matrix());
  std::vector<Index> ks;
  for (Index k = 0; k < d; ++k)
    if (rho_spec.eigenvalues[k] > T(1e-10)) ks.push_back(k);

  // evolved purification on R ⊗ Q ⊗ E, index (k·d + q)·m + e
  const Index r = [&] {
    Index n = 0;
    while (n < d && rho_spec.eigenvalues[n] > T(1e-12)) ++n;
    return n;
  }();
  const UnitaryDilation<T> dil = to_dilation(ch1);
  const Index m = dil.env_dim();
  CVec<T> psi = CVec<T>::Zero(r * d * m);
  for (Index k = 0; k < r; ++k)
    for (Index q = 0; q < d; ++q)
      psi[(k * d + q) * m] = std::sqrt(rho_spec.eigenvalues[k]) * rho_spec.eigenvectors(q, k);
  psi = kron(CMat<T>::Identity(r, r), dil.unitary()) * psi;

  const SubsystemLayout layout{{"R", r}, {"Q", d}, {"E", m}};
  const CMat<T> rho_env = partial_trace(CMat<T>(psi * psi.adjoint()), layout, {"E"});
  const auto env_spec = herm_eig(rho_env);
  std::vector<Index> ls;
  for (Index l = 0; l < m; ++l)
    if (env_spec.eigenvalues[l] > T(1e-10)) ls.push_back(l);

  std::vector<CVec<T>> phis;
  phis.reserve(ks.size() * ls.size());
  for (const Index l : ls)
    for (const Index k : ks) {
      CVec<T> phi = CVec<T>::Zero(d);
      for (Index q = 0; q < d; ++q)
        for (Index e = 0; e < m; ++e)
          phi[q] += std::conj(env_spec.eigenvectors(e, l)) * psi[(k * d + q) * m + e];
      phi /= std::sqrt(rho_spec.eigenvalues[k] * env_spec.eigenvalues[l]);
      phis.push_back(std::move(phi));
    }

  const Index n_phi = static_cast<Index>(phis.size());
  CMat<T> gram(n_phi, n_phi);
  for (Index i = 0; i < n_phi; ++i)
    for (Index j = 0; j < n_phi; ++j) gram(i, j) = phis[i].dot(phis[j]);
  const T gram_defect = (gram - CMat<T>::Identity(n_phi, n_phi)).norm();
  if (gram_defect > T(10) * tol)
    throw std::runtime_error(
        "construct_corrector: relative states are not orthonormal (Gram defect " +
        std::to_string(gram_defect) + ") despite deficit within tolerance");

  CMat<T> projector = CMat<T>::Identity(d, d);
  for (const auto& phi : phis) projector -= phi * phi.adjoint();

  std::vector<CMat<T>> ops;
  if (projector.norm() > T(1e-8)) ops.push_back(projector);
  std::size_t idx = 0;
  for ([[maybe_unused]] const Index l : ls) {
    CMat<T> a = CMat<T>::Zero(d, d);
    for (const Index k : ks) {
      a += rho_spec.eigenvectors.col(k) * phis[idx].adjoint();
      ++idx;
    }
    ops.push_back(std::move(a));
  }

  result.corrector = KrausChannel<T>(std::move(ops));
  result.verified_fidelity = entanglement_fidelity(rho, compose(*result.corrector, ch1));
  return result;
}

template <typename T>
struct CorrectionVerification {
  T fidelity;               // F_e of the composed two-stage process
  T restoration_distance;   // ‖$₂($₁(ρ)) − ρ‖_F
};

template <typename T>
CorrectionVerification<T> verify_correction(const DensityOperator<T>& rho,
                                            const KrausChannel<T>& ch1,
                                            const KrausChannel<T>& ch2) {
  detail::check_dims(rho, ch1, "verify_correction");
  if (ch1.dim() != ch2.dim()) throw DimensionError("verify_correction: channel dimensions differ");
  const KrausChannel<T> both = compose(ch2, ch1);
  return {entanglement_fidelity(rho, both), (apply_matrix(both, rho.matrix()) - rho.matrix()).norm()};
}

}  // namespace qchan
