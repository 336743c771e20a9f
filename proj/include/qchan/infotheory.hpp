#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qchan/channels.hpp"
#include "qchan/spectral.hpp"
#include "qchan/states.hpp"
#include "qchan/tensor.hpp"
#include "qchan/types.hpp"

namespace qchan {

/// Density operator over Kraus indices, W_μν = Tr A_μ ρ A_ν†. Its entropy is
/// the entropy exchanged with the environment; it transforms as W ↦ vWv†
/// under a re-mix of the operator list, so S(W) is representation-invariant.
template <typename T>
class WMatrix {
 public:
  explicit WMatrix(CMat<T> matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) throw DimensionError("WMatrix: matrix is not square");
    if ((matrix_ - matrix_.adjoint()).norm() > T(1e-9))
      throw std::invalid_argument("WMatrix: matrix is not Hermitian within 1e-9");
    if (std::abs(matrix_.trace() - Complex<T>(1)) > T(1e-9))
      throw std::invalid_argument("WMatrix: trace differs from 1 beyond 1e-9");
    const auto spec = herm_eig(matrix_);
    if (spec.eigenvalues[spec.eigenvalues.size() - 1] < T(-1e-9))
      throw std::invalid_argument("WMatrix: negative eigenvalue beyond -1e-9");
  }

  const CMat<T>& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }

 private:
  CMat<T> matrix_;
};

/// The intrinsic quantities of one (state, channel) pair, all entropies in
/// bits. fano_lhs is h(F_e) + (1−F_e)·log₂(d²−1) at d = channel dimension.
template <typename T>
struct ChannelReport {
  T input_entropy;
  T output_entropy;
  T entanglement_fidelity;
  T entropy_exchange;
  T coherent_information;
  T fano_lhs;
  T fano_margin;
};

/// Coherent-information bookkeeping of a two-stage evolution.
template <typename T>
struct DpiReport {
  T input_entropy;
  T ie_stage1;
  T ie_both;
  T se_stage1;
  T se_both;

  /// S(ρ) ≥ I_e1 − 1e-9 ≥ I_e12 − 2e-9. A violation signals a library bug,
  /// never a property of the inputs.
  bool chain_holds() const {
    return input_entropy >= ie_stage1 - T(1e-9) && ie_stage1 >= ie_both - T(1e-9);
  }
};

/// States reachable from (ρ, $) through purification and dilation.
template <typename T>
struct JointStates {
  DensityOperator<T> rho_rq;  // reference ⊗ system, after the channel
  DensityOperator<T> rho_re;  // reference ⊗ environment, after the channel
  DensityOperator<T> rho_r;
  DensityOperator<T> rho_e;
};

namespace detail {

template <typename T>
void check_dims(const DensityOperator<T>& rho, const KrausChannel<T>& ch, const char* what) {
  if (rho.dim() != ch.dim())
    throw DimensionError(std::string(what) + ": state and channel dimensions differ");
}

/// Purification of rho evolved under the extended channel 1_R ⊗ $:
/// returns (|Ψ^{RQ}⟩ amplitudes, ρ^{RQ'}).
template <typename T>
std::pair<CVec<T>, CMat<T>> evolved_purification(const DensityOperator<T>& rho,
                                                 const KrausChannel<T>& ch) {
  const DensityOperator<T> plain(rho.matrix());  // single-factor view, label-safe
  const PureState<T> psi = purify(plain);
  const Index r = psi.dim() / rho.dim();
  const KrausChannel<T> ext = extend(ch, r);
  CMat<T> rq = apply_matrix(ext, CMat<T>(psi.projector()));
  return {psi.vector(), std::move(rq)};
}

}  // namespace detail

template <typename T>
WMatrix<T> w_matrix(const DensityOperator<T>& rho, const KrausChannel<T>& ch) {
  detail::check_dims(rho, ch, "w_matrix");
  const Index m = ch.kraus_count();
  std::vector<CMat<T>> x(m);
  for (Index mu = 0; mu < m; ++mu) x[mu] = ch.operators()[mu] * rho.matrix();
  CMat<T> w(m, m);
  for (Index mu = 0; mu < m; ++mu)
    for (Index nu = 0; nu < m; ++nu)
      w(mu, nu) = x[mu].cwiseProduct(ch.operators()[nu].conjugate()).sum();
  return WMatrix<T>((w + w.adjoint()) / T(2));
}

/// Entanglement fidelity F_e = ⟨Ψ^{RQ}| (1⊗$)(|Ψ^{RQ}⟩⟨Ψ^{RQ}|) |Ψ^{RQ}⟩
/// = Σ_μ |Tr ρA_μ|². Both routes are evaluated; a disagreement beyond 1e-10
/// signals a library bug. The trace-formula value is returned.
template <typename T>
T entanglement_fidelity(const DensityOperator<T>& rho, const KrausChannel<T>& ch) {
  detail::check_dims(rho, ch, "entanglement_fidelity");
  T by_trace = 0;
  for (const auto& a : ch.operators()) by_trace += std::norm((rho.matrix() * a).trace());

  const auto [psi, rq] = detail::evolved_purification(rho, ch);
  const T by_purification = (psi.adjoint() * rq * psi)(0, 0).real();

  if (std::abs(by_trace - by_purification) > T(1e-10))
    throw std::runtime_error("entanglement_fidelity: purification and trace routes disagree");
  return std::clamp(by_trace, T(0), T(1));
}

/// F̄ = Σ_i p_i ⟨ψ_i| $(|ψ_i⟩⟨ψ_i|) |ψ_i⟩.
template <typename T>
T average_fidelity(const Ensemble<T>& e, const KrausChannel<T>& ch) {
  if (e.dim() != ch.dim())
    throw DimensionError("average_fidelity: ensemble and channel dimensions differ");
  T f = 0;
  for (const auto& m : e.members()) {
    const CMat<T> out = apply_matrix(ch, CMat<T>(m.state.projector()));
    f += m.probability * (m.state.vector().adjoint() * out * m.state.vector())(0, 0).real();
  }
  return std::clamp(f, T(0), T(1));
}

/// Entropy exchange S_e = S(W), cross-checked against S(ρ^{RQ'}) within 1e-8.
template <typename T>
T entropy_exchange(const DensityOperator<T>& rho, const KrausChannel<T>& ch) {
  detail::check_dims(rho, ch, "entropy_exchange");
  const T s_w = entropy_bits(herm_eig(w_matrix(rho, ch).matrix()).eigenvalues);
  const auto [psi, rq] = detail::evolved_purification(rho, ch);
  const T s_rq = entropy_bits(herm_eig(rq).eigenvalues);
  if (std::abs(s_w - s_rq) > T(1e-8))
    throw std::runtime_error("entropy_exchange: W-matrix and joint-state routes disagree");
  return s_w;
}

/// I_e = S($(ρ)) − S_e; may be negative.
template <typename T>
T coherent_information(const DensityOperator<T>& rho, const KrausChannel<T>& ch) {
  detail::check_dims(rho, ch, "coherent_information");
  const T s_out = entropy_bits(herm_eig(apply_matrix(ch, rho.matrix())).eigenvalues);
  return s_out - entropy_exchange(rho, ch);
}

template <typename T>
ChannelReport<T> report(const DensityOperator<T>& rho, const KrausChannel<T>& ch) {
  detail::check_dims(rho, ch, "report");
  ChannelReport<T> rep;
  rep.input_entropy = von_neumann_entropy(rho);
  rep.output_entropy = entropy_bits(herm_eig(apply_matrix(ch, rho.matrix())).eigenvalues);
  rep.entanglement_fidelity = entanglement_fidelity(rho, ch);
  rep.entropy_exchange = entropy_exchange(rho, ch);
  rep.coherent_information = rep.output_entropy - rep.entropy_exchange;

  const Index d = ch.dim();
  if (d == 1) {
    // log₂(d²−1) is undefined; a 1-dimensional channel always has F_e = 1
    if (rep.entanglement_fidelity < T(1) - T(1e-9))
      throw std::runtime_error("report: F_e < 1 on a one-dimensional channel");
    rep.fano_lhs = 0;
  } else {
    const T fe = rep.entanglement_fidelity;
    rep.fano_lhs = binary_entropy(fe) + (T(1) - fe) * T(std::log2(double(d) * double(d) - 1.0));
  }
  rep.fano_margin = rep.fano_lhs - rep.entropy_exchange;
  return rep;
}

template <typename T>
DpiReport<T> dpi_report(const DensityOperator<T>& rho, const KrausChannel<T>& ch1,
                        const KrausChannel<T>& ch2) {
  detail::check_dims(rho, ch1, "dpi_report");
  if (ch1.dim() != ch2.dim()) throw DimensionError("dpi_report: channel dimensions differ");
  const KrausChannel<T> both = compose(ch2, ch1);
  DpiReport<T> rep;
  rep.input_entropy = von_neumann_entropy(rho);
  rep.se_stage1 = entropy_exchange(rho, ch1);
  rep.se_both = entropy_exchange(rho, both);
  rep.ie_stage1 =
      entropy_bits(herm_eig(apply_matrix(ch1, rho.matrix())).eigenvalues) - rep.se_stage1;
  rep.ie_both = entropy_bits(herm_eig(apply_matrix(both, rho.matrix())).eigenvalues) - rep.se_both;
  return rep;
}

/// Evolves a purification of ρ through a dilation of the channel and traces
/// down to the reference/environment marginals. rho_rq and rho_re carry
/// layouts {R,Q} and {R,E}.
template <typename T>
JointStates<T> rq_and_re_states(const DensityOperator<T>& rho, const KrausChannel<T>& ch) {
  detail::check_dims(rho, ch, "rq_and_re_states");
  const DensityOperator<T> plain(rho.matrix());
  const PureState<T> psi_rq = purify(plain);
  const Index d = rho.dim();
  const Index r = psi_rq.dim() / d;
  const UnitaryDilation<T> dil = to_dilation(ch);
  const Index m = dil.env_dim();

  CVec<T> psi = CVec<T>::Zero(r * d * m);
  for (Index i = 0; i < r * d; ++i) psi[i * m + 0] = psi_rq.vector()[i];
  psi = kron(CMat<T>::Identity(r, r), dil.unitary()) * psi;

  const SubsystemLayout layout{{"R", r}, {"Q", d}, {"E", m}};
  const CMat<T> full = psi * psi.adjoint();

  JointStates<T> out{
      DensityOperator<T>(partial_trace(full, layout, {"R", "Q"}), layout.keep({"R", "Q"})),
      DensityOperator<T>(partial_trace(full, layout, {"R", "E"}), layout.keep({"R", "E"})),
      DensityOperator<T>(partial_trace(full, layout, {"R"}), layout.keep({"R"})),
      DensityOperator<T>(partial_trace(full, layout, {"E"}), layout.keep({"E"}))};

  const SubsystemLayout rq{{"R", r}, {"Q", d}};
  const SubsystemLayout re{{"R", r}, {"E", m}};
  if ((partial_trace(out.rho_rq.matrix(), rq, {"R"}) - out.rho_r.matrix()).norm() > T(1e-9) ||
      (partial_trace(out.rho_re.matrix(), re, {"R"}) - out.rho_r.matrix()).norm() > T(1e-9))
    throw std::runtime_error("rq_and_re_states: marginals are inconsistent");
  return out;
}

template <typename T>
struct MinFidelityResult {
  T value;
  PureState<T> state;
};

/// Multi-start projected gradient descent of F(φ) = ⟨φ|$(|φ⟩⟨φ|)|φ⟩ over
/// unit vectors in the support of ρ. Accepted steps strictly decrease F;
/// a start converges when the improvement drops below 1e-12. The result is
/// an upper bound on the true minimum fidelity.
template <typename T>
MinFidelityResult<T> min_fidelity_search(const DensityOperator<T>& rho,
                                         const KrausChannel<T>& ch, Index restarts,
                                         std::uint64_t seed) {
  detail::check_dims(rho, ch, "min_fidelity_search");
  if (restarts < 1) throw std::invalid_argument("min_fidelity_search: restarts must be >= 1");

  const auto spec = herm_eig(rho.matrix());
  Index s = 0;
  while (s < rho.dim() && spec.eigenvalues[s] > T(1e-12)) ++s;
  const CMat<T> basis = spec.eigenvectors.leftCols(s);

  std::vector<CMat<T>> m_ops;
  for (const auto& a : ch.operators()) m_ops.push_back(basis.adjoint() * a * basis);

  const auto fidelity = [&](const CVec<T>& c) {
    T f = 0;
    for (const auto& m : m_ops) f += std::norm((c.adjoint() * m * c)(0, 0));
    return f;
  };

  rng::Engine g(seed);
  T best = std::numeric_limits<T>::max();
  CVec<T> best_c = CVec<T>::Unit(s, 0);

  for (Index start = 0; start < restarts; ++start) {
    CVec<T> c = rng::random_unit_cvec<T>(s, g);
    T fc = fidelity(c);
    T step = T(0.25);
    for (int it = 0; it < 500; ++it) {
      CVec<T> grad = CVec<T>::Zero(s);
      for (const auto& m : m_ops) {
        const Complex<T> f_mu = (c.adjoint() * m * c)(0, 0);
        grad += std::conj(f_mu) * (m * c) + f_mu * (m.adjoint() * c);
      }
      grad -= c * (c.adjoint() * grad)(0, 0);
      if (grad.norm() < T(1e-14)) break;

      T improvement = 0;
      while (step >= T(1e-12)) {
        CVec<T> trial = (c - step * grad).normalized();
        const T ft = fidelity(trial);
        if (ft < fc) {
          improvement = fc - ft;
          c = std::move(trial);
          fc = ft;
          step *= T(1.5);
          break;
        }
        step /= T(2);
      }
      if (improvement < T(1e-12)) break;
    }
    if (fc < best) {
      best = fc;
      best_c = c;
    }
  }

  CVec<T> phi = basis * best_c;
  phi.normalize();
  detail::fix_global_phase<T>(phi);
  return {std::clamp(best, T(0), T(1)), PureState<T>(std::move(phi), rho.layout())};
}

}  // namespace qchan
