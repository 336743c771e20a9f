#pragma once

#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "qchan/layout.hpp"
#include "qchan/types.hpp"

namespace qchan {

/// Kronecker product a ⊗ b, evaluated dense.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return Eigen::kroneckerProduct(a.derived(), b.derived()).eval();
}

namespace detail {

/// Flat offsets contributed by the selected factors as their joint
/// mixed-radix index runs over 0..prod(dims)-1. Selected factors are given
/// by (dim, stride) pairs in layout order.
inline std::vector<Index> factor_offsets(const std::vector<std::pair<Index, Index>>& sel) {
  Index count = 1;
  for (const auto& [dim, stride] : sel) count *= dim;
  std::vector<Index> off(static_cast<std::size_t>(count), 0);
  for (Index x = 0; x < count; ++x) {
    Index rem = x;
    Index o = 0;
    for (auto it = sel.rbegin(); it != sel.rend(); ++it) {
      o += (rem % it->first) * it->second;
      rem /= it->first;
    }
    off[static_cast<std::size_t>(x)] = o;
  }
  return off;
}

}  // namespace detail

/// Partial trace of a square matrix over the factors NOT listed in `keep`.
/// The result lives on the kept factors, ordered as in the layout. The trace
/// is preserved.
template <typename T>
CMat<T> partial_trace(const CMat<T>& m, const SubsystemLayout& layout,
                      const std::vector<std::string>& keep) {
  if (m.rows() != m.cols()) throw DimensionError("partial_trace: matrix is not square");
  if (m.rows() != layout.total_dim())
    throw DimensionError("partial_trace: matrix dimension does not match layout");
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");

  const auto& fs = layout.factors();
  std::vector<char> kept(fs.size(), 0);
  for (const auto& l : keep) kept[layout.position(l)] = 1;

  std::vector<Index> stride(fs.size());
  Index s = 1;
  for (std::size_t i = fs.size(); i-- > 0;) {
    stride[i] = s;
    s *= fs[i].dim;
  }

  std::vector<std::pair<Index, Index>> keep_sel, trace_sel;
  for (std::size_t i = 0; i < fs.size(); ++i)
    (kept[i] ? keep_sel : trace_sel).emplace_back(fs[i].dim, stride[i]);

  const auto keep_off = detail::factor_offsets(keep_sel);
  const auto trace_off = detail::factor_offsets(trace_sel);

  const Index dk = static_cast<Index>(keep_off.size());
  CMat<T> out = CMat<T>::Zero(dk, dk);
  for (Index r = 0; r < dk; ++r)
    for (Index c = 0; c < dk; ++c) {
      Complex<T> acc(0);
      for (const Index t : trace_off) acc += m(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = acc;
    }
  return out;
}

}  // namespace qchan
