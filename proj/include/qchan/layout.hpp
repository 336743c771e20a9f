#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "qchan/types.hpp"

namespace qchan {

/// Ordered tensor-factor structure of a compound Hilbert space, e.g.
/// {{"R",2},{"Q",4},{"E",2}}. Labels are unique; the total dimension is the
/// product of factor dimensions. Row-major (mixed-radix) index convention:
/// the last factor varies fastest.
class SubsystemLayout {
 public:
  struct Factor {
    std::string label;
    Index dim;
  };

  SubsystemLayout() = default;

  SubsystemLayout(std::initializer_list<Factor> factors)
      : SubsystemLayout(std::vector<Factor>(factors)) {}

  explicit SubsystemLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (factors_[i].dim < 1)
        throw std::invalid_argument("SubsystemLayout: factor '" + factors_[i].label +
                                    "' has dimension < 1");
      for (std::size_t j = 0; j < i; ++j)
        if (factors_[j].label == factors_[i].label)
          throw std::invalid_argument("SubsystemLayout: duplicate label '" + factors_[i].label +
                                      "'");
    }
  }

  static SubsystemLayout single(std::string label, Index dim) {
    return SubsystemLayout({Factor{std::move(label), dim}});
  }

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }

  Index total_dim() const {
    Index d = 1;
    for (const auto& f : factors_) d *= f.dim;
    return d;
  }

  bool has(const std::string& label) const {
    for (const auto& f : factors_)
      if (f.label == label) return true;
    return false;
  }

  /// Position of a factor within the layout; throws on unknown labels.
  std::size_t position(const std::string& label) const {
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (factors_[i].label == label) return i;
    throw DimensionError("SubsystemLayout: unknown label '" + label + "'");
  }

  Index dim_of(const std::string& label) const { return factors_[position(label)].dim; }

  /// Sub-layout of the given labels, in layout order.
  SubsystemLayout keep(const std::vector<std::string>& labels) const {
    std::vector<Factor> out;
    for (const auto& f : factors_)
      for (const auto& l : labels)
        if (f.label == l) {
          out.push_back(f);
          break;
        }
    return SubsystemLayout(std::move(out));
  }

  /// Layout with the given labels removed.
  SubsystemLayout drop(const std::vector<std::string>& labels) const {
    std::vector<Factor> out;
    for (const auto& f : factors_) {
      bool dropped = false;
      for (const auto& l : labels) dropped = dropped || f.label == l;
      if (!dropped) out.push_back(f);
    }
    return SubsystemLayout(std::move(out));
  }

  /// New layout with `front` prepended.
  SubsystemLayout prepend(Factor front) const {
    std::vector<Factor> out;
    out.reserve(factors_.size() + 1);
    out.push_back(std::move(front));
    out.insert(out.end(), factors_.begin(), factors_.end());
    return SubsystemLayout(std::move(out));
  }

 private:
  std::vector<Factor> factors_;
};

}  // namespace qchan
