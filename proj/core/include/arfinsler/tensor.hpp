#pragma once

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "arfinsler/algext.hpp"

namespace arf {

/// Dense tensor of field elements.
///
/// The variance string has one character per index, 'u' for upper and 'l'
/// for lower, e.g. "ull" for G^i_jk. Indices are 0-based and the last index
/// varies fastest.
class Tensor {
 public:
  Tensor() = default;
  /// Zero tensor.
  Tensor(Kernel k, std::string variance);

  const Kernel& kernel() const { return kernel_; }
  int dim() const { return kernel_->n; }
  int rank() const { return static_cast<int>(variance_.size()); }
  const std::string& variance() const { return variance_; }
  std::size_t size() const { return entries_.size(); }

  FieldElem& operator[](std::size_t flat) { return entries_[flat]; }
  const FieldElem& operator[](std::size_t flat) const { return entries_[flat]; }
  FieldElem& at(std::initializer_list<int> idx) { return entries_[flat_index(idx)]; }
  const FieldElem& at(std::initializer_list<int> idx) const { return entries_[flat_index(idx)]; }
  template <class... I>
  FieldElem& operator()(I... idx) {
    return at({static_cast<int>(idx)...});
  }
  template <class... I>
  const FieldElem& operator()(I... idx) const {
    return at({static_cast<int>(idx)...});
  }

  std::size_t flat_index(std::initializer_list<int> idx) const;
  std::size_t flat_index(const std::vector<int>& idx) const;
  std::vector<int> multi_index(std::size_t flat) const;

  bool is_zero() const;
  /// True when every entry has theta-support within {0}.
  bool is_rational() const;
  /// Union of theta-supports of all entries.
  std::set<int> support() const;

  /// True when the entries are invariant under swapping indices a and b.
  bool symmetric_in(int a, int b) const;
  /// Records a symmetry after checking it holds; throws InternalInconsistency otherwise.
  void declare_symmetric(int a, int b);
  const std::vector<std::pair<int, int>>& symmetries() const { return symmetries_; }

  friend bool operator==(const Tensor& a, const Tensor& b);
  friend bool operator!=(const Tensor& a, const Tensor& b) { return !(a == b); }

 private:
  Kernel kernel_;
  std::string variance_;
  std::vector<FieldElem> entries_;
  std::vector<std::pair<int, int>> symmetries_;
};

/// A scalar promoted to a rank-0 tensor.
Tensor scalar_tensor(const FieldElem& f);

}  // namespace arf
