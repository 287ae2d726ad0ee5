#include "arfinsler/tensor.hpp"

#include "arfinsler/errors.hpp"

namespace arf {

Tensor::Tensor(Kernel k, std::string variance) : kernel_(std::move(k)), variance_(std::move(variance)) {
  for (char c : variance_)
    if (c != 'u' && c != 'l') throw InvalidArgument("variance must use 'u' and 'l'");
  std::size_t count = 1;
  for (std::size_t i = 0; i < variance_.size(); ++i) count *= kernel_->n;
  entries_.assign(count, FieldElem(kernel_));
}

std::size_t Tensor::flat_index(std::initializer_list<int> idx) const {
  if (static_cast<int>(idx.size()) != rank()) throw ArityError("wrong number of tensor indices");
  std::size_t f = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim()) throw InvalidArgument("tensor index out of range");
    f = f * dim() + i;
  }
  return f;
}

std::size_t Tensor::flat_index(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != rank()) throw ArityError("wrong number of tensor indices");
  std::size_t f = 0;
  for (int i : idx) f = f * dim() + i;
  return f;
}

std::vector<int> Tensor::multi_index(std::size_t flat) const {
  std::vector<int> idx(rank());
  for (int p = rank() - 1; p >= 0; --p) {
    idx[p] = static_cast<int>(flat % dim());
    flat /= dim();
  }
  return idx;
}

bool Tensor::is_zero() const {
  for (const auto& e : entries_)
    if (!e.is_zero()) return false;
  return true;
}

bool Tensor::is_rational() const {
  for (const auto& e : entries_)
    if (!e.is_rational()) return false;
  return true;
}

std::set<int> Tensor::support() const {
  std::set<int> s;
  for (const auto& e : entries_) {
    auto t = theta_support(e);
    s.insert(t.begin(), t.end());
  }
  return s;
}

bool Tensor::symmetric_in(int a, int b) const {
  for (std::size_t f = 0; f < entries_.size(); ++f) {
    auto idx = multi_index(f);
    if (idx[a] >= idx[b]) continue;
    std::swap(idx[a], idx[b]);
    if (entries_[f] != entries_[flat_index(idx)]) return false;
  }
  return true;
}

void Tensor::declare_symmetric(int a, int b) {
  if (!symmetric_in(a, b)) throw InternalInconsistency("declared tensor symmetry does not hold");
  symmetries_.emplace_back(a, b);
}

bool operator==(const Tensor& a, const Tensor& b) {
  return a.variance_ == b.variance_ && a.entries_ == b.entries_;
}

Tensor scalar_tensor(const FieldElem& f) {
  Tensor t(f.kernel(), "");
  t[0] = f;
  return t;
}

}  // namespace arf
