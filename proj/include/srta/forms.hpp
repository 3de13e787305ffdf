#pragma once

#include <cstdint>
#include <map>
#include <utility>

namespace srta {

/// Affine expression constant + sum of coefficient * variable, keyed by an
/// ordered variable identifier. Zero coefficients are never stored, so two
/// forms are equal iff their maps and constants are equal.
template <class Key, class Val>
class LinearForm {
 public:
  using term_map = std::map<Key, Val>;

  LinearForm() = default;
  explicit LinearForm(Val constant) : constant_(std::move(constant)) {}

  const Val& constant() const { return constant_; }
  const term_map& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  void add_constant(const Val& v) { constant_ = constant_ + v; }

  void add_term(const Key& k, const Val& v) {
    if (v == Val{}) return;
    auto [it, inserted] = terms_.emplace(k, v);
    if (!inserted) {
      it->second = it->second + v;
      if (it->second == Val{}) terms_.erase(it);
    }
  }

  Val coefficient(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Val{} : it->second;
  }

  LinearForm& operator+=(const LinearForm& o) {
    add_constant(o.constant_);
    for (const auto& [k, v] : o.terms_) add_term(k, v);
    return *this;
  }

  /// Value of the form under a 0/1 assignment of the variables.
  template <class BitOf>
  Val evaluate_binary(BitOf&& bit_of) const {
    Val acc = constant_;
    for (const auto& [k, v] : terms_)
      if (bit_of(k)) acc = acc + v;
    return acc;
  }

  friend bool operator==(const LinearForm& a, const LinearForm& b) {
    return a.constant_ == b.constant_ && a.terms_ == b.terms_;
  }

 private:
  Val constant_{};
  term_map terms_;
};

}  // namespace srta
