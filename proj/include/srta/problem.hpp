#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "srta/coeff.hpp"
#include "srta/error.hpp"

namespace srta {

/// Spin assignment, entries in {-1,+1}.
using SpinState = std::vector<std::int8_t>;
/// Binary assignment, entries in {0,1}.
using BinaryState = std::vector<std::uint8_t>;

using IndexPair = std::pair<std::int32_t, std::int32_t>;

inline BinaryState spin_to_binary(const SpinState& s) {
  BinaryState x(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != 1 && s[i] != -1)
      throw dimension_error("spin value outside {-1,+1}");
    x[i] = s[i] == 1 ? 1 : 0;
  }
  return x;
}

inline SpinState binary_to_spin(const BinaryState& x) {
  SpinState s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 1) throw dimension_error("binary value outside {0,1}");
    s[i] = x[i] ? 1 : -1;
  }
  return s;
}

/// Minimization target  sum_i h_i s_i + sum_{i<j} J_ij s_i s_j + offset
/// over spins s_i in {-1,+1}. Couplings are kept upper-triangular (i<j);
/// a term given as (j,i) is folded into (i,j). Stored couplings are
/// always nonzero.
class IsingProblem {
 public:
  IsingProblem() = default;
  explicit IsingProblem(std::int32_t n) : n_(n), h_(n) {}

  std::int32_t n() const { return n_; }
  const std::vector<Coeff>& bias() const { return h_; }
  const std::map<IndexPair, Coeff>& couplings() const { return j_; }
  const Coeff& offset() const { return offset_; }

  const Coeff& bias(std::int32_t i) const { return h_.at(i); }
  Coeff coupling(std::int32_t i, std::int32_t j) const {
    auto it = j_.find(canonical(i, j));
    return it == j_.end() ? Coeff{} : it->second;
  }

  void set_offset(Coeff c) { offset_ = c; }
  void add_offset(Coeff c) { offset_ += c; }

  void add_bias(std::int32_t i, Coeff c) {
    check_index(i);
    h_[i] += c;
  }

  void add_coupling(std::int32_t i, std::int32_t j, Coeff c) {
    if (i == j) throw dimension_error("self-coupling is not representable");
    check_index(i);
    check_index(j);
    if (c.is_zero()) return;
    auto key = canonical(i, j);
    auto [it, inserted] = j_.emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) j_.erase(it);
    }
  }

  friend bool operator==(const IsingProblem& a, const IsingProblem& b) {
    return a.n_ == b.n_ && a.h_ == b.h_ && a.j_ == b.j_ &&
           a.offset_ == b.offset_;
  }

 private:
  static IndexPair canonical(std::int32_t i, std::int32_t j) {
    return i < j ? IndexPair{i, j} : IndexPair{j, i};
  }
  void check_index(std::int32_t i) const {
    if (i < 0 || i >= n_) throw dimension_error("variable index out of range");
  }

  std::int32_t n_ = 0;
  std::vector<Coeff> h_;
  std::map<IndexPair, Coeff> j_;
  Coeff offset_;
};

/// Minimization target  sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j + offset
/// over binary x. The diagonal (linear part) is dense, off-diagonal terms
/// sparse with i<j canonical and nonzero.
class QuboProblem {
 public:
  QuboProblem() = default;
  explicit QuboProblem(std::int32_t n) : n_(n), diag_(n) {}

  std::int32_t n() const { return n_; }
  const std::vector<Coeff>& diagonal() const { return diag_; }
  const std::map<IndexPair, Coeff>& off_diagonal() const { return q_; }
  const Coeff& offset() const { return offset_; }

  void set_offset(Coeff c) { offset_ = c; }
  void add_offset(Coeff c) { offset_ += c; }

  /// Accumulate Q_ij; i==j targets the linear term.
  void add_term(std::int32_t i, std::int32_t j, Coeff c) {
    check_index(i);
    check_index(j);
    if (i == j) {
      diag_[i] += c;
      return;
    }
    if (c.is_zero()) return;
    auto key = i < j ? IndexPair{i, j} : IndexPair{j, i};
    auto [it, inserted] = q_.emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) q_.erase(it);
    }
  }

  /// Count of nonzero coefficients in the canonical upper-triangular
  /// representation, diagonal included.
  std::int64_t nonzero_count() const {
    std::int64_t count = static_cast<std::int64_t>(q_.size());
    for (const auto& d : diag_)
      if (!d.is_zero()) ++count;
    return count;
  }

  friend bool operator==(const QuboProblem& a, const QuboProblem& b) {
    return a.n_ == b.n_ && a.diag_ == b.diag_ && a.q_ == b.q_ &&
           a.offset_ == b.offset_;
  }

 private:
  void check_index(std::int32_t i) const {
    if (i < 0 || i >= n_) throw dimension_error("variable index out of range");
  }

  std::int32_t n_ = 0;
  std::vector<Coeff> diag_;
  std::map<IndexPair, Coeff> q_;
  Coeff offset_;
};

inline Coeff energy_ising(const IsingProblem& p, const SpinState& s) {
  if (static_cast<std::int32_t>(s.size()) != p.n())
    throw dimension_error("state length does not match problem size");
  Coeff e = p.offset();
  for (std::int32_t i = 0; i < p.n(); ++i) e += p.bias()[i].times(s[i]);
  for (const auto& [ij, c] : p.couplings())
    e += c.times(static_cast<std::int64_t>(s[ij.first]) * s[ij.second]);
  return e;
}

inline Coeff energy_qubo(const QuboProblem& p, const BinaryState& x) {
  if (static_cast<std::int32_t>(x.size()) != p.n())
    throw dimension_error("state length does not match problem size");
  Coeff e = p.offset();
  for (std::int32_t i = 0; i < p.n(); ++i)
    if (x[i]) e += p.diagonal()[i];
  for (const auto& [ij, c] : p.off_diagonal())
    if (x[ij.first] && x[ij.second]) e += c;
  return e;
}

/// Substitute x_i = (s_i + 1)/2:
///   Q_ii x_i          -> h_i += Q_ii/2,               offset += Q_ii/2
///   Q_ij x_i x_j      -> J_ij += Q_ij/4, h_{i,j} += Q_ij/4, offset += Q_ij/4
/// Energies agree exactly on corresponding states.
inline IsingProblem qubo_to_ising(const QuboProblem& p) {
  IsingProblem out(p.n());
  out.set_offset(p.offset());
  for (std::int32_t i = 0; i < p.n(); ++i) {
    const Coeff& d = p.diagonal()[i];
    if (d.is_zero()) continue;
    out.add_bias(i, d.half());
    out.add_offset(d.half());
  }
  for (const auto& [ij, c] : p.off_diagonal()) {
    Coeff q4 = c.quarter();
    out.add_coupling(ij.first, ij.second, q4);
    out.add_bias(ij.first, q4);
    out.add_bias(ij.second, q4);
    out.add_offset(q4);
  }
  return out;
}

/// Substitute s_i = 2 x_i - 1:
///   h_i s_i      -> Q_ii += 2 h_i,                       offset -= h_i
///   J_ij s_i s_j -> Q_ij += 4 J_ij, Q_{ii,jj} -= 2 J_ij, offset += J_ij
inline QuboProblem ising_to_qubo(const IsingProblem& p) {
  QuboProblem out(p.n());
  out.set_offset(p.offset());
  for (std::int32_t i = 0; i < p.n(); ++i) {
    const Coeff& h = p.bias()[i];
    if (h.is_zero()) continue;
    out.add_term(i, i, h.times(2));
    out.add_offset(-h);
  }
  for (const auto& [ij, c] : p.couplings()) {
    out.add_term(ij.first, ij.second, c.times(4));
    out.add_term(ij.first, ij.first, c.times(-2));
    out.add_term(ij.second, ij.second, c.times(-2));
    out.add_offset(c);
  }
  return out;
}

}  // namespace srta
