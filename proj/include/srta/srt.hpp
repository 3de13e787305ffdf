#pragma once

#include <cstdint>
#include <vector>

#include "srta/error.hpp"
#include "srta/problem.hpp"

namespace srta {

/// Binary key used to flip coefficient signs before a problem leaves the
/// client. Coefficients equal to zero are unaffected by any key bit.
struct ConcealmentKey {
  std::vector<std::uint8_t> bits;

  std::int32_t n() const { return static_cast<std::int32_t>(bits.size()); }

  friend bool operator==(const ConcealmentKey& a, const ConcealmentKey& b) {
    return a.bits == b.bits;
  }
};

/// Draw a key from a caller-supplied generator; tests pass fixed seeds.
template <class Urbg>
ConcealmentKey random_key(std::int32_t n, Urbg&& rng) {
  ConcealmentKey key;
  key.bits.resize(n);
  for (auto& b : key.bits) b = static_cast<std::uint8_t>(rng() & 1u);
  return key;
}

///   h*_i = (-1)^{x_i} h_i,  J*_ij = (-1)^{x_i + x_j} J_ij.
/// The offset is untouched; the energy spectrum is preserved.
inline IsingProblem conceal(const IsingProblem& p, const ConcealmentKey& key) {
  if (key.n() != p.n())
    throw dimension_error("key length does not match problem size");
  IsingProblem out(p.n());
  out.set_offset(p.offset());
  for (std::int32_t i = 0; i < p.n(); ++i) {
    const Coeff& h = p.bias()[i];
    if (!h.is_zero()) out.add_bias(i, key.bits[i] ? -h : h);
  }
  for (const auto& [ij, c] : p.couplings()) {
    bool flip = (key.bits[ij.first] ^ key.bits[ij.second]) != 0;
    out.add_coupling(ij.first, ij.second, flip ? -c : c);
  }
  return out;
}

/// conceal is an involution for a fixed key.
inline IsingProblem reveal_problem(const IsingProblem& concealed,
                                   const ConcealmentKey& key) {
  return conceal(concealed, key);
}

///   s_i = (-1)^{x_i} s*_i
inline SpinState reveal_solution(const SpinState& masked,
                                 const ConcealmentKey& key) {
  if (key.n() != static_cast<std::int32_t>(masked.size()))
    throw dimension_error("key length does not match state length");
  SpinState s(masked.size());
  for (std::size_t i = 0; i < masked.size(); ++i)
    s[i] = key.bits[i] ? static_cast<std::int8_t>(-masked[i]) : masked[i];
  return s;
}

}  // namespace srta
