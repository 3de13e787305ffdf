#pragma once

#include "srta/attack.hpp"
#include "srta/e0.hpp"
#include "srta/problem.hpp"
#include "srta/reduction.hpp"

namespace srta {

/// The generator an adversary rebuilds from public knowledge: keystream ->
/// equation system -> penalty QUBO -> Ising instance. Deterministic, and
/// affine in the stream bits (the premise the attack validates).
inline Oracle make_cipher_oracle(const CipherSpec& spec,
                                 SlackWidthRule rule = SlackWidthRule::BoundBits) {
  return [spec, rule](const std::vector<std::uint8_t>& z) {
    AlgebraicSystem sys = build_equation_system(spec, z);
    ReductionResult red = reduce(sys, rule);
    return qubo_to_ising(red.qubo);
  };
}

}  // namespace srta
