#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srta/coeff.hpp"
#include "srta/error.hpp"
#include "srta/forms.hpp"
#include "srta/problem.hpp"
#include "srta/srt.hpp"

namespace srta {

/// Deterministic generator mapping a keystream to the Ising instance the
/// client would submit. The adversary can rebuild it from public knowledge
/// of the optimization task.
using Oracle = std::function<IsingProblem(const std::vector<std::uint8_t>&)>;

/// Affine expression in the keystream bits z_0..z_{len-1}.
using ZForm = LinearForm<std::int32_t, Coeff>;

/// Problem coefficients expressed as affine functions of the keystream.
struct ParameterizedProblem {
  std::int32_t n = 0;
  std::int32_t stream_len = 0;
  std::vector<ZForm> bias;
  std::map<IndexPair, ZForm> coupling;
  ZForm offset;
  std::int32_t oracle_calls = 0;

  std::vector<Coeff> bias_at(const std::vector<std::uint8_t>& z) const {
    check_stream(z);
    std::vector<Coeff> h(bias.size());
    for (std::size_t i = 0; i < bias.size(); ++i)
      h[i] = bias[i].evaluate_binary([&](std::int32_t k) { return z[k] & 1; });
    return h;
  }

  IsingProblem problem_at(const std::vector<std::uint8_t>& z) const {
    check_stream(z);
    IsingProblem p(n);
    auto bit = [&](std::int32_t k) { return z[k] & 1; };
    for (std::int32_t i = 0; i < n; ++i)
      p.add_bias(i, bias[i].evaluate_binary(bit));
    for (const auto& [ij, form] : coupling)
      p.add_coupling(ij.first, ij.second, form.evaluate_binary(bit));
    p.set_offset(offset.evaluate_binary(bit));
    return p;
  }

 private:
  void check_stream(const std::vector<std::uint8_t>& z) const {
    if (static_cast<std::int32_t>(z.size()) != stream_len)
      throw dimension_error("stream length does not match parameterization");
  }
};

/// Query the zero stream and every Hamming-weight-1 stream (stream_len + 1
/// oracle calls) and assemble
///   h^P = h_inf + sum_i (h_i - h_inf) z_i
/// and likewise for the couplings and offset.
inline ParameterizedProblem parameterize(const Oracle& oracle,
                                         std::int32_t stream_len) {
  if (stream_len < 1) throw dimension_error("stream length must be >= 1");

  std::vector<std::uint8_t> z(stream_len, 0);
  IsingProblem base = oracle(z);

  ParameterizedProblem param;
  param.n = base.n();
  param.stream_len = stream_len;
  param.oracle_calls = 1;
  param.bias.resize(base.n());
  for (std::int32_t j = 0; j < base.n(); ++j)
    param.bias[j] = ZForm(base.bias()[j]);
  for (const auto& [ij, c] : base.couplings()) param.coupling[ij] = ZForm(c);
  param.offset = ZForm(base.offset());

  for (std::int32_t i = 0; i < stream_len; ++i) {
    z.assign(stream_len, 0);
    z[i] = 1;
    IsingProblem unit = oracle(z);
    ++param.oracle_calls;
    if (unit.n() != base.n())
      throw inconsistency_error("oracle changed problem size between queries");

    for (std::int32_t j = 0; j < base.n(); ++j)
      param.bias[j].add_term(i, unit.bias()[j] - base.bias()[j]);

    auto delta_coupling = [&](const IndexPair& key, Coeff value) {
      Coeff d = value - base.coupling(key.first, key.second);
      if (d.is_zero()) return;
      auto [it, inserted] = param.coupling.try_emplace(key, ZForm{});
      it->second.add_term(i, d);
    };
    for (const auto& [ij, c] : unit.couplings()) delta_coupling(ij, c);
    for (const auto& [ij, c] : base.couplings())
      if (unit.coupling(ij.first, ij.second).is_zero()) delta_coupling(ij, Coeff{});

    param.offset.add_term(i, unit.offset() - base.offset());
  }
  return param;
}

/// One row of the linear system h^P_i(z) = +-h*_i, kept only where the
/// parameterized entry actually depends on the stream.
struct AttackEquation {
  std::int32_t row = 0;
  ZForm lhs;
  Coeff rhs;
};

inline std::vector<AttackEquation> setup_system(
    const ParameterizedProblem& param, const std::vector<Coeff>& h_star) {
  if (static_cast<std::int32_t>(h_star.size()) != param.n)
    throw dimension_error("intercepted bias length does not match oracle");
  std::vector<AttackEquation> eqs;
  for (std::int32_t i = 0; i < param.n; ++i)
    if (!param.bias[i].is_constant())
      eqs.push_back({i, param.bias[i], h_star[i]});
  return eqs;
}

/// Elimination order: always take an equation with exactly one unsolved
/// stream bit, preferring unit coefficients (their two concealment
/// hypotheses can never both produce a binary value for nonzero rhs).
struct SolvePlan {
  struct Step {
    std::int32_t eq;       // index into the equation list
    std::int32_t z_index;  // stream bit this step determines
  };
  std::vector<Step> steps;
};

inline SolvePlan select_and_order(const std::vector<AttackEquation>& eqs,
                                  std::int32_t stream_len) {
  std::vector<bool> solved(stream_len, false);
  std::vector<bool> used(eqs.size(), false);
  SolvePlan plan;
  for (std::int32_t round = 0; round < stream_len; ++round) {
    std::int32_t pick = -1, pick_bit = -1;
    bool pick_unit = false;
    for (std::size_t e = 0; e < eqs.size(); ++e) {
      if (used[e]) continue;
      std::int32_t unsolved_bit = -1;
      int unsolved = 0;
      for (const auto& [k, c] : eqs[e].lhs.terms()) {
        if (!solved[k]) {
          ++unsolved;
          unsolved_bit = k;
        }
      }
      if (unsolved != 1) continue;
      bool unit = eqs[e].lhs.coefficient(unsolved_bit).abs() ==
                  Coeff::from_int(1);
      if (pick < 0 || (unit && !pick_unit)) {
        pick = static_cast<std::int32_t>(e);
        pick_bit = unsolved_bit;
        pick_unit = unit;
        if (unit) break;
      }
    }
    if (pick < 0)
      throw inconsistency_error(
          "no solvable ordering: every remaining equation has several "
          "unknown stream bits");
    used[pick] = true;
    solved[pick_bit] = true;
    plan.steps.push_back({pick, pick_bit});
  }
  return plan;
}

enum class KeyBit : std::uint8_t { Zero = 0, One = 1, Undetermined = 2 };

inline char key_bit_char(KeyBit b) {
  switch (b) {
    case KeyBit::Zero: return '0';
    case KeyBit::One: return '1';
    case KeyBit::Undetermined: return '?';
  }
  return '?';
}

/// One hypothesis that survived the binary-range test of an equation
/// a z_k + b = +-h*.
struct BitCandidate {
  std::uint8_t z = 0;
  KeyBit key = KeyBit::Undetermined;
};

/// Test both concealment hypotheses of a single-unknown equation:
///   unconcealed:  z = (h* - b)/a  in {0,1}  -> key bit 0
///   concealed:    z = (-h* - b)/a in {0,1}  -> key bit 1
/// For h* = 0 the hypotheses coincide and the key bit stays undetermined.
/// No candidates means the equation cannot be explained; two candidates
/// (necessarily with different z) must be settled by cross-checking.
inline std::vector<BitCandidate> solve_bit(const Coeff& a, const Coeff& b,
                                           const Coeff& h_star) {
  auto binary_solution = [&](const Coeff& target) -> std::optional<std::uint8_t> {
    Coeff num = target - b;
    if (num.is_zero()) return 0;
    if (num == a) return 1;
    return std::nullopt;
  };
  std::vector<BitCandidate> out;
  auto unconcealed = binary_solution(h_star);
  auto concealed = binary_solution(-h_star);
  if (h_star.is_zero()) {
    if (unconcealed) out.push_back({*unconcealed, KeyBit::Undetermined});
    return out;
  }
  if (unconcealed) out.push_back({*unconcealed, KeyBit::Zero});
  if (concealed) out.push_back({*concealed, KeyBit::One});
  return out;
}

struct EvidenceEntry {
  std::string kind;       // bias-solve, cross-check, branch, bias-sign, parity
  std::int32_t row = -1;  // coefficient index the evidence came from
  std::int32_t z_index = -1;
  std::string hypothesis;
};

struct AttackResult {
  std::vector<std::uint8_t> keystream;
  std::vector<KeyBit> key;
  std::vector<EvidenceEntry> evidence;
  bool verified = false;
  std::int32_t oracle_calls = 0;
};

/// Fill key bits not fixed during equation analysis by comparing signs of
/// the regenerated bias with the intercepted one. Zero coefficients leave
/// their key bit undetermined.
inline void recover_remaining_key(const std::vector<Coeff>& h_at_z,
                                  const std::vector<Coeff>& h_star,
                                  std::vector<KeyBit>& key,
                                  std::vector<EvidenceEntry>* evidence) {
  if (h_at_z.size() != h_star.size() || key.size() != h_star.size())
    throw dimension_error("bias vector lengths do not agree");
  for (std::size_t i = 0; i < h_at_z.size(); ++i) {
    const Coeff& h = h_at_z[i];
    const Coeff& hs = h_star[i];
    if (h.is_zero()) {
      if (!hs.is_zero())
        throw inconsistency_error(
            "intercepted bias is nonzero where the generator produces zero "
            "(row " + std::to_string(i) + ")");
      continue;
    }
    KeyBit expected;
    if (hs == h)
      expected = KeyBit::Zero;
    else if (hs == -h)
      expected = KeyBit::One;
    else
      throw inconsistency_error("intercepted bias at row " +
                                std::to_string(i) +
                                " matches neither sign of the regenerated "
                                "coefficient");
    if (key[i] == KeyBit::Undetermined) {
      key[i] = expected;
      if (evidence)
        evidence->push_back({"bias-sign", static_cast<std::int32_t>(i), -1,
                             expected == KeyBit::One ? "concealed"
                                                     : "unconcealed"});
    } else if (key[i] != expected) {
      throw inconsistency_error("key bit " + std::to_string(i) +
                                " contradicts the bias sign comparison");
    }
  }
}

struct ParityViolation {
  IndexPair pair;
  std::string reason;
};

/// Validate coupling signs against (-1)^{x_i + x_j} and fix undetermined
/// key bits whose partner is known. Verdict-valued: violations are
/// returned, not thrown.
inline std::vector<ParityViolation> check_key_parity(
    const std::map<IndexPair, Coeff>& j_at_z,
    const std::map<IndexPair, Coeff>& j_star, std::vector<KeyBit>& key,
    std::vector<EvidenceEntry>* evidence) {
  std::vector<ParityViolation> violations;
  for (const auto& [ij, c] : j_star)
    if (!c.is_zero() && j_at_z.find(ij) == j_at_z.end())
      violations.push_back({ij, "coupling absent from the regenerated problem"});

  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& [ij, c] : j_at_z) {
      if (c.is_zero()) continue;
      auto it = j_star.find(ij);
      Coeff cs = it == j_star.end() ? Coeff{} : it->second;
      if (cs != c && cs != -c) {
        // Report each magnitude mismatch once.
        bool seen = false;
        for (const auto& v : violations)
          if (v.pair == ij) seen = true;
        if (!seen)
          violations.push_back({ij, "coupling magnitude differs"});
        continue;
      }
      bool flip = cs == -c;
      KeyBit& xi = key[ij.first];
      KeyBit& xj = key[ij.second];
      bool i_known = xi != KeyBit::Undetermined;
      bool j_known = xj != KeyBit::Undetermined;
      if (i_known && j_known) {
        bool parity = (xi == KeyBit::One) ^ (xj == KeyBit::One);
        if (parity != flip) {
          bool seen = false;
          for (const auto& v : violations)
            if (v.pair == ij) seen = true;
          if (!seen) violations.push_back({ij, "coupling sign contradicts key"});
        }
      } else if (i_known != j_known) {
        KeyBit known = i_known ? xi : xj;
        KeyBit fixed = ((known == KeyBit::One) ^ flip) ? KeyBit::One
                                                       : KeyBit::Zero;
        (i_known ? xj : xi) = fixed;
        if (evidence)
          evidence->push_back({"parity",
                               i_known ? ij.second : ij.first, -1,
                               flip ? "concealed" : "unconcealed"});
        progress = true;
      }
    }
  }
  return violations;
}

struct AttackOptions {
  bool use_j_validation = false;
  std::int32_t branch_bound = 8;
};

namespace detail {

struct PendingBit {
  std::int32_t z_index;
  std::int32_t row;
  std::vector<BitCandidate> candidates;
};

/// Key recovery, optional parity validation, and full reconstruction
/// check for a complete keystream hypothesis. Throws inconsistency_error
/// when the hypothesis cannot explain the intercepted problem.
inline void finish_attack(const ParameterizedProblem& param,
                          const IsingProblem& intercepted,
                          const AttackOptions& opts,
                          AttackResult& result) {
  std::vector<Coeff> h = param.bias_at(result.keystream);
  std::vector<Coeff> h_star(intercepted.bias());
  recover_remaining_key(h, h_star, result.key, &result.evidence);

  IsingProblem regen = param.problem_at(result.keystream);

  if (opts.use_j_validation) {
    auto violations = check_key_parity(regen.couplings(),
                                       intercepted.couplings(), result.key,
                                       &result.evidence);
    if (!violations.empty())
      throw inconsistency_error(
          "coupling parity check failed at " +
          std::to_string(violations.size()) + " pair(s), first (" +
          std::to_string(violations.front().pair.first) + "," +
          std::to_string(violations.front().pair.second) + "): " +
          violations.front().reason);
  }

  // Reconstruction: concealing the regenerated problem with the recovered
  // key must reproduce every observable coefficient.
  ConcealmentKey effective;
  effective.bits.resize(result.key.size());
  for (std::size_t i = 0; i < result.key.size(); ++i)
    effective.bits[i] = result.key[i] == KeyBit::One ? 1 : 0;
  IsingProblem reconstructed = conceal(regen, effective);
  for (std::int32_t i = 0; i < param.n; ++i)
    if (reconstructed.bias()[i] != intercepted.bias()[i])
      throw inconsistency_error("verification mismatch in bias row " +
                                std::to_string(i));
  if (opts.use_j_validation && reconstructed.couplings() != intercepted.couplings())
    throw inconsistency_error("verification mismatch in the couplings");
  if (reconstructed.offset() != intercepted.offset())
    throw inconsistency_error("verification mismatch in the offset");
  result.verified = true;
}

}  // namespace detail

/// Full attack pipeline: parameterize the generator, set up the linear
/// system against the intercepted bias vector, analyze the equations in
/// elimination order, recover the remaining key bits by sign comparison
/// (plus coupling parity when enabled), and verify the reconstruction.
/// Ambiguous bits (both hypotheses binary) are first cross-checked against
/// other rows and then resolved by bounded branching.
inline AttackResult run_attack(const Oracle& oracle,
                               const IsingProblem& intercepted,
                               std::int32_t stream_len,
                               const AttackOptions& opts = {}) {
  ParameterizedProblem param = parameterize(oracle, stream_len);
  if (param.n != intercepted.n())
    throw inconsistency_error(
        "intercepted problem has " + std::to_string(intercepted.n()) +
        " variables but the generator produces " + std::to_string(param.n));

  std::vector<Coeff> h_star(intercepted.bias());
  std::vector<AttackEquation> eqs = setup_system(param, h_star);
  SolvePlan plan = select_and_order(eqs, stream_len);

  AttackResult result;
  result.oracle_calls = param.oracle_calls;
  result.key.assign(param.n, KeyBit::Undetermined);

  std::vector<std::optional<std::uint8_t>> z(stream_len);
  std::vector<detail::PendingBit> pending;

  auto reduce_row = [&](const std::vector<std::optional<std::uint8_t>>& bits,
                        const AttackEquation& eq, std::int32_t target,
                        Coeff& a, Coeff& b) -> bool {
    a = eq.lhs.coefficient(target);
    b = eq.lhs.constant();
    for (const auto& [k, c] : eq.lhs.terms()) {
      if (k == target) continue;
      if (!bits[k]) return false;  // still depends on an unsolved bit
      if (*bits[k]) b += c;
    }
    return true;
  };

  for (const auto& step : plan.steps) {
    const AttackEquation& eq = eqs[step.eq];
    Coeff a, b;
    if (!reduce_row(z, eq, step.z_index, a, b)) {
      // Depends on a bit deferred as ambiguous; settle it during branching.
      pending.push_back({step.z_index, eq.row, {}});
      continue;
    }
    auto candidates = solve_bit(a, b, eq.rhs);
    if (candidates.empty())
      throw inconsistency_error("no concealment hypothesis explains bias row " +
                                std::to_string(eq.row));
    if (candidates.size() > 1) {
      // Cross-check: other rows containing this bit must match in
      // magnitude once the candidate value is substituted.
      std::vector<BitCandidate> filtered;
      for (const auto& cand : candidates) {
        bool ok = true;
        for (const auto& other : eqs) {
          if (other.row == eq.row) continue;
          if (other.lhs.coefficient(step.z_index).is_zero()) continue;
          Coeff value = other.lhs.constant();
          bool computable = true;
          for (const auto& [k, c] : other.lhs.terms()) {
            std::uint8_t bit;
            if (k == step.z_index)
              bit = cand.z;
            else if (z[k])
              bit = *z[k];
            else {
              computable = false;
              break;
            }
            if (bit) value += c;
          }
          if (computable && value.abs() != other.rhs.abs()) {
            ok = false;
            break;
          }
        }
        if (ok) filtered.push_back(cand);
      }
      if (filtered.empty())
        throw inconsistency_error("cross-checking eliminated every "
                                  "hypothesis for stream bit " +
                                  std::to_string(step.z_index));
      if (filtered.size() > 1) {
        pending.push_back({step.z_index, eq.row, filtered});
        continue;
      }
      candidates = filtered;
      result.evidence.push_back({"cross-check", eq.row, step.z_index,
                                 candidates[0].key == KeyBit::One
                                     ? "concealed"
                                     : "unconcealed"});
    }
    const BitCandidate& c = candidates.front();
    z[step.z_index] = c.z;
    if (c.key != KeyBit::Undetermined) result.key[eq.row] = c.key;
    result.evidence.push_back({"bias-solve", eq.row, step.z_index,
                               c.key == KeyBit::One        ? "concealed"
                               : c.key == KeyBit::Zero     ? "unconcealed"
                                                           : "sign-free"});
  }

  auto assemble = [&]() {
    result.keystream.resize(stream_len);
    for (std::int32_t k = 0; k < stream_len; ++k) {
      if (!z[k])
        throw inconsistency_error("stream bit " + std::to_string(k) +
                                  " was never determined");
      result.keystream[k] = *z[k];
    }
  };

  if (pending.empty()) {
    assemble();
    detail::finish_attack(param, intercepted, opts, result);
    return result;
  }

  if (static_cast<std::int32_t>(pending.size()) > opts.branch_bound)
    throw inconsistency_error(
        std::to_string(pending.size()) +
        " ambiguous stream bits exceed the branching bound of " +
        std::to_string(opts.branch_bound));

  // Bounded branch-and-verify over the ambiguous bits, 0 before 1.
  // Steps that were deferred only because they depended on an ambiguous
  // bit carry no candidates; they are re-derived inside each branch.
  std::vector<std::size_t> choice(pending.size(), 0);
  while (true) {
    AttackResult trial = result;
    std::vector<std::optional<std::uint8_t>> z_trial = z;
    try {
      for (std::size_t p = 0; p < pending.size(); ++p) {
        const auto& pb = pending[p];
        if (pb.candidates.empty()) continue;
        const BitCandidate& cand = pb.candidates[choice[p]];
        z_trial[pb.z_index] = cand.z;
        if (cand.key != KeyBit::Undetermined) trial.key[pb.row] = cand.key;
        trial.evidence.push_back({"branch", pb.row, pb.z_index,
                                  cand.key == KeyBit::One ? "concealed"
                                                          : "unconcealed"});
      }
      for (const auto& pb : pending) {
        if (!pb.candidates.empty()) continue;
        const AttackEquation* eq = nullptr;
        for (const auto& e : eqs)
          if (e.row == pb.row) eq = &e;
        Coeff a, b;
        if (!eq || !reduce_row(z_trial, *eq, pb.z_index, a, b))
          throw inconsistency_error("deferred stream bit stays undetermined");
        auto cands = solve_bit(a, b, eq->rhs);
        if (cands.size() != 1)
          throw inconsistency_error("deferred stream bit stays ambiguous");
        z_trial[pb.z_index] = cands[0].z;
        if (cands[0].key != KeyBit::Undetermined)
          trial.key[pb.row] = cands[0].key;
        trial.evidence.push_back({"bias-solve", pb.row, pb.z_index,
                                  cands[0].key == KeyBit::One ? "concealed"
                                                              : "unconcealed"});
      }
      trial.keystream.resize(stream_len);
      for (std::int32_t k = 0; k < stream_len; ++k) {
        if (!z_trial[k]) throw inconsistency_error("undetermined bit");
        trial.keystream[k] = *z_trial[k];
      }
      detail::finish_attack(param, intercepted, opts, trial);
      return trial;
    } catch (const inconsistency_error&) {
      // fall through to the next combination
    }
    std::size_t p = 0;
    for (; p < pending.size(); ++p) {
      if (pending[p].candidates.size() <= 1) continue;
      if (++choice[p] < pending[p].candidates.size()) break;
      choice[p] = 0;
    }
    if (p == pending.size())
      throw inconsistency_error(
          "no branch over the ambiguous stream bits is consistent with the "
          "intercepted problem");
  }
}

}  // namespace srta
