#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "srta/e0.hpp"
#include "srta/error.hpp"
#include "srta/problem.hpp"

namespace srta {

/// How many binary variables replace the integer slack of a lifted
/// equation. BoundBits allocates bitlen(floor(f_max/2)), the width that
/// reproduces the reference instance sizes; MaxBits allocates
/// bitlen(f_max), which is never smaller.
enum class SlackWidthRule { BoundBits, MaxBits };

inline int bit_length(std::int64_t x) {
  int bits = 0;
  while (x > 0) {
    ++bits;
    x >>= 1;
  }
  return bits;
}

/// Maximum of an affine form over binary assignments.
inline std::int64_t form_max(const AffineForm& f) {
  std::int64_t m = f.constant();
  for (const auto& [v, c] : f.terms())
    if (c > 0) m += c;
  return m;
}

inline std::int64_t form_min(const AffineForm& f) {
  std::int64_t m = f.constant();
  for (const auto& [v, c] : f.terms())
    if (c < 0) m += c;
  return m;
}

/// Lift f = 0 (mod 2) to the integers as f - 2k = 0. The integer slack k
/// is keyed by the equation index and bounded by floor(f_max/2); a bound
/// of zero eliminates the slack entirely.
inline AffineForm lift_mod2(const AffineForm& f, std::int32_t eq_index,
                            std::int64_t& bound_out) {
  if (form_min(f) < 0)
    throw dimension_error("mod-2 form must be nonnegative before lifting");
  bound_out = form_max(f) / 2;
  AffineForm lifted = f;
  if (bound_out >= 1) lifted.add_term(VarName::int_slack(eq_index), -2);
  return lifted;
}

/// All equations on integer form, with one integer slack per former mod-2
/// equation.
struct LiftedSystem {
  std::vector<AffineForm> equations;
  std::vector<std::int64_t> slack_bounds;  // 0 where no slack was needed
  std::vector<std::int64_t> maxima;        // f_max per source equation
  std::vector<VarName> base_variables;
};

inline LiftedSystem lift_system(const AlgebraicSystem& sys) {
  LiftedSystem out;
  const std::size_t count = sys.equations().size();
  out.equations.reserve(count);
  out.slack_bounds.assign(count, 0);
  out.maxima.assign(count, 0);
  out.base_variables = sys.variables();
  for (std::size_t e = 0; e < count; ++e) {
    const auto& eq = sys.equations()[e];
    out.maxima[e] = form_max(eq.form);
    if (eq.kind == EqKind::Mod2)
      out.equations.push_back(
          lift_mod2(eq.form, static_cast<std::int32_t>(e), out.slack_bounds[e]));
    else
      out.equations.push_back(eq.form);
  }
  return out;
}

/// All variables binary: each integer slack k_e is replaced by
/// sum_b 2^b k_{e,b}. The registry keeps the base variables in canonical
/// order and appends slack bits in emission order.
struct BinarizedSystem {
  std::vector<AffineForm> equations;
  std::vector<std::int32_t> slack_bits;  // width per equation
  std::vector<VarName> variables;
};

inline BinarizedSystem binarize_slacks(
    const LiftedSystem& lifted, SlackWidthRule rule = SlackWidthRule::BoundBits) {
  BinarizedSystem out;
  out.slack_bits.assign(lifted.equations.size(), 0);
  out.equations.reserve(lifted.equations.size());
  for (std::size_t e = 0; e < lifted.equations.size(); ++e) {
    AffineForm bin;
    bin.add_constant(lifted.equations[e].constant());
    for (const auto& [v, c] : lifted.equations[e].terms()) {
      if (v.kind != VarKind::IntSlack) {
        bin.add_term(v, c);
        continue;
      }
      int width = rule == SlackWidthRule::BoundBits
                      ? bit_length(lifted.slack_bounds[e])
                      : bit_length(lifted.maxima[e]);
      out.slack_bits[e] = width;
      for (int b = 0; b < width; ++b)
        bin.add_term(VarName::slack_bit(static_cast<std::int32_t>(e), b),
                     c * (std::int64_t{1} << b));
    }
    out.equations.push_back(std::move(bin));
  }
  out.variables = lifted.base_variables;
  for (std::size_t e = 0; e < out.equations.size(); ++e)
    for (int b = 0; b < out.slack_bits[e]; ++b)
      out.variables.push_back(
          VarName::slack_bit(static_cast<std::int32_t>(e), b));
  return out;
}

/// Report attached to every generated problem: instance statistics plus
/// the convention notes that explain how the counts came about.
struct ReductionReport {
  std::int64_t n = 0;
  std::int64_t nonzeros = 0;
  double density = 0.0;  // nonzeros / (n (n+1) / 2)
  std::int64_t constant = 0;
  std::vector<std::int32_t> slack_bits;  // per equation, in emission order
  std::vector<std::string> notes;
};

namespace detail {

struct PairKeyHash {
  std::size_t operator()(std::uint64_t k) const noexcept {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }
};

}  // namespace detail

/// Square every equation and sum: for g = c + sum a_i x_i, using x^2 = x,
///   Q_ii += a_i^2 + 2 c a_i,  Q_ij += 2 a_i a_j (i < j),  constant += c^2.
/// The accumulated constant is subtracted from the stored problem and
/// recorded in the report, so satisfying assignments evaluate to
/// -constant, the global minimum of the stored form.
inline std::pair<QuboProblem, ReductionReport> penalty_qubo(
    const BinarizedSystem& sys) {
  std::map<VarName, std::int32_t> index;
  for (std::size_t i = 0; i < sys.variables.size(); ++i)
    index.emplace(sys.variables[i], static_cast<std::int32_t>(i));

  const std::int32_t n = static_cast<std::int32_t>(sys.variables.size());
  std::vector<std::int64_t> diag(n, 0);
  std::unordered_map<std::uint64_t, std::int64_t, detail::PairKeyHash> off;
  off.reserve(64 + 24 * sys.equations.size());
  std::int64_t constant = 0;
  std::vector<std::pair<std::int32_t, std::int64_t>> row;
  for (const auto& g : sys.equations) {
    row.clear();
    for (const auto& [v, c] : g.terms()) row.emplace_back(index.at(v), c);
    const std::int64_t c0 = g.constant();
    constant += c0 * c0;
    for (std::size_t a = 0; a < row.size(); ++a) {
      diag[row[a].first] += row[a].second * (row[a].second + 2 * c0);
      for (std::size_t b = a + 1; b < row.size(); ++b) {
        auto [i, ai] = row[a];
        auto [j, aj] = row[b];
        if (i > j) std::swap(i, j);
        off[(static_cast<std::uint64_t>(i) << 32) |
            static_cast<std::uint32_t>(j)] += 2 * ai * aj;
      }
    }
  }

  QuboProblem qubo(n);
  for (std::int32_t i = 0; i < n; ++i)
    if (diag[i] != 0) qubo.add_term(i, i, Coeff::from_int(diag[i]));
  for (const auto& [key, val] : off) {
    if (val == 0) continue;
    qubo.add_term(static_cast<std::int32_t>(key >> 32),
                  static_cast<std::int32_t>(key & 0xffffffffu),
                  Coeff::from_int(val));
  }

  ReductionReport report;
  report.n = n;
  report.nonzeros = qubo.nonzero_count();
  report.density =
      n == 0 ? 0.0
             : static_cast<double>(report.nonzeros) /
                   (static_cast<double>(n) * (n + 1) / 2.0);
  report.constant = constant;
  report.slack_bits = sys.slack_bits;
  return {std::move(qubo), std::move(report)};
}

struct ReductionResult {
  QuboProblem qubo;
  ReductionReport report;
  std::vector<VarName> variables;            // QUBO index -> variable
  std::vector<AffineForm> binary_equations;  // lifted + binarized forms
};

/// Four-step reduction of the algebraic system to a QUBO instance:
/// mod-2 equations are lifted with integer slacks, slacks are binarized,
/// every equation is squared and summed, and the constant is subtracted.
inline ReductionResult reduce(const AlgebraicSystem& sys,
                              SlackWidthRule rule = SlackWidthRule::BoundBits) {
  BinarizedSystem bin = binarize_slacks(lift_system(sys), rule);
  auto [qubo, report] = penalty_qubo(bin);
  ReductionResult out;
  out.qubo = std::move(qubo);
  out.report = std::move(report);
  out.variables = std::move(bin.variables);
  out.binary_equations = std::move(bin.equations);
  out.report.notes.push_back(
      rule == SlackWidthRule::BoundBits
          ? "slack width = bit length of floor(f_max/2), the slack bound"
          : "slack width = bit length of f_max");
  out.report.notes.push_back(
      "carry before the stream origin fixed to 0; carries c_0..c_T unknown");
  out.report.notes.push_back(
      "nonzeros counted on the upper-triangular form, diagonal included");
  return out;
}

/// Extend a base assignment (cipher variables only) with the slack-bit
/// values forced by each lifted equation; returns values for the full
/// QUBO variable registry.
inline BinaryState certificate_state(const ReductionResult& red,
                                     const Assignment& base) {
  Assignment full = base;
  for (std::size_t e = 0; e < red.binary_equations.size(); ++e) {
    const auto& g = red.binary_equations[e];
    std::int64_t residual = g.constant();
    for (const auto& [v, c] : g.terms()) {
      if (v.kind == VarKind::SlackBit) continue;
      auto it = base.find(v);
      if (it == base.end())
        throw dimension_error("assignment is missing variable " + v.str());
      if (it->second) residual += c;
    }
    if (red.report.slack_bits[e] == 0) continue;
    if (residual < 0 || residual % 2 != 0)
      throw inconsistency_error("assignment does not satisfy equation " +
                                std::to_string(e));
    std::int64_t k = residual / 2;
    if (bit_length(k) > red.report.slack_bits[e])
      throw inconsistency_error("slack exceeds its binarized capacity");
    for (int b = 0; b < red.report.slack_bits[e]; ++b)
      full[VarName::slack_bit(static_cast<std::int32_t>(e), b)] =
          static_cast<std::uint8_t>((k >> b) & 1);
  }
  BinaryState x(red.variables.size(), 0);
  for (std::size_t i = 0; i < red.variables.size(); ++i) {
    auto it = full.find(red.variables[i]);
    if (it == full.end())
      throw dimension_error("assignment is missing variable " +
                            red.variables[i].str());
    x[i] = it->second & 1;
  }
  return x;
}

}  // namespace srta
