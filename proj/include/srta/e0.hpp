#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "srta/error.hpp"
#include "srta/forms.hpp"

namespace srta {

/// One linear-feedback register of the summation generator. `feedback`
/// holds the stream offsets of the recurrence
///   r_{t+length} = XOR_{d in feedback} r_{t+d},
/// `output_tap` the offset fed to the combiner at step t.
struct RegisterSpec {
  std::int32_t length = 0;
  std::vector<std::int32_t> feedback;
  std::int32_t output_tap = 0;
};

struct CipherSpec {
  std::array<RegisterSpec, 4> registers;

  std::int32_t state_bits() const {
    std::int32_t total = 0;
    for (const auto& r : registers) total += r.length;
    return total;
  }

  void validate() const {
    for (const auto& r : registers) {
      if (r.length < 1) throw dimension_error("register length must be >= 1");
      if (r.feedback.empty())
        throw dimension_error("feedback offset set must be nonempty");
      for (auto d : r.feedback)
        if (d < 0 || d >= r.length)
          throw dimension_error("feedback offset outside register");
      if (r.output_tap < 0 || r.output_tap > r.length)
        throw dimension_error("output tap outside register");
    }
  }

  friend bool operator==(const CipherSpec& a, const CipherSpec& b) {
    for (int r = 0; r < 4; ++r) {
      if (a.registers[r].length != b.registers[r].length ||
          a.registers[r].feedback != b.registers[r].feedback ||
          a.registers[r].output_tap != b.registers[r].output_tap)
        return false;
    }
    return true;
  }
};

/// Full-size generator: registers of length 25/31/33/39 with the
/// recurrences
///   l_{t+25} = l_t ^ l_{t+5} ^ l_{t+13} ^ l_{t+17}
///   m_{t+31} = m_t ^ m_{t+7} ^ m_{t+15} ^ m_{t+19}
///   n_{t+33} = n_t ^ n_{t+5} ^ n_{t+9} ^ n_{t+29}
///   o_{t+39} = o_t ^ o_{t+3} ^ o_{t+11} ^ o_{t+35}
/// and combiner taps l_{t+1}, m_{t+7}, n_{t+1}, o_{t+7}.
inline CipherSpec full_e0() {
  CipherSpec spec;
  spec.registers[0] = {25, {0, 5, 13, 17}, 1};
  spec.registers[1] = {31, {0, 7, 15, 19}, 7};
  spec.registers[2] = {33, {0, 5, 9, 29}, 1};
  spec.registers[3] = {39, {0, 3, 11, 35}, 7};
  return spec;
}

/// Desk-scale variant: four registers of length 3 with recurrence
/// r_{t+3} = r_t ^ r_{t+2} (from x^3 + x + 1) and all output taps at
/// offset 1.
inline CipherSpec scaled_e0() {
  CipherSpec spec;
  for (auto& r : spec.registers) r = {3, {0, 2}, 1};
  return spec;
}

/// Generator state at the stream origin: register fills plus the two-bit
/// carry c_0 and the carry of the step before, c_{-1}. Equation systems
/// are built for streams that start with c_{-1} = 0.
struct CipherState {
  std::array<std::vector<std::uint8_t>, 4> fill;
  std::uint8_t carry_hi = 0, carry_lo = 0;
  std::uint8_t prev_carry_hi = 0, prev_carry_lo = 0;

  void validate(const CipherSpec& spec) const {
    for (int r = 0; r < 4; ++r)
      if (static_cast<std::int32_t>(fill[r].size()) != spec.registers[r].length)
        throw dimension_error("register fill length does not match spec");
  }
};

template <class Urbg>
CipherState random_state(const CipherSpec& spec, Urbg&& rng) {
  CipherState st;
  for (int r = 0; r < 4; ++r) {
    st.fill[r].resize(spec.registers[r].length);
    for (auto& b : st.fill[r]) b = static_cast<std::uint8_t>(rng() & 1u);
  }
  st.carry_hi = static_cast<std::uint8_t>(rng() & 1u);
  st.carry_lo = static_cast<std::uint8_t>(rng() & 1u);
  return st;
}

/// All internal values of a simulated run of `len` steps. Stream u of
/// register r covers indices 0 .. len + length_r - 1; carries cover steps
/// 0 .. len, combiner sums steps 1 .. len, remainders steps 0 .. len-1.
struct CipherTrace {
  std::array<std::vector<std::uint8_t>, 4> streams;
  std::vector<std::uint8_t> carry_hi, carry_lo;
  std::vector<std::uint8_t> sum_hi, sum_lo;
  std::vector<std::uint8_t> remainder;
  std::vector<std::uint8_t> z;
};

inline CipherTrace trace_run(const CipherSpec& spec, const CipherState& state,
                             std::int32_t len) {
  if (len < 1) throw dimension_error("keystream length must be >= 1");
  spec.validate();
  state.validate(spec);

  CipherTrace tr;
  for (int r = 0; r < 4; ++r) {
    const auto& reg = spec.registers[r];
    auto& s = tr.streams[r];
    s = state.fill[r];
    s.resize(reg.length + len);
    for (std::int32_t u = reg.length; u < reg.length + len; ++u) {
      std::uint8_t bit = 0;
      for (auto d : reg.feedback) bit ^= s[u - reg.length + d];
      s[u] = bit;
    }
  }

  tr.carry_hi.assign(len + 1, 0);
  tr.carry_lo.assign(len + 1, 0);
  tr.sum_hi.assign(len + 1, 0);
  tr.sum_lo.assign(len + 1, 0);
  tr.remainder.assign(len, 0);
  tr.z.assign(len, 0);
  tr.carry_hi[0] = state.carry_hi;
  tr.carry_lo[0] = state.carry_lo;

  std::uint8_t prev_hi = state.prev_carry_hi;
  std::uint8_t prev_lo = state.prev_carry_lo;
  for (std::int32_t t = 0; t < len; ++t) {
    int total = 2 * tr.carry_hi[t] + tr.carry_lo[t];
    for (int r = 0; r < 4; ++r)
      total += tr.streams[r][t + spec.registers[r].output_tap];
    // total = 4 s_hi + 2 s_lo + remainder; the keystream bit is its parity.
    tr.remainder[t] = static_cast<std::uint8_t>(total & 1);
    tr.sum_lo[t + 1] = static_cast<std::uint8_t>((total >> 1) & 1);
    tr.sum_hi[t + 1] = static_cast<std::uint8_t>((total >> 2) & 1);
    tr.z[t] = tr.remainder[t];
    // c_{t+1} = s_{t+1} ^ T1[c_t] ^ T2[c_{t-1}],
    // T1(hi,lo) = (hi,lo), T2(hi,lo) = (lo, hi^lo).
    std::uint8_t next_hi = tr.sum_hi[t + 1] ^ tr.carry_hi[t] ^ prev_lo;
    std::uint8_t next_lo = static_cast<std::uint8_t>(
        tr.sum_lo[t + 1] ^ tr.carry_lo[t] ^ prev_hi ^ prev_lo);
    prev_hi = tr.carry_hi[t];
    prev_lo = tr.carry_lo[t];
    tr.carry_hi[t + 1] = next_hi;
    tr.carry_lo[t + 1] = next_lo;
  }
  return tr;
}

inline std::vector<std::uint8_t> keystream(const CipherSpec& spec,
                                           const CipherState& state,
                                           std::int32_t len) {
  return trace_run(spec, state, len).z;
}

// ---------------------------------------------------------------------------
// Symbolic equation system.

enum class VarKind : std::uint8_t {
  Register = 0,  // stream bit of register `reg` at time t
  Carry = 1,     // bit 0 = low carry, bit 1 = high carry, at time t
  Sum = 2,       // combiner sum bits, time t, bit 0/1
  Beta = 3,      // remainder bit of the combiner sum at step t
  IntSlack = 4,  // integer slack of equation t (transient, pre-binarization)
  SlackBit = 5,  // binary slack bit `bit` of equation t
};

/// Variable identity. Comparison order (kind, reg, t, bit) is the canonical
/// registry order: register streams first, then carries, sums, remainders,
/// and finally slack bits by equation.
struct VarName {
  VarKind kind = VarKind::Register;
  std::int16_t reg = 0;
  std::int32_t t = 0;
  std::int16_t bit = 0;

  static VarName register_bit(int reg, std::int32_t t) {
    return {VarKind::Register, static_cast<std::int16_t>(reg), t, 0};
  }
  static VarName carry(std::int32_t t, int bit) {
    return {VarKind::Carry, 0, t, static_cast<std::int16_t>(bit)};
  }
  static VarName sum(std::int32_t t, int bit) {
    return {VarKind::Sum, 0, t, static_cast<std::int16_t>(bit)};
  }
  static VarName beta(std::int32_t t) { return {VarKind::Beta, 0, t, 0}; }
  static VarName int_slack(std::int32_t eq) {
    return {VarKind::IntSlack, 0, eq, 0};
  }
  static VarName slack_bit(std::int32_t eq, int bit) {
    return {VarKind::SlackBit, 0, eq, static_cast<std::int16_t>(bit)};
  }

  auto operator<=>(const VarName&) const = default;

  std::string str() const {
    switch (kind) {
      case VarKind::Register: {
        static constexpr const char* name[4] = {"l", "m", "n", "o"};
        return std::string(name[reg % 4]) + "_" + std::to_string(t);
      }
      case VarKind::Carry:
        return "c" + std::to_string(bit) + "_" + std::to_string(t);
      case VarKind::Sum:
        return "s" + std::to_string(bit) + "_" + std::to_string(t);
      case VarKind::Beta:
        return "beta_" + std::to_string(t);
      case VarKind::IntSlack:
        return "K_" + std::to_string(t);
      case VarKind::SlackBit:
        return "k_" + std::to_string(t) + "_" + std::to_string(bit);
    }
    return "?";
  }
};

using AffineForm = LinearForm<VarName, std::int64_t>;

enum class EqKind : std::uint8_t { Mod2, Integer };

struct Equation {
  AffineForm form;
  EqKind kind = EqKind::Mod2;
};

/// Ordered equations plus the registry of every variable they mention.
class AlgebraicSystem {
 public:
  const std::vector<Equation>& equations() const { return equations_; }
  const std::vector<VarName>& variables() const { return variables_; }

  void add_equation(Equation eq) { equations_.push_back(std::move(eq)); }

  /// Rebuild the sorted variable registry from the current equations.
  void finalize() {
    std::map<VarName, bool> seen;
    for (const auto& eq : equations_)
      for (const auto& [v, c] : eq.form.terms()) seen.emplace(v, true);
    variables_.clear();
    variables_.reserve(seen.size());
    for (const auto& [v, _] : seen) variables_.push_back(v);
  }

  std::int32_t index_of(const VarName& v) const {
    auto it = std::lower_bound(variables_.begin(), variables_.end(), v);
    if (it == variables_.end() || *it != v)
      throw dimension_error("variable not registered: " + v.str());
    return static_cast<std::int32_t>(it - variables_.begin());
  }

 private:
  std::vector<Equation> equations_;
  std::vector<VarName> variables_;
};

/// Eight equations per keystream bit. For step t (keystream bit z_t known):
///   f_0 (mod 2):  z_t + taps + c0_t
///   f_1..f_4 (mod 2): register recurrences
///   f_5 (mod 2):  c1_{t+1} + s1_{t+1} + c1_t + c0_{t-1}
///   f_6 (mod 2):  c0_{t+1} + s0_{t+1} + c0_t + c1_{t-1} + c0_{t-1}
///   f_7 (integer): 4 s1_{t+1} + 2 s0_{t+1} + beta_t - taps - 2 c1_t - c0_t
/// The carry before the stream origin (step -1) is zero by convention, so
/// its terms vanish from f_5/f_6 at t = 0.
inline AlgebraicSystem build_equation_system(const CipherSpec& spec,
                                             const std::vector<std::uint8_t>& z) {
  if (z.empty()) throw dimension_error("keystream must be nonempty");
  spec.validate();

  AlgebraicSystem sys;
  const std::int32_t len = static_cast<std::int32_t>(z.size());
  for (std::int32_t t = 0; t < len; ++t) {
    AffineForm f0;
    f0.add_constant(z[t] & 1);
    for (int r = 0; r < 4; ++r)
      f0.add_term(VarName::register_bit(r, t + spec.registers[r].output_tap), 1);
    f0.add_term(VarName::carry(t, 0), 1);
    sys.add_equation({std::move(f0), EqKind::Mod2});

    for (int r = 0; r < 4; ++r) {
      AffineForm fr;
      fr.add_term(VarName::register_bit(r, t + spec.registers[r].length), 1);
      for (auto d : spec.registers[r].feedback)
        fr.add_term(VarName::register_bit(r, t + d), 1);
      sys.add_equation({std::move(fr), EqKind::Mod2});
    }

    AffineForm f5;
    f5.add_term(VarName::carry(t + 1, 1), 1);
    f5.add_term(VarName::sum(t + 1, 1), 1);
    f5.add_term(VarName::carry(t, 1), 1);
    if (t >= 1) f5.add_term(VarName::carry(t - 1, 0), 1);
    sys.add_equation({std::move(f5), EqKind::Mod2});

    AffineForm f6;
    f6.add_term(VarName::carry(t + 1, 0), 1);
    f6.add_term(VarName::sum(t + 1, 0), 1);
    f6.add_term(VarName::carry(t, 0), 1);
    if (t >= 1) {
      f6.add_term(VarName::carry(t - 1, 1), 1);
      f6.add_term(VarName::carry(t - 1, 0), 1);
    }
    sys.add_equation({std::move(f6), EqKind::Mod2});

    AffineForm f7;
    f7.add_term(VarName::sum(t + 1, 1), 4);
    f7.add_term(VarName::sum(t + 1, 0), 2);
    f7.add_term(VarName::beta(t), 1);
    for (int r = 0; r < 4; ++r)
      f7.add_term(VarName::register_bit(r, t + spec.registers[r].output_tap), -1);
    f7.add_term(VarName::carry(t, 1), -2);
    f7.add_term(VarName::carry(t, 0), -1);
    sys.add_equation({std::move(f7), EqKind::Integer});
  }
  sys.finalize();
  return sys;
}

using Assignment = std::map<VarName, std::uint8_t>;

/// Residual of every equation under a 0/1 assignment: parity for mod-2
/// equations, the signed integer value otherwise. All zero iff satisfied.
inline std::vector<std::int64_t> evaluate_system(const AlgebraicSystem& sys,
                                                 const Assignment& assignment) {
  auto bit_of = [&](const VarName& v) -> std::int64_t {
    auto it = assignment.find(v);
    if (it == assignment.end())
      throw dimension_error("assignment is missing variable " + v.str());
    return it->second & 1;
  };
  std::vector<std::int64_t> residuals;
  residuals.reserve(sys.equations().size());
  for (const auto& eq : sys.equations()) {
    std::int64_t val = eq.form.evaluate_binary(bit_of);
    if (eq.kind == EqKind::Mod2) val = ((val % 2) + 2) % 2;
    residuals.push_back(val);
  }
  return residuals;
}

/// Assignment induced by a simulated run: every register stream bit,
/// carries c_0..c_T, sums s_1..s_T and remainder bits.
inline Assignment cipher_assignment(const CipherSpec& spec,
                                    const CipherTrace& trace) {
  Assignment a;
  for (int r = 0; r < 4; ++r) {
    if (trace.streams[r].size() !=
        trace.z.size() + static_cast<std::size_t>(spec.registers[r].length))
      throw dimension_error("trace does not belong to this cipher spec");
    for (std::size_t u = 0; u < trace.streams[r].size(); ++u)
      a[VarName::register_bit(r, static_cast<std::int32_t>(u))] =
          trace.streams[r][u];
  }
  for (std::size_t t = 0; t < trace.carry_lo.size(); ++t) {
    a[VarName::carry(static_cast<std::int32_t>(t), 0)] = trace.carry_lo[t];
    a[VarName::carry(static_cast<std::int32_t>(t), 1)] = trace.carry_hi[t];
  }
  for (std::size_t t = 1; t < trace.sum_lo.size(); ++t) {
    a[VarName::sum(static_cast<std::int32_t>(t), 0)] = trace.sum_lo[t];
    a[VarName::sum(static_cast<std::int32_t>(t), 1)] = trace.sum_hi[t];
  }
  for (std::size_t t = 0; t < trace.remainder.size(); ++t)
    a[VarName::beta(static_cast<std::int32_t>(t))] = trace.remainder[t];
  return a;
}

}  // namespace srta
