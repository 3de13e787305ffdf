#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "srta/attack.hpp"
#include "srta/e0.hpp"
#include "srta/error.hpp"
#include "srta/problem.hpp"
#include "srta/reduction.hpp"
#include "srta/solver.hpp"
#include "srta/srt.hpp"

namespace srta {

using json = nlohmann::json;

// -- bit/spin string helpers -------------------------------------------------

inline std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline std::vector<std::uint8_t> bits_from_string(const std::string& s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1')
      throw io_error("bit string may contain only 0 and 1");
    bits.push_back(c == '1' ? 1 : 0);
  }
  return bits;
}

inline std::string spins_to_string(const SpinState& s) {
  std::string out;
  out.reserve(s.size());
  for (auto v : s) out.push_back(v == 1 ? '+' : '-');
  return out;
}

inline SpinState spins_from_string(const std::string& s) {
  SpinState out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != '+' && c != '-')
      throw io_error("spin string may contain only + and -");
    out.push_back(c == '+' ? 1 : -1);
  }
  return out;
}

// -- problem files -----------------------------------------------------------
// {"model":"ising"|"qubo","n":N,"scale":4,"h"|"diag":[q...],
//  "terms":[[i,j,q],...],"offset":q}
// with every value an integer count of quarter-units and terms sorted by
// (i,j). This layout is the wire contract; writers emit it byte-exactly.

inline json problem_to_json(const IsingProblem& p) {
  json j;
  j["model"] = "ising";
  j["n"] = p.n();
  j["scale"] = 4;
  json h = json::array();
  for (const auto& c : p.bias()) h.push_back(c.quarter_units());
  j["h"] = std::move(h);
  json terms = json::array();
  for (const auto& [ij, c] : p.couplings())
    terms.push_back({ij.first, ij.second, c.quarter_units()});
  j["terms"] = std::move(terms);
  j["offset"] = p.offset().quarter_units();
  return j;
}

inline json problem_to_json(const QuboProblem& p) {
  json j;
  j["model"] = "qubo";
  j["n"] = p.n();
  j["scale"] = 4;
  json d = json::array();
  for (const auto& c : p.diagonal()) d.push_back(c.quarter_units());
  j["diag"] = std::move(d);
  json terms = json::array();
  for (const auto& [ij, c] : p.off_diagonal())
    terms.push_back({ij.first, ij.second, c.quarter_units()});
  j["terms"] = std::move(terms);
  j["offset"] = p.offset().quarter_units();
  return j;
}

namespace detail {

inline void check_problem_header(const json& j) {
  if (!j.is_object() || !j.contains("model") || !j.contains("n") ||
      !j.contains("scale") || !j.contains("terms") || !j.contains("offset"))
    throw io_error("problem file is missing required fields");
  if (j.at("scale").get<std::int64_t>() != 4)
    throw io_error("problem file must use scale 4 (quarter-units)");
}

/// Surface malformed JSON (missing fields, wrong types) as io_error.
template <class Fn>
auto io_guard(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw io_error(std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

inline IsingProblem ising_from_json(const json& j) {
  return detail::io_guard("problem file", [&] {
    detail::check_problem_header(j);
    if (j.at("model").get<std::string>() != "ising")
      throw io_error("expected an ising problem file");
    std::int32_t n = j.at("n").get<std::int32_t>();
    IsingProblem p(n);
    const auto& h = j.at("h");
    if (static_cast<std::int32_t>(h.size()) != n)
      throw io_error("bias vector length does not match n");
    for (std::int32_t i = 0; i < n; ++i)
      p.add_bias(i, Coeff::from_quarter_units(h[i].get<std::int64_t>()));
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 3) throw io_error("malformed term entry");
      std::int32_t a = t[0].get<std::int32_t>(), b = t[1].get<std::int32_t>();
      if (a >= b) throw io_error("coupling entries must satisfy i < j");
      p.add_coupling(a, b, Coeff::from_quarter_units(t[2].get<std::int64_t>()));
    }
    p.set_offset(Coeff::from_quarter_units(j.at("offset").get<std::int64_t>()));
    return p;
  });
}

inline QuboProblem qubo_from_json(const json& j) {
  return detail::io_guard("problem file", [&] {
    detail::check_problem_header(j);
    if (j.at("model").get<std::string>() != "qubo")
      throw io_error("expected a qubo problem file");
    std::int32_t n = j.at("n").get<std::int32_t>();
    QuboProblem p(n);
    const auto& d = j.at("diag");
    if (static_cast<std::int32_t>(d.size()) != n)
      throw io_error("diagonal length does not match n");
    for (std::int32_t i = 0; i < n; ++i)
      p.add_term(i, i, Coeff::from_quarter_units(d[i].get<std::int64_t>()));
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 3) throw io_error("malformed term entry");
      std::int32_t a = t[0].get<std::int32_t>(), b = t[1].get<std::int32_t>();
      if (a >= b) throw io_error("off-diagonal entries must satisfy i < j");
      p.add_term(a, b, Coeff::from_quarter_units(t[2].get<std::int64_t>()));
    }
    p.set_offset(Coeff::from_quarter_units(j.at("offset").get<std::int64_t>()));
    return p;
  });
}

using AnyProblem = std::variant<IsingProblem, QuboProblem>;

inline AnyProblem problem_from_json(const json& j) {
  detail::check_problem_header(j);
  std::string model = detail::io_guard(
      "problem file", [&] { return j.at("model").get<std::string>(); });
  if (model == "ising") return AnyProblem{ising_from_json(j)};
  return AnyProblem{qubo_from_json(j)};
}

/// Load either model as an Ising instance (the transformation and the
/// attack are stated on the Ising form).
inline IsingProblem as_ising(const AnyProblem& p) {
  if (std::holds_alternative<IsingProblem>(p))
    return std::get<IsingProblem>(p);
  return qubo_to_ising(std::get<QuboProblem>(p));
}

// -- keys, keystreams, cipher specs -----------------------------------------

inline json key_to_json(const ConcealmentKey& key) {
  json j;
  j["n"] = key.n();
  j["bits"] = bits_to_string(key.bits);
  return j;
}

inline ConcealmentKey key_from_json(const json& j) {
  return detail::io_guard("key file", [&] {
    if (!j.is_object() || !j.contains("n") || !j.contains("bits"))
      throw io_error("key file is missing required fields");
    ConcealmentKey key;
    key.bits = bits_from_string(j.at("bits").get<std::string>());
    if (j.at("n").get<std::int32_t>() != key.n())
      throw io_error("key length does not match its declared n");
    return key;
  });
}

inline json keystream_to_json(const std::vector<std::uint8_t>& z) {
  json j;
  j["bits"] = bits_to_string(z);
  return j;
}

inline std::vector<std::uint8_t> keystream_from_json(const json& j) {
  return detail::io_guard("keystream file", [&] {
    if (!j.is_object() || !j.contains("bits"))
      throw io_error("keystream file is missing the bits field");
    return bits_from_string(j.at("bits").get<std::string>());
  });
}

inline json cipher_spec_to_json(const CipherSpec& spec) {
  json regs = json::array();
  for (const auto& r : spec.registers) {
    json reg;
    reg["length"] = r.length;
    reg["feedback"] = r.feedback;
    reg["output_tap"] = r.output_tap;
    regs.push_back(std::move(reg));
  }
  json j;
  j["registers"] = std::move(regs);
  return j;
}

inline CipherSpec cipher_spec_from_json(const json& j) {
  return detail::io_guard("cipher spec file", [&] {
    if (!j.is_object() || !j.contains("registers") ||
        !j.at("registers").is_array() || j.at("registers").size() != 4)
      throw io_error("cipher spec must define exactly four registers");
    CipherSpec spec;
    for (int r = 0; r < 4; ++r) {
      const auto& reg = j.at("registers")[r];
      spec.registers[r].length = reg.at("length").get<std::int32_t>();
      spec.registers[r].feedback =
          reg.at("feedback").get<std::vector<std::int32_t>>();
      spec.registers[r].output_tap = reg.at("output_tap").get<std::int32_t>();
    }
    spec.validate();
    return spec;
  });
}

// -- solver / reduction / attack artifacts -----------------------------------

inline json solve_result_to_json(const SolveResult& r) {
  json j;
  j["state"] = spins_to_string(r.state);
  j["energy"] = r.energy.quarter_units();
  j["method"] = r.method;
  j["iterations"] = r.iterations;
  j["restarts"] = r.restarts;
  return j;
}

inline SolveResult solve_result_from_json(const json& j) {
  return detail::io_guard("solve result file", [&] {
    SolveResult r;
    r.state = spins_from_string(j.at("state").get<std::string>());
    r.energy = Coeff::from_quarter_units(j.at("energy").get<std::int64_t>());
    r.method = j.at("method").get<std::string>();
    r.iterations = j.value("iterations", std::int64_t{0});
    r.restarts = j.value("restarts", 0);
    return r;
  });
}

inline json report_to_json(const ReductionReport& r) {
  json j;
  j["n"] = r.n;
  j["nonzeros"] = r.nonzeros;
  j["density"] = r.density;
  j["constant"] = r.constant;
  j["slack_bits"] = r.slack_bits;
  j["notes"] = r.notes;
  return j;
}

inline ReductionReport report_from_json(const json& j) {
  return detail::io_guard("report file", [&] {
    ReductionReport r;
    r.n = j.at("n").get<std::int64_t>();
    r.nonzeros = j.at("nonzeros").get<std::int64_t>();
    r.density = j.at("density").get<double>();
    r.constant = j.at("constant").get<std::int64_t>();
    r.slack_bits = j.value("slack_bits", std::vector<std::int32_t>{});
    r.notes = j.value("notes", std::vector<std::string>{});
    return r;
  });
}

inline json attack_result_to_json(const AttackResult& r) {
  json j;
  j["keystream"] = bits_to_string(r.keystream);
  std::string key;
  key.reserve(r.key.size());
  for (auto b : r.key) key.push_back(key_bit_char(b));
  j["key"] = std::move(key);
  json evidence = json::array();
  for (const auto& e : r.evidence) {
    json entry;
    entry["kind"] = e.kind;
    entry["row"] = e.row;
    entry["z"] = e.z_index;
    entry["hypothesis"] = e.hypothesis;
    evidence.push_back(std::move(entry));
  }
  j["evidence"] = std::move(evidence);
  j["verified"] = r.verified;
  j["oracle_calls"] = r.oracle_calls;
  return j;
}

inline AttackResult attack_result_from_json(const json& j) {
  return detail::io_guard("attack result file", [&] {
    AttackResult r;
    r.keystream = bits_from_string(j.at("keystream").get<std::string>());
    for (char c : j.at("key").get<std::string>()) {
      if (c == '0')
        r.key.push_back(KeyBit::Zero);
      else if (c == '1')
        r.key.push_back(KeyBit::One);
      else if (c == '?')
        r.key.push_back(KeyBit::Undetermined);
      else
        throw io_error("key string may contain only 0, 1 and ?");
    }
    for (const auto& e : j.value("evidence", json::array()))
      r.evidence.push_back({e.value("kind", std::string{}),
                            e.value("row", -1), e.value("z", -1),
                            e.value("hypothesis", std::string{})});
    r.verified = j.value("verified", false);
    r.oracle_calls = j.value("oracle_calls", 0);
    return r;
  });
}

// -- files -------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path);
  out << text;
  if (!out) throw io_error("write failed for " + path);
}

inline json load_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw io_error(path + ": " + e.what());
  }
}

inline void save_json(const std::string& path, const json& j) {
  write_file(path, j.dump() + "\n");
}

}  // namespace srta
