// Command-line pipeline around the library: generate cryptanalytic
// instances, conceal/reveal them with a spin reversal key, solve them with
// classical stand-ins, and run the keystream-recovery attack on an
// intercepted concealed problem.
//
// Exit codes: 0 success, 1 I/O or usage failure, 2 inconsistency (wrong
// generator, failed verification, mismatched artifacts).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "srta/io.hpp"
#include "srta/oracle.hpp"
#include "srta/solver.hpp"

namespace {

using namespace srta;

CipherSpec resolve_cipher(const std::string& name) {
  if (name == "full") return full_e0();
  if (name == "scaled") return scaled_e0();
  if (!std::filesystem::exists(name))
    throw io_error("unknown cipher '" + name +
                   "' (expected full, scaled, or a spec file path)");
  return cipher_spec_from_json(load_json(name));
}

int cmd_gen(const std::string& cipher, const std::string& keystream,
            std::uint64_t seed, const std::string& out) {
  CipherSpec spec = resolve_cipher(cipher);
  std::vector<std::uint8_t> z;
  if (!keystream.empty()) {
    z = bits_from_string(keystream);
  } else {
    std::mt19937_64 rng(seed);
    CipherState state = random_state(spec, rng);
    z = srta::keystream(spec, state, spec.state_bits());
  }

  AlgebraicSystem sys = build_equation_system(spec, z);
  ReductionResult red = reduce(sys);
  IsingProblem ising = qubo_to_ising(red.qubo);

  save_json(out + ".qubo.json", problem_to_json(red.qubo));
  save_json(out + ".ising.json", problem_to_json(ising));
  save_json(out + ".report.json", report_to_json(red.report));
  save_json(out + ".keystream.json", keystream_to_json(z));
  std::cout << "generated " << red.report.n << " variables, "
            << sys.equations().size() << " equations, "
            << red.report.nonzeros << " nonzero coefficients\n";
  return 0;
}

int cmd_conceal(const std::string& in, const std::string& key_path,
                std::uint64_t seed, const std::string& out) {
  IsingProblem p = as_ising(problem_from_json(load_json(in)));
  ConcealmentKey key;
  if (!key_path.empty()) {
    key = key_from_json(load_json(key_path));
  } else {
    std::mt19937_64 rng(seed);
    key = random_key(p.n(), rng);
    save_json(out + ".key.json", key_to_json(key));
  }
  save_json(out + ".concealed.json", problem_to_json(conceal(p, key)));
  std::cout << "concealed " << p.n() << " variables\n";
  return 0;
}

int cmd_reveal(const std::string& in, const std::string& key_path,
               const std::string& out, const std::string& solve_in,
               const std::string& solve_out) {
  ConcealmentKey key = key_from_json(load_json(key_path));
  IsingProblem p = as_ising(problem_from_json(load_json(in)));
  save_json(out, problem_to_json(reveal_problem(p, key)));
  if (!solve_in.empty()) {
    SolveResult r = solve_result_from_json(load_json(solve_in));
    r.state = reveal_solution(r.state, key);
    r.energy = energy_ising(reveal_problem(p, key), r.state);
    save_json(solve_out.empty() ? solve_in + ".revealed.json" : solve_out,
              solve_result_to_json(r));
  }
  return 0;
}

int cmd_solve(const std::string& in, const std::string& method,
              std::uint64_t seed, std::int32_t sweeps, std::int32_t restarts,
              double t_initial, double t_final, const std::string& out) {
  IsingProblem p = as_ising(problem_from_json(load_json(in)));
  SolveResult res;
  if (method == "brute") {
    res = brute_force(p);
  } else if (method == "sa") {
    AnnealSchedule sched;
    sched.sweeps = sweeps;
    sched.restarts = restarts;
    sched.t_initial = t_initial;
    sched.t_final = t_final;
    res = simulated_annealing(p, sched, seed);
  } else {
    throw std::invalid_argument("method must be brute or sa");
  }
  save_json(out, solve_result_to_json(res));
  std::cout << res.method << " energy " << res.energy.str() << "\n";
  return 0;
}

int cmd_attack(const std::string& in, const std::string& cipher,
               std::int32_t stream_bits, bool use_j, std::int32_t branch_bound,
               const std::string& out) {
  CipherSpec spec = resolve_cipher(cipher);
  IsingProblem intercepted = as_ising(problem_from_json(load_json(in)));
  Oracle oracle = make_cipher_oracle(spec);
  AttackOptions opts;
  opts.use_j_validation = use_j;
  opts.branch_bound = branch_bound;
  std::int32_t len = stream_bits > 0 ? stream_bits : spec.state_bits();
  AttackResult res = run_attack(oracle, intercepted, len, opts);
  save_json(out, attack_result_to_json(res));
  std::cout << "recovered keystream " << bits_to_string(res.keystream)
            << " with " << res.oracle_calls << " oracle calls, verified="
            << (res.verified ? "true" : "false") << "\n";
  return 0;
}

int cmd_verify(const std::string& original_path,
               const std::string& concealed_path, const std::string& key_path,
               const std::string& result_path,
               const std::string& keystream_path) {
  IsingProblem original = as_ising(problem_from_json(load_json(original_path)));
  IsingProblem concealed = as_ising(problem_from_json(load_json(concealed_path)));
  ConcealmentKey key = key_from_json(load_json(key_path));
  AttackResult result = attack_result_from_json(load_json(result_path));

  bool ok = true;

  // 1. recovered key bits against the actual key, where determined
  bool key_ok = result.key.size() == key.bits.size();
  if (key_ok)
    for (std::size_t i = 0; i < key.bits.size(); ++i) {
      if (result.key[i] == KeyBit::Undetermined) continue;
      if ((result.key[i] == KeyBit::One) != (key.bits[i] == 1)) key_ok = false;
    }
  std::cout << (key_ok ? "PASS" : "FAIL") << " key comparison\n";
  ok = ok && key_ok;

  // 2. decrypt the concealed bias vector and compare with the original
  IsingProblem revealed = reveal_problem(concealed, key);
  bool bias_ok = revealed.n() == original.n() &&
                 revealed.bias() == original.bias();
  std::cout << (bias_ok ? "PASS" : "FAIL") << " bias decrypt-and-compare\n";
  ok = ok && bias_ok;

  if (!keystream_path.empty()) {
    auto z = keystream_from_json(load_json(keystream_path));
    bool z_ok = result.keystream == z;
    std::cout << (z_ok ? "PASS" : "FAIL") << " keystream comparison\n";
    ok = ok && z_ok;
  }
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-reversal concealment pipeline and keystream-recovery attack"};
  app.require_subcommand(1);

  std::string cipher = "scaled", keystream, in, out, key_path;
  std::string original_path, concealed_path, result_path, keystream_path;
  std::string solve_in, solve_out, method = "sa";
  std::uint64_t seed = 0;
  bool use_j = false;
  std::int32_t sweeps = 4000, restarts = 8, stream_bits = 0, branch_bound = 8;
  double t_initial = 8.0, t_final = 0.05;

  auto* gen = app.add_subcommand("gen", "generate a cryptanalytic instance");
  gen->add_option("--cipher", cipher, "full, scaled, or a spec file");
  auto* gen_z = gen->add_option("--keystream", keystream, "explicit keystream bits");
  auto* gen_seed = gen->add_option("--seed", seed, "simulate from a seeded state")
                       ->excludes(gen_z);
  gen_z->excludes(gen_seed);
  gen->add_option("--out", out, "output prefix")->default_val("problem");

  auto* conceal_cmd = app.add_subcommand("conceal", "apply a spin reversal key");
  conceal_cmd->add_option("--in", in, "problem file")->required();
  auto* conceal_key = conceal_cmd->add_option("--key", key_path, "key file");
  conceal_cmd->add_option("--seed", seed, "generate a fresh key")
      ->excludes(conceal_key);
  conceal_cmd->add_option("--out", out, "output prefix")->default_val("hidden");

  auto* reveal_cmd = app.add_subcommand("reveal", "undo a spin reversal key");
  reveal_cmd->add_option("--in", in, "concealed problem file")->required();
  reveal_cmd->add_option("--key", key_path, "key file")->required();
  reveal_cmd->add_option("--out", out, "revealed problem path")->required();
  reveal_cmd->add_option("--solve-result", solve_in, "solution to unmask");
  reveal_cmd->add_option("--out-solution", solve_out, "unmasked solution path");

  auto* solve_cmd = app.add_subcommand("solve", "classical stand-in solvers");
  solve_cmd->add_option("--in", in, "problem file")->required();
  solve_cmd->add_option("--method", method, "brute or sa")
      ->check(CLI::IsMember({"brute", "sa"}));
  solve_cmd->add_option("--seed", seed, "annealer seed");
  solve_cmd->add_option("--sweeps", sweeps, "annealer sweeps");
  solve_cmd->add_option("--restarts", restarts, "annealer restarts");
  solve_cmd->add_option("--t-initial", t_initial, "initial temperature");
  solve_cmd->add_option("--t-final", t_final, "final temperature");
  solve_cmd->add_option("--out", out, "result path")->default_val("solve.json");

  auto* attack_cmd =
      app.add_subcommand("attack", "recover keystream and key from a "
                                   "concealed instance");
  attack_cmd->add_option("--in", in, "intercepted concealed problem")->required();
  attack_cmd->add_option("--cipher", cipher, "full, scaled, or a spec file");
  attack_cmd->add_option("--stream-bits", stream_bits,
                         "keystream length (default: state bits of the cipher)");
  attack_cmd->add_flag("--use-j-validation", use_j,
                       "validate and complete the key via coupling parity");
  attack_cmd->add_option("--branch-bound", branch_bound,
                         "maximum ambiguous bits to branch over");
  attack_cmd->add_option("--out", out, "result path")->default_val("attack.json");

  auto* verify_cmd =
      app.add_subcommand("verify", "check attack artifacts against the truth");
  verify_cmd->add_option("--original", original_path, "unconcealed problem")
      ->required();
  verify_cmd->add_option("--concealed", concealed_path, "concealed problem")
      ->required();
  verify_cmd->add_option("--key", key_path, "actual concealment key")->required();
  verify_cmd->add_option("--result", result_path, "attack result")->required();
  verify_cmd->add_option("--keystream", keystream_path,
                         "optional keystream to compare against");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      if (keystream.empty() && gen_seed->count() == 0)
        throw std::invalid_argument("gen requires --keystream or --seed");
      return cmd_gen(cipher, keystream, seed, out);
    }
    if (conceal_cmd->parsed()) {
      if (key_path.empty() && conceal_cmd->count("--seed") == 0)
        throw std::invalid_argument("conceal requires --key or --seed");
      return cmd_conceal(in, key_path, seed, out);
    }
    if (reveal_cmd->parsed())
      return cmd_reveal(in, key_path, out, solve_in, solve_out);
    if (solve_cmd->parsed())
      return cmd_solve(in, method, seed, sweeps, restarts, t_initial, t_final,
                       out);
    if (attack_cmd->parsed())
      return cmd_attack(in, cipher, stream_bits, use_j, branch_bound, out);
    if (verify_cmd->parsed())
      return cmd_verify(original_path, concealed_path, key_path, result_path,
                        keystream_path);
  } catch (const srta::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const srta::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
