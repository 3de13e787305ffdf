#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "srta/io.hpp"
#include "support/test_util.hpp"

using namespace srta;
namespace st = srta::testing;

TEST_CASE("problem files round-trip and serialize deterministically") {
  std::mt19937_64 rng(1818);
  IsingProblem p = st::random_ising(9, rng);
  p.add_bias(0, Coeff::from_quarter_units(3));  // exercise fractions
  p.set_offset(Coeff::from_half_units(-5));
  json j = problem_to_json(p);
  CHECK(j.at("model") == "ising");
  CHECK(j.at("scale") == 4);
  CHECK(ising_from_json(j) == p);
  CHECK(problem_to_json(ising_from_json(j)).dump() == j.dump());

  QuboProblem q = st::random_qubo(7, rng);
  json jq = problem_to_json(q);
  CHECK(qubo_from_json(jq) == q);

  AnyProblem any = problem_from_json(jq);
  CHECK(std::holds_alternative<QuboProblem>(any));
  CHECK(as_ising(any) == qubo_to_ising(q));
}

TEST_CASE("problem files reject malformed input") {
  json j = problem_to_json(IsingProblem(2));
  json bad = j;
  bad["scale"] = 2;
  CHECK_THROWS_AS(ising_from_json(bad), io_error);
  bad = j;
  bad["terms"] = json::array({json::array({1, 0, 4})});
  CHECK_THROWS_AS(ising_from_json(bad), io_error);
  bad = j;
  bad["h"] = json::array({0});
  CHECK_THROWS_AS(ising_from_json(bad), io_error);
  bad = j;
  bad.erase("model");
  CHECK_THROWS_AS(problem_from_json(bad), io_error);
  CHECK_THROWS_AS(qubo_from_json(j), io_error);
  bad = j;
  bad.erase("h");
  CHECK_THROWS_AS(ising_from_json(bad), io_error);
  bad = j;
  bad["model"] = 17;
  CHECK_THROWS_AS(problem_from_json(bad), io_error);
  bad = j;
  bad["offset"] = "zero";
  CHECK_THROWS_AS(ising_from_json(bad), io_error);
}

TEST_CASE("key, keystream and spec files round-trip") {
  ConcealmentKey key;
  key.bits = {1, 0, 0, 1, 1};
  json jk = key_to_json(key);
  CHECK(jk.at("bits") == "10011");
  CHECK(key_from_json(jk) == key);
  json broken = jk;
  broken["n"] = 4;
  CHECK_THROWS_AS(key_from_json(broken), io_error);

  auto z = bits_from_string("0101");
  CHECK(keystream_from_json(keystream_to_json(z)) == z);
  CHECK_THROWS_AS(bits_from_string("01x"), io_error);

  CipherSpec spec = full_e0();
  CipherSpec back = cipher_spec_from_json(cipher_spec_to_json(spec));
  CHECK(back == spec);
}

TEST_CASE("solver, report and attack artifacts round-trip") {
  SolveResult r;
  r.state = {1, -1, 1};
  r.energy = Coeff::from_quarter_units(-7);
  r.method = "sa";
  r.iterations = 1234;
  r.restarts = 3;
  json jr = solve_result_to_json(r);
  SolveResult back = solve_result_from_json(jr);
  CHECK(back.state == r.state);
  CHECK(back.energy == r.energy);
  CHECK(back.method == r.method);

  ReductionReport rep;
  rep.n = 240;
  rep.nonzeros = 1448;
  rep.density = 0.05;
  rep.constant = 6;
  rep.slack_bits = {2, 1, 1};
  rep.notes = {"convention"};
  ReductionReport rep2 = report_from_json(report_to_json(rep));
  CHECK(rep2.n == rep.n);
  CHECK(rep2.nonzeros == rep.nonzeros);
  CHECK(rep2.constant == rep.constant);
  CHECK(rep2.slack_bits == rep.slack_bits);

  AttackResult a;
  a.keystream = bits_from_string("0110");
  a.key = {KeyBit::Zero, KeyBit::One, KeyBit::Undetermined};
  a.evidence.push_back({"bias-solve", 4, 2, "concealed"});
  a.verified = true;
  a.oracle_calls = 5;
  json ja = attack_result_to_json(a);
  CHECK(ja.at("key") == "01?");
  AttackResult a2 = attack_result_from_json(ja);
  CHECK(a2.keystream == a.keystream);
  CHECK(a2.key == a.key);
  CHECK(a2.verified);
  CHECK(a2.oracle_calls == 5);
  REQUIRE(a2.evidence.size() == 1);
  CHECK(a2.evidence[0].kind == "bias-solve");
  CHECK(a2.evidence[0].row == 4);
}

TEST_CASE("spin strings") {
  SpinState s{1, -1, -1, 1};
  CHECK(spins_to_string(s) == "+--+");
  CHECK(spins_from_string("+--+") == s);
  CHECK_THROWS_AS(spins_from_string("+0"), io_error);
}

TEST_CASE("missing files raise io errors") {
  CHECK_THROWS_AS(load_json("/nonexistent/srta-test.json"), io_error);
}
