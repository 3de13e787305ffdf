#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "srta/srt.hpp"
#include "support/test_util.hpp"

using namespace srta;
namespace st = srta::testing;

namespace {

ConcealmentKey key_of_mask(std::int32_t n, std::uint64_t mask) {
  ConcealmentKey k;
  k.bits.resize(n);
  for (std::int32_t i = 0; i < n; ++i)
    k.bits[i] = static_cast<std::uint8_t>((mask >> i) & 1);
  return k;
}

std::vector<std::int64_t> spectrum(const IsingProblem& p) {
  std::vector<std::int64_t> e;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p.n()); ++mask)
    e.push_back(energy_ising(p, st::spins_of_mask(p.n(), mask)).quarter_units());
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST_CASE("concealment on pinned instances") {
  std::mt19937_64 rng(1);
  IsingProblem p = st::random_ising(5, rng);
  ConcealmentKey zero = key_of_mask(5, 0);
  CHECK(conceal(p, zero) == p);

  IsingProblem single(1);
  single.add_bias(0, Coeff::from_int(2));
  CHECK(conceal(single, key_of_mask(1, 1)).bias(0) == Coeff::from_int(-2));

  CHECK_THROWS_AS(conceal(p, key_of_mask(3, 0)), dimension_error);
}

TEST_CASE("ground energy is invariant under concealment") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    std::int32_t n = 2 + static_cast<std::int32_t>(rng() % 9);
    IsingProblem p = st::random_ising(n, rng);
    ConcealmentKey key = random_key(n, rng);
    IsingProblem hidden = conceal(p, key);
    CHECK(st::enumerate_min(p).min_quarters ==
          st::enumerate_min(hidden).min_quarters);
  }
}

TEST_CASE("energy covariance and spectrum invariance") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    std::int32_t n = 2 + static_cast<std::int32_t>(rng() % 7);
    IsingProblem p = st::random_ising(n, rng);
    ConcealmentKey key = random_key(n, rng);
    IsingProblem hidden = conceal(p, key);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      SpinState s = st::spins_of_mask(n, mask);
      REQUIRE(energy_ising(hidden, s) ==
              energy_ising(p, reveal_solution(s, key)));
    }
    CHECK(spectrum(p) == spectrum(hidden));
  }
  // sampled covariance at a size where enumeration is impossible
  std::int32_t n = 40;
  IsingProblem p = st::random_ising(n, rng);
  ConcealmentKey key = random_key(n, rng);
  IsingProblem hidden = conceal(p, key);
  for (int trial = 0; trial < 50; ++trial) {
    SpinState s(n);
    for (auto& v : s) v = (rng() & 1) ? 1 : -1;
    REQUIRE(energy_ising(hidden, s) ==
            energy_ising(p, reveal_solution(s, key)));
  }
}

TEST_CASE("conceal is an involution and keys compose by xor") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    std::int32_t n = 2 + static_cast<std::int32_t>(rng() % 19);
    IsingProblem p = st::random_ising(n, rng);
    ConcealmentKey x = random_key(n, rng);
    ConcealmentKey y = random_key(n, rng);
    CHECK(reveal_problem(conceal(p, x), x) == p);
    ConcealmentKey xy;
    xy.bits.resize(n);
    for (std::int32_t i = 0; i < n; ++i) xy.bits[i] = x.bits[i] ^ y.bits[i];
    CHECK(conceal(conceal(p, x), y) == conceal(p, xy));
  }
}

TEST_CASE("wrong key on an all-nonzero bias leaves a visible difference") {
  std::mt19937_64 rng(55);
  IsingProblem p(6);
  for (std::int32_t i = 0; i < 6; ++i)
    p.add_bias(i, Coeff::from_int(1 + static_cast<std::int64_t>(rng() % 4)));
  ConcealmentKey right = random_key(6, rng);
  ConcealmentKey wrong = right;
  wrong.bits[2] ^= 1;
  IsingProblem hidden = conceal(p, right);
  CHECK(reveal_problem(hidden, right) == p);
  CHECK_FALSE(reveal_problem(hidden, wrong) == p);
}

TEST_CASE("solution unmasking") {
  CHECK(reveal_solution({1, -1}, key_of_mask(2, 0)) == SpinState{1, -1});
  CHECK(reveal_solution({1, -1}, key_of_mask(2, 1)) == SpinState{-1, -1});
  CHECK_THROWS_AS(reveal_solution({1}, key_of_mask(2, 0)), dimension_error);

  // argmin of the concealed problem unmaskes to an argmin of the original
  std::mt19937_64 rng(66);
  for (int trial = 0; trial < 25; ++trial) {
    std::int32_t n = 2 + static_cast<std::int32_t>(rng() % 9);
    IsingProblem p = st::random_ising(n, rng);
    ConcealmentKey key = random_key(n, rng);
    IsingProblem hidden = conceal(p, key);
    auto truth = st::enumerate_min(p);
    auto masked = st::enumerate_min(hidden);
    for (const auto& s : masked.minimizers) {
      Coeff e = energy_ising(p, reveal_solution(s, key));
      REQUIRE(e.quarter_units() == truth.min_quarters);
    }
  }
}
