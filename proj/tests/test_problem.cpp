#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "srta/problem.hpp"
#include "support/test_util.hpp"

using namespace srta;
namespace st = srta::testing;

TEST_CASE("ising energy on pinned instances") {
  IsingProblem zero(1);
  CHECK(energy_ising(zero, {1}) == Coeff{});

  IsingProblem half(1);
  half.add_bias(0, Coeff::from_half_units(1));
  half.set_offset(Coeff::from_half_units(1));
  CHECK(energy_ising(half, {-1}) == Coeff{});

  IsingProblem pair(2);
  pair.add_bias(0, Coeff::from_int(1));
  pair.add_bias(1, Coeff::from_int(1));
  pair.add_coupling(0, 1, Coeff::from_int(1));
  pair.set_offset(Coeff::from_int(1));
  CHECK(energy_ising(pair, {1, 1}) == Coeff::from_int(4));

  CHECK_THROWS_AS(energy_ising(pair, {1}), dimension_error);
}

TEST_CASE("qubo energy on pinned instances") {
  QuboProblem empty(2);
  CHECK(energy_qubo(empty, {0, 0}) == Coeff{});

  QuboProblem lin(1);
  lin.add_term(0, 0, Coeff::from_int(1));
  CHECK(energy_qubo(lin, {1}) == Coeff::from_int(1));

  QuboProblem quad(2);
  quad.add_term(0, 1, Coeff::from_int(4));
  CHECK(energy_qubo(quad, {1, 1}) == Coeff::from_int(4));
  CHECK(energy_qubo(quad, {1, 0}) == Coeff{});

  CHECK_THROWS_AS(energy_qubo(quad, {1}), dimension_error);
}

TEST_CASE("problem builders keep the canonical sparse form") {
  IsingProblem p(3);
  p.add_coupling(2, 0, Coeff::from_int(5));
  CHECK(p.coupling(0, 2) == Coeff::from_int(5));
  CHECK(p.couplings().count({0, 2}) == 1);
  p.add_coupling(0, 2, Coeff::from_int(-5));
  CHECK(p.couplings().empty());
  CHECK_THROWS_AS(p.add_coupling(1, 1, Coeff::from_int(1)), dimension_error);
  CHECK_THROWS_AS(p.add_bias(3, Coeff::from_int(1)), dimension_error);

  QuboProblem q(2);
  q.add_term(1, 0, Coeff::from_int(2));
  q.add_term(0, 1, Coeff::from_int(-2));
  CHECK(q.off_diagonal().empty());
  CHECK(q.nonzero_count() == 0);
}

TEST_CASE("conversion of pinned instances") {
  QuboProblem empty(0);
  IsingProblem e = qubo_to_ising(empty);
  CHECK(e.n() == 0);
  CHECK(e.offset().is_zero());

  QuboProblem lin(1);
  lin.add_term(0, 0, Coeff::from_int(1));
  IsingProblem li = qubo_to_ising(lin);
  CHECK(li.bias(0) == Coeff::from_half_units(1));
  CHECK(li.couplings().empty());
  CHECK(li.offset() == Coeff::from_half_units(1));

  QuboProblem quad(2);
  quad.add_term(0, 1, Coeff::from_int(4));
  IsingProblem qi = qubo_to_ising(quad);
  CHECK(qi.bias(0) == Coeff::from_int(1));
  CHECK(qi.bias(1) == Coeff::from_int(1));
  CHECK(qi.coupling(0, 1) == Coeff::from_int(1));
  CHECK(qi.offset() == Coeff::from_int(1));

  // inverse direction of the linear example
  QuboProblem back = ising_to_qubo(li);
  CHECK(back.diagonal()[0] == Coeff::from_int(1));
  CHECK(back.off_diagonal().empty());
  CHECK(back.offset().is_zero());
}

TEST_CASE("conversions preserve the energy function exhaustively") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    std::int32_t n = 1 + static_cast<std::int32_t>(rng() % 8);
    QuboProblem q = st::random_qubo(n, rng);
    IsingProblem ising = qubo_to_ising(q);
    QuboProblem round = ising_to_qubo(ising);

    std::int64_t best_q = 0, best_i = 0;
    std::uint64_t argmin_q = 0, argmin_i = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      BinaryState x = st::bits_of_mask(n, mask);
      SpinState s = binary_to_spin(x);
      Coeff eq = energy_qubo(q, x);
      Coeff ei = energy_ising(ising, s);
      REQUIRE(eq == ei);
      REQUIRE(energy_qubo(round, x) == eq);
      if (mask == 0 || eq.quarter_units() < best_q) {
        best_q = eq.quarter_units();
        argmin_q = mask;
      }
      if (mask == 0 || ei.quarter_units() < best_i) {
        best_i = ei.quarter_units();
        argmin_i = mask;
      }
    }
    // argmin sets correspond under the bijection; representatives agree
    CHECK(argmin_q == argmin_i);
    CHECK(best_q == best_i);
  }
}

TEST_CASE("integer qubo coefficients never leave quarter-units") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    QuboProblem q = st::random_qubo(6, rng);
    // conversion divides by 2 and 4 only; with integer inputs both are
    // exact, so no overflow_error may surface
    IsingProblem ising;
    REQUIRE_NOTHROW(ising = qubo_to_ising(q));
    for (const auto& [ij, c] : ising.couplings())
      CHECK(c.quarter_units() * 4 == q.off_diagonal().at(ij).quarter_units());
    QuboProblem round = ising_to_qubo(ising);
    for (std::int32_t i = 0; i < round.n(); ++i)
      CHECK(round.diagonal()[i].is_integer());
    for (const auto& [ij, c] : round.off_diagonal()) CHECK(c.is_integer());
  }
}

TEST_CASE("spin and binary views are mutually inverse") {
  CHECK(spin_to_binary({-1, 1}) == BinaryState{0, 1});
  CHECK(binary_to_spin({0, 1}) == SpinState{-1, 1});
  for (std::uint64_t mask = 0; mask < 256; ++mask) {
    SpinState s = st::spins_of_mask(8, mask);
    CHECK(binary_to_spin(spin_to_binary(s)) == s);
  }
  CHECK_THROWS_AS(spin_to_binary({2}), dimension_error);
  CHECK_THROWS_AS(binary_to_spin({2}), dimension_error);
}
