#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "srta/error.hpp"
#include "srta/problem.hpp"

namespace srta {

struct SolveResult {
  SpinState state;
  Coeff energy;
  std::string method;
  std::int64_t iterations = 0;
  std::int32_t restarts = 0;
  std::vector<SpinState> all_minima;        // brute force only
  std::vector<Coeff> best_energy_log;       // annealing checkpoints
};

namespace detail {

struct Neighbor {
  std::int32_t j;
  std::int64_t weight_q;  // quarter units
};

inline std::vector<std::vector<Neighbor>> adjacency(const IsingProblem& p) {
  std::vector<std::vector<Neighbor>> adj(p.n());
  for (const auto& [ij, c] : p.couplings()) {
    adj[ij.first].push_back({ij.second, c.quarter_units()});
    adj[ij.second].push_back({ij.first, c.quarter_units()});
  }
  return adj;
}

/// Energy change, in quarter units, of flipping spin i.
inline std::int64_t flip_delta_q(const std::vector<std::int64_t>& h_q,
                                 const std::vector<std::vector<Neighbor>>& adj,
                                 const SpinState& s, std::int32_t i) {
  std::int64_t local = h_q[i];
  for (const auto& nb : adj[i]) local += nb.weight_q * s[nb.j];
  return -2 * s[i] * local;
}

}  // namespace detail

constexpr std::int32_t kBruteForceMaxVars = 24;

/// Exact ground state by Gray-code enumeration of all 2^n spin states,
/// returning the complete set of minimizers.
inline SolveResult brute_force(const IsingProblem& p) {
  if (p.n() > kBruteForceMaxVars)
    throw dimension_error("brute force is capped at " +
                          std::to_string(kBruteForceMaxVars) + " variables");
  SolveResult res;
  res.method = "brute";
  res.restarts = 0;
  if (p.n() == 0) {
    res.energy = p.offset();
    res.all_minima = {SpinState{}};
    return res;
  }

  auto adj = detail::adjacency(p);
  std::vector<std::int64_t> h_q(p.n());
  for (std::int32_t i = 0; i < p.n(); ++i)
    h_q[i] = p.bias()[i].quarter_units();

  SpinState s(p.n(), -1);
  std::int64_t e_q = energy_ising(p, s).quarter_units();
  std::int64_t best_q = e_q;
  res.all_minima = {s};

  const std::uint64_t count = std::uint64_t{1} << p.n();
  for (std::uint64_t g = 1; g < count; ++g) {
    std::int32_t i = std::countr_zero(g);
    e_q += detail::flip_delta_q(h_q, adj, s, i);
    s[i] = static_cast<std::int8_t>(-s[i]);
    if (e_q < best_q) {
      best_q = e_q;
      res.all_minima.clear();
      res.all_minima.push_back(s);
    } else if (e_q == best_q) {
      res.all_minima.push_back(s);
    }
  }
  res.state = res.all_minima.front();
  res.energy = energy_ising(p, res.state);
  res.iterations = static_cast<std::int64_t>(count);
  return res;
}

struct AnnealSchedule {
  double t_initial = 8.0;
  double t_final = 0.05;
  std::int32_t sweeps = 4000;
  std::int32_t restarts = 8;

  void validate() const {
    if (!(t_initial > t_final) || !(t_final > 0.0))
      throw std::invalid_argument("annealing requires t_initial > t_final > 0");
    if (sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  }
};

/// Single-spin-flip Metropolis annealing with geometric cooling.
/// Deterministic for a fixed seed; restarts are merged by best energy with
/// earlier restarts winning ties.
inline SolveResult simulated_annealing(const IsingProblem& p,
                                       const AnnealSchedule& schedule,
                                       std::uint64_t seed) {
  schedule.validate();
  SolveResult res;
  res.method = "sa";
  res.restarts = schedule.restarts;
  if (p.n() == 0) {
    res.energy = p.offset();
    return res;
  }

  auto adj = detail::adjacency(p);
  std::vector<std::int64_t> h_q(p.n());
  for (std::int32_t i = 0; i < p.n(); ++i)
    h_q[i] = p.bias()[i].quarter_units();

  const double cool =
      schedule.sweeps > 1
          ? std::pow(schedule.t_final / schedule.t_initial,
                     1.0 / (schedule.sweeps - 1))
          : 1.0;
  const std::int32_t checkpoint_every =
      std::max<std::int32_t>(1, schedule.sweeps / 64);

  bool have_best = false;
  std::int64_t best_q = 0;
  SpinState best_state;

  for (std::int32_t r = 0; r < schedule.restarts; ++r) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    SpinState s(p.n());
    for (auto& v : s) v = (rng() & 1u) ? 1 : -1;
    std::int64_t e_q = energy_ising(p, s).quarter_units();
    std::int64_t run_best_q = e_q;
    SpinState run_best = s;

    double temp = schedule.t_initial;
    for (std::int32_t sweep = 0; sweep < schedule.sweeps; ++sweep) {
      for (std::int32_t i = 0; i < p.n(); ++i) {
        std::int64_t d_q = detail::flip_delta_q(h_q, adj, s, i);
        if (d_q <= 0 ||
            unif(rng) < std::exp(-(static_cast<double>(d_q) / 4.0) / temp)) {
          s[i] = static_cast<std::int8_t>(-s[i]);
          e_q += d_q;
          if (e_q < run_best_q) {
            run_best_q = e_q;
            run_best = s;
          }
        }
      }
      temp *= cool;
      if (sweep % checkpoint_every == 0) {
        std::int64_t global =
            have_best ? std::min(best_q, run_best_q) : run_best_q;
        res.best_energy_log.push_back(Coeff::from_quarter_units(global));
      }
    }
    if (!have_best || run_best_q < best_q) {
      have_best = true;
      best_q = run_best_q;
      best_state = run_best;
    }
  }

  res.state = best_state;
  res.energy = energy_ising(p, res.state);
  res.iterations = static_cast<std::int64_t>(schedule.restarts) *
                   schedule.sweeps * p.n();
  return res;
}

}  // namespace srta
