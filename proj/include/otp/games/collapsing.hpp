#pragma once

// Collapsing experiment for g(x) = f(x; H(x)) with one fixed query state.
// The challenger computes g into R and measures y; with b = 1 it also
// measures Q. Given y, the best distinguisher succeeds with advantage
// TD(ρ_y, Δ(ρ_y)), where ρ_y is the post-measurement Q state and Δ
// dephases it. The reported advantage is Σ_y Pr[y]·TD(ρ_y, Δ(ρ_y)).

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "otp/errors.hpp"
#include "otp/games/common.hpp"
#include "otp/program.hpp"
#include "otp/quantum.hpp"
#include "otp/rng.hpp"
#include "otp/stats.hpp"

namespace otp::games {

inline constexpr std::size_t kMaxCollapsingRandomBits = 12;

inline std::vector<qsim::Amplitude> uniform_query(std::size_t x_bits) {
  const std::size_t n = std::size_t{1} << x_bits;
  return std::vector<qsim::Amplitude>(n, qsim::Amplitude(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
}

inline double collapsing_advantage(const program::ProgramSpec& f, std::span<const qsim::Amplitude> query,
                                   std::span<const std::uint64_t> h_table) {
  if (query.size() != f.x_count() || h_table.size() != f.x_count()) {
    throw DimensionMismatch("query state and H table must cover X");
  }
  const std::size_t out_width = std::max<std::size_t>(1, f.y_width);
  qsim::StateVector::check_capacity(f.x_bits + out_width);
  qsim::RegisterLayout layout;
  const auto q = layout.add("Q", f.x_bits);
  const auto r = layout.add("R", out_width);

  auto state = qsim::StateVector::from_amplitudes({query.begin(), query.end()})
                   .tensor(qsim::StateVector(out_width));
  state = qsim::apply_function_oracle(std::move(state), q, r, [&](std::uint64_t x) { return f(x, h_table[x]); });

  const auto py = qsim::register_distribution(state, r);
  double adv = 0.0;
  for (std::uint64_t y = 0; y < py.size(); ++y) {
    if (py[y] <= 0.0) continue;
    auto proj = qsim::project_register(state, r, y);
    const auto rho = qsim::partial_trace(*proj.post_state, q);
    adv += proj.probability * qsim::trace_distance(rho, rho.dephased());
  }
  return adv;
}

inline AdvantageEstimate run_collapsing_experiment(const program::ProgramSpec& f, std::span<const qsim::Amplitude> query,
                                                   std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw ParameterError("at least one trial is required");
  if (f.r_bits > kMaxCollapsingRandomBits) throw CapacityError("collapsing experiment needs r_bits <= 12");
  std::vector<double> advantages;
  advantages.reserve(trials);
  std::vector<std::uint64_t> h(f.x_count());
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, t));
    for (auto& v : h) v = uniform_below(rng, f.r_count());
    advantages.push_back(collapsing_advantage(f, query, h));
  }
  const auto m = stats::mean_estimate(advantages);
  AdvantageEstimate e;
  e.game = "collapse";
  e.adversary = "optimal_q1";
  e.ell = f.x_bits;
  e.q = 1;
  e.tau = program::min_entropy(f).tau;
  e.trials = trials;
  e.estimate = m.mean;
  e.ci = m.ci;
  return e;
}

}  // namespace otp::games
