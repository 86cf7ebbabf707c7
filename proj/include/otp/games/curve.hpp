#pragma once

// Sweep runner: one AdvantageEstimate per grid point.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "otp/games/bbotp.hpp"
#include "otp/games/collapsing.hpp"
#include "otp/games/common.hpp"
#include "otp/games/forgery.hpp"
#include "otp/program.hpp"
#include "otp/rng.hpp"

namespace otp::games {

struct GridPoint {
  std::size_t lambda = 4;
  std::size_t ell = 1;
  std::string adversary;
  std::size_t q = 0;
  std::optional<program::ProgramSpec> program;  // bbotp, rewind, collapse
};

inline std::uint64_t point_seed(std::uint64_t seed, std::size_t index) { return mix64(seed + index); }

inline AdvantageEstimate estimate_point(std::string_view game, const GridPoint& p, std::uint64_t trials,
                                        std::uint64_t seed, const TranscriptSink& sink = {}) {
  if (trials == 0) throw ParameterError("at least one trial is required");
  auto need_program = [&]() -> const program::ProgramSpec& {
    if (!p.program) throw ParameterError(std::string(game) + " grid point needs a program");
    return *p.program;
  };
  AdvantageEstimate e;
  if (game == "forgery") {
    std::uint64_t wins = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      auto adv = make_forgery_adversary(p.adversary, p.q);
      const auto tr = run_auth_forgery_game(p.lambda, p.ell, *adv, p.q, trial_seed(seed, t));
      wins += tr.win;
      if (sink) sink(tr);
    }
    e = win_rate("forgery", wins, trials);
    e.ell = p.ell;
  } else if (game == "bbotp") {
    const auto& f = need_program();
    std::uint64_t wins = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      auto adv = make_bbotp_adversary(p.adversary, f, p.q);
      const auto tr = run_bb_otp_game(p.lambda, f, *adv, trial_seed(seed, t));
      wins += tr.win;
      if (sink) sink(tr);
    }
    e = win_rate("bbotp", wins, trials);
    e.ell = f.x_bits;
    e.tau = program::min_entropy(f).tau;
  } else if (game == "rewind") {
    e = run_rewinding_attack(p.lambda, need_program(), trials, seed, sink);
  } else if (game == "collapse") {
    const auto& f = need_program();
    const auto query = uniform_query(f.x_bits);
    e = run_collapsing_experiment(f, query, trials, seed);
    e.lambda = 0;
    return e;
  } else {
    throw ParameterError("unknown game '" + std::string(game) + "'");
  }
  e.game = std::string(game);
  e.adversary = game == "rewind" ? "rewind" : p.adversary;
  e.lambda = p.lambda;
  e.q = p.q;
  return e;
}

inline std::vector<AdvantageEstimate> estimate_advantage_curve(std::string_view game, std::span<const GridPoint> grid,
                                                               std::uint64_t trials, std::uint64_t seed,
                                                               const TranscriptSink& sink = {}) {
  if (grid.empty()) throw ParameterError("parameter grid is empty");
  if (trials == 0) throw ParameterError("at least one trial is required");
  std::vector<AdvantageEstimate> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.push_back(estimate_point(game, grid[i], trials, point_seed(seed, i), sink));
  return out;
}

}  // namespace otp::games
