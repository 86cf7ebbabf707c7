#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "otp/auth.hpp"
#include "otp/errors.hpp"
#include "otp/scheme.hpp"
#include "otp/stats.hpp"

namespace otp::games {

struct Event {
  std::string kind;
  std::string detail;
};

// The two pairs a forger outputs: (x1, z1) and (x2, z2).
struct ForgeryAttempt {
  auth::Signature first;
  auth::Signature second;
};

struct GameTranscript {
  std::string game;
  std::string adversary;
  std::uint64_t seed = 0;
  std::vector<Event> events;
  std::optional<ForgeryAttempt> forgery;
  std::vector<scheme::Output> outputs;  // measured challenge outputs y, y'
  bool win = false;

  void log(std::string kind, std::string detail = {}) { events.push_back({std::move(kind), std::move(detail)}); }

  std::size_t count(std::string_view kind) const {
    std::size_t n = 0;
    for (const auto& e : events) n += e.kind == kind;
    return n;
  }
};

// Receives every finished transcript of a sweep.
using TranscriptSink = std::function<void(const GameTranscript&)>;

struct AdvantageEstimate {
  std::string game;
  std::string adversary;
  std::size_t lambda = 0;
  std::size_t ell = 0;
  double tau = 0.0;
  std::size_t q = 0;
  std::uint64_t trials = 0;
  std::optional<std::uint64_t> wins;  // empty for exact-advantage averages
  double estimate = 0.0;
  stats::Interval ci;

  std::string params() const {
    std::ostringstream os;
    os << "lambda=" << lambda << ";ell=" << ell << ";tau=" << tau << ";q=" << q;
    if (!adversary.empty()) os << ";adversary=" << adversary;
    return os.str();
  }
};

inline AdvantageEstimate win_rate(std::string game, std::uint64_t wins, std::uint64_t trials) {
  if (trials == 0) throw ParameterError("at least one trial is required");
  AdvantageEstimate e;
  e.game = std::move(game);
  e.trials = trials;
  e.wins = wins;
  e.estimate = static_cast<double>(wins) / static_cast<double>(trials);
  e.ci = stats::wilson_interval(wins, trials);
  return e;
}

// Counted, budgeted classical access to a ProgramOracle.
class BudgetedOracle final : public scheme::ProgramOracle {
 public:
  BudgetedOracle(scheme::ProgramOracle& inner, std::size_t budget, GameTranscript* log = nullptr)
      : inner_(inner), budget_(budget), log_(log) {}

  scheme::Output evaluate(std::uint64_t x, const gf2::BitVector& z) override {
    if (used_ >= budget_) throw BudgetExceeded("program oracle budget of " + std::to_string(budget_) + " exhausted");
    ++used_;
    auto y = inner_.evaluate(x, z);
    if (log_) log_->log("oracle_query", "x=" + std::to_string(x) + " z=" + z.to_string() + " y=" + scheme::to_string(y));
    return y;
  }
  std::uint64_t query_count() const override { return used_; }
  scheme::ProgramShape shape() const override { return inner_.shape(); }

 private:
  scheme::ProgramOracle& inner_;
  std::size_t budget_;
  std::size_t used_ = 0;
  GameTranscript* log_;
};

}  // namespace otp::games
