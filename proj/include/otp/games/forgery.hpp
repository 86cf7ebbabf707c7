#pragma once

// Strong one-time unforgeability experiment. The challenger samples a key
// and a token, the adversary gets the token plus counted classical access to
// Verify(sk, ·), and wins by outputting two *distinct* accepted pairs.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "otp/auth.hpp"
#include "otp/games/common.hpp"
#include "otp/rng.hpp"

namespace otp::games {

enum class ForgeryPredicate {
  Strong,         // both accept and (x1, z1) != (x2, z2)
  WeakBothValid,  // both accept; distinctness dropped (replay counts as a win)
};

class VerifyOracle {
 public:
  VerifyOracle(const auth::AuthSecretKey& sk, std::size_t budget, GameTranscript* log = nullptr)
      : sk_(sk), budget_(budget), log_(log) {}

  auth::Verdict operator()(const auth::Signature& sig) {
    if (used_ >= budget_) throw BudgetExceeded("verify budget of " + std::to_string(budget_) + " exhausted");
    ++used_;
    const auto v = auth::auth_verify(sk_, sig);
    if (log_) {
      log_->log("verify_query", "x=" + sig.message.to_string() + " z=" + sig.concatenated_tags().to_string() +
                                    (v == auth::Verdict::Accept ? " accept" : " reject"));
    }
    return v;
  }

  std::size_t queries() const { return used_; }
  std::size_t budget() const { return budget_; }
  std::size_t lambda() const { return sk_.lambda; }
  std::size_t ell() const { return sk_.ell(); }

 private:
  const auth::AuthSecretKey& sk_;
  std::size_t budget_;
  std::size_t used_ = 0;
  GameTranscript* log_;
};

class ForgeryAdversary {
 public:
  virtual ~ForgeryAdversary() = default;
  virtual std::string id() const = 0;
  virtual std::size_t verify_budget() const { return 0; }
  virtual auth::TokenRepresentation token_mode() const { return auth::TokenRepresentation::ClassicalSim; }
  virtual std::optional<ForgeryAttempt> forge(auth::AuthToken& token, VerifyOracle& verify, Rng& rng,
                                              GameTranscript& transcript) = 0;
};

inline bool forgery_wins(const auth::AuthSecretKey& sk, const ForgeryAttempt& a, ForgeryPredicate pred) {
  const bool shapes_ok = [&] {
    for (const auto* s : {&a.first, &a.second}) {
      if (s->message.size() != sk.ell() || s->tags.size() != sk.ell()) return false;
      for (const auto& t : s->tags) {
        if (t.size() != sk.lambda) return false;
      }
    }
    return true;
  }();
  if (!shapes_ok) return false;
  const bool both = auth::auth_verify(sk, a.first) == auth::Verdict::Accept &&
                    auth::auth_verify(sk, a.second) == auth::Verdict::Accept;
  if (pred == ForgeryPredicate::WeakBothValid) return both;
  return both && !(a.first == a.second);
}

inline GameTranscript run_auth_forgery_game(std::size_t lambda, std::size_t ell, ForgeryAdversary& adversary,
                                            std::size_t q_verify_max, std::uint64_t seed,
                                            ForgeryPredicate predicate = ForgeryPredicate::Strong) {
  GameTranscript tr;
  tr.game = "forgery";
  tr.adversary = adversary.id();
  tr.seed = seed;
  Rng rng(seed);
  auto sk = auth::auth_keygen(lambda, ell, rng);
  tr.log("keygen", "lambda=" + std::to_string(lambda) + " ell=" + std::to_string(ell));
  auto token = auth::auth_token_gen(sk, adversary.token_mode());
  tr.log("token", auth::to_string(token.representation()));
  if (adversary.verify_budget() > q_verify_max) {
    tr.log("disqualified", "declared budget " + std::to_string(adversary.verify_budget()) + " > " +
                               std::to_string(q_verify_max));
    return tr;
  }
  VerifyOracle verify(sk, adversary.verify_budget(), &tr);
  std::optional<ForgeryAttempt> attempt;
  try {
    attempt = adversary.forge(token, verify, rng, tr);
  } catch (const BudgetExceeded& e) {
    tr.log("disqualified", e.what());
    return tr;
  }
  if (!attempt) {
    tr.log("abstain");
    return tr;
  }
  tr.log("output", "x1=" + attempt->first.message.to_string() + " z1=" + attempt->first.concatenated_tags().to_string() +
                       " x2=" + attempt->second.message.to_string() +
                       " z2=" + attempt->second.concatenated_tags().to_string());
  tr.win = forgery_wins(sk, *attempt, predicate);
  tr.forgery = std::move(attempt);
  tr.log("result", tr.win ? "win" : "loss");
  return tr;
}

// Signs once honestly and submits that pair twice.
class ReplayAdversary final : public ForgeryAdversary {
 public:
  std::string id() const override { return "replay"; }
  std::optional<ForgeryAttempt> forge(auth::AuthToken& token, VerifyOracle&, Rng& rng, GameTranscript&) override {
    auto sig = auth::auth_sign(gf2::BitVector(token.ell()), token, rng);
    return ForgeryAttempt{sig, sig};
  }
};

// One honest signature on the all-zero message, then the same message with
// uniformly random tags.
class HonestPlusRandomAdversary final : public ForgeryAdversary {
 public:
  std::string id() const override { return "honest_plus_random"; }
  std::optional<ForgeryAttempt> forge(auth::AuthToken& token, VerifyOracle&, Rng& rng, GameTranscript&) override {
    const gf2::BitVector msg(token.ell());
    auto first = auth::auth_sign(msg, token, rng);
    auth::Signature second{msg, {}};
    for (std::size_t i = 0; i < token.ell(); ++i) second.tags.push_back(gf2::BitVector::random(token.lambda(), rng));
    return ForgeryAttempt{std::move(first), std::move(second)};
  }
};

// Ignores the token; both pairs are uniform guesses on the all-zero message.
class NoTokenGuessAdversary final : public ForgeryAdversary {
 public:
  std::string id() const override { return "no_token_guess"; }
  std::optional<ForgeryAttempt> forge(auth::AuthToken& token, VerifyOracle&, Rng& rng, GameTranscript&) override {
    auto guess = [&] {
      auth::Signature s{gf2::BitVector(token.ell()), {}};
      for (std::size_t i = 0; i < token.ell(); ++i) s.tags.push_back(gf2::BitVector::random(token.lambda(), rng));
      return s;
    };
    auto a = guess();
    auto b = guess();
    return ForgeryAttempt{std::move(a), std::move(b)};
  }
};

// Honest signature, then up to q Verify queries on random tags for the same
// message looking for a second accepted pair.
class VerifySearchAdversary final : public ForgeryAdversary {
 public:
  explicit VerifySearchAdversary(std::size_t q) : q_(q) {}
  std::string id() const override { return "verify_search"; }
  std::size_t verify_budget() const override { return q_; }
  std::optional<ForgeryAttempt> forge(auth::AuthToken& token, VerifyOracle& verify, Rng& rng,
                                      GameTranscript&) override {
    const gf2::BitVector msg(token.ell());
    auto first = auth::auth_sign(msg, token, rng);
    auth::Signature candidate{msg, {}};
    for (std::size_t i = 0; i < q_ || i == 0; ++i) {
      candidate.tags.clear();
      for (std::size_t b = 0; b < token.ell(); ++b) candidate.tags.push_back(gf2::BitVector::random(token.lambda(), rng));
      if (i >= q_) break;
      if (!(candidate == first) && verify(candidate) == auth::Verdict::Accept) break;
    }
    return ForgeryAttempt{std::move(first), std::move(candidate)};
  }

 private:
  std::size_t q_;
};

inline std::unique_ptr<ForgeryAdversary> make_forgery_adversary(std::string_view id, std::size_t q = 0) {
  if (id == "replay") return std::make_unique<ReplayAdversary>();
  if (id == "honest_plus_random") return std::make_unique<HonestPlusRandomAdversary>();
  if (id == "no_token_guess") return std::make_unique<NoTokenGuessAdversary>();
  if (id == "verify_search") return std::make_unique<VerifySearchAdversary>(q);
  throw ParameterError("unknown forgery adversary '" + std::string(id) + "'");
}

}  // namespace otp::games
