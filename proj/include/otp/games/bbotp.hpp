#pragma once

// Black-box one-time security experiment for the compiled scheme, the
// coherent rewinding attack, and the reduction R that turns a BB-OTP
// adversary into a forger.
//
//   1. challenger: (sk, Obf(P)) <- KeyGen, |tk> <- TokenGen(sk)
//   2. adversary gets |tk> and oracle access to P; submits Q = (x, z)
//   3. challenger computes P into R, measures y, aborts on ⊥, returns Q
//   4. adversary submits Q again; challenger measures y'
//   win iff y' ∉ {y, ⊥}

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "otp/auth.hpp"
#include "otp/games/common.hpp"
#include "otp/games/forgery.hpp"
#include "otp/program.hpp"
#include "otp/quantum.hpp"
#include "otp/random_oracle.hpp"
#include "otp/rng.hpp"
#include "otp/scheme.hpp"

namespace otp::games {

struct ClassicalQuery {
  std::uint64_t x = 0;
  gf2::BitVector z;
};

// Names of two adjacent workspace registers holding x and z.
struct CoherentQuery {
  std::string x_reg = "x";
  std::string z_reg = "z";
};

using ChallengeQuery = std::variant<ClassicalQuery, CoherentQuery>;

// Qubits owned by a coherent adversary. Registers are appended on top of
// the existing state as they are allocated.
class QuantumWorkspace {
 public:
  QuantumWorkspace() : state_(0) {}

  qsim::Register allocate(const std::string& name, std::size_t width) {
    auto r = layout_.add(name, width);
    state_ = state_.tensor(qsim::StateVector(width));
    return r;
  }

  qsim::Register load(const std::string& name, const qsim::StateVector& s) {
    auto r = layout_.add(name, s.num_qubits());
    state_ = state_.tensor(s);
    return r;
  }

  void apply(const qsim::Op& op) { state_ = qsim::apply(std::move(state_), op); }
  void run(const qsim::Circuit& c) { state_ = qsim::run_circuit(std::move(state_), c); }
  void uncompute(const qsim::Circuit& c) { state_ = qsim::uncompute(std::move(state_), c); }

  std::uint64_t measure(const qsim::Register& r, Rng& rng) {
    auto m = qsim::measure_register(state_, r, rng);
    state_ = std::move(m.post_state);
    return m.outcome.to_uint();
  }

  const qsim::Register& reg(std::string_view name) const { return layout_.at(name); }
  bool has(std::string_view name) const { return layout_.has(name); }
  const qsim::RegisterLayout& layout() const { return layout_; }
  qsim::StateVector& state() { return state_; }
  const qsim::StateVector& state() const { return state_; }
  bool empty() const { return layout_.num_qubits() == 0; }

 private:
  qsim::RegisterLayout layout_;
  qsim::StateVector state_;
};

inline std::string token_register(std::size_t i) { return "tok" + std::to_string(i); }

// What the adversary holds during the game. Classical-sim adversaries get
// `token`; statevector adversaries find their token as tok0..tok{ℓ-1} in
// `workspace`.
struct BbOtpSession {
  scheme::ProgramShape shape;
  auth::AuthToken* token = nullptr;
  QuantumWorkspace workspace;
  scheme::ProgramOracle& oracle;
  Rng& rng;
  GameTranscript& transcript;
};

class BbOtpAdversary {
 public:
  virtual ~BbOtpAdversary() = default;
  virtual std::string id() const = 0;
  virtual std::size_t query_budget() const { return 0; }
  virtual auth::TokenRepresentation token_mode() const { return auth::TokenRepresentation::ClassicalSim; }
  virtual void begin(BbOtpSession&) {}
  // nullopt means the adversary stops.
  virtual std::optional<ChallengeQuery> first_query(BbOtpSession& s) = 0;
  virtual std::optional<ChallengeQuery> second_query(BbOtpSession& s, scheme::Output y) = 0;
};

using BbOtpAdversaryFactory = std::function<std::unique_ptr<BbOtpAdversary>()>;

// Answers challenge queries. The real game evaluates P; the reduction
// measures Q instead.
class Challenger {
 public:
  virtual ~Challenger() = default;
  virtual scheme::Output challenge(BbOtpSession& s, const ChallengeQuery& q, int index) = 0;
};

namespace detail {

inline std::string describe(const ChallengeQuery& q) {
  if (const auto* c = std::get_if<ClassicalQuery>(&q)) {
    return "classical x=" + std::to_string(c->x) + " z=" + c->z.to_string();
  }
  const auto& c = std::get<CoherentQuery>(q);
  return "coherent Q=(" + c.x_reg + "," + c.z_reg + ")";
}

inline qsim::Register query_register(const QuantumWorkspace& w, const CoherentQuery& q,
                                     const scheme::ProgramShape& sh) {
  const auto& x = w.reg(q.x_reg);
  const auto& z = w.reg(q.z_reg);
  if (x.width != sh.x_bits || z.width != sh.tag_bits) throw LayoutError("query registers do not match (x, z) widths");
  if (z.offset != x.end()) throw LayoutError("tag register must directly follow the input register");
  return {x.offset, x.width + z.width};
}

// Steps 2-4, shared by the real game and the reduction.
inline bool drive_bb_otp(BbOtpAdversary& adv, BbOtpSession& s, Challenger& ch) {
  auto& tr = s.transcript;
  adv.begin(s);
  auto q1 = adv.first_query(s);
  if (!q1) {
    tr.log("stop", "no first challenge query");
    return false;
  }
  tr.log("challenge_1", describe(*q1));
  const scheme::Output y = ch.challenge(s, *q1, 1);
  tr.outputs.push_back(y);
  tr.log("measure_y", scheme::to_string(y));
  if (!y) {
    tr.log("abort", "y = ⊥");
    return false;
  }
  auto q2 = adv.second_query(s, y);
  if (!q2) {
    tr.log("stop", "no second challenge query");
    return false;
  }
  tr.log("challenge_2", describe(*q2));
  const scheme::Output y2 = ch.challenge(s, *q2, 2);
  tr.outputs.push_back(y2);
  tr.log("measure_y'", scheme::to_string(y2));
  return y2.has_value() && *y2 != *y;
}

inline void hand_over_token(BbOtpSession& s, auth::AuthToken& token) {
  if (token.representation() == auth::TokenRepresentation::StateVector) {
    auto states = token.release_states();
    for (std::size_t i = 0; i < states.size(); ++i) s.workspace.load(token_register(i), states[i]);
  } else {
    s.token = &token;
  }
}

}  // namespace detail

// The real challenger: one evaluation of Obf(P) per challenge.
class ProgramChallenger final : public Challenger {
 public:
  explicit ProgramChallenger(scheme::ObfHandle& handle) : handle_(handle) {}

  scheme::Output challenge(BbOtpSession& s, const ChallengeQuery& q, int) override {
    if (const auto* c = std::get_if<ClassicalQuery>(&q)) return handle_.evaluate(c->x, c->z);
    const auto& cq = std::get<CoherentQuery>(q);
    auto& w = s.workspace;
    if (!w.has("challenger_out")) w.allocate("challenger_out", s.shape.codeword_width);
    const auto out = w.reg("challenger_out");
    w.state() = handle_.apply_coherent(std::move(w.state()), w.reg(cq.x_reg), w.reg(cq.z_reg), out);
    const std::uint64_t c = w.measure(out, s.rng);
    w.apply(qsim::PauliX{out, c});  // reset R to |0> before handing Q back
    const std::uint64_t bot = std::uint64_t{1} << s.shape.y_width;
    return c == bot ? scheme::kReject : scheme::Output(c);
  }

 private:
  scheme::ObfHandle& handle_;
};

inline GameTranscript run_bb_otp_game(std::size_t lambda, const program::ProgramSpec& f, BbOtpAdversary& adversary,
                                      std::uint64_t seed) {
  GameTranscript tr;
  tr.game = "bbotp";
  tr.adversary = adversary.id();
  tr.seed = seed;
  Rng rng(seed);
  auto kp = scheme::otp_keygen(lambda, f, rng);
  tr.log("keygen", "lambda=" + std::to_string(lambda) + " f=" + f.name);
  auto token = scheme::otp_token_gen(kp.sk, adversary.token_mode());
  tr.log("token", auth::to_string(token.representation()));
  BudgetedOracle oracle(kp.handle, adversary.query_budget(), &tr);
  BbOtpSession s{kp.handle.shape(), nullptr, {}, oracle, rng, tr};
  ProgramChallenger ch(kp.handle);
  try {
    detail::hand_over_token(s, token);
    tr.win = detail::drive_bb_otp(adversary, s, ch);
  } catch (const BudgetExceeded& e) {
    tr.log("disqualified", e.what());
    tr.win = false;
  }
  tr.log("result", tr.win ? "win" : "loss");
  return tr;
}

// Signs x = 0 honestly, evaluates once, and stops.
class HonestStopAdversary final : public BbOtpAdversary {
 public:
  std::string id() const override { return "honest_stop"; }
  std::optional<ChallengeQuery> first_query(BbOtpSession& s) override {
    auto sig = auth::auth_sign(gf2::BitVector(s.shape.x_bits), *s.token, s.rng);
    return ClassicalQuery{0, sig.concatenated_tags()};
  }
  std::optional<ChallengeQuery> second_query(BbOtpSession&, scheme::Output) override { return std::nullopt; }
};

// Submits the same honestly signed pair for both challenges.
class ReplayBbAdversary final : public BbOtpAdversary {
 public:
  std::string id() const override { return "replay"; }
  std::optional<ChallengeQuery> first_query(BbOtpSession& s) override {
    auto sig = auth::auth_sign(gf2::BitVector(s.shape.x_bits), *s.token, s.rng);
    q_ = ClassicalQuery{0, sig.concatenated_tags()};
    return q_;
  }
  std::optional<ChallengeQuery> second_query(BbOtpSession&, scheme::Output) override { return q_; }

 private:
  ClassicalQuery q_;
};

// Evaluates x = 0 honestly, then tries to sign x = 1 with the spent token.
// The token refuses, so the second query carries uniformly random tags.
class ClassicalDoubleEvalAdversary final : public BbOtpAdversary {
 public:
  std::string id() const override { return "classical_double_eval"; }
  std::optional<ChallengeQuery> first_query(BbOtpSession& s) override {
    auto sig = auth::auth_sign(gf2::BitVector(s.shape.x_bits), *s.token, s.rng);
    return ClassicalQuery{0, sig.concatenated_tags()};
  }
  std::optional<ChallengeQuery> second_query(BbOtpSession& s, scheme::Output) override {
    const auto msg = gf2::BitVector::from_uint(1, s.shape.x_bits);
    try {
      auto sig = auth::auth_sign(msg, *s.token, s.rng);
      return ClassicalQuery{1, sig.concatenated_tags()};
    } catch (const OneShotViolation& e) {
      s.transcript.log("one_shot_violation", e.what());
    }
    return ClassicalQuery{1, gf2::BitVector::random(s.shape.tag_bits, s.rng)};
  }
};

// Spends `made` classical queries on P at random points before an honest
// evaluation; declares `declared` of them.
class QueryScriptAdversary final : public BbOtpAdversary {
 public:
  QueryScriptAdversary(std::size_t declared, std::size_t made) : declared_(declared), made_(made) {}
  std::string id() const override { return "query_script"; }
  std::size_t query_budget() const override { return declared_; }
  void begin(BbOtpSession& s) override {
    for (std::size_t i = 0; i < made_; ++i) {
      const std::uint64_t x = uniform_below(s.rng, std::uint64_t{1} << s.shape.x_bits);
      s.oracle.evaluate(x, gf2::BitVector::random(s.shape.tag_bits, s.rng));
    }
  }
  std::optional<ChallengeQuery> first_query(BbOtpSession& s) override {
    auto sig = auth::auth_sign(gf2::BitVector(s.shape.x_bits), *s.token, s.rng);
    return ClassicalQuery{0, sig.concatenated_tags()};
  }
  std::optional<ChallengeQuery> second_query(BbOtpSession&, scheme::Output) override { return std::nullopt; }

 private:
  std::size_t declared_;
  std::size_t made_;
};

// Coherent signing: |tok_i> -> H^{x_i}|tok_i>, copy into z slice i. Every
// gate is its own inverse, so the same circuit run backwards restores the
// token whenever the challenge measurement left z untouched.
inline qsim::Circuit coherent_sign_circuit(const QuantumWorkspace& w, std::uint64_t message, std::size_t ell,
                                           std::size_t lambda) {
  const auto x = w.reg("x");
  const auto z = w.reg("z");
  qsim::Circuit c;
  c.emplace_back(qsim::PauliX{x, message});
  for (std::size_t i = 0; i < ell; ++i) {
    const auto tok = w.reg(token_register(i));
    c.emplace_back(qsim::HadamardLayer{tok, x.offset + i});
    c.emplace_back(qsim::XorOracle{tok, qsim::Register{z.offset + i * lambda, lambda},
                                   [](std::uint64_t v) { return v; }});
  }
  return c;
}

// Sign m1 coherently, submit, uncompute, sign m2 and submit again.
class RewindingAdversary final : public BbOtpAdversary {
 public:
  explicit RewindingAdversary(const program::ProgramSpec& f) {
    m2_ = m1_ ^ 1u;
    for (std::uint64_t x = 0; x < f.x_count(); ++x) {
      if (f(x, 0) != f(m1_, 0)) {
        m2_ = x;
        break;
      }
    }
  }
  std::string id() const override { return "rewind"; }
  auth::TokenRepresentation token_mode() const override { return auth::TokenRepresentation::StateVector; }

  void begin(BbOtpSession& s) override {
    s.workspace.allocate("x", s.shape.x_bits);
    s.workspace.allocate("z", s.shape.tag_bits);
  }
  std::optional<ChallengeQuery> first_query(BbOtpSession& s) override {
    circuit_ = coherent_sign_circuit(s.workspace, m1_, s.shape.x_bits, s.shape.lambda);
    s.workspace.run(circuit_);
    return CoherentQuery{};
  }
  std::optional<ChallengeQuery> second_query(BbOtpSession& s, scheme::Output) override {
    s.workspace.uncompute(circuit_);
    s.transcript.log("rewind", "uncomputed signing of x=" + std::to_string(m1_));
    circuit_ = coherent_sign_circuit(s.workspace, m2_, s.shape.x_bits, s.shape.lambda);
    s.workspace.run(circuit_);
    return CoherentQuery{};
  }

  std::uint64_t first_message() const { return m1_; }
  std::uint64_t second_message() const { return m2_; }

 private:
  std::uint64_t m1_ = 0;
  std::uint64_t m2_ = 1;
  qsim::Circuit circuit_;
};

inline AdvantageEstimate run_rewinding_attack(std::size_t lambda, const program::ProgramSpec& f, std::uint64_t trials,
                                              std::uint64_t seed, const TranscriptSink& sink = {}) {
  std::uint64_t wins = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    RewindingAdversary adv(f);
    const auto tr = run_bb_otp_game(lambda, f, adv, trial_seed(seed, t));
    wins += tr.win;
    if (sink) sink(tr);
  }
  auto e = win_rate("rewind", wins, trials);
  e.adversary = "rewind";
  e.lambda = lambda;
  e.ell = f.x_bits;
  if (f.r_bits <= program::kMaxEntropyRandomBits && f.x_bits <= program::kMaxEntropyRandomBits) {
    e.tau = program::min_entropy(f).tau;
  }
  return e;
}

// P answered from outside the key: Verify decides acceptance, f and a
// locally sampled H supply the output.
class SimulatedProgram final : public scheme::ProgramOracle {
 public:
  SimulatedProgram(VerifyOracle& verify, program::ProgramSpec f, std::uint64_t h_seed)
      : verify_(verify),
        f_(std::move(f)),
        h_(oracle::OracleSpec{f_.x_bits, verify.lambda() * verify.ell(), f_.r_bits}, oracle::OracleMode::LazyRandom,
           h_seed) {}

  scheme::Output evaluate(std::uint64_t x, const gf2::BitVector& z) override {
    ++queries_;
    const auto sig = auth::Signature::from_concatenated(gf2::BitVector::from_uint(x, f_.x_bits), z, verify_.lambda());
    if (verify_(sig) == auth::Verdict::Reject) return scheme::kReject;
    return f_(x, h_.query_value(x, z));
  }
  std::uint64_t query_count() const override { return queries_; }
  scheme::ProgramShape shape() const override {
    return {verify_.lambda(), f_.x_bits, verify_.lambda() * verify_.ell(), f_.y_width, scheme::codeword_width(f_)};
  }

 private:
  VerifyOracle& verify_;
  program::ProgramSpec f_;
  oracle::RandomOracle h_;
  std::uint64_t queries_ = 0;
};

// The reduction's challenger: measure Q, keep (x, z), hand back the
// collapsed register.
class MeasuringChallenger final : public Challenger {
 public:
  explicit MeasuringChallenger(SimulatedProgram& program) : program_(program) {}

  scheme::Output challenge(BbOtpSession& s, const ChallengeQuery& q, int index) override {
    ClassicalQuery pair;
    if (const auto* c = std::get_if<ClassicalQuery>(&q)) {
      pair = *c;
    } else {
      const auto reg = detail::query_register(s.workspace, std::get<CoherentQuery>(q), s.shape);
      const std::uint64_t v = s.workspace.measure(reg, s.rng);
      pair.x = v & ((std::uint64_t{1} << s.shape.x_bits) - 1);
      pair.z = gf2::BitVector::from_uint(v >> s.shape.x_bits, s.shape.tag_bits);
    }
    s.transcript.log("measure_Q", "index=" + std::to_string(index) + " x=" + std::to_string(pair.x) +
                                      " z=" + pair.z.to_string());
    pairs.push_back(pair);
    return program_.evaluate(pair.x, pair.z);
  }

  std::vector<ClassicalQuery> pairs;

 private:
  SimulatedProgram& program_;
};

// R: run the BB-OTP adversary against simulated P and output the two
// measured pairs.
class ReductionAdversary final : public ForgeryAdversary {
 public:
  ReductionAdversary(BbOtpAdversaryFactory make, program::ProgramSpec f) : make_(std::move(make)), f_(std::move(f)) {
    probe_ = make_();
  }
  std::string id() const override { return "reduction(" + probe_->id() + ")"; }
  std::size_t verify_budget() const override { return probe_->query_budget() + 2; }
  auth::TokenRepresentation token_mode() const override { return probe_->token_mode(); }

  std::optional<ForgeryAttempt> forge(auth::AuthToken& token, VerifyOracle& verify, Rng& rng,
                                      GameTranscript& tr) override {
    auto inner = make_();
    SimulatedProgram program(verify, f_, rng());
    BudgetedOracle oracle(program, inner->query_budget(), &tr);
    const auto shape = program.shape();
    BbOtpSession s{shape, nullptr, {}, oracle, rng, tr};
    MeasuringChallenger ch(program);
    detail::hand_over_token(s, token);
    const bool bb_win = detail::drive_bb_otp(*inner, s, ch);
    tr.log("reduction_bb_predicate", bb_win ? "y' ∉ {y, ⊥}" : "not met");
    if (ch.pairs.size() < 2) return std::nullopt;
    auto to_sig = [&](const ClassicalQuery& p) {
      return auth::Signature::from_concatenated(gf2::BitVector::from_uint(p.x, shape.x_bits), p.z, shape.lambda);
    };
    return ForgeryAttempt{to_sig(ch.pairs[0]), to_sig(ch.pairs[1])};
  }

 private:
  BbOtpAdversaryFactory make_;
  program::ProgramSpec f_;
  std::unique_ptr<BbOtpAdversary> probe_;
};

// True when the reduction run itself observed y' ∉ {y, ⊥}.
inline bool reduction_bb_predicate(const GameTranscript& tr) {
  return tr.outputs.size() == 2 && tr.outputs[0] && tr.outputs[1] && *tr.outputs[0] != *tr.outputs[1];
}

inline GameTranscript reduction_forge(const BbOtpAdversaryFactory& make, const program::ProgramSpec& f,
                                      std::size_t lambda, std::uint64_t seed) {
  ReductionAdversary r(make, f);
  auto tr = run_auth_forgery_game(lambda, f.x_bits, r, r.verify_budget(), seed, ForgeryPredicate::Strong);
  tr.game = "reduction";
  return tr;
}

inline std::unique_ptr<BbOtpAdversary> make_bbotp_adversary(std::string_view id, const program::ProgramSpec& f,
                                                            std::size_t q = 0) {
  if (id == "honest_stop") return std::make_unique<HonestStopAdversary>();
  if (id == "replay") return std::make_unique<ReplayBbAdversary>();
  if (id == "classical_double_eval") return std::make_unique<ClassicalDoubleEvalAdversary>();
  if (id == "query_script") return std::make_unique<QueryScriptAdversary>(q, q);
  if (id == "rewind") return std::make_unique<RewindingAdversary>(f);
  throw ParameterError("unknown bbotp adversary '" + std::string(id) + "'");
}

}  // namespace otp::games
