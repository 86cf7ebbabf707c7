#pragma once

// The one-time program compiler. KeyGen samples an authentication key and
// wraps the guarded circuit
//
//   P(x, z) = ⊥                 if Verify(sk, (x, z)) rejects
//           = f(x; H(x, z))     otherwise
//
// in an ObfHandle: an opaque, query-counted oracle standing in for Obf(P).
// TokenEval signs x with the one-time token and evaluates the handle once.

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "otp/auth.hpp"
#include "otp/errors.hpp"
#include "otp/gf2.hpp"
#include "otp/program.hpp"
#include "otp/quantum.hpp"
#include "otp/random_oracle.hpp"
#include "otp/rng.hpp"

namespace otp::scheme {

using program::Codeword;
using program::ProgramSpec;

// nullopt is ⊥: a value outside Y, never an error.
using Output = std::optional<Codeword>;
inline constexpr Output kReject = std::nullopt;

// Fixed-width codewords for coherent evaluation. ⊥ takes the reserved value
// |Y| = 2^y_width, so the width is ⌈log2(|Y| + 1)⌉ = y_width + 1.
inline std::size_t codeword_width(const ProgramSpec& f) { return f.y_width + 1; }
inline Codeword encode(const Output& y, const ProgramSpec& f) { return y ? *y : f.y_count(); }
inline Output decode(Codeword c, const ProgramSpec& f) {
  if (c == f.y_count()) return kReject;
  if (c > f.y_count()) throw DomainError("codeword outside Y ∪ {⊥}");
  return c;
}

inline std::string to_string(const Output& y) { return y ? std::to_string(*y) : std::string("⊥"); }

// The public shape of P: what any holder of Obf(P) can see.
struct ProgramShape {
  std::size_t lambda = 0;
  std::size_t x_bits = 0;    // ℓ
  std::size_t tag_bits = 0;  // m = ℓ·λ
  std::size_t y_width = 0;
  std::size_t codeword_width = 0;
};

// Anything that answers classical queries to P. The real ObfHandle and the
// reduction's Verify-backed simulation both implement it.
class ProgramOracle {
 public:
  virtual ~ProgramOracle() = default;
  virtual Output evaluate(std::uint64_t x, const gf2::BitVector& z) = 0;
  virtual std::uint64_t query_count() const = 0;
  virtual ProgramShape shape() const = 0;
};

class GuardedProgram {
 public:
  GuardedProgram(auth::AuthSecretKey sk, ProgramSpec f, std::unique_ptr<oracle::RandomOracle> h)
      : sk_(std::move(sk)), f_(std::move(f)), h_(std::move(h)) {
    if (sk_.ell() != f_.x_bits) throw ParameterError("key message length must equal program x_bits");
    if (h_->spec() != oracle::OracleSpec{f_.x_bits, sk_.tag_bits(), f_.r_bits}) {
      throw ParameterError("oracle domain does not match (X, m) -> R");
    }
  }

  Output operator()(std::uint64_t x, const gf2::BitVector& z) const {
    if (x >= f_.x_count()) throw DomainError("program input x outside X");
    if (z.size() != sk_.tag_bits()) throw DomainError("tag string length differs from m = ell * lambda");
    const auto sig = auth::Signature::from_concatenated(gf2::BitVector::from_uint(x, f_.x_bits), z, sk_.lambda);
    if (auth::auth_verify(sk_, sig) == auth::Verdict::Reject) return kReject;
    return f_(x, h_->query_value(x, z));
  }

  ProgramShape shape() const {
    return {sk_.lambda, f_.x_bits, sk_.tag_bits(), f_.y_width, codeword_width(f_)};
  }

  const ProgramSpec& program() const { return f_; }

 private:
  auth::AuthSecretKey sk_;
  ProgramSpec f_;
  std::unique_ptr<oracle::RandomOracle> h_;
};

// Black-box stand-in for Obf(P). Callers can evaluate it and read the query
// counter; nothing else about the wrapped circuit is reachable.
class ObfHandle final : public ProgramOracle {
 public:
  explicit ObfHandle(std::unique_ptr<GuardedProgram> p) : state_(std::make_unique<State>(std::move(p))) {}

  Output evaluate(std::uint64_t x, const gf2::BitVector& z) override {
    state_->queries.fetch_add(1, std::memory_order_relaxed);
    return (*state_->program)(x, z);
  }

  std::uint64_t query_count() const override { return state_->queries.load(std::memory_order_relaxed); }

  ProgramShape shape() const override { return state_->program->shape(); }

  // One coherent query: |x>|z>|c> -> |x>|z>|c XOR enc(P(x, z))>.
  qsim::StateVector apply_coherent(qsim::StateVector state, const qsim::Register& x_reg,
                                   const qsim::Register& z_reg, const qsim::Register& out_reg) {
    const auto sh = shape();
    if (x_reg.width != sh.x_bits || z_reg.width != sh.tag_bits || out_reg.width != sh.codeword_width) {
      throw LayoutError("coherent query registers do not match the program shape");
    }
    if (z_reg.offset != x_reg.end()) throw LayoutError("tag register must directly follow the input register");
    state_->queries.fetch_add(1, std::memory_order_relaxed);
    const GuardedProgram& p = *state_->program;
    const qsim::Register q{x_reg.offset, x_reg.width + z_reg.width};
    return qsim::apply_function_oracle(std::move(state), q, out_reg, [&](std::uint64_t v) {
      const std::uint64_t x = v & ((std::uint64_t{1} << sh.x_bits) - 1);
      const auto z = gf2::BitVector::from_uint(v >> sh.x_bits, sh.tag_bits);
      return encode(p(x, z), p.program());
    });
  }

 private:
  struct State {
    explicit State(std::unique_ptr<GuardedProgram> p) : program(std::move(p)) {}
    std::unique_ptr<GuardedProgram> program;
    std::atomic<std::uint64_t> queries{0};
  };
  std::unique_ptr<State> state_;
};

struct KeyPair {
  auth::AuthSecretKey sk;
  ObfHandle handle;
};

// The authentication key is drawn before anything that depends on f, so the
// token is a function of (λ, ℓ, seed) alone.
inline KeyPair otp_keygen(std::size_t lambda, const ProgramSpec& f, Rng& rng,
                          oracle::OracleMode mode = oracle::OracleMode::LazyRandom) {
  f.validate();
  auth::AuthSecretKey sk = auth::auth_keygen(lambda, f.x_bits, rng);
  const std::uint64_t oracle_seed = rng();
  auto h = std::make_unique<oracle::RandomOracle>(oracle::OracleSpec{f.x_bits, sk.tag_bits(), f.r_bits}, mode,
                                                  oracle_seed);
  auto p = std::make_unique<GuardedProgram>(sk, f, std::move(h));
  return {std::move(sk), ObfHandle(std::move(p))};
}

inline Output guarded_eval(ProgramOracle& handle, std::uint64_t x, const gf2::BitVector& z) {
  return handle.evaluate(x, z);
}

inline auth::AuthToken otp_token_gen(const auth::AuthSecretKey& sk, auth::TokenRepresentation repr) {
  return auth::auth_token_gen(sk, repr);
}

struct TokenEvaluation {
  auth::Signature signature;
  Output y;
};

inline TokenEvaluation otp_token_eval_traced(std::uint64_t x, auth::AuthToken& token, ProgramOracle& handle,
                                             Rng& rng) {
  const auto shape = handle.shape();
  if (x >> shape.x_bits) throw DomainError("input x outside X");
  auto sig = auth::auth_sign(gf2::BitVector::from_uint(x, shape.x_bits), token, rng);
  Output y = handle.evaluate(x, sig.concatenated_tags());
  return {std::move(sig), y};
}

inline Output otp_token_eval(std::uint64_t x, auth::AuthToken& token, ProgramOracle& handle, Rng& rng) {
  return otp_token_eval_traced(x, token, handle, rng).y;
}

}  // namespace otp::scheme
