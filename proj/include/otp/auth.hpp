#pragma once

// One-time authentication from hidden subspace states, composed bitwise:
// message bit i is signed with token component i, whose key is a uniformly
// random λ/2-dimensional subspace A_i of F2^λ.
//
//   bit 0: measure |A_i> in the computational basis  -> tag in A_i
//   bit 1: measure |A_i> in the Hadamard basis       -> tag in A_i^⊥
//
// Verify rejects the zero tag outright. An honest measurement produces it
// with probability 2^{-λ/2} per bit; that deficit is reported, not hidden.

#include <sodium.h>

#include <atomic>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "otp/errors.hpp"
#include "otp/gf2.hpp"
#include "otp/quantum.hpp"
#include "otp/rng.hpp"

namespace otp::auth {

struct AuthSecretKey {
  std::size_t lambda = 0;
  std::vector<gf2::SubspaceBasis> subspaces;

  std::size_t ell() const { return subspaces.size(); }
  std::size_t tag_bits() const { return lambda * subspaces.size(); }

  friend bool operator==(const AuthSecretKey&, const AuthSecretKey&) = default;
};

enum class TokenRepresentation { ClassicalSim, StateVector };

inline std::string to_string(TokenRepresentation r) {
  return r == TokenRepresentation::ClassicalSim ? "classical" : "statevector";
}

struct Signature {
  gf2::BitVector message;             // ℓ bits
  std::vector<gf2::BitVector> tags;  // ℓ tags of λ bits each

  // z = tag_0 || tag_1 || ... ; m = ℓ·λ bits.
  gf2::BitVector concatenated_tags() const {
    gf2::BitVector z = tags.at(0);
    for (std::size_t i = 1; i < tags.size(); ++i) z = z.concat(tags[i]);
    return z;
  }

  static Signature from_concatenated(const gf2::BitVector& message, const gf2::BitVector& z, std::size_t lambda) {
    if (lambda == 0 || z.size() != message.size() * lambda) {
      throw DimensionMismatch("tag string of " + std::to_string(z.size()) + " bits does not split into " +
                              std::to_string(message.size()) + " tags of " + std::to_string(lambda) + " bits");
    }
    Signature s{message, {}};
    for (std::size_t i = 0; i < message.size(); ++i) s.tags.push_back(z.slice(i * lambda, lambda));
    return s;
  }

  // "ℓ λ", message bits, then one tag row per line.
  std::string to_text() const {
    std::ostringstream os;
    os << message.size() << ' ' << (tags.empty() ? 0 : tags.front().size()) << '\n' << message << '\n';
    for (const auto& t : tags) os << t << '\n';
    return os.str();
  }

  static Signature from_text(std::istream& in) {
    std::size_t ell = 0, lambda = 0;
    std::string msg;
    if (!(in >> ell >> lambda >> msg) || msg.size() != ell) throw FormatError("malformed signature header");
    Signature s{gf2::BitVector::from_string(msg), {}};
    for (std::size_t i = 0; i < ell; ++i) {
      std::string row;
      if (!(in >> row) || row.size() != lambda) throw FormatError("malformed signature tag");
      s.tags.push_back(gf2::BitVector::from_string(row));
    }
    return s;
  }

  friend bool operator==(const Signature&, const Signature&) = default;
};

enum class Verdict { Reject, Accept };

inline AuthSecretKey auth_keygen(std::size_t lambda, std::size_t ell, Rng& rng) {
  if (lambda < 2 || lambda % 2 != 0) throw ParameterError("lambda must be even and >= 2, got " + std::to_string(lambda));
  if (ell == 0) throw ParameterError("message length must be >= 1");
  AuthSecretKey sk{lambda, {}};
  for (std::size_t i = 0; i < ell; ++i) sk.subspaces.push_back(gf2::sample_uniform_subspace(lambda, lambda / 2, rng));
  return sk;
}

class AuthToken;
AuthToken auth_token_gen(const AuthSecretKey& sk, TokenRepresentation repr);
Signature auth_sign(const gf2::BitVector& x, AuthToken& token, Rng& rng);

// A one-shot signing capability. Not copyable; consumption is atomic.
class AuthToken {
 public:
  AuthToken(AuthToken&& other) noexcept
      : repr_(other.repr_),
        lambda_(other.lambda_),
        ell_(other.ell_),
        hidden_(std::move(other.hidden_)),
        hidden_dual_(std::move(other.hidden_dual_)),
        states_(std::move(other.states_)),
        consumed_(other.consumed_.load()) {
    other.consumed_.store(true);
  }
  AuthToken(const AuthToken&) = delete;
  AuthToken& operator=(const AuthToken&) = delete;

  TokenRepresentation representation() const { return repr_; }
  std::size_t lambda() const { return lambda_; }
  std::size_t ell() const { return ell_; }
  bool consumed() const { return consumed_.load(); }

  // Deterministic byte form of the token as issued. Statevector tokens dump
  // their exact amplitudes; classical-sim tokens emit a keyed-hash digest so
  // the subspaces never leave the object.
  std::string serialize() const {
    std::ostringstream os;
    os << to_string(repr_) << ' ' << lambda_ << ' ' << ell() << '\n';
    if (repr_ == TokenRepresentation::StateVector) {
      for (const auto& s : states_) os << qsim::dump_state(s);
    } else {
      std::string text;
      for (const auto& a : hidden_) text += a.to_text();
      if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
      unsigned char digest[32];
      crypto_generichash(digest, sizeof digest, reinterpret_cast<const unsigned char*>(text.data()), text.size(),
                         nullptr, 0);
      static constexpr char kHex[] = "0123456789abcdef";
      for (unsigned char c : digest) os << kHex[c >> 4] << kHex[c & 15];
      os << '\n';
    }
    return os.str();
  }

  // Moves the quantum registers out to a coherent holder; consumes the token.
  std::vector<qsim::StateVector> release_states() {
    if (repr_ != TokenRepresentation::StateVector) throw ParameterError("classical-sim tokens hold no quantum state");
    if (consumed_.exchange(true)) throw OneShotViolation("token already consumed");
    return std::move(states_);
  }

 private:
  friend AuthToken auth_token_gen(const AuthSecretKey& sk, TokenRepresentation repr);
  friend Signature auth_sign(const gf2::BitVector& x, AuthToken& token, Rng& rng);

  AuthToken(TokenRepresentation repr, std::size_t lambda, std::size_t ell) : repr_(repr), lambda_(lambda), ell_(ell) {}

  TokenRepresentation repr_;
  std::size_t lambda_;
  std::size_t ell_;
  std::vector<gf2::SubspaceBasis> hidden_;       // classical-sim: A_i
  std::vector<gf2::SubspaceBasis> hidden_dual_;  // classical-sim: A_i^⊥
  std::vector<qsim::StateVector> states_;        // statevector: |A_i>
  std::atomic<bool> consumed_{false};
};

inline AuthToken auth_token_gen(const AuthSecretKey& sk, TokenRepresentation repr) {
  if (sk.ell() == 0 || sk.lambda == 0) throw ParameterError("empty secret key");
  AuthToken tk(repr, sk.lambda, sk.ell());
  if (repr == TokenRepresentation::ClassicalSim) {
    tk.hidden_ = sk.subspaces;
    for (const auto& a : sk.subspaces) tk.hidden_dual_.push_back(gf2::orthogonal_complement(a));
  } else {
    qsim::StateVector::check_capacity(sk.lambda);
    for (const auto& a : sk.subspaces) tk.states_.push_back(qsim::prepare_subspace_state(a));
  }
  return tk;
}

inline Signature auth_sign(const gf2::BitVector& x, AuthToken& token, Rng& rng) {
  if (x.size() != token.ell()) {
    throw DimensionMismatch("message has " + std::to_string(x.size()) + " bits, token signs " +
                            std::to_string(token.ell()));
  }
  if (token.consumed_.exchange(true)) throw OneShotViolation("token already consumed");
  Signature sig{x, {}};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (token.repr_ == TokenRepresentation::ClassicalSim) {
      sig.tags.push_back(gf2::sample_element(x[i] ? token.hidden_dual_[i] : token.hidden_[i], rng));
    } else {
      qsim::StateVector s = std::move(token.states_[i]);
      if (x[i]) s = qsim::apply_hadamard_all(std::move(s));
      sig.tags.push_back(qsim::measure_register(s, qsim::Register{0, token.lambda_}, rng).outcome);
    }
  }
  token.states_.clear();
  return sig;
}

inline Verdict auth_verify(const AuthSecretKey& sk, const Signature& sig) {
  if (sig.message.size() != sk.ell() || sig.tags.size() != sk.ell()) {
    throw DimensionMismatch("signature shape does not match key (ell = " + std::to_string(sk.ell()) + ")");
  }
  for (const auto& t : sig.tags) {
    if (t.size() != sk.lambda) throw DimensionMismatch("tag length does not match lambda");
  }
  for (std::size_t i = 0; i < sk.ell(); ++i) {
    const auto& z = sig.tags[i];
    if (z.is_zero()) return Verdict::Reject;
    const bool ok = sig.message[i] ? gf2::contains(gf2::orthogonal_complement(sk.subspaces[i]), z)
                                   : gf2::contains(sk.subspaces[i], z);
    if (!ok) return Verdict::Reject;
  }
  return Verdict::Accept;
}

}  // namespace otp::auth
