#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "oracles.hpp"
#include "otp/scheme.hpp"

using namespace otp;
using namespace otp::scheme;

TEST(Codeword, EncodeDecode) {
  auto f = program::identity_on_r(1, 3);
  EXPECT_EQ(codeword_width(f), 4u);
  EXPECT_EQ(encode(kReject, f), 8u);
  EXPECT_EQ(decode(8, f), kReject);
  EXPECT_EQ(decode(5, f), Output(5));
  EXPECT_THROW(decode(9, f), DomainError);
  EXPECT_EQ(to_string(kReject), "⊥");
}

TEST(GuardedEval, AcceptSetEqualsExhaustiveVerify) {
  for (std::size_t lambda : {2u, 4u}) {
    for (std::size_t ell : {1u, 2u}) {
      Rng rng(lambda * 10 + ell);
      auto f = program::identity_on_r(ell, 3);
      auto kp = otp_keygen(lambda, f, rng);
      const std::size_t m = lambda * ell;
      for (std::uint64_t x = 0; x < f.x_count(); ++x) {
        for (std::uint64_t z = 0; z < (std::uint64_t{1} << m); ++z) {
          const auto zz = gf2::BitVector::from_uint(z, m);
          const auto sig = auth::Signature::from_concatenated(gf2::BitVector::from_uint(x, ell), zz, lambda);
          bool accept = true;
          for (std::size_t i = 0; i < ell; ++i) {
            std::vector<ref::Vec> gens;
            for (const auto& r : kp.sk.subspaces[i].rows()) gens.push_back(r.to_uint());
            auto space = ref::span(gens);
            if ((x >> i) & 1u) space = ref::orthogonal(space, lambda);
            const auto t = sig.tags[i].to_uint();
            accept = accept && t != 0 && space.count(t);
          }
          const auto y = guarded_eval(kp.handle, x, zz);
          EXPECT_EQ(y.has_value(), accept);
          if (y) {
            EXPECT_EQ(y, guarded_eval(kp.handle, x, zz));
          }
        }
      }
    }
  }
}

TEST(GuardedEval, DomainErrors) {
  Rng rng(1);
  auto kp = otp_keygen(4, program::identity_on_x(2, 1), rng);
  EXPECT_THROW(kp.handle.evaluate(4, gf2::BitVector(8)), DomainError);
  EXPECT_THROW(kp.handle.evaluate(0, gf2::BitVector(7)), DomainError);
  EXPECT_THROW(otp_keygen(5, program::identity_on_x(2, 1), rng), ParameterError);
}

TEST(TokenEval, HonestEvaluationIsCorrectOrRejectsOnZeroTag) {
  for (auto repr : {auth::TokenRepresentation::ClassicalSim, auth::TokenRepresentation::StateVector}) {
    Rng rng(3);
    auto f = program::identity_on_x(2, 1);
    for (int i = 0; i < 200; ++i) {
      auto kp = otp_keygen(4, f, rng);
      auto tk = otp_token_gen(kp.sk, repr);
      const std::uint64_t x = i % 4;
      auto ev = otp_token_eval_traced(x, tk, kp.handle, rng);
      bool zero = false;
      for (const auto& t : ev.signature.tags) zero |= t.is_zero();
      if (zero) {
        EXPECT_EQ(ev.y, kReject);
      } else {
        EXPECT_EQ(ev.y, Output(x));
      }
      EXPECT_THROW(otp_token_eval(x, tk, kp.handle, rng), OneShotViolation);
      EXPECT_EQ(kp.handle.query_count(), 1u);
    }
  }
}

TEST(TokenEval, TokenDoesNotDependOnProgram) {
  for (auto repr : {auth::TokenRepresentation::ClassicalSim, auth::TokenRepresentation::StateVector}) {
    Rng a(77), b(77);
    auto ka = otp_keygen(4, program::identity_on_x(2, 1), a);
    auto kb = otp_keygen(4, program::identity_on_r(2, 4), b);
    EXPECT_EQ(otp_token_gen(ka.sk, repr).serialize(), otp_token_gen(kb.sk, repr).serialize());
  }
}

TEST(Handle, CoherentQueryMatchesClassicalOnBasisStates) {
  Rng rng(5);
  auto f = program::identity_on_r(1, 3);
  auto kp = otp_keygen(2, f, rng);
  qsim::RegisterLayout l;
  auto x = l.add("x", 1);
  auto z = l.add("z", 2);
  auto out = l.add("out", 4);
  for (std::uint64_t v = 0; v < 8; ++v) {
    auto s = kp.handle.apply_coherent(qsim::StateVector::basis(7, v), x, z, out);
    const auto expect = encode(kp.handle.evaluate(v & 1, gf2::BitVector::from_uint(v >> 1, 2)), f);
    EXPECT_NEAR(std::norm(s.amplitude(v | (expect << 3))), 1.0, 1e-12);
  }
  EXPECT_EQ(kp.handle.query_count(), 16u);
  EXPECT_THROW(kp.handle.apply_coherent(qsim::StateVector(7), x, z, qsim::Register{3, 3}), LayoutError);
  EXPECT_THROW(kp.handle.apply_coherent(qsim::StateVector(8), x, qsim::Register{2, 2}, qsim::Register{4, 4}),
               LayoutError);
}

TEST(Handle, ConcurrentEvaluationCountsEveryQuery) {
  Rng rng(6);
  auto kp = otp_keygen(4, program::identity_on_r(1, 8), rng);
  std::vector<std::thread> ts;
  for (int t = 0; t < 4; ++t) {
    ts.emplace_back([&] {
      for (std::uint64_t z = 0; z < 16; ++z) kp.handle.evaluate(0, gf2::BitVector::from_uint(z, 4));
    });
  }
  for (auto& t : ts) t.join();
  EXPECT_EQ(kp.handle.query_count(), 64u);
}

TEST(Scheme, KeyedOracleModeWorks) {
  Rng rng(8);
  auto f = program::identity_on_r(1, 16);
  auto kp = otp_keygen(4, f, rng, oracle::OracleMode::KeyedDeterministic);
  auto tk = otp_token_gen(kp.sk, auth::TokenRepresentation::ClassicalSim);
  auto ev = otp_token_eval_traced(1, tk, kp.handle, rng);
  if (ev.y) {
    EXPECT_EQ(kp.handle.evaluate(1, ev.signature.concatenated_tags()), ev.y);
  }
}
