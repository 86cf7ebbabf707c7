#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "oracles.hpp"
#include "otp/auth.hpp"
#include "otp/stats.hpp"

using namespace otp;
using namespace otp::auth;

TEST(AuthKeygen, ShapeAndParameterChecks) {
  Rng rng(1);
  auto sk = auth_keygen(6, 3, rng);
  EXPECT_EQ(sk.ell(), 3u);
  EXPECT_EQ(sk.tag_bits(), 18u);
  for (const auto& a : sk.subspaces) {
    EXPECT_EQ(a.ambient(), 6u);
    EXPECT_EQ(a.dim(), 3u);
  }
  EXPECT_THROW(auth_keygen(5, 1, rng), ParameterError);
  EXPECT_THROW(auth_keygen(0, 1, rng), ParameterError);
  EXPECT_THROW(auth_keygen(4, 0, rng), ParameterError);
}

TEST(AuthSign, HonestSignaturesVerifyUnlessATagIsZero) {
  for (auto repr : {TokenRepresentation::ClassicalSim, TokenRepresentation::StateVector}) {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
      auto sk = auth_keygen(4, 3, rng);
      auto tk = auth_token_gen(sk, repr);
      const auto x = gf2::BitVector::from_uint(i % 8, 3);
      auto sig = auth_sign(x, tk, rng);
      bool any_zero = false;
      for (std::size_t b = 0; b < 3; ++b) {
        const auto& space = x[b] ? gf2::orthogonal_complement(sk.subspaces[b]) : sk.subspaces[b];
        EXPECT_TRUE(gf2::contains(space, sig.tags[b]));
        any_zero |= sig.tags[b].is_zero();
      }
      EXPECT_EQ(auth_verify(sk, sig) == Verdict::Accept, !any_zero);
    }
  }
}

TEST(AuthSign, TagsAreUniformOverTheSubspace) {
  for (auto repr : {TokenRepresentation::ClassicalSim, TokenRepresentation::StateVector}) {
    Rng rng(3);
    auto sk = auth_keygen(4, 1, rng);
    const auto perp = gf2::orthogonal_complement(sk.subspaces[0]);
    std::map<std::uint64_t, std::uint64_t> c;
    for (int i = 0; i < 4000; ++i) {
      auto tk = auth_token_gen(sk, repr);
      auto sig = auth_sign(gf2::BitVector::from_uint(1, 1), tk, rng);
      ASSERT_TRUE(gf2::contains(perp, sig.tags[0]));
      c[sig.tags[0].to_uint()]++;
    }
    ASSERT_EQ(c.size(), 4u);
    std::vector<std::uint64_t> counts;
    for (auto& [k, v] : c) counts.push_back(v);
    EXPECT_GT(stats::chi_square_uniform_p_value(counts), 1e-4);
  }
}

TEST(AuthSign, TokenIsOneShot) {
  Rng rng(2);
  auto sk = auth_keygen(4, 2, rng);
  for (auto repr : {TokenRepresentation::ClassicalSim, TokenRepresentation::StateVector}) {
    auto tk = auth_token_gen(sk, repr);
    EXPECT_THROW(auth_sign(gf2::BitVector(3), tk, rng), DimensionMismatch);
    EXPECT_FALSE(tk.consumed());
    auth_sign(gf2::BitVector(2), tk, rng);
    EXPECT_TRUE(tk.consumed());
    EXPECT_THROW(auth_sign(gf2::BitVector(2), tk, rng), OneShotViolation);
  }
  auto tk = auth_token_gen(sk, TokenRepresentation::ClassicalSim);
  EXPECT_THROW(tk.release_states(), ParameterError);
  auto moved = std::move(tk);
  EXPECT_TRUE(tk.consumed());
  EXPECT_FALSE(moved.consumed());
}

TEST(AuthVerify, AcceptSetMatchesExhaustiveMembership) {
  Rng rng(4);
  for (std::size_t lambda : {2u, 4u, 6u}) {
    auto sk = auth_keygen(lambda, 1, rng);
    std::vector<ref::Vec> gens;
    for (const auto& r : sk.subspaces[0].rows()) gens.push_back(r.to_uint());
    const auto a = ref::span(gens);
    const auto perp = ref::orthogonal(a, lambda);
    for (int bit = 0; bit < 2; ++bit) {
      for (ref::Vec z = 0; z < (ref::Vec{1} << lambda); ++z) {
        Signature s{gf2::BitVector::from_uint(bit, 1), {gf2::BitVector::from_uint(z, lambda)}};
        const bool expect = z != 0 && (bit ? perp.count(z) : a.count(z));
        EXPECT_EQ(auth_verify(sk, s) == Verdict::Accept, expect);
      }
    }
  }
}

TEST(AuthVerify, ShapeErrors) {
  Rng rng(4);
  auto sk = auth_keygen(4, 2, rng);
  EXPECT_THROW(auth_verify(sk, Signature{gf2::BitVector(1), {gf2::BitVector(4)}}), DimensionMismatch);
  EXPECT_THROW(auth_verify(sk, Signature{gf2::BitVector(2), {gf2::BitVector(4), gf2::BitVector(5)}}),
               DimensionMismatch);
}

TEST(AuthVerify, HonestAcceptRateIncludesZeroTagDeficit) {
  Rng rng(10);
  const int n = 20000;
  int ok = 0;
  for (int i = 0; i < n; ++i) {
    auto sk = auth_keygen(4, 2, rng);
    auto tk = auth_token_gen(sk, TokenRepresentation::ClassicalSim);
    ok += auth_verify(sk, auth_sign(gf2::BitVector::from_uint(i % 4, 2), tk, rng)) == Verdict::Accept;
  }
  const double p = std::pow(1.0 - 0.25, 2);
  EXPECT_NEAR(ok / double(n), p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(Signature, ConcatenationAndTextRoundTrip) {
  Signature s{gf2::BitVector::from_string("10"), {gf2::BitVector::from_string("1100"), gf2::BitVector::from_string("0011")}};
  EXPECT_EQ(s.concatenated_tags().to_string(), "11000011");
  EXPECT_EQ(Signature::from_concatenated(s.message, s.concatenated_tags(), 4), s);
  EXPECT_THROW(Signature::from_concatenated(s.message, gf2::BitVector(7), 4), DimensionMismatch);
  std::istringstream in(s.to_text());
  EXPECT_EQ(Signature::from_text(in), s);
}

TEST(Token, SerializationDependsOnlyOnKey) {
  Rng a(5), b(5);
  auto ska = auth_keygen(4, 2, a);
  auto skb = auth_keygen(4, 2, b);
  for (auto repr : {TokenRepresentation::ClassicalSim, TokenRepresentation::StateVector}) {
    EXPECT_EQ(auth_token_gen(ska, repr).serialize(), auth_token_gen(skb, repr).serialize());
  }
  Rng c(6);
  auto skc = auth_keygen(4, 2, c);
  EXPECT_NE(auth_token_gen(ska, TokenRepresentation::StateVector).serialize(),
            auth_token_gen(skc, TokenRepresentation::StateVector).serialize());
}
