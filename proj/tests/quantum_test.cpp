#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "otp/gf2.hpp"
#include "otp/quantum.hpp"

using namespace otp;
using namespace otp::qsim;

TEST(StateVector, StartsInZeroAndChecksCapacity) {
  StateVector s(3);
  EXPECT_EQ(s.dimension(), 8u);
  EXPECT_EQ(s.amplitude(0), Amplitude(1.0));
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);
  EXPECT_THROW(StateVector(21), CapacityError);
  EXPECT_THROW(StateVector::from_amplitudes({1.0, 1.0}), ParameterError);
  EXPECT_THROW(StateVector::from_amplitudes({1.0, 0.0, 0.0}), DimensionMismatch);
}

TEST(StateVector, TensorPutsSecondFactorOnHighQubits) {
  auto lo = StateVector::basis(2, 1);
  auto hi = StateVector::basis(1, 1);
  auto s = lo.tensor(hi);
  EXPECT_EQ(s.num_qubits(), 3u);
  EXPECT_EQ(s.amplitude(0b101), Amplitude(1.0));
}

TEST(Subspace, HadamardMapsSubspaceStateToComplement) {
  Rng rng(17);
  for (std::size_t n : {2u, 4u, 6u, 8u}) {
    for (int i = 0; i < 20; ++i) {
      auto a = gf2::sample_uniform_subspace(n, n / 2, rng);
      auto lhs = apply_hadamard_all(prepare_subspace_state(a));
      EXPECT_TRUE(lhs.approx_equal(prepare_subspace_state(gf2::orthogonal_complement(a))));
    }
  }
}

TEST(Subspace, StateHasUniformSupportOnA) {
  Rng rng(3);
  auto a = gf2::sample_uniform_subspace(6, 2, rng);
  auto s = prepare_subspace_state(a);
  const auto p = register_distribution(s, Register{0, 6});
  for (std::uint64_t v = 0; v < 64; ++v) {
    EXPECT_NEAR(p[v], gf2::contains(a, gf2::BitVector::from_uint(v, 6)) ? 0.25 : 0.0, 1e-12);
  }
}

TEST(Gates, HadamardIsInvolution) {
  Rng rng(1);
  std::vector<Amplitude> amps(16);
  for (auto& a : amps) a = Amplitude(std::uniform_real_distribution<>(-1, 1)(rng), std::uniform_real_distribution<>(-1, 1)(rng));
  double n = 0;
  for (auto& a : amps) n += std::norm(a);
  for (auto& a : amps) a /= std::sqrt(n);
  auto s = StateVector::from_amplitudes(amps);
  auto t = apply_hadamard(apply_hadamard(s, Register{1, 2}), Register{1, 2});
  EXPECT_TRUE(s.approx_equal(t));
}

TEST(Gates, ControlledHadamardOnlyActsWhenControlSet) {
  auto s = apply_hadamard(StateVector(2), Register{0, 1}, 1);
  EXPECT_TRUE(s.approx_equal(StateVector(2)));
  auto t = apply_hadamard(StateVector::basis(2, 2), Register{0, 1}, 1);
  EXPECT_NEAR(std::abs(t.amplitude(2)), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::abs(t.amplitude(3)), 1 / std::sqrt(2.0), 1e-12);
  EXPECT_THROW(apply_hadamard(StateVector(2), Register{0, 2}, 1), LayoutError);
}

TEST(Gates, FunctionOracleXorsIntoOutput) {
  auto s = apply_hadamard(StateVector(4), Register{0, 2});
  s = apply_function_oracle(s, Register{0, 2}, Register{2, 2}, [](std::uint64_t a) { return 3 - a; });
  for (std::uint64_t a = 0; a < 4; ++a) EXPECT_NEAR(std::norm(s.amplitude(a | ((3 - a) << 2))), 0.25, 1e-12);
  s = apply_function_oracle(s, Register{0, 2}, Register{2, 2}, [](std::uint64_t a) { return 3 - a; });
  EXPECT_TRUE(s.approx_equal(apply_hadamard(StateVector(4), Register{0, 2})));
  EXPECT_THROW(apply_function_oracle(s, Register{0, 2}, Register{1, 2}, [](std::uint64_t) { return 0; }), LayoutError);
  EXPECT_THROW(apply_function_oracle(s, Register{0, 2}, Register{2, 2}, [](std::uint64_t) { return 4; }), DomainError);
}

TEST(Layout, AllocatesBottomUpAndJoins) {
  RegisterLayout l;
  auto x = l.add("x", 2);
  auto z = l.add("z", 3);
  EXPECT_EQ(x.offset, 0u);
  EXPECT_EQ(z.offset, 2u);
  EXPECT_EQ(l.join("x", "z"), (Register{0, 5}));
  EXPECT_THROW(l.join("z", "x"), LayoutError);
  EXPECT_THROW(l.add("x", 1), LayoutError);
  EXPECT_THROW(l.at("nope"), LayoutError);
  EXPECT_THROW(l.add("big", 16), CapacityError);
}

TEST(Measurement, BornRuleFrequencies) {
  // amplitudes sqrt(0.1), sqrt(0.2), sqrt(0.3), sqrt(0.4)
  auto s = StateVector::from_amplitudes({std::sqrt(0.1), std::sqrt(0.2), std::sqrt(0.3), std::sqrt(0.4)});
  Rng rng(12);
  std::vector<int> c(4);
  for (int i = 0; i < 40000; ++i) c[measure_register(s, Register{0, 2}, rng).outcome.to_uint()]++;
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(c[k] / 40000.0, 0.1 * (k + 1), 0.01);
}

TEST(Measurement, PostStateIsCollapsedAndNormalized) {
  Rng rng(5);
  auto s = apply_hadamard(StateVector(3), Register{0, 3});
  auto m = measure_register(s, Register{0, 1}, rng);
  EXPECT_NEAR(m.post_state.norm_squared(), 1.0, 1e-12);
  const auto p = register_distribution(m.post_state, Register{0, 1});
  EXPECT_NEAR(p[m.outcome.to_uint()], 1.0, 1e-12);
  auto proj = project_register(StateVector(2), Register{0, 1}, 1);
  EXPECT_EQ(proj.probability, 0.0);
  EXPECT_FALSE(proj.post_state.has_value());
}

TEST(Circuit, UncomputeRestoresState) {
  RegisterLayout l;
  auto a = l.add("a", 3);
  auto b = l.add("b", 3);
  Circuit c;
  c.emplace_back(PauliX{a, 5});
  c.emplace_back(HadamardLayer{a, std::nullopt});
  c.emplace_back(XorOracle{a, b, [](std::uint64_t v) { return v ^ 2; }});
  c.emplace_back(HadamardLayer{b, 0});
  StateVector s(6);
  auto t = uncompute(run_circuit(s, c), c);
  EXPECT_TRUE(s.approx_equal(t));
  EXPECT_THROW(qsim::apply(s, Op{}), ParameterError);
}

TEST(Density, TraceDistanceKnownValues) {
  auto plus = apply_hadamard_all(StateVector(1));
  auto rho = DensityMatrix::pure(plus);
  EXPECT_NEAR(trace_distance(rho, rho), 0.0, 1e-12);
  EXPECT_NEAR(trace_distance(rho, rho.dephased()), 0.5, 1e-12);
  EXPECT_NEAR(trace_distance(DensityMatrix::pure(StateVector(1)), DensityMatrix::pure(StateVector::basis(1, 1))), 1.0,
              1e-12);
  // uniform superposition on n states vs I/n
  auto u = apply_hadamard_all(StateVector(3));
  auto r = DensityMatrix::pure(u);
  EXPECT_NEAR(trace_distance(r, r.dephased()), 1.0 - 1.0 / 8.0, 1e-12);
}

TEST(Density, ValidatesInput) {
  DensityMatrix::Matrix m = DensityMatrix::Matrix::Zero(2, 2);
  m(0, 0) = 2.0;
  m(1, 1) = -1.0;
  EXPECT_THROW(DensityMatrix{m}, ParameterError);
  m(0, 0) = 0.5;
  m(1, 1) = 0.5;
  m(0, 1) = 1.0;
  EXPECT_THROW(DensityMatrix{m}, ParameterError);
}

TEST(Density, PartialTraceOfProductAndBell) {
  auto prod = apply_hadamard(StateVector(2), Register{0, 1});
  auto rho = partial_trace(prod, Register{0, 1});
  EXPECT_NEAR(trace_distance(rho, DensityMatrix::pure(apply_hadamard_all(StateVector(1)))), 0.0, 1e-12);
  auto bell = apply_function_oracle(prod, Register{0, 1}, Register{1, 1}, [](std::uint64_t v) { return v; });
  auto half = partial_trace(bell, Register{0, 1});
  EXPECT_NEAR(half(0, 0).real(), 0.5, 1e-12);
  EXPECT_NEAR(std::abs(half(0, 1)), 0.0, 1e-12);
}

TEST(Density, EnsembleMustSumToOne) {
  std::vector<std::pair<double, StateVector>> e{{0.5, StateVector(1)}};
  EXPECT_THROW(density_from_ensemble(e), ParameterError);
  e.emplace_back(0.5, StateVector::basis(1, 1));
  auto rho = density_from_ensemble(e);
  EXPECT_NEAR(rho(0, 0).real(), 0.5, 1e-12);
}

TEST(Dump, ListsNonzeroAmplitudes) {
  EXPECT_EQ(dump_state(StateVector::basis(2, 3)), "qubits 2\n3 1 0\n");
}
