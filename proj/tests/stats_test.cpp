#include <gtest/gtest.h>

#include <vector>

#include "otp/stats.hpp"

using namespace otp;
using namespace otp::stats;

TEST(Wilson, KnownValuesAndEdges) {
  auto i = wilson_interval(50, 100);
  EXPECT_NEAR(i.lo, 0.4038, 1e-4);
  EXPECT_NEAR(i.hi, 0.5962, 1e-4);
  auto zero = wilson_interval(0, 100);
  EXPECT_EQ(zero.lo, 0.0);
  EXPECT_GT(zero.hi, 0.0);
  auto all = wilson_interval(100, 100);
  EXPECT_EQ(all.hi, 1.0);
  EXPECT_TRUE(all.contains(1.0));
  EXPECT_THROW(wilson_interval(0, 0), ParameterError);
}

TEST(Wilson, ContainsPointEstimate) {
  for (std::uint64_t k = 0; k <= 37; ++k) {
    auto i = wilson_interval(k, 37);
    EXPECT_TRUE(i.contains(k / 37.0));
  }
}

TEST(ChiSquare, PerfectFitAndGrossMisfit) {
  std::vector<std::uint64_t> even{100, 100, 100, 100};
  EXPECT_NEAR(chi_square_uniform_p_value(even), 1.0, 1e-12);
  std::vector<std::uint64_t> skew{400, 0, 0, 0};
  EXPECT_LT(chi_square_uniform_p_value(skew), 1e-10);
  std::vector<double> probs{0.5, 0.5, 0.0};
  std::vector<std::uint64_t> with_zero{50, 50, 1};
  EXPECT_EQ(chi_square_p_value(with_zero, probs), 0.0);
}

TEST(ChiSquare, TwoSample) {
  std::vector<std::uint64_t> a{30, 40, 30}, b{300, 400, 300}, c{80, 10, 10};
  EXPECT_GT(chi_square_two_sample_p_value(a, b), 0.99);
  EXPECT_LT(chi_square_two_sample_p_value(a, c), 1e-6);
}

TEST(Mean, IntervalAroundMean) {
  std::vector<double> xs{0.2, 0.4, 0.6};
  auto m = mean_estimate(xs);
  EXPECT_NEAR(m.mean, 0.4, 1e-12);
  EXPECT_NEAR(m.std_error, 0.2 / std::sqrt(3.0), 1e-12);
  EXPECT_TRUE(m.ci.contains(0.4));
  EXPECT_THROW(mean_estimate(std::vector<double>{}), ParameterError);
}
