#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "otp/program.hpp"

using namespace otp;
using namespace otp::program;

TEST(Program, ToyProgramsEvaluate) {
  auto c = constant_program(2, 3, 2, 1);
  EXPECT_EQ(c(3, 7), 1u);
  auto r = identity_on_r(1, 4);
  EXPECT_EQ(r(1, 9), 9u);
  auto x = identity_on_x(3, 1);
  EXPECT_EQ(x(5, 0), 5u);
  auto p = prefix_tail_program(3, 6, 2);
  EXPECT_EQ(p(5, 0b111110), 1u | (0b10u << 1));
  EXPECT_THROW(r(2, 0), DomainError);
  EXPECT_THROW(prefix_tail_program(3, 2, 3), ParameterError);
}

TEST(Program, OutputOutsideYIsAnError) {
  ProgramSpec bad{"bad", 1, 1, 1, [](std::uint64_t, std::uint64_t) { return 2; }};
  EXPECT_THROW(bad(0, 0), DomainError);
  ProgramSpec empty{"empty", 1, 1, 1, {}};
  EXPECT_THROW(empty.validate(), ParameterError);
}

TEST(MinEntropy, ToyPrograms) {
  EXPECT_EQ(min_entropy(constant_program(2, 4)).tau, 0.0);
  EXPECT_EQ(min_entropy(identity_on_r(2, 5)).tau, 5.0);
  EXPECT_EQ(min_entropy(identity_on_x(2, 5)).tau, 0.0);
  for (std::size_t k = 0; k <= 4; ++k) EXPECT_DOUBLE_EQ(min_entropy(prefix_tail_program(3, 6, k)).tau, double(k));
  EXPECT_THROW(min_entropy(identity_on_r(1, 21)), CapacityError);
}

TEST(TruthTable, RoundTripAndFormatErrors) {
  auto f = prefix_tail_program(2, 3, 2);
  std::stringstream ss;
  save_truth_table(ss, f);
  auto g = load_truth_table(ss, "copy");
  EXPECT_EQ(truth_table(g), truth_table(f));

  std::istringstream short_table("1 1 1\n0 1 1");
  EXPECT_THROW(load_truth_table(short_table), FormatError);
  std::istringstream wide("1 1 1\n0 1 2 1");
  EXPECT_THROW(load_truth_table(wide), FormatError);
  std::istringstream junk("1 1 1\n0 1 x 1");
  EXPECT_THROW(load_truth_table(junk), FormatError);
  std::istringstream no_header("# nothing");
  EXPECT_THROW(load_truth_table(no_header), FormatError);
  EXPECT_THROW(load_truth_table_file("/nonexistent.tt"), FormatError);
}

TEST(TruthTable, ShippedTablesMatchIndependentRecount) {
  for (const char* name : {"constant", "identity_r", "ai_stub"}) {
    const std::string path = std::string(OTP_DATA_DIR) + "/programs/" + name + ".tt";
    const auto f = load_truth_table_file(path);
    EXPECT_EQ(f.name, name);
    const auto prof = min_entropy(f);
    const auto expect = ref::recount_min_entropy(ref::read_table(path));
    ASSERT_EQ(prof.per_x.size(), expect.size());
    for (std::size_t x = 0; x < expect.size(); ++x) EXPECT_NEAR(prof.per_x[x], expect[x], 1e-12) << name << " x=" << x;
  }
  EXPECT_EQ(min_entropy(load_truth_table_file(std::string(OTP_DATA_DIR) + "/programs/constant.tt")).tau, 0.0);
  EXPECT_EQ(min_entropy(load_truth_table_file(std::string(OTP_DATA_DIR) + "/programs/identity_r.tt")).tau, 4.0);
}
