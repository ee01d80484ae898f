#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "specbound/report.hpp"
#include "support/oracles.hpp"
#include "support/reference_matrices.hpp"

using namespace specbound;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

const Verdict* verdict(const Report& r, const std::string& name) {
  for (const auto& v : *r.verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

}  // namespace

TEST(Judge, SlackAndDirection) {
  OracleValues o;
  o.rho = 2.0;
  BoundResult lower{"x", 2.0 + 1e-9, BoundKind::Lower, BoundTarget::Rho, true, ""};
  EXPECT_TRUE(judge(lower, o)->holds);
  lower.value = 2.0 + 1e-7;
  EXPECT_FALSE(judge(lower, o)->holds);
  EXPECT_NEAR(judge(lower, o)->gap, -1e-7, 1e-15);

  BoundResult upper{"y", 1.5, BoundKind::Upper, BoundTarget::Rho, true, ""};
  EXPECT_FALSE(judge(upper, o)->holds);
  EXPECT_DOUBLE_EQ(judge(upper, o)->gap, -0.5);

  // Nothing to judge without a value or an oracle target.
  EXPECT_FALSE(judge(BoundResult{"z", std::nullopt, BoundKind::Lower, BoundTarget::Rho, false, ""}, o));
  EXPECT_FALSE(judge(BoundResult{"w", 0.0, BoundKind::Lower, BoundTarget::LambdaMin, true, ""}, o));
}

TEST(BuildReport, BoundOnlyHasNoOracleOrVerdicts) {
  const Report r = build_report("a", refmat::nonsym3_a());
  EXPECT_EQ(r.n, 3u);
  EXPECT_FALSE(r.symmetric);
  EXPECT_FALSE(r.oracle);
  EXPECT_FALSE(r.verdicts);
  EXPECT_TRUE(r.all_hold());
}

TEST(BuildReport, VerifyReferenceMatrices) {
  ReportOptions opts;
  opts.verify = true;
  const Report b = build_report("sym5", refmat::sym5(), opts);
  ASSERT_TRUE(b.verdicts);
  EXPECT_TRUE(b.all_hold());
  EXPECT_NEAR(*b.oracle->rho, 11.171, 5e-4);
  const Verdict* tv = verdict(b, "eq2.17");
  ASSERT_NE(tv, nullptr);
  EXPECT_NEAR(tv->gap, 11.171 - 7.3983, 1e-3);

  const Report id = build_report("id", Matrix::identity(3), opts);
  EXPECT_TRUE(id.all_hold());
  int zero_gaps = 0;
  for (const auto& v : *id.verdicts)
    if (std::abs(v.gap) <= 1e-12) ++zero_gaps;
  EXPECT_GE(zero_gaps, 5);

  const Report a = build_report("a", refmat::nonsym3_a(), opts);
  EXPECT_TRUE(a.all_hold());
  EXPECT_FALSE(a.oracle->lambda_min);
  for (const auto& v : *a.verdicts) {
    const auto it = std::find_if(a.bounds.begin(), a.bounds.end(), [&](const auto& bd) { return bd.name == v.name; });
    ASSERT_NE(it, a.bounds.end());
    EXPECT_EQ(it->target, BoundTarget::Rho);
  }
}

TEST(BuildReport, SuiteHasNoViolations) {
  ReportOptions opts;
  opts.verify = true;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Report r = build_report("suite", oracle::suite_matrix(s), opts);
    EXPECT_TRUE(r.all_hold()) << s;
  }
}

TEST(Json, SchemaKeys) {
  ReportOptions opts;
  opts.verify = true;
  const auto j = to_json(build_report("sym4", refmat::sym4(), opts));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"matrix_id", "n", "symmetric", "oracle", "bounds", "verdicts"}));
  std::vector<std::string> bkeys;
  for (const auto& [k, v] : j["bounds"][0].items()) bkeys.push_back(k);
  EXPECT_EQ(bkeys, (std::vector<std::string>{"name", "value", "kind", "target", "prerequisites_met", "detail"}));
  EXPECT_TRUE(to_json(build_report("a", refmat::nonsym3_a()))["verdicts"].is_null());
  EXPECT_TRUE(to_json(build_report("a", refmat::nonsym3_a()))["oracle"].is_null());
}

TEST(Json, RoundTripIsBitExact) {
  ReportOptions opts;
  opts.verify = true;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Report r = build_report("suite/" + std::to_string(s), oracle::suite_matrix(s), opts);
    const Report back = report_from_json(nlohmann::ordered_json::parse(to_json(r).dump()));
    ASSERT_EQ(back.bounds.size(), r.bounds.size());
    for (std::size_t i = 0; i < r.bounds.size(); ++i) {
      ASSERT_EQ(back.bounds[i].value.has_value(), r.bounds[i].value.has_value());
      if (r.bounds[i].value) {
        EXPECT_TRUE(bit_equal(*back.bounds[i].value, *r.bounds[i].value));
      }
    }
    EXPECT_EQ(back, r);
  }
}

TEST(Table, MentionsEveryBound) {
  ReportOptions opts;
  opts.verify = true;
  const Report r = build_report("sym4", refmat::sym4(), opts);
  const std::string t = render_table(r);
  for (const auto& b : r.bounds) EXPECT_NE(t.find(b.name), std::string::npos) << b.name;
  EXPECT_NE(t.find("holds"), std::string::npos);
}
