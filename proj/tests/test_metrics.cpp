#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "sbmlab/metrics.hpp"
#include "sbmlab/rng.hpp"

using namespace sbmlab;

namespace {

Labeling L(std::vector<Community> v, std::uint32_t k = 2) { return Labeling(std::move(v), k); }

Partition P(std::vector<std::uint8_t> s) {
  Partition p;
  p.side = std::move(s);
  return p;
}

Labeling random_labels(CounterRng& r, std::size_t n, std::uint32_t k) {
  std::vector<Community> v(n);
  for (auto& c : v) c = static_cast<Community>(r.below(k));
  return L(std::move(v), k);
}

Labeling permute(const Labeling& x, const std::vector<Community>& pi) {
  std::vector<Community> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = pi[x[i]];
  return L(std::move(v), x.k);
}

}  // namespace

TEST(DetectionMargin, Examples) {
  EXPECT_DOUBLE_EQ(detection_margin(L({0, 0, 1, 1}), P({1, 1, 0, 0})), 1.0);
  EXPECT_DOUBLE_EQ(detection_margin(L({0, 0, 1, 1}), P({1, 1, 1, 1})), 0.0);
  EXPECT_DOUBLE_EQ(detection_margin(L({0, 0, 1, 1}), P({1, 0, 1, 1})), 0.5);
}

TEST(DetectionMargin, EmptyCommunityThrows) {
  try {
    detection_margin(L({0, 0, 0}, 2), P({1, 0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_community);
  }
}

TEST(DetectionMargin, RangeAndConstantSide) {
  CounterRng r(1);
  for (int i = 0; i < 50; ++i) {
    auto x = random_labels(r, 40, 3);
    Partition p;
    p.side.resize(40);
    for (auto& s : p.side) s = static_cast<std::uint8_t>(r.below(2));
    bool all_present = true;
    for (auto c : x.community_sizes()) all_present &= c > 0;
    if (!all_present) continue;
    const double m = detection_margin(x, p);
    EXPECT_GE(m, 0.0);
    EXPECT_LE(m, 1.0);
    Partition c;
    c.side.assign(40, 1);
    EXPECT_EQ(detection_margin(x, c), 0.0);
  }
}

TEST(Agreement, Examples) {
  EXPECT_DOUBLE_EQ(agreement(L({0, 1, 1, 0}), L({0, 1, 1, 0})), 1.0);
  EXPECT_DOUBLE_EQ(agreement(L({0, 1, 1, 0}), L({1, 0, 0, 1})), 1.0);
  EXPECT_DOUBLE_EQ(agreement(L({0, 0, 1, 1}), L({0, 1, 0, 1})), 0.5);
  EXPECT_THROW(agreement(L({0, 1}), L({0, 1, 0})), Error);
}

TEST(Agreement, SymmetricAndPermutationInvariant) {
  CounterRng r(2);
  for (int i = 0; i < 30; ++i) {
    const auto k = static_cast<std::uint32_t>(2 + r.below(4));
    auto x = random_labels(r, 60, k), y = random_labels(r, 60, k);
    std::vector<Community> pi(k);
    std::iota(pi.begin(), pi.end(), 0);
    std::shuffle(pi.begin(), pi.end(), r);
    const double a = agreement(x, y);
    EXPECT_DOUBLE_EQ(a, agreement(y, x));
    EXPECT_DOUBLE_EQ(a, agreement(permute(x, pi), y));
    EXPECT_DOUBLE_EQ(a, agreement(x, permute(y, pi)));
  }
}

TEST(Agreement, ExhaustiveMatchesAssignment) {
  CounterRng r(3);
  for (int i = 0; i < 50; ++i) {
    const auto k = static_cast<std::uint32_t>(2 + r.below(5));
    auto x = random_labels(r, 80, k), y = random_labels(r, 80, k);
    EXPECT_DOUBLE_EQ(agreement(x, y), agreement_by_assignment(x, y));
  }
}

TEST(Agreement, LargeKUsesAssignment) {
  CounterRng r(4);
  auto x = random_labels(r, 300, 12);
  auto res = agreement_detailed(x, x);
  EXPECT_EQ(res.method, AgreementMethod::assignment);
  EXPECT_DOUBLE_EQ(res.value, 1.0);
}

TEST(BadSet, Examples) {
  EXPECT_FALSE(bad_set_membership(L({0, 0, 1, 1}), L({0, 0, 1, 1}), 0.1));
  EXPECT_FALSE(bad_set_membership(L({0, 0, 1, 1}), L({1, 1, 0, 0}), 0.1));
  EXPECT_TRUE(bad_set_membership(L({0, 0, 1, 1}), L({0, 1, 0, 1}), 0.1));
}

TEST(BadSet, PermutedSelfIsNeverBad) {
  CounterRng r(5);
  for (int i = 0; i < 20; ++i) {
    const auto k = static_cast<std::uint32_t>(2 + r.below(4));
    auto x = random_labels(r, 30, k);
    std::vector<Community> pi(k);
    std::iota(pi.begin(), pi.end(), 0);
    std::shuffle(pi.begin(), pi.end(), r);
    EXPECT_FALSE(bad_set_membership(x, permute(x, pi), 1e-6));
  }
}
