#include <cmath>

#include <gtest/gtest.h>

#include "geoscan/baselines.hpp"
#include "support.hpp"

using namespace geoscan;

TEST(Baselines, KolmogorovQ) {
  // Reference points of the limiting distribution.
  EXPECT_NEAR(kolmogorov_q(1.36), 0.0494, 2e-4);
  EXPECT_NEAR(kolmogorov_q(1.63), 0.0098, 2e-4);
  EXPECT_NEAR(kolmogorov_q(0.5), 0.9639, 2e-4);
  EXPECT_EQ(kolmogorov_q(0.0), 1.0);
  // The two series agree where they switch.
  EXPECT_NEAR(kolmogorov_q(1.18 - 1e-12), kolmogorov_q(1.18 + 1e-12), 1e-9);
}

TEST(Baselines, WelchMatchesHandComputation) {
  const auto w = welch_t(1.0, 2.0, 10, 0.0, 3.0, 15);
  const double se = std::sqrt(0.2 + 0.2);
  EXPECT_NEAR(w.t, 1.0 / se, 1e-12);
  EXPECT_NEAR(w.df, 0.16 / (0.04 / 9 + 0.04 / 14), 1e-9);
}

TEST(Baselines, IdenticalValuesGiveH0) {
  const SampleField field{std::vector<double>(50, 2.0)};
  const Geometry g = Geometry::line(50);
  EXPECT_EQ(ttest_scan(field, g, {5, 25}, 0.05).decision, Decision::H0);
  EXPECT_EQ(smirnov_scan(field, g, {5, 25}, 0.05).decision, Decision::H0);
}

TEST(Baselines, DetectMeanShift) {
  auto v = support::normal_values(100, 6);
  for (std::size_t i = 30; i < 60; ++i) v[i] += 3.0;
  const SampleField field{v};
  EXPECT_EQ(ttest_scan(field, Geometry::line(100), {20, 40}, 0.05).decision, Decision::H1);
  EXPECT_EQ(smirnov_scan(field, Geometry::line(100), {20, 40}, 0.05).decision, Decision::H1);
}

TEST(Baselines, SmirnovSeesVarianceChangeTTestDoesNot) {
  auto v = support::normal_values(200, 8);
  for (std::size_t i = 50; i < 150; ++i) v[i] *= 6.0;
  const SampleField field{v};
  const auto ks = smirnov_scan(field, Geometry::line(200), {90, 110}, 0.05);
  EXPECT_EQ(ks.decision, Decision::H1);
}

TEST(Baselines, StatisticsMatchDirectComputation) {
  const auto v = support::normal_values(30, 10);
  const SampleField field{v};
  const CandidateSet set(Geometry::line(30), std::vector<Candidate>{{LineInterval{4, 9}, 9}});
  const auto [x, y] = support::split(v, {4, 5, 6, 7, 8, 9, 10, 11, 12});
  auto mean = [](const std::vector<double>& a) {
    double s = 0;
    for (double e : a) s += e;
    return s / a.size();
  };
  auto var = [&](const std::vector<double>& a) {
    const double m = mean(a);
    double s = 0;
    for (double e : a) s += (e - m) * (e - m);
    return s / (a.size() - 1);
  };
  const auto w = welch_t(mean(x), var(x), x.size(), mean(y), var(y), y.size());
  EXPECT_NEAR(ttest_scan(field, set, 0.05).max_statistic, std::fabs(w.t), 1e-10);

  double d = 0;
  for (double cut : v) {
    double fx = 0, fy = 0;
    for (double e : x) fx += e <= cut;
    for (double e : y) fy += e <= cut;
    d = std::max(d, std::fabs(fx / x.size() - fy / y.size()));
  }
  EXPECT_NEAR(smirnov_scan(field, set, 0.05).max_statistic, d, 1e-12);
}

TEST(Baselines, RejectsBadLevel) {
  const SampleField field{support::normal_values(20, 1)};
  EXPECT_THROW(ttest_scan(field, Geometry::line(20), {3, 5}, 0.0), ConfigError);
  EXPECT_THROW(smirnov_scan(field, Geometry::line(20), {3, 5}, 1.0), ConfigError);
}
