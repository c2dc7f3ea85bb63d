#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "geoscan/theory.hpp"

using namespace geoscan;
using namespace geoscan::theory;

namespace {

// Plain summation, no log-domain tricks.
double direct_line(double n, double t, double K, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double di = static_cast<double>(i);
    s += (n - di + 1.0) * std::exp(-t * t * di * (n - di) / (8.0 * K * K * n));
  }
  return s;
}

double direct_union(double count, double N, double t, double K, double lo, double hi) {
  const double worst = std::min(lo * (N - lo), hi * (N - hi));
  return count * std::exp(-2.0 * t * t * worst / (16.0 * N * K * K));
}

// Counts of ordered interval pairs by overlap size.
std::vector<long long> overlap_counts(std::size_t n, std::size_t k, bool ring) {
  std::vector<long long> c(k + 1, 0);
  const std::size_t starts = ring ? n : n - k + 1;
  std::vector<char> a(n), b(n);
  for (std::size_t s1 = 0; s1 < starts; ++s1) {
    std::fill(a.begin(), a.end(), 0);
    for (std::size_t i = 0; i < k; ++i) a[(s1 + i) % n] = 1;
    for (std::size_t s2 = 0; s2 < starts; ++s2) {
      std::size_t z = 0;
      for (std::size_t i = 0; i < k; ++i) z += a[(s2 + i) % n];
      ++c[z];
    }
  }
  return c;
}

}  // namespace

TEST(Theory, LineBoundValues) {
  EXPECT_NEAR(type1_bound_line(10, 1, 1, 3, 5), 15.728432233400438, 1e-12);
  EXPECT_NEAR(type1_bound_line(10, 1, 1, 3, 3), 6.153010914948564, 1e-12);
  EXPECT_LT(type1_bound_line(10, 1e6, 1, 3, 5), 1e-300);
}

TEST(Theory, TypeTwoValue) {
  EXPECT_NEAR(type2_bound(10, 0.25, 1, 0.5, 5), 0.9806582491395386, 1e-15);
  EXPECT_THROW(type2_bound(10, 0.5, 1, 0.5, 5), DomainError);
  EXPECT_THROW(type2_bound(10, 0.1, 1, 0.5, 9), DomainError);
  EXPECT_NEAR(type2_bound(100, 0.5 - 1e-9, 1, 0.5, 50), 1.0, 1e-12);
}

TEST(Theory, TypeTwoSmallestAtHalf) {
  const double mid = type2_bound(20, 0.1, 1, 0.6, 10);
  for (double s = 2; s <= 18; ++s) EXPECT_GE(type2_bound(20, 0.1, 1, 0.6, s), mid);
}

TEST(Theory, RingDiskRectValues) {
  EXPECT_NEAR(type1_bound_ring(10, 1, 1, 3, 5), 76.91263643685707, 1e-10);
  EXPECT_NEAR(type1_bound_disk(10, 1, 1, 5, 13), 552.2524501630207, 1e-9);
  EXPECT_NEAR(type1_bound_rect(4, 2, 1, 1, 4, 12), 175.94605537048886, 1e-9);
  EXPECT_NEAR(type1_bound_rect(37, 1, 0.7, 1.5, 5, 20), type1_bound_ring(37, 0.7, 1.5, 5, 20), 1e-12);
}

TEST(Theory, RingSingleSize) {
  EXPECT_NEAR(type1_bound_ring(50, 0.4, 1, 7, 7), direct_union(2500, 50, 0.4, 1, 7, 7), 1e-12);
}

TEST(Theory, DomainErrors) {
  EXPECT_THROW(type1_bound_line(10, 0, 1, 3, 5), DomainError);
  EXPECT_THROW(type1_bound_line(10, 1, -1, 3, 5), DomainError);
  EXPECT_THROW(type1_bound_line(10, 1, 1, 0, 5), DomainError);
  EXPECT_THROW(type1_bound_line(10, 1, 1, 6, 5), DomainError);
  EXPECT_THROW(type1_bound_ring(10, 1, 1, 3, 10), DomainError);
  EXPECT_THROW(type1_bound_disk(10, 1, 1, 5, 100), DomainError);
  EXPECT_THROW(type1_bound_rect(4, 0, 1, 1, 2, 3), DomainError);
  EXPECT_THROW(iterated_log(1.0, 1), DomainError);
  EXPECT_THROW(iterated_log(2.0, 2), DomainError);
  EXPECT_THROW(threshold_known(0.2, 1.0), DomainError);
  EXPECT_THROW(threshold_unknown(2.5, 1.0), DomainError);
  EXPECT_THROW(overlap_distribution(10, 5, StructureKind::Line), DomainError);
  EXPECT_THROW(overlap_distribution(10, 6, StructureKind::Ring), DomainError);
  EXPECT_THROW(overlap_distribution(10, 2, StructureKind::Disk), DomainError);
}

TEST(Theory, Sizing) {
  const double e2 = std::exp(2.0);
  EXPECT_NEAR(sufficient_min_size(2, 1, 1, e2, StructureKind::Line), 16.0, 1e-12);
  EXPECT_NEAR(sufficient_min_size(2, 1, 1, e2, StructureKind::Ring), 16.0, 1e-12);
  EXPECT_NEAR(sufficient_min_size(2, 1, 1, e2, StructureKind::Disk), 24.0, 1e-12);
  EXPECT_NEAR(sufficient_min_size(2, 1, 1, e2, StructureKind::Rectangle, 1), 16.0, 1e-12);
  EXPECT_NEAR(sufficient_min_size(2, 1, 1, e2, StructureKind::Rectangle, 3), 48.0, 1e-12);
}

TEST(Theory, IteratedLog) {
  EXPECT_NEAR(iterated_log(std::exp(1.0), 1), 1.0, 1e-15);
  EXPECT_NEAR(iterated_log(std::exp(std::exp(1.0)), 2), 1.0, 1e-15);
  EXPECT_NEAR(iterated_log(1e6, 2), 2.625791914476011, 1e-14);
}

TEST(Theory, Thresholds) {
  EXPECT_NEAR(threshold_known(0.17726763491986194, 0.5), 0.08863381745993097, 1e-15);
  EXPECT_NEAR(threshold_known(0.3, 1e-12), 0.3, 1e-12);
  EXPECT_NEAR(threshold_unknown(std::exp(std::exp(1.0)), 1.0), 1.0, 1e-15);
}

TEST(Theory, OverlapTables) {
  const auto line = overlap_distribution(10, 3, StructureKind::Line);
  const std::vector<double> line_expected{0.46875, 0.1875, 0.21875, 0.125};
  const auto ring = overlap_distribution(10, 3, StructureKind::Ring);
  const std::vector<double> ring_expected{0.5, 0.2, 0.2, 0.1};
  for (std::size_t z = 0; z < 4; ++z) {
    EXPECT_NEAR(line[z], line_expected[z], 1e-15);
    EXPECT_NEAR(ring[z], ring_expected[z], 1e-15);
  }
}

TEST(Theory, BayesLowerBounds) {
  EXPECT_NEAR(expected_exp_overlap(10, 3, 1.0, StructureKind::Line), 5.105475979875609, 1e-12);
  EXPECT_EQ(bayes_risk_lower_bound(10, 3, 1.0, StructureKind::Line), 0.0);
  EXPECT_NEAR(expected_exp_overlap(10, 3, 1.0, StructureKind::Ring), 4.530021277796706, 1e-12);
  EXPECT_NEAR(bayes_risk_lower_bound(10, 3, 1.0, StructureKind::Ring), 0.06058245734435186, 1e-12);
  EXPECT_EQ(bayes_risk_lower_bound(50, 7, 0.0, StructureKind::Ring), 1.0);
  EXPECT_EQ(expected_exp_overlap(50, 7, 0.0, StructureKind::Line), 1.0);
}

TEST(TheoryProperties, OverlapMatchesPairCounting) {
  for (std::size_t n = 2; n <= 60; ++n) {
    for (bool ring : {false, true}) {
      for (std::size_t k = 1; ring ? 2 * k <= n : 2 * k < n; ++k) {
        const auto counts = overlap_counts(n, k, ring);
        const auto p = overlap_distribution(n, k, ring ? StructureKind::Ring : StructureKind::Line);
        const double total = ring ? double(n * n) : double((n - k + 1) * (n - k + 1));
        double sum = 0.0;
        for (std::size_t z = 0; z <= k; ++z) {
          ASSERT_NEAR(p[z] * total, static_cast<double>(counts[z]), 1e-9) << "n=" << n << " k=" << k << " z=" << z;
          sum += p[z];
        }
        ASSERT_NEAR(sum, 1.0, 1e-12);
      }
    }
  }
}

TEST(TheoryProperties, BoundsMatchDirectSummation) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> tdist(0.05, 3.0), kdist(0.5, 2.0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 10 + gen() % 400;
    const std::size_t lo = 1 + gen() % (n - 2);
    const std::size_t hi = lo + gen() % (n - lo);
    const double t = tdist(gen), K = kdist(gen);
    const double dn = double(n);
    const double got = type1_bound_line(dn, t, K, lo, hi);
    ASSERT_NEAR(got, direct_line(dn, t, K, lo, hi), 1e-12 * got);
    const double ring = type1_bound_ring(dn, t, K, lo, hi);
    ASSERT_NEAR(ring, direct_union(dn * dn, dn, t, K, double(lo), double(hi)), 1e-12 * ring);
  }
}

TEST(TheoryProperties, DecreasingInThreshold) {
  double prev_line = INFINITY, prev_ring = INFINITY, prev_disk = INFINITY, prev_rect = INFINITY, prev_two = INFINITY;
  for (double t = 0.01; t < 0.5; t += 0.01) {
    const double line = type1_bound_line(100, t, 1, 10, 50);
    const double ring = type1_bound_ring(100, t, 1, 10, 50);
    const double disk = type1_bound_disk(20, t, 1, 5, 100);
    const double rect = type1_bound_rect(6, 3, t, 1, 4, 60);
    const double two = type2_bound(100, t, 1, 0.5, 30);
    for (double v : {line, ring, disk, rect, two}) ASSERT_GE(v, 0.0);
    ASSERT_LT(line, prev_line);
    ASSERT_LT(ring, prev_ring);
    ASSERT_LT(disk, prev_disk);
    ASSERT_LT(rect, prev_rect);
    // type II grows as t approaches MMD^2 from below
    ASSERT_GT(two, prev_two == INFINITY ? -1.0 : prev_two);
    prev_line = line, prev_ring = ring, prev_disk = disk, prev_rect = rect, prev_two = two;
  }
}

TEST(TheoryProperties, VanishingOverlapTerm) {
  const double mu = 1.0;
  double prev = INFINITY;
  for (std::size_t n : {100u, 1000u, 10000u, 100000u}) {
    const auto k = static_cast<std::size_t>(std::floor(std::log(double(n)) / (2 * mu * mu)));
    const double v = expected_exp_overlap(n, k, mu, StructureKind::Line) - 1.0;
    ASSERT_LT(v, prev) << "n=" << n;
    prev = v;
  }
}

TEST(TheoryProperties, ConsistencyTrendMatchesGolden) {
  std::ifstream in(GEOSCAN_SOURCE_DIR "/tests/golden/consistency_trend.csv");
  ASSERT_TRUE(in);
  const double c = 16.0 * 1.1 / (0.3 * 0.3);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'k') continue;
    std::stringstream ss(line);
    std::string k_s, n_s, lo_s, hi_s, b_s;
    std::getline(ss, k_s, ',');
    std::getline(ss, n_s, ',');
    std::getline(ss, lo_s, ',');
    std::getline(ss, hi_s, ',');
    std::getline(ss, b_s, ',');
    const std::size_t k = std::stoul(k_s);
    const double n = std::stod(n_s);
    const auto lo = static_cast<long long>(std::ceil(sufficient_min_size(0.3, 1, 0.1, n, StructureKind::Line)));
    const auto hi = static_cast<long long>(n) - static_cast<long long>(std::ceil(c * iterated_log(n, k)));
    ASSERT_EQ(lo, std::stoll(lo_s));
    ASSERT_EQ(hi, std::stoll(hi_s));
    if (b_s.empty()) {
      ASSERT_GT(lo, hi);
    } else {
      const double expected = std::stod(b_s);
      ASSERT_NEAR(type1_bound_line(n, 0.3, 1, std::size_t(lo), std::size_t(hi)), expected, 1e-9 * expected);
    }
    ++rows;
  }
  EXPECT_EQ(rows, 15);
}
