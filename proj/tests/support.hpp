#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "geoscan/geoscan.hpp"

namespace support {

inline std::vector<double> normal_values(std::size_t n, std::uint64_t seed, double mean = 0.0, double sd = 1.0) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(mean, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

// Straight double loop over the estimator definition, kept separate from the
// library so the two can be compared.
inline double oracle_mmd_u2(const std::vector<double>& x, const std::vector<double>& y,
                            double (*k)(double, double, double), double s) {
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  double xx = 0.0, yy = 0.0, xy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (i != j) xx += k(x[i], x[j], s);
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      if (i != j) yy += k(y[i], y[j], s);
  for (double a : x)
    for (double b : y) xy += k(a, b, s);
  return xx / (n * (n - 1)) + yy / (m * (m - 1)) - 2.0 * xy / (n * m);
}

inline double gauss(double a, double b, double s) { return std::exp(-(a - b) * (a - b) / (2 * s * s)); }
inline double laplace(double a, double b, double s) { return std::exp(-std::fabs(a - b) / s); }

// Explicit inside/outside split of a field by a node list.
inline std::pair<std::vector<double>, std::vector<double>> split(const std::vector<double>& field,
                                                                 const std::vector<std::size_t>& inside) {
  std::vector<char> mask(field.size(), 0);
  for (auto i : inside) mask[i] = 1;
  std::pair<std::vector<double>, std::vector<double>> out;
  for (std::size_t i = 0; i < field.size(); ++i) (mask[i] ? out.first : out.second).push_back(field[i]);
  return out;
}

}  // namespace support
