#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "indepmix/dist.hpp"

namespace testhelp {

inline std::string fixture(const std::string& name) {
  return std::string(INDEPMIX_FIXTURES_DIR) + "/" + name;
}

template <typename F>
void expect_error(indepmix::Errc code, F&& fn) {
  try {
    fn();
    FAIL_CHECK("expected error " << indepmix::errc_name(code) << ", none thrown");
  } catch (const indepmix::Error& e) {
    CHECK_MESSAGE(e.code() == code, "expected " << indepmix::errc_name(code) << ", got "
                                                << e.what());
  }
}

// Two-patient joint: (40, 2, 2, 10) / 54 in outcome order 00, 10, 01, 11.
inline indepmix::JointDistribution two_patient_joint() {
  return indepmix::make_distribution(2, {40.0 / 54, 2.0 / 54, 2.0 / 54, 10.0 / 54});
}

inline indepmix::JointDistribution diagonal_joint() {
  return indepmix::make_distribution(2, {0.5, 0.0, 0.0, 0.5});
}

// Strictly positive random table via normalized exponential draws.
inline indepmix::JointDistribution random_positive(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> t(std::size_t{1} << d);
  double sum = 0.0;
  for (double& v : t) {
    v = -std::log1p(-uni(rng));  // Exp(1)
    if (v < 1e-12) v = 1e-12;
    sum += v;
  }
  for (double& v : t) v /= sum;
  return indepmix::make_distribution(d, std::move(t));
}

inline std::vector<double> random_q(int d, std::mt19937_64& rng, double lo = 1e-9,
                                    double hi = 1.0 - 1e-9) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> q(d);
  for (double& v : q) v = std::clamp(lo + (hi - lo) * uni(rng), lo, hi);
  return q;
}

// Relabels coordinates: bit i of the source index becomes bit perm[i].
inline indepmix::JointDistribution permute_coords(const indepmix::JointDistribution& p,
                                                 const std::vector<int>& perm) {
  std::vector<double> t(p.table.size());
  for (std::size_t nu = 0; nu < p.table.size(); ++nu) {
    std::size_t target = 0;
    for (int i = 0; i < p.d; ++i) {
      if ((nu >> i) & 1u) target |= std::size_t{1} << perm[i];
    }
    t[target] = p.table[nu];
  }
  return indepmix::make_distribution(p.d, std::move(t));
}

// Flips the coordinates selected by mask (outcome relabeling nu -> nu ^ mask).
inline indepmix::JointDistribution flip_coords(const indepmix::JointDistribution& p,
                                               indepmix::Outcome mask) {
  std::vector<double> t(p.table.size());
  for (std::size_t nu = 0; nu < p.table.size(); ++nu) {
    t[nu ^ mask] = p.table[nu];
  }
  return indepmix::make_distribution(p.d, std::move(t));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

}  // namespace testhelp
