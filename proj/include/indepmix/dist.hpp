#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "indepmix/error.hpp"

namespace indepmix {

// A joint outcome on {0,1}^d encoded as an integer in [0, 2^d).
// Coordinate i (1-based) lives at bit position i-1, so coordinate 1 is the
// least significant bit.
using Outcome = std::uint32_t;

inline constexpr int kDefaultMaxDim = 20;

inline int bit_of(Outcome nu, int i) { return static_cast<int>((nu >> i) & 1u); }

// Full probability table over {0,1}^d, indexed by Outcome.
struct JointDistribution {
  int d = 0;
  std::vector<double> table;
  bool strictly_positive = false;

  std::size_t size() const { return table.size(); }
  double operator()(Outcome nu) const { return table[nu]; }
};

// Product-of-Bernoullis parameters; q[i] is the success probability of
// coordinate i+1. Each q[i] must lie in [0, 1].
struct ProductBernoulli {
  std::vector<double> q;

  int dim() const { return static_cast<int>(q.size()); }
};

// Certified mixture split P = lambda * Q(q_star) + (1 - lambda) * residual.
struct Decomposition {
  double lambda = 0.0;
  ProductBernoulli q_star;
  Outcome achieving_outcome = 0;
  std::optional<JointDistribution> residual;
  std::vector<ProductBernoulli> co_maximizers;
};

// Validates and normalizes a raw table. Entries in [-1e-12, 0) are clamped to
// zero; the sum may deviate from 1 by less than 1e-9 (renormalized), anything
// worse is rejected.
JointDistribution make_distribution(int d, std::vector<double> table,
                                    int max_d = kDefaultMaxDim);

// Expands product parameters into the induced joint table. Entries with a zero
// factor come out exactly zero.
JointDistribution product_table(const ProductBernoulli& pb);

// Largest lambda with p >= lambda * q entrywise, clamped to [0, 1]. Outcomes
// where q vanishes impose no constraint.
double weight_of(const JointDistribution& p, const JointDistribution& q);

// Coordinatewise success probabilities of p.
ProductBernoulli marginals(const JointDistribution& p);

// The normalized remainder (p - lambda * Q(q)) / (1 - lambda). Requires a
// valid certificate: weight_of(p, Q(q)) >= lambda - 1e-9, and lambda bounded
// away from 1 (DEGENERATE at lambda >= 1 - 1e-12).
JointDistribution residual(const JointDistribution& p, double lambda,
                           const ProductBernoulli& q);

// Shannon entropy in bits.
double entropy_bits(const JointDistribution& p);

}  // namespace indepmix
