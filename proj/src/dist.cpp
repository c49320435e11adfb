#include "indepmix/dist.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace indepmix {

namespace {

constexpr double kNegativeSlack = 1e-12;
constexpr double kRenormWindow = 1e-9;
constexpr double kCertSlack = 1e-9;
constexpr double kDegenerate = 1e-12;

void check_dim(int d, int max_d) {
  if (d < 1) fail(Errc::BAD_LENGTH, "dimension must be at least 1, got " + std::to_string(d));
  if (d > max_d) {
    fail(Errc::DIMENSION_TOO_LARGE,
         "dimension " + std::to_string(d) + " exceeds cap " + std::to_string(max_d));
  }
}

bool all_positive(const std::vector<double>& t) {
  for (double v : t) {
    if (v <= 0.0) return false;
  }
  return true;
}

void check_bernoulli(const ProductBernoulli& pb) {
  if (pb.q.empty()) fail(Errc::BAD_LENGTH, "empty product parameter vector");
  for (std::size_t i = 0; i < pb.q.size(); ++i) {
    double qi = pb.q[i];
    if (!std::isfinite(qi) || qi < 0.0 || qi > 1.0) {
      fail(Errc::BAD_PARAMETER,
           "q[" + std::to_string(i) + "] = " + std::to_string(qi) + " is outside [0, 1]");
    }
  }
}

}  // namespace

JointDistribution make_distribution(int d, std::vector<double> table, int max_d) {
  check_dim(d, max_d);
  const std::size_t want = std::size_t{1} << d;
  if (table.size() != want) {
    fail(Errc::BAD_LENGTH, "table has " + std::to_string(table.size()) + " entries, expected " +
                               std::to_string(want));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    double v = table[i];
    if (!std::isfinite(v)) {
      fail(Errc::NOT_FINITE, "entry " + std::to_string(i) + " is not finite");
    }
    if (v < -kNegativeSlack) {
      fail(Errc::NEGATIVE_MASS,
           "entry " + std::to_string(i) + " = " + std::to_string(v) + " is negative");
    }
    if (v < 0.0) v = 0.0;
    table[i] = v;
    sum += v;
  }
  if (std::abs(sum - 1.0) >= kRenormWindow) {
    fail(Errc::NOT_NORMALIZED, "table sums to " + std::to_string(sum));
  }
  if (sum != 1.0) {
    for (double& v : table) v /= sum;
  }
  JointDistribution p;
  p.d = d;
  p.table = std::move(table);
  p.strictly_positive = all_positive(p.table);
  return p;
}

JointDistribution product_table(const ProductBernoulli& pb) {
  check_bernoulli(pb);
  const int d = pb.dim();
  // Log-domain factors; a zero factor contributes -inf and exponentiates to an
  // exact 0.
  std::vector<double> log1(d), log0(d);
  for (int i = 0; i < d; ++i) {
    log1[i] = std::log(pb.q[i]);
    log0[i] = std::log1p(-pb.q[i]);
  }
  JointDistribution out;
  out.d = d;
  out.table.resize(std::size_t{1} << d);
  for (Outcome nu = 0; nu < out.table.size(); ++nu) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += bit_of(nu, i) ? log1[i] : log0[i];
    out.table[nu] = std::exp(s);
  }
  out.strictly_positive = all_positive(out.table);
  return out;
}

double weight_of(const JointDistribution& p, const JointDistribution& q) {
  if (p.d != q.d) {
    fail(Errc::BAD_LENGTH, "dimension mismatch: " + std::to_string(p.d) + " vs " +
                               std::to_string(q.d));
  }
  double w = std::numeric_limits<double>::infinity();
  for (std::size_t nu = 0; nu < p.table.size(); ++nu) {
    if (q.table[nu] <= 0.0) continue;
    double r = p.table[nu] / q.table[nu];
    if (r < w) w = r;
  }
  if (w > 1.0) w = 1.0;
  if (w < 0.0) w = 0.0;
  return w;
}

ProductBernoulli marginals(const JointDistribution& p) {
  ProductBernoulli pb;
  pb.q.assign(p.d, 0.0);
  for (std::size_t nu = 0; nu < p.table.size(); ++nu) {
    double v = p.table[nu];
    if (v == 0.0) continue;
    for (int i = 0; i < p.d; ++i) {
      if (bit_of(static_cast<Outcome>(nu), i)) pb.q[i] += v;
    }
  }
  for (double& qi : pb.q) {
    if (qi > 1.0) qi = 1.0;
  }
  return pb;
}

JointDistribution residual(const JointDistribution& p, double lambda,
                           const ProductBernoulli& q) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    fail(Errc::BAD_PARAMETER, "lambda = " + std::to_string(lambda));
  }
  JointDistribution qt = product_table(q);
  double cap = weight_of(p, qt);
  if (cap < lambda - kCertSlack) {
    fail(Errc::NOT_A_COMPONENT, "lambda = " + std::to_string(lambda) +
                                     " exceeds the admissible weight " + std::to_string(cap));
  }
  if (lambda >= 1.0 - kDegenerate) {
    fail(Errc::DEGENERATE, "lambda = " + std::to_string(lambda) + " leaves no residual mass");
  }
  JointDistribution r;
  r.d = p.d;
  r.table.resize(p.table.size());
  const double scale = 1.0 / (1.0 - lambda);
  double sum = 0.0;
  for (std::size_t nu = 0; nu < r.table.size(); ++nu) {
    double v = (p.table[nu] - lambda * qt.table[nu]) * scale;
    if (v < 0.0) v = 0.0;
    r.table[nu] = v;
    sum += v;
  }
  if (sum <= 0.0) fail(Errc::INTERNAL, "residual lost all mass");
  for (double& v : r.table) v /= sum;
  r.strictly_positive = all_positive(r.table);
  return r;
}

double entropy_bits(const JointDistribution& p) {
  double h = 0.0;
  for (double v : p.table) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

}  // namespace indepmix
