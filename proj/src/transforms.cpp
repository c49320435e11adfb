#include "indepmix/transforms.hpp"

#include <cmath>
#include <string>

namespace indepmix {

namespace {

void check_dim_span(std::size_t n) {
  if (n == 0) fail(Errc::BAD_LENGTH, "empty coordinate vector");
  if (n > 31) fail(Errc::BAD_LENGTH, "coordinate vector longer than 31");
}

void check_outcome(Outcome omega, std::size_t d) {
  if (omega >= (Outcome{1} << d)) {
    fail(Errc::BAD_PARAMETER,
         "outcome " + std::to_string(omega) + " out of range for dimension " + std::to_string(d));
  }
}

}  // namespace

double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

double f_omega_q(Outcome omega, std::span<const double> q) {
  check_dim_span(q.size());
  check_outcome(omega, q.size());
  double logp = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    double qi = q[i];
    if (!std::isfinite(qi) || qi < 0.0 || qi > 1.0) {
      fail(Errc::BAD_PARAMETER, "q[" + std::to_string(i) + "] outside [0, 1]");
    }
    logp += bit_of(omega, static_cast<int>(i)) ? std::log(qi) : std::log1p(-qi);
  }
  return std::exp(-logp);
}

std::vector<double> q_to_y(Outcome omega, std::span<const double> q) {
  check_dim_span(q.size());
  check_outcome(omega, q.size());
  std::vector<double> y(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    double qi = q[i];
    if (!std::isfinite(qi) || qi <= 0.0 || qi >= 1.0) {
      fail(Errc::BOUNDARY, "q[" + std::to_string(i) + "] = " + std::to_string(qi) +
                               " is not strictly inside (0, 1)");
    }
    double logit = std::log(qi) - std::log1p(-qi);
    y[i] = bit_of(omega, static_cast<int>(i)) ? -logit : logit;
  }
  return y;
}

std::vector<double> y_to_q(Outcome omega, std::span<const double> y) {
  check_dim_span(y.size());
  check_outcome(omega, y.size());
  std::vector<double> q(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) {
      fail(Errc::BAD_PARAMETER, "y[" + std::to_string(i) + "] is not finite");
    }
    q[i] = bit_of(omega, static_cast<int>(i)) ? sigmoid(-y[i]) : sigmoid(y[i]);
  }
  return q;
}

LogF f_omega_y(std::span<const double> y) {
  check_dim_span(y.size());
  double s = 0.0;
  for (double yi : y) s += softplus(yi);
  return LogF{s, std::exp(s)};
}

std::vector<double> gradient_f(std::span<const double> y) {
  LogF v = f_omega_y(y);
  std::vector<double> g(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) g[i] = v.f * sigmoid(y[i]);
  return g;
}

std::vector<std::vector<double>> hessian_f(std::span<const double> y) {
  LogF v = f_omega_y(y);
  const std::size_t d = y.size();
  std::vector<double> g(d);
  for (std::size_t i = 0; i < d; ++i) g[i] = sigmoid(y[i]);
  std::vector<std::vector<double>> h(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double v_ij = g[i] * g[j];
      if (i == j) v_ij += sigmoid(y[i]) * sigmoid(-y[i]);
      h[i][j] = v.f * v_ij;
    }
  }
  return h;
}

std::vector<double> x_from_y(std::span<const double> y) {
  check_dim_span(y.size());
  std::vector<double> x(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::exp(y[i]);
  return x;
}

std::vector<double> y_from_x(std::span<const double> x) {
  check_dim_span(x.size());
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) fail(Errc::BAD_PARAMETER, "x[" + std::to_string(i) + "] must be positive");
    y[i] = std::log(x[i]);
  }
  return y;
}

}  // namespace indepmix
