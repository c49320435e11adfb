#pragma once

#include <span>
#include <vector>

#include "indepmix/dist.hpp"

namespace indepmix {

// log(1 + e^t), branch-stable for large |t|.
double softplus(double t);

// 1 / (1 + e^-t), branch-stable for large |t|.
double sigmoid(double t);

// Per-outcome objective f_omega(q) = prod_i q_i^{-omega_i} (1-q_i)^{omega_i-1},
// the reciprocal of the product measure's mass at omega. +inf when a factor of
// that mass is zero.
double f_omega_q(Outcome omega, std::span<const double> q);

// Logit change of variables y_i = (1 - 2 omega_i) * ln(q_i / (1 - q_i)).
// Requires every q_i strictly inside (0, 1).
std::vector<double> q_to_y(Outcome omega, std::span<const double> q);

// Inverse of q_to_y; y must be finite.
std::vector<double> y_to_q(Outcome omega, std::span<const double> y);

struct LogF {
  double log_f;
  double f;
};

// In y coordinates the objective is outcome-independent:
// log f(y) = sum_i softplus(y_i). f may overflow to +inf; log_f never does.
LogF f_omega_y(std::span<const double> y);

// Gradient of f in y coordinates: f(y) * sigmoid(y_i).
std::vector<double> gradient_f(std::span<const double> y);

// Hessian of f in y coordinates:
// f(y) * (diag(g_i (1 - g_i)) + g g^T) with g_i = sigmoid(y_i).
// Strictly positive definite everywhere.
std::vector<std::vector<double>> hessian_f(std::span<const double> y);

// Componentwise exp / log linking y to the linear-constraint variables x.
std::vector<double> x_from_y(std::span<const double> y);
std::vector<double> y_from_x(std::span<const double> x);

}  // namespace indepmix
