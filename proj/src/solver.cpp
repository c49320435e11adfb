#include "indepmix/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <utility>

#include "indepmix/transforms.hpp"

namespace indepmix {

namespace {

constexpr double kTieTol = 1e-9;
constexpr double kResidualGate = 1e-9;  // attach a residual when lambda < 1 - gate
constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int effective_workers(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

bool q_lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool q_close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

// min over outcomes of p/Q with the argmin; outcomes outside Q's support are
// unconstrained.
std::pair<double, Outcome> weight_argmin(const JointDistribution& p,
                                         const JointDistribution& qt) {
  double w = kInf;
  Outcome arg = 0;
  for (std::size_t nu = 0; nu < p.table.size(); ++nu) {
    if (qt.table[nu] <= 0.0) continue;
    double r = p.table[nu] / qt.table[nu];
    if (r < w) {
      w = r;
      arg = static_cast<Outcome>(nu);
    }
  }
  if (w > 1.0) w = 1.0;
  if (w < 0.0) w = 0.0;
  return {w, arg};
}

void attach_residual(const JointDistribution& p, Decomposition& dec) {
  if (dec.lambda < 1.0 - kResidualGate) {
    dec.residual = residual(p, dec.lambda, dec.q_star);
  }
}

SolverReport finish_point_report(const JointDistribution& p, Method method,
                                 std::vector<double> q, Clock::time_point t0) {
  ProductBernoulli pb{std::move(q)};
  auto [w, arg] = weight_argmin(p, product_table(pb));
  SolverReport rep;
  rep.method = method;
  rep.decomposition.lambda = w;
  rep.decomposition.q_star = pb;
  rep.decomposition.achieving_outcome = arg;
  rep.decomposition.co_maximizers = {pb};
  attach_residual(p, rep.decomposition);
  rep.wall_time_s = seconds_since(t0);
  return rep;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::EXACT: return "EXACT";
    case Method::ORACLE: return "ORACLE";
    case Method::HEURISTIC: return "HEURISTIC";
  }
  return "UNKNOWN";
}

SolverReport solve_exact(const JointDistribution& p, const SolveOptions& opts) {
  if (!p.strictly_positive) {
    fail(Errc::ZERO_MASS, "exact solver needs a strictly positive table");
  }
  if (p.d > kMaxEnumDim) {
    fail(Errc::DIMENSION_TOO_LARGE, "d = " + std::to_string(p.d) +
                                        " exceeds the structural enumeration cap " +
                                        std::to_string(kMaxEnumDim));
  }
  if (p.d > opts.max_d && !opts.force) {
    fail(Errc::DIMENSION_TOO_LARGE, "d = " + std::to_string(p.d) + " exceeds the cap " +
                                        std::to_string(opts.max_d) +
                                        "; raise max_d or set force");
  }
  const int workers = effective_workers(opts.workers);
  const auto t0 = Clock::now();

  SolverReport rep;
  rep.method = Method::EXACT;
  double best_log = -kInf;
  // (omega, vertex) pairs within the tie window of the running best.
  std::vector<std::pair<Outcome, detail::TiedVertex>> ties;

  for (Outcome omega = 0; omega < p.table.size(); ++omega) {
    ConstraintSystem sys = build_system(p, omega);
    detail::CellScan scan = detail::scan_cell(sys, workers, false, kTieTol);
    rep.vertex_counts[omega] = scan.feasible_count;
    if (!scan.has_best) continue;
    OmegaBest ob;
    ob.log_objective = scan.best.log_objective;
    ob.y = scan.best.y;
    ob.q = y_to_q(omega, scan.best.y);
    rep.per_omega_best.emplace(omega, std::move(ob));

    if (scan.best.log_objective > best_log) best_log = scan.best.log_objective;
    for (detail::TiedVertex& t : scan.ties) {
      if (t.log_objective >= best_log - kTieTol) ties.emplace_back(omega, std::move(t));
    }
    std::erase_if(ties, [&](const auto& e) { return e.second.log_objective < best_log - kTieTol; });
  }
  if (ties.empty()) fail(Errc::INTERNAL, "no feasible vertex in any cell");
  if (best_log > std::log1p(1e-6)) {
    fail(Errc::INTERNAL, "objective exceeds 1 beyond tolerance: exp(" + std::to_string(best_log) + ")");
  }

  // Map surviving ties to q space, deduplicate, and pick the lexicographically
  // smallest maximizer.
  std::vector<std::pair<std::vector<double>, Outcome>> cands;
  cands.reserve(ties.size());
  for (const auto& [omega, t] : ties) {
    cands.emplace_back(y_to_q(omega, t.y), omega);
  }
  std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return q_lex_less(a.first, b.first);
    return a.second < b.second;
  });
  Decomposition& dec = rep.decomposition;
  for (const auto& [q, omega] : cands) {
    if (!dec.co_maximizers.empty() && q_close(dec.co_maximizers.back().q, q, kTieTol)) continue;
    dec.co_maximizers.push_back(ProductBernoulli{q});
  }
  dec.q_star = dec.co_maximizers.front();
  dec.achieving_outcome = cands.front().second;
  dec.lambda = std::min(1.0, std::exp(best_log));
  attach_residual(p, dec);
  rep.wall_time_s = seconds_since(t0);
  return rep;
}

OracleResult oracle_maximin(const JointDistribution& p, int grid, const OracleOptions& opts) {
  if (grid < 2) fail(Errc::BAD_PARAMETER, "grid must have at least 2 points per axis");
  const int d = p.d;
  const std::size_t n = p.table.size();
  const double budget = std::min(opts.max_evaluations, 4e18);
  const double cost = std::pow(static_cast<double>(grid), d) * static_cast<double>(n);
  if (!(cost <= budget)) {
    fail(Errc::GRID_TOO_LARGE, "grid^d * 2^d = " + std::to_string(cost) +
                                   " exceeds the evaluation budget " + std::to_string(budget));
  }

  std::vector<double> axis(grid);
  for (int j = 0; j < grid; ++j) axis[j] = static_cast<double>(j) / (grid - 1);

  // partial[k] holds the product of the first k factors for each prefix
  // outcome; extending one axis doubles it.
  std::vector<std::vector<double>> partial(d + 1);
  for (int k = 0; k <= d; ++k) partial[k].resize(std::size_t{1} << k);
  partial[0][0] = 1.0;

  OracleResult res;
  res.lambda_hat = -1.0;
  std::vector<double> q(d);

  auto evaluate_leaf = [&]() {
    const std::vector<double>& qt = partial[d];
    double r = kInf;
    for (std::size_t nu = 0; nu < n; ++nu) {
      if (qt[nu] <= 0.0) continue;
      double ratio = p.table[nu] / qt[nu];
      if (ratio < r) {
        r = ratio;
        if (r <= res.lambda_hat) return;  // cannot beat the incumbent
      }
    }
    if (r > 1.0) r = 1.0;
    if (r > res.lambda_hat) {
      res.lambda_hat = r;
      res.q = q;
    }
  };

  // Lexicographic scan over (q_1, ..., q_d); the first strict improvement
  // wins, so ties resolve to the earliest point.
  auto descend = [&](auto&& self, int k) -> void {
    if (k == d) {
      res.evaluations += n;
      evaluate_leaf();
      return;
    }
    const std::size_t half = std::size_t{1} << k;
    for (int j = 0; j < grid; ++j) {
      q[k] = axis[j];
      const double w1 = axis[j];
      const double w0 = 1.0 - w1;
      for (std::size_t idx = 0; idx < half; ++idx) {
        double base = partial[k][idx];
        partial[k + 1][idx] = base * w0;
        partial[k + 1][idx | half] = base * w1;
      }
      self(self, k + 1);
    }
  };
  descend(descend, 0);
  if (res.lambda_hat < 0.0) res.lambda_hat = 0.0;
  return res;
}

SolverReport report_from_oracle(const JointDistribution& p, int grid,
                                const OracleOptions& opts) {
  const auto t0 = Clock::now();
  OracleResult res = oracle_maximin(p, grid, opts);
  return finish_point_report(p, Method::ORACLE, std::move(res.q), t0);
}

SolverReport solve_heuristic(const JointDistribution& p, const HeuristicOptions& opts) {
  if (!p.strictly_positive) {
    fail(Errc::ZERO_MASS, "heuristic needs a strictly positive table");
  }
  if (opts.starts < 0) fail(Errc::BAD_PARAMETER, "starts must be nonnegative");
  const auto t0 = Clock::now();
  const int d = p.d;
  const std::size_t n = p.table.size();
  constexpr double kEdge = 1e-9;        // keep iterates strictly inside (0,1)
  constexpr double kImprove = 1e-12;
  constexpr double kMinStep = 1e-13;

  std::vector<double> logp(n);
  for (std::size_t nu = 0; nu < n; ++nu) logp[nu] = std::log(p.table[nu]);

  // Objective g(q) = min_nu [ln p(nu) - ln Q(nu)], evaluated via a residual
  // table m so probes touch each entry once.
  std::vector<double> m(n);
  auto rebuild = [&](const std::vector<double>& q) {
    for (std::size_t nu = 0; nu < n; ++nu) {
      double lq = 0.0;
      for (int i = 0; i < d; ++i) {
        lq += bit_of(static_cast<Outcome>(nu), i) ? std::log(q[i]) : std::log1p(-q[i]);
      }
      m[nu] = logp[nu] - lq;
    }
  };
  auto g_min = [&]() {
    double g = kInf;
    for (double v : m) g = std::min(g, v);
    return g;
  };
  auto probe = [&](const std::vector<double>& q, int i, double qi_new) {
    double d1 = std::log(qi_new) - std::log(q[i]);
    double d0 = std::log1p(-qi_new) - std::log1p(-q[i]);
    double g = kInf;
    for (std::size_t nu = 0; nu < n; ++nu) {
      double v = m[nu] - (bit_of(static_cast<Outcome>(nu), i) ? d1 : d0);
      if (v < g) g = v;
    }
    return g;
  };

  auto ascend = [&](std::vector<double> q) {
    for (double& qi : q) qi = std::clamp(qi, kEdge, 1.0 - kEdge);
    rebuild(q);
    double cur = g_min();
    double step = 0.25;
    while (step >= kMinStep) {
      bool moved = false;
      for (int i = 0; i < d; ++i) {
        for (double dir : {step, -step}) {
          double qi_new = std::clamp(q[i] + dir, kEdge, 1.0 - kEdge);
          if (qi_new == q[i]) continue;
          double val = probe(q, i, qi_new);
          if (val > cur + kImprove) {
            q[i] = qi_new;
            rebuild(q);
            cur = g_min();
            moved = true;
          }
        }
      }
      if (!moved) step *= 0.5;
    }
    return std::pair<double, std::vector<double>>(cur, std::move(q));
  };

  std::vector<std::vector<double>> starts;
  starts.push_back(marginals(p).q);
  // Coarse oracle start when a small grid fits a fixed probe budget.
  for (int g = 21; g >= 3; g -= 2) {
    if (std::pow(static_cast<double>(g), d) * static_cast<double>(n) <= 1e7) {
      OracleOptions oo;
      oo.max_evaluations = 1e7;
      starts.push_back(oracle_maximin(p, g, oo).q);
      break;
    }
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int s = 0; s < opts.starts; ++s) {
    std::vector<double> q(d);
    for (int i = 0; i < d; ++i) q[i] = uni(rng);
    starts.push_back(std::move(q));
  }

  double best_g = -kInf;
  std::vector<double> best_q;
  for (auto& q0 : starts) {
    auto [gval, q] = ascend(std::move(q0));
    if (gval > best_g || (gval == best_g && q_lex_less(q, best_q))) {
      best_g = gval;
      best_q = std::move(q);
    }
  }
  return finish_point_report(p, Method::HEURISTIC, std::move(best_q), t0);
}

CertifyResult certify(const JointDistribution& p, double lambda, const ProductBernoulli& q,
                      double tol) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    fail(Errc::BAD_PARAMETER, "lambda = " + std::to_string(lambda));
  }
  if (!(tol >= 0.0)) fail(Errc::BAD_PARAMETER, "tolerance must be nonnegative");
  JointDistribution qt = product_table(q);
  if (p.d != qt.d) fail(Errc::BAD_LENGTH, "dimension mismatch");
  CertifyResult out;
  out.worst_slack = kInf;
  for (std::size_t nu = 0; nu < p.table.size(); ++nu) {
    double slack = p.table[nu] - lambda * qt.table[nu];
    if (slack < out.worst_slack) {
      out.worst_slack = slack;
      out.worst_outcome = static_cast<Outcome>(nu);
    }
  }
  out.ok = out.worst_slack >= -tol;
  return out;
}

}  // namespace indepmix
