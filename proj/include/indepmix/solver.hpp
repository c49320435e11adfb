#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "indepmix/dist.hpp"
#include "indepmix/polytope.hpp"

namespace indepmix {

enum class Method { EXACT, ORACLE, HEURISTIC };

const char* method_name(Method m);

struct SolveOptions {
  int max_d = 6;      // soft cap; lift with max_d or force
  bool force = false; // bypass max_d (the structural cap d <= 8 still stands)
  int workers = 1;    // 0 = hardware concurrency
};

// Best vertex of one cell: objective in log domain, the vertex in y
// coordinates, and the corresponding product parameters.
struct OmegaBest {
  double log_objective = 0.0;
  std::vector<double> y;
  std::vector<double> q;
};

struct SolverReport {
  Method method = Method::EXACT;
  Decomposition decomposition;
  std::map<Outcome, OmegaBest> per_omega_best;        // empty for non-exact methods
  std::map<Outcome, std::uint64_t> vertex_counts;     // deduplicated, per cell
  double wall_time_s = 0.0;
};

// Exact latent independent weight by exhaustive vertex enumeration over every
// cell. Requires a strictly positive table. lambda is exp of the best log
// objective clamped to [0, 1]; q_star is the lexicographically smallest
// maximizer; co_maximizers lists every distinct maximizer within 1e-9 in log
// domain; a residual is attached when lambda < 1 - 1e-9.
SolverReport solve_exact(const JointDistribution& p, const SolveOptions& opts = {});

struct OracleOptions {
  double max_evaluations = 4e9;  // grid^d * 2^d guard
};

struct OracleResult {
  double lambda_hat = 0.0;        // certified lower bound on lambda
  std::vector<double> q;          // first grid maximizer in lexicographic scan order
  std::uint64_t evaluations = 0;  // table lookups implied by the scan
};

// Brute-force maximin over the uniform grid {0, 1/(g-1), ..., 1}^d, axis
// boundaries included. Works for tables with zeros. The value at every grid
// point is a certified admissible weight, so lambda_hat never exceeds the
// exact lambda and is monotone under nested refinement g -> 2g - 1.
OracleResult oracle_maximin(const JointDistribution& p, int grid,
                            const OracleOptions& opts = {});

// Oracle result packaged as a full report (residual, certificate fields).
SolverReport report_from_oracle(const JointDistribution& p, int grid,
                                const OracleOptions& opts = {});

struct HeuristicOptions {
  int starts = 32;           // random starts on top of the two seeded ones
  std::uint64_t seed = 0;
};

// Multi-start coordinate ascent on the log-domain maximin objective. Starts:
// the marginals, a coarse-grid argmax when affordable, and `starts` seeded
// uniform points. Deterministic for a fixed seed.
SolverReport solve_heuristic(const JointDistribution& p, const HeuristicOptions& opts = {});

struct CertifyResult {
  bool ok = false;
  double worst_slack = 0.0;  // min over outcomes of p - lambda * Q(q)
  Outcome worst_outcome = 0;
};

// Checks p >= lambda * Q(q) entrywise within an additive tolerance.
CertifyResult certify(const JointDistribution& p, double lambda, const ProductBernoulli& q,
                      double tol = 1e-9);

}  // namespace indepmix
