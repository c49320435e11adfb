#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "indepmix/combinations.hpp"
#include "indepmix/dist.hpp"

namespace indepmix {

// Hard cap for exhaustive vertex enumeration: past d = 8 the subsystem count
// C(2^d - 1, d) can never be walked to completion and overflows 64 bits soon
// after.
inline constexpr int kMaxEnumDim = 8;

// One inequality sum_{i in coeff_mask} y_i <= rhs, induced by outcome nu.
// coeff_mask = nu XOR omega, so bit i selects coordinates where nu disagrees
// with the cell's outcome.
struct ConstraintRow {
  Outcome nu;
  std::uint32_t coeff_mask;
  double rhs;
};

// Feasible region of the omega-cell in y coordinates: A y <= b with one row
// per outcome nu != omega and rhs = ln p(nu) - ln p(omega). Bounded above in
// every coordinate (each singleton mask appears), so the maximum of the convex
// objective sits at a vertex.
struct ConstraintSystem {
  Outcome omega = 0;
  int d = 0;
  double log_p_omega = 0.0;
  std::vector<ConstraintRow> rows;  // ascending nu

  // Scan aids: per-row tolerance bound rhs + 1e-9 * max(1, |rhs|), and row
  // indices in ascending rhs order (tightest constraints first, so infeasible
  // candidates die on the first few checks).
  std::vector<double> feas_upper;
  std::vector<std::uint32_t> check_order;
};

ConstraintSystem build_system(const JointDistribution& p, Outcome omega);

// Lazy lexicographic generator over the d-subsets of the row set.
Combinations enumerate_square_subsystems(const ConstraintSystem& sys);

struct VertexCandidate {
  std::vector<double> y;
  std::vector<std::uint32_t> active_rows;  // row indices of the defining subsystem
  bool feasible = false;
  double log_objective = 0.0;  // ln p(omega) + sum_i softplus(y_i); set when feasible
};

// Solves the square subsystem given by d row indices. nullopt means the 0/1
// matrix is singular (pivot below 1e-12); that subsystem defines no candidate.
std::optional<VertexCandidate> solve_subsystem(const ConstraintSystem& sys,
                                               std::span<const std::uint32_t> rows);

// All distinct feasible vertices of the cell (deduplicated at 1e-8 in the
// infinity norm), in first-encounter order of the lexicographic subsystem
// scan. Identical output for every worker count.
std::vector<VertexCandidate> vertices(const ConstraintSystem& sys, int workers = 1);

namespace detail {

// Per-candidate workspace kernels shared by vertices() and the exact solver.

// Gaussian elimination with partial pivoting on the 0/1 subsystem matrix.
// Returns false when singular. y must hold at least sys.d doubles.
bool solve_square(const ConstraintSystem& sys, const std::uint32_t* rows, double* y);

// Checks every row of the system at y, tightest rows first, stopping at the
// first violation.
bool feasible_point(const ConstraintSystem& sys, const double* y);

struct TiedVertex {
  double log_objective = 0.0;
  std::vector<double> y;
  std::vector<std::uint32_t> rows;
};

struct CellScan {
  std::uint64_t feasible_count = 0;  // distinct vertices
  bool has_best = false;
  TiedVertex best;
  std::vector<TiedVertex> ties;  // log_objective >= best - tie_tol, best included
  std::vector<VertexCandidate> all;  // filled only when collecting
};

// Full subsystem sweep of one cell. Best is the max log_objective with exact
// float ties broken toward the lexicographically smaller y; the chunk-ordered
// merge makes the result independent of the worker count.
CellScan scan_cell(const ConstraintSystem& sys, int workers, bool collect, double tie_tol);

}  // namespace detail

}  // namespace indepmix
