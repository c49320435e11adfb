#include "indepmix/polytope.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <unordered_set>

#include "indepmix/transforms.hpp"

namespace indepmix {

namespace {

constexpr double kPivotTol = 1e-12;
constexpr double kDedupScale = 1e8;  // vertex dedup grid: 1e-8 in every coordinate
constexpr std::uint64_t kMinChunk = 4096;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Quantized coordinates; saturated so extreme ill-conditioned solutions cannot
// overflow the integer key.
using Key = std::array<std::int64_t, kMaxEnumDim>;

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::int64_t v : k) {
      std::uint64_t x = static_cast<std::uint64_t>(v) * 0xbf58476d1ce4e5b9ull;
      x ^= x >> 31;
      h = (h ^ x) * 0x94d049bb133111ebull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

std::int64_t quantize(double v) {
  double s = v * kDedupScale;
  if (s >= 9.2e18) return std::int64_t{9200000000000000000};
  if (s <= -9.2e18) return std::int64_t{-9200000000000000000};
  return std::llround(s);
}

Key make_key(const double* y, int d) {
  Key k{};
  for (int i = 0; i < d; ++i) k[i] = quantize(y[i]);
  return k;
}

bool lex_less(const double* a, const double* b, int d) {
  for (int i = 0; i < d; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

double row_dot(const ConstraintRow& row, const double* y) {
  double s = 0.0;
  std::uint32_t m = row.coeff_mask;
  while (m) {
    s += y[std::countr_zero(m)];
    m &= m - 1;
  }
  return s;
}

double log_objective_at(const ConstraintSystem& sys, const double* y) {
  double s = sys.log_p_omega;
  for (int i = 0; i < sys.d; ++i) s += softplus(y[i]);
  return s;
}

// Picks the lexicographically first maximal independent subset of the active
// rows and re-solves from it. Every discovery of the same geometric vertex
// lands on the same canonical subsystem, so y, the dedup key, and the
// objective come out bitwise identical no matter which subsystem found it or
// which worker processed it.
bool canonicalize_vertex(const ConstraintSystem& sys, const double* y, double* y_canon,
                         std::array<std::uint32_t, kMaxEnumDim>& rows_out) {
  const int d = sys.d;
  double u[kMaxEnumDim][kMaxEnumDim];
  int pivot_col[kMaxEnumDim];
  int rank = 0;
  for (std::uint32_t r = 0; r < sys.rows.size() && rank < d; ++r) {
    const ConstraintRow& row = sys.rows[r];
    double slack = sys.feas_upper[r] - row.rhs;
    double dot = row_dot(row, y);
    if (std::abs(dot - row.rhs) > slack) continue;
    double v[kMaxEnumDim];
    for (int i = 0; i < d; ++i) v[i] = static_cast<double>((row.coeff_mask >> i) & 1u);
    for (int k = 0; k < rank; ++k) {
      double f = v[pivot_col[k]] / u[k][pivot_col[k]];
      if (f != 0.0) {
        for (int i = 0; i < d; ++i) v[i] -= f * u[k][i];
      }
    }
    int pc = -1;
    double pv = kPivotTol;
    for (int i = 0; i < d; ++i) {
      if (std::abs(v[i]) > pv) {
        pv = std::abs(v[i]);
        pc = i;
      }
    }
    if (pc < 0) continue;
    for (int i = 0; i < d; ++i) u[rank][i] = v[i];
    pivot_col[rank] = pc;
    rows_out[rank] = r;
    ++rank;
  }
  if (rank < d) return false;
  return detail::solve_square(sys, rows_out.data(), y_canon);
}

struct LocalScan {
  std::unordered_set<Key, KeyHash> seen;
  std::uint64_t feasible_count = 0;
  bool has_best = false;
  detail::TiedVertex best;
  std::vector<detail::TiedVertex> ties;
  std::vector<VertexCandidate> all;
};

// better-than comparator for the deterministic reduction: strictly larger
// objective wins; exact float ties go to the lexicographically smaller y.
bool improves(double log_obj, const double* y, const detail::TiedVertex& best, int d) {
  if (log_obj != best.log_objective) return log_obj > best.log_objective;
  return lex_less(y, best.y.data(), d);
}

void scan_range(const ConstraintSystem& sys, std::uint64_t start, std::uint64_t count,
                bool collect, double tie_tol, LocalScan& out) {
  const int d = sys.d;
  const std::uint32_t full = (1u << d) - 1u;
  Combinations comb = enumerate_square_subsystems(sys);
  comb.seek(start);
  double y[kMaxEnumDim];
  double y_canon[kMaxEnumDim];
  for (std::uint64_t n = 0; n < count; ++n, comb.next()) {
    std::span<const std::uint32_t> rows = comb.current();
    std::uint32_t cover = 0;
    for (std::uint32_t r : rows) cover |= sys.rows[r].coeff_mask;
    if (cover != full) continue;  // a zero column, singular for sure
    if (!detail::solve_square(sys, rows.data(), y)) continue;
    if (!detail::feasible_point(sys, y)) continue;

    std::array<std::uint32_t, kMaxEnumDim> canon_rows{};
    if (!canonicalize_vertex(sys, y, y_canon, canon_rows)) continue;
    Key key = make_key(y_canon, d);
    if (!out.seen.insert(key).second) continue;

    ++out.feasible_count;
    double log_obj = log_objective_at(sys, y_canon);
    std::vector<double> yv(y_canon, y_canon + d);
    std::vector<std::uint32_t> rv(canon_rows.begin(), canon_rows.begin() + d);
    if (collect) {
      VertexCandidate c;
      c.y = yv;
      c.active_rows = rv;
      c.feasible = true;
      c.log_objective = log_obj;
      out.all.push_back(std::move(c));
    }
    if (!out.has_best || improves(log_obj, y_canon, out.best, d)) {
      out.best = detail::TiedVertex{log_obj, yv, rv};
      out.has_best = true;
      std::erase_if(out.ties, [&](const detail::TiedVertex& t) {
        return t.log_objective < out.best.log_objective - tie_tol;
      });
    }
    if (log_obj >= out.best.log_objective - tie_tol) {
      out.ties.push_back(detail::TiedVertex{log_obj, std::move(yv), std::move(rv)});
    }
  }
}

}  // namespace

ConstraintSystem build_system(const JointDistribution& p, Outcome omega) {
  if (!p.strictly_positive) {
    fail(Errc::ZERO_MASS, "cell systems need a strictly positive distribution");
  }
  if (p.d > kMaxEnumDim) {
    fail(Errc::DIMENSION_TOO_LARGE,
         "vertex enumeration supports d <= " + std::to_string(kMaxEnumDim));
  }
  if (omega >= p.table.size()) {
    fail(Errc::BAD_PARAMETER, "outcome " + std::to_string(omega) + " out of range");
  }
  ConstraintSystem sys;
  sys.omega = omega;
  sys.d = p.d;
  const double log_po = std::log(p.table[omega]);
  sys.log_p_omega = log_po;
  sys.rows.reserve(p.table.size() - 1);
  for (Outcome nu = 0; nu < p.table.size(); ++nu) {
    if (nu == omega) continue;
    sys.rows.push_back(ConstraintRow{nu, nu ^ omega, std::log(p.table[nu]) - log_po});
  }
  sys.feas_upper.resize(sys.rows.size());
  sys.check_order.resize(sys.rows.size());
  for (std::uint32_t r = 0; r < sys.rows.size(); ++r) {
    double rhs = sys.rows[r].rhs;
    sys.feas_upper[r] = rhs + 1e-9 * std::max(1.0, std::abs(rhs));
    sys.check_order[r] = r;
  }
  std::sort(sys.check_order.begin(), sys.check_order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return sys.rows[a].rhs < sys.rows[b].rhs; });
  return sys;
}

Combinations enumerate_square_subsystems(const ConstraintSystem& sys) {
  return Combinations(sys.rows.size(), static_cast<std::uint64_t>(sys.d));
}

namespace detail {

bool solve_square(const ConstraintSystem& sys, const std::uint32_t* rows, double* y) {
  const int d = sys.d;
  double a[kMaxEnumDim][kMaxEnumDim];
  double b[kMaxEnumDim];
  for (int r = 0; r < d; ++r) {
    const ConstraintRow& row = sys.rows[rows[r]];
    for (int i = 0; i < d; ++i) a[r][i] = static_cast<double>((row.coeff_mask >> i) & 1u);
    b[r] = row.rhs;
  }
  for (int col = 0; col < d; ++col) {
    int piv = col;
    double pv = std::abs(a[col][col]);
    for (int r = col + 1; r < d; ++r) {
      double v = std::abs(a[r][col]);
      if (v > pv) {
        pv = v;
        piv = r;
      }
    }
    if (pv < kPivotTol) return false;
    if (piv != col) {
      for (int i = col; i < d; ++i) std::swap(a[piv][i], a[col][i]);
      std::swap(b[piv], b[col]);
    }
    const double inv = 1.0 / a[col][col];
    for (int r = col + 1; r < d; ++r) {
      double f = a[r][col] * inv;
      if (f == 0.0) continue;
      a[r][col] = 0.0;
      for (int i = col + 1; i < d; ++i) a[r][i] -= f * a[col][i];
      b[r] -= f * b[col];
    }
  }
  for (int r = d - 1; r >= 0; --r) {
    double s = b[r];
    for (int i = r + 1; i < d; ++i) s -= a[r][i] * y[i];
    y[r] = s / a[r][r];
  }
  return true;
}

bool feasible_point(const ConstraintSystem& sys, const double* y) {
  for (std::uint32_t r : sys.check_order) {
    if (row_dot(sys.rows[r], y) > sys.feas_upper[r]) return false;
  }
  return true;
}

CellScan scan_cell(const ConstraintSystem& sys, int workers, bool collect, double tie_tol) {
  const std::uint64_t total = Combinations::count(sys.rows.size(), sys.d);
  int nchunks = 1;
  if (workers > 1 && total >= 2 * kMinChunk) {
    nchunks = static_cast<int>(std::min<std::uint64_t>(workers, total / kMinChunk));
  }
  std::vector<LocalScan> locals(nchunks);
  if (nchunks == 1) {
    scan_range(sys, 0, total, collect, tie_tol, locals[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nchunks);
    for (int c = 0; c < nchunks; ++c) {
      std::uint64_t lo = total * c / nchunks;
      std::uint64_t hi = total * (c + 1) / nchunks;
      pool.emplace_back([&, c, lo, hi] {
        scan_range(sys, lo, hi - lo, collect, tie_tol, locals[c]);
      });
    }
    for (auto& t : pool) t.join();
  }

  // Chunk-ordered merge; duplicates claimed by an earlier chunk are dropped so
  // the outcome matches the serial scan exactly.
  CellScan out;
  std::unordered_set<Key, KeyHash> claimed;
  for (LocalScan& loc : locals) {
    if (loc.has_best && (!out.has_best ||
                         improves(loc.best.log_objective, loc.best.y.data(), out.best, sys.d))) {
      out.best = loc.best;
      out.has_best = true;
    }
  }
  for (LocalScan& loc : locals) {
    for (const Key& k : loc.seen) {
      if (claimed.insert(k).second) ++out.feasible_count;
    }
    if (collect) {
      for (VertexCandidate& c : loc.all) {
        Key k = make_key(c.y.data(), sys.d);
        bool first = true;
        for (const LocalScan* prior = locals.data(); prior != &loc; ++prior) {
          if (prior->seen.contains(k)) {
            first = false;
            break;
          }
        }
        if (first) out.all.push_back(std::move(c));
      }
    }
  }
  if (out.has_best) {
    std::unordered_set<Key, KeyHash> tie_keys;
    for (LocalScan& loc : locals) {
      for (detail::TiedVertex& t : loc.ties) {
        if (t.log_objective < out.best.log_objective - tie_tol) continue;
        Key k = make_key(t.y.data(), sys.d);
        bool first = true;
        for (const LocalScan* prior = locals.data(); prior != &loc; ++prior) {
          if (prior->seen.contains(k)) {
            first = false;
            break;
          }
        }
        if (first && tie_keys.insert(k).second) out.ties.push_back(std::move(t));
      }
    }
  }
  return out;
}

}  // namespace detail

std::optional<VertexCandidate> solve_subsystem(const ConstraintSystem& sys,
                                               std::span<const std::uint32_t> rows) {
  if (static_cast<int>(rows.size()) != sys.d) {
    fail(Errc::BAD_LENGTH, "subsystem needs exactly d rows");
  }
  for (std::uint32_t r : rows) {
    if (r >= sys.rows.size()) fail(Errc::BAD_PARAMETER, "row index out of range");
  }
  double y[kMaxEnumDim];
  if (!detail::solve_square(sys, rows.data(), y)) return std::nullopt;
  VertexCandidate c;
  c.y.assign(y, y + sys.d);
  c.active_rows.assign(rows.begin(), rows.end());
  c.feasible = detail::feasible_point(sys, y);
  if (c.feasible) c.log_objective = log_objective_at(sys, y);
  return c;
}

std::vector<VertexCandidate> vertices(const ConstraintSystem& sys, int workers) {
  detail::CellScan scan = detail::scan_cell(sys, workers, true, 1e-9);
  return std::move(scan.all);
}

}  // namespace indepmix
