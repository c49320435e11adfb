#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"

#include "indepmix/solver.hpp"
#include "test_helpers.hpp"

using namespace indepmix;
using testhelp::expect_error;

TEST_SUITE("solver") {

TEST_CASE("exact decomposition of the two-patient joint") {
  JointDistribution p = testhelp::two_patient_joint();
  SolverReport rep = solve_exact(p);
  const Decomposition& dec = rep.decomposition;

  CHECK(rep.method == Method::EXACT);
  CHECK(dec.lambda == doctest::Approx(49.0 / 60).epsilon(1e-12));
  CHECK(dec.q_star.q[0] == doctest::Approx(1.0 / 21).epsilon(1e-9));
  CHECK(dec.q_star.q[1] == doctest::Approx(1.0 / 21).epsilon(1e-9));
  CHECK(dec.achieving_outcome == 0);
  CHECK(dec.co_maximizers.size() == 1);  // the three tied cells share one maximizer
  REQUIRE(dec.residual.has_value());
  CHECK(dec.residual->table[3] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.vertex_counts.size() == 4);
  for (const auto& [omega, count] : rep.vertex_counts) CHECK(count >= 1);
  CHECK(rep.wall_time_s >= 0.0);

  CertifyResult cert = certify(p, dec.lambda, dec.q_star);
  CHECK(cert.ok);
}

TEST_CASE("report lambda equals the best per-cell objective") {
  std::mt19937_64 rng(41);
  for (int rep_i = 0; rep_i < 10; ++rep_i) {
    int d = 2 + static_cast<int>(rng() % 2);
    JointDistribution p = testhelp::random_positive(d, rng);
    SolverReport rep = solve_exact(p);
    REQUIRE(!rep.per_omega_best.empty());
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [omega, ob] : rep.per_omega_best) best = std::max(best, ob.log_objective);
    CHECK(rep.decomposition.lambda == std::min(1.0, std::exp(best)));
  }
}

TEST_CASE("exact lambda respects its lower and upper bounds") {
  std::mt19937_64 rng(42);
  for (int rep_i = 0; rep_i < 15; ++rep_i) {
    int d = 2 + static_cast<int>(rng() % 3);
    JointDistribution p = testhelp::random_positive(d, rng);
    SolverReport rep = solve_exact(p);
    double min_p = *std::min_element(p.table.begin(), p.table.end());
    CHECK(rep.decomposition.lambda >= static_cast<double>(p.table.size()) * min_p - 1e-12);
    CHECK(rep.decomposition.lambda <= 1.0);
    CHECK(certify(p, rep.decomposition.lambda, rep.decomposition.q_star).ok);
    double w = weight_of(p, product_table(rep.decomposition.q_star));
    CHECK(w == doctest::Approx(rep.decomposition.lambda).epsilon(1e-9));
  }
}

TEST_CASE("marginal product weight never beats the optimum") {
  std::mt19937_64 rng(43);
  for (int rep_i = 0; rep_i < 15; ++rep_i) {
    int d = 2 + static_cast<int>(rng() % 2);
    JointDistribution p = testhelp::random_positive(d, rng);
    double w = weight_of(p, product_table(marginals(p)));
    CHECK(w <= solve_exact(p).decomposition.lambda + 1e-9);
  }
}

TEST_CASE("product measures decompose trivially") {
  std::mt19937_64 rng(44);
  for (int rep_i = 0; rep_i < 10; ++rep_i) {
    int d = 2 + static_cast<int>(rng() % 2);
    std::vector<double> q = testhelp::random_q(d, rng, 0.05, 0.95);
    SolverReport rep = solve_exact(product_table(ProductBernoulli{q}));
    CHECK(rep.decomposition.lambda >= 1.0 - 1e-6);
    CHECK(testhelp::max_abs_diff(rep.decomposition.q_star.q, q) <= 1e-6);
    CHECK_FALSE(rep.decomposition.residual.has_value());
  }
}

TEST_CASE("solver input validation") {
  expect_error(Errc::ZERO_MASS, [] { solve_exact(testhelp::diagonal_joint()); });

  std::mt19937_64 rng(45);
  JointDistribution big = testhelp::random_positive(7, rng);
  expect_error(Errc::DIMENSION_TOO_LARGE, [&] { solve_exact(big); });

  JointDistribution huge = testhelp::random_positive(9, rng);
  SolveOptions forced;
  forced.force = true;
  expect_error(Errc::DIMENSION_TOO_LARGE, [&] { solve_exact(huge, forced); });
}

TEST_CASE("oracle on the diagonal finds the degenerate corner") {
  OracleResult res = oracle_maximin(testhelp::diagonal_joint(), 101);
  CHECK(res.lambda_hat == 0.5);
  CHECK(res.q == std::vector<double>{0.0, 0.0});
}

TEST_CASE("oracle budget guard") {
  JointDistribution p = testhelp::two_patient_joint();
  OracleOptions opts;
  opts.max_evaluations = 1000.0;
  CHECK_NOTHROW(oracle_maximin(p, 10, opts));  // 100 * 4 = 400
  expect_error(Errc::GRID_TOO_LARGE, [&] { oracle_maximin(p, 20, opts); });
  expect_error(Errc::BAD_PARAMETER, [&] { oracle_maximin(p, 1); });
}

TEST_CASE("oracle is monotone under nested refinement") {
  std::mt19937_64 rng(46);
  for (int rep_i = 0; rep_i < 10; ++rep_i) {
    JointDistribution p = testhelp::random_positive(2, rng);
    double a = oracle_maximin(p, 5).lambda_hat;
    double b = oracle_maximin(p, 9).lambda_hat;    // refines g -> 2g - 1
    double c = oracle_maximin(p, 17).lambda_hat;
    CHECK(a <= b + 1e-15);
    CHECK(b <= c + 1e-15);
  }
}

TEST_CASE("oracle stays below the exact optimum") {
  std::mt19937_64 rng(47);
  for (int rep_i = 0; rep_i < 10; ++rep_i) {
    int d = 2 + static_cast<int>(rng() % 2);
    JointDistribution p = testhelp::random_positive(d, rng);
    double exact = solve_exact(p).decomposition.lambda;
    double hat = oracle_maximin(p, 51).lambda_hat;
    CHECK(hat <= exact + 1e-9);
  }
}

TEST_CASE("oracle handles zeros in the table") {
  JointDistribution p = make_distribution(2, {0.4, 0.0, 0.0, 0.6});
  OracleResult res = oracle_maximin(p, 11);
  CHECK(res.lambda_hat == 0.6);  // corner (1,1) is admissible with weight P(11)
  CHECK(res.q == std::vector<double>{1.0, 1.0});
}

TEST_CASE("oracle report certifies itself") {
  SolverReport rep = report_from_oracle(testhelp::diagonal_joint(), 101);
  CHECK(rep.method == Method::ORACLE);
  CHECK(rep.decomposition.lambda == 0.5);
  REQUIRE(rep.decomposition.residual.has_value());
  CHECK(rep.decomposition.residual->table[3] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(certify(testhelp::diagonal_joint(), rep.decomposition.lambda, rep.decomposition.q_star).ok);
}

TEST_CASE("heuristic reaches the two-patient optimum") {
  JointDistribution p = testhelp::two_patient_joint();
  SolverReport rep = solve_heuristic(p);
  CHECK(rep.method == Method::HEURISTIC);
  CHECK(rep.decomposition.lambda >= 49.0 / 60 - 1e-6);
  CHECK(rep.decomposition.lambda <= 49.0 / 60 + 1e-9);
  REQUIRE(rep.decomposition.residual.has_value());
  CHECK(certify(p, rep.decomposition.lambda, rep.decomposition.q_star).ok);
}

TEST_CASE("heuristic never beats the exact solver") {
  std::mt19937_64 rng(48);
  for (int rep_i = 0; rep_i < 8; ++rep_i) {
    JointDistribution p = testhelp::random_positive(3, rng);
    double exact = solve_exact(p).decomposition.lambda;
    HeuristicOptions opts;
    opts.starts = 16;
    opts.seed = rep_i;
    double h = solve_heuristic(p, opts).decomposition.lambda;
    CHECK(h <= exact + 1e-9);
  }
}

TEST_CASE("heuristic is deterministic for a fixed seed") {
  std::mt19937_64 rng(49);
  JointDistribution p = testhelp::random_positive(3, rng);
  HeuristicOptions opts;
  opts.starts = 8;
  opts.seed = 1234;
  SolverReport a = solve_heuristic(p, opts);
  SolverReport b = solve_heuristic(p, opts);
  CHECK(a.decomposition.lambda == b.decomposition.lambda);
  CHECK(a.decomposition.q_star.q == b.decomposition.q_star.q);
}

TEST_CASE("heuristic on product measures") {
  std::mt19937_64 rng(50);
  std::vector<double> q = testhelp::random_q(3, rng, 0.1, 0.9);
  SolverReport rep = solve_heuristic(product_table(ProductBernoulli{q}));
  CHECK(rep.decomposition.lambda >= 1.0 - 1e-6);
}

TEST_CASE("heuristic validation") {
  expect_error(Errc::ZERO_MASS, [] { solve_heuristic(testhelp::diagonal_joint()); });
  expect_error(Errc::BAD_PARAMETER, [] {
    HeuristicOptions opts;
    opts.starts = -1;
    solve_heuristic(testhelp::two_patient_joint(), opts);
  });
}

TEST_CASE("certify verdicts and tolerance control") {
  JointDistribution p = testhelp::two_patient_joint();
  ProductBernoulli q{{1.0 / 21, 1.0 / 21}};
  CHECK(certify(p, 49.0 / 60 - 1e-6, q).ok);
  CHECK_FALSE(certify(p, 49.0 / 60 + 1e-3, q).ok);
  CHECK(certify(p, 0.0, ProductBernoulli{{0.9, 0.9}}).ok);

  JointDistribution diag = testhelp::diagonal_joint();
  ProductBernoulli corner{{0.0, 0.0}};
  CHECK(certify(diag, 0.5 + 1e-5, corner, 1e-2).ok);
  CHECK_FALSE(certify(diag, 0.5 + 1e-5, corner, 1e-9).ok);
  CertifyResult res = certify(diag, 0.5 + 1e-5, corner, 1e-9);
  CHECK(res.worst_outcome == 0);
  CHECK(res.worst_slack == doctest::Approx(-1e-5).epsilon(1e-6));

  expect_error(Errc::BAD_PARAMETER, [&] { certify(p, -0.5, q); });
}

TEST_CASE("lambda is invariant under coordinate relabelings") {
  std::mt19937_64 rng(51);
  for (int rep_i = 0; rep_i < 10; ++rep_i) {
    JointDistribution p = testhelp::random_positive(3, rng);
    double base = solve_exact(p).decomposition.lambda;

    std::vector<int> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    double permuted = solve_exact(testhelp::permute_coords(p, perm)).decomposition.lambda;
    CHECK(permuted == doctest::Approx(base).epsilon(1e-9));

    Outcome mask = static_cast<Outcome>(rng() % 8);
    double flipped = solve_exact(testhelp::flip_coords(p, mask)).decomposition.lambda;
    CHECK(flipped == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("exact results do not depend on the worker count") {
  std::mt19937_64 rng(52);
  JointDistribution p = testhelp::random_positive(5, rng);
  SolveOptions one;
  one.workers = 1;
  SolveOptions four;
  four.workers = 4;
  SolverReport a = solve_exact(p, one);
  SolverReport b = solve_exact(p, four);
  CHECK(a.decomposition.lambda == b.decomposition.lambda);
  CHECK(a.decomposition.q_star.q == b.decomposition.q_star.q);
  CHECK(a.decomposition.achieving_outcome == b.decomposition.achieving_outcome);
  CHECK(a.vertex_counts == b.vertex_counts);
  REQUIRE(a.decomposition.co_maximizers.size() == b.decomposition.co_maximizers.size());
  for (std::size_t i = 0; i < a.decomposition.co_maximizers.size(); ++i) {
    CHECK(a.decomposition.co_maximizers[i].q == b.decomposition.co_maximizers[i].q);
  }
}

}  // TEST_SUITE
