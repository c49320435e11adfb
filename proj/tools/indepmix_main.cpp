#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "indepmix/io.hpp"
#include "indepmix/models.hpp"
#include "indepmix/solver.hpp"

namespace {

using indepmix::Errc;
using indepmix::JointDistribution;
using indepmix::ProductBernoulli;
using indepmix::SolverReport;
using nlohmann::json;

struct CommonOpts {
  std::string input;
  std::string output;
  bool summary = false;
};

struct SolverOpts {
  int max_d = 6;
  bool force = false;
  int workers = 0;  // 0 = all hardware threads
};

void add_common(CLI::App* sub, CommonOpts& c, const char* input_desc) {
  sub->add_option("input", c.input, input_desc)->required();
  sub->add_option("-o,--output", c.output, "write the JSON result to a file instead of stdout");
  sub->add_flag("--summary", c.summary, "print a human-readable digest to stderr");
}

void add_solver(CLI::App* sub, SolverOpts& s) {
  sub->add_option("--max-d", s.max_d, "dimension cap for the exact solver (default 6)");
  sub->add_flag("--force", s.force, "run past the dimension cap");
  sub->add_option("--workers", s.workers, "worker threads (default: all hardware threads)");
}

void emit(const json& j, const CommonOpts& c) {
  if (c.output.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    indepmix::write_json_file(c.output, j);
  }
}

std::string fmt_q(const std::vector<double>& q) {
  std::ostringstream os;
  os.precision(12);
  os << "(";
  for (std::size_t i = 0; i < q.size(); ++i) os << (i ? ", " : "") << q[i];
  os << ")";
  return os.str();
}

void summarize(const SolverReport& rep) {
  std::ostringstream os;
  os.precision(12);
  os << "lambda = " << rep.decomposition.lambda << "\n"
     << "q* = " << fmt_q(rep.decomposition.q_star.q) << "\n"
     << "achieving outcome = " << rep.decomposition.achieving_outcome << "\n"
     << "co-maximizers = " << rep.decomposition.co_maximizers.size() << "\n"
     << "residual = " << (rep.decomposition.residual ? "attached" : "none") << "\n"
     << "method = " << indepmix::method_name(rep.method) << "\n"
     << "wall time = " << rep.wall_time_s << " s\n";
  std::cerr << os.str();
}

std::vector<double> parse_q_list(const std::string& text) {
  std::vector<double> q;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    try {
      std::size_t used = 0;
      double v = std::stod(token, &used);
      while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) ++used;
      if (used != token.size()) throw std::invalid_argument(token);
      q.push_back(v);
    } catch (const std::exception&) {
      indepmix::fail(Errc::BAD_PARAMETER, "cannot parse \"" + token + "\" in q list");
    }
  }
  if (q.empty()) indepmix::fail(Errc::BAD_PARAMETER, "empty q list");
  return q;
}

void run_decompose(const CommonOpts& c, const SolverOpts& s) {
  JointDistribution p = indepmix::read_distribution(c.input);
  indepmix::SolveOptions opts;
  opts.max_d = s.max_d;
  opts.force = s.force;
  opts.workers = s.workers;
  SolverReport rep = indepmix::solve_exact(p, opts);
  emit(indepmix::report_to_json(rep), c);
  if (c.summary) summarize(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latent independent weight of distributions on {0,1}^d"};
  app.require_subcommand(1);

  CommonOpts weight_c, decompose_c, certify_c, oracle_c, heuristic_c, marginal_c, entropy_c,
      bn_c, mrf_c;
  SolverOpts weight_s, decompose_s;
  int oracle_grid = 101;
  double oracle_budget = 4e9;
  int heur_starts = 32;
  std::uint64_t heur_seed = 0;
  double cert_lambda = 0.0;
  std::string cert_q;
  double cert_tol = 1e-9;

  CLI::App* weight = app.add_subcommand("weight", "exact latent independent weight (full report)");
  add_common(weight, weight_c, "joint distribution JSON file");
  add_solver(weight, weight_s);

  CLI::App* decompose =
      app.add_subcommand("decompose", "exact certified decomposition (full report)");
  add_common(decompose, decompose_c, "joint distribution JSON file");
  add_solver(decompose, decompose_s);

  CLI::App* cert = app.add_subcommand("certify", "check a candidate certificate");
  add_common(cert, certify_c, "joint distribution JSON file");
  cert->add_option("--lambda", cert_lambda, "mixture weight to certify")->required();
  cert->add_option("--q", cert_q, "comma-separated product parameters")->required();
  cert->add_option("--tol", cert_tol, "additive slack tolerance (default 1e-9)");

  CLI::App* oracle = app.add_subcommand("oracle", "grid maximin lower bound");
  add_common(oracle, oracle_c, "joint distribution JSON file");
  oracle->add_option("--grid", oracle_grid, "points per axis (default 101)");
  oracle->add_option("--budget", oracle_budget, "evaluation budget grid^d * 2^d (default 4e9)");

  CLI::App* heuristic = app.add_subcommand("heuristic", "multi-start coordinate ascent");
  add_common(heuristic, heuristic_c, "joint distribution JSON file");
  heuristic->add_option("--starts", heur_starts, "random starts (default 32)");
  heuristic->add_option("--seed", heur_seed, "RNG seed (default 0)");

  CLI::App* marginal = app.add_subcommand("marginal-weight", "weight of the marginal product");
  add_common(marginal, marginal_c, "joint distribution JSON file");

  CLI::App* entropy = app.add_subcommand("entropy", "Shannon entropy in bits");
  add_common(entropy, entropy_c, "joint distribution JSON file");

  CLI::App* from_bn = app.add_subcommand("from-bn", "expand a bayes net into a joint table");
  add_common(from_bn, bn_c, "bayes net JSON file");

  CLI::App* from_mrf = app.add_subcommand("from-mrf", "expand a markov net into a joint table");
  add_common(from_mrf, mrf_c, "markov net JSON file");

  try {
    app.parse(argc, argv);

    if (*weight) run_decompose(weight_c, weight_s);
    if (*decompose) run_decompose(decompose_c, decompose_s);
    if (*cert) {
      JointDistribution p = indepmix::read_distribution(certify_c.input);
      ProductBernoulli pb{parse_q_list(cert_q)};
      indepmix::CertifyResult res = indepmix::certify(p, cert_lambda, pb, cert_tol);
      emit(json{{"ok", res.ok},
                {"worst_slack", res.worst_slack},
                {"worst_outcome", res.worst_outcome},
                {"lambda", cert_lambda},
                {"q", pb.q}},
           certify_c);
      if (certify_c.summary) {
        std::cerr << (res.ok ? "certificate holds" : "certificate fails") << " (worst slack "
                  << res.worst_slack << " at outcome " << res.worst_outcome << ")\n";
      }
    }
    if (*oracle) {
      JointDistribution p = indepmix::read_distribution(oracle_c.input);
      indepmix::OracleOptions opts;
      opts.max_evaluations = oracle_budget;
      SolverReport rep = indepmix::report_from_oracle(p, oracle_grid, opts);
      emit(indepmix::report_to_json(rep), oracle_c);
      if (oracle_c.summary) summarize(rep);
    }
    if (*heuristic) {
      JointDistribution p = indepmix::read_distribution(heuristic_c.input);
      indepmix::HeuristicOptions opts;
      opts.starts = heur_starts;
      opts.seed = heur_seed;
      SolverReport rep = indepmix::solve_heuristic(p, opts);
      emit(indepmix::report_to_json(rep), heuristic_c);
      if (heuristic_c.summary) summarize(rep);
    }
    if (*marginal) {
      JointDistribution p = indepmix::read_distribution(marginal_c.input);
      ProductBernoulli pb = indepmix::marginals(p);
      double w = indepmix::weight_of(p, indepmix::product_table(pb));
      emit(json{{"lambda", w}, {"q", pb.q}}, marginal_c);
      if (marginal_c.summary) {
        std::cerr.precision(12);
        std::cerr << "marginal product weight = " << w << "\nq = " << fmt_q(pb.q) << "\n";
      }
    }
    if (*entropy) {
      JointDistribution p = indepmix::read_distribution(entropy_c.input);
      double h = indepmix::entropy_bits(p);
      emit(json{{"entropy_bits", h}}, entropy_c);
      if (entropy_c.summary) {
        std::cerr.precision(12);
        std::cerr << "entropy = " << h << " bits\n";
      }
    }
    if (*from_bn) {
      indepmix::BayesNet bn = indepmix::read_bayes_net(bn_c.input);
      JointDistribution p = indepmix::bn_to_joint(bn);
      emit(indepmix::distribution_to_json(p), bn_c);
      if (bn_c.summary) {
        std::cerr << "expanded " << p.d << " variables into " << p.table.size() << " entries\n";
      }
    }
    if (*from_mrf) {
      indepmix::MarkovNet mn = indepmix::read_markov_net(mrf_c.input);
      JointDistribution p = indepmix::mrf_to_joint(mn);
      emit(indepmix::distribution_to_json(p), mrf_c);
      if (mrf_c.summary) {
        std::cerr << "expanded " << p.d << " variables into " << p.table.size() << " entries\n";
      }
    }
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const indepmix::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::INTERNAL ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
