#include "indepmix/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace indepmix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_model_dim(std::size_t d, int max_d, const char* what) {
  if (d == 0) fail(Errc::BAD_MODEL, std::string(what) + " declares no variables");
  if (d > static_cast<std::size_t>(max_d)) {
    fail(Errc::CAP_EXCEEDED, std::string(what) + " has " + std::to_string(d) +
                                 " variables, cap is " + std::to_string(max_d));
  }
}

std::string config_key(Outcome idx, const std::vector<int>& positions) {
  std::string key(positions.size(), '0');
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (bit_of(idx, positions[j])) key[j] = '1';
  }
  return key;
}

void check_table_keys(const std::unordered_map<std::string, double>& table,
                      std::size_t arity, const std::string& owner, Errc code) {
  const std::size_t want = std::size_t{1} << arity;
  if (table.size() != want) {
    fail(code, owner + ": expected " + std::to_string(want) + " rows, found " +
                   std::to_string(table.size()));
  }
  for (const auto& [key, value] : table) {
    if (key.size() != arity ||
        key.find_first_not_of("01") != std::string::npos) {
      fail(code, owner + ": bad configuration key \"" + key + "\"");
    }
    if (!std::isfinite(value)) fail(code, owner + ": non-finite value at \"" + key + "\"");
  }
}

}  // namespace

JointDistribution bn_to_joint(const BayesNet& bn, int max_d) {
  check_model_dim(bn.nodes.size(), max_d, "bayes net");
  const int d = static_cast<int>(bn.nodes.size());

  std::unordered_map<std::string, int> index;
  std::vector<std::vector<int>> parent_pos(d);
  for (int k = 0; k < d; ++k) {
    const BayesNode& node = bn.nodes[k];
    if (node.name.empty()) fail(Errc::BAD_MODEL, "node " + std::to_string(k) + " has no name");
    if (!index.emplace(node.name, k).second) {
      fail(Errc::BAD_MODEL, "duplicate node name \"" + node.name + "\"");
    }
    for (const std::string& par : node.parents) {
      auto it = index.find(par);
      if (it == index.end() || it->second >= k) {
        fail(Errc::BAD_MODEL, "node \"" + node.name + "\" references parent \"" + par +
                                  "\" that is not declared earlier");
      }
      parent_pos[k].push_back(it->second);
    }
    check_table_keys(node.cpt, node.parents.size(), "cpt of \"" + node.name + "\"",
                     Errc::BAD_CPT);
    for (const auto& [key, value] : node.cpt) {
      if (value < 0.0 || value > 1.0) {
        fail(Errc::BAD_CPT, "cpt of \"" + node.name + "\" at \"" + key + "\" = " +
                                std::to_string(value) + " is outside [0, 1]");
      }
    }
  }

  JointDistribution out;
  out.d = d;
  out.table.resize(std::size_t{1} << d);
  for (Outcome idx = 0; idx < out.table.size(); ++idx) {
    double prob = 1.0;
    for (int k = 0; k < d && prob > 0.0; ++k) {
      double p1 = bn.nodes[k].cpt.at(config_key(idx, parent_pos[k]));
      prob *= bit_of(idx, k) ? p1 : 1.0 - p1;
    }
    out.table[idx] = prob;
  }
  out.strictly_positive =
      std::all_of(out.table.begin(), out.table.end(), [](double v) { return v > 0.0; });
  return out;
}

JointDistribution mrf_to_joint(const MarkovNet& mn, int max_d) {
  check_model_dim(mn.variables.size(), max_d, "markov net");
  const int d = static_cast<int>(mn.variables.size());

  std::unordered_map<std::string, int> index;
  for (int k = 0; k < d; ++k) {
    if (mn.variables[k].empty()) fail(Errc::BAD_MODEL, "variable " + std::to_string(k) + " has no name");
    if (!index.emplace(mn.variables[k], k).second) {
      fail(Errc::BAD_MODEL, "duplicate variable name \"" + mn.variables[k] + "\"");
    }
  }
  std::vector<std::vector<int>> scope_pos(mn.factors.size());
  for (std::size_t f = 0; f < mn.factors.size(); ++f) {
    const MrfFactor& factor = mn.factors[f];
    const std::string owner = "factor " + std::to_string(f);
    if (factor.scope.empty()) fail(Errc::BAD_MODEL, owner + " has an empty scope");
    std::vector<int> seen;
    for (const std::string& var : factor.scope) {
      auto it = index.find(var);
      if (it == index.end()) {
        fail(Errc::BAD_MODEL, owner + " references unknown variable \"" + var + "\"");
      }
      if (std::find(seen.begin(), seen.end(), it->second) != seen.end()) {
        fail(Errc::BAD_MODEL, owner + " repeats variable \"" + var + "\"");
      }
      seen.push_back(it->second);
    }
    scope_pos[f] = std::move(seen);
    check_table_keys(factor.weights, factor.scope.size(), owner, Errc::BAD_CPT);
    for (const auto& [key, value] : factor.weights) {
      if (value < 0.0) {
        fail(Errc::BAD_MODEL, owner + " has negative weight at \"" + key + "\"");
      }
    }
  }

  // Accumulate in log domain so the normalizer never overflows; zero weights
  // contribute -inf and come back as exact zeros.
  std::vector<double> logw(std::size_t{1} << d, 0.0);
  for (std::size_t f = 0; f < mn.factors.size(); ++f) {
    for (Outcome idx = 0; idx < logw.size(); ++idx) {
      double w = mn.factors[f].weights.at(config_key(idx, scope_pos[f]));
      logw[idx] += std::log(w);
    }
  }
  double top = -kInf;
  for (double v : logw) top = std::max(top, v);
  if (top == -kInf) fail(Errc::ALL_ZERO, "every configuration has zero weight");
  double z = 0.0;
  for (double v : logw) z += std::exp(v - top);
  const double log_z = top + std::log(z);

  JointDistribution out;
  out.d = d;
  out.table.resize(logw.size());
  double sum = 0.0;
  for (std::size_t idx = 0; idx < logw.size(); ++idx) {
    out.table[idx] = std::exp(logw[idx] - log_z);
    sum += out.table[idx];
  }
  for (double& v : out.table) v /= sum;
  out.strictly_positive =
      std::all_of(out.table.begin(), out.table.end(), [](double v) { return v > 0.0; });
  return out;
}

}  // namespace indepmix
