#pragma once

#include <string>

#include "json.hpp"

#include "indepmix/dist.hpp"
#include "indepmix/models.hpp"
#include "indepmix/solver.hpp"

namespace indepmix {

// Joint table file format: {"d": <int>, "probs": [<2^d numbers>]}, index order
// of the probs array matching the Outcome encoding (coordinate 1 = least
// significant bit).
nlohmann::json distribution_to_json(const JointDistribution& p);
JointDistribution distribution_from_json(const nlohmann::json& j, int max_d = kDefaultMaxDim);
JointDistribution read_distribution(const std::string& path, int max_d = kDefaultMaxDim);
void write_distribution(const std::string& path, const JointDistribution& p);

BayesNet bayes_net_from_json(const nlohmann::json& j);
MarkovNet markov_net_from_json(const nlohmann::json& j);
BayesNet read_bayes_net(const std::string& path);
MarkovNet read_markov_net(const std::string& path);

// Report format: lambda, q_star, achieving_outcome, residual (a distribution
// object or null), co_maximizers, method, wall_time_s, vertex_counts (outcome
// index, as a string key, to deduplicated vertex count).
nlohmann::json report_to_json(const SolverReport& rep);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace indepmix
