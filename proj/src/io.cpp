#include "indepmix/io.hpp"

#include <fstream>

namespace indepmix {

namespace {

using nlohmann::json;

[[noreturn]] void bad_file(const std::string& path, const std::string& what) {
  fail(Errc::BAD_FILE, path + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(Errc::BAD_FILE, where + ": missing \"" + key + "\"");
  return *it;
}

}  // namespace

json distribution_to_json(const JointDistribution& p) {
  return json{{"d", p.d}, {"probs", p.table}};
}

JointDistribution distribution_from_json(const json& j, int max_d) {
  if (!j.is_object()) fail(Errc::BAD_FILE, "distribution: expected an object");
  const json& d = need(j, "d", "distribution");
  const json& probs = need(j, "probs", "distribution");
  if (!d.is_number_integer()) fail(Errc::BAD_FILE, "distribution: \"d\" must be an integer");
  if (!probs.is_array()) fail(Errc::BAD_FILE, "distribution: \"probs\" must be an array");
  std::vector<double> table;
  table.reserve(probs.size());
  for (const json& v : probs) {
    if (!v.is_number()) fail(Errc::BAD_FILE, "distribution: non-numeric entry in \"probs\"");
    table.push_back(v.get<double>());
  }
  return make_distribution(d.get<int>(), std::move(table), max_d);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_file(path, "cannot open");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    bad_file(path, e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) bad_file(path, "cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) bad_file(path, "write failed");
}

JointDistribution read_distribution(const std::string& path, int max_d) {
  try {
    return distribution_from_json(read_json_file(path), max_d);
  } catch (const Error& e) {
    if (e.code() == Errc::BAD_FILE) throw;
    throw Error(e.code(), path + ": " + e.what());
  }
}

void write_distribution(const std::string& path, const JointDistribution& p) {
  write_json_file(path, distribution_to_json(p));
}

BayesNet bayes_net_from_json(const json& j) {
  if (!j.is_object()) fail(Errc::BAD_FILE, "bayes net: expected an object");
  const json& nodes = need(j, "nodes", "bayes net");
  if (!nodes.is_array()) fail(Errc::BAD_FILE, "bayes net: \"nodes\" must be an array");
  BayesNet bn;
  for (const json& nj : nodes) {
    if (!nj.is_object()) fail(Errc::BAD_FILE, "bayes net: node entries must be objects");
    BayesNode node;
    node.name = need(nj, "name", "bayes net node").get<std::string>();
    if (auto it = nj.find("parents"); it != nj.end()) {
      for (const json& pj : *it) node.parents.push_back(pj.get<std::string>());
    }
    const json& cpt = need(nj, "cpt", "node \"" + node.name + "\"");
    if (!cpt.is_object()) fail(Errc::BAD_FILE, "node \"" + node.name + "\": cpt must be an object");
    for (const auto& [key, value] : cpt.items()) {
      if (!value.is_number()) {
        fail(Errc::BAD_FILE, "node \"" + node.name + "\": non-numeric cpt entry");
      }
      node.cpt[key] = value.get<double>();
    }
    bn.nodes.push_back(std::move(node));
  }
  return bn;
}

MarkovNet markov_net_from_json(const json& j) {
  if (!j.is_object()) fail(Errc::BAD_FILE, "markov net: expected an object");
  const json& vars = need(j, "variables", "markov net");
  const json& factors = need(j, "factors", "markov net");
  if (!vars.is_array()) fail(Errc::BAD_FILE, "markov net: \"variables\" must be an array");
  if (!factors.is_array()) fail(Errc::BAD_FILE, "markov net: \"factors\" must be an array");
  MarkovNet mn;
  for (const json& vj : vars) mn.variables.push_back(vj.get<std::string>());
  for (const json& fj : factors) {
    if (!fj.is_object()) fail(Errc::BAD_FILE, "markov net: factor entries must be objects");
    MrfFactor factor;
    for (const json& sj : need(fj, "scope", "markov net factor")) {
      factor.scope.push_back(sj.get<std::string>());
    }
    const json& weights = need(fj, "weights", "markov net factor");
    if (!weights.is_object()) fail(Errc::BAD_FILE, "markov net: factor weights must be an object");
    for (const auto& [key, value] : weights.items()) {
      if (!value.is_number()) fail(Errc::BAD_FILE, "markov net: non-numeric factor weight");
      factor.weights[key] = value.get<double>();
    }
    mn.factors.push_back(std::move(factor));
  }
  return mn;
}

BayesNet read_bayes_net(const std::string& path) {
  try {
    return bayes_net_from_json(read_json_file(path));
  } catch (const Error& e) {
    if (e.code() == Errc::BAD_FILE) throw;
    throw Error(e.code(), path + ": " + e.what());
  }
}

MarkovNet read_markov_net(const std::string& path) {
  try {
    return markov_net_from_json(read_json_file(path));
  } catch (const Error& e) {
    if (e.code() == Errc::BAD_FILE) throw;
    throw Error(e.code(), path + ": " + e.what());
  }
}

json report_to_json(const SolverReport& rep) {
  const Decomposition& dec = rep.decomposition;
  json co = json::array();
  for (const ProductBernoulli& pb : dec.co_maximizers) co.push_back(pb.q);
  json counts = json::object();
  for (const auto& [omega, count] : rep.vertex_counts) {
    counts[std::to_string(omega)] = count;
  }
  return json{
      {"lambda", dec.lambda},
      {"q_star", dec.q_star.q},
      {"achieving_outcome", dec.achieving_outcome},
      {"residual", dec.residual ? distribution_to_json(*dec.residual) : json(nullptr)},
      {"co_maximizers", co},
      {"method", method_name(rep.method)},
      {"wall_time_s", rep.wall_time_s},
      {"vertex_counts", counts},
  };
}

}  // namespace indepmix
