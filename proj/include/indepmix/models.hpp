#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "indepmix/dist.hpp"

namespace indepmix {

// Bayesian network over binary variables. Nodes are declared parents-first;
// variable k (declaration order, 0-based) maps to coordinate k+1 of the joint.
// cpt maps a parent configuration, written as a bit string in declared parent
// order, to P(node = 1 | parents). Root nodes use the single key "".
struct BayesNode {
  std::string name;
  std::vector<std::string> parents;
  std::unordered_map<std::string, double> cpt;
};

struct BayesNet {
  std::vector<BayesNode> nodes;
};

// Binary Markov random field with nonnegative factor tables. weights maps a
// scope configuration, written as a bit string in scope order, to the factor
// value.
struct MrfFactor {
  std::vector<std::string> scope;
  std::unordered_map<std::string, double> weights;
};

struct MarkovNet {
  std::vector<std::string> variables;
  std::vector<MrfFactor> factors;
};

// Expands the network into its full joint table. The product of CPT rows sums
// to 1 by construction; no renormalization is applied.
JointDistribution bn_to_joint(const BayesNet& bn, int max_d = kDefaultMaxDim);

// Normalizes the product of factors by the explicit sum over all 2^d
// configurations, in log domain. Invariant under rescaling any factor by a
// positive constant. ALL_ZERO when every configuration has weight zero.
JointDistribution mrf_to_joint(const MarkovNet& mn, int max_d = kDefaultMaxDim);

}  // namespace indepmix
