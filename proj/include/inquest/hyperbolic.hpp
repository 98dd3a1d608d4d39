#pragma once

#include "inquest/common.hpp"
#include "inquest/taxonomy.hpp"

#include <string>
#include <utility>
#include <vector>

namespace inquest::hyperbolic {

// Points live strictly inside the unit ball: every update re-projects to
// norm <= 1 - kBallEpsilon.
inline constexpr Scalar kBallEpsilon = 1e-5;

Scalar arcosh(Scalar x);

// d(u,v) = arcosh(1 + 2*|u-v|^2 / ((1-|u|^2)(1-|v|^2))).
// DataError when either norm is >= 1.
template <typename DU, typename DV>
Scalar poincare_distance(const Eigen::MatrixBase<DU>& u, const Eigen::MatrixBase<DV>& v) {
  const Scalar uu = u.squaredNorm();
  const Scalar vv = v.squaredNorm();
  if (uu >= 1.0 || vv >= 1.0) throw DataError("poincare_distance: point outside the open unit ball");
  const Scalar diff = (u - v).squaredNorm();
  Scalar gamma = 1.0 + 2.0 * diff / ((1.0 - uu) * (1.0 - vv));
  if (gamma < 1.0) gamma = 1.0;  // guards rounding
  return arcosh(gamma);
}

struct PoincareConfig {
  int dim = 8;
  int epochs = 500;
  int negatives = 10;       // negatives sampled per positive pair
  Scalar lr = 0.3;
  int burn_in_epochs = 10;  // epochs at lr * burn_in_scale
  Scalar burn_in_scale = 0.1;
  Scalar init_range = 1e-3;
  std::uint64_t seed = 0;
};

struct EmbeddingTable {
  int dim = 0;
  Matrix points;  // node count x dim
  std::uint64_t taxonomy_hash = 0;

  Vector point(int node) const;
  std::uint64_t content_hash() const;
  std::string serialize() const;
  static EmbeddingTable deserialize(std::string_view bytes);
};

// Positive pairs of the hierarchy: parent-child edges plus sibling pairs
// (same parent; the level-1 roots count as siblings of each other).
// Unordered, each pair once, lexicographic.
std::vector<std::pair<int, int>> positive_pairs(const taxonomy::ActionTree& tree);
std::vector<std::pair<int, int>> parent_child_pairs(const taxonomy::ActionTree& tree);

// -sum over pairs of log( exp(-d(u,v)) / sum_{v' in N(u) + {v}} exp(-d(u,v')) ).
// negatives[i] holds N(u) for positives[i]; empty set -> invalid_argument.
Scalar nll_loss(const EmbeddingTable& table, const std::vector<std::pair<int, int>>& positives,
                const std::vector<std::vector<int>>& negatives);

// Riemannian SGD with uniform negative sampling over non-neighbors.
// Deterministic given config.seed.
struct PoincareTrainReport {
  std::vector<Scalar> epoch_loss;
  Scalar initial_loss = 0.0;
  Scalar final_loss = 0.0;
};
EmbeddingTable train_embeddings(const taxonomy::ActionTree& tree, const PoincareConfig& config,
                                PoincareTrainReport* report = nullptr);

// Concatenated node embeddings of the path, zero-padded to 3*dim.
Vector action_features(const EmbeddingTable& table, const taxonomy::ActionPath& path);

}  // namespace inquest::hyperbolic
