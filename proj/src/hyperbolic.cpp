#include "inquest/hyperbolic.hpp"

#include "inquest/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace inquest::hyperbolic {

Scalar arcosh(Scalar x) {
  if (x < 1.0) x = 1.0;
  return std::log(x + std::sqrt(x * x - 1.0));
}

Vector EmbeddingTable::point(int node) const {
  if (node < 0 || node >= points.rows())
    throw TaxonomyError("embedding table: unknown node " + std::to_string(node));
  return points.row(node).transpose();
}

std::uint64_t EmbeddingTable::content_hash() const {
  std::string bytes = serialize();
  return fnv1a(bytes);
}

std::string EmbeddingTable::serialize() const {
  io::Writer w;
  w.u32(static_cast<std::uint32_t>(dim));
  w.u64(taxonomy_hash);
  w.mat(points);
  return w.take();
}

EmbeddingTable EmbeddingTable::deserialize(std::string_view bytes) {
  io::Reader r(bytes);
  EmbeddingTable t;
  t.dim = static_cast<int>(r.u32());
  t.taxonomy_hash = r.u64();
  t.points = r.mat();
  return t;
}

std::vector<std::pair<int, int>> parent_child_pairs(const taxonomy::ActionTree& tree) {
  std::vector<std::pair<int, int>> pairs;
  for (const auto& n : tree.nodes())
    for (int c : n.children) pairs.emplace_back(n.id, c);
  return pairs;
}

std::vector<std::pair<int, int>> positive_pairs(const taxonomy::ActionTree& tree) {
  std::vector<std::pair<int, int>> pairs = parent_child_pairs(tree);
  auto add_siblings = [&pairs](const std::vector<int>& group) {
    for (size_t i = 0; i < group.size(); ++i)
      for (size_t j = i + 1; j < group.size(); ++j) pairs.emplace_back(group[i], group[j]);
  };
  add_siblings(tree.roots());
  for (const auto& n : tree.nodes())
    if (!n.children.empty()) add_siblings(n.children);
  for (auto& [a, b] : pairs)
    if (a > b) std::swap(a, b);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

Scalar nll_loss(const EmbeddingTable& table, const std::vector<std::pair<int, int>>& positives,
                const std::vector<std::vector<int>>& negatives) {
  if (positives.size() != negatives.size())
    throw std::invalid_argument("nll_loss: positives and negative sets must align");
  Scalar loss = 0.0;
  for (size_t i = 0; i < positives.size(); ++i) {
    if (negatives[i].empty()) throw std::invalid_argument("nll_loss: empty negative set");
    const auto [u, v] = positives[i];
    const Scalar d_pos = poincare_distance(table.points.row(u), table.points.row(v));
    // log-sum-exp over {v} + N(u), stabilized by the smallest distance
    Scalar min_d = d_pos;
    std::vector<Scalar> dists{d_pos};
    for (int neg : negatives[i]) {
      Scalar d = poincare_distance(table.points.row(u), table.points.row(neg));
      dists.push_back(d);
      min_d = std::min(min_d, d);
    }
    Scalar denom = 0.0;
    for (Scalar d : dists) denom += std::exp(-(d - min_d));
    loss += (d_pos - min_d) + std::log(denom);
  }
  return loss;
}

namespace {

void project_to_ball(Eigen::Ref<Eigen::RowVectorXd> x) {
  const Scalar max_norm = 1.0 - kBallEpsilon;
  const Scalar norm = x.norm();
  if (norm > max_norm) x *= max_norm / norm;
}

// Euclidean gradients of d(u,v) wrt u and v (Poincare closed form).
struct DistanceGrad {
  Scalar d;
  Eigen::RowVectorXd du, dv;
};

DistanceGrad distance_with_grad(const Eigen::RowVectorXd& u, const Eigen::RowVectorXd& v) {
  DistanceGrad g;
  const Scalar uu = u.squaredNorm();
  const Scalar vv = v.squaredNorm();
  const Scalar uv = u.dot(v);
  const Scalar alpha = std::max<Scalar>(1.0 - uu, 1e-12);
  const Scalar beta = std::max<Scalar>(1.0 - vv, 1e-12);
  Scalar gamma = 1.0 + 2.0 * (uu - 2.0 * uv + vv) / (alpha * beta);
  if (gamma < 1.0) gamma = 1.0;
  g.d = arcosh(gamma);
  if (gamma <= 1.0 + 1e-15) {
    g.du = Eigen::RowVectorXd::Zero(u.size());
    g.dv = Eigen::RowVectorXd::Zero(v.size());
    return g;
  }
  const Scalar denom = std::sqrt(gamma * gamma - 1.0);
  const Scalar cu = 4.0 / (beta * denom);
  const Scalar cv = 4.0 / (alpha * denom);
  g.du = cu * (((vv - 2.0 * uv + 1.0) / (alpha * alpha)) * u - v / alpha);
  g.dv = cv * (((uu - 2.0 * uv + 1.0) / (beta * beta)) * v - u / beta);
  return g;
}

}  // namespace

EmbeddingTable train_embeddings(const taxonomy::ActionTree& tree, const PoincareConfig& config,
                                PoincareTrainReport* report) {
  const int n = tree.size();
  EmbeddingTable table;
  table.dim = config.dim;
  table.taxonomy_hash = tree.hash();

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<Scalar> init(-config.init_range, config.init_range);
  table.points.resize(n, config.dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < config.dim; ++j) table.points(i, j) = init(rng);

  // Directed training pairs: both orientations of every positive pair.
  const auto undirected = positive_pairs(tree);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(2 * undirected.size());
  for (auto [a, b] : undirected) {
    pairs.emplace_back(a, b);
    pairs.emplace_back(b, a);
  }

  // Neighbor sets define what may not be drawn as a negative for u.
  std::vector<std::set<int>> neighbors(static_cast<size_t>(n));
  for (auto [a, b] : undirected) {
    neighbors[static_cast<size_t>(a)].insert(b);
    neighbors[static_cast<size_t>(b)].insert(a);
  }
  std::vector<std::vector<int>> non_neighbors(static_cast<size_t>(n));
  for (int u = 0; u < n; ++u)
    for (int w = 0; w < n; ++w)
      if (w != u && !neighbors[static_cast<size_t>(u)].count(w))
        non_neighbors[static_cast<size_t>(u)].push_back(w);

  auto sample_negatives = [&](int u, std::mt19937_64& gen) {
    const auto& pool = non_neighbors[static_cast<size_t>(u)];
    std::vector<int> negs;
    if (pool.empty()) return negs;
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    negs.reserve(static_cast<size_t>(config.negatives));
    for (int k = 0; k < config.negatives; ++k) negs.push_back(pool[pick(gen)]);
    return negs;
  };

  // Fixed negative draw for loss reporting, so the decrease is measured on a
  // stable objective.
  std::mt19937_64 report_rng(derive_seed(config.seed, 0xf1));
  std::vector<std::vector<int>> report_negs;
  report_negs.reserve(pairs.size());
  for (auto [u, v] : pairs) {
    auto negs = sample_negatives(u, report_rng);
    if (negs.empty()) negs.push_back(v);
    report_negs.push_back(std::move(negs));
  }

  const Scalar initial_loss = nll_loss(table, pairs, report_negs);

  std::vector<size_t> order(pairs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<Scalar> epoch_losses;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const Scalar lr =
        epoch < config.burn_in_epochs ? config.lr * config.burn_in_scale : config.lr;
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t idx : order) {
      const auto [u, v] = pairs[idx];
      std::vector<int> negs = sample_negatives(u, rng);
      if (negs.empty()) continue;

      // Candidates: the positive then the negatives. Softmax over -distance.
      std::vector<int> cand{v};
      cand.insert(cand.end(), negs.begin(), negs.end());
      Eigen::RowVectorXd pu = table.points.row(u);
      std::vector<DistanceGrad> grads;
      grads.reserve(cand.size());
      Scalar min_d = std::numeric_limits<Scalar>::max();
      for (int c : cand) {
        grads.push_back(distance_with_grad(pu, table.points.row(c)));
        min_d = std::min(min_d, grads.back().d);
      }
      Scalar z = 0.0;
      for (auto& g : grads) z += std::exp(-(g.d - min_d));
      // dL/dd(u, c) = [c == v] - softmax(c)
      Eigen::RowVectorXd du = Eigen::RowVectorXd::Zero(config.dim);
      std::vector<Scalar> coeff(cand.size());
      for (size_t c = 0; c < cand.size(); ++c) {
        const Scalar p = std::exp(-(grads[c].d - min_d)) / z;
        coeff[c] = (c == 0 ? 1.0 : 0.0) - p;
        du += coeff[c] * grads[c].du;
      }
      // Riemannian scaling ((1-|x|^2)^2)/4, then project back into the ball.
      auto riemannian_step = [&](int node, const Eigen::RowVectorXd& egrad) {
        Eigen::RowVectorXd x = table.points.row(node);
        const Scalar scale = (1.0 - x.squaredNorm());
        x -= lr * (scale * scale / 4.0) * egrad;
        project_to_ball(x);
        table.points.row(node) = x;
      };
      for (size_t c = 0; c < cand.size(); ++c)
        riemannian_step(cand[c], coeff[c] * grads[c].dv);
      riemannian_step(u, du);
    }
    if (report) epoch_losses.push_back(nll_loss(table, pairs, report_negs));
  }

  if (report) {
    report->epoch_loss = std::move(epoch_losses);
    report->initial_loss = initial_loss;
    report->final_loss = nll_loss(table, pairs, report_negs);
  }
  return table;
}

Vector action_features(const EmbeddingTable& table, const taxonomy::ActionPath& path) {
  if (path.nodes.empty() || path.nodes.size() > 3)
    throw TaxonomyError("action_features: path must have 1..3 nodes");
  Vector out = Vector::Zero(3 * table.dim);
  for (size_t i = 0; i < path.nodes.size(); ++i)
    out.segment(static_cast<Eigen::Index>(i) * table.dim, table.dim) = table.point(path.nodes[i]);
  return out;
}

}  // namespace inquest::hyperbolic
