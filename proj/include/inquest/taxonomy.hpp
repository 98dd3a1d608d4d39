#pragma once

#include "inquest/common.hpp"

#include <optional>
#include <string>
#include <vector>

namespace inquest::taxonomy {

// One node of the three-level dialogue-act tree. Level-1 nodes have no
// parent; level-2/3 nodes have exactly one parent at the level above.
struct ActionNode {
  int id = -1;
  int level = 0;  // 1..3
  std::string label;
  std::optional<int> parent;
  std::vector<int> children;  // ordered by id
};

class ActionTree {
 public:
  ActionTree() = default;
  // Validates level/parent invariants; ids must be 0..n-1 in node order.
  explicit ActionTree(std::vector<ActionNode> nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<ActionNode>& nodes() const { return nodes_; }
  const ActionNode& node(int id) const;                 // TaxonomyError on unknown id
  const std::vector<int>& children(int id) const;       // empty for leaves
  const std::vector<int>& roots() const { return roots_; }
  bool is_leaf(int id) const { return children(id).empty(); }
  int level_count(int level) const;
  int find(const std::string& label) const;             // -1 when absent
  int max_branching() const;

  // Canonical content hash, recorded in checkpoint manifests.
  std::uint64_t hash() const;

 private:
  std::vector<ActionNode> nodes_;
  std::vector<int> roots_;
};

// A root-to-somewhere selection: 1..3 node ids, level-1 first, each step a
// parent->child edge. "Full" when the last node has no children.
struct ActionPath {
  std::vector<int> nodes;
};

ActionTree builtin_tree();

bool validate_path(const ActionTree& tree, const ActionPath& path);  // never throws
bool is_full_path(const ActionTree& tree, const ActionPath& path);
std::vector<ActionPath> enumerate_full_paths(const ActionTree& tree);

// Taxonomy file format: one node per line, tab separated
//   id <TAB> level <TAB> parent-id (-1 for none) <TAB> label
// Lines starting with '#' are comments. The built-in tree written by
// save_tree is the reference serialization.
ActionTree load_tree(const std::string& path);
void save_tree(const ActionTree& tree, const std::string& path);

// Appraisal vocabulary: nine discrete judgments of the interlocutor's last
// response. Indices are stable across runs and serialization.
inline constexpr int kAppraisalCount = 9;

struct Appraisal {
  int index = -1;
  const std::string& label() const;
};

const std::vector<std::string>& appraisal_labels();
int appraisal_index(const std::string& label);  // -1 when unknown
Vector appraisal_onehot(int index);             // length 9; DimensionError on bad index

}  // namespace inquest::taxonomy
